"""Run a verification suite and write JSON and CSV reports into a directory.

    python scripts/run_suite.py --suite all --out-dir results/
"""
import argparse
import pathlib
import sys
import time

from ramellin import identities as ids
from ramellin.mellin import QuadratureConfig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suite", choices=ids.SUITES, default="all")
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--tighten", type=float, default=1.0, help="divide quadrature tolerances by this")
    args = ap.parse_args(argv)

    cfg = QuadratureConfig().tightened(args.tighten)
    start = time.perf_counter()
    reports = ids.verify_suite(args.suite, cfg)
    elapsed = time.perf_counter() - start

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.suite}.json").write_text(ids.reports_to_json(args.suite, reports))
    (out / f"{args.suite}.csv").write_text(ids.reports_to_csv(reports))

    for r in reports:
        err = "" if r.rel_err != r.rel_err else f"{r.rel_err:.2e}"
        print(f"{r.status.value:<11} {r.id:<24} {err:>9}")
    summary = ids.summarize(reports)
    print(f"{summary} in {elapsed:.2f} s -> {out}/")
    return 1 if summary["fail"] else 0


if __name__ == "__main__":
    sys.exit(main())
