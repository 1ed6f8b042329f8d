"""Prime-sum diagnostics: accelerated vs direct log-sums and the divergent pieces."""
import argparse

from ramellin import primes as nt


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=10**7)
    args = ap.parse_args(argv)

    tables = nt.cached_tables(args.limit)
    print(f"pi({args.limit}) = {nt.prime_count(tables, args.limit)}")
    for s, K in ((3.0, 30), (2.0, 40), (1.5, 60)):
        direct = nt.prime_log_sum_direct(tables, s, args.limit)
        mob = nt.prime_log_sum_mobius(s, K)
        print(f"s={s}: mobius(K={K}) {mob.value:.15f}  direct {direct.value:.15f}  "
              f"diff {abs(mob.value - direct.value):.2e}  direct tail <= {direct.tail_estimate:.2e}")

    for n in range(0, 4):
        print(f"c_{n} = {nt.c_n(n).value!r}")
    for n in (0, 1, 2):
        for K in (10, 100, 1000):
            r = nt.a_n_formal(n, K)
            shown = r.notes if r.divergent else repr(r.value)
            print(f"A_{n} Moebius piece, K={K}: {shown}")

    lhs = nt.theorem22_lhs(tables, min(args.limit, 10**6))
    print("kernel-weighted prime sum:", lhs.notes)
    div = nt.divergence_diagnostic(tables, 1, min(args.limit, 10**6))
    print("sum log(p) p:", div.notes)
    print(f"growth exponent vs N: {div.growth_exponent:.3f}")


if __name__ == "__main__":
    main()
