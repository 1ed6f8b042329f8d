"""Write CSV plot data for the zeta, sine and binomial kernels."""
import argparse
import pathlib

import numpy as np

from ramellin.series import Binomial, Parity, Power, SeriesKernel, Zeta, kernel_table, table_csv

KERNELS = {
    "zeta_odd": SeriesKernel(Zeta(), Parity.ODD),
    "zeta_even": SeriesKernel(Zeta(), Parity.EVEN),
    "sine": SeriesKernel(Power(1.0), Parity.ODD),
    "sine_p3_k2": SeriesKernel(Power(1.0), Parity.ODD, 3.0, 2.0),
    "binomial_full": SeriesKernel(Binomial(1.0, 2.0), Parity.FULL),
    "binomial_odd": SeriesKernel(Binomial(2.0, 3.0), Parity.ODD),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="plot_data")
    ap.add_argument("--x-max", type=float, default=50.0)
    ap.add_argument("--num", type=int, default=1001)
    args = ap.parse_args(argv)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(0.0, args.x_max, args.num)
    for name, kernel in KERNELS.items():
        (out / f"{name}.csv").write_text(table_csv(kernel_table(kernel, xs)))

    print(f"wrote {len(KERNELS)} files to {out}/")


if __name__ == "__main__":
    main()
