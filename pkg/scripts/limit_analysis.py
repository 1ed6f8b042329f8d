"""Probe the s -> 0 behaviour behind the log-weighted zeta integral.

Prints the two terms of the split derivative for shrinking s, the
extrapolated limit of the regular term, the pole order of the other term,
and the Laurent coefficients of zeta(2-2s) Gamma(s) cos(pi s/2) at 0.
"""
import math

from ramellin import identities as ids
from ramellin.mellin import mellin_transform_shifted
from ramellin.series import Parity, SeriesKernel, Zeta


def main():
    rec = ids.appendix_a1_limit()
    print(f"{'s':>8} {'term1':>16} {'term2':>16} {'s*term1':>12}")
    for s, t1, t2 in zip(rec.s_values, rec.term1, rec.term2):
        print(f"{s:8.1e} {t1:16.8f} {t2:16.12f} {s * t1:12.8f}")
    print(f"term2 extrapolated: {rec.term2_extrapolated!r}  (pi^4/24 = {math.pi**4 / 24!r})")
    print(f"term1 growth exponent: {rec.term1_growth_exponent:.4f}")

    pole = ids.pole_expansion()
    print("Laurent coefficients c_-1, c_0, c_1:", pole.coeffs, f"[{pole.notes}]")

    direct = mellin_transform_shifted(SeriesKernel(Zeta(), Parity.EVEN), 1.0, log_weight=True, inverse_x=True)
    print("direct integral:", direct.status, "-", direct.diagnostic)


if __name__ == "__main__":
    main()
