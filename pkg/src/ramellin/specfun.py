"""Scalar special functions: gamma family, digamma, Riemann and Hurwitz zeta.

Every evaluator returns an :class:`EvalResult` so that domain problems travel
as flags instead of exceptions.  Nothing here depends on an external math
library; ``math`` is used only for elementary functions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

EPS = 2.220446049250313e-16


class Flag(str, enum.Enum):
    CANCELLATION = "CANCELLATION"
    TRUNCATED = "TRUNCATED"
    NEAR_POLE = "NEAR_POLE"
    OUT_OF_DOMAIN = "OUT_OF_DOMAIN"


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_err_estimate: float = 0.0
    flags: frozenset = field(default_factory=frozenset)

    @property
    def ok(self) -> bool:
        return Flag.OUT_OF_DOMAIN not in self.flags

    def __float__(self) -> float:
        return float(self.value)


def out_of_domain(value: float = math.nan) -> EvalResult:
    return EvalResult(value, math.nan, frozenset({Flag.OUT_OF_DOMAIN}))


def _with_flags(value, err, *flags) -> EvalResult:
    return EvalResult(value, err, frozenset(f for f in flags if f is not None))


# --------------------------------------------------------------------------
# Bernoulli numbers B_0..B_30 (exact), via the Akiyama-Tanigawa recurrence.

def _bernoulli_table(n_max: int) -> list[Fraction]:
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    out[1] = Fraction(-1, 2)
    return out


BERNOULLI = _bernoulli_table(30)
# B_{2j} / (2j)!  for j = 1..13  (Euler-Maclaurin correction weights)
_EM_WEIGHTS = [float(BERNOULLI[2 * j] / math.factorial(2 * j)) for j in range(1, 14)]
_EM_N = 20
_EM_J = 12  # corrections through B_24


# --------------------------------------------------------------------------
# trig with exact argument reduction in units of pi

def sinpi(x: float) -> float:
    n = round(2.0 * x)
    r = x - 0.5 * n
    q = n % 4
    if q == 0:
        return math.sin(math.pi * r)
    if q == 1:
        return math.cos(math.pi * r)
    if q == 2:
        return -math.sin(math.pi * r)
    return -math.cos(math.pi * r)


def cospi(x: float) -> float:
    return sinpi(x + 0.5)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


# --------------------------------------------------------------------------
# Gamma.  Lanczos-type approximation with g = 671/128 and 14 coefficients
# (the set used for gammln in Numerical Recipes, 3rd ed.); relative error of
# the series is below 3e-15 on x >= 1/2, and the constant term keeps the bias
# at ~3e-15 as x grows.

_LANCZOS_G = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_sum(x: float) -> float:
    acc = _LANCZOS_C0
    for i, c in enumerate(_LANCZOS):
        acc += c / (x + 1.0 + i)
    return acc


def _gamma_right(x: float) -> float:
    t = x + _LANCZOS_G
    half = t ** (0.5 * (x + 0.5)) * math.exp(-0.5 * t)  # squared form cannot overflow early
    return (half * (_SQRT_2PI * _lanczos_sum(x) / x)) * half


def gamma(x: float) -> EvalResult:
    x = float(x)
    if math.isnan(x) or _is_nonpositive_integer(x):
        return out_of_domain()
    if x > 171.62:
        return EvalResult(math.inf, math.nan, frozenset({Flag.OUT_OF_DOMAIN}))
    if x == math.floor(x):
        v = float(math.factorial(int(x) - 1))
        return EvalResult(v, v * EPS)
    near = None
    if x < 0.5:
        s = sinpi(x)
        if x < 0 and abs(x - round(x)) < 1e-8:
            near = Flag.NEAR_POLE
        if 1.0 - x > 171.0:
            # Gamma(1 - x) overflows although the quotient is representable
            mag = math.exp(math.log(math.pi / abs(s)) - log_gamma(1.0 - x).value)
            value = math.copysign(mag, s)
        else:
            value = math.pi / (s * _gamma_right(1.0 - x))
    else:
        value = _gamma_right(x)
    if not math.isfinite(value):
        return EvalResult(value, math.nan, frozenset({Flag.OUT_OF_DOMAIN}))
    rel = 4 * EPS * (4.0 + abs(x))
    return _with_flags(value, abs(value) * rel, near)


def log_gamma(x: float) -> EvalResult:
    """log Gamma(x) for x > 0, overflow-free."""
    x = float(x)
    if not x > 0:
        return out_of_domain()
    if x < 0.5:
        value = math.log(math.pi / sinpi(x)) - log_gamma(1.0 - x).value
    else:
        t = x + _LANCZOS_G
        value = _LOG_SQRT_2PI + (x + 0.5) * math.log(t) - t + math.log(_lanczos_sum(x) / x)
    err = 4 * EPS * (1.0 + abs(x * math.log(x + 8.0)))
    return EvalResult(value, err)


# --------------------------------------------------------------------------
# Digamma: recurrence up to x >= 10, then the Stirling-type asymptotic series.

_PSI_COEFFS = [float(BERNOULLI[2 * j] / (2 * j)) for j in range(1, 9)]


def digamma(x: float) -> EvalResult:
    x = float(x)
    if math.isnan(x) or _is_nonpositive_integer(x):
        return out_of_domain()
    if x < 0:
        refl = digamma(1.0 - x).value
        value = refl - math.pi * cospi(x) / sinpi(x)
        if not math.isfinite(value):
            return out_of_domain(value)
        near = Flag.NEAR_POLE if abs(x - round(x)) < 1e-8 else None
        return _with_flags(value, 16 * EPS * (abs(value) + abs(refl)) * (1 + abs(x)), near)
    parts = []
    while x < 10.0:
        parts.append(-1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_PSI_COEFFS):
        series = series * inv2 + c
    parts.extend([math.log(x), -0.5 / x, -series * inv2])
    value = math.fsum(parts)
    if not math.isfinite(value):  # -1/x overflowed for subnormal x
        return out_of_domain(value)
    scale = max(abs(p) for p in parts)
    return EvalResult(value, 8 * EPS * scale)


# --------------------------------------------------------------------------
# Hurwitz / Riemann zeta via Euler-Maclaurin, carried as a 3-jet in s so the
# first and second s-derivatives come from the same expansion.

def _jet_mul(a, b):
    return (
        a[0] * b[0],
        a[1] * b[0] + a[0] * b[1],
        a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
    )


def _power_jet(base: float, s: float):
    """Jet of base**(-s) with respect to s."""
    v = base ** (-s)
    lg = math.log(base)
    return (v, -lg * v, lg * lg * v)


def _em_zeta_jet(s: float, a: float):
    """(jet, err) for zeta(s, a) by Euler-Maclaurin with N=20 and B_2..B_24."""
    cols = ([], [], [])
    for n in range(_EM_N):
        j = _power_jet(n + a, s)
        for r in range(3):
            cols[r].append(j[r])
    q = _EM_N + a
    # q**(1-s) / (s-1)
    u = _power_jet(q, s - 1.0)
    d = s - 1.0
    w = (1.0 / d, -1.0 / d**2, 2.0 / d**3)
    head = _jet_mul(u, w)
    half = _power_jet(q, s)
    for r in range(3):
        cols[r].append(head[r])
        cols[r].append(0.5 * half[r])
    last = 0.0
    poly = (1.0, 0.0, 0.0)
    qpow = _power_jet(q, s + 1.0)  # q**(-s-1); shifts by q**-2 each step
    for j in range(1, _EM_J + 1):
        # poly = (s)(s+1)...(s+2j-2)
        if j == 1:
            poly = (s, 1.0, 0.0)
        else:
            poly = _jet_mul(poly, (s + 2 * j - 3, 1.0, 0.0))
            poly = _jet_mul(poly, (s + 2 * j - 2, 1.0, 0.0))
        if j > 1:
            qpow = tuple(v / (q * q) for v in qpow)
        term = _jet_mul(poly, qpow)
        wgt = _EM_WEIGHTS[j - 1]
        for r in range(3):
            cols[r].append(wgt * term[r])
        last = abs(wgt * term[0])
    jet = tuple(math.fsum(c) for c in cols)
    rounding = tuple(4 * EPS * math.fsum(abs(x) for x in c) for c in cols)
    return jet, last, rounding


def riemann_zeta(s: float) -> EvalResult:
    s = float(s)
    if math.isnan(s) or s == 1.0:
        return out_of_domain()
    if s < -0.5:
        return _zeta_reflected(s)
    jet, last, rnd = _em_zeta_jet(s, 1.0)
    near = Flag.NEAR_POLE if abs(s - 1.0) < 1e-6 else None
    return _with_flags(jet[0], last + rnd[0], near)


def _zeta_reflected(s: float) -> EvalResult:
    # functional equation; the direct expansion cancels near the zero at s=-2
    if s == math.floor(s) and s % 2 == 0:
        return EvalResult(0.0, 0.0)
    z1 = riemann_zeta(1.0 - s)
    g = gamma(1.0 - s)
    value = 2.0**s * math.pi ** (s - 1.0) * sinpi(0.5 * s) * g.value * z1.value
    rel = z1.abs_err_estimate / abs(z1.value) + g.abs_err_estimate / abs(g.value) + 8 * EPS
    return EvalResult(value, abs(value) * rel)


def zeta_derivative(s: float, order: int = 1) -> EvalResult:
    """d^order/ds^order zeta(s), order in {1, 2}, by the differentiated expansion."""
    s = float(s)
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if math.isnan(s) or s == 1.0:
        return out_of_domain()
    jet, last, rnd = _em_zeta_jet(s, 1.0)
    near = Flag.NEAR_POLE if abs(s - 1.0) < 1e-6 else None
    scale = math.log(_EM_N + 1.0) ** order
    return _with_flags(jet[order], last * scale + rnd[order], near)


def hurwitz_zeta(c: float, a: float) -> EvalResult:
    c, a = float(c), float(a)
    if not (c > 1.0 and a > 0.0):
        return out_of_domain()
    v, err = _hurwitz_cached(c, a)
    return EvalResult(v, err)


@lru_cache(maxsize=8192)
def _hurwitz_cached(c: float, a: float) -> tuple[float, float]:
    jet, last, rnd = _em_zeta_jet(c, a)
    return jet[0], last + rnd[0]


# --------------------------------------------------------------------------

def pochhammer(c: float, m: int) -> EvalResult:
    """Rising factorial (c)_m = Gamma(c+m)/Gamma(c)."""
    if m < 0 or int(m) != m:
        return out_of_domain()
    m = int(m)
    if m <= 30:
        value = math.prod(c + i for i in range(m)) if m else 1.0
        return EvalResult(value, abs(value) * (m + 1) * EPS)
    if not c > 0:
        return out_of_domain()
    lg1, lg0 = log_gamma(c + m), log_gamma(c)
    value = math.exp(lg1.value - lg0.value)
    return EvalResult(value, abs(value) * (lg1.abs_err_estimate + lg0.abs_err_estimate))


def k_gamma(s: float, k: float) -> EvalResult:
    """Gamma_k(s) = k**(s/k - 1) * Gamma(s/k)."""
    if not (s > 0 and k > 0):
        return out_of_domain()
    g = gamma(s / k)
    value = k ** (s / k - 1.0) * g.value
    return EvalResult(value, abs(value) * 4 * EPS + abs(k ** (s / k - 1.0)) * g.abs_err_estimate)


def pk_gamma(s: float, p: float, k: float) -> EvalResult:
    """p-k gamma: p**(s/k) / k * Gamma(s/k)."""
    if not (s > 0 and p > 0 and k > 0):
        return out_of_domain()
    g = gamma(s / k)
    scale = p ** (s / k) / k
    return EvalResult(scale * g.value, abs(scale * g.value) * 4 * EPS + scale * g.abs_err_estimate)
