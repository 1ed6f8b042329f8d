"""Alternating exponential-type series and their closed-form resummations.

A kernel is the series

    FULL:  sum_m (-1)^m phi(m) x^m / m!
    ODD:   sum_n (-1)^n phi(2n+1) y^(2n+1) / (2n+1)!
    EVEN:  sum_n (-1)^n phi(2n)   y^(2n)   / (2n)!

with y = x**k / p for the parity variants.  The Maclaurin path sums these
terms directly and flags catastrophic cancellation; the closed-form path
uses a resummation that is stable for every x >= 0.

Zeta resummation.  For phi(t) = zeta(2t+2) the coefficient is a Dirichlet
series, phi(2n+1) = sum_j j^(-4n-4) and phi(2n) = sum_j j^(-4n-2).  Inserting
this into the ODD/EVEN series and exchanging the two sums (absolutely
convergent for every y, since sum_n y^n/n! converges and the j-sums are
bounded by zeta(2)) gives

    ODD(y)  = sum_j sin(y / j^2) / j^2,
    EVEN(y) = sum_j cos(y / j^2) / j^2.

The j-sum is taken exactly up to M with y/(M+1)^2 <= 1/2; beyond M each
trig term is re-expanded and summed in closed form with Hurwitz zeta values,
e.g. sum_{j>M} cos(y/j^2)/j^2 = sum_i (-1)^i y^(2i)/(2i)! zeta(4i+2, M+1).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

from .specfun import (
    EPS,
    EvalResult,
    Flag,
    gamma,
    hurwitz_zeta,
    log_gamma,
    out_of_domain,
    pochhammer,
    riemann_zeta,
)

CANCELLATION_RATIO = 1e12


class Parity(str, enum.Enum):
    FULL = "FULL"
    ODD = "ODD"
    EVEN = "EVEN"


class Strategy(str, enum.Enum):
    MACLAURIN = "MACLAURIN"
    CLOSED_FORM = "CLOSED_FORM"
    AUTO = "AUTO"


# --------------------------------------------------------------------------
# coefficient functions phi


@dataclass(frozen=True)
class Power:
    """phi(t) = c**t."""

    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("Power requires c > 0")

    def at(self, t: float) -> EvalResult:
        v = self.c**t
        return EvalResult(v, abs(v) * EPS * (1 + abs(t * math.log(self.c))))

    def scaled_coefficients(self, y: float) -> Iterator[float]:
        w = 1.0
        m = 0
        while True:
            yield w
            m += 1
            w *= self.c * y / m

    def describe(self) -> dict:
        return {"phi": "power", "c": self.c}


@dataclass(frozen=True)
class Binomial:
    """phi(t) = a**t Gamma(v+t)/Gamma(v); the series is (1 + a x)**(-v)."""

    a: float
    v: float

    def __post_init__(self):
        if not (self.a > 0 and self.v > 0):
            raise ValueError("Binomial requires a > 0 and v > 0")

    def at(self, t: float) -> EvalResult:
        if not self.v + t > 0:
            return out_of_domain()
        if self.v + t < 150 and self.v < 150:
            num, den = gamma(self.v + t), gamma(self.v)
            ratio = num.value / den.value
            rel = num.abs_err_estimate / abs(num.value) + den.abs_err_estimate / abs(den.value)
        else:
            lg1, lg0 = log_gamma(self.v + t), log_gamma(self.v)
            ratio = math.exp(lg1.value - lg0.value)
            rel = lg1.abs_err_estimate + lg0.abs_err_estimate
        v = self.a**t * ratio
        return EvalResult(v, abs(v) * (rel + 4 * EPS))

    def scaled_coefficients(self, y: float) -> Iterator[float]:
        w = 1.0
        m = 0
        while True:
            yield w
            m += 1
            w *= self.a * y * (self.v + m - 1) / m

    def describe(self) -> dict:
        return {"phi": "binomial", "a": self.a, "v": self.v}


@lru_cache(maxsize=None)
def _zeta_even_int(m: int) -> float:
    return riemann_zeta(2.0 * m + 2.0).value


@dataclass(frozen=True)
class Zeta:
    """phi(t) = zeta(2t + 2)."""

    def at(self, t: float) -> EvalResult:
        if t == -0.5:
            return out_of_domain()
        return riemann_zeta(2.0 * t + 2.0)

    def scaled_coefficients(self, y: float) -> Iterator[float]:
        r = 1.0
        m = 0
        while True:
            yield r * _zeta_even_int(m)
            m += 1
            r *= y / m

    def describe(self) -> dict:
        return {"phi": "zeta"}


@dataclass(frozen=True)
class HurwitzOdd:
    """Odd-index coefficients with phi(2k+1)(-1)^k = (c)_{2k+1} zeta(c+2k+1, a).

    Only odd integers carry a value; the continuation to other arguments
    involves a branch choice for (-1)^(-s) that is left to the caller.
    """

    c: float
    a: float

    def __post_init__(self):
        if not (self.c > 1 and self.a > 0):
            raise ValueError("HurwitzOdd requires c > 1 and a > 0")

    def at(self, t: float) -> EvalResult:
        if t != math.floor(t) or int(t) % 2 != 1 or t < 0:
            return out_of_domain()
        m = int(t)
        k = (m - 1) // 2
        poch = pochhammer(self.c, m)
        hz = hurwitz_zeta(self.c + m, self.a)
        v = (-1) ** k * poch.value * hz.value
        return EvalResult(v, abs(v) * 8 * EPS + abs(poch.value) * hz.abs_err_estimate)

    def scaled_coefficients(self, y: float) -> Iterator[float]:
        r = 1.0
        m = 0
        while True:
            if m % 2 == 1:
                yield (-1) ** ((m - 1) // 2) * r * hurwitz_zeta(self.c + m, self.a).value
            else:
                yield 0.0
            m += 1
            r *= (self.c + m - 1) * y / m

    def describe(self) -> dict:
        return {"phi": "hurwitz_odd", "c": self.c, "a": self.a}


PhiSpec = Union[Power, Binomial, Zeta, HurwitzOdd]


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesKernel:
    phi: PhiSpec
    parity: Parity = Parity.FULL
    scale_p: float = 1.0
    exponent_k: float = 1.0
    strategy: Strategy = Strategy.AUTO
    max_terms: int = 200
    term_tol: float = 1e-16

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not (self.scale_p > 0 and self.exponent_k > 0):
            raise ValueError("scale_p and exponent_k must be positive")
        if self.parity is Parity.FULL and (self.scale_p != 1 or self.exponent_k != 1):
            raise ValueError("FULL parity takes no (p, k) scaling")
        if isinstance(self.phi, HurwitzOdd) and self.parity is not Parity.ODD:
            raise ValueError("HurwitzOdd only defines odd-index coefficients")

    def reduced(self, x: float) -> float:
        """The argument y = x**k / p that the series is actually expanded in."""
        x = float(x)
        if self.parity is Parity.FULL:
            return x
        return x**self.exponent_k / self.scale_p

    @property
    def leading_order(self) -> float:
        """Power of x in the kernel's leading term at x = 0."""
        return self.exponent_k if self.parity is Parity.ODD else 0.0

    def describe(self) -> dict:
        d = dict(self.phi.describe())
        d.update(parity=self.parity.value, p=self.scale_p, k=self.exponent_k)
        return d


def kernel_terms(kernel: SeriesKernel, x: float, count: int) -> list[float]:
    """First `count` signed terms of the parity-filtered Maclaurin series."""
    y = kernel.reduced(x)
    gen = kernel.phi.scaled_coefficients(y)
    out = []
    m = 0
    for w in gen:
        if kernel.parity is Parity.FULL:
            out.append(w if m % 2 == 0 else -w)
        elif kernel.parity is Parity.ODD and m % 2 == 1:
            out.append(w if (m // 2) % 2 == 0 else -w)
        elif kernel.parity is Parity.EVEN and m % 2 == 0:
            out.append(w if (m // 2) % 2 == 0 else -w)
        m += 1
        if len(out) >= count:
            return out
    return out  # pragma: no cover


def maclaurin(kernel: SeriesKernel, x: float) -> EvalResult:
    if x < 0:
        return out_of_domain()
    y = kernel.reduced(x)
    gen = kernel.phi.scaled_coefficients(y)
    parts: list[float] = []
    partial = 0.0
    small_run = 0
    biggest = 0.0
    m = -1
    overflow = False
    while len(parts) < kernel.max_terms:
        m += 1
        w = next(gen)
        if kernel.parity is Parity.FULL:
            term = w if m % 2 == 0 else -w
        elif (kernel.parity is Parity.ODD) == (m % 2 == 1):
            term = w if (m // 2) % 2 == 0 else -w
        else:
            continue
        if not math.isfinite(term):
            overflow = True
            break
        parts.append(term)
        partial += term
        biggest = max(biggest, abs(term))
        if abs(term) < kernel.term_tol * (1.0 + abs(partial)):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    if overflow:
        return EvalResult(math.nan, math.inf, frozenset({Flag.CANCELLATION, Flag.TRUNCATED}))
    value = math.fsum(parts)
    flags = set()
    if small_run < 3:
        flags.add(Flag.TRUNCATED)
    if biggest > 0 and (value == 0 or biggest / abs(value) > CANCELLATION_RATIO):
        flags.add(Flag.CANCELLATION)
    err = 2 * EPS * biggest * math.sqrt(len(parts)) + abs(parts[-1])
    if Flag.TRUNCATED in flags:
        err = max(err, abs(parts[-1]) * 10)
    return EvalResult(value, err, frozenset(flags))


# --------------------------------------------------------------------------
# closed forms


def supports_closed_form(kernel: SeriesKernel) -> bool:
    phi = kernel.phi
    if isinstance(phi, (Power, Binomial)):
        return True
    if isinstance(phi, Zeta):
        return kernel.parity is not Parity.FULL
    return isinstance(phi, HurwitzOdd) and kernel.parity is Parity.ODD


@lru_cache(maxsize=4096)
def _hurwitz_tail_coeffs(M: int, odd: bool) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """zeta(order, M+1)/e! with order = 2e+2, for the re-expanded j > M tail."""
    coeffs, exps = [], []
    for i in range(40):
        e = 2 * i + 1 if odd else 2 * i
        hz = hurwitz_zeta(2.0 * e + 2.0, M + 1.0).value
        coeffs.append((-1) ** i * hz / math.factorial(e))
        exps.append(e)
    return tuple(coeffs), tuple(exps)


def _zeta_modes(y: np.ndarray, odd: bool) -> tuple[np.ndarray, np.ndarray]:
    ymax = float(np.max(y)) if y.size else 0.0
    M = max(4, math.ceil(math.sqrt(2.0 * ymax)))
    j = np.arange(1, M + 1, dtype=float)
    inv = 1.0 / (j * j)
    arg = np.multiply.outer(y, inv)
    trig = np.sin(arg) if odd else np.cos(arg)
    direct = trig @ inv
    coeffs, exps = _hurwitz_tail_coeffs(M, odd)
    tail = np.zeros_like(y)
    last = np.zeros_like(y)
    bound = ymax / (M + 1.0) ** 2
    for cf, e in zip(coeffs, exps):
        term = cf * y**e
        tail += term
        last = np.abs(term)
        if bound**e / math.factorial(e) < 1e-18:
            break
    err = last + 4 * EPS * (np.abs(direct) + M * EPS + 1.0)
    return direct + tail, err


def closed_form_array(kernel: SeriesKernel, xs) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised closed form.  Raises ValueError for unsupported kernels."""
    if not supports_closed_form(kernel):
        raise ValueError(f"no closed form for {kernel.describe()}")
    x = np.asarray(xs, dtype=float)
    if np.any(x < 0):
        raise ValueError("closed forms are defined for x >= 0")
    phi, parity = kernel.phi, kernel.parity
    y = x if parity is Parity.FULL else x**kernel.exponent_k / kernel.scale_p
    if isinstance(phi, Power):
        u = phi.c * y
        if parity is Parity.ODD:
            val = np.sin(u)
        elif parity is Parity.EVEN:
            val = np.cos(u)
        else:
            val = np.exp(-u)
        return val, EPS * (1.0 + np.abs(u))
    if isinstance(phi, Binomial):
        if parity is Parity.FULL:
            val = (1.0 + phi.a * y) ** (-phi.v)
            return val, 4 * EPS * np.abs(val) * (1 + phi.v)
        z = (1.0 + 1j * phi.a * y) ** (-phi.v)
        val = -z.imag if parity is Parity.ODD else z.real
        return val, 8 * EPS * np.abs(z) * (1 + phi.v)
    if isinstance(phi, Zeta):
        flat = y.ravel()
        vals = np.empty_like(flat)
        errs = np.empty_like(flat)
        # bound the (len x M) work matrix
        order = np.argsort(flat, kind="stable")
        chunk = 4096
        for start in range(0, flat.size, chunk):
            idx = order[start:start + chunk]
            v, e = _zeta_modes(flat[idx], parity is Parity.ODD)
            vals[idx] = v
            errs[idx] = e
        return vals.reshape(y.shape), errs.reshape(y.shape)
    # HurwitzOdd: right side of the Taylor identity, 0.5 [zeta(c, a-t) - zeta(c, a+t)]
    flat = y.ravel()
    vals = np.empty_like(flat)
    errs = np.empty_like(flat)
    for i, t in enumerate(flat):
        lo, hi = hurwitz_zeta(phi.c, phi.a - t), hurwitz_zeta(phi.c, phi.a + t)
        vals[i] = 0.5 * (lo.value - hi.value)
        errs[i] = 0.5 * (lo.abs_err_estimate + hi.abs_err_estimate)
    return vals.reshape(y.shape), errs.reshape(y.shape)


def closed_form_kernel(kernel: SeriesKernel, x: float) -> EvalResult:
    if x < 0 or not supports_closed_form(kernel):
        return out_of_domain()
    if isinstance(kernel.phi, HurwitzOdd) and not kernel.reduced(x) < kernel.phi.a:
        return out_of_domain()
    v, e = closed_form_array(kernel, np.array([float(x)]))
    return EvalResult(float(v[0]), float(e[0]))


def eval_kernel(kernel: SeriesKernel, x: float) -> EvalResult:
    """Evaluate the kernel at x following kernel.strategy."""
    if x < 0:
        return out_of_domain()
    if kernel.strategy is Strategy.CLOSED_FORM:
        return closed_form_kernel(kernel, x)
    res = maclaurin(kernel, x)
    if kernel.strategy is Strategy.MACLAURIN:
        return res
    unstable = Flag.CANCELLATION in res.flags or Flag.TRUNCATED in res.flags
    if unstable and supports_closed_form(kernel):
        cf = closed_form_kernel(kernel, x)
        if cf.ok:
            return cf
    return res


def kernel_values(kernel: SeriesKernel, xs) -> tuple[np.ndarray, np.ndarray]:
    """Array evaluation for quadrature: closed form where available."""
    x = np.asarray(xs, dtype=float)
    if supports_closed_form(kernel):
        return closed_form_array(kernel, x)
    vals = np.empty_like(x)
    errs = np.empty_like(x)
    for i, xi in np.ndenumerate(x):
        r = eval_kernel(kernel, float(xi))
        vals[i] = r.value
        errs[i] = r.abs_err_estimate
    return vals, errs


def kernel_table(kernel: SeriesKernel, xs: Sequence[float]) -> list[tuple[float, EvalResult]]:
    auto = SeriesKernel(
        kernel.phi, kernel.parity, kernel.scale_p, kernel.exponent_k,
        Strategy.AUTO, kernel.max_terms, kernel.term_tol,
    )
    rows = []
    for x in xs:
        x = float(x)
        if not math.isfinite(x) or x < 0:
            rows.append((x, out_of_domain()))
        else:
            rows.append((x, eval_kernel(auto, x)))
    return rows


def table_csv(rows: list[tuple[float, EvalResult]]) -> str:
    lines = ["x,value,abs_err,flags"]
    for x, r in rows:
        flags = "|".join(sorted(f.value for f in r.flags))
        lines.append(f"{x!r},{r.value!r},{r.abs_err_estimate!r},{flags}")
    return "\n".join(lines) + "\n"
