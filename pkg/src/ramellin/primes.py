"""Sieves, prime log-sums and the divergence diagnostics of the prime-kernel sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .series import Parity, SeriesKernel, Zeta, closed_form_array, maclaurin
from .specfun import EPS, EvalResult, Flag, out_of_domain, riemann_zeta, zeta_derivative

RESOURCE_LIMIT = 10**9
SEGMENT = 1 << 21


class TableRangeError(ValueError):
    """Query outside the range covered by a NumberTheoryTables instance."""


@dataclass(frozen=True)
class NumberTheoryTables:
    limit_n: int
    primes: np.ndarray
    mobius: np.ndarray  # mobius[k] = mu(k) for 1 <= k <= limit_n; index 0 unused
    pi_checkpoints: dict

    def mu(self, k: int) -> int:
        if not 1 <= k <= self.limit_n:
            raise TableRangeError(f"mu({k}) outside 1..{self.limit_n}")
        return int(self.mobius[k])


@dataclass(frozen=True)
class PrimeSumResult:
    value: float
    primes_used: int = 0
    mobius_terms_used: int = 0
    tail_estimate: float = 0.0
    divergent: bool = False
    formal: bool = False
    flags: frozenset = frozenset()
    notes: str = ""
    checkpoints: tuple = ()
    growth_exponent: Optional[float] = None

    def __post_init__(self):
        if self.divergent and self.tail_estimate != math.inf:
            object.__setattr__(self, "tail_estimate", math.inf)


def _small_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def build_tables(limit_n: int) -> NumberTheoryTables:
    """Primes and the Moebius function up to limit_n by a segmented sieve.

    Each segment divides out every base prime p <= sqrt(limit_n); whatever
    cofactor remains above 1 is a single large prime and flips mu once more.
    """
    limit_n = int(limit_n)
    if limit_n < 2:
        raise ValueError("limit_n must be >= 2")
    if limit_n > RESOURCE_LIMIT:
        raise ValueError(f"limit_n={limit_n} exceeds the resource guard {RESOURCE_LIMIT}")
    base = _small_primes(math.isqrt(limit_n) + 1)
    mobius = np.zeros(limit_n + 1, dtype=np.int8)
    prime_chunks = []
    for lo in range(1, limit_n + 1, SEGMENT):
        hi = min(lo + SEGMENT, limit_n + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        rem = n.copy()
        mu = np.ones(hi - lo, dtype=np.int8)
        composite = np.zeros(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p >= hi:
                break
            first = -(-lo // p) * p
            if first < hi:
                mu[first - lo::p] *= -1
                rem[first - lo::p] //= p
            start = max(p * p, first)
            if start < hi:
                composite[start - lo::p] = True
            pp = p * p
            first_sq = -(-lo // pp) * pp
            if first_sq < hi:
                mu[first_sq - lo::pp] = 0
        mu[rem > 1] *= -1
        mobius[lo:hi] = mu
        is_prime = ~composite & (n >= 2)
        prime_chunks.append(n[is_prime])
    primes = np.concatenate(prime_chunks)
    checkpoints = {}
    x = 10
    while x <= limit_n:
        checkpoints[x] = int(np.searchsorted(primes, x, side="right"))
        x *= 10
    return NumberTheoryTables(limit_n, primes, mobius, checkpoints)


@lru_cache(maxsize=8)
def cached_tables(limit_n: int) -> NumberTheoryTables:
    return build_tables(limit_n)


def prime_count(tables: NumberTheoryTables, x: float) -> int:
    if not 0 <= x <= tables.limit_n:
        raise TableRangeError(f"x={x} outside [0, {tables.limit_n}]")
    return int(np.searchsorted(tables.primes, math.floor(x), side="right"))


def _primes_to(tables: NumberTheoryTables, up_to: int) -> np.ndarray:
    if up_to > tables.limit_n:
        raise TableRangeError(f"up_to={up_to} exceeds table limit {tables.limit_n}")
    return tables.primes[: prime_count(tables, up_to)]


def log_integral_tail(s: float, N: float) -> float:
    """int_N^inf log(t) t^(-s) dt for s > 1."""
    d = s - 1.0
    return N ** (-d) * (math.log(N) / d + 1.0 / (d * d))


def prime_log_sum_direct(tables: NumberTheoryTables, s: float, up_to: int) -> PrimeSumResult:
    """sum_{p <= up_to} log(p) / p^s, accumulated with math.fsum."""
    ps = _primes_to(tables, up_to).astype(float)
    terms = np.log(ps) * ps ** (-s)
    value = math.fsum(terms.tolist())
    if s > 1:
        return PrimeSumResult(value, len(ps), 0, log_integral_tail(s, max(up_to, 2)))
    return PrimeSumResult(
        value, len(ps), 0, math.inf, divergent=True,
        notes=f"sum diverges for s <= 1; partial sum over p <= {up_to}",
    )


def _mobius_upto(K: int) -> np.ndarray:
    return cached_tables(max(K, 2)).mobius[: K + 1]


def f_analytic(s: float, K: int, mobius: Optional[Sequence[int]] = None) -> EvalResult:
    """f(s) = -sum_{k<=K} mu(k) [zeta'(ks)/zeta(ks) + 1/(ks - 1)].

    The bracket tends to 1/(ks - 1), so the truncated sum converges only as
    fast as sum mu(k)/k; the error estimate uses the Mertens-type bound
    sqrt(K)/(K s).  `mobius`, if given, replaces mu(1..K) (index 0 unused).
    """
    if not s > 1:
        return out_of_domain()
    mu = np.asarray(mobius if mobius is not None else _mobius_upto(K))
    parts = []
    for k in range(1, K + 1):
        m = int(mu[k])
        if m == 0:
            continue
        ks = k * s
        log_deriv = zeta_derivative(ks, 1).value / riemann_zeta(ks).value
        parts.append(-m * (log_deriv + 1.0 / (ks - 1.0)))
    value = math.fsum(parts)
    err = math.sqrt(K) / (K * s) + 16 * EPS * math.fsum(abs(p) for p in parts)
    return EvalResult(value, err, frozenset({Flag.TRUNCATED}))


def prime_log_sum_mobius(s: float, K: int) -> PrimeSumResult:
    """sum_k mu(k)/(sk - 1) + f(s), truncated at the same K.

    At a common truncation the 1/(sk - 1) pieces cancel exactly, leaving
    -sum_{k<=K} mu(k) zeta'(ks)/zeta(ks), which converges like 2^(-Ks).  It is
    summed in that form to avoid the cancellation.
    """
    if not s > 1:
        return PrimeSumResult(math.nan, flags=frozenset({Flag.OUT_OF_DOMAIN}),
                              notes="requires s > 1")
    mu = _mobius_upto(K)
    parts = []
    used = 0
    for k in range(1, K + 1):
        m = int(mu[k])
        if m == 0:
            continue
        ks = k * s
        parts.append(-m * zeta_derivative(ks, 1).value / riemann_zeta(ks).value)
        used += 1
    tail = math.log(2.0) * 2.0 ** (-(K + 1) * s) / (1.0 - 2.0 ** (-s))
    return PrimeSumResult(math.fsum(parts), 0, used, tail)


def c_n(n: int) -> EvalResult:
    """zeta(4n + 2) (-1)^n / (2n)!."""
    if n < 0:
        return out_of_domain()
    z = riemann_zeta(4.0 * n + 2.0)
    f = math.factorial(2 * n)
    sign = -1.0 if n % 2 else 1.0
    return EvalResult(sign * z.value / f, z.abs_err_estimate / f + EPS * z.value / f)


def a_n_formal(n: int, K: int) -> PrimeSumResult:
    """Moebius piece sum_{k<=K} mu(k)/((1-2n)k - 1) of A_n, labelled formal.

    The remaining piece f(1 - 2n) is not evaluated: its defining series needs
    an argument above 1 and 1 - 2n <= 1 for every n >= 0.
    """
    if n < 0:
        return PrimeSumResult(math.nan, flags=frozenset({Flag.OUT_OF_DOMAIN}), formal=True,
                              notes="n must be >= 0")
    sigma = 1 - 2 * n
    if n == 0:
        return PrimeSumResult(
            math.nan, formal=True, divergent=True, flags=frozenset({Flag.OUT_OF_DOMAIN}),
            notes="k=1 term has denominator (1-2n)*1 - 1 = 0 at n=0 (pole)",
        )
    mu = _mobius_upto(K)
    parts = [int(mu[k]) / (sigma * k - 1.0) for k in range(1, K + 1) if mu[k] != 0]
    return PrimeSumResult(
        math.fsum(parts), 0, len(parts), math.inf, divergent=True, formal=True,
        notes=(f"Moebius partial sum only; f({sigma}) NOT EVALUABLE: the series for f "
               "requires an argument > 1"),
    )


def _checkpoints(up_to: int) -> list[int]:
    pts = [10**j for j in range(2, 6) if 10**j < up_to]
    return pts + [up_to]


def theorem22_lhs(tables: NumberTheoryTables, up_to: int, m_terms: int = 8) -> PrimeSumResult:
    """sum_{p <= up_to} (log p / p) K(p) with K(y) = sum_m cos(y/m^2)/m^2.

    K is the resummed EVEN zeta kernel, bounded by zeta(2) for every p.  The
    first `m_terms` primes are also evaluated through the Maclaurin series as
    a consistency check; the largest disagreement goes into the notes.
    """
    ps = _primes_to(tables, up_to).astype(float)
    kernel = SeriesKernel(Zeta(), Parity.EVEN)
    kvals, kerr = closed_form_array(kernel, ps) if ps.size else (np.zeros(0), np.zeros(0))
    terms = np.log(ps) / ps * kvals
    check = 0.0
    for p, kv in zip(ps[:m_terms], kvals[:m_terms]):
        mc = maclaurin(kernel, float(p))
        if math.isfinite(mc.value):
            check = max(check, abs(mc.value - kv))
    counts = np.searchsorted(ps, np.array(_checkpoints(up_to), dtype=float), side="right")
    checkpoints = tuple(
        (int(N), math.fsum(terms[:c].tolist())) for N, c in zip(_checkpoints(up_to), counts)
    )
    trend = ", ".join(f"{N}: {v:.10g}" for N, v in checkpoints)
    return PrimeSumResult(
        checkpoints[-1][1], len(ps), 0, math.inf, divergent=True, formal=True,
        notes=(f"partial sums {{{trend}}}; series-vs-closed-form max diff on first "
               f"{min(m_terms, len(ps))} primes = {check:.3g}"),
        checkpoints=checkpoints,
    )


def divergence_diagnostic(tables: NumberTheoryTables, n: int, up_to: int) -> PrimeSumResult:
    """Partial sums of sum_p log(p) p^(2n-1) with a fitted growth exponent."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ps = _primes_to(tables, up_to).astype(float)
    terms = np.log(ps) * ps ** (2 * n - 1)
    pts = [10**j for j in range(1, 10) if 10**j < up_to] + [up_to]
    counts = np.searchsorted(ps, np.array(pts, dtype=float), side="right")
    checkpoints = tuple((int(N), math.fsum(terms[:c].tolist())) for N, c in zip(pts, counts))
    growth = None
    usable = [(N, v) for N, v in checkpoints if v > 0 and N >= 100]
    if len(usable) >= 2:
        logs = np.log(np.array(usable, dtype=float))
        growth = float(np.polyfit(logs[:, 0], logs[:, 1], 1)[0])
    trend = ", ".join(f"{N}: {v:.10g}" for N, v in checkpoints)
    return PrimeSumResult(
        checkpoints[-1][1], len(ps), 0, math.inf, divergent=True, formal=True,
        notes=f"partial sums {{{trend}}}; growth exponent {growth}",
        checkpoints=checkpoints, growth_exponent=growth,
    )
