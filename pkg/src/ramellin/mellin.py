"""Numerical Mellin transforms of the series kernels.

    M(s) = int_0^inf x^(s-1) [log x] [1/x] K(x) dx

The integral is split at ``split_point``.  The head is integrated by
adaptive Gauss-Kronrod (7/15) panels; its first panel [0, h] is mapped by
x = h e^(-t), which turns every endpoint behaviour of the form
x^alpha (log x)^l into a smooth exponentially decaying integrand.

Tails depend on the kernel family:

* Power ODD/EVEN: sin/cos(c x^k/p).  Sub-integrals between consecutive zeros
  of the phase are summed and the alternating partial sums are accelerated
  with Wynn's epsilon algorithm.
* Zeta ODD/EVEN: K(x) = sum_m trig(y/m^2)/m^2 is almost periodic with a
  non-oscillating C*y^(-1/2) envelope, so zeros of the m=1 mode do not give
  an alternating sequence.  The tail is split by mode instead: every mode is
  an exact scaled sine/cosine tail.  Modes whose start argument is large use
  the oscillatory tail routine; the remaining infinitely many modes are
  summed in closed form with Hurwitz zeta values.
* Binomial and Power FULL: non-oscillatory; integrated on x = X e^t in
  chunks until the contributions decay, with a geometric remainder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .series import Binomial, HurwitzOdd, Parity, Power, SeriesKernel, Zeta, kernel_terms, kernel_values
from .specfun import EPS, hurwitz_zeta

STATUS_OK = "ok"
STATUS_NOT_CONVERGED = "not_converged"
STATUS_OUT_OF_DOMAIN = "out_of_domain"


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    split_point: float = 10.0
    max_panel_depth: int = 30
    tail_half_periods: int = 400
    accel_order: int = 10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.split_point > 0:
            raise ValueError("split_point must be positive")
        if self.max_panel_depth < 1 or self.accel_order < 1:
            raise ValueError("max_panel_depth and accel_order must be >= 1")
        if self.accel_order > self.tail_half_periods / 4:
            raise ValueError("accel_order must not exceed tail_half_periods / 4")

    def tightened(self, factor: float) -> "QuadratureConfig":
        return replace(self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor)

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class MellinEvaluation:
    s: float
    value: float
    abs_err_estimate: float
    n_evals: int
    tail_terms_used: int
    converged: bool
    status: str = STATUS_OK
    diagnostic: str = ""

    @property
    def out_of_domain(self) -> bool:
        return self.status == STATUS_OUT_OF_DOMAIN


def _refused(s: float, why: str) -> MellinEvaluation:
    return MellinEvaluation(s, math.nan, math.inf, 0, 0, False, STATUS_OUT_OF_DOMAIN, why)


# --------------------------------------------------------------------------
# Gauss-Kronrod 7/15 panels

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_g = np.zeros(15)
_g[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])
G_WEIGHTS = _g

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


@dataclass
class _Integral:
    value: float = 0.0
    err: float = 0.0
    n_evals: int = 0
    terms: int = 0
    converged: bool = True

    def add(self, other: "_Integral") -> None:
        self.value += other.value
        self.err += other.err
        self.n_evals += other.n_evals
        self.terms += other.terms
        self.converged &= other.converged


def adaptive_gk(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    abs_tol: float,
    rel_tol: float,
    max_depth: int = 30,
    initial_panels: int = 1,
) -> _Integral:
    """Adaptive G7/K15 on [a, b]; panels are refined breadth first.

    Each round evaluates every open panel in one vectorised call.  A panel is
    accepted when its |K15 - G7| is below its width's share of the global
    tolerance; accepted values are summed in order of their left endpoint,
    so the result does not depend on the refinement history.
    """
    if b <= a:
        return _Integral()
    edges = np.linspace(a, b, initial_panels + 1)
    lefts, rights = edges[:-1], edges[1:]
    depth = 0
    accepted: list[tuple[float, float, float]] = []
    out = _Integral()
    span = b - a
    while lefts.size:
        mid = 0.5 * (lefts + rights)
        half = 0.5 * (rights - lefts)
        nodes = mid[:, None] + half[:, None] * GK_NODES[None, :]
        vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
        out.n_evals += vals.size
        kron = half * (vals @ GK_WEIGHTS)
        gauss = half * (vals @ G_WEIGHTS)
        err = np.abs(kron - gauss)
        bad = ~np.isfinite(kron)
        estimate = math.fsum(v for _, v, _ in accepted) + float(np.sum(kron[~bad]))
        tol = max(abs_tol, rel_tol * abs(estimate))
        ok = (err <= tol * (2 * half) / span) & ~bad
        if depth >= max_depth:
            if np.any(~ok):
                out.converged = False
            ok[:] = True
        for i in np.flatnonzero(ok):
            accepted.append((float(lefts[i]), float(kron[i]), float(err[i])))
        redo = ~ok
        lefts = np.concatenate([lefts[redo], mid[redo]])
        rights = np.concatenate([mid[redo], rights[redo]])
        depth += 1
    accepted.sort(key=lambda item: item[0])
    out.value = math.fsum(v for _, v, _ in accepted)
    out.err = math.fsum(e for _, _, e in accepted) + EPS * math.fsum(abs(v) for _, v, _ in accepted)
    out.terms = len(accepted)
    if not math.isfinite(out.value):
        out.converged = False
    return out


def _gauss_legendre(f, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Fixed 24-point rule on each interval [lo_i, hi_i]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return half * (vals @ _GL_WEIGHTS)


# --------------------------------------------------------------------------
# sequence acceleration


def wynn_epsilon(seq) -> float:
    """Highest even-column entry of Wynn's epsilon table built on `seq`."""
    prev = [0.0] * (len(seq) + 1)
    cur = [float(v) for v in seq]
    best = cur[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0.0:
                # the column has converged exactly
                return cur[i + 1] if col % 2 == 0 else best
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            best = cur[-1]
    return best


def _accelerated(partials: list[float], order: int) -> tuple[float, float]:
    n = 2 * order + 1
    if len(partials) < n + 1:
        last = partials[-1]
        return last, abs(last - partials[-2]) if len(partials) > 1 else math.inf
    a = wynn_epsilon(partials[-n:])
    b = wynn_epsilon(partials[-n - 1:-1])
    return a, abs(a - b)


# --------------------------------------------------------------------------
# weights and domain checks


def _weight(s_eff: float, log_weight: bool) -> Callable[[np.ndarray], np.ndarray]:
    if log_weight:
        return lambda x: x ** (s_eff - 1.0) * np.log(x)
    return lambda x: x ** (s_eff - 1.0)


def _domain_problem(kernel: SeriesKernel, s_eff: float, log_weight: bool) -> str | None:
    """Why the integral diverges or cannot be evaluated, or None."""
    phi, parity = kernel.phi, kernel.parity
    k = kernel.exponent_k
    order0 = s_eff + kernel.leading_order
    if order0 <= 0:
        weight = "log(x) * " if log_weight else ""
        return (
            f"divergent at 0: the integrand behaves like {weight}C * x^({order0 - 1:g}) "
            f"with C != 0, and int_0 x^({order0 - 1:g}) dx diverges (comparison with 1/x)"
        )
    if isinstance(phi, HurwitzOdd):
        return "the closed form of this kernel only exists for x^k/p < a; no tail is available"
    if isinstance(phi, Zeta):
        if parity is Parity.FULL:
            return "no large-x evaluation is available for the FULL zeta kernel"
        if log_weight:
            return "log weight is not supported for zeta kernels"
        if s_eff >= k / 2:
            return (
                f"divergent at infinity: the kernel decays only like sqrt(pi/8) y^(-1/2) "
                f"(non-oscillating), which needs s_eff < k/2 = {k / 2:g}"
            )
    if isinstance(phi, Power) and parity is not Parity.FULL and s_eff >= k:
        return f"divergent at infinity: oscillatory kernel needs s_eff < k = {k:g}"
    if isinstance(phi, Binomial):
        limit = phi.v if parity is Parity.FULL else k * phi.v
        if s_eff >= limit:
            return f"divergent at infinity: the kernel decays like x^(-{limit:g}), needs s_eff < {limit:g}"
    return None


# --------------------------------------------------------------------------
# head

_T_MAX = 60.0  # x_T = h e^(-60) < 1e-26


def _first_panel(kernel: SeriesKernel, s_eff: float, log_weight: bool, h: float, cfg: QuadratureConfig) -> _Integral:
    """int_0^h with x = h e^(-t); the t-integrand decays like e^(-rate t) t^l.

    The t-range stops at _T_MAX.  Below x_T = h e^(-T) the kernel equals its
    leading Maclaurin term to double precision, so that piece is integrated
    in closed form.  Small rates would otherwise need thousands of panels.
    """
    rate = s_eff + kernel.leading_order
    ell = 1 if log_weight else 0
    T = 41.0 / rate
    for _ in range(4):
        T = (41.0 + ell * math.log1p(T + abs(math.log(h)))) / rate
    T = min(T, _T_MAX)
    weight = _weight(s_eff, log_weight)

    def g(t):
        x = h * np.exp(-t)
        vals, _ = kernel_values(kernel, x)
        return weight(x) * vals * x

    panels = max(4, min(64, int(T * rate / 4)))
    res = adaptive_gk(g, 0.0, T, 0.25 * cfg.abs_tol, 0.25 * cfg.rel_tol, cfg.max_panel_depth, panels)
    if T == _T_MAX:
        lead = kernel_terms(kernel, 1.0, 1)[0]
        log_x = math.log(h) - T
        piece = lead * math.exp(rate * log_x) / rate
        if log_weight:
            piece *= log_x - 1.0 / rate
        res.value += piece
    else:
        end = abs(float(g(np.array([T]))[0]))
        res.err += end / rate if math.isfinite(end) else 0.0
    return res


def _phase_panels(kernel: SeriesKernel, a: float, b: float) -> int:
    if kernel.parity is Parity.FULL:
        return 4
    c = kernel.phi.c if isinstance(kernel.phi, Power) else (kernel.phi.a if isinstance(kernel.phi, Binomial) else 1.0)
    span = c * (b**kernel.exponent_k - a**kernel.exponent_k) / kernel.scale_p
    return int(min(4096, 4 + math.ceil(span / math.pi)))


def _head(kernel, s_eff, log_weight, X, cfg) -> _Integral:
    h = min(1.0, X)
    out = _first_panel(kernel, s_eff, log_weight, h, cfg)
    if X > h:
        weight = _weight(s_eff, log_weight)

        def f(x):
            vals, _ = kernel_values(kernel, x)
            return weight(x) * vals

        out.add(adaptive_gk(
            f, h, X, 0.25 * cfg.abs_tol, 0.25 * cfg.rel_tol, cfg.max_panel_depth,
            _phase_panels(kernel, h, X),
        ))
    return out


# --------------------------------------------------------------------------
# tails


def _trig_tail(
    c: float, p: float, k: float, odd: bool, s_eff: float, log_weight: bool,
    x_start: float, cfg: QuadratureConfig, tol: float,
) -> _Integral:
    """int_{x_start}^inf x^(s-1) [log x] trig(c x^k / p) dx by zero brackets + epsilon."""
    weight = _weight(s_eff, log_weight)
    offset = 0.0 if odd else 0.5
    trig = np.sin if odd else np.cos

    def f(x):
        return weight(x) * trig(c * x**k / p)

    def zero(j):
        return ((j + offset) * math.pi * p / c) ** (1.0 / k)

    theta0 = c * x_start**k / p
    j0 = math.floor(theta0 / math.pi - offset) + 1
    first = float(_gauss_legendre(f, np.array([x_start]), np.array([zero(j0)]))[0])
    partials = [first]
    out = _Integral(n_evals=24, converged=False)
    est, err = first, math.inf
    batch = 2 * cfg.accel_order + 3
    j = j0
    while out.terms < cfg.tail_half_periods:
        n = min(batch, cfg.tail_half_periods - out.terms)
        bounds = np.array([zero(i) for i in range(j, j + n + 1)])
        pieces = _gauss_legendre(f, bounds[:-1], bounds[1:])
        out.n_evals += 24 * n
        out.terms += n
        j += n
        for v in pieces:
            partials.append(partials[-1] + float(v))
        est, err = _accelerated(partials, cfg.accel_order)
        if err <= tol:
            out.converged = True
            break
        batch = 8
    out.value = est
    out.err = err + 64 * EPS * max(abs(v) for v in partials)
    return out


def _monotone_tail(kernel, s_eff, log_weight, X, cfg, tol) -> _Integral:
    """Non-oscillatory tail on x = X e^t, chunk by chunk until negligible."""
    weight = _weight(s_eff, log_weight)

    def g(t):
        x = X * np.exp(t)
        vals, _ = kernel_values(kernel, x)
        return weight(x) * vals * x

    out = _Integral(converged=False)
    chunks: list[float] = []
    width = 2.0
    t = 0.0
    while t < 700.0:
        part = adaptive_gk(g, t, t + width, 0.05 * tol, 0.1 * cfg.rel_tol, cfg.max_panel_depth, 2)
        out.n_evals += part.n_evals
        out.err += part.err
        out.terms += 1
        chunks.append(part.value)
        t += width
        last = abs(part.value)
        if len(chunks) < 3 or last > abs(chunks[-2]):
            continue
        # chunks of a power-law tail shrink geometrically in t
        ratio = last / abs(chunks[-2]) if chunks[-2] != 0 else 0.0
        prev = abs(chunks[-2]) / abs(chunks[-3]) if chunks[-3] != 0 else 0.0
        if ratio >= 1:
            continue
        remainder = part.value * ratio / (1.0 - ratio)
        rem_err = last * abs(ratio - prev) / (1.0 - ratio) ** 2
        if last <= 0.01 * tol or rem_err <= 0.1 * tol:
            out.value = math.fsum(chunks) + remainder
            out.err += rem_err if last > 0.01 * tol else abs(remainder)
            out.converged = part.converged and out.err <= tol
            return out
    out.value = math.fsum(chunks)
    out.err = math.inf
    return out


_Y_SWITCH = 4.0


@lru_cache(maxsize=256)
def _trig_full_mellin(sigma: float, odd: bool, cfg: QuadratureConfig) -> tuple[float, float, bool]:
    """int_0^inf u^(sigma-1) trig(u) du by quadrature (no gamma identity used)."""
    # shifted form so that sigma <= 0 (allowed for sine) is reachable
    unit = SeriesKernel(Power(1.0), Parity.ODD if odd else Parity.EVEN)
    res = mellin_transform_shifted(unit, sigma + 1.0, False, True, cfg)
    return res.value, res.abs_err_estimate, res.converged


def _zeta_tail(kernel, s_eff, X, cfg, tol) -> _Integral:
    """Mode-split tail of the Zeta ODD/EVEN kernels.

    For one mode, int_X^inf x^(s-1) trig(x^k/(p m^2)) / m^2 dx equals
    (p^sig / k) m^(2 sig - 2) T(sig, Y/m^2) with sig = s/k, Y = X^k/p and
    T(sig, y) = int_y^inf u^(sig-1) trig(u) du.  For y >= _Y_SWITCH, T comes
    from the oscillatory tail routine.  For the remaining modes
    T = I(sig) - int_0^y u^(sig-1) trig(u) du; the full integral I(sig)
    multiplies zeta(2 - 2 sig, M1+1) and the power series of the finite part
    sums over m into Hurwitz zeta values.
    """
    odd = kernel.parity is Parity.ODD
    k, p = kernel.exponent_k, kernel.scale_p
    sig = s_eff / k
    Y = X**k / p
    scale = p**sig / k
    M1 = int(math.floor(math.sqrt(Y / _Y_SWITCH)))
    out = _Integral()
    near = []
    for m in range(1, M1 + 1):
        w = m ** (2 * sig - 2)
        part = _trig_tail(1.0, 1.0, 1.0, odd, sig, False, Y / (m * m), cfg, 0.1 * tol / (scale * M1 * w))
        near.append(w * part.value)
        out.err += w * part.err
        out.n_evals += part.n_evals
        out.terms += part.terms
        out.converged &= part.converged
    b = M1 + 1.0
    full, full_err, full_ok = _trig_full_mellin(sig, odd, cfg.tightened(10.0))
    hz = hurwitz_zeta(2.0 - 2.0 * sig, b)
    far = [full * hz.value]
    out.err += abs(full_err * hz.value) + abs(full) * hz.abs_err_estimate
    out.converged &= full_ok
    ymax = Y / (b * b)
    series = []
    for j in range(60):
        e = 2 * j + 1 + sig if odd else 2 * j + sig
        n = 2 * j + 1 if odd else 2 * j
        term = (-1) ** j * Y**e * hurwitz_zeta(2 * e + 2 - 2 * sig, b).value / (math.factorial(n) * e)
        series.append(term)
        if ymax ** (n + 1) / math.factorial(n + 1) < 1e-18 * max(1.0, abs(far[0])):
            break
    far.append(-math.fsum(series))
    out.err += abs(series[-1]) + 16 * EPS * max(abs(t) for t in series)
    out.n_evals += len(series)
    out.terms += len(series) + 1
    out.value = scale * (math.fsum(near) + math.fsum(far))
    out.err *= scale
    if not math.isfinite(out.value):
        out.converged = False
    return out


def tail_oscillatory_sum(
    kernel: SeriesKernel, s: float, x_start: float, cfg: QuadratureConfig = QuadratureConfig(),
    log_weight: bool = False, inverse_x: bool = False,
) -> tuple[float, float, int]:
    """int_{x_start}^inf of the Mellin integrand as (value, err, terms).

    Non-oscillatory kernels are accepted too and use the chunked path.
    """
    s_eff = s - (1.0 if inverse_x else 0.0)
    res = _tail(kernel, s_eff, log_weight, float(x_start), cfg, cfg.tolerance(0.0))
    return res.value, res.err, res.terms


def _tail(kernel, s_eff, log_weight, X, cfg, tol) -> _Integral:
    phi, parity = kernel.phi, kernel.parity
    if isinstance(phi, Power) and parity is not Parity.FULL:
        return _trig_tail(phi.c, kernel.scale_p, kernel.exponent_k, parity is Parity.ODD,
                          s_eff, log_weight, X, cfg, tol)
    if isinstance(phi, Zeta):
        return _zeta_tail(kernel, s_eff, X, cfg, tol)
    if isinstance(phi, Power):
        # e^(-cx): the remainder past X is far below double precision for cX > 745
        if phi.c * X > 745:
            return _Integral()
    return _monotone_tail(kernel, s_eff, log_weight, X, cfg, tol)


# --------------------------------------------------------------------------


def mellin_transform_shifted(
    kernel: SeriesKernel, s: float, log_weight: bool = False, inverse_x: bool = False,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> MellinEvaluation:
    """int_0^inf x^(s-1) [log x if log_weight] [1/x if inverse_x] K(x) dx."""
    s = float(s)
    s_eff = s - (1.0 if inverse_x else 0.0)
    why = _domain_problem(kernel, s_eff, log_weight)
    if why is not None:
        return _refused(s, why)
    X = cfg.split_point
    head = _head(kernel, s_eff, log_weight, X, cfg)
    tail = _tail(kernel, s_eff, log_weight, X, cfg, 0.25 * cfg.tolerance(head.value))
    value = head.value + tail.value
    err = head.err + tail.err
    converged = head.converged and tail.converged and err <= cfg.tolerance(value) and math.isfinite(value)
    return MellinEvaluation(
        s, value, err, head.n_evals + tail.n_evals, tail.terms, converged,
        STATUS_OK if converged else STATUS_NOT_CONVERGED,
        "" if converged else "error estimate above tolerance",
    )


def mellin_transform(kernel: SeriesKernel, s: float, cfg: QuadratureConfig = QuadratureConfig()) -> MellinEvaluation:
    if not s > 0:
        return _refused(s, "s must be positive")
    return mellin_transform_shifted(kernel, s, False, False, cfg)


def trig_transform(a: float, s: float, odd: bool, cfg: QuadratureConfig = QuadratureConfig()) -> MellinEvaluation:
    """int_0^inf x^(s-1) sin(a x) (or cos) dx through u = a x and a^(-s) scaling.

    Independent of the generic kernel path: the whole integral is done in u
    with the split at a * split_point.
    """
    if not (a > 0 and 0 < s < 1):
        return _refused(s, "requires a > 0 and 0 < s < 1")
    unit = SeriesKernel(Power(1.0), Parity.ODD if odd else Parity.EVEN)
    U = a * cfg.split_point
    head = _head(unit, s, False, U, cfg)
    tail = _trig_tail(1.0, 1.0, 1.0, odd, s, False, U, cfg, 0.25 * cfg.tolerance(head.value))
    scale = a ** (-s)
    value = scale * (head.value + tail.value)
    err = scale * (head.err + tail.err)
    ok = head.converged and tail.converged and err <= cfg.tolerance(value)
    return MellinEvaluation(s, value, err, head.n_evals + tail.n_evals, tail.terms, ok,
                            STATUS_OK if ok else STATUS_NOT_CONVERGED)
