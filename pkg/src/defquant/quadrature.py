"""Adaptive Gauss-Kronrod quadrature on semi-infinite ranges, and Richardson derivatives.

The integration range ``[lower, upper)`` is split into a head
``[lower, lower + scale]`` and, for an infinite upper limit, a tail.
An algebraic endpoint singularity ``x**p`` (``-1 < p < 0``) in the head is
removed with ``x = lower + scale * v**(1/(1+p))``; the tail is mapped onto
``[0, 1)`` by ``x = lower + scale * (1 + t/(1-t))``. All panels share one
global error budget and the worst panel is bisected until the total error
estimate drops below ``rel_tol * |I|``.
"""

from __future__ import annotations

import heapq
import math
import sys
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, EvaluationError, SingularityTooStrong, ToleranceNotMet

__all__ = [
    "QuadratureConfig",
    "IntegralResult",
    "integrate_semi_infinite",
    "derivative",
]

_EPS = sys.float_info.epsilon
_TINY = sys.float_info.min

# 15-point Kronrod abscissae (positive half) and weights; the 7-point Gauss
# rule uses every second abscissa.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    # None: let the caller (or the integrand's owner) decide; 0 means regular
    endpoint_singularity_exponent: float | None = None

    def __post_init__(self):
        if not (0 < self.rel_tol < 1e-2):
            raise DomainError(f"rel_tol must lie in (0, 1e-2), got {self.rel_tol!r}", field="rel_tol")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be positive", field="max_subdivisions")


@dataclass(frozen=True)
class IntegralResult:
    value: float
    est_abs_error: float
    subdivisions_used: int

    def __float__(self):
        return self.value


def _gk15(g, a, b):
    """One Gauss-Kronrod panel: (integral, error estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = g(c)
    res_k = fc * _WGK[7]
    res_g = fc * _WG[3]
    res_abs = abs(res_k)
    fv1 = [0.0] * 7
    fv2 = [0.0] * 7
    for j in range(7):
        dx = h * _XGK[j]
        f1 = g(c - dx)
        f2 = g(c + dx)
        fv1[j] = f1
        fv2[j] = f2
        res_k += _WGK[j] * (f1 + f2)
        res_abs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f1 + f2)
    mean = 0.5 * res_k
    res_asc = _WGK[7] * abs(fc - mean)
    for j in range(7):
        res_asc += _WGK[j] * (abs(fv1[j] - mean) + abs(fv2[j] - mean))
    result = res_k * h
    res_abs *= abs(h)
    res_asc *= abs(h)
    err = abs((res_k - res_g) * h)
    if res_asc != 0 and err != 0:
        err = res_asc * min(1.0, (200.0 * err / res_asc) ** 1.5)
    if res_abs > _TINY / (50.0 * _EPS):
        err = max(50.0 * _EPS * res_abs, err)
    return result, err


def _adaptive(g, panels, rel_tol, abs_tol, limit):
    heap = []
    total = 0.0
    total_err = 0.0
    for a, b in panels:
        r, e = _gk15(g, a, b)
        total += r
        total_err += e
        heapq.heappush(heap, (-e, a, b, r))
    n_sub = len(panels)
    while total_err > max(rel_tol * abs(total), abs_tol):
        if n_sub >= limit:
            return total, total_err, n_sub, False
        neg_e, a, b, r = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not (a < m < b):
            # panel cannot be split further in floating point
            heapq.heappush(heap, (neg_e, a, b, r))
            return total, total_err, n_sub, False
        r1, e1 = _gk15(g, a, m)
        r2, e2 = _gk15(g, m, b)
        total += r1 + r2 - r
        total_err += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, a, m, r1))
        heapq.heappush(heap, (-e2, m, b, r2))
        n_sub += 1
    # recompute the sums to shed accumulated cancellation
    total = math.fsum(item[3] for item in heap)
    return total, total_err, n_sub, True


def _checked(f):
    def g(x):
        try:
            y = f(x)
        except (OverflowError, ZeroDivisionError) as exc:
            raise EvaluationError(f"integrand failed at x={x!r}: {exc}") from exc
        y = float(y)
        if not math.isfinite(y):
            raise EvaluationError(f"integrand is not finite at x={x!r}")
        return y

    return g


def integrate_semi_infinite(
    f: Callable[[float], float],
    lower: float = 0.0,
    upper: float = math.inf,
    cfg: QuadratureConfig | None = None,
    *,
    singularity_exponent: float | None = None,
    scale: float | None = None,
    abs_tol: float = 0.0,
) -> IntegralResult:
    """Integrate ``f`` over ``[lower, upper]`` where ``upper`` may be ``math.inf``.

    Parameters
    ----------
    f : callable
        Integrand, continuous on the open interval.
    lower, upper : float
        Limits; ``upper = math.inf`` selects the tail map.
    cfg : QuadratureConfig
        Tolerance and subdivision budget.
    singularity_exponent : float, optional
        Exponent ``p`` of an ``x**p`` behaviour at ``lower``. Overrides
        ``cfg.endpoint_singularity_exponent``. Must exceed -1.
    scale : float, optional
        Length of the head panel, e.g. the temperature for Boltzmann
        integrands. Defaults to 1 (or the whole range for a finite upper limit).
    abs_tol : float
        Absolute error floor, useful for integrals that may vanish.

    Raises
    ------
    SingularityTooStrong
        If ``p <= -1``.
    ToleranceNotMet
        If the budget runs out; the best estimate is on ``exc.result``.
    """
    cfg = cfg or QuadratureConfig()
    p = singularity_exponent
    if p is None:
        p = cfg.endpoint_singularity_exponent
    if p is None:
        p = 0.0
    if not p > -1:
        raise SingularityTooStrong(f"endpoint exponent {p!r} is not integrable (need p > -1)")
    if not (lower >= 0 and math.isfinite(lower)):
        raise DomainError(f"lower limit must be finite and >= 0, got {lower!r}", field="lower")
    if not upper > lower:
        raise DomainError(f"upper limit {upper!r} must exceed lower {lower!r}", field="upper")

    g = _checked(f)
    infinite = math.isinf(upper)
    if scale is None:
        scale = 1.0 if infinite else upper - lower
    if not (scale > 0 and math.isfinite(scale)):
        raise DomainError(f"scale must be positive, got {scale!r}", field="scale")
    head = scale if infinite else min(scale, upper - lower)

    r = 1.0 / (1.0 + p) if p < 0 else 1.0

    def head_integrand(v):
        if r == 1.0:
            return head * g(lower + head * v)
        if v == 0.0:
            return 0.0
        return head * r * v ** (r - 1.0) * g(lower + head * v**r)

    pieces = [(0.0, 1.0)]
    shift_tail = lower + head

    def combined(t):
        # t in [0, 1]: head; t in [1, 2): tail (or the rest of a finite range)
        if t <= 1.0:
            return head_integrand(t)
        u = t - 1.0
        if infinite:
            w = 1.0 - u
            if w <= 0.0:
                return 0.0
            return scale * g(shift_tail + scale * u / w) / (w * w)
        return (upper - shift_tail) * g(shift_tail + (upper - shift_tail) * u)

    if infinite or shift_tail < upper:
        pieces.append((1.0, 2.0))

    value, err, n_sub, ok = _adaptive(
        combined, pieces, cfg.rel_tol, abs_tol, max(int(cfg.max_subdivisions), len(pieces))
    )
    result = IntegralResult(value, err, n_sub)
    if not ok:
        raise ToleranceNotMet(
            f"quadrature reached {n_sub} subdivisions with error {err:.3g} "
            f"(target {cfg.rel_tol * abs(value):.3g})",
            result,
        )
    return result


def _richardson(d_h, d_2h, d_4h):
    r1_h = (4.0 * d_h - d_2h) / 3.0
    r1_2h = (4.0 * d_2h - d_4h) / 3.0
    return (16.0 * r1_h - r1_2h) / 15.0


def derivative(f: Callable[[float], float], T: float, order: int = 1, *, rel_step: float | None = None) -> float:
    """Central finite difference with two levels of Richardson extrapolation.

    Uses steps ``h, 2h, 4h`` with ``h = rel_step * T``. The default
    ``rel_step`` is 1e-4 for first derivatives and 1e-3 for second
    derivatives, where round-off grows like ``eps / h**2``.
    """
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}", field="order")
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"T must be positive, got {T!r}", field="T")
    if rel_step is None:
        rel_step = 1e-4 if order == 1 else 1e-3
    h = T * rel_step

    def central(step):
        try:
            up = f(T + step)
            dn = f(T - step)
            mid = f(T) if order == 2 else 0.0
        except EvaluationError:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(f"function evaluation failed near T={T!r}: {exc}") from exc
        if order == 1:
            return (up - dn) / (2.0 * step)
        return (up - 2.0 * mid + dn) / (step * step)

    return _richardson(central(h), central(2 * h), central(4 * h))
