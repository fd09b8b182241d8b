"""Scalar Dormand-Prince 5(4) integrator that lands exactly on integer times."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConfigError, EvaluationError

__all__ = ["OdeConfig", "IntegerLanding", "integrate_to_integers"]

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = _A[6] + (0.0,)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

MIN_STEP = 1e-12


@dataclass(frozen=True)
class OdeConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps_per_level: int = 10000
    divergence_threshold: float = 1e12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and 0 < v < 1):
                raise ConfigError(f"{name} must lie in (0, 1), got {v!r}")
        if not (isinstance(self.max_steps_per_level, int) and self.max_steps_per_level > 0):
            raise ConfigError(f"max_steps_per_level must be a positive integer, got {self.max_steps_per_level!r}")
        if not (self.divergence_threshold > 0):
            raise ConfigError(f"divergence_threshold must be positive, got {self.divergence_threshold!r}")


@dataclass
class IntegerLanding:
    """Values of the solution at ``t = 0, 1, 2, ...`` and why integration stopped.

    ``stop`` is ``"cap"``, ``"blowup"`` (``t_stop, y_stop`` hold the last
    accepted state) or ``"halt"`` (the caller's predicate fired after the
    last stored value).
    """

    values: list[float] = field(default_factory=list)
    stop: str = "cap"
    t_stop: float = 0.0
    y_stop: float = 0.0
    steps: int = 0


def _dp_step(rhs, t, y, h, k1):
    k = [k1]
    for i in range(1, 7):
        yi = y + h * sum(a * kj for a, kj in zip(_A[i], k))
        k.append(rhs(t + _C[i] * h, yi))
    y_new = y + h * sum(b * kj for b, kj in zip(_B5, k))
    err = h * sum(e * kj for e, kj in zip(_E, k))
    return y_new, err, k[6]


def integrate_to_integers(
    rhs: Callable[[float, float], float],
    y0: float,
    n_max: int,
    cfg: OdeConfig,
    *,
    blowup: Callable[[float], bool] = lambda y: False,
    halt: Callable[[float], bool] = lambda y: False,
) -> IntegerLanding:
    """Integrate ``y' = rhs(t, y)`` from ``t = 0`` and sample at every integer up to ``n_max``.

    Integration stops early when ``blowup(y)`` becomes true or the step size
    collapses below ``MIN_STEP`` (reported as ``"blowup"``), or when
    ``halt(y)`` is true at a sampled integer.
    """
    out = IntegerLanding(values=[y0])
    if halt(y0):
        out.stop = "halt"
        return out
    t = 0.0
    y = y0
    k1 = rhs(t, y)
    h = 0.1
    for target in range(1, n_max + 1):
        steps = 0
        while t < target:
            if steps >= cfg.max_steps_per_level:
                raise EvaluationError(
                    f"step budget of {cfg.max_steps_per_level} exhausted between n={target - 1} and n={target}"
                )
            land = t + h >= target
            h_try = target - t if land else h
            try:
                y_new, err, k_new = _dp_step(rhs, t, y, h_try, k1)
            except (OverflowError, ValueError, ZeroDivisionError):
                y_new, err, k_new = math.inf, math.inf, math.inf
            steps += 1
            out.steps += 1
            if math.isfinite(y_new) and math.isfinite(err):
                scale = cfg.abs_tol + cfg.rel_tol * max(abs(y), abs(y_new))
                ratio = abs(err) / scale
            else:
                ratio = math.inf
            if ratio <= 1.0:
                t = float(target) if land else t + h_try
                y = y_new
                k1 = k_new
                if blowup(y):
                    out.stop, out.t_stop, out.y_stop = "blowup", t, y
                    return out
                factor = 5.0 if ratio == 0 else min(5.0, max(0.2, 0.9 * ratio ** -0.2))
                if not land:
                    h = h_try * factor
                else:
                    h = max(h, h_try * factor) if factor >= 1 else h_try * factor
            else:
                factor = 0.2 if not math.isfinite(ratio) else max(0.2, 0.9 * ratio ** -0.2)
                h = h_try * factor
                if h < MIN_STEP:
                    out.stop, out.t_stop, out.y_stop = "blowup", t, y
                    return out
        out.values.append(y)
        if halt(y):
            out.stop = "halt"
            out.t_stop, out.y_stop = t, y
            return out
    out.t_stop, out.y_stop = t, y
    return out
