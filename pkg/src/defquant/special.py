"""Gamma function on the positive reals via the Lanczos approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["GammaResult", "gamma", "gamma_value", "GAMMA_MIN", "GAMMA_MAX"]

GAMMA_MIN = 0.1
GAMMA_MAX = 50.0

# Lanczos coefficients for g = 7, n = 9.
_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _rel_error_bound(x: float) -> float:
    # rounding in the power and exponential grows linearly with x;
    # measured against 40-digit references on [0.1, 50]
    return 5e-15 + 6e-16 * x


@dataclass(frozen=True)
class GammaResult:
    value: float
    est_rel_error: float

    def __float__(self):
        return self.value


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = _COEF[0]
    for i in range(1, len(_COEF)):
        acc += _COEF[i] / (z + i)
    t = z + _G + 0.5
    # split the power to keep the rounding error of t**(z+0.5) small
    return _SQRT_2PI * t ** (0.5 * (z + 0.5)) * math.exp(-t) * t ** (0.5 * (z + 0.5)) * acc


def gamma(x: float) -> GammaResult:
    """Gamma(x) for ``x`` in ``[0.1, 50]``.

    Arguments below 1/2 are lifted with ``Gamma(x) = Gamma(x + 1) / x``.

    Raises
    ------
    DomainError
        If ``x`` is outside the supported range.
    """
    x = float(x)
    if not (GAMMA_MIN <= x <= GAMMA_MAX):
        raise DomainError(
            f"gamma argument {x!r} outside supported range [{GAMMA_MIN}, {GAMMA_MAX}]", field="x"
        )
    if x < 0.5:
        return GammaResult(_lanczos(x + 1.0) / x, _rel_error_bound(x + 1.0) + 2.2e-16)
    return GammaResult(_lanczos(x), _rel_error_bound(x))


def gamma_value(x: float) -> float:
    return gamma(x).value
