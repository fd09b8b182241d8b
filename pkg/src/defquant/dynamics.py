"""Classical oscillation frequency omega_cl(E) for the supported potentials.

Every supported system has a power-law frequency
``omega_cl(E) = prefactor * E**exponent``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import NATURAL, Harmonic, PowerLaw, QuantumBox, SystemSpec, UnitsConvention, validate_system
from .errors import DomainError
from .special import gamma_value

__all__ = [
    "FrequencyLaw",
    "alpha_coefficient",
    "frequency_law",
    "eval_frequency",
    "classical_period",
]


@dataclass(frozen=True)
class FrequencyLaw:
    prefactor: float
    exponent: float

    def __call__(self, E: float) -> float:
        return eval_frequency(self, E)


def alpha_coefficient(k: float, nu: float, m: float = 1.0, units: UnitsConvention = NATURAL) -> float:
    """Frequency prefactor for ``U(x) = k |x|**nu``.

    alpha = sqrt(2 pi) nu k**(1/nu) Gamma(1/2 + 1/nu) / (2 sqrt(m) Gamma(1/nu))

    ``units`` is accepted for signature uniformity; alpha is independent of hbar.
    """
    validate_system(PowerLaw(k=k, nu=nu, m=m))
    inv = 1.0 / nu
    return (
        math.sqrt(2.0 * math.pi) * nu * k**inv * gamma_value(0.5 + inv)
        / (2.0 * math.sqrt(m) * gamma_value(inv))
    )


def frequency_law(spec: SystemSpec, units: UnitsConvention = NATURAL) -> FrequencyLaw:
    validate_system(spec)
    if isinstance(spec, QuantumBox):
        return FrequencyLaw(math.pi / spec.a * math.sqrt(2.0 / spec.m), 0.5)
    if isinstance(spec, Harmonic):
        return FrequencyLaw(float(spec.omega0), 0.0)
    return FrequencyLaw(alpha_coefficient(spec.k, spec.nu, spec.m, units), 0.5 - 1.0 / spec.nu)


def eval_frequency(law: FrequencyLaw, E: float) -> float:
    if law.exponent == 0:
        return law.prefactor
    if E > 0:
        return law.prefactor * E**law.exponent
    if E == 0 and law.exponent > 0:
        return 0.0
    raise DomainError(
        f"classical frequency undefined at E={E!r} for exponent {law.exponent!r}", field="E"
    )


def classical_period(k: float, nu: float, E: float, m: float = 1.0, *, rel_tol: float = 1e-12) -> float:
    """Period of the bounded orbit in ``k |x|**nu`` from turning-point quadrature.

    Integrates ``4 * int_0^x_t dx / sqrt(2 (E - k x**nu) / m)`` directly,
    without using the Gamma-function closed form. Serves as an independent
    check of :func:`alpha_coefficient`.
    """
    from .quadrature import QuadratureConfig, integrate_semi_infinite

    if not (k > 0 and nu > 0 and E > 0 and m > 0):
        raise DomainError("k, nu, E and m must all be positive")
    x_t = (E / k) ** (1.0 / nu)
    cfg = QuadratureConfig(rel_tol=rel_tol, max_subdivisions=2000)

    # u = x / x_t on [0, 1/2]: smooth apart from the u**nu term at u = 0
    def inner(u):
        return 1.0 / math.sqrt(-math.expm1(nu * math.log(u))) if u > 0 else 1.0

    # u = 1 - v**2 on v in [0, sqrt(1/2)] removes the turning-point singularity
    def outer(v):
        if v == 0:
            return 2.0 / math.sqrt(nu)
        return 2.0 * v / math.sqrt(-math.expm1(nu * math.log1p(-v * v)))

    dimless = (
        integrate_semi_infinite(inner, 0.0, 0.5, cfg).value
        + integrate_semi_infinite(outer, 0.0, math.sqrt(0.5), cfg).value
    )
    return 4.0 * x_t * math.sqrt(m / (2.0 * E)) * dimless
