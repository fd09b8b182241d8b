"""Boltzmann thermodynamics with a deformed phase-space cell.

The deformation rescales the elementary cell by ``f(E)`` (``1 + sE`` or
``exp(sE)``), so the density of states becomes ``rho0(E) / f(E)``. Energies
and ``s`` share one unit system; the Boltzmann factor uses the thermal
energy ``k_B * T``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

from .core import (
    NATURAL,
    Deformation,
    DivergenceDetected,
    Family,
    FixedPointSaturated,
    Harmonic,
    Route,
    SpectrumResult,
    SystemSpec,
    ThermoPoint,
    UnitsConvention,
    check_admissible,
    deformation_factor,
)
from .dynamics import frequency_law
from .errors import (
    CrossCheckWarning,
    DomainError,
    TruncationWarning,
    UnsupportedDomain,
)
from .quadrature import IntegralResult, QuadratureConfig, derivative, integrate_semi_infinite
from .special import gamma_value

__all__ = [
    "DosSpec",
    "Equipartition",
    "IdealGas",
    "PowerLawGas",
    "Phonon",
    "Tabulated",
    "EnergyLaw",
    "ExactRoute",
    "FirstOrderRoute",
    "LevelSum",
    "unperturbed_dos",
    "microstate_count",
    "deformed_dos",
    "partition_function",
    "partition_undeformed_closed",
    "internal_energy_exact",
    "internal_energy_log_derivative",
    "internal_energy_first_order",
    "unperturbed_energy",
    "heat_capacity",
    "effective_temperature",
    "partition_exponential",
    "partition_from_levels",
    "law_from_dos",
    "thermo_point",
    "SMALL_S_CROSSOVER",
    "harmonic_dos",
]

# below this value of |s| * U0 the exact energy switches to the first-order form
SMALL_S_CROSSOVER = 1e-6


@dataclass(frozen=True)
class DosSpec:
    """Undeformed density of states ``rho0(E) = prefactor * E**exponent``."""

    prefactor: float
    exponent: float
    units: UnitsConvention = NATURAL

    def __post_init__(self):
        if not (self.prefactor > 0 and math.isfinite(self.prefactor)):
            raise DomainError(f"DOS prefactor must be positive, got {self.prefactor!r}", field="prefactor")
        if not self.exponent > -1:
            raise DomainError(
                f"DOS exponent must exceed -1 for a finite partition function, got {self.exponent!r}",
                field="exponent",
            )

    @classmethod
    def from_system(cls, spec: SystemSpec, units: UnitsConvention = NATURAL) -> "DosSpec":
        """``dn/dE`` of the undeformed quantization rule, ``1 / (hbar omega_cl(E))``."""
        law = frequency_law(spec, units)
        return cls(1.0 / (units.hbar * law.prefactor), -law.exponent, units)

    @classmethod
    def power_law(cls, nu: float, prefactor: float = 1.0, units: UnitsConvention = NATURAL) -> "DosSpec":
        if not nu > 0:
            raise DomainError(f"nu must be positive, got {nu!r}", field="nu")
        return cls(prefactor, 1.0 / nu - 0.5, units)

    @property
    def energy_coefficient(self) -> float:
        """``U0 / (k_B T)`` per particle, i.e. ``exponent + 1``."""
        return self.exponent + 1.0


def unperturbed_dos(dos: DosSpec, E: float) -> float:
    if E > 0:
        return dos.prefactor * E**dos.exponent
    if E == 0 and dos.exponent >= 0:
        return dos.prefactor if dos.exponent == 0 else 0.0
    raise DomainError(f"density of states undefined at E={E!r}", field="E")


def deformed_dos(dos: DosSpec, d: Deformation, E: float) -> float:
    if not E > 0:
        raise DomainError(f"E must be positive, got {E!r}", field="E")
    check_admissible(d, E, strict=True)
    return unperturbed_dos(dos, E) / deformation_factor(d, E)


def microstate_count(dos: DosSpec, d: Deformation, E: float, dE: float) -> float:
    """States in ``[E, E + dE]`` for a small window: ``rho0(E) dE / f(E)``."""
    if not dE > 0:
        raise DomainError(f"dE must be positive, got {dE!r}", field="dE")
    return deformed_dos(dos, d, E) * dE


def _thermal(T: float, units: UnitsConvention) -> float:
    if not (T > 0 and math.isfinite(T)):
        raise DomainError(f"temperature must be positive, got {T!r}", field="T")
    return units.boltzmann * T


def partition_function(
    dos: DosSpec, d: Deformation, T: float, cfg: QuadratureConfig | None = None
) -> IntegralResult:
    """``Z = int_0^inf exp(-E / k_B T) rho0(E) / f(E) dE`` by quadrature.

    Raises
    ------
    UnsupportedDomain
        For the linear family with ``s < 0``: ``1/(1 + sE)`` is not integrable
        at ``E = -1/s``.
    DomainError
        For the exponential family when ``1/(k_B T) + s <= 0``.
    """
    cfg = cfg or QuadratureConfig()
    beta = 1.0 / _thermal(T, dos.units)
    s = d.s
    if d.family is Family.LINEAR:
        if s < 0:
            raise UnsupportedDomain(
                "exact partition function undefined for s<0 (non-integrable at E=-1/s); use first-order"
            )

        def integrand(E):
            return math.exp(-beta * E) * unperturbed_dos(dos, E) / (1.0 + s * E)

        decay = beta
    else:
        decay = beta + s
        if not decay > 0:
            raise DomainError(f"1/T + s must be positive, got {decay!r}", field="s")

        def integrand(E):
            return math.exp(-decay * E) * unperturbed_dos(dos, E)

    return integrate_semi_infinite(
        integrand, 0.0, math.inf, cfg, singularity_exponent=min(dos.exponent, 0.0), scale=1.0 / decay
    )


def partition_undeformed_closed(dos: DosSpec, T: float) -> float:
    """``Z0 = prefactor * (k_B T)**(a+1) * Gamma(a+1)`` for ``rho0 = prefactor * E**a``."""
    theta = _thermal(T, dos.units)
    c = dos.energy_coefficient
    return dos.prefactor * theta**c * gamma_value(c)


def _require_linear_nonnegative(d: Deformation):
    if d.family is not Family.LINEAR:
        return
    if d.s < 0:
        raise UnsupportedDomain("exact route undefined for s<0; use first-order")


def internal_energy_exact(
    dos: DosSpec, d: Deformation, T: float, cfg: QuadratureConfig | None = None
) -> float:
    """Internal energy from ``U = (Z0/Z - 1) / s``.

    Falls back to the first-order expression when ``|s| U0 <= 1e-6``, where
    the ratio is a 0/0 form. For the exponential family the energy is the
    undeformed one at the effective temperature.
    """
    _require_linear_nonnegative(d)
    units = dos.units
    theta = _thermal(T, units)
    if d.family is Family.EXPONENTIAL:
        T_star = effective_temperature(T, d.s, units)
        return dos.energy_coefficient * units.boltzmann * T_star
    u0 = dos.energy_coefficient * theta
    if abs(d.s) * u0 <= SMALL_S_CROSSOVER:
        return internal_energy_first_order(law_from_dos(dos), d.s, T, units)
    z = partition_function(dos, d, T, cfg).value
    z0 = partition_function(dos, d.with_s(0.0), T, cfg).value
    return (z0 / z - 1.0) / d.s


def internal_energy_log_derivative(
    dos: DosSpec, d: Deformation, T: float, cfg: QuadratureConfig | None = None
) -> float:
    """``U = k_B T**2 d(ln Z)/dT`` with the derivative taken numerically."""
    _require_linear_nonnegative(d)

    def log_z(t):
        return math.log(partition_function(dos, d, t, cfg).value)

    return dos.units.boltzmann * T * T * derivative(log_z, T, 1)


@dataclass(frozen=True)
class Equipartition:
    """``U0 = coefficient * N * k_B T``."""

    coefficient: float
    N: int = 1


@dataclass(frozen=True)
class IdealGas:
    N: int = 1


@dataclass(frozen=True)
class PowerLawGas:
    N: int = 1
    nu: float = 2.0


@dataclass(frozen=True)
class Phonon:
    """Low-temperature phonon gas, ``U0 = A T**4``."""

    A: float = 1.0


@dataclass(frozen=True)
class Tabulated:
    """Arbitrary ``U0(T)``; derivatives are taken numerically."""

    U0: Callable[[float], float]


EnergyLaw = Union[Equipartition, IdealGas, PowerLawGas, Phonon, Tabulated]


def _linear_coefficient(law) -> float | None:
    if isinstance(law, IdealGas):
        return 0.5 * law.N
    if isinstance(law, PowerLawGas):
        if not law.nu > 0:
            raise DomainError(f"nu must be positive, got {law.nu!r}", field="nu")
        return (1.0 / law.nu + 0.5) * law.N
    if isinstance(law, Equipartition):
        return law.coefficient * law.N
    return None


def law_from_dos(dos: DosSpec) -> Equipartition:
    return Equipartition(dos.energy_coefficient, 1)


def unperturbed_energy(law: EnergyLaw, T: float, units: UnitsConvention = NATURAL) -> float:
    theta = _thermal(T, units)
    c = _linear_coefficient(law)
    if c is not None:
        return c * theta
    if isinstance(law, Phonon):
        return law.A * T**4
    if isinstance(law, Tabulated):
        return float(law.U0(T))
    raise DomainError(f"unknown energy law {law!r}", field="law")


def internal_energy_first_order(
    law: EnergyLaw, s: float, T: float, units: UnitsConvention = NATURAL
) -> float:
    """``U = U0 - s k_B T**2 dU0/dT``, the leading correction in ``s``."""
    theta = _thermal(T, units)
    c = _linear_coefficient(law)
    if c is not None:
        return c * theta * (1.0 - s * theta)
    if isinstance(law, Phonon):
        return law.A * T**4 * (1.0 - 4.0 * s * theta)
    if isinstance(law, Tabulated):
        u0 = float(law.U0(T))
        du0 = derivative(law.U0, T, 1)
        return u0 - s * units.boltzmann * T * T * du0
    raise DomainError(f"unknown energy law {law!r}", field="law")


@dataclass(frozen=True)
class ExactRoute:
    dos: DosSpec
    deformation: Deformation
    cfg: QuadratureConfig | None = None


@dataclass(frozen=True)
class FirstOrderRoute:
    law: EnergyLaw
    s: float
    units: UnitsConvention = NATURAL


def heat_capacity(route: ExactRoute | FirstOrderRoute, T: float) -> float:
    """``C = dU/dT`` along the chosen route.

    Named first-order laws use their analytic derivatives; the exact route
    and tabulated laws go through the Richardson derivative engine.
    """
    if isinstance(route, FirstOrderRoute):
        law, s, units = route.law, route.s, route.units
        k = units.boltzmann
        theta = _thermal(T, units)
        c = _linear_coefficient(law)
        if c is not None:
            return c * k * (1.0 - 2.0 * s * theta)
        if isinstance(law, Phonon):
            return law.A * (4.0 * T**3 - 20.0 * s * k * T**4)
        if isinstance(law, Tabulated):
            d1 = derivative(law.U0, T, 1)
            d2 = derivative(law.U0, T, 2)
            return d1 - s * k * (2.0 * T * d1 + T * T * d2)
        raise DomainError(f"unknown energy law {law!r}", field="law")
    if isinstance(route, ExactRoute):
        _require_linear_nonnegative(route.deformation)
        return derivative(lambda t: internal_energy_exact(route.dos, route.deformation, t, route.cfg), T, 1)
    raise DomainError(f"unknown route {route!r}", field="route")


def effective_temperature(T: float, s: float, units: UnitsConvention = NATURAL) -> float:
    """``T*`` with ``1/(k_B T*) = 1/(k_B T) + s``."""
    theta = _thermal(T, units)
    inv = 1.0 / theta + s
    if not inv > 0:
        raise DomainError(f"1/T + s must be positive, got {inv!r}", field="s")
    return 1.0 / inv / units.boltzmann


def partition_exponential(
    dos: DosSpec, s: float, T: float, cfg: QuadratureConfig | None = None
) -> IntegralResult:
    """``Z = int exp(-E/k_B T - sE) rho0 dE`` by direct quadrature.

    The result is compared against the undeformed closed form at the
    effective temperature; a relative mismatch above 1e-6 raises a
    :class:`CrossCheckWarning`.
    """
    T_star = effective_temperature(T, s, dos.units)
    direct = partition_function(dos, Deformation(s, Family.EXPONENTIAL), T, cfg)
    try:
        mapped = partition_undeformed_closed(dos, T_star)
    except DomainError:
        mapped = None
    if mapped is not None and abs(direct.value - mapped) > 1e-6 * abs(mapped):
        warnings.warn(
            f"direct Z={direct.value!r} differs from Z0(T*)={mapped!r}", CrossCheckWarning, stacklevel=2
        )
    return direct


@dataclass(frozen=True)
class LevelSum:
    value: float
    tail_bound: float


def partition_from_levels(levels: SpectrumResult, T: float, units: UnitsConvention = NATURAL) -> LevelSum:
    """Discrete Boltzmann sum over computed levels.

    ``tail_bound`` estimates the omitted part: zero past a divergence,
    infinite when levels accumulate at a fixed point, otherwise a geometric
    continuation of the last spacing.
    """
    theta = _thermal(T, units)
    energies = levels.energies
    if not energies:
        raise DomainError("no levels to sum", field="levels")
    z = math.fsum(math.exp(-E / theta) for E in energies)
    cut = levels.cutoff
    if isinstance(cut, DivergenceDetected):
        tail = 0.0
    elif isinstance(cut, FixedPointSaturated):
        tail = math.inf
    elif len(energies) >= 2 and energies[-1] > energies[-2]:
        q = math.exp(-(energies[-1] - energies[-2]) / theta)
        tail = math.exp(-energies[-1] / theta) * q / (1.0 - q)
    else:
        tail = math.inf
    if tail > 1e-6 * z:
        warnings.warn(f"level sum truncated: tail bound {tail!r} vs sum {z!r}", TruncationWarning, stacklevel=2)
    return LevelSum(z, tail)


def thermo_point(route: ExactRoute | FirstOrderRoute, T: float) -> ThermoPoint:
    """Evaluate ``(Z, U, C)`` at one temperature along a route."""
    if isinstance(route, ExactRoute):
        dos, d = route.dos, route.deformation
        _require_linear_nonnegative(d)
        z = partition_function(dos, d, T, route.cfg).value
        u = internal_energy_exact(dos, d, T, route.cfg)
        c = heat_capacity(route, T)
        return ThermoPoint(T, z, u, c, Route.EXACT)
    u = internal_energy_first_order(route.law, route.s, T, route.units)
    c = heat_capacity(route, T)
    return ThermoPoint(T, None, u, c, Route.FIRST_ORDER)


def harmonic_dos(omega0: float = 1.0, units: UnitsConvention = NATURAL) -> DosSpec:
    return DosSpec.from_system(Harmonic(omega0), units)
