"""Domain types shared across the package.

All quantities use one consistent set of units. By default hbar = k_B = 1;
the deformation parameter ``s`` is an inverse energy, temperatures enter
the Boltzmann factor as ``k_B * T``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Union

from .errors import DomainError, PreconditionError

__all__ = [
    "UnitsConvention",
    "QuantumBox",
    "Harmonic",
    "PowerLaw",
    "SystemSpec",
    "Family",
    "Deformation",
    "Cutoff",
    "LevelCapReached",
    "DivergenceDetected",
    "FixedPointSaturated",
    "SpectrumResult",
    "Route",
    "ThermoPoint",
    "validate_system",
    "deformation_factor",
    "check_admissible",
]


def _require_positive(value, name):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}", field=name)


@dataclass(frozen=True)
class UnitsConvention:
    hbar: float = 1.0
    boltzmann: float = 1.0

    def __post_init__(self):
        _require_positive(self.hbar, "hbar")
        _require_positive(self.boltzmann, "boltzmann")


NATURAL = UnitsConvention()


@dataclass(frozen=True)
class QuantumBox:
    """Particle of mass ``m`` confined to ``0 < x < a``."""

    a: float = 1.0
    m: float = 1.0


@dataclass(frozen=True)
class Harmonic:
    """Oscillator with classical frequency ``omega0``.

    ``ground_energy=None`` means the default ``hbar * omega0 / 2``.
    """

    omega0: float = 1.0
    ground_energy: float | None = None

    def ground(self, units: UnitsConvention = NATURAL) -> float:
        if self.ground_energy is None:
            return 0.5 * units.hbar * self.omega0
        return self.ground_energy


@dataclass(frozen=True)
class PowerLaw:
    """Potential ``k |x|**nu`` for a particle of mass ``m``.

    ``ground_energy=None`` selects the default documented in
    :func:`defquant.spectrum.default_ground_energy`.
    """

    k: float = 1.0
    nu: float = 2.0
    m: float = 1.0
    ground_energy: float | None = None


SystemSpec = Union[QuantumBox, Harmonic, PowerLaw]


def validate_system(spec: SystemSpec) -> SystemSpec:
    """Check positivity of every parameter and return ``spec`` unchanged."""
    if isinstance(spec, QuantumBox):
        _require_positive(spec.a, "a")
        _require_positive(spec.m, "m")
    elif isinstance(spec, Harmonic):
        _require_positive(spec.omega0, "omega0")
        if spec.ground_energy is not None:
            g = spec.ground_energy
            if not (math.isfinite(g) and g >= 0):
                raise DomainError(f"ground_energy must be >= 0, got {g!r}", field="ground_energy")
    elif isinstance(spec, PowerLaw):
        _require_positive(spec.k, "k")
        _require_positive(spec.nu, "nu")
        _require_positive(spec.m, "m")
        if spec.ground_energy is not None:
            g = spec.ground_energy
            if not (math.isfinite(g) and g >= 0):
                raise DomainError(f"ground_energy must be >= 0, got {g!r}", field="ground_energy")
    else:
        raise DomainError(f"unknown system type {type(spec).__name__}", field="system")
    return spec


class Family(enum.Enum):
    LINEAR = "linear"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class Deformation:
    """Energy-dependent Planck constant ``hbar -> hbar * f(E)``.

    ``LINEAR`` uses ``f(E) = 1 + s E`` and ``EXPONENTIAL`` uses ``exp(s E)``.
    """

    s: float = 0.0
    family: Family = Family.LINEAR

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise DomainError(f"s must be finite, got {self.s!r}", field="s")
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family(self.family))

    def factor(self, E: float) -> float:
        return deformation_factor(self, E)

    def with_s(self, s: float) -> "Deformation":
        return replace(self, s=s)


def deformation_factor(d: Deformation, E: float) -> float:
    if d.family is Family.LINEAR:
        return 1.0 + d.s * E
    return math.exp(d.s * E)


def check_admissible(d: Deformation, E: float, *, strict: bool = False, field: str = "E"):
    """Reject energies with ``1 + sE < 0`` (``<= 0`` when ``strict``) for the linear family."""
    if d.family is not Family.LINEAR:
        return
    f = 1.0 + d.s * E
    if f < 0 or (strict and f <= 0):
        rel = "> 0" if strict else ">= 0"
        raise PreconditionError(
            f"1 + s*E must be {rel} (s={d.s!r}, {field}={E!r}, 1+sE={f!r})", field=field
        )


@dataclass(frozen=True)
class LevelCapReached:
    pass


@dataclass(frozen=True)
class DivergenceDetected:
    n_star: float


@dataclass(frozen=True)
class FixedPointSaturated:
    E_f: float


Cutoff = Union[LevelCapReached, DivergenceDetected, FixedPointSaturated]


@dataclass(frozen=True)
class SpectrumResult:
    levels: tuple[tuple[int, float], ...]
    cutoff: Cutoff
    method: str  # "closed_form" or "ode"

    @property
    def energies(self) -> list[float]:
        return [E for _, E in self.levels]

    def __len__(self):
        return len(self.levels)


class Route(enum.Enum):
    EXACT = "exact"
    FIRST_ORDER = "first-order"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class ThermoPoint:
    T: float
    Z: float | None
    U: float
    C: float
    route: Route

    def __post_init__(self):
        if self.Z is not None and not self.Z > 0:
            raise DomainError(f"partition function must be positive, got {self.Z!r}", field="Z")
