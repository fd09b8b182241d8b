"""Semiclassical spectra and Boltzmann thermodynamics for the deformed
commutation rule ``[x, p] = i hbar (1 + s H)``."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Deformation,
    Family,
    Harmonic,
    PowerLaw,
    QuantumBox,
    SpectrumResult,
    ThermoPoint,
    UnitsConvention,
    validate_system,
)
from .errors import (  # noqa: E402
    ConfigError,
    DefquantError,
    DomainError,
    EvaluationError,
    OutOfDomain,
    PreconditionError,
    SingularityTooStrong,
    ToleranceNotMet,
    TruncationWarning,
    UnsupportedDeformation,
    UnsupportedDomain,
)

__all__ = [
    "Deformation",
    "Family",
    "Harmonic",
    "PowerLaw",
    "QuantumBox",
    "SpectrumResult",
    "ThermoPoint",
    "UnitsConvention",
    "validate_system",
    "ConfigError",
    "DefquantError",
    "DomainError",
    "EvaluationError",
    "OutOfDomain",
    "PreconditionError",
    "SingularityTooStrong",
    "ToleranceNotMet",
    "TruncationWarning",
    "UnsupportedDeformation",
    "UnsupportedDomain",
]
