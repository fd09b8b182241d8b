"""Semiclassical spectra under the deformation hbar -> hbar * f(E).

The levels solve ``dE/dn = hbar * f(E) * omega_cl(E)`` with ``E(0) = E0``,
sampled at integer ``n``. Closed forms exist for the box (``s > 0``) and the
oscillator; they double as oracles for the integrator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import (
    NATURAL,
    Deformation,
    DivergenceDetected,
    Family,
    FixedPointSaturated,
    Harmonic,
    LevelCapReached,
    PowerLaw,
    QuantumBox,
    SpectrumResult,
    SystemSpec,
    UnitsConvention,
    check_admissible,
    validate_system,
)
from .dynamics import FrequencyLaw, frequency_law
from .errors import (
    DomainError,
    EvaluationError,
    OutOfDomain,
    PreconditionError,
    ToleranceNotMet,
    UnsupportedDeformation,
)
from .ode import OdeConfig, integrate_to_integers
from .quadrature import QuadratureConfig, integrate_semi_infinite

__all__ = [
    "OdeConfig",
    "Stability",
    "FixedPointInfo",
    "BoxCapacity",
    "fixed_point",
    "default_ground_energy",
    "box_gamma",
    "solve_spectrum_ode",
    "box_spectrum_closed",
    "oscillator_spectrum_closed",
    "powerlaw_undeformed_level",
    "closed_form_spectrum",
    "box_state_capacity",
]


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NONE = "none"


@dataclass(frozen=True)
class FixedPointInfo:
    exists: bool
    E_f: float | None
    stability: Stability


def fixed_point(d: Deformation) -> FixedPointInfo:
    """Zero of ``1 + sE``; attracting for ``s < 0``, repelling for ``s > 0``."""
    if d.family is not Family.LINEAR:
        raise UnsupportedDeformation("the exponential deformation has no finite fixed point")
    if d.s == 0:
        return FixedPointInfo(False, None, Stability.NONE)
    return FixedPointInfo(True, -1.0 / d.s, Stability.STABLE if d.s < 0 else Stability.UNSTABLE)


def box_gamma(spec: QuantumBox, units: UnitsConvention = NATURAL) -> float:
    return math.pi * units.hbar / (math.sqrt(2.0 * spec.m) * spec.a)


def _action_power(law: FrequencyLaw) -> float:
    return 1.0 - law.exponent


def default_ground_energy(spec: SystemSpec, units: UnitsConvention = NATURAL) -> float:
    """Ground level used when the system does not carry one.

    Box: 0. Oscillator: ``hbar * omega0 / 2``. Power law: the undeformed
    level at ``n = 1/2`` started from ``E = 0``.
    """
    validate_system(spec)
    if isinstance(spec, QuantumBox):
        return 0.0
    if isinstance(spec, Harmonic):
        return spec.ground(units)
    if spec.ground_energy is not None:
        return spec.ground_energy
    law = frequency_law(spec, units)
    q = _action_power(law)
    return (0.5 * q * units.hbar * law.prefactor) ** (1.0 / q)


def solve_spectrum_ode(
    spec: SystemSpec,
    d: Deformation,
    E0: float | None = None,
    n_max: int = 10,
    cfg: OdeConfig | None = None,
    units: UnitsConvention = NATURAL,
) -> SpectrumResult:
    """Levels ``E_0 .. E_n_max`` from adaptive integration of the deformed quantization rule.

    The integration variable is ``y = E**q / q`` with ``q = 1 - exponent`` of
    the frequency law, for which ``dy/dn = hbar * prefactor * f(E)``. This keeps
    the right-hand side Lipschitz at ``E = 0`` so the box can start from the
    origin.

    Stops early with ``DivergenceDetected`` once ``E`` passes
    ``cfg.divergence_threshold`` (or the step collapses), and with
    ``FixedPointSaturated`` once a level is within ``cfg.abs_tol`` of ``-1/s``
    for ``s < 0``.
    """
    cfg = cfg or OdeConfig()
    validate_system(spec)
    if not (isinstance(n_max, int) and n_max >= 0):
        raise DomainError(f"n_max must be a nonnegative integer, got {n_max!r}", field="n_max")
    if E0 is None:
        E0 = default_ground_energy(spec, units)
    if not (math.isfinite(E0) and E0 >= 0):
        raise PreconditionError(f"E0 must be >= 0, got {E0!r}", field="E0")
    check_admissible(d, E0, field="E0")

    law = frequency_law(spec, units)
    if law.exponent < 0 and E0 == 0:
        raise PreconditionError(
            "omega_cl diverges at E=0 for nu < 2; supply a strictly positive E0", field="E0"
        )
    q = _action_power(law)
    rate = units.hbar * law.prefactor
    s = d.s
    linear = d.family is Family.LINEAR

    def energy(y):
        return (q * y) ** (1.0 / q) if y > 0 else 0.0

    if linear:
        def rhs(n, y):
            return rate * (1.0 + s * energy(y))
    else:
        def rhs(n, y):
            return rate * math.exp(s * energy(y))

    threshold = cfg.divergence_threshold
    if linear and s < 0:
        E_f = -1.0 / s

        def halt(y):
            return abs(energy(y) - E_f) < cfg.abs_tol
    else:
        E_f = None

        def halt(y):
            return False

    y0 = E0**q / q
    run = integrate_to_integers(
        rhs, y0, n_max, cfg, blowup=lambda y: not energy(y) <= threshold, halt=halt
    )
    levels = tuple((n, energy(y)) for n, y in enumerate(run.values))

    if run.stop == "blowup":
        n_star = run.t_stop + _tail_distance(rhs, run.y_stop, law, d)
        cutoff = DivergenceDetected(n_star)
    elif run.stop == "halt":
        cutoff = FixedPointSaturated(E_f)
    else:
        cutoff = LevelCapReached()
    return SpectrumResult(levels, cutoff, "ode")


def _tail_distance(rhs, y, law: FrequencyLaw, d: Deformation) -> float:
    """Remaining ``n`` from the stopping point to the pole, ``int_y^inf dy / rhs``.

    Zero when the integral diverges, i.e. growth without a finite-``n`` pole.
    """
    if d.s <= 0 or y <= 0:
        return 0.0
    if d.family is Family.LINEAR and law.exponent <= 0:
        return 0.0
    cfg = QuadratureConfig(rel_tol=1e-6, max_subdivisions=400)
    try:
        res = integrate_semi_infinite(lambda u: 1.0 / rhs(0.0, u), y, math.inf, cfg, scale=y)
    except ToleranceNotMet as exc:
        res = exc.result
    except EvaluationError:
        return 0.0
    return res.value


def box_spectrum_closed(n: int, s: float, spec: QuantumBox, units: UnitsConvention = NATURAL) -> float:
    """``E_n = tan(gamma n sqrt(s))**2 / s`` with ``gamma = pi hbar / (sqrt(2m) a)``.

    Raises
    ------
    OutOfDomain
        When ``gamma n sqrt(s) >= pi/2``; ``n_star`` marks the divergence.
    """
    validate_system(spec)
    if not s > 0:
        raise DomainError(f"closed-form box spectrum needs s > 0, got {s!r}", field="s")
    if not (isinstance(n, int) and n >= 0):
        raise DomainError(f"n must be a nonnegative integer, got {n!r}", field="n")
    g = box_gamma(spec, units) * math.sqrt(s)
    theta = g * n
    if theta >= 0.5 * math.pi:
        raise OutOfDomain(f"level n={n} lies beyond the divergence", n_star=0.5 * math.pi / g)
    return math.tan(theta) ** 2 / s


def oscillator_spectrum_closed(
    n: int, d: Deformation, spec: Harmonic, units: UnitsConvention = NATURAL
) -> float:
    """``E_n = (E0 + 1/s) exp(s hbar omega0 n) - 1/s``; ``s = 0`` gives ``E0 + n hbar omega0``."""
    validate_system(spec)
    if d.family is not Family.LINEAR:
        raise UnsupportedDeformation("closed-form oscillator spectrum exists only for the linear deformation")
    E0 = spec.ground(units)
    check_admissible(d, E0, field="E0")
    x = d.s * units.hbar * spec.omega0 * n
    if d.s == 0:
        return E0 + n * units.hbar * spec.omega0
    # same expression rearranged to avoid cancellation for small s
    return E0 * math.exp(x) + math.expm1(x) / d.s


def powerlaw_undeformed_level(n: float, spec: PowerLaw, E0: float | None = None, units: UnitsConvention = NATURAL) -> float:
    """Exact ``s = 0`` level ``[E0**q + q hbar alpha n]**(1/q)``, ``q = 1/2 + 1/nu``."""
    law = frequency_law(spec, units)
    q = _action_power(law)
    if E0 is None:
        E0 = default_ground_energy(spec, units)
    return (E0**q + q * units.hbar * law.prefactor * n) ** (1.0 / q)


def closed_form_spectrum(
    spec: SystemSpec, d: Deformation, n_max: int, units: UnitsConvention = NATURAL
) -> SpectrumResult:
    """Closed-form levels where they exist (box with ``s >= 0``, linear oscillator)."""
    validate_system(spec)
    if d.family is not Family.LINEAR:
        raise UnsupportedDeformation("no closed form for the exponential deformation")
    levels = []
    cutoff = LevelCapReached()
    if isinstance(spec, QuantumBox):
        if d.s < 0:
            raise UnsupportedDeformation("no closed form for the box with s < 0")
        g = box_gamma(spec, units)
        for n in range(n_max + 1):
            if d.s == 0:
                levels.append((n, (g * n) ** 2))
                continue
            try:
                levels.append((n, box_spectrum_closed(n, d.s, spec, units)))
            except OutOfDomain as exc:
                cutoff = DivergenceDetected(exc.n_star)
                break
    elif isinstance(spec, Harmonic):
        for n in range(n_max + 1):
            levels.append((n, oscillator_spectrum_closed(n, d, spec, units)))
    else:
        raise UnsupportedDeformation("no closed form for the power-law potential")
    return SpectrumResult(tuple(levels), cutoff, "closed_form")


@dataclass(frozen=True)
class BoxCapacity:
    """Number of finite levels with ``n >= 1`` for the box with ``s > 0``.

    ``commensurate`` flags ``pi / (gamma sqrt(s))`` being an integer.
    """

    count: int
    n_star: float
    commensurate: bool


def _near_integer(x: float, rel: float = 1e-12) -> int | None:
    r = round(x)
    if abs(x - r) <= rel * max(1.0, abs(x)):
        return int(r)
    return None


def box_state_capacity(s: float, spec: QuantumBox, units: UnitsConvention = NATURAL) -> BoxCapacity:
    validate_system(spec)
    if not s > 0:
        raise DomainError(f"state capacity is defined for s > 0 only, got {s!r}", field="s")
    n_star = 0.5 * math.pi / (box_gamma(spec, units) * math.sqrt(s))
    exact = _near_integer(n_star)
    ceiling = exact if exact is not None else math.ceil(n_star)
    return BoxCapacity(ceiling - 1, n_star, _near_integer(2.0 * n_star) is not None)
