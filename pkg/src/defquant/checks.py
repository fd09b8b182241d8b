"""Oracle suite behind ``defquant selftest``.

Each check compares an implementation route against an independent one
(closed form, analytic limit, quadrature of the classical period, discrete
level sum) and reports pass/fail with the worst observed discrepancy.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Callable

from .core import Deformation, Harmonic, PowerLaw, QuantumBox
from .dynamics import classical_period, frequency_law
from .spectrum import (
    box_gamma,
    box_spectrum_closed,
    oscillator_spectrum_closed,
    powerlaw_undeformed_level,
    solve_spectrum_ode,
)
from .statmech import (
    DosSpec,
    IdealGas,
    Phonon,
    PowerLawGas,
    FirstOrderRoute,
    effective_temperature,
    heat_capacity,
    internal_energy_exact,
    internal_energy_first_order,
    internal_energy_log_derivative,
    law_from_dos,
    partition_exponential,
    partition_from_levels,
    partition_function,
    partition_undeformed_closed,
)

__all__ = ["CheckResult", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail}"


def _rel(a, b, floor=0.0):
    return abs(a - b) / max(abs(b), floor)


def box_ode_vs_closed():
    box = QuantumBox(a=1.0, m=1.0)
    worst = 0.0
    for s in (1e-4, 1e-3, 1e-2):
        g = box_gamma(box) * math.sqrt(s)
        n_top = math.ceil(1.4 / g) - 1
        res = solve_spectrum_ode(box, Deformation(s), 0.0, n_top)
        for n, E in res.levels[1:]:
            worst = max(worst, _rel(E, box_spectrum_closed(n, s, box)))
    return worst < 1e-8, f"max rel diff {worst:.2e} (tol 1e-8)"


def oscillator_ode_vs_closed():
    osc = Harmonic(omega0=1.0, ground_energy=0.5)
    worst = 0.0
    for s in (0.2, -0.2, 0.05, -0.05):
        d = Deformation(s)
        res = solve_spectrum_ode(osc, d, None, 100)
        for n, E in res.levels:
            worst = max(worst, _rel(E, oscillator_spectrum_closed(n, d, osc), 1e-12))
    trapped = solve_spectrum_ode(osc, Deformation(-0.5), None, 60)
    n_last, E_last = trapped.levels[-1]
    gap = abs(E_last - 2.0)
    ok = worst < 1e-8 and gap < 1e-10 and n_last <= 60
    return ok, f"max rel diff {worst:.2e} (tol 1e-8); |E_{n_last} - 2| = {gap:.1e} (tol 1e-10)"


def undeformed_reductions():
    worst = 0.0
    d0 = Deformation(0.0)
    box = QuantumBox(1.0, 1.0)
    g = box_gamma(box)
    for n, E in solve_spectrum_ode(box, d0, 0.0, 30).levels[1:]:
        worst = max(worst, _rel(E, (g * n) ** 2))
    osc = Harmonic(1.0, 0.5)
    for n, E in solve_spectrum_ode(osc, d0, None, 30).levels:
        worst = max(worst, _rel(E, 0.5 + n))
    for nu in (0.75, 1.0, 3.0, 6.0):
        pl = PowerLaw(k=1.0, nu=nu, m=1.0)
        for n, E in solve_spectrum_ode(pl, d0, None, 30).levels:
            worst = max(worst, _rel(E, powerlaw_undeformed_level(n, pl)))
    for s in (0.0, 0.1, -0.1):
        pl = PowerLaw(k=0.5, nu=2.0, m=1.0, ground_energy=0.5)
        a = solve_spectrum_ode(pl, Deformation(s), None, 30).energies
        b = solve_spectrum_ode(osc, Deformation(s), None, 30).energies
        worst = max(worst, max(_rel(x, y) for x, y in zip(a, b)))
    return worst < 1e-8, f"max rel diff {worst:.2e} (tol 1e-8)"


def box_small_s_limit():
    box = QuantumBox(1.0, 1.0)
    g = box_gamma(box)
    worst = max(_rel(box_spectrum_closed(n, 1e-8, box), (g * n) ** 2) for n in range(1, 11))
    return worst < 1e-3, f"max rel diff {worst:.2e} (tol 1e-3)"


def gamma_partition_closed_form():
    worst = 0.0
    for nu in (1.0, 2.0, 3.0, 10.0):
        dos = DosSpec.from_system(PowerLaw(1.0, nu, 1.0))
        for T in (0.5, 1.0, 5.0):
            z = partition_function(dos, Deformation(0.0), T).value
            closed = dos.prefactor * T ** (1 / nu + 0.5) * math.gamma(1 / nu + 0.5)
            worst = max(worst, _rel(z, closed))
    return worst < 1e-8, f"max rel diff {worst:.2e} (tol 1e-8)"


def _harmonic_dos():
    return DosSpec.from_system(Harmonic(1.0))


def perturbative_order():
    dos = _harmonic_dos()
    law = law_from_dos(dos)

    def gap(s):
        return abs(internal_energy_exact(dos, Deformation(s), 1.0) - internal_energy_first_order(law, s, 1.0))

    ratios = [gap(s) / gap(s / 2) for s in (0.2, 0.1, 0.05)]
    ok = all(3.2 <= r <= 4.8 for r in ratios)
    return ok, "ratios " + ", ".join(f"{r:.4f}" for r in ratios) + " (band [3.2, 4.8])"


def route_identity():
    dos = _harmonic_dos()
    worst = 0.0
    for s in (0.05, 0.1):
        for T in (0.5, 1.0, 2.0):
            d = Deformation(s)
            worst = max(worst, _rel(internal_energy_exact(dos, d, T), internal_energy_log_derivative(dos, d, T)))
    return worst < 1e-6, f"max rel diff {worst:.2e} (tol 1e-6)"


def named_closed_forms():
    worst = 0.0
    rng = random.Random(8)
    exact_nu2 = True
    for _ in range(50):
        s = rng.uniform(-0.3, 0.3)
        T = rng.uniform(0.1, 3.0)
        N = rng.randint(1, 50)
        nu = rng.uniform(0.3, 12.0)
        A = rng.uniform(0.1, 4.0)
        cases = [
            (IdealGas(N), 0.5 * N * T * (1 - s * T), 0.5 * N * (1 - 2 * s * T)),
            (PowerLawGas(N, nu), (1 / nu + 0.5) * N * T * (1 - s * T), (1 / nu + 0.5) * N * (1 - 2 * s * T)),
            (Phonon(A), A * T**4 * (1 - 4 * s * T), A * (4 * T**3 - 20 * s * T**4)),
        ]
        for law, U, C in cases:
            worst = max(worst, _rel(internal_energy_first_order(law, s, T), U, 1e-300))
            worst = max(worst, _rel(heat_capacity(FirstOrderRoute(law, s), T), C, 1e-300))
        exact_nu2 &= heat_capacity(FirstOrderRoute(PowerLawGas(N, 2.0), s), T) == N * (1 - 2 * s * T)
    return worst < 1e-12 and exact_nu2, f"max rel diff {worst:.2e} (tol 1e-12); nu=2 exact: {exact_nu2}"


def exponential_identity():
    rng = random.Random(9)
    worst = 0.0
    for dos in (_harmonic_dos(), DosSpec.from_system(PowerLaw(1.0, 3.0, 1.0))):
        for _ in range(20):
            T = rng.uniform(0.2, 5.0)
            s = rng.uniform(-0.9 / T, 2.0)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                z = partition_exponential(dos, s, T).value
            worst = max(worst, _rel(z, partition_undeformed_closed(dos, effective_temperature(T, s))))
    return worst < 1e-8, f"max rel diff {worst:.2e} (tol 1e-8)"


def discrete_vs_continuum():
    levels = solve_spectrum_ode(Harmonic(1.0), Deformation(0.0), None, 400)
    z_sum = partition_from_levels(levels, 10.0).value
    z_int = partition_function(_harmonic_dos(), Deformation(0.0), 10.0).value
    gap = _rel(z_sum, z_int)
    return gap < 1e-2, f"relative gap {gap:.2e} (tol 1e-2)"


def classical_period_oracle():
    rng = random.Random(11)
    worst = 0.0
    for _ in range(20):
        k = rng.uniform(0.2, 5.0)
        nu = rng.uniform(0.5, 10.0)
        E = rng.uniform(0.1, 10.0)
        m = rng.uniform(0.5, 3.0)
        omega = frequency_law(PowerLaw(k, nu, m))(E)
        worst = max(worst, _rel(omega, 2 * math.pi / classical_period(k, nu, E, m)))
    return worst < 1e-6, f"max rel diff {worst:.2e} (tol 1e-6)"


CHECKS: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "box closed form vs ODE", box_ode_vs_closed),
    (2, "oscillator closed form vs ODE", oscillator_ode_vs_closed),
    (3, "undeformed reductions", undeformed_reductions),
    (4, "small-s box limit", box_small_s_limit),
    (5, "power-law Z0 Gamma form", gamma_partition_closed_form),
    (6, "first-order remainder scaling", perturbative_order),
    (7, "Z-ratio vs log-derivative energy", route_identity),
    (8, "named first-order closed forms", named_closed_forms),
    (9, "exponential effective temperature", exponential_identity),
    (10, "discrete vs continuum Z", discrete_vs_continuum),
    (11, "classical period oracle", classical_period_oracle),
]


def run_checks(numbers=None) -> list[CheckResult]:
    out = []
    for number, name, fn in CHECKS:
        if numbers is not None and number not in numbers:
            continue
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"error: {type(exc).__name__}: {exc}"
        out.append(CheckResult(number, name, ok, detail))
    return out
