import math
import random
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defquant.core import Deformation, Harmonic, PowerLaw, QuantumBox, Route, UnitsConvention
from defquant.errors import CrossCheckWarning, DomainError, PreconditionError, TruncationWarning, UnsupportedDomain
from defquant.spectrum import solve_spectrum_ode
from defquant.statmech import (
    SMALL_S_CROSSOVER,
    DosSpec,
    ExactRoute,
    FirstOrderRoute,
    IdealGas,
    Phonon,
    PowerLawGas,
    Tabulated,
    deformed_dos,
    effective_temperature,
    harmonic_dos,
    heat_capacity,
    internal_energy_exact,
    internal_energy_first_order,
    internal_energy_log_derivative,
    law_from_dos,
    microstate_count,
    partition_exponential,
    partition_from_levels,
    partition_function,
    partition_undeformed_closed,
    thermo_point,
    unperturbed_dos,
    unperturbed_energy,
)

OSC_DOS = harmonic_dos()


def _mp_harmonic(s, T=1.0):
    # Z = int exp(-E/T) / (1 + sE) dE and U = (Z0/Z - 1)/s, Z0 = T
    mpmath.mp.dps = 40
    s, T = mpmath.mpf(s), mpmath.mpf(T)
    z = mpmath.quad(lambda E: mpmath.exp(-E / T) / (1 + s * E), [0, mpmath.inf])
    return float(z), float((T / z - 1) / s)


class TestDos:
    def test_from_systems(self):
        osc = DosSpec.from_system(Harmonic(2.0))
        assert (osc.prefactor, osc.exponent) == (0.5, 0.0)
        box = DosSpec.from_system(QuantumBox(1.0, 1.0))
        assert box.exponent == -0.5
        assert box.prefactor == pytest.approx(1 / (math.pi * math.sqrt(2)), rel=1e-15)

    def test_power_law_exponent(self):
        assert DosSpec.power_law(2.0).exponent == 0.0
        assert DosSpec.power_law(1.0).energy_coefficient == 1.5
        assert DosSpec.from_system(PowerLaw(1.0, 4.0, 1.0)).exponent == pytest.approx(-0.25)

    def test_deformation_divides_density(self):
        d = Deformation(0.5)
        assert deformed_dos(OSC_DOS, d, 2.0) == 0.5
        assert microstate_count(OSC_DOS, d, 2.0, 1e-3) == pytest.approx(5e-4)
        assert deformed_dos(OSC_DOS, Deformation(0.5, "exponential"), 2.0) == pytest.approx(math.exp(-1))

    def test_invalid(self):
        with pytest.raises(DomainError):
            DosSpec(1.0, -1.0)
        with pytest.raises(DomainError):
            DosSpec(0.0, 0.0)
        with pytest.raises(PreconditionError):
            deformed_dos(OSC_DOS, Deformation(-0.5), 2.0)
        with pytest.raises(DomainError):
            unperturbed_dos(DosSpec(1.0, -0.5), 0.0)
        with pytest.raises(DomainError):
            microstate_count(OSC_DOS, Deformation(0.1), 1.0, 0.0)


class TestPartition:
    def test_harmonic_example(self):
        z = partition_function(OSC_DOS, Deformation(0.1), 1.0)
        assert z.value == pytest.approx(0.91563333939788081876, rel=1e-10)
        assert z.est_abs_error < 1e-9

    @pytest.mark.parametrize("s", [0.05, 0.2, 0.7])
    def test_harmonic_against_mpmath(self, s):
        z_ref, _ = _mp_harmonic(s)
        assert partition_function(OSC_DOS, Deformation(s), 1.0).value == pytest.approx(z_ref, rel=1e-10)

    def test_undeformed_gamma_form(self):
        rng = random.Random(3)
        for _ in range(25):
            dos = DosSpec(rng.uniform(0.1, 3), rng.uniform(-0.9, 4))
            T = rng.uniform(0.1, 10)
            z = partition_function(dos, Deformation(0.0), T).value
            assert z == pytest.approx(partition_undeformed_closed(dos, T), rel=1e-9)

    def test_boltzmann_constant_scales_temperature(self):
        units = UnitsConvention(boltzmann=2.0)
        dos = DosSpec(1.0, 0.0, units)
        assert partition_function(dos, Deformation(0.0), 1.5).value == pytest.approx(3.0, rel=1e-10)

    def test_negative_linear_s_is_unsupported(self):
        with pytest.raises(UnsupportedDomain):
            partition_function(OSC_DOS, Deformation(-0.1), 1.0)
        with pytest.raises(UnsupportedDomain):
            internal_energy_exact(OSC_DOS, Deformation(-0.1), 1.0)

    def test_bad_temperature(self):
        for T in (0.0, -1.0, math.inf, math.nan):
            with pytest.raises(DomainError):
                partition_function(OSC_DOS, Deformation(0.1), T)


class TestEnergy:
    def test_harmonic_example(self):
        assert internal_energy_exact(OSC_DOS, Deformation(0.1), 1.0) == pytest.approx(
            0.92140223572023466528, rel=1e-9
        )

    @pytest.mark.parametrize(
        "s, U_ref", [(0.05, 0.9562129274171917375), (0.2, 0.86778095316218594376)]
    )
    def test_frozen_values(self, s, U_ref):
        assert internal_energy_exact(OSC_DOS, Deformation(s), 1.0) == pytest.approx(U_ref, rel=1e-9)

    @settings(max_examples=1000, deadline=None)
    @given(
        s=st.floats(min_value=1e-3, max_value=1.0),
        T=st.floats(min_value=0.2, max_value=5.0),
    )
    def test_ratio_identity(self, s, T):
        # Z0 - Z = s * int E e^{-E/T} / (1 + sE) dE = s Z U, so U Z s = Z0 - Z
        d = Deformation(s)
        z = partition_function(OSC_DOS, d, T).value
        z0 = partition_undeformed_closed(OSC_DOS, T)
        u = internal_energy_exact(OSC_DOS, d, T)
        assert s * z * u == pytest.approx(z0 - z, rel=1e-8, abs=1e-12)

    def test_matches_log_derivative(self):
        d = Deformation(0.1)
        for T in (0.5, 1.0, 2.0):
            a = internal_energy_exact(OSC_DOS, d, T)
            b = internal_energy_log_derivative(OSC_DOS, d, T)
            assert a == pytest.approx(b, rel=1e-6)

    def test_crossover_to_first_order(self):
        s = SMALL_S_CROSSOVER / 10
        u = internal_energy_exact(OSC_DOS, Deformation(s), 1.0)
        assert u == internal_energy_first_order(law_from_dos(OSC_DOS), s, 1.0)
        assert internal_energy_exact(OSC_DOS, Deformation(0.0), 2.0) == 2.0

    def test_continuous_across_crossover(self):
        below = internal_energy_exact(OSC_DOS, Deformation(0.9e-6), 1.0)
        above = internal_energy_exact(OSC_DOS, Deformation(1.1e-6), 1.0)
        assert abs(below - above) < 1e-6

    def test_remainder_ratio_tends_to_four(self):
        law = law_from_dos(OSC_DOS)

        def gap(s):
            return abs(internal_energy_exact(OSC_DOS, Deformation(s), 1.0) - internal_energy_first_order(law, s, 1.0))

        ratios = [gap(s) / gap(s / 2) for s in (0.1, 0.02, 0.005)]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] == pytest.approx(4.0, abs=0.1)


class TestFirstOrder:
    def test_named_examples(self):
        assert internal_energy_first_order(IdealGas(1), 0.1, 1.0) == pytest.approx(0.45)
        assert internal_energy_first_order(PowerLawGas(1, 2.0), 0.1, 1.0) == pytest.approx(0.9)
        assert internal_energy_first_order(Phonon(1.0), 0.0, 2.0) == 16.0
        assert heat_capacity(FirstOrderRoute(Phonon(1.0), 0.0), 2.0) == 32.0
        assert heat_capacity(FirstOrderRoute(Phonon(1.0), 0.01), 1.0) == pytest.approx(4 - 0.2)

    def test_exact_nu2_heat_capacity(self):
        assert heat_capacity(FirstOrderRoute(PowerLawGas(3, 2.0), 0.1), 2.0) == 3 * (1 - 0.4)

    def test_power_law_coefficient_decreases_to_half(self):
        coeffs = [unperturbed_energy(PowerLawGas(1, nu), 1.0) for nu in (1, 2, 5, 20, 1e6)]
        assert all(a > b for a, b in zip(coeffs, coeffs[1:]))
        assert coeffs[-1] == pytest.approx(0.5, abs=1e-5)

    def test_tabulated_matches_named(self):
        tab = Tabulated(lambda T: 2.0 * T**4)
        for s, T in ((0.0, 1.5), (0.02, 1.0), (-0.05, 0.7)):
            assert internal_energy_first_order(tab, s, T) == pytest.approx(
                internal_energy_first_order(Phonon(2.0), s, T), rel=1e-9
            )
            assert heat_capacity(FirstOrderRoute(tab, s), T) == pytest.approx(
                heat_capacity(FirstOrderRoute(Phonon(2.0), s), T), rel=1e-7
            )

    def test_heat_capacity_is_derivative(self):
        from defquant.quadrature import derivative

        for law in (IdealGas(4), PowerLawGas(2, 3.0), Phonon(0.5)):
            route = FirstOrderRoute(law, 0.07)
            num = derivative(lambda t: internal_energy_first_order(law, 0.07, t), 1.3)
            assert heat_capacity(route, 1.3) == pytest.approx(num, rel=1e-9)

    def test_route_agreement_at_small_s(self):
        s, T = 1e-3, 1.0
        exact = internal_energy_exact(OSC_DOS, Deformation(s), T)
        first = internal_energy_first_order(law_from_dos(OSC_DOS), s, T)
        assert abs(exact - first) < 10 * s**2


class TestExponential:
    def test_effective_temperature(self):
        assert effective_temperature(1.0, 1.0) == 0.5
        assert effective_temperature(2.0, 0.0) == 2.0
        with pytest.raises(DomainError):
            effective_temperature(1.0, -1.0)

    def test_identity(self):
        rng = random.Random(1)
        for _ in range(30):
            T = rng.uniform(0.2, 5.0)
            s = rng.uniform(-0.9 / T, 2.0)
            z = partition_exponential(OSC_DOS, s, T).value
            assert z == pytest.approx(partition_undeformed_closed(OSC_DOS, effective_temperature(T, s)), rel=1e-8)

    def test_energy_uses_effective_temperature(self):
        d = Deformation(0.5, "exponential")
        assert internal_energy_exact(OSC_DOS, d, 2.0) == pytest.approx(1.0)

    def test_cross_check_warning(self, monkeypatch):
        import defquant.statmech as sm

        monkeypatch.setattr(sm, "partition_undeformed_closed", lambda dos, T: 123.0)
        with pytest.warns(CrossCheckWarning):
            partition_exponential(OSC_DOS, 0.1, 1.0)


class TestLevelSums:
    def test_harmonic_levels_at_high_temperature(self):
        levels = solve_spectrum_ode(Harmonic(1.0), Deformation(0.0), None, 400)
        res = partition_from_levels(levels, 10.0)
        assert res.value == pytest.approx(9.995834548290838725, rel=1e-8)
        assert res.tail_bound < 1e-6 * res.value
        continuum = partition_function(OSC_DOS, Deformation(0.0), 10.0).value
        assert abs(res.value - continuum) / continuum < 1e-2

    def test_short_sum_warns(self):
        levels = solve_spectrum_ode(Harmonic(1.0), Deformation(0.0), None, 3)
        with pytest.warns(TruncationWarning):
            res = partition_from_levels(levels, 10.0)
        assert res.tail_bound > 0

    def test_divergent_box_has_no_tail(self):
        levels = solve_spectrum_ode(QuantumBox(1.0, 1.0), Deformation(0.01), 0.0, 50)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            res = partition_from_levels(levels, 1.0)
        assert res.tail_bound == 0.0

    def test_trapped_levels_have_infinite_tail(self):
        levels = solve_spectrum_ode(Harmonic(1.0), Deformation(-0.5), None, 100)
        with pytest.warns(TruncationWarning):
            res = partition_from_levels(levels, 1.0)
        assert res.tail_bound == math.inf


class TestThermoPoint:
    def test_exact_route(self):
        p = thermo_point(ExactRoute(OSC_DOS, Deformation(0.1)), 1.0)
        assert p.route is Route.EXACT
        assert p.Z == pytest.approx(0.91563333939788081876, rel=1e-10)
        assert p.U == pytest.approx(0.92140223572023466528, rel=1e-9)
        assert p.C < 1.0

    def test_first_order_route_has_no_Z(self):
        p = thermo_point(FirstOrderRoute(IdealGas(2), 0.1), 1.0)
        assert p.Z is None and p.U == pytest.approx(0.9) and p.C == pytest.approx(0.8)

    def test_exact_heat_capacity_undeformed(self):
        assert heat_capacity(ExactRoute(OSC_DOS, Deformation(0.0)), 1.0) == pytest.approx(1.0, rel=1e-8)
