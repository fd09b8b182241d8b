import math
import random

import mpmath
import pytest

from defquant.core import Harmonic, PowerLaw, QuantumBox
from defquant.dynamics import FrequencyLaw, alpha_coefficient, classical_period, eval_frequency, frequency_law
from defquant.errors import DomainError


def _alpha_mp(k, nu, m):
    mpmath.mp.dps = 30
    k, nu, m = mpmath.mpf(k), mpmath.mpf(nu), mpmath.mpf(m)
    return float(
        mpmath.sqrt(2 * mpmath.pi) * nu * k ** (1 / nu) * mpmath.gamma(0.5 + 1 / nu)
        / (2 * mpmath.sqrt(m) * mpmath.gamma(1 / nu))
    )


@pytest.mark.parametrize(
    "k, nu, m, expected",
    [
        (0.5, 2, 1, 1.0),
        (1, 2, 1, math.sqrt(2)),
        (1, 1, 1, 1.1107207345395915618),
    ],
)
def test_alpha_examples(k, nu, m, expected):
    assert alpha_coefficient(k, nu, m) == pytest.approx(expected, rel=1e-13)


def test_alpha_matches_high_precision():
    rng = random.Random(2)
    for _ in range(50):
        k, nu, m = rng.uniform(0.1, 10), rng.uniform(0.1, 10), rng.uniform(0.1, 10)
        assert alpha_coefficient(k, nu, m) == pytest.approx(_alpha_mp(k, nu, m), rel=1e-12)


def test_alpha_rejects_gamma_out_of_range():
    with pytest.raises(DomainError):
        alpha_coefficient(1, 20, 1)  # Gamma(1/20) outside [0.1, 50]


def test_frequency_law_examples():
    box = frequency_law(QuantumBox(a=math.pi, m=1))
    assert box.prefactor == pytest.approx(math.sqrt(2), rel=1e-15)
    assert box.exponent == 0.5
    assert frequency_law(Harmonic(omega0=3)) == FrequencyLaw(3.0, 0.0)
    pl = frequency_law(PowerLaw(k=0.5, nu=2, m=1))
    assert pl.prefactor == pytest.approx(1.0, rel=1e-14)
    assert pl.exponent == 0.0


def test_quadratic_power_law_is_the_oscillator():
    rng = random.Random(3)
    for _ in range(100):
        m, w = rng.uniform(0.1, 10), rng.uniform(0.1, 10)
        pl = frequency_law(PowerLaw(k=0.5 * m * w * w, nu=2, m=m))
        assert pl.prefactor == pytest.approx(w, rel=1e-12)
        assert pl.exponent == 0.0


def test_eval_frequency():
    assert eval_frequency(FrequencyLaw(1.0, 0.0), 17) == 1.0
    assert eval_frequency(FrequencyLaw(math.sqrt(2), 0.5), 2) == pytest.approx(2.0, rel=1e-15)
    assert eval_frequency(FrequencyLaw(1.0, 0.0), 0.0) == 1.0
    assert eval_frequency(FrequencyLaw(2.0, 0.5), 0.0) == 0.0
    with pytest.raises(DomainError):
        eval_frequency(FrequencyLaw(1.1107207, -0.5), 0.0)


@pytest.mark.parametrize("nu, trend", [(4.0, 1), (2.0, 0), (1.0, -1)])
def test_frequency_monotonicity(nu, trend):
    law = frequency_law(PowerLaw(1.0, nu, 1.0))
    values = [law(E) for E in (0.1, 0.5, 1.0, 3.0, 10.0)]
    assert all(v > 0 for v in values)
    diffs = [b - a for a, b in zip(values, values[1:])]
    if trend > 0:
        assert all(d > 0 for d in diffs)
    elif trend < 0:
        assert all(d < 0 for d in diffs)
    else:
        assert all(d == 0 for d in diffs)


def test_period_oracle_against_mpmath_quadrature():
    # brute force: T = 4 * int_0^x_t dx / sqrt(2 (E - k x**nu) / m) with tanh-sinh
    mpmath.mp.dps = 25
    for k, nu, E, m in [(1.0, 1.0, 1.0, 1.0), (2.0, 3.5, 0.7, 1.5), (0.3, 0.6, 4.0, 2.0)]:
        x_t = (mpmath.mpf(E) / k) ** (1 / mpmath.mpf(nu))
        # x = x_t u keeps E - k x**nu exactly nonnegative on [0, 1]
        ref = 4 * x_t * mpmath.quad(lambda u: 1 / mpmath.sqrt(2 * E * (1 - u**nu) / m), [0, 1])
        assert classical_period(k, nu, E, m) == pytest.approx(float(ref), rel=1e-9)


def test_period_matches_frequency_law():
    rng = random.Random(4)
    for _ in range(20):
        k, nu, E, m = rng.uniform(0.2, 5), rng.uniform(0.5, 10), rng.uniform(0.1, 10), rng.uniform(0.5, 3)
        omega = frequency_law(PowerLaw(k, nu, m))(E)
        assert omega == pytest.approx(2 * math.pi / classical_period(k, nu, E, m), rel=1e-6)
