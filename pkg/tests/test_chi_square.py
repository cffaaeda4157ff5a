import math

import numpy as np
import pytest
from scipy import special

from parity_audit.errors import NegativeStatisticError
from parity_audit.survival import chi_square_sf


def upper_incomplete_gamma_series(a, z, terms=400):
    """Q(a, z) = 1 - P(a, z), P через степенной ряд"""
    term = 1.0 / math.gamma(a + 1.0)
    total = term
    for n in range(1, terms):
        term *= z / (a + n)
        total += term
        if term < 1e-18 * total:
            break
    return 1.0 - math.exp(a * math.log(z) - z) * total


@pytest.mark.parametrize("x, expected", [
    (3.841458821, 0.05),
    (6.634896601, 0.01),
])
def test_critical_values(x, expected):
    oracle = upper_incomplete_gamma_series(0.5, x / 2.0)
    assert oracle == pytest.approx(expected, abs=1e-6)
    assert chi_square_sf(x) == pytest.approx(oracle, abs=1e-6)
    assert chi_square_sf(x) == pytest.approx(float(special.gammaincc(0.5, x / 2.0)), abs=1e-12)


def test_zero_and_infinity():
    assert chi_square_sf(0.0) == 1.0
    assert chi_square_sf(math.inf) == 0.0


def test_matches_series_on_grid():
    for x in np.linspace(0.01, 50.0, 200):
        assert chi_square_sf(float(x)) == pytest.approx(upper_incomplete_gamma_series(0.5, x / 2.0), abs=1e-10)


def test_strictly_decreasing():
    values = [chi_square_sf(float(x)) for x in np.linspace(0.0, 30.0, 301)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_higher_degrees_of_freedom():
    assert chi_square_sf(5.991464547, dof=2) == pytest.approx(0.05, abs=1e-8)


@pytest.mark.parametrize("bad", [-1e-9, -3.0, math.nan])
def test_negative_statistic_rejected(bad):
    with pytest.raises(NegativeStatisticError):
        chi_square_sf(bad)
