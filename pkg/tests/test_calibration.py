import json

import pytest

from parity_audit.errors import UnknownStratumError, UsageError, WrongHypothesisError
from parity_audit.simulation import calibrate, power_estimate, type1_rate, wilson_interval


def test_alpha_zero_never_rejects(dag_h0):
    result = type1_rate(dag_h0, n_per_group=50, replications=100, alpha=0.0, seed=1)
    assert result.rejection_rate == 0.0
    assert result.n_rejections == 0


def test_alpha_one_always_rejects(dag_h0):
    rate, (low, high) = type1_rate(dag_h0, n_per_group=50, replications=100, alpha=1.0, seed=1)
    assert rate == 1.0
    assert low < 1.0 <= high + 1e-12


@pytest.mark.parametrize("replications", [0, 99, -5])
def test_too_few_replications_is_usage_error(dag_h0, replications):
    with pytest.raises(UsageError) as exc_info:
        type1_rate(dag_h0, n_per_group=50, replications=replications, alpha=0.05, seed=1)
    assert exc_info.value.exit_code == 2


def test_hypothesis_tag_is_checked(dag_h0, dag_h1):
    with pytest.raises(WrongHypothesisError):
        type1_rate(dag_h1, n_per_group=50, replications=100, alpha=0.05, seed=1)
    with pytest.raises(WrongHypothesisError):
        power_estimate(dag_h0, n_per_group=50, replications=100, alpha=0.05, seed=1)


def test_unknown_stratum(dag_h0):
    with pytest.raises(UnknownStratumError):
        type1_rate(dag_h0, n_per_group=50, replications=100, alpha=0.05, seed=1, stratum="extreme")


def test_result_is_reproducible_and_independent_of_workers(dag_h0):
    serial = type1_rate(dag_h0, n_per_group=60, replications=120, alpha=0.05, seed=42)
    threaded = type1_rate(dag_h0, n_per_group=60, replications=120, alpha=0.05, seed=42, workers=4)
    assert serial == threaded
    assert serial.n_tests <= 3 * 120
    assert serial.rng_algorithm == "PCG64"
    assert set(serial.per_stratum_rates) <= {"low", "medium", "high"}


def test_single_stratum_counts_one_test_per_replication(dag_h0):
    result = type1_rate(dag_h0, n_per_group=200, replications=100, alpha=0.05, seed=3, stratum="low")
    assert result.stratum == "low"
    assert result.n_tests == 100
    assert list(result.per_stratum_rates) == ["low"]


def test_result_serializes(dag_h0):
    result = calibrate(dag_h0, "type1", n_per_group=40, replications=100, alpha=0.05, seed=5)
    data = json.loads(json.dumps(result.to_dict()))
    assert data["kind"] == "type1"
    assert data["ci_low"] <= data["rejection_rate"] <= data["ci_high"]
    assert data["hypothesis"] == "H0"


def test_wilson_interval():
    low, high = wilson_interval(50, 1000)
    assert low == pytest.approx(0.0381, abs=5e-4)
    assert high == pytest.approx(0.0653, abs=5e-4)
    assert wilson_interval(0, 100)[0] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.slow
def test_type1_rate_is_calibrated(dag_h0):
    rate, (low, high) = type1_rate(dag_h0, n_per_group=500, replications=1000, alpha=0.05, seed=2024)
    assert 0.035 <= rate <= 0.065
    assert low <= rate <= high
    # значения фиксированного прогона seed=2024
    assert rate == pytest.approx(0.04633, abs=5e-5)
    assert (low, high) == pytest.approx((0.0394, 0.0545), abs=1e-4)


@pytest.mark.slow
def test_null_effect_h1_behaves_like_h0(dag_h1_null):
    result = power_estimate(dag_h1_null, n_per_group=500, replications=1000, alpha=0.05, seed=2024)
    assert 0.035 <= result.rejection_rate <= 0.065


@pytest.mark.slow
def test_power_grows_with_sample_size(dag_h1):
    large = power_estimate(dag_h1, n_per_group=2000, replications=500, alpha=0.05, seed=2024)
    small = power_estimate(dag_h1, n_per_group=50, replications=500, alpha=0.05, seed=2024)
    assert large.rejection_rate > 0.8
    assert small.rejection_rate < large.rejection_rate
    # значения фиксированного прогона seed=2024
    assert large.rejection_rate == pytest.approx(1.0)
    assert small.rejection_rate == pytest.approx(0.1453, abs=5e-5)
