"""
Синтетические когорты из структурной модели и калибровка теста
"""

from .calibration import CalibrationResult, calibrate, power_estimate, type1_rate, wilson_interval
from .models import DagConfig, HazardSpec, Hypothesis, SimulatedSubject, load_dag_config
from .sampler import (
    RNG_ALGORITHM,
    counterfactual_gap,
    export_normalized,
    simulate,
    simulate_groups,
    simulate_intervention,
)

__all__ = [
    'RNG_ALGORITHM',
    'CalibrationResult',
    'DagConfig',
    'HazardSpec',
    'Hypothesis',
    'SimulatedSubject',
    'calibrate',
    'counterfactual_gap',
    'export_normalized',
    'load_dag_config',
    'power_estimate',
    'simulate',
    'simulate_groups',
    'simulate_intervention',
    'type1_rate',
    'wilson_interval',
]
