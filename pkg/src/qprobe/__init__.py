"""Indirect qubit measurement: probe-induced effects, the
information/disturbance fidelity pair, and scenario sampling."""

from .model import (
    CartanParams,
    Effect,
    EffectValidity,
    ModelPoint,
    ProbeParams,
    ProjectorParams,
    ValidationError,
    effect_closed_form,
    effect_matrix_path,
    envelope_factor,
    validate_effect,
)
from .sampler import (
    Histogram2D,
    RecordBatch,
    SampleRecord,
    Scenario,
    ScenarioError,
    builtin_scenarios,
    cnot_sweep,
    draw,
    draw_batch,
    histogram,
    load_scenario,
    scenario_by_name,
)
from .tradeoff import (
    InferencePair,
    MCEstimate,
    TradeoffPoint,
    disturbance_fidelity,
    information_fidelity,
    mc_disturbance_fidelity,
    mc_information_fidelity,
    sphere_average_disturbance,
    tradeoff_point,
    tradeoff_value,
)

__version__ = "0.1.0"

__all__ = [
    "CartanParams",
    "Effect",
    "EffectValidity",
    "ModelPoint",
    "ProbeParams",
    "ProjectorParams",
    "ValidationError",
    "effect_closed_form",
    "effect_matrix_path",
    "envelope_factor",
    "validate_effect",
    "Histogram2D",
    "RecordBatch",
    "SampleRecord",
    "Scenario",
    "ScenarioError",
    "builtin_scenarios",
    "cnot_sweep",
    "draw",
    "draw_batch",
    "histogram",
    "load_scenario",
    "scenario_by_name",
    "InferencePair",
    "MCEstimate",
    "TradeoffPoint",
    "disturbance_fidelity",
    "information_fidelity",
    "mc_disturbance_fidelity",
    "mc_information_fidelity",
    "sphere_average_disturbance",
    "tradeoff_point",
    "tradeoff_value",
    "__version__",
]
