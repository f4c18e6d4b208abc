"""Multistatic moving-target localization toolkit.

Forward geometry (bistatic range / range rate / DOA), Gaussian
measurement synthesis, a closed-form fusion estimator, and a
Monte-Carlo RMSE harness with a scenario-file CLI.
"""

from .errors import (
    DegenerateGeometry,
    EmptyInput,
    EmptyTruth,
    InsufficientPairs,
    MultistaticError,
    NoUsablePairs,
    OutOfBounds,
    ParseError,
    SingularGeometry,
    ValidationError,
)
from .estimator import (
    Estimate,
    PositionEstimate,
    VelocityEstimate,
    estimate,
    estimate_doa,
    estimate_position,
    estimate_velocity,
    grid_search_velocity,
    predicted_brr,
    single_pair_range,
)
from .geometry import (
    PairTruth,
    PolarPoint,
    PolarVelocity,
    Scene,
    TargetState,
    bistatic_range,
    bistatic_range_rate,
    brr_finite_difference,
    from_cartesian,
    ground_truth,
    projected_range_rate,
    target_path_range,
    to_cartesian,
    tx_angle,
    tx_angle_arcsin,
    velocity_to_cartesian,
)
from .measurement import MeasurementSet, NoiseSpec, derive_stream, generate_measurements
from .montecarlo import (
    RmseReport,
    SweepSpec,
    TrialSpec,
    override_sigma,
    rmse_position,
    rmse_velocity,
    run_sweep,
    run_trials,
)
from .scenario import ScenarioFile, parse_scenario, scenario_from_dict, write_scenario

__version__ = "0.1.0"

__all__ = [
    "DegenerateGeometry",
    "EmptyInput",
    "EmptyTruth",
    "Estimate",
    "InsufficientPairs",
    "MeasurementSet",
    "MultistaticError",
    "NoUsablePairs",
    "NoiseSpec",
    "OutOfBounds",
    "PairTruth",
    "ParseError",
    "PolarPoint",
    "PolarVelocity",
    "PositionEstimate",
    "RmseReport",
    "Scene",
    "ScenarioFile",
    "SingularGeometry",
    "SweepSpec",
    "TargetState",
    "TrialSpec",
    "ValidationError",
    "VelocityEstimate",
    "bistatic_range",
    "bistatic_range_rate",
    "brr_finite_difference",
    "derive_stream",
    "estimate",
    "estimate_doa",
    "estimate_position",
    "estimate_velocity",
    "from_cartesian",
    "generate_measurements",
    "grid_search_velocity",
    "ground_truth",
    "override_sigma",
    "parse_scenario",
    "predicted_brr",
    "projected_range_rate",
    "rmse_position",
    "rmse_velocity",
    "run_sweep",
    "run_trials",
    "scenario_from_dict",
    "single_pair_range",
    "target_path_range",
    "to_cartesian",
    "tx_angle",
    "tx_angle_arcsin",
    "velocity_to_cartesian",
    "write_scenario",
]
