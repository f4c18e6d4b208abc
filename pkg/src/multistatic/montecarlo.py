"""Monte-Carlo trial runner and polar RMSE aggregation.

One run repeats M independent noisy trials of the estimator against a
fixed scene and target, then reduces the per-trial errors into position
and velocity RMSEs.  Each trial owns its own derived random stream, so a
run's output is bitwise reproducible for a given master seed no matter
how many workers execute it.  Sweeps repeat runs while stepping one noise
channel, with each sweep point on its own stream block so points are
statistically independent.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    DegenerateGeometry,
    EmptyInput,
    InsufficientPairs,
    NoUsablePairs,
    SingularGeometry,
)
from .estimator import estimate
from .geometry import PolarPoint, PolarVelocity, Scene, TargetState, ground_truth
from .measurement import NoiseSpec, derive_stream, generate_measurements

SWEEP_CHANNELS = ("br", "brr", "doa")

# Estimator failures that count a trial as failed instead of aborting the run.
_TRIAL_FAILURES = (DegenerateGeometry, NoUsablePairs, InsufficientPairs, SingularGeometry)


@dataclass(frozen=True)
class TrialSpec:
    """One Monte-Carlo run: scene, truth, noise, trial count, seed."""

    scene: Scene
    target: TargetState
    noise: NoiseSpec
    trials: int
    master_seed: int
    heading_domain: str = "full"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class SweepSpec:
    """A run repeated over increasing sigma values of one noise channel."""

    base: TrialSpec
    swept_channel: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.swept_channel not in SWEEP_CHANNELS:
            raise ValueError(f"swept_channel must be one of {SWEEP_CHANNELS}")
        if not self.values:
            raise ValueError("sweep values must be non-empty")
        if any(v < 0.0 or not math.isfinite(v) for v in self.values):
            raise ValueError("sweep values must be finite and non-negative")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")


@dataclass(frozen=True)
class RmseReport:
    """Aggregated errors of one run; velocity is None for N = 1 scenes.

    RMSEs cover succeeded trials only; failures (degenerate trials the
    estimator refused) are counted, never imputed.
    """

    rmse_position_m: float
    rmse_velocity_mps: float | None
    trials_succeeded: int
    trials_failed: int


def _polar_sq_distance(r1: float, a1: float, r2: float, a2: float) -> float:
    # Algebraically the law of cosines r1^2 - 2 r1 r2 cos(a1 - a2) + r2^2,
    # rewritten so nearly-coincident points do not cancel catastrophically.
    half = math.sin(0.5 * (a1 - a2))
    return (r1 - r2) ** 2 + 4.0 * r1 * r2 * half * half


def rmse_position(estimates: Sequence[PolarPoint], truth: PolarPoint) -> float:
    """Root-mean-square position error, straight from the polar law of
    cosines (identical to Euclidean RMSE in any consistent embedding)."""
    if not estimates:
        raise EmptyInput("rmse_position needs at least one estimate")
    total = sum(
        _polar_sq_distance(e.range_m, e.angle_rad, truth.range_m, truth.angle_rad)
        for e in estimates
    )
    return math.sqrt(total / len(estimates))


def rmse_velocity(estimates: Sequence[PolarVelocity], truth: PolarVelocity) -> float:
    """Root-mean-square velocity error; polar form as for position."""
    if not estimates:
        raise EmptyInput("rmse_velocity needs at least one estimate")
    total = sum(
        _polar_sq_distance(e.speed_mps, e.heading_rad, truth.speed_mps, truth.heading_rad)
        for e in estimates
    )
    return math.sqrt(total / len(estimates))


def _run_trial_block(
    spec: TrialSpec, start: int, stop: int, stream_block: int
) -> list[tuple[float, float, float, float] | None]:
    """Trials [start, stop); None marks a failed trial."""
    truth = ground_truth(spec.scene, spec.target)
    theta0 = spec.target.position.angle_rad
    results: list[tuple[float, float, float, float] | None] = []
    for trial in range(start, stop):
        stream = derive_stream(spec.master_seed, trial, 0, stream_block)
        meas = generate_measurements(truth, theta0, spec.noise, stream)
        try:
            est = estimate(spec.scene, meas, spec.heading_domain)
        except _TRIAL_FAILURES:
            results.append(None)
            continue
        pos = est.position_part.position
        if est.velocity_part is not None:
            vel = est.velocity_part.velocity
            results.append((pos.range_m, pos.angle_rad, vel.speed_mps, vel.heading_rad))
        else:
            results.append((pos.range_m, pos.angle_rad, float("nan"), float("nan")))
    return results


def run_trials(spec: TrialSpec, workers: int = 1, stream_block: int = 0) -> RmseReport:
    """Run the spec's M trials and aggregate their errors.

    ``workers`` > 1 splits the trial range across processes; because
    every trial derives its stream from (seed, trial, block) and the
    reduction walks trials in index order, the report is bitwise
    identical for any worker count.  ``stream_block`` selects the stream
    block (used by sweeps to decorrelate points).
    """
    m = spec.trials
    if workers <= 1:
        results = _run_trial_block(spec, 0, m, stream_block)
    else:
        bounds = [(m * k) // workers for k in range(workers + 1)]
        chunks = [
            (spec, lo, hi, stream_block)
            for lo, hi in zip(bounds, bounds[1:])
            if hi > lo
        ]
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_trial_block_star, chunks):
                results.extend(part)
    positions = [PolarPoint(r[0], r[1]) for r in results if r is not None]
    failed = sum(1 for r in results if r is None)
    truth_pos = spec.target.position
    report_velocity: float | None = None
    if spec.scene.n_pairs >= 2:
        velocities = [PolarVelocity(r[2], r[3]) for r in results if r is not None]
        if velocities:
            report_velocity = rmse_velocity(velocities, spec.target.velocity)
    return RmseReport(
        rmse_position_m=rmse_position(positions, truth_pos) if positions else float("nan"),
        rmse_velocity_mps=report_velocity,
        trials_succeeded=len(positions),
        trials_failed=failed,
    )


def _run_trial_block_star(args):
    return _run_trial_block(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[tuple[float, RmseReport]]:
    """One run per sigma value of the swept channel, in the given order.

    Sweep point k runs on stream block k so its trials are independent of
    every other point's.
    """
    out = []
    for k, sigma in enumerate(spec.values):
        point = replace(spec.base, noise=override_sigma(spec.base.noise, spec.swept_channel, sigma))
        out.append((sigma, run_trials(point, workers=workers, stream_block=k)))
    return out


def override_sigma(noise: NoiseSpec, channel: str, sigma: float) -> NoiseSpec:
    """Copy a noise spec with one channel's sigma replaced."""
    if channel not in SWEEP_CHANNELS:
        raise ValueError(f"channel must be one of {SWEEP_CHANNELS}")
    if channel == "br":
        return replace(noise, sigma_br_m=sigma)
    if channel == "brr":
        return replace(noise, sigma_brr_mps=sigma)
    return replace(noise, sigma_doa_deg=sigma)
