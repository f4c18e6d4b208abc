"""Randomized self-checks pitting independent computation routes against
each other: closed-form range rates vs finite differences, estimator
round trips vs ground truth, and the linear-LS velocity fit vs a brute
grid search.

The instance sampler keeps every target path at least ``min_path_m`` from
each TX.  That clearance bounds the third derivative of the bistatic
range along the trajectory, which keeps the central-difference truncation
error of the oracle itself (about v^3 * dt^2 / clearance^2) well below
the comparison thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import estimate, estimate_position, estimate_velocity, grid_search_velocity
from .geometry import (
    PolarPoint,
    PolarVelocity,
    Scene,
    TargetState,
    bistatic_range_rate,
    brr_finite_difference,
    ground_truth,
    target_path_range,
)
from .measurement import NoiseSpec, derive_stream, generate_measurements
from .montecarlo import _polar_sq_distance

FD_DT_S = 1e-4


@dataclass(frozen=True)
class OracleThresholds:
    brr_fd_mps: float = 1e-4
    position_roundtrip_m: float = 1e-6
    velocity_roundtrip_mps: float = 1e-6
    # Lattice-cell agreement between the LS fit and the grid argmin.  On a
    # product grid the conditional heading optimum shifts with the speed
    # quantization, so parameter-level agreement is only meaningful for
    # identifiable fits: the check runs on instances with speed >= 10 m/s
    # and design condition number <= grid_condition_cap, where the
    # observed gap stays at <= 2 cells (3 documented as the limit).
    grid_agreement_cells: float = 3.0
    grid_condition_cap: float = 4.0


@dataclass(frozen=True)
class OracleReport:
    samples: int
    max_brr_fd_dev_mps: float
    max_position_roundtrip_m: float
    max_velocity_roundtrip_mps: float
    max_grid_speed_cells: float
    max_grid_heading_cells: float
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def sample_instance(
    rng: np.random.Generator,
    n_txs: int | None = None,
    min_path_m: float = 5.0,
    min_speed_mps: float = 0.0,
) -> tuple[Scene, TargetState]:
    """Random scene and in-bounds target state, resampled until every
    target path clears ``min_path_m``."""
    n = int(rng.integers(1, 6)) if n_txs is None else n_txs
    while True:
        scene = Scene(
            txs=tuple(
                PolarPoint(float(rng.uniform(5.0, 100.0)), float(rng.uniform(0.0, math.pi)))
                for _ in range(n)
            ),
            max_range_m=200.0,
            max_speed_mps=100.0,
        )
        pos = PolarPoint(float(rng.uniform(1.0, 150.0)), float(rng.uniform(0.0, math.pi)))
        if all(
            target_path_range(scene, i, pos) >= min_path_m for i in range(1, n + 1)
        ):
            break
    vel = PolarVelocity(
        float(rng.uniform(min_speed_mps, 40.0)), float(rng.uniform(0.0, 2.0 * math.pi))
    )
    return scene, TargetState(position=pos, velocity=vel)


def run_oracle_suite(
    samples: int,
    seed: int = 0,
    thresholds: OracleThresholds = OracleThresholds(),
    grid_v_steps: int = 400,
    grid_phi_steps: int = 720,
) -> OracleReport:
    """Run all three deviation checks over ``samples`` random instances."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)

    max_fd = 0.0
    max_pos = 0.0
    max_vel = 0.0
    max_cell_v = 0.0
    max_cell_phi = 0.0
    failures: list[str] = []

    def fail(check: str, value: float, limit: float, k: int, scene, state) -> None:
        failures.append(
            f"{check}: {value:.6e} exceeds {limit:.1e} at sample {k} "
            f"(seed {seed}); scene={scene!r} state={state!r}"
        )

    noise = NoiseSpec(sigma_br_m=0.1, sigma_brr_mps=0.1, sigma_doa_deg=0.5)

    for k in range(samples):
        scene, state = sample_instance(rng)

        # Closed-form range rate vs central difference of the range model.
        for i in range(1, scene.n_pairs + 1):
            dev = abs(
                bistatic_range_rate(scene, i, state)
                - brr_finite_difference(scene, i, state, FD_DT_S)
            )
            if dev > max_fd:
                max_fd = dev
            if dev > thresholds.brr_fd_mps:
                fail("brr_vs_finite_difference", dev, thresholds.brr_fd_mps, k, scene, state)

        # Noise-free estimator round trip.
        truth = ground_truth(scene, state)
        clean = generate_measurements(
            truth, state.position.angle_rad, NoiseSpec(0.0, 0.0, 0.0), derive_stream(seed, k, 1)
        )
        est = estimate(scene, clean)
        pos_err = math.sqrt(
            _polar_sq_distance(
                est.position_part.position.range_m,
                est.position_part.position.angle_rad,
                state.position.range_m,
                state.position.angle_rad,
            )
        )
        if pos_err > max_pos:
            max_pos = pos_err
        if pos_err > thresholds.position_roundtrip_m:
            fail("position_roundtrip", pos_err, thresholds.position_roundtrip_m, k, scene, state)
        if est.velocity_part is not None:
            vel_err = math.sqrt(
                _polar_sq_distance(
                    est.velocity_part.velocity.speed_mps,
                    est.velocity_part.velocity.heading_rad,
                    state.velocity.speed_mps,
                    state.velocity.heading_rad,
                )
            )
            if vel_err > max_vel:
                max_vel = vel_err
            if vel_err > thresholds.velocity_roundtrip_mps:
                fail(
                    "velocity_roundtrip", vel_err, thresholds.velocity_roundtrip_mps, k, scene, state
                )

        # Linear-LS vs grid search on a noisy multi-pair instance with a
        # speed large enough that the fitted heading is meaningful.
        if scene.n_pairs >= 2 and state.velocity.speed_mps >= 10.0:
            noisy = generate_measurements(
                truth, state.position.angle_rad, noise, derive_stream(seed, k, 2)
            )
            pos_hat = estimate_position(scene, noisy).position
            ls = estimate_velocity(scene, noisy, pos_hat)
            if (
                ls.condition_number <= thresholds.grid_condition_cap
                and ls.velocity.speed_mps < scene.max_speed_mps  # clamped: no cell bound
            ):
                grid = grid_search_velocity(scene, noisy, pos_hat, grid_v_steps, grid_phi_steps)
                v_cell = scene.max_speed_mps / (grid_v_steps - 1)
                phi_cell = 2.0 * math.pi / grid_phi_steps
                # Lattice distance: grid argmin vs the node nearest the
                # continuous LS solution.
                dv = abs(
                    round(grid.velocity.speed_mps / v_cell)
                    - round(ls.velocity.speed_mps / v_cell)
                )
                dphi = abs(
                    round(grid.velocity.heading_rad / phi_cell)
                    - round(ls.velocity.heading_rad / phi_cell)
                )
                dphi = min(dphi, grid_phi_steps - dphi)
                if dv > max_cell_v:
                    max_cell_v = dv
                if dphi > max_cell_phi:
                    max_cell_phi = dphi
                if dv > thresholds.grid_agreement_cells or dphi > thresholds.grid_agreement_cells:
                    fail(
                        "ls_vs_grid",
                        max(dv, dphi),
                        thresholds.grid_agreement_cells,
                        k,
                        scene,
                        state,
                    )

    return OracleReport(
        samples=samples,
        max_brr_fd_dev_mps=max_fd,
        max_position_roundtrip_m=max_pos,
        max_velocity_roundtrip_mps=max_vel,
        max_grid_speed_cells=max_cell_v,
        max_grid_heading_cells=max_cell_phi,
        failures=tuple(failures),
    )
