"""Target localization from BR, BRR, and DOA measurements.

Pipeline: fuse the DOA measurements into a bearing estimate, invert each
pair's bistatic range into a stand-alone range estimate, fuse the ranges,
then fit velocity to the range-rate measurements by maximum likelihood.

Position needs a single TX-RX pair; velocity needs two (speed and heading
are two unknowns).  All fused quantities are solved in closed form: the
bearing and range objectives are quadratic, so their constrained argmins
are clamped means, and the range-rate objective is linear in the Cartesian
velocity components, so the ML fit is a two-column linear least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGeometry,
    InsufficientPairs,
    NoUsablePairs,
    SingularGeometry,
)
from .geometry import (
    PolarPoint,
    PolarVelocity,
    Scene,
    projected_range_rate,
    target_path_range,
    tx_angle,
)
from .measurement import MeasurementSet

# Design matrices with a worse 2-norm condition number than this are
# treated as rank deficient (all effective directions collinear).
CONDITION_LIMIT = 1e8

# Below this fitted speed the heading carries no information.
ZERO_SPEED_EPS = 1e-12

HEADING_DOMAINS = ("full", "half")


@dataclass(frozen=True)
class PositionEstimate:
    """Fused position plus the per-pair range inversions behind it.

    ``per_pair_range_m`` has one entry per pair in TX order; pairs whose
    inversion was degenerate carry NaN and are listed in
    ``degenerate_pairs`` (1-based).
    """

    position: PolarPoint
    per_pair_range_m: tuple[float, ...]
    degenerate_pairs: tuple[int, ...] = ()


@dataclass(frozen=True)
class VelocityEstimate:
    """ML velocity fit with its residual and per-pair predictions.

    ``predicted_brr_mps`` is NaN for pairs dropped as degenerate.
    ``heading_degenerate`` flags a fitted speed too small for the heading
    to mean anything (reported heading is then 0 by convention).
    """

    velocity: PolarVelocity
    residual_mps: float
    predicted_brr_mps: tuple[float, ...]
    dropped_pairs: tuple[int, ...] = ()
    heading_degenerate: bool = False
    condition_number: float = float("nan")


@dataclass(frozen=True)
class Estimate:
    """Full estimator output; velocity is absent for single-pair scenes."""

    position_part: PositionEstimate
    velocity_part: VelocityEstimate | None


def estimate_doa(meas: MeasurementSet) -> float:
    """Fuse DOA measurements into one bearing on [0, pi].

    The ML objective ||x*1 - beta|| is quadratic in x, so its minimizer
    over the bearing domain is the sample mean projected onto [0, pi].
    """
    mean = sum(meas.doa_rad) / meas.n_pairs
    return min(math.pi, max(0.0, mean))


def single_pair_range(br_m: float, tx: PolarPoint, theta_hat: float) -> float:
    """Invert one pair's bistatic range into a target range.

    Squaring the BR relation and solving for the target range gives

        a = (br^2 + 2*br*L) / (2*br + 2*L - 2*L*cos(theta_tx - theta_hat))

    which is exact for noise-free inputs.  The denominator vanishes only
    when the BR is ~0 with the bearing on the TX's own bearing, i.e. the
    target sits on the TX-RX baseline where BR carries no range
    information; that raises DegenerateGeometry.
    """
    li = tx.range_m
    denominator = 2.0 * br_m + 2.0 * li - 2.0 * li * math.cos(tx.angle_rad - theta_hat)
    if denominator <= 1e-9 * li:
        raise DegenerateGeometry(
            f"range inversion denominator {denominator} too small "
            f"(target on the TX-RX baseline)"
        )
    return (br_m * br_m + 2.0 * br_m * li) / denominator


def estimate_position(scene: Scene, meas: MeasurementSet) -> PositionEstimate:
    """Bearing from DOA fusion, range from fused per-pair inversions.

    The fused range is the mean of the usable per-pair inversions clamped
    to [0, max_range_m] (the quadratic objective's constrained argmin).
    Degenerate pairs are excluded from the mean and reported; if every
    pair is degenerate the estimate fails with NoUsablePairs.
    """
    _check_pair_count(scene, meas)
    theta_hat = estimate_doa(meas)
    ranges: list[float] = []
    degenerate: list[int] = []
    for i in range(1, scene.n_pairs + 1):
        try:
            ranges.append(single_pair_range(meas.br_m[i - 1], scene.tx(i), theta_hat))
        except DegenerateGeometry:
            ranges.append(float("nan"))
            degenerate.append(i)
    usable = [a for a in ranges if not math.isnan(a)]
    if not usable:
        raise NoUsablePairs("every pair's range inversion was degenerate")
    range_hat = min(scene.max_range_m, max(0.0, sum(usable) / len(usable)))
    return PositionEstimate(
        position=PolarPoint(range_hat, theta_hat),
        per_pair_range_m=tuple(ranges),
        degenerate_pairs=tuple(degenerate),
    )


def predicted_brr(scene: Scene, i: int, pos_hat: PolarPoint, v: float, phi: float) -> float:
    """BRR that pair i would see if the target were at pos_hat moving
    with (v, phi).  Shares the forward model's code path so predictions
    and truth cannot drift apart."""
    alpha = tx_angle(scene, i, pos_hat)
    return projected_range_rate(pos_hat, PolarVelocity(v, phi), scene.tx(i).angle_rad, alpha)


def _velocity_rows(
    scene: Scene, pos_hat: PolarPoint
) -> tuple[list[tuple[float, float]], list[int], list[int]]:
    """Per-pair coefficients of the BRR as a linear form in (w1, w2).

    With w1 = v*cos(phi) and w2 = v*sin(phi), each predicted BRR is
    w1*row[0] + w2*row[1]; the trigonometric expansion of the projection
    formulas makes the ML fit an exact linear least squares.
    """
    theta_hat = pos_hat.angle_rad
    rows: list[tuple[float, float]] = []
    usable: list[int] = []
    dropped: list[int] = []
    for i in range(1, scene.n_pairs + 1):
        if target_path_range(scene, i, pos_hat) == 0.0:
            dropped.append(i)
            rows.append((float("nan"), float("nan")))
            continue
        alpha = tx_angle(scene, i, pos_hat)
        theta_i = scene.tx(i).angle_rad
        sign = 1.0 if theta_hat >= theta_i else -1.0
        # Bearing of the target->TX projection axis, from the same branch
        # rule as projected_range_rate.
        c = theta_i - sign * (alpha - math.pi)
        rows.append((math.cos(theta_hat) + math.cos(c), math.sin(theta_hat) + math.sin(c)))
        usable.append(i)
    return rows, usable, dropped


def _solve_two_column_ls(
    rows: list[tuple[float, float]], y: list[float]
) -> tuple[float, float, float, float, float]:
    """Closed-form least squares for an N x 2 system.

    Returns (w1, w2, cond, a11, r1) where cond is the design matrix's
    2-norm condition number from the normal matrix's eigenvalues, and
    (a11, r1) let callers re-solve on the w2 = 0 boundary.  Normal
    equations square the conditioning, which is fine here: solutions are
    only accepted below CONDITION_LIMIT and typical scenes sit orders of
    magnitude lower.
    """
    a11 = sum(g1 * g1 for g1, _ in rows)
    a12 = sum(g1 * g2 for g1, g2 in rows)
    a22 = sum(g2 * g2 for _, g2 in rows)
    trace = a11 + a22
    disc = math.sqrt(max(0.0, (a11 - a22) ** 2 + 4.0 * a12 * a12))
    lam_max = 0.5 * (trace + disc)
    lam_min = 0.5 * (trace - disc)
    if lam_min <= 0.0:
        raise SingularGeometry("velocity design matrix is rank deficient")
    cond = math.sqrt(lam_max / lam_min)
    if cond > CONDITION_LIMIT:
        raise SingularGeometry(
            f"velocity design matrix condition number {cond:.3e} exceeds "
            f"{CONDITION_LIMIT:.0e} (measurement directions collinear)"
        )
    r1 = sum(g1 * yi for (g1, _), yi in zip(rows, y))
    r2 = sum(g2 * yi for (_, g2), yi in zip(rows, y))
    det = a11 * a22 - a12 * a12
    w1 = (a22 * r1 - a12 * r2) / det
    w2 = (a11 * r2 - a12 * r1) / det
    return w1, w2, cond, a11, r1


def estimate_velocity(
    scene: Scene,
    meas: MeasurementSet,
    pos_hat: PolarPoint,
    heading_domain: str = "full",
) -> VelocityEstimate:
    """ML velocity fit: minimize the misfit between predicted and
    measured BRRs over speed and heading.

    The fit is solved exactly in Cartesian velocity components (see
    ``_velocity_rows``), then converted back to (speed, heading) with the
    speed clamped to [0, max_speed_mps].  ``heading_domain`` is "full"
    for headings on [0, 2*pi) or "half" to constrain them to [0, pi]
    (solved as the boundary case of the same convex problem when the
    unconstrained heading falls outside).
    """
    _check_pair_count(scene, meas)
    if heading_domain not in HEADING_DOMAINS:
        raise ValueError(f"heading_domain must be one of {HEADING_DOMAINS}")
    rows, usable, dropped = _velocity_rows(scene, pos_hat)
    if len(usable) < 2:
        raise InsufficientPairs(
            f"velocity estimation needs >= 2 usable pairs, have {len(usable)}"
        )
    fit_rows = [rows[i - 1] for i in usable]
    fit_y = [meas.brr_mps[i - 1] for i in usable]
    w1, w2, cond, a11, r1 = _solve_two_column_ls(fit_rows, fit_y)
    if heading_domain == "half" and w2 < 0.0:
        # Constrained optimum of the convex objective on the w2 >= 0
        # half-plane lies on its boundary.
        w1, w2 = r1 / a11, 0.0
    speed = math.hypot(w1, w2)
    heading = math.atan2(w2, w1) % (2.0 * math.pi)
    degenerate_heading = speed < ZERO_SPEED_EPS
    if degenerate_heading:
        heading = 0.0
    speed = min(speed, scene.max_speed_mps)
    return _finish_velocity(
        scene, meas, pos_hat, speed, heading, usable, dropped, cond, degenerate_heading
    )


def grid_search_velocity(
    scene: Scene,
    meas: MeasurementSet,
    pos_hat: PolarPoint,
    v_steps: int,
    phi_steps: int,
    heading_domain: str = "full",
) -> VelocityEstimate:
    """Brute-force oracle for the velocity fit.

    Evaluates the misfit on a (speed x heading) grid - speeds on
    [0, max_speed_mps] inclusive, headings covering the chosen domain -
    and returns the minimizing node.  Exists to cross-check the linear
    least-squares solution; accuracy is one grid cell by construction.
    """
    _check_pair_count(scene, meas)
    if v_steps < 2 or phi_steps < 2:
        raise ValueError(f"need v_steps, phi_steps >= 2, got {v_steps}, {phi_steps}")
    if heading_domain not in HEADING_DOMAINS:
        raise ValueError(f"heading_domain must be one of {HEADING_DOMAINS}")
    _, usable, dropped = _velocity_rows(scene, pos_hat)
    if len(usable) < 2:
        raise InsufficientPairs(
            f"velocity estimation needs >= 2 usable pairs, have {len(usable)}"
        )
    speeds = np.linspace(0.0, scene.max_speed_mps, v_steps)
    if heading_domain == "full":
        headings = np.arange(phi_steps) * (2.0 * math.pi / phi_steps)
    else:
        headings = np.linspace(0.0, math.pi, phi_steps)
    y = np.array([meas.brr_mps[i - 1] for i in usable])
    theta_hat = pos_hat.angle_rad
    # Predicted BRR is speed * A_i(phi): evaluate the unit-speed response
    # per pair, then expand the quadratic misfit over the speed axis.
    unit = []
    for i in usable:
        alpha = tx_angle(scene, i, pos_hat)
        theta_i = scene.tx(i).angle_rad
        sign = 1.0 if theta_hat >= theta_i else -1.0
        unit.append(
            -np.cos(headings - math.pi - theta_hat)
            + np.cos(headings - theta_i + sign * (alpha - math.pi))
        )
    unit_arr = np.asarray(unit)  # (pairs, phi)
    p = np.sum(unit_arr * unit_arr, axis=0)
    q = np.sum(unit_arr * y[:, None], axis=0)
    objective = (speeds[:, None] ** 2) * p[None, :] - 2.0 * speeds[:, None] * q[None, :]
    flat = int(np.argmin(objective))
    v_idx, phi_idx = divmod(flat, phi_steps)
    return _finish_velocity(
        scene,
        meas,
        pos_hat,
        float(speeds[v_idx]),
        float(headings[phi_idx]),
        usable,
        dropped,
        float("nan"),
        False,
    )


def _finish_velocity(scene, meas, pos_hat, speed, heading, usable, dropped, cond, degenerate):
    predictions = []
    sq_sum = 0.0
    for i in range(1, scene.n_pairs + 1):
        if i in usable:
            pred = predicted_brr(scene, i, pos_hat, speed, heading)
            sq_sum += (pred - meas.brr_mps[i - 1]) ** 2
            predictions.append(pred)
        else:
            predictions.append(float("nan"))
    return VelocityEstimate(
        velocity=PolarVelocity(speed, heading),
        residual_mps=math.sqrt(sq_sum),
        predicted_brr_mps=tuple(predictions),
        dropped_pairs=tuple(dropped),
        heading_degenerate=degenerate,
        condition_number=cond,
    )


def estimate(scene: Scene, meas: MeasurementSet, heading_domain: str = "full") -> Estimate:
    """Run the full pipeline: position always, velocity when N >= 2."""
    position_part = estimate_position(scene, meas)
    velocity_part = None
    if scene.n_pairs >= 2:
        velocity_part = estimate_velocity(
            scene, meas, position_part.position, heading_domain
        )
    return Estimate(position_part=position_part, velocity_part=velocity_part)


def _check_pair_count(scene: Scene, meas: MeasurementSet) -> None:
    if meas.n_pairs != scene.n_pairs:
        raise ValueError(
            f"measurement set has {meas.n_pairs} pairs but scene has {scene.n_pairs}"
        )
