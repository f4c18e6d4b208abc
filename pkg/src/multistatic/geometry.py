"""Exact forward model for multistatic TX-RX-target geometry.

The receiver sits at the origin.  Every other actor is described in polar
coordinates (range, angle).  For each TX-RX pair the model produces the
target-path range, the bistatic range (BR), the bistatic range rate (BRR),
and the interior angle of the RX-TX-target triangle at the TX.

All angles are radians internally.  The matching Cartesian embedding is
x = -range*cos(angle), y = range*sin(angle); it is used only by the
finite-difference oracle and by plotting, never by the estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, OutOfBounds

# Relative slack tolerated before clamping an acos argument or a radicand;
# larger violations indicate inconsistent inputs and raise instead.
_DOMAIN_GUARD = 1e-12


@dataclass(frozen=True)
class PolarPoint:
    """A position as (range in meters, angle in radians) about the RX."""

    range_m: float
    angle_rad: float

    def __post_init__(self):
        if not (math.isfinite(self.range_m) and self.range_m >= 0.0):
            raise ValueError(f"range_m must be finite and >= 0, got {self.range_m}")
        if not math.isfinite(self.angle_rad):
            raise ValueError(f"angle_rad must be finite, got {self.angle_rad}")


@dataclass(frozen=True)
class PolarVelocity:
    """A velocity as (speed in m/s, heading in radians)."""

    speed_mps: float
    heading_rad: float

    def __post_init__(self):
        if not (math.isfinite(self.speed_mps) and self.speed_mps >= 0.0):
            raise ValueError(f"speed_mps must be finite and >= 0, got {self.speed_mps}")
        if not math.isfinite(self.heading_rad):
            raise ValueError(f"heading_rad must be finite, got {self.heading_rad}")


@dataclass(frozen=True)
class TargetState:
    """Position and velocity of the moving target."""

    position: PolarPoint
    velocity: PolarVelocity


@dataclass(frozen=True)
class Scene:
    """The fixed geometry: TX positions plus the search bounds.

    ``max_range_m`` and ``max_speed_mps`` bound the estimator's search
    domain for target range and speed; they are clamps, not physics.
    """

    txs: tuple[PolarPoint, ...]
    max_range_m: float
    max_speed_mps: float

    def __post_init__(self):
        object.__setattr__(self, "txs", tuple(self.txs))
        if len(self.txs) < 1:
            raise ValueError("a scene needs at least one TX")
        for k, tx in enumerate(self.txs, start=1):
            if tx.range_m <= 0.0:
                raise ValueError(f"TX{k} is collocated with the RX (range_m must be > 0)")
        if not (math.isfinite(self.max_range_m) and self.max_range_m > 0.0):
            raise ValueError(f"max_range_m must be finite and > 0, got {self.max_range_m}")
        if not (math.isfinite(self.max_speed_mps) and self.max_speed_mps > 0.0):
            raise ValueError(f"max_speed_mps must be finite and > 0, got {self.max_speed_mps}")

    @property
    def n_pairs(self) -> int:
        return len(self.txs)

    def tx(self, i: int) -> PolarPoint:
        """The i-th transmitter, 1-based (pairs are numbered TX1..TXN)."""
        if not 1 <= i <= len(self.txs):
            raise IndexError(f"pair index {i} outside 1..{len(self.txs)}")
        return self.txs[i - 1]


@dataclass(frozen=True)
class PairTruth:
    """Noise-free observables of one TX-RX pair for a given target state."""

    target_path_range_m: float
    bistatic_range_m: float
    bistatic_range_rate_mps: float
    tx_angle_rad: float


def to_cartesian(p: PolarPoint) -> tuple[float, float]:
    """Map a polar point to Cartesian (x, y) = (-r*cos(a), r*sin(a))."""
    return (-p.range_m * math.cos(p.angle_rad), p.range_m * math.sin(p.angle_rad))


def from_cartesian(x: float, y: float) -> PolarPoint:
    """Inverse of :func:`to_cartesian`; angle falls in (-pi, pi]."""
    return PolarPoint(math.hypot(x, y), math.atan2(y, -x))


def velocity_to_cartesian(v: PolarVelocity) -> tuple[float, float]:
    """Map (speed, heading) to Cartesian velocity under the same convention."""
    return (-v.speed_mps * math.cos(v.heading_rad), v.speed_mps * math.sin(v.heading_rad))


def _clamped_sqrt(radicand: float, scale: float) -> float:
    # Law-of-cosines radicands are >= 0 up to rounding; tolerate tiny
    # negative excursions relative to the squared lengths involved.
    if radicand < 0.0:
        if radicand < -_DOMAIN_GUARD * max(scale, 1.0):
            raise DegenerateGeometry(f"negative radicand {radicand} (scale {scale})")
        return 0.0
    return math.sqrt(radicand)


def _clamped_acos(x: float) -> float:
    if x > 1.0:
        if x > 1.0 + _DOMAIN_GUARD:
            raise DegenerateGeometry(f"acos argument {x} above 1")
        return 0.0
    if x < -1.0:
        if x < -1.0 - _DOMAIN_GUARD:
            raise DegenerateGeometry(f"acos argument {x} below -1")
        return math.pi
    return math.acos(x)


def target_path_range(scene: Scene, i: int, pos: PolarPoint) -> float:
    """Distance from TX_i to the target (law of cosines about the RX)."""
    tx = scene.tx(i)
    li, l0 = tx.range_m, pos.range_m
    radicand = li * li - 2.0 * li * l0 * math.cos(tx.angle_rad - pos.angle_rad) + l0 * l0
    return _clamped_sqrt(radicand, max(li * li, l0 * l0))


def bistatic_range(scene: Scene, i: int, pos: PolarPoint) -> float:
    """BR of pair i: target-path range plus reflected-path range minus the
    direct-path baseline.  Non-negative by the triangle inequality."""
    tx = scene.tx(i)
    return max(0.0, pos.range_m + target_path_range(scene, i, pos) - tx.range_m)


def tx_angle(scene: Scene, i: int, pos: PolarPoint) -> float:
    """Interior angle at TX_i in the RX-TX_i-target triangle, in [0, pi].

    Computed by the law of cosines.  The law-of-sines arcsin form is
    ambiguous for obtuse angles (arcsin only covers [0, pi/2]) and picks
    the wrong branch whenever the target is far enough from the TX; acos
    is single-valued on [0, pi] and correct everywhere.
    """
    tx = scene.tx(i)
    li, l0 = tx.range_m, pos.range_m
    b = target_path_range(scene, i, pos)
    if b == 0.0:
        raise DegenerateGeometry(f"target collocated with TX{i}; interior angle undefined")
    return _clamped_acos((li * li + b * b - l0 * l0) / (2.0 * li * b))


def tx_angle_arcsin(scene: Scene, i: int, pos: PolarPoint) -> float:
    """Law-of-sines form of :func:`tx_angle`, kept as a diagnostic.

    Returns arcsin(L0*sin|theta0 - theta_i| / b_i), which equals the true
    interior angle only when that angle is acute.  Feeding it into the
    range-rate projection is the documented negative control: it fails the
    finite-difference oracle on obtuse geometries.
    """
    tx = scene.tx(i)
    b = target_path_range(scene, i, pos)
    if b == 0.0:
        raise DegenerateGeometry(f"target collocated with TX{i}; interior angle undefined")
    arg = pos.range_m * math.sin(abs(pos.angle_rad - tx.angle_rad)) / b
    return math.asin(min(1.0, max(-1.0, arg)))


def projected_range_rate(
    pos: PolarPoint, vel: PolarVelocity, tx_bearing_rad: float, interior_angle_rad: float
) -> float:
    """BRR from the polar projection formulas, given the interior angle.

    The rate of the reflected path is the velocity projected onto the
    target->RX direction; the rate of the target path is the projection
    onto the target->TX_i direction, whose bearing is recovered from the
    TX's angular position ``tx_bearing_rad`` (theta_i) and the triangle's
    interior angle at the TX.  The sign selecting the geometric branch is
    +1 when the target's bearing is >= the TX's (ties resolve to +1; for a
    flat triangle the interior angle is 0 or pi and both branches
    coincide).
    """
    v, phi = vel.speed_mps, vel.heading_rad
    sign = 1.0 if pos.angle_rad >= tx_bearing_rad else -1.0
    approach = v * math.cos(phi - math.pi - pos.angle_rad)
    path = v * math.cos(phi - tx_bearing_rad + sign * (interior_angle_rad - math.pi))
    return -approach + path


def bistatic_range_rate(scene: Scene, i: int, state: TargetState) -> float:
    """BRR of pair i: the time derivative of (reflected + target path).

    Equals the Cartesian projection sum (v.u_rx + v.u_tx) along the unit
    vectors from the target toward RX and TX_i; validated against the
    central-difference oracle :func:`brr_finite_difference`.
    """
    alpha = tx_angle(scene, i, state.position)
    return projected_range_rate(state.position, state.velocity, scene.tx(i).angle_rad, alpha)


def brr_finite_difference(scene: Scene, i: int, state: TargetState, dt: float) -> float:
    """Independent BRR oracle: central difference of the closed-form BR.

    Displaces the target's Cartesian image by +-dt along its Cartesian
    velocity, converts back to polar, and differences the bistatic range.
    O(dt^2) accurate; shares no code with the projection formulas.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    x, y = to_cartesian(state.position)
    vx, vy = velocity_to_cartesian(state.velocity)
    ahead = bistatic_range(scene, i, from_cartesian(x + dt * vx, y + dt * vy))
    behind = bistatic_range(scene, i, from_cartesian(x - dt * vx, y - dt * vy))
    return (ahead - behind) / (2.0 * dt)


def ground_truth(scene: Scene, state: TargetState) -> tuple[PairTruth, ...]:
    """Noise-free (b, BR, BRR, tx angle) for every pair, in TX order.

    Raises OutOfBounds if the target state violates the scene bounds and
    DegenerateGeometry if the target is collocated with any TX.
    """
    if state.position.range_m > scene.max_range_m:
        raise OutOfBounds(
            f"target range {state.position.range_m} m exceeds bound {scene.max_range_m} m"
        )
    if state.velocity.speed_mps > scene.max_speed_mps:
        raise OutOfBounds(
            f"target speed {state.velocity.speed_mps} m/s exceeds bound {scene.max_speed_mps} m/s"
        )
    out = []
    for i in range(1, scene.n_pairs + 1):
        b = target_path_range(scene, i, state.position)
        if b == 0.0:
            raise DegenerateGeometry(f"target collocated with TX{i}")
        alpha = tx_angle(scene, i, state.position)
        out.append(
            PairTruth(
                target_path_range_m=b,
                bistatic_range_m=bistatic_range(scene, i, state.position),
                bistatic_range_rate_mps=projected_range_rate(
                    state.position, state.velocity, scene.tx(i).angle_rad, alpha
                ),
                tx_angle_rad=alpha,
            )
        )
    return tuple(out)
