import math

import pytest

from multistatic import (
    PolarPoint,
    PolarVelocity,
    Scene,
    TargetState,
    to_cartesian,
    velocity_to_cartesian,
)


@pytest.fixture
def table1_scene() -> Scene:
    return Scene(
        txs=(
            PolarPoint(50.0, math.radians(0.0)),
            PolarPoint(20.0, math.radians(45.0)),
            PolarPoint(25.0, math.radians(135.0)),
        ),
        max_range_m=1000.0,
        max_speed_mps=100.0,
    )


@pytest.fixture
def table1_state() -> TargetState:
    return TargetState(
        position=PolarPoint(50.0, math.radians(90.0)),
        velocity=PolarVelocity(20.0, math.radians(90.0)),
    )


def cartesian_distance(p: PolarPoint, q: PolarPoint) -> float:
    (px, py), (qx, qy) = to_cartesian(p), to_cartesian(q)
    return math.hypot(px - qx, py - qy)


def cartesian_brr(scene: Scene, i: int, state: TargetState) -> float:
    """Independent BRR oracle: sum of velocity projections onto the unit
    vectors from RX and TX toward the target, all in Cartesian."""
    px, py = to_cartesian(state.position)
    vx, vy = velocity_to_cartesian(state.velocity)
    tx, ty = to_cartesian(scene.tx(i))
    l0 = math.hypot(px, py)
    b = math.hypot(px - tx, py - ty)
    return (px * vx + py * vy) / l0 + ((px - tx) * vx + (py - ty) * vy) / b
