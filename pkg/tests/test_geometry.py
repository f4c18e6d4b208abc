import math

import numpy as np
import pytest

from multistatic import (
    DegenerateGeometry,
    OutOfBounds,
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
)
from multistatic.oracle import sample_instance

from conftest import cartesian_brr, cartesian_distance

SQRT2 = math.sqrt(2.0)


class TestEmbedding:
    def test_tx1_row(self):
        assert to_cartesian(PolarPoint(50.0, 0.0)) == (-50.0, 0.0)

    def test_tx3_row(self):
        x, y = to_cartesian(PolarPoint(25.0, math.radians(135.0)))
        assert x == pytest.approx(12.5 * SQRT2, abs=1e-12)
        assert y == pytest.approx(12.5 * SQRT2, abs=1e-12)

    def test_zero_range(self):
        assert to_cartesian(PolarPoint(0.0, 1.234)) == (0.0, 0.0)

    def test_from_cartesian_inverts(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            p = PolarPoint(float(rng.uniform(0.1, 100.0)), float(rng.uniform(0.0, math.pi)))
            q = from_cartesian(*to_cartesian(p))
            assert q.range_m == pytest.approx(p.range_m, rel=1e-12)
            assert q.angle_rad == pytest.approx(p.angle_rad, abs=1e-12)

    def test_consistency_with_law_of_cosines(self):
        # range via the polar formula equals the Euclidean distance of the
        # embedded points, randomized.
        rng = np.random.default_rng(42)
        for _ in range(10_000):
            tx = PolarPoint(float(rng.uniform(0.1, 100.0)), float(rng.uniform(0.0, math.pi)))
            pos = PolarPoint(float(rng.uniform(0.0, 150.0)), float(rng.uniform(0.0, math.pi)))
            scene = Scene(txs=(tx,), max_range_m=1000.0, max_speed_mps=100.0)
            got = target_path_range(scene, 1, pos)
            want = cartesian_distance(tx, pos)
            assert got == pytest.approx(want, rel=1e-10, abs=1e-10)


class TestRanges:
    def test_target_path_table1(self, table1_scene, table1_state):
        pos = table1_state.position
        assert target_path_range(table1_scene, 1, pos) == pytest.approx(math.sqrt(5000.0), abs=1e-9)
        assert target_path_range(table1_scene, 2, pos) == pytest.approx(
            math.sqrt(2900.0 - 1000.0 * SQRT2), abs=1e-9
        )

    def test_target_path_coincident(self):
        tx = PolarPoint(30.0, 0.7)
        scene = Scene(txs=(tx,), max_range_m=1000.0, max_speed_mps=100.0)
        assert target_path_range(scene, 1, tx) == 0.0

    def test_bistatic_range_table1(self, table1_scene, table1_state):
        pos = table1_state.position
        assert bistatic_range(table1_scene, 1, pos) == pytest.approx(math.sqrt(5000.0), abs=1e-9)
        b3 = cartesian_distance(table1_scene.tx(3), pos)
        assert bistatic_range(table1_scene, 3, pos) == pytest.approx(50.0 + b3 - 25.0, abs=1e-9)

    def test_bistatic_range_on_baseline(self):
        scene = Scene(txs=(PolarPoint(50.0, 0.4),), max_range_m=1000.0, max_speed_mps=100.0)
        assert bistatic_range(scene, 1, PolarPoint(20.0, 0.4)) == pytest.approx(0.0, abs=1e-9)

    def test_bistatic_range_nonnegative_randomized(self):
        rng = np.random.default_rng(3)
        for _ in range(2000):
            scene, state = sample_instance(rng, min_path_m=1e-3)
            for i in range(1, scene.n_pairs + 1):
                assert bistatic_range(scene, i, state.position) >= -1e-9

    def test_pair_index_out_of_range(self, table1_scene, table1_state):
        with pytest.raises(IndexError):
            target_path_range(table1_scene, 4, table1_state.position)
        with pytest.raises(IndexError):
            target_path_range(table1_scene, 0, table1_state.position)


class TestTxAngle:
    def test_pair1_acute(self, table1_scene, table1_state):
        got = tx_angle(table1_scene, 1, table1_state.position)
        assert got == pytest.approx(math.radians(45.0), abs=1e-12)

    def test_pair2_obtuse(self, table1_scene, table1_state):
        # Interior angle from Cartesian vectors as the oracle.
        pos = table1_state.position
        tx, ty = to_cartesian(table1_scene.tx(2))
        px, py = to_cartesian(pos)
        v_rx = (-tx, -ty)
        v_tgt = (px - tx, py - ty)
        want = math.acos(
            (v_rx[0] * v_tgt[0] + v_rx[1] * v_tgt[1])
            / (math.hypot(*v_rx) * math.hypot(*v_tgt))
        )
        got = tx_angle(table1_scene, 2, pos)
        assert got > math.pi / 2  # genuinely obtuse
        assert got == pytest.approx(want, abs=1e-12)
        # The arcsin form returns the reflected (acute) angle here.
        assert tx_angle_arcsin(table1_scene, 2, pos) == pytest.approx(math.pi - got, abs=1e-9)

    def test_flat_triangle_beyond_tx(self):
        scene = Scene(txs=(PolarPoint(30.0, 0.9),), max_range_m=1000.0, max_speed_mps=100.0)
        assert tx_angle(scene, 1, PolarPoint(80.0, 0.9)) == pytest.approx(math.pi, abs=1e-7)

    def test_collocated_raises(self):
        tx = PolarPoint(30.0, 0.9)
        scene = Scene(txs=(tx,), max_range_m=1000.0, max_speed_mps=100.0)
        with pytest.raises(DegenerateGeometry):
            tx_angle(scene, 1, tx)

    def test_arcsin_agrees_when_acute(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 2000:
            scene, state = sample_instance(rng, n_txs=1)
            pos = state.position
            li = scene.tx(1).range_m
            b = target_path_range(scene, 1, pos)
            if pos.range_m**2 > li**2 + b**2:  # obtuse: forms differ by design
                continue
            acos_form = tx_angle(scene, 1, pos)
            asin_form = tx_angle_arcsin(scene, 1, pos)
            assert abs(acos_form - asin_form) < 1e-9
            checked += 1


class TestRangeRate:
    def test_pair1_value(self, table1_scene, table1_state):
        got = bistatic_range_rate(table1_scene, 1, table1_state)
        assert got == pytest.approx(20.0 + 20.0 * math.cos(math.radians(45.0)), abs=1e-9)
        assert got == pytest.approx(cartesian_brr(table1_scene, 1, table1_state), abs=1e-9)

    def test_pair2_needs_obtuse_angle(self, table1_scene, table1_state):
        got = bistatic_range_rate(table1_scene, 2, table1_state)
        assert got == pytest.approx(cartesian_brr(table1_scene, 2, table1_state), abs=1e-9)
        # With the reflected (arcsin) angle the projection goes wrong by m/s.
        alpha_bad = tx_angle_arcsin(table1_scene, 2, table1_state.position)
        bad = projected_range_rate(
            table1_state.position,
            table1_state.velocity,
            table1_scene.tx(2).angle_rad,
            alpha_bad,
        )
        assert abs(bad - got) > 1.0

    def test_stationary_target(self, table1_scene):
        state = TargetState(PolarPoint(50.0, 1.0), PolarVelocity(0.0, 0.3))
        for i in range(1, 4):
            assert bistatic_range_rate(table1_scene, i, state) == 0.0

    def test_bound_twice_speed(self):
        rng = np.random.default_rng(5)
        for _ in range(2000):
            scene, state = sample_instance(rng)
            for i in range(1, scene.n_pairs + 1):
                assert abs(bistatic_range_rate(scene, i, state)) <= (
                    2.0 * state.velocity.speed_mps + 1e-12
                )

    def test_case_split_is_bitwise(self):
        # The branch formulas, written out separately, must reproduce the
        # general expression exactly (same floats, not approximately).
        rng = np.random.default_rng(17)
        seen_case1 = seen_case2 = 0
        for _ in range(10_000):
            scene, state = sample_instance(rng, n_txs=1)
            pos, vel = state.position, state.velocity
            theta_i = scene.tx(1).angle_rad
            if pos.angle_rad == theta_i:
                continue
            alpha = tx_angle(scene, 1, pos)
            v, phi = vel.speed_mps, vel.heading_rad
            approach = v * math.cos(phi - math.pi - pos.angle_rad)
            if pos.angle_rad > theta_i:
                branch = -approach + v * math.cos(phi - theta_i + (alpha - math.pi))
                seen_case1 += 1
            else:
                branch = -approach + v * math.cos(phi - theta_i - (alpha - math.pi))
                seen_case2 += 1
            assert branch == bistatic_range_rate(scene, 1, state)
        assert seen_case1 > 1000 and seen_case2 > 1000

    def test_flat_triangle_sign_tie(self):
        # Equal bearings: both sign branches coincide; result must match
        # the Cartesian projection for the target between RX and TX and
        # beyond the TX.
        scene = Scene(txs=(PolarPoint(50.0, 0.8),), max_range_m=1000.0, max_speed_mps=100.0)
        for r in (20.0, 80.0):
            state = TargetState(PolarPoint(r, 0.8), PolarVelocity(13.0, 2.1))
            got = bistatic_range_rate(scene, 1, state)
            assert got == pytest.approx(cartesian_brr(scene, 1, state), abs=1e-9)


class TestFiniteDifference:
    def test_table1_values(self, table1_scene, table1_state):
        for i in (1, 3):
            fd = brr_finite_difference(table1_scene, i, table1_state, 1e-4)
            closed = bistatic_range_rate(table1_scene, i, table1_state)
            assert fd == pytest.approx(closed, abs=1e-5)

    def test_zero_velocity_exact(self, table1_scene):
        state = TargetState(PolarPoint(50.0, 1.2), PolarVelocity(0.0, 0.0))
        assert brr_finite_difference(table1_scene, 1, state, 1e-4) == 0.0

    def test_bad_dt(self, table1_scene, table1_state):
        with pytest.raises(ValueError):
            brr_finite_difference(table1_scene, 1, table1_state, 0.0)

    def test_oracle_identity_randomized(self):
        rng = np.random.default_rng(23)
        worst = 0.0
        for _ in range(1000):
            scene, state = sample_instance(rng)
            for i in range(1, scene.n_pairs + 1):
                dev = abs(
                    bistatic_range_rate(scene, i, state)
                    - brr_finite_difference(scene, i, state, 1e-4)
                )
                worst = max(worst, dev)
        assert worst < 1e-4


class TestGroundTruth:
    def test_table1_batch(self, table1_scene, table1_state):
        truth = ground_truth(table1_scene, table1_state)
        assert len(truth) == 3
        for i, pair in enumerate(truth, start=1):
            assert pair.target_path_range_m == pytest.approx(
                target_path_range(table1_scene, i, table1_state.position), abs=0.0
            )
            assert pair.bistatic_range_rate_mps == pytest.approx(
                cartesian_brr(table1_scene, i, table1_state), abs=1e-9
            )
            assert 0.0 <= pair.tx_angle_rad <= math.pi
            assert pair.bistatic_range_m >= 0.0

    def test_single_pair(self, table1_state):
        scene = Scene(txs=(PolarPoint(50.0, 0.0),), max_range_m=1000.0, max_speed_mps=100.0)
        assert len(ground_truth(scene, table1_state)) == 1

    def test_stationary_all_zero_rates(self, table1_scene):
        state = TargetState(PolarPoint(50.0, 1.4), PolarVelocity(0.0, 0.0))
        assert all(p.bistatic_range_rate_mps == 0.0 for p in ground_truth(table1_scene, state))

    def test_out_of_bounds(self, table1_scene):
        fast = TargetState(PolarPoint(50.0, 1.0), PolarVelocity(500.0, 0.0))
        with pytest.raises(OutOfBounds):
            ground_truth(table1_scene, fast)
        far = TargetState(PolarPoint(5000.0, 1.0), PolarVelocity(5.0, 0.0))
        with pytest.raises(OutOfBounds):
            ground_truth(table1_scene, far)

    def test_collocated_target(self, table1_scene):
        state = TargetState(table1_scene.tx(2), PolarVelocity(5.0, 0.0))
        with pytest.raises(DegenerateGeometry):
            ground_truth(table1_scene, state)


class TestInvariants:
    def test_scene_validation(self):
        with pytest.raises(ValueError):
            Scene(txs=(), max_range_m=100.0, max_speed_mps=10.0)
        with pytest.raises(ValueError):
            Scene(txs=(PolarPoint(0.0, 0.0),), max_range_m=100.0, max_speed_mps=10.0)
        with pytest.raises(ValueError):
            Scene(txs=(PolarPoint(5.0, 0.0),), max_range_m=0.0, max_speed_mps=10.0)

    def test_polar_validation(self):
        with pytest.raises(ValueError):
            PolarPoint(-1.0, 0.0)
        with pytest.raises(ValueError):
            PolarPoint(math.nan, 0.0)
        with pytest.raises(ValueError):
            PolarVelocity(-2.0, 0.0)
        with pytest.raises(ValueError):
            PolarVelocity(1.0, math.inf)
