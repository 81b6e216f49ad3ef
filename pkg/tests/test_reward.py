import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_vehicle, place, random_world
from ecolight.reward import (
    ADAPTIVE, CONSTANT, LANE, TUNED_WEIGHTS, UNWEIGHTED, RewardKind, UndefinedSensitivity, WeightScheme,
    base_reward, discounted_return, observe, sensitivity_closed, sensitivity_fd, vehicle_weight,
    weighted_reward,
)
from ecolight.reward.weights import WEIGHT_FLOOR, lane_normalized_weight
from ecolight.sim import BUS, CAR, HALT_SPEED, HDV, LDV, World
from ecolight.sim.network import N_IN
from ecolight.sim.vehicles import EMISSION_MAX, MAX_IDLE_RATE

KINDS = list(RewardKind)
CONST = WeightScheme(CONSTANT)
SEEDS = st.integers(0, 2**32 - 1)


def class_weight_oracle(vclass):
    return {"HDV": 3.0, "Bus": 2.0, "LDV": 1.05, "Car": 1.0}[vclass.name.value]


def constant_reward_oracle(kind, world, prev):
    """Per-vehicle brute-force sum under the tuned constant weights."""
    incoming = [v for lane in world.lanes[:N_IN] for v in lane.vehicles]
    outgoing = [v for lane in world.lanes[N_IN:] for v in lane.vehicles]
    if kind == RewardKind.QUEUE:
        s = 0.0
        for v in incoming:
            if v.speed < HALT_SPEED:
                s += class_weight_oracle(v.vclass)
        return -s * s
    if kind == RewardKind.PRESSURE:
        return -abs(sum(class_weight_oracle(v.vclass) for v in incoming)
                    - sum(class_weight_oracle(v.vclass) for v in outgoing))
    now = sum(class_weight_oracle(v.vclass) * v.wait_accum for v in incoming)
    before = sum(class_weight_oracle(v.vclass) * v.wait_accum for lane in prev.lanes[:N_IN] for v in lane.vehicles)
    return 0.01 * (before - now)


def lane_of(world, vid):
    for lane in world.lanes:
        for v in lane.vehicles:
            if v.id == vid:
                return lane, v
    return None, None


def analytic_derivative(kind, scheme, world, prev, vid):
    """d(weighted reward)/d(w_i), by hand from the reward definitions."""
    lane, v = lane_of(world, vid)
    w = lambda x, ln: vehicle_weight(scheme, x, ln, world)
    if kind == RewardKind.QUEUE:
        s = sum(w(x, ln) for ln in world.incoming for x in ln.vehicles if x.speed < HALT_SPEED)
        counted = lane.incoming and v.speed < HALT_SPEED
        return -2.0 * s if counted else 0.0
    if kind == RewardKind.PRESSURE:
        d = (sum(w(x, ln) for ln in world.incoming for x in ln.vehicles)
             - sum(w(x, ln) for ln in world.outgoing for x in ln.vehicles))
        side = 1.0 if lane.incoming else -1.0
        return -math.copysign(1.0, d) * side
    plane, pv = lane_of(prev, vid)
    before = pv.wait_accum if plane is not None and plane.incoming else 0.0
    now = v.wait_accum if lane.incoming else 0.0
    return 0.01 * (before - now)


class TestObserve:
    def test_density_example(self, world):
        place(world, 0, [make_vehicle(i, 0, position=100 - 8 * i, speed=10.0) for i in range(6)])
        obs = observe(world)
        assert obs.density[0] == pytest.approx(0.3)

    def test_queue_example(self, world):
        vs = [make_vehicle(i, 0, position=100 - 8 * i, speed=0.0 if i < 3 else 10.0) for i in range(6)]
        place(world, 0, vs)
        assert observe(world).queue[0] == pytest.approx(0.5)

    def test_class_example(self, world):
        place(world, 0, [make_vehicle(0, 0, 100, vclass=HDV), make_vehicle(1, 0, 80, vclass=CAR),
                         make_vehicle(2, 0, 60, vclass=CAR)])
        assert CAR.emission_rank == 3 and HDV.emission_rank == 6
        assert observe(world).avg_class[0] == pytest.approx(12 / 18)

    def test_empty(self, world):
        obs = observe(world)
        assert not obs.density.any() and not obs.queue.any() and not obs.avg_class.any()
        assert obs.phase_bits == (1, 0, 0, 0)

    def test_dimensions(self, world):
        obs = observe(world)
        assert obs.reals().shape == (24,)
        assert obs.vector().shape == (28,)

    def test_density_clamped(self, world):
        place(world, 1, [make_vehicle(i, 1, position=149 - 5 * i) for i in range(25)])
        assert observe(world).density[1] == 1.0

    @settings(max_examples=50, deadline=None)
    @given(SEEDS)
    def test_bounded(self, seed):
        world = random_world(np.random.default_rng(seed), 40, with_prev=False)
        obs = observe(world)
        for part in (obs.density, obs.queue, obs.avg_class):
            assert np.all((part >= 0) & (part <= 1))


class TestWeights:
    def test_constant_hdv(self, world):
        v = make_vehicle(0, 0, vclass=HDV)
        assert vehicle_weight(CONST, v, world.lanes[0]) == 3.0
        assert [CONST.class_weight(c.name) for c in (HDV, BUS, LDV, CAR)] == [3.0, 2.0, 1.05, 1.0]

    def test_unweighted(self, world):
        for c in (HDV, BUS, LDV, CAR):
            assert vehicle_weight(WeightScheme(UNWEIGHTED), make_vehicle(0, 0, vclass=c), world.lanes[0]) == 1.0

    def test_lane_normalized_example(self, world):
        # ranks 6, 5, 3, 3, 3: sum 20, median 3
        classes = [HDV, BUS, CAR, CAR, CAR]
        lane = place(world, 0, [make_vehicle(i, 0, 140 - 10 * i, vclass=c) for i, c in enumerate(classes)])
        assert lane_normalized_weight(lane) == pytest.approx(17 / 30)
        assert vehicle_weight(WeightScheme(LANE), lane.vehicles[2], lane) == pytest.approx(0.5667, abs=1e-4)

    def test_lane_normalized_floor_and_empty(self, world):
        lane = place(world, 0, [make_vehicle(0, 0, 100, vclass=CAR)])
        # (3 - 3) / 6 = 0 -> floored
        assert lane_normalized_weight(lane) == WEIGHT_FLOOR
        assert lane_normalized_weight(world.lanes[1]) == 1.0

    def test_adaptive(self, world):
        lane = world.lanes[0]
        assert vehicle_weight(WeightScheme(ADAPTIVE), make_vehicle(0, 0, co2_rate=3.0), lane) == 3.0 / MAX_IDLE_RATE
        assert vehicle_weight(WeightScheme(ADAPTIVE), make_vehicle(0, 0, co2_rate=0.0), lane) == WEIGHT_FLOOR
        assert vehicle_weight(WeightScheme(ADAPTIVE), make_vehicle(0, 0, co2_rate=1e3), lane) == EMISSION_MAX

    def test_invalid(self):
        with pytest.raises(ValueError):
            WeightScheme("bogus")
        with pytest.raises(ValueError):
            WeightScheme(CONSTANT, (3.0, 0.0, 1.0))


class TestBaseReward:
    def test_queue_example(self, world):
        place(world, 0, [make_vehicle(0, 0, 140), make_vehicle(1, 0, 130)])
        place(world, 2, [make_vehicle(2, 2, 140)])
        assert base_reward(RewardKind.QUEUE, world) == -9.0

    def test_empty(self, world):
        for kind in KINDS:
            assert base_reward(kind, world, World()) == 0.0

    def test_pressure_example(self, world):
        place(world, 0, [make_vehicle(i, 0, 140 - 10 * i) for i in range(3)])
        place(world, 4, [make_vehicle(3 + i, 4, 140 - 10 * i) for i in range(2)])
        place(world, N_IN, [make_vehicle(5 + i, N_IN, 140 - 10 * i, speed=10.0) for i in range(2)])
        assert base_reward(RewardKind.PRESSURE, world) == -3.0

    def test_waiting_sign(self):
        prev, now = World(), World()
        place(prev, 0, [make_vehicle(0, 0, 140, wait=10.0)])
        place(now, 0, [make_vehicle(0, 0, 140, wait=15.0)])
        assert base_reward(RewardKind.WAITING, now, prev) == pytest.approx(-0.05)
        assert base_reward(RewardKind.WAITING, now, prev, raw_sign=True) == pytest.approx(0.05)


class TestWeightedReward:
    def test_hdv_queue(self, world):
        place(world, 0, [make_vehicle(0, 0, 140, vclass=HDV)])
        assert weighted_reward(RewardKind.QUEUE, CONST, world) == -9.0

    def test_hdv_waiting(self):
        prev, now = World(), World()
        place(prev, 0, [make_vehicle(0, 0, 140, vclass=HDV, wait=20.0)])
        place(now, 0, [make_vehicle(0, 0, 140, vclass=HDV, wait=25.0)])
        assert weighted_reward(RewardKind.WAITING, CONST, now, prev) == pytest.approx(-0.15)

    @settings(max_examples=100, deadline=None)
    @given(SEEDS, st.sampled_from(KINDS))
    def test_unweighted_reduction(self, seed, kind):
        world, prev = random_world(np.random.default_rng(seed))
        assert weighted_reward(kind, WeightScheme(UNWEIGHTED), world, prev) == base_reward(kind, world, prev)

    @settings(max_examples=100, deadline=None)
    @given(SEEDS, st.sampled_from(KINDS))
    def test_constant_matches_oracle(self, seed, kind):
        world, prev = random_world(np.random.default_rng(seed))
        got = weighted_reward(kind, CONST, world, prev)
        assert got == pytest.approx(constant_reward_oracle(kind, world, prev), abs=1e-9)

    @settings(max_examples=100, deadline=None)
    @given(SEEDS, st.sampled_from([RewardKind.QUEUE, RewardKind.WAITING]), st.floats(0.0, 5.0))
    def test_monotone_prioritization(self, seed, kind, bump):
        # raising the weight of a halting, waiting vehicle never raises the reward
        world, prev = random_world(np.random.default_rng(seed), min_vehicles=1)
        waiting = [v for lane in world.incoming for v in lane.vehicles if v.speed < HALT_SPEED]
        if kind == RewardKind.WAITING:
            # the vehicle's waiting grew (or held) since the previous step
            prev_wait = {v.id: v.wait_accum for lane in prev.incoming for v in lane.vehicles}
            waiting = [v for v in waiting if v.wait_accum >= prev_wait.get(v.id, 0.0)]
        for v in waiting:
            w = CONST.class_weight(v.vclass.name)
            lo = weighted_reward(kind, CONST, world, prev, overrides={v.id: w})
            hi = weighted_reward(kind, CONST, world, prev, overrides={v.id: w + bump})
            assert hi <= lo + 1e-12

    @settings(max_examples=50, deadline=None)
    @given(SEEDS)
    def test_pressure_nonpositive(self, seed):
        world = random_world(np.random.default_rng(seed), with_prev=False)
        for scheme in (WeightScheme(k) for k in (UNWEIGHTED, CONSTANT, LANE, ADAPTIVE)):
            assert weighted_reward(RewardKind.PRESSURE, scheme, world) <= 0.0

    def test_pressure_zero_iff_balanced(self, world):
        place(world, 0, [make_vehicle(0, 0, 140, vclass=HDV)])
        place(world, N_IN, [make_vehicle(1, N_IN, 140, vclass=BUS), make_vehicle(2, N_IN, 120, vclass=CAR)])
        assert weighted_reward(RewardKind.PRESSURE, CONST, world) == 0.0
        assert base_reward(RewardKind.PRESSURE, world) == -1.0


class TestSensitivity:
    def pressure_world(self, world):
        place(world, 0, [make_vehicle(i, 0, 140 - 10 * i) for i in range(5)])
        place(world, N_IN, [make_vehicle(5 + i, N_IN, 140 - 10 * i, speed=10.0) for i in range(2)])
        return world

    def test_pressure_example(self, world):
        self.pressure_world(world)
        u = WeightScheme(UNWEIGHTED)
        assert sensitivity_closed(RewardKind.PRESSURE, u, 0, world) == pytest.approx(1 / 3)
        assert sensitivity_fd(RewardKind.PRESSURE, u, 0, world, h=1e-5) == pytest.approx(1 / 3, rel=1e-6)

    def queue_world(self, world):
        # HDV-free: w_i = 2 (a bus) plus six halting cars -> weighted halting sum 8
        place(world, 0, [make_vehicle(0, 0, 140, vclass=BUS)]
              + [make_vehicle(1 + i, 0, 120 - 12 * i) for i in range(6)])
        return world

    def test_queue_printed_form(self, world):
        self.queue_world(world)
        assert sensitivity_closed(RewardKind.QUEUE, CONST, 0, world) == pytest.approx(1.0)

    def test_queue_fd_exposes_discrepancy(self, world):
        self.queue_world(world)
        fd = sensitivity_fd(RewardKind.QUEUE, CONST, 0, world)
        assert fd == pytest.approx(0.5, rel=1e-6)
        assert fd != pytest.approx(sensitivity_closed(RewardKind.QUEUE, CONST, 0, world))

    def test_queue_undefined(self, world):
        place(world, 0, [make_vehicle(0, 0, 140, speed=10.0)])
        with pytest.raises(UndefinedSensitivity):
            sensitivity_closed(RewardKind.QUEUE, CONST, 0, world)

    def test_fd_zero_reward(self, world):
        place(world, 0, [make_vehicle(0, 0, 140, speed=10.0)])
        with pytest.raises(UndefinedSensitivity):
            sensitivity_fd(RewardKind.QUEUE, WeightScheme(UNWEIGHTED), 0, world)

    def test_fd_bad_step(self, world):
        self.pressure_world(world)
        with pytest.raises(ValueError):
            sensitivity_fd(RewardKind.PRESSURE, CONST, 0, world, h=0.0)

    @settings(max_examples=100, deadline=None)
    @given(SEEDS, st.sampled_from(KINDS))
    def test_fd_matches_analytic(self, seed, kind):
        rng = np.random.default_rng(seed)
        world, prev = random_world(rng, min_vehicles=1)
        vid = int(rng.integers(0, sum(len(l.vehicles) for l in world.lanes)))
        r = weighted_reward(kind, CONST, world, prev)
        if r == 0:
            return
        lane, v = lane_of(world, vid)
        expected = analytic_derivative(kind, CONST, world, prev, vid) * vehicle_weight(CONST, v, lane) / r
        got = sensitivity_fd(kind, CONST, vid, world, prev)
        assert got == pytest.approx(expected, rel=1e-4, abs=1e-9)


class TestDiscountedReturn:
    def test_zero(self):
        assert discounted_return([0.0] * 10, 0.9) == 0.0

    def test_geometric(self):
        assert discounted_return([1.0] * 5000, 0.99) == pytest.approx(100.0, rel=1e-12)

    def test_hand(self):
        assert discounted_return([1.0, 2.0], 0.5) == 2.0

    def test_bad_gamma(self):
        with pytest.raises(ValueError):
            discounted_return([1.0], 1.0)
