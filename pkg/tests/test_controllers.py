import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_vehicle, place
from ecolight.controllers import (
    CLASSIC, FIXED_GREENS, MaxPressureController, SOTLController, UniformController, WebsterController,
    max_pressure_next, phase_pressures, sotl_next, uniform_next, webster_timing,
)
from ecolight.reward import observe
from ecolight.sim import Phase, World
from ecolight.sim.network import N_IN, PHASE_IN_LANES, PHASE_OUT_LANES

NS, EW, NE = int(Phase.NS), int(Phase.EW), int(Phase.NE)
N_LANES = 2 * N_IN
MASKS = st.lists(st.booleans(), min_size=3, max_size=3).filter(any)


class TestUniform:
    def test_cycle(self):
        assert uniform_next(NS, 42) == EW
        assert uniform_next(EW, 42) == NE

    def test_wraparound(self):
        assert uniform_next(NE, FIXED_GREENS[NE]) == NS

    def test_hold(self):
        assert uniform_next(NS, 41) == NS
        assert uniform_next(NE, 3) == NE

    def test_forced_off_at_gmax(self):
        assert uniform_next(NS, 10, allowed=(False, True, True)) == EW

    def test_periodic(self):
        g = (12, 12, 12)
        phase, elapsed, seq = NS, 0, []
        for _ in range(6 * 13):  # switch happens on the step where elapsed reaches g
            nxt = uniform_next(phase, elapsed, g)
            if nxt != phase:
                seq.append(nxt)
                phase, elapsed = nxt, 0
            else:
                elapsed += 1
        assert seq == [EW, NE, NS, EW, NE, NS]


class TestWebster:
    def test_example(self):
        cycle, greens = webster_timing([0.3, 0.2, 0.05], lost_time=15.0)
        assert cycle == pytest.approx(27.5 / 0.45)
        assert cycle == pytest.approx(61.1, abs=0.05)
        effective = cycle - 15.0
        assert greens == pytest.approx([0.3 / 0.55 * effective, 0.2 / 0.55 * effective, 0.05 / 0.55 * effective])

    def test_zero_flows(self):
        with pytest.raises(ValueError):
            webster_timing([0.0, 0.0, 0.0])
        assert WebsterController().plan([0.0] * N_IN) == FIXED_GREENS

    def test_saturation_clamp(self):
        cycle, _ = webster_timing([0.5, 0.5, 0.5], lost_time=15.0, c_max=1e9)
        assert cycle == pytest.approx(27.5 / (1 - 0.95))
        assert webster_timing([0.5, 0.5, 0.5])[0] == 240.0

    def test_cycle_floor(self):
        assert webster_timing([0.01, 0.01, 0.01])[0] == 30.0

    def test_equal_flows_give_equal_greens(self):
        greens = WebsterController(g_min=1).plan([0.1] * N_IN)
        assert len(set(greens)) == 1

    def test_uniform_before_first_window(self):
        c = WebsterController()
        world = World()
        c.reset(world)
        world.signal.elapsed = 42
        assert c.act(world, observe(world), 0.0, (True, True, True)) == EW


class TestMaxPressure:
    def counts(self, ns=0, ew=0, ne=0):
        n = np.zeros(N_LANES)
        n[sorted(PHASE_IN_LANES[Phase.NS])[0]] = ns
        n[sorted(PHASE_IN_LANES[Phase.EW])[0]] = ew
        n[sorted(PHASE_IN_LANES[Phase.NE])[0]] = ne
        return n

    def test_example(self):
        n = self.counts(3, 2, 0)
        assert phase_pressures(n) == [3.0, 2.0, 0.0]
        assert max_pressure_next(n) == NS

    def test_ties(self):
        assert max_pressure_next(self.counts(2, 2, 2)) == NS
        assert max_pressure_next(np.zeros(N_LANES)) == NS

    def test_outgoing_subtracts(self):
        n = self.counts(3, 2, 0)
        n[sorted(PHASE_OUT_LANES[Phase.NS])[0]] = 5
        assert max_pressure_next(n) == EW

    def test_respects_mask(self):
        assert max_pressure_next(self.counts(3, 2, 0), (False, True, True)) == EW

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(0, 20), min_size=N_LANES, max_size=N_LANES), MASKS)
    def test_memoryless_and_valid(self, counts, mask):
        a = max_pressure_next(counts, mask)
        assert mask[a]
        assert max_pressure_next(list(counts), tuple(mask)) == a
        p = phase_pressures(counts)
        assert p[a] == max(p[i] for i in range(3) if mask[i])

    def test_controller_uses_world(self):
        world = World()
        lane = sorted(PHASE_IN_LANES[Phase.EW])[0]
        place(world, lane, [make_vehicle(i, lane, 140 - 10 * i) for i in range(3)])
        assert MaxPressureController().act(world, None, 0.0, (True, True, True)) == EW


class TestSOTL:
    def test_below_threshold_holds(self):
        kappa = [0.0, 0.0, 0.0]
        assert sotl_next(kappa, [5, 5, 5], NS, 20, theta=50) == NS
        assert kappa == [0.0, 5.0, 5.0]

    def test_threshold_switch(self):
        kappa = [0.0, 45.0, 0.0]
        assert sotl_next(kappa, [0, 5, 0], NS, 10, theta=50, mu=10) == EW
        assert kappa[EW] == 0.0

    def test_min_green_respected(self):
        kappa = [0.0, 60.0, 0.0]
        assert sotl_next(kappa, [0, 0, 0], NS, 9, theta=50, mu=10) == NS

    def test_larger_kappa_wins(self):
        kappa = [0.0, 50.0, 60.0]
        assert sotl_next(kappa, [0, 0, 0], NS, 10) == NE
        kappa = [0.0, 55.0, 55.0]
        assert sotl_next(kappa, [0, 0, 0], NS, 10) == EW


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CLASSIC)), MASKS, st.integers(0, 60), st.integers(0, 2))
def test_controllers_return_allowed_green(key, mask, elapsed, phase):
    world = World()
    world.signal.phase, world.signal.elapsed = phase, elapsed
    c = CLASSIC[key]()
    c.reset(world)
    a = c.act(world, observe(world), 0.0, tuple(mask))
    assert a in (NS, EW, NE) and mask[a]
