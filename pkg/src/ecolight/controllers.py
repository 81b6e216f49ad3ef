"""Non-learning signal controllers: fixed-time, Webster, max-pressure and SOTL.

Every controller answers ``act(world, obs, reward, allowed)`` with a green
phase index. ``allowed`` masks phases the signal cannot switch to right now
(before g_min only the current phase; at g_max everything but it).
"""

import numpy as np

from .reward.rewards import weighted_count
from .sim.network import N_IN, N_PHASES, PHASE_IN_LANES, PHASE_OUT_LANES, Phase

FIXED_GREENS = (42, 42, 10)  # NS, EW, NE in control steps


def _first_allowed(order, allowed):
    for p in order:
        if allowed[p]:
            return p
    raise ValueError("no phase allowed")


def uniform_next(phase: int, elapsed: int, greens=FIXED_GREENS, allowed=(True,) * N_PHASES) -> int:
    """Cycle NS -> EW -> NE, each green held for its fixed duration."""
    cycle = [(phase + k) % N_PHASES for k in range(1, N_PHASES + 1)]
    if elapsed < greens[phase] and allowed[phase]:
        return phase
    return _first_allowed(cycle, allowed)


def webster_timing(flow_ratios, lost_time: float = 15.0, c_min: float = 30.0, c_max: float = 240.0,
                   y_cap: float = 0.95) -> tuple[float, list[float]]:
    """Webster cycle length and green splits in seconds.

    ``flow_ratios`` are critical flow/saturation ratios per phase.
    """
    y = np.asarray(flow_ratios, dtype=float)
    total = float(y.sum())
    if total <= 0:
        raise ValueError("flow ratios sum to zero")
    big_y = min(total, y_cap)
    cycle = (1.5 * lost_time + 5.0) / (1.0 - big_y)
    cycle = min(c_max, max(c_min, cycle))
    greens = [float(v) for v in y / total * (cycle - lost_time)]
    return cycle, greens


def max_pressure_next(counts, allowed=(True,) * N_PHASES, weights=None) -> int:
    """Phase with the largest incoming-minus-outgoing count; ties go to the lower index.

    ``counts`` holds one entry per lane, incoming lanes first. ``weights``
    optionally replaces counts with weighted totals of the same shape.
    """
    n = np.asarray(counts if weights is None else weights, dtype=float)
    best, best_p = None, None
    for p in range(N_PHASES):
        if not allowed[p]:
            continue
        pressure = n[list(PHASE_IN_LANES[Phase(p)])].sum() - n[list(PHASE_OUT_LANES[Phase(p)])].sum()
        if best is None or pressure > best:
            best, best_p = pressure, p
    return best_p


def phase_pressures(counts) -> list[float]:
    n = np.asarray(counts, dtype=float)
    return [float(n[list(PHASE_IN_LANES[Phase(p)])].sum() - n[list(PHASE_OUT_LANES[Phase(p)])].sum())
            for p in range(N_PHASES)]


def sotl_next(kappa, approaching, phase: int, elapsed: int, theta: float = 50.0, mu: int = 10,
              allowed=(True,) * N_PHASES) -> int:
    """Accumulate waiting demand on red phases and switch once it crosses ``theta``.

    Mutates ``kappa`` in place.
    """
    for p in range(N_PHASES):
        if p != phase:
            kappa[p] += approaching[p]
    candidates = [p for p in range(N_PHASES) if p != phase and allowed[p]]
    if not candidates:
        return phase
    best = max(candidates, key=lambda p: (kappa[p], -p))
    forced = not allowed[phase]
    if forced or (kappa[best] >= theta and elapsed >= mu):
        kappa[best] = 0.0
        return best
    return phase


class Controller:
    key = "base"
    learns = False

    def reset(self, world) -> None:
        pass

    def act(self, world, obs, reward: float, allowed) -> int:
        raise NotImplementedError


class UniformController(Controller):
    key = "uniform"

    def __init__(self, greens=FIXED_GREENS):
        self.greens = tuple(greens)

    def act(self, world, obs, reward, allowed):
        s = world.signal
        return uniform_next(s.phase, s.elapsed, self.greens, allowed)


class WebsterController(Controller):
    """Re-times a fixed cycle every ``window`` seconds from the flows seen in the last window."""

    key = "webster"

    def __init__(self, window: float = 600.0, saturation: float = 0.5, lost_per_phase: float = 5.0,
                 c_min: float = 30.0, c_max: float = 240.0, step_seconds: float = 5.0,
                 fallback=FIXED_GREENS, g_min: int = 10, g_max: int = 50):
        self.window = window
        self.saturation = saturation
        self.lost_time = lost_per_phase * N_PHASES
        self.c_min, self.c_max = c_min, c_max
        self.step_seconds = step_seconds
        self.fallback = tuple(fallback)
        self.g_min, self.g_max = g_min, g_max
        self.reset(None)

    def reset(self, world):
        self.greens = self.fallback
        self.cycle = None
        self._last_counts = [0] * N_IN if world is None else list(world.entered)
        self._window_steps = max(1, int(round(self.window / self.step_seconds)))
        self._last_step = 0 if world is None else world.step

    def plan(self, lane_flows) -> tuple[int, ...]:
        """Green durations in control steps from per-incoming-lane flows (veh/s)."""
        ratios = [max(lane_flows[j] for j in PHASE_IN_LANES[Phase(p)]) / self.saturation
                  for p in range(N_PHASES)]
        if sum(ratios) <= 0:
            self.cycle = None
            return self.fallback
        self.cycle, secs = webster_timing(ratios, self.lost_time, self.c_min, self.c_max)
        return tuple(int(min(self.g_max, max(self.g_min, round(g / self.step_seconds)))) for g in secs)

    def act(self, world, obs, reward, allowed):
        if world.step - self._last_step >= self._window_steps:
            counts = list(world.entered)
            flows = [(c - o) / self.window for c, o in zip(counts, self._last_counts)]
            self._last_counts = counts
            self._last_step = world.step
            self.greens = self.plan(flows)
        s = world.signal
        return uniform_next(s.phase, s.elapsed, self.greens, allowed)


class MaxPressureController(Controller):
    key = "maxpressure"

    def __init__(self, scheme=None):
        self.scheme = scheme  # weighted variant when set

    def act(self, world, obs, reward, allowed):
        if self.scheme is None:
            counts = [len(lane.vehicles) for lane in world.lanes]
            return max_pressure_next(counts, allowed)
        weights = [weighted_count(self.scheme, lane) for lane in world.lanes]
        return max_pressure_next(None, allowed, weights=weights)


class SOTLController(Controller):
    key = "sotl"

    def __init__(self, theta: float = 50.0, mu: int = 10):
        self.theta, self.mu = theta, mu
        self.kappa = [0.0] * N_PHASES

    def reset(self, world):
        self.kappa = [0.0] * N_PHASES

    def act(self, world, obs, reward, allowed):
        approaching = [sum(len(world.lanes[j].vehicles) for j in PHASE_IN_LANES[Phase(p)])
                       for p in range(N_PHASES)]
        s = world.signal
        return sotl_next(self.kappa, approaching, s.phase, s.elapsed, self.theta, self.mu, allowed)


CLASSIC = {
    UniformController.key: UniformController,
    WebsterController.key: WebsterController,
    MaxPressureController.key: MaxPressureController,
    SOTLController.key: SOTLController,
}
