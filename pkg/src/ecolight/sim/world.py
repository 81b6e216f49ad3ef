"""Discrete-time microsimulation of the intersection.

Dynamics advance in 1 s sub-steps; signal decisions happen every control step
(five sub-steps). Vehicles follow a bounded-acceleration rule: accelerate
toward free speed, never faster than the speed from which they can still stop
behind their obstacle (leader's rear plus minimum gap, or the stop line).
"""

import copy
import math
from collections import deque
from dataclasses import dataclass

from .emissions import compute_emissions
from .network import N_IN, Lane, build_lanes
from .signal import PhaseState
from .vehicles import HALT_SPEED, Vehicle


@dataclass(frozen=True)
class SimParams:
    lane_length: float = 150.0
    min_gap: float = 2.5
    accel: float = 2.6
    decel: float = 4.5
    dt: float = 1.0
    substeps: int = 5
    g_min: int = 10
    g_max: int = 50
    yellow: float = 3.0
    all_red: float = 2.0


class LaneView:
    """Shared accessors for the live world and its snapshots."""

    lanes: list[Lane]
    signal: PhaseState

    @property
    def incoming(self) -> list[Lane]:
        return self.lanes[:N_IN]

    @property
    def outgoing(self) -> list[Lane]:
        return self.lanes[N_IN:]

    def vehicles(self):
        for lane in self.lanes:
            yield from lane.vehicles

    def n_vehicles(self) -> int:
        return sum(len(lane.vehicles) for lane in self.lanes)

    def find(self, vehicle_id: int) -> Vehicle | None:
        for v in self.vehicles():
            if v.id == vehicle_id:
                return v
        return None


@dataclass
class Snapshot(LaneView):
    lanes: list[Lane]
    signal: PhaseState
    step: int
    params: SimParams


def _safe_speed(gap: float, decel: float, dt: float) -> float:
    """Largest speed for one step of travel that still allows stopping within ``gap``."""
    if gap <= 0:
        return 0.0
    bdt = decel * dt
    return -bdt + math.sqrt(bdt * bdt + 2.0 * decel * gap)


class World(LaneView):
    def __init__(self, params: SimParams = SimParams()):
        self.params = params
        self.lanes = build_lanes(params.lane_length)
        self.signal = PhaseState(yellow=params.yellow, all_red=params.all_red)
        self.pending: list[deque[Vehicle]] = [deque() for _ in range(N_IN)]
        self.time = 0.0
        self.step = 0
        self.spawned = 0
        self.despawned = 0
        self.co2_total = 0.0
        self.co2_step = 0.0
        self.departed_waits: list[float] = []  # vehicles that left during the last control step
        self.entered = [0] * N_IN  # cumulative entries per incoming lane
        self.green_log: list[tuple[int, int]] = []  # (phase, control steps served)

    def snapshot(self) -> Snapshot:
        lanes = [Lane(l.id, l.approach, l.incoming, l.length, [copy.copy(v) for v in l.vehicles])
                 for l in self.lanes]
        return Snapshot(lanes, copy.copy(self.signal), self.step, self.params)

    @property
    def n_pending(self) -> int:
        return sum(len(q) for q in self.pending)

    def add_arrivals(self, vehicles: list[Vehicle]) -> None:
        for v in vehicles:
            self.pending[v.lane].append(v)

    def _insert_pending(self) -> None:
        p = self.params
        for lane_id, queue in enumerate(self.pending):
            if not queue:
                continue
            lane = self.lanes[lane_id]
            if lane.vehicles:
                last = lane.vehicles[-1]
                room = last.position - last.vclass.length - p.min_gap
                if room < 0:
                    continue
            else:
                room = math.inf
            v = queue.popleft()
            v.lane = lane_id
            v.position = 0.0
            v.speed = min(v.vclass.free_speed, _safe_speed(room, p.decel, p.dt))
            lane.vehicles.append(v)
            self.spawned += 1
            self.entered[lane_id] += 1

    def set_phase(self, action: int) -> None:
        served = self.signal.request(action, self.params.g_min, self.params.g_max)
        if served is not None:
            self.green_log.append((self.signal.phase, served))

    def advance(self) -> None:
        """Run one control step worth of sub-steps."""
        self.co2_step = 0.0
        self.departed_waits = []
        for _ in range(self.params.substeps):
            step_dynamics(self, self.params.dt)
        self.step += 1


def _move(v: Vehicle, obstacle: float, p: SimParams, dt: float) -> float:
    """Update speed, waiting and CO2 of ``v``; returns the new position."""
    old = v.speed
    gap = obstacle - v.position
    new = old + p.accel * dt
    vf = v.vclass.free_speed
    if new > vf:
        new = vf
    safe = _safe_speed(gap, p.decel, dt)
    if new > safe:
        new = safe
    if new < 0.0:
        new = 0.0
    v.speed = new
    if new < HALT_SPEED:
        v.wait_accum += dt
    grams = compute_emissions(v.vclass, new, (new - old) / dt, dt)
    v.co2_accum += grams
    v.co2_rate = grams / dt
    pos = v.position + new * dt
    return pos if pos < obstacle else max(obstacle, v.position)


def step_dynamics(world: World, dt: float = 1.0) -> World:
    """Advance every vehicle by one sub-step of ``dt`` seconds."""
    p = world.params
    world._insert_pending()
    lanes = world.lanes
    emitted = 0.0

    # outgoing lanes first so that their tails make room for crossing vehicles
    for lane in lanes[N_IN:]:
        kept = []
        limit = math.inf
        for v in lane.vehicles:
            pos = _move(v, limit, p, dt)
            emitted += v.co2_rate * dt
            if pos >= lane.length:
                world.despawned += 1
                world.departed_waits.append(v.wait_accum)
                continue
            v.position = pos
            limit = pos - v.vclass.length - p.min_gap
            kept.append(v)
        lane.vehicles = kept

    green = world.signal.green_lanes()
    yellow = world.signal.yellow_lanes()
    for lane in lanes[:N_IN]:
        if not lane.vehicles:
            continue
        L = lane.length
        is_green = lane.id in green
        is_yellow = lane.id in yellow
        kept = []
        limit = math.inf
        for v in lane.vehicles:
            go = is_green
            if is_yellow and v.speed * v.speed / (2.0 * p.decel) > L - v.position:
                go = True  # cannot stop before the line any more
            if go:
                out = lanes[v.out_lane]
                if out.vehicles:
                    tail = out.vehicles[-1]
                    room = tail.position - tail.vclass.length - p.min_gap
                    line = L + (room if room > 0 else 0.0)
                else:
                    line = L + out.length
            else:
                line = L
            obstacle = limit if limit < line else line
            pos = _move(v, obstacle, p, dt)
            emitted += v.co2_rate * dt
            limit = pos - v.vclass.length - p.min_gap
            if pos > L:
                v.position = pos - L
                v.lane = v.out_lane
                lanes[v.out_lane].vehicles.append(v)
            else:
                v.position = pos
                kept.append(v)
        lane.vehicles = kept

    world.co2_step += emitted
    world.co2_total += emitted
    world.signal.tick(dt)
    world.time += dt
    return world


def halting_count(lane: Lane) -> int:
    return sum(1 for v in lane.vehicles if v.speed < HALT_SPEED)
