import numpy as np
import pytest

from ecolight.sim import CAR, World
from ecolight.sim.vehicles import Vehicle


def make_vehicle(vid, lane, position=0.0, speed=0.0, vclass=CAR, wait=0.0, out_lane=None, co2_rate=0.0):
    from ecolight.sim.network import N_IN
    if out_lane is None:
        out_lane = N_IN + (lane % N_IN)
    return Vehicle(id=vid, vclass=vclass, lane=lane, out_lane=out_lane, position=position,
                   speed=speed, wait_accum=wait, co2_rate=co2_rate)


def place(world, lane_id, vehicles):
    """Put vehicles into a lane, front first by position."""
    lane = world.lanes[lane_id]
    lane.vehicles = sorted(list(vehicles), key=lambda v: -v.position)
    return lane


@pytest.fixture
def world():
    return World()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_world(rng, max_vehicles=20, min_vehicles=0, with_prev=True):
    """A world with up to ``max_vehicles`` randomly placed vehicles (ids from 0).

    Returns ``(world, prev)`` where ``prev`` holds the same vehicles one step
    earlier with smaller accumulated waits and random earlier speeds.
    """
    from ecolight.sim.network import N_IN
    from ecolight.sim.vehicles import VEHICLE_CLASSES

    classes = list(VEHICLE_CLASSES.values())
    world, prev = World(), World()
    n = int(rng.integers(min_vehicles, max_vehicles + 1))
    by_lane, prev_by_lane = {}, {}
    for vid in range(n):
        lane = int(rng.integers(0, 2 * N_IN))
        vclass = classes[int(rng.integers(0, len(classes)))]
        halted = rng.random() < 0.5
        speed = 0.0 if halted else float(rng.uniform(2.0, 13.0))
        wait = float(rng.integers(0, 120)) if lane < N_IN else 0.0
        v = make_vehicle(vid, lane, position=float(rng.uniform(0, 150)), speed=speed, vclass=vclass,
                         wait=wait, co2_rate=float(rng.uniform(0.0, 9.0)))
        p = make_vehicle(vid, lane, position=v.position, speed=float(rng.choice([0.0, 8.0])),
                         vclass=vclass, wait=max(0.0, wait - float(rng.integers(0, 6))),
                         co2_rate=v.co2_rate)
        by_lane.setdefault(lane, []).append(v)
        prev_by_lane.setdefault(lane, []).append(p)
    for lane, vs in by_lane.items():
        place(world, lane, vs)
        place(prev, lane, prev_by_lane[lane])
    return (world, prev) if with_prev else world


ACCEPTANCE_LINES: list[str] = []


def report(number: int, name: str, ok: bool, detail: str) -> None:
    """Record one acceptance verdict; printed now and repeated in the terminal summary."""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
