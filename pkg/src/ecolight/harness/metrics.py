"""Per-step metrics and tail aggregates."""

import math
from dataclasses import dataclass

from ..sim.vehicles import CAR

SPEED_FLOOR = 0.1

METRIC_FIELDS = ("travel_time_s", "co2_g_per_step", "co2_cum_kg", "waiting_s", "stopped_s", "reward", "vehicles")
CSV_COLUMNS = ("step",) + METRIC_FIELDS


@dataclass(frozen=True)
class MetricsRecord:
    step: int
    travel_time_s: float
    co2_g_per_step: float
    co2_cum_kg: float
    waiting_s: float
    stopped_s: float | None  # None when no vehicle left during the step
    reward: float
    vehicles: int


def travel_time(world, lane_length: float | None = None, free_speed: float = CAR.free_speed) -> float:
    """Network travel-time estimate: lane length over the count-weighted mean lane speed.

    Lane mean speeds are floored at 0.1 m/s; an empty network gives the
    free-flow time.
    """
    lanes = world.lanes
    length = lane_length if lane_length is not None else sum(l.length for l in lanes) / len(lanes)
    count = 0
    flow = 0.0
    for lane in lanes:
        n = len(lane.vehicles)
        if n == 0:
            continue
        mean_speed = sum(v.speed for v in lane.vehicles) / n
        count += n
        flow += max(mean_speed, SPEED_FLOOR) * n
    if count == 0:
        return length / free_speed
    return length * count / flow


def stopped_time(halted_times) -> float | None:
    """Mean halted seconds over departed vehicles; None when nobody departed."""
    halted_times = list(halted_times)
    if not halted_times:
        return None
    return sum(halted_times) / len(halted_times)


def total_waiting(world) -> float:
    return sum(v.wait_accum for v in world.vehicles())


def tail_aggregate(records, tail_steps: int) -> dict[str, float]:
    """Mean of each metric over the last ``tail_steps`` records; stopped time skips absent values."""
    tail = list(records)[-tail_steps:] if tail_steps > 0 else []
    out = {}
    for name in METRIC_FIELDS:
        vals = [getattr(r, name) for r in tail]
        vals = [float(v) for v in vals if v is not None]
        out[name] = math.fsum(vals) / len(vals) if vals else math.nan
    return out
