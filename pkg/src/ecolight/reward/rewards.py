"""Queue, waiting-time and pressure rewards, plain and weighted per vehicle."""

from enum import Enum

from ..sim.vehicles import HALT_SPEED
from .weights import WeightScheme, lane_weights

WAITING_SCALE = 0.01


class RewardKind(str, Enum):
    QUEUE = "queue"
    WAITING = "waiting"
    PRESSURE = "pressure"


def _halting(lane) -> int:
    return sum(1 for v in lane.vehicles if v.speed < HALT_SPEED)


def _lane_wait(lane) -> float:
    return sum(v.wait_accum for v in lane.vehicles)


def base_reward(kind: RewardKind, world, prev_world=None, raw_sign: bool = False) -> float:
    """Unweighted reward of the current control step.

    The waiting reward is positive when accumulated waiting falls; with
    ``raw_sign`` it is the opposite difference.
    """
    kind = RewardKind(kind)
    if kind == RewardKind.QUEUE:
        return -float(sum(_halting(lane) for lane in world.incoming) ** 2)
    if kind == RewardKind.PRESSURE:
        inflow = sum(len(lane.vehicles) for lane in world.incoming)
        outflow = sum(len(lane.vehicles) for lane in world.outgoing)
        return -float(abs(inflow - outflow))
    now = sum(_lane_wait(lane) for lane in world.incoming)
    before = 0.0 if prev_world is None else sum(_lane_wait(lane) for lane in prev_world.incoming)
    diff = now - before if raw_sign else before - now
    return WAITING_SCALE * diff


def weighted_halting(scheme: WeightScheme, lane, overrides=None) -> float:
    ws = lane_weights(scheme, lane, overrides)
    return sum(w for v, w in zip(lane.vehicles, ws) if v.speed < HALT_SPEED)


def weighted_wait(scheme: WeightScheme, lane, overrides=None) -> float:
    ws = lane_weights(scheme, lane, overrides)
    return sum(w * v.wait_accum for v, w in zip(lane.vehicles, ws))


def weighted_count(scheme: WeightScheme, lane, overrides=None) -> float:
    return sum(lane_weights(scheme, lane, overrides))


def weighted_reward(kind: RewardKind, scheme: WeightScheme, world, prev_world=None,
                    overrides: dict[int, float] | None = None, raw_sign: bool = False) -> float:
    """Reward with every vehicle counted by its weight.

    ``overrides`` maps vehicle ids to weights that replace the scheme's value,
    in both ``world`` and ``prev_world``.
    """
    kind = RewardKind(kind)
    if kind == RewardKind.QUEUE:
        total = sum(weighted_halting(scheme, lane, overrides) for lane in world.incoming)
        return -(total ** 2)
    if kind == RewardKind.PRESSURE:
        inflow = sum(weighted_count(scheme, lane, overrides) for lane in world.incoming)
        outflow = sum(weighted_count(scheme, lane, overrides) for lane in world.outgoing)
        return -abs(inflow - outflow)
    now = sum(weighted_wait(scheme, lane, overrides) for lane in world.incoming)
    before = 0.0
    if prev_world is not None:
        before = sum(weighted_wait(scheme, lane, overrides) for lane in prev_world.incoming)
    diff = now - before if raw_sign else before - now
    return WAITING_SCALE * diff


def discounted_return(rewards, gamma: float) -> float:
    if not 0 <= gamma < 1:
        raise ValueError("gamma must lie in [0, 1)")
    total = 0.0
    for r in reversed(list(rewards)):
        total = r + gamma * total
    return total
