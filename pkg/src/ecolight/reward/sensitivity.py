"""Log-sensitivity of weighted rewards to a single vehicle's weight."""

from ..sim.vehicles import HALT_SPEED
from .rewards import RewardKind, weighted_count, weighted_halting, weighted_reward, weighted_wait
from .weights import WeightScheme, vehicle_weight


class UndefinedSensitivity(ArithmeticError):
    pass


def _locate(world, vehicle_id):
    for lane in world.lanes:
        for v in lane.vehicles:
            if v.id == vehicle_id:
                return v, lane
    return None, None


def current_weight(scheme: WeightScheme, vehicle_id: int, world, prev_world=None) -> float:
    v, lane = _locate(world, vehicle_id)
    if v is None and prev_world is not None:
        v, lane = _locate(prev_world, vehicle_id)
    if v is None:
        raise KeyError(f"vehicle {vehicle_id} not present")
    return vehicle_weight(scheme, v, lane, world)


def sensitivity_closed(kind: RewardKind, scheme: WeightScheme, vehicle_id: int, world,
                       prev_world=None) -> float:
    """Closed-form sensitivities as printed for the three weighted rewards.

    The queue form is ``2 w^2 / sum(N_wH)``; direct differentiation gives
    ``2 w / sum(N_wH)`` instead (see :func:`sensitivity_fd`).
    """
    kind = RewardKind(kind)
    w = current_weight(scheme, vehicle_id, world, prev_world)
    if kind == RewardKind.QUEUE:
        denom = sum(weighted_halting(scheme, lane) for lane in world.incoming)
        if denom == 0:
            raise UndefinedSensitivity("no weighted halting vehicles")
        return 2.0 * w * w / denom
    if kind == RewardKind.PRESSURE:
        inflow = sum(weighted_count(scheme, lane) for lane in world.incoming)
        outflow = sum(weighted_count(scheme, lane) for lane in world.outgoing)
        denom = abs(inflow - outflow)
        if denom == 0:
            raise UndefinedSensitivity("balanced pressure")
        return w / denom
    now = sum(weighted_wait(scheme, lane) for lane in world.incoming)
    before = 0.0 if prev_world is None else sum(weighted_wait(scheme, lane) for lane in prev_world.incoming)
    denom = now - before
    if denom == 0:
        raise UndefinedSensitivity("weighted waiting unchanged")
    v, lane = _locate(world, vehicle_id)
    wait_i = v.wait_accum if v is not None and lane.incoming else 0.0
    prev_v = None if prev_world is None else _locate(prev_world, vehicle_id)[0]
    # indicator is zero only when the vehicle was moving one step earlier
    was_halting = 1.0 if prev_v is not None and prev_v.speed < HALT_SPEED else 0.0
    return w * (wait_i - wait_i * was_halting) / denom


def sensitivity_fd(kind: RewardKind, scheme: WeightScheme, vehicle_id: int, world, prev_world=None,
                   h: float = 1e-5) -> float:
    """Central finite difference of the weighted reward in one vehicle's weight, scaled by w/R."""
    if h <= 0:
        raise ValueError("h must be positive")
    w = current_weight(scheme, vehicle_id, world, prev_world)
    r = weighted_reward(kind, scheme, world, prev_world)
    if r == 0:
        raise UndefinedSensitivity("reward is zero")
    up = weighted_reward(kind, scheme, world, prev_world, overrides={vehicle_id: w + h})
    down = weighted_reward(kind, scheme, world, prev_world, overrides={vehicle_id: w - h})
    return (up - down) / (2.0 * h) * w / r
