"""Per-vehicle reward weights."""

import statistics
from dataclasses import dataclass, field

from ..sim.vehicles import EMISSION_MAX, HEAVY_ORDER, MAX_IDLE_RATE, ClassName

UNWEIGHTED = "unweighted"
CONSTANT = "constant"
LANE = "lane"
ADAPTIVE = "adaptive"
SCHEMES = (UNWEIGHTED, CONSTANT, LANE, ADAPTIVE)

TUNED_WEIGHTS = (3.0, 2.0, 1.05)  # HDV, Bus, LDV
WEIGHT_FLOOR = 0.1


@dataclass(frozen=True)
class WeightScheme:
    kind: str = UNWEIGHTED
    # HDV, Bus, LDV; Car is always 1
    constant: tuple[float, float, float] = field(default=TUNED_WEIGHTS)

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"unknown weight scheme {self.kind!r}; expected one of {SCHEMES}")
        if any(w <= 0 for w in self.constant):
            raise ValueError("constant weights must be positive")

    def class_weight(self, name: ClassName) -> float:
        if name == ClassName.CAR:
            return 1.0
        return float(self.constant[HEAVY_ORDER.index(name)])


def lane_normalized_weight(lane, emission_max: int = EMISSION_MAX) -> float:
    """Shared weight of every vehicle in ``lane`` from its total and median emission rank."""
    vs = lane.vehicles
    if not vs:
        return 1.0
    ranks = [v.vclass.emission_rank for v in vs]
    w = (sum(ranks) - statistics.median(ranks)) / (emission_max * len(vs))
    return max(WEIGHT_FLOOR, w)


def adaptive_weight(vehicle, emission_max: int = EMISSION_MAX) -> float:
    w = vehicle.co2_rate / MAX_IDLE_RATE
    return min(float(emission_max), max(WEIGHT_FLOOR, w))


def vehicle_weight(scheme: WeightScheme, vehicle, lane, world=None) -> float:
    if scheme.kind == UNWEIGHTED:
        return 1.0
    if scheme.kind == CONSTANT:
        return scheme.class_weight(vehicle.vclass.name)
    if scheme.kind == LANE:
        return lane_normalized_weight(lane)
    return adaptive_weight(vehicle)


def lane_weights(scheme: WeightScheme, lane, overrides: dict[int, float] | None = None) -> list[float]:
    """Weights of all vehicles in ``lane``, in lane order."""
    if scheme.kind == UNWEIGHTED:
        ws = [1.0] * len(lane.vehicles)
    elif scheme.kind == CONSTANT:
        ws = [scheme.class_weight(v.vclass.name) for v in lane.vehicles]
    elif scheme.kind == LANE:
        ws = [lane_normalized_weight(lane)] * len(lane.vehicles)
    else:
        ws = [adaptive_weight(v) for v in lane.vehicles]
    if overrides:
        ws = [overrides.get(v.id, w) for v, w in zip(lane.vehicles, ws)]
    return ws
