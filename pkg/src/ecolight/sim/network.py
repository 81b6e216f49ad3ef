"""Intersection geometry: four approaches, two incoming and two outgoing lanes each.

Incoming lane 0 of an approach carries through and right-turn traffic, lane 1
carries left turns. Outgoing lane 0 receives through traffic, lane 1 turns.
"""

from dataclasses import dataclass, field
from enum import IntEnum

from .vehicles import Vehicle


class Approach(IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3


class Turn(IntEnum):
    THROUGH = 0
    LEFT = 1
    RIGHT = 2


class Phase(IntEnum):
    NS = 0
    EW = 1
    NE = 2


N_PHASES = 3
LANES_PER_APPROACH = 2
N_IN = 4 * LANES_PER_APPROACH


@dataclass
class Lane:
    id: int
    approach: Approach
    incoming: bool
    length: float
    vehicles: list[Vehicle] = field(default_factory=list)  # front first

    @property
    def n(self) -> int:
        return len(self.vehicles)


def in_lane_id(approach: int, turn: int) -> int:
    return approach * LANES_PER_APPROACH + (1 if turn == Turn.LEFT else 0)


def destination(approach: int, turn: int) -> int:
    # approaches are numbered clockwise; a vehicle entering from N heads south
    if turn == Turn.THROUGH:
        return (approach + 2) % 4
    if turn == Turn.LEFT:
        return (approach + 1) % 4
    return (approach + 3) % 4


def out_lane_id(approach: int, turn: int) -> int:
    dest = destination(approach, turn)
    return N_IN + dest * LANES_PER_APPROACH + (0 if turn == Turn.THROUGH else 1)


def _phase_lanes() -> dict[Phase, tuple[int, ...]]:
    n, e, s, w = Approach.N, Approach.E, Approach.S, Approach.W
    return {
        Phase.NS: (in_lane_id(n, Turn.THROUGH), in_lane_id(s, Turn.THROUGH)),
        # east-west also carries its left turns permissively
        Phase.EW: (
            in_lane_id(e, Turn.THROUGH), in_lane_id(w, Turn.THROUGH),
            in_lane_id(e, Turn.LEFT), in_lane_id(w, Turn.LEFT),
        ),
        Phase.NE: (in_lane_id(n, Turn.LEFT), in_lane_id(s, Turn.LEFT)),
    }


PHASE_IN_LANES = _phase_lanes()


def _phase_out_lanes() -> dict[Phase, tuple[int, ...]]:
    out = {}
    for phase, lanes in PHASE_IN_LANES.items():
        targets = set()
        for lane in lanes:
            approach = lane // LANES_PER_APPROACH
            turns = (Turn.LEFT,) if lane % LANES_PER_APPROACH else (Turn.THROUGH, Turn.RIGHT)
            targets.update(out_lane_id(approach, t) for t in turns)
        out[phase] = tuple(sorted(targets))
    return out


PHASE_OUT_LANES = _phase_out_lanes()
# green phase serving each incoming lane
LANE_PHASE = {lane: phase for phase, lanes in PHASE_IN_LANES.items() for lane in lanes}


def build_lanes(length: float) -> list[Lane]:
    lanes = []
    for approach in Approach:
        for k in range(LANES_PER_APPROACH):
            lanes.append(Lane(approach * LANES_PER_APPROACH + k, approach, True, length))
    for approach in Approach:
        for k in range(LANES_PER_APPROACH):
            lanes.append(Lane(N_IN + approach * LANES_PER_APPROACH + k, approach, False, length))
    return lanes
