"""Poisson arrival process with scheduled demand injections and a vehicle-class mix."""

from dataclasses import dataclass, field

import numpy as np

from .network import Turn, in_lane_id, out_lane_id
from .vehicles import BUS, CAR, HDV, LDV, Vehicle


@dataclass(frozen=True)
class Injection:
    start_step: int
    extra_rate: float  # vehicles per second per approach
    duration: int
    approaches: tuple[int, ...] = (0, 2)

    def active(self, step: int) -> bool:
        return self.start_step <= step < self.start_step + self.duration


@dataclass
class ArrivalProcess:
    base_rate: float = 0.08  # vehicles per second per approach
    injections: tuple[Injection, ...] = ()
    interval: float = 5.0  # seconds covered by one spawn call (a control step)
    mix_ratio: float = 0.0
    turn_probs: tuple[float, float, float] = (0.70, 0.15, 0.15)  # through, left, right
    _next_id: int = field(default=0, repr=False)

    def rate(self, step: int, approach: int) -> float:
        r = self.base_rate
        for inj in self.injections:
            if inj.active(step) and approach in inj.approaches:
                r += inj.extra_rate
        return r

    def draw_class(self, rng: np.random.Generator):
        if self.mix_ratio <= 0 or rng.random() >= self.mix_ratio:
            return CAR
        return (HDV, BUS, LDV)[rng.integers(3)]


def spawn_arrivals(process: ArrivalProcess, step: int, rng: np.random.Generator) -> list[Vehicle]:
    """New vehicles for one control step, positioned at their lane entry.

    Counts are Poisson with mean rate times ``process.interval``; injections
    are scheduled in control steps.

    The world decides when each one actually enters; blocked entries wait in
    a per-lane buffer.
    """
    if step < 0:
        raise ValueError("step must be non-negative")
    out = []
    for approach in range(4):
        lam = process.rate(step, approach) * process.interval
        if lam <= 0:
            continue
        for _ in range(rng.poisson(lam)):
            turn = Turn(rng.choice(3, p=process.turn_probs))
            vclass = process.draw_class(rng)
            out.append(Vehicle(
                id=process._next_id,
                vclass=vclass,
                lane=in_lane_id(approach, turn),
                out_lane=out_lane_id(approach, turn),
                spawn_step=step,
            ))
            process._next_id += 1
    return out
