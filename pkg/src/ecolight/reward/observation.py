"""State vector: phase bits, then per-incoming-lane density, halting fraction and mean emission class."""

from dataclasses import dataclass

import numpy as np

from ..sim.vehicles import EMISSION_MAX, HALT_SPEED

# average vehicle length plus the standstill gap
VEHICLE_SPACE = 7.5


@dataclass(frozen=True)
class Observation:
    phase_bits: tuple[int, ...]
    density: np.ndarray
    queue: np.ndarray
    avg_class: np.ndarray

    def reals(self) -> np.ndarray:
        return np.concatenate([self.density, self.queue, self.avg_class])

    def vector(self) -> np.ndarray:
        """Flat float vector ``[p, D, Q, C]``."""
        return np.concatenate([np.asarray(self.phase_bits, dtype=float), self.reals()])

    @property
    def phase(self) -> int:
        """Index of the active green, or 3 during clearance."""
        return self.phase_bits.index(1)


def observe(world, vehicle_space: float = VEHICLE_SPACE, emission_max: int = EMISSION_MAX) -> Observation:
    lanes = world.incoming
    if not lanes:
        raise ValueError("world has no incoming lanes")
    n = len(lanes)
    density = np.zeros(n)
    queue = np.zeros(n)
    avg_class = np.zeros(n)
    for j, lane in enumerate(lanes):
        vs = lane.vehicles
        if not vs:
            continue
        count = len(vs)
        halting = 0
        ranks = 0
        for v in vs:
            if v.speed < HALT_SPEED:
                halting += 1
            ranks += v.vclass.emission_rank
        capacity = lane.length / vehicle_space
        density[j] = min(1.0, count / capacity)
        queue[j] = halting / count
        avg_class[j] = ranks / (count * emission_max)
    return Observation(tuple(world.signal.bits()), density, queue, avg_class)
