"""Vehicle classes and per-vehicle state."""

from dataclasses import dataclass
from enum import Enum

# halting threshold, 5 km/h
HALT_SPEED = 5.0 / 3.6
EMISSION_MAX = 6


class ClassName(str, Enum):
    CAR = "Car"
    LDV = "LDV"
    BUS = "Bus"
    HDV = "HDV"


@dataclass(frozen=True)
class VehicleClass:
    name: ClassName
    length: float
    free_speed: float
    emission_rank: int
    idle_rate: float  # g/s
    speed_coeff: float  # g/m
    accel_coeff: float  # g/(m * m/s^2)


CAR = VehicleClass(ClassName.CAR, 5.0, 13.9, 3, 2.0, 0.10, 0.08)
LDV = VehicleClass(ClassName.LDV, 6.0, 13.9, 4, 2.8, 0.14, 0.11)
BUS = VehicleClass(ClassName.BUS, 12.0, 12.5, 5, 4.5, 0.22, 0.18)
HDV = VehicleClass(ClassName.HDV, 15.0, 11.1, 6, 6.0, 0.30, 0.24)

VEHICLE_CLASSES = {c.name: c for c in (CAR, LDV, BUS, HDV)}
# order of the non-Car classes in weight triples
HEAVY_ORDER = (ClassName.HDV, ClassName.BUS, ClassName.LDV)
MAX_IDLE_RATE = max(c.idle_rate for c in VEHICLE_CLASSES.values())


@dataclass(slots=True)
class Vehicle:
    id: int
    vclass: VehicleClass
    lane: int
    out_lane: int
    position: float = 0.0
    speed: float = 0.0
    wait_accum: float = 0.0
    co2_accum: float = 0.0
    co2_rate: float = 0.0  # g/s over the last sub-step
    spawn_step: int = 0

    @property
    def halting(self) -> bool:
        return self.speed < HALT_SPEED

    @property
    def rank(self) -> int:
        return self.vclass.emission_rank
