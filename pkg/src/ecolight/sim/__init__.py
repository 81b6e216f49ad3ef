"""Microsimulation core: vehicles, lanes, signal phases, arrivals and dynamics."""

from .arrivals import ArrivalProcess, Injection, spawn_arrivals
from .emissions import compute_emissions
from .network import N_IN, N_PHASES, PHASE_IN_LANES, PHASE_OUT_LANES, Approach, Lane, Phase, Turn
from .signal import PhaseState, allowed_actions
from .vehicles import (
    BUS, CAR, EMISSION_MAX, HALT_SPEED, HDV, LDV, MAX_IDLE_RATE, VEHICLE_CLASSES,
    ClassName, Vehicle, VehicleClass,
)
from .world import SimParams, Snapshot, World, halting_count, step_dynamics


def set_phase(world: World, action: int) -> World:
    """Apply a green-phase decision at a control-step boundary."""
    world.set_phase(action)
    return world
