"""Signal phase state machine: green, then yellow and all-red before the next green."""

import logging
from dataclasses import dataclass

from .network import N_PHASES, PHASE_IN_LANES, Phase

log = logging.getLogger(__name__)

GREEN = "green"
YELLOW = "yellow"
ALL_RED = "all_red"


@dataclass
class PhaseState:
    phase: int = 0
    elapsed: int = 0  # control steps served by the current green
    stage: str = GREEN
    next_phase: int | None = None
    stage_left: float = 0.0  # seconds left in the current transition stage
    yellow: float = 3.0
    all_red: float = 2.0

    @property
    def in_transition(self) -> bool:
        return self.stage != GREEN

    def bits(self) -> list[int]:
        """One-hot green bits plus a clearance flag; all-zero greens mean clearance."""
        out = [0] * (N_PHASES + 1)
        if self.stage == GREEN:
            out[self.phase] = 1
        else:
            out[N_PHASES] = 1
        return out

    def green_lanes(self) -> tuple[int, ...]:
        return PHASE_IN_LANES[Phase(self.phase)] if self.stage == GREEN else ()

    def yellow_lanes(self) -> tuple[int, ...]:
        return PHASE_IN_LANES[Phase(self.phase)] if self.stage == YELLOW else ()

    def request(self, action: int, g_min: int, g_max: int) -> int | None:
        """Apply a controller decision at a control-step boundary.

        Returns the length of the green that just ended when a switch starts,
        otherwise None.
        """
        if self.in_transition:
            log.debug("decision %s ignored during transition", action)
            return None
        if action == self.phase and self.elapsed >= g_max:
            fallback = (self.phase + 1) % N_PHASES
            log.debug("g_max reached on phase %s, forcing %s", self.phase, fallback)
            action = fallback
        if action == self.phase:
            self.elapsed += 1
            return None
        if self.elapsed < g_min:
            log.debug("switch to %s before g_min ignored", action)
            self.elapsed += 1
            return None
        served = self.elapsed
        self.stage = YELLOW
        self.stage_left = self.yellow
        self.next_phase = int(action)
        return served

    def tick(self, dt: float) -> None:
        if self.stage == GREEN:
            return
        self.stage_left -= dt
        if self.stage_left > 1e-9:
            return
        if self.stage == YELLOW and self.all_red > 0:
            self.stage = ALL_RED
            self.stage_left = self.all_red
            return
        self.stage = GREEN
        self.phase = self.next_phase
        self.next_phase = None
        self.elapsed = 0
        self.stage_left = 0.0


def allowed_actions(state: PhaseState, g_min: int, g_max: int) -> tuple[bool, ...]:
    """Which green phases a controller may pick at this decision point."""
    if state.in_transition or state.elapsed < g_min:
        return tuple(p == state.phase for p in range(N_PHASES))
    if state.elapsed >= g_max:
        return tuple(p != state.phase for p in range(N_PHASES))
    return (True,) * N_PHASES
