"""Shared plumbing for the learning controllers."""

from dataclasses import dataclass, field, fields, replace

import numpy as np

from ..controllers import Controller
from .policy import linear_epsilon


@dataclass(frozen=True)
class AgentConfig:
    alpha: float = 0.001
    gamma: float = 0.99
    epsilon: float = 0.05
    epsilon_min: float = 0.005
    decay_horizon: float = 0.5  # fraction of the episode over which epsilon decays
    lam: float = 0.95
    fourier_order: int = 7
    target_update: int = 100
    buffer_capacity: int = 50_000
    batch_size: int = 32
    hidden: tuple[int, ...] = (64, 64)
    n_steps: int = 5
    entropy_coef: float = 0.01

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0 <= self.gamma < 1:
            raise ValueError("gamma must lie in [0, 1)")
        if not 0 <= self.epsilon_min <= self.epsilon <= 1:
            raise ValueError("need 0 <= epsilon_min <= epsilon <= 1")

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


# per-agent defaults; anything not listed falls back to the dataclass defaults
AGENT_DEFAULTS = {
    "qt": dict(alpha=0.1, gamma=0.99, epsilon=0.05, epsilon_min=0.005),
    "dqn": dict(alpha=0.001, gamma=0.99, epsilon=0.05, epsilon_min=0.01, target_update=100),
    "a2c": dict(alpha=0.001, gamma=0.99, epsilon=0.0, epsilon_min=0.0),
    "sarsa": dict(alpha=0.001, gamma=0.95, lam=0.95, epsilon=0.01, epsilon_min=0.01),
}


def default_config(key: str, **overrides) -> AgentConfig:
    return replace(AgentConfig(**AGENT_DEFAULTS.get(key, {})), **overrides)


class LearningAgent(Controller):
    """Turns per-step controller calls into decisions at points where a switch is possible.

    Rewards between decisions are summed with per-step discounting and the
    bootstrap uses gamma to the number of elapsed steps. When only one phase
    is allowed the agent holds it without learning.
    """

    learns = True

    def __init__(self, config: AgentConfig, rng: np.random.Generator, total_steps: int = 1):
        self.config = config
        self.rng = rng
        self.total_steps = max(1, int(total_steps))
        self.training = True
        self._prev = None
        self._acc = 0.0
        self._k = 0

    def reset(self, world) -> None:
        self._prev = None
        self._acc = 0.0
        self._k = 0

    @property
    def elapsed_discount(self) -> float:
        """gamma ** (control steps since the last decision)."""
        return self.config.gamma ** self._k

    def epsilon(self, step: int) -> float:
        c = self.config
        if not self.training:
            return 0.0
        return linear_epsilon(c.epsilon, c.epsilon_min, step / self.total_steps, c.decay_horizon)

    def act(self, world, obs, reward, allowed):
        if self._prev is not None:
            self._acc += self.config.gamma ** self._k * reward
            self._k += 1
        allowed = np.asarray(allowed, dtype=bool)
        if allowed.sum() == 1:
            return int(np.flatnonzero(allowed)[0])
        state = self.encode(obs)
        action = self.decide(state, self._acc, allowed, world.step)
        self._acc = 0.0
        self._k = 0
        return action

    # subclasses
    def encode(self, obs):
        return obs.vector()

    def decide(self, state, reward: float, allowed, step: int) -> int:
        raise NotImplementedError

    def state_dict(self) -> dict[str, np.ndarray]:
        raise NotImplementedError

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        raise NotImplementedError
