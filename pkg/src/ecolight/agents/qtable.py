"""Tabular Q-learning over a coarse discretization of the observation."""

from collections import defaultdict

import numpy as np

from ..sim.network import LANES_PER_APPROACH, N_PHASES
from .base import LearningAgent
from .policy import epsilon_greedy

N_BINS = 4


def _bin(x: float) -> int:
    return min(N_BINS - 1, int(x * N_BINS))


def discretize_state(obs) -> tuple[int, ...]:
    """(phase index, 4 density bins, 4 queue bins), bins averaged per approach."""
    d = np.asarray(obs.density).reshape(-1, LANES_PER_APPROACH).mean(axis=1)
    q = np.asarray(obs.queue).reshape(-1, LANES_PER_APPROACH).mean(axis=1)
    return (obs.phase, *(_bin(x) for x in d), *(_bin(x) for x in q))


def qt_update(table, s, a, r, s2, alpha: float, gamma: float, done: bool = False) -> None:
    """One Q-learning backup in place; unseen keys start at zero."""
    target = r if done else r + gamma * float(np.max(table[s2]))
    table[s][a] += alpha * (target - table[s][a])


class QTableAgent(LearningAgent):
    key = "qt"

    def __init__(self, config, rng, total_steps=1, n_actions=N_PHASES):
        super().__init__(config, rng, total_steps)
        self.n_actions = n_actions
        self.table = defaultdict(lambda: np.zeros(self.n_actions))

    def encode(self, obs):
        return discretize_state(obs)

    def decide(self, state, reward, allowed, step):
        if self._prev is not None and self.training:
            s, a = self._prev
            qt_update(self.table, s, a, reward, state, self.config.alpha, self.elapsed_discount)
        action = epsilon_greedy(self.table[state], self.epsilon(step), self.rng, allowed)
        self._prev = (state, action)
        return action

    def state_dict(self):
        keys = sorted(self.table)
        return {
            "keys": np.array(keys, dtype=np.int64).reshape(len(keys), -1),
            "values": np.array([self.table[k] for k in keys]).reshape(len(keys), self.n_actions),
        }

    def load_state_dict(self, state):
        self.table.clear()
        for k, v in zip(state["keys"], state["values"]):
            self.table[tuple(int(x) for x in k)] = np.array(v, dtype=float)
