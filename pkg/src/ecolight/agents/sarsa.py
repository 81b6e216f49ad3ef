"""True online SARSA(lambda) with a decoupled Fourier cosine basis."""

import numpy as np

from ..sim.network import N_PHASES
from .base import LearningAgent
from .policy import epsilon_greedy


class FourierBasis:
    """cos(pi * c * x) for c = 0..order on each real input, with binary inputs passed through."""

    def __init__(self, n_reals: int, n_binary: int = 0, order: int = 7):
        self.n_reals = n_reals
        self.n_binary = n_binary
        self.order = order
        self._c = np.pi * np.arange(order + 1)

    @property
    def size(self) -> int:
        return self.n_reals * (self.order + 1) + self.n_binary

    def __call__(self, reals, binary=()):
        x = np.asarray(reals, dtype=float)
        feats = np.cos(np.outer(x, self._c)).ravel()
        if self.n_binary:
            return np.concatenate([feats, np.asarray(binary, dtype=float)])
        return feats


class TrueOnlineSarsa:
    """Linear action values ``w[a] @ phi`` trained with dutch traces."""

    def __init__(self, n_features: int, n_actions: int, alpha: float, gamma: float, lam: float):
        self.alpha, self.gamma, self.lam = alpha, gamma, lam
        self.w = np.zeros((n_actions, n_features))
        self.e = np.zeros_like(self.w)
        self.q_old = 0.0

    def q(self, phi) -> np.ndarray:
        return self.w @ phi

    def start_episode(self) -> None:
        self.e[:] = 0.0
        self.q_old = 0.0

    def update(self, phi, a: int, r: float, phi_next, a_next: int, done: bool = False,
               gamma: float | None = None) -> float:
        """One true online TD(lambda) step; returns the TD error.

        ``gamma`` overrides the discount for transitions spanning several steps.
        """
        gamma = self.gamma if gamma is None else gamma
        alpha, gl = self.alpha, gamma * self.lam
        q = float(self.w[a] @ phi)
        q_next = 0.0 if done else float(self.w[a_next] @ phi_next)
        delta = r + gamma * q_next - q
        e_phi = float(self.e[a] @ phi)
        self.e *= gl
        self.e[a] += (1.0 - alpha * gl * e_phi) * phi
        self.w += alpha * (delta + q - self.q_old) * self.e
        self.w[a] -= alpha * (q - self.q_old) * phi
        self.q_old = q_next
        if done:
            self.start_episode()
        return delta


def sarsa_update(learner: TrueOnlineSarsa, phi, a, r, phi_next, a_next, done=False) -> np.ndarray:
    learner.update(phi, a, r, phi_next, a_next, done)
    return learner.w


class SarsaAgent(LearningAgent):
    key = "sarsa"

    def __init__(self, config, rng, total_steps=1, n_reals=24, n_binary=N_PHASES + 1, n_actions=N_PHASES):
        super().__init__(config, rng, total_steps)
        self.basis = FourierBasis(n_reals, n_binary, config.fourier_order)
        self.learner = TrueOnlineSarsa(self.basis.size, n_actions, config.alpha, config.gamma, config.lam)

    def epsilon(self, step):
        # held constant
        return self.config.epsilon if self.training else 0.0

    def encode(self, obs):
        return self.basis(obs.reals(), obs.phase_bits)

    def reset(self, world):
        super().reset(world)
        self.learner.start_episode()

    def decide(self, state, reward, allowed, step):
        action = epsilon_greedy(self.learner.q(state), self.epsilon(step), self.rng, allowed)
        if self._prev is not None and self.training:
            phi, a = self._prev
            self.learner.update(phi, a, reward, state, action, gamma=self.elapsed_discount)
        self._prev = (state, action)
        return action

    def state_dict(self):
        return {"w": self.learner.w.copy(), "e": self.learner.e.copy(),
                "q_old": np.array([self.learner.q_old])}

    def load_state_dict(self, state):
        self.learner.w[...] = state["w"]
        self.learner.e[...] = state.get("e", 0.0)
        self.learner.q_old = float(np.asarray(state.get("q_old", [0.0]))[0])
