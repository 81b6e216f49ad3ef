"""DQN: ELU MLP, uniform replay, periodically copied target network, Adam."""

import numpy as np

from ..sim.network import N_PHASES
from .base import LearningAgent
from .nn import MLP, Adam
from .policy import epsilon_greedy
from .replay import ReplayBuffer


def dqn_targets(target_net: MLP, r, s2, done, gamma, mask2=None):
    """Bootstrapped targets; ``gamma`` may be a scalar or one factor per transition."""
    q2 = target_net.forward(s2)
    if mask2 is not None:
        q2 = np.where(mask2, q2, -np.inf)
    best = q2.max(axis=1)
    return r + gamma * np.where(done, 0.0, best)


def dqn_update(net: MLP, target_net: MLP, buffer: ReplayBuffer, optimizer: Adam,
               batch_size: int, rng: np.random.Generator) -> float | None:
    """One Adam step on the mean squared TD error; None when the buffer is too small.

    Each transition bootstraps with its own stored discount.
    """
    if len(buffer) < batch_size:
        return None
    s, a, r, s2, done, mask2, discount = buffer.sample(batch_size, rng)
    y = dqn_targets(target_net, r, s2, done, discount, mask2)
    q = net.forward(s)
    rows = np.arange(batch_size)
    resid = q[rows, a] - y
    grad_q = np.zeros_like(q)
    grad_q[rows, a] = 2.0 * resid / batch_size
    grads = net.backward(grad_q)
    optimizer.step(net.params, grads)
    return float(np.mean(resid ** 2))


class DQNAgent(LearningAgent):
    key = "dqn"

    def __init__(self, config, rng, total_steps=1, obs_dim=28, n_actions=N_PHASES):
        super().__init__(config, rng, total_steps)
        self.net = MLP([obs_dim, *config.hidden, n_actions], rng)
        self.target = self.net.copy()
        self.opt = Adam(self.net.params, lr=config.alpha)
        self.buffer = ReplayBuffer(config.buffer_capacity, obs_dim, n_actions)
        self.updates = 0

    def learn(self) -> float | None:
        c = self.config
        loss = dqn_update(self.net, self.target, self.buffer, self.opt, c.batch_size, self.rng)
        if loss is not None:
            self.updates += 1
            if self.updates % c.target_update == 0:
                self.target.load(self.net.params)
        return loss

    def decide(self, state, reward, allowed, step):
        if self._prev is not None and self.training:
            s, a = self._prev
            self.buffer.add(s, a, reward, state, False, allowed, self.elapsed_discount)
            self.learn()
        q = self.net.forward(state)
        action = epsilon_greedy(q, self.epsilon(step), self.rng, allowed)
        self._prev = (state, action)
        return action

    def state_dict(self):
        out = {f"net.{i}": p.copy() for i, p in enumerate(self.net.params)}
        out.update({f"target.{i}": p.copy() for i, p in enumerate(self.target.params)})
        out["updates"] = np.array([self.updates])
        return out

    def load_state_dict(self, state):
        self.net.load([state[f"net.{i}"] for i in range(len(self.net.params))])
        self.target.load([state[f"target.{i}"] for i in range(len(self.target.params))])
        self.updates = int(state["updates"][0])
