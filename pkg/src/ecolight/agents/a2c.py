"""Synchronous advantage actor-critic with n-step bootstrapped returns."""

import numpy as np

from ..sim.network import N_PHASES
from .base import LearningAgent
from .nn import MLP, Adam


def masked_softmax(logits, mask=None):
    z = np.asarray(logits, dtype=float)
    if mask is not None:
        z = np.where(mask, z, -np.inf)
    z = z - z.max(axis=-1, keepdims=True)
    p = np.exp(z)
    return p / p.sum(axis=-1, keepdims=True)


def advantage(r: float, v_next: float, v: float, gamma: float) -> float:
    return r + gamma * v_next - v


def nstep_returns(rewards, bootstrap: float, gamma, dones=None) -> np.ndarray:
    """Discounted returns backed up from ``bootstrap``; ``gamma`` may vary per step."""
    out = np.zeros(len(rewards))
    gammas = np.broadcast_to(np.asarray(gamma, dtype=float), (len(rewards),))
    g = bootstrap
    for t in reversed(range(len(rewards))):
        if dones is not None and dones[t]:
            g = 0.0
        g = rewards[t] + gammas[t] * g
        out[t] = g
    return out


def a2c_gradients(actor: MLP, critic: MLP, states, actions, masks, returns, entropy_coef: float):
    """Gradients of the actor loss ``-mean(log pi(a|s) A) - c * mean(H)`` and critic loss ``mean(A^2)``.

    The advantage is held fixed inside the actor term.
    """
    states = np.asarray(states, dtype=float)
    n = len(states)
    values = critic.forward(states)[:, 0]
    adv = np.asarray(returns) - values
    critic_grads = critic.backward((-2.0 * adv / n)[:, None])

    logits = actor.forward(states)
    pi = masked_softmax(logits, masks)
    with np.errstate(divide="ignore"):
        logp = np.where(pi > 0, np.log(np.where(pi > 0, pi, 1.0)), 0.0)
    entropy = -(pi * logp).sum(axis=1)
    onehot = np.zeros_like(pi)
    onehot[np.arange(n), actions] = 1.0
    g = (pi - onehot) * adv[:, None] / n
    g += entropy_coef * pi * (logp + entropy[:, None]) / n
    actor_grads = actor.backward(g)
    stats = {
        "critic_loss": float(np.mean(adv ** 2)),
        "actor_loss": float(-np.mean(logp[np.arange(n), actions] * adv)),
        "entropy": float(entropy.mean()),
    }
    return actor_grads, critic_grads, stats


def a2c_update(actor, critic, actor_opt, critic_opt, rollout, bootstrap_state, gamma: float,
               entropy_coef: float = 0.01):
    """Update both networks from ``rollout`` = list of (state, action, reward, mask[, discount]).

    A per-transition discount, when present, replaces ``gamma`` for that step.
    """
    states = np.array([t[0] for t in rollout])
    actions = np.array([t[1] for t in rollout])
    rewards = np.array([t[2] for t in rollout])
    masks = np.array([t[3] for t in rollout], dtype=bool)
    discounts = np.array([t[4] if len(t) > 4 else gamma for t in rollout])
    v_boot = 0.0 if bootstrap_state is None else float(critic.forward(bootstrap_state)[0])
    returns = nstep_returns(rewards, v_boot, discounts)
    ga, gc, stats = a2c_gradients(actor, critic, states, actions, masks, returns, entropy_coef)
    actor_opt.step(actor.params, ga)
    critic_opt.step(critic.params, gc)
    return stats


class A2CAgent(LearningAgent):
    key = "a2c"

    def __init__(self, config, rng, total_steps=1, obs_dim=28, n_actions=N_PHASES):
        super().__init__(config, rng, total_steps)
        self.actor = MLP([obs_dim, *config.hidden, n_actions], rng)
        self.actor.params[-2] *= 0.01  # near-uniform initial policy
        self.critic = MLP([obs_dim, *config.hidden, 1], rng)
        self.actor_opt = Adam(self.actor.params, lr=config.alpha)
        self.critic_opt = Adam(self.critic.params, lr=config.alpha)
        self.rollout = []
        self.n_actions = n_actions

    def reset(self, world):
        super().reset(world)
        self.rollout = []

    def decide(self, state, reward, allowed, step):
        c = self.config
        if self._prev is not None and self.training:
            s, a, m = self._prev
            self.rollout.append((s, a, reward, m, self.elapsed_discount))
            if len(self.rollout) >= c.n_steps:
                a2c_update(self.actor, self.critic, self.actor_opt, self.critic_opt, self.rollout,
                           state, c.gamma, c.entropy_coef)
                self.rollout = []
        pi = masked_softmax(self.actor.forward(state), allowed)
        if self.training:
            action = int(self.rng.choice(self.n_actions, p=pi))
        else:
            action = int(np.argmax(pi))
        self._prev = (state, action, np.array(allowed, dtype=bool))
        return action

    def state_dict(self):
        out = {f"actor.{i}": p.copy() for i, p in enumerate(self.actor.params)}
        out.update({f"critic.{i}": p.copy() for i, p in enumerate(self.critic.params)})
        return out

    def load_state_dict(self, state):
        self.actor.load([state[f"actor.{i}"] for i in range(len(self.actor.params))])
        self.critic.load([state[f"critic.{i}"] for i in range(len(self.critic.params))])
