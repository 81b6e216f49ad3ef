"""Action selection helpers."""

import numpy as np


def masked_argmax(values, allowed=None) -> int:
    """Index of the largest allowed value; ties go to the lowest index."""
    v = np.asarray(values, dtype=float)
    if allowed is not None:
        v = np.where(np.asarray(allowed, dtype=bool), v, -np.inf)
    return int(np.argmax(v))


def epsilon_greedy(qvalues, epsilon: float, rng: np.random.Generator, allowed=None) -> int:
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    if epsilon > 0.0 and rng.random() < epsilon:
        choices = np.arange(len(qvalues)) if allowed is None else np.flatnonzero(allowed)
        return int(rng.choice(choices))
    return masked_argmax(qvalues, allowed)


def linear_epsilon(start: float, end: float, progress: float, horizon: float = 0.5) -> float:
    """Linear decay from ``start`` to ``end`` over the first ``horizon`` of training."""
    if horizon <= 0:
        return end
    frac = max(0.0, progress / horizon)
    if frac >= 1.0:
        return end
    return start + (end - start) * frac
