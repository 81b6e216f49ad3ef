import numpy as np


class ReplayBuffer:
    """Fixed-capacity ring of (s, a, r, s', done, next-mask, discount) transitions.

    ``discount`` is the bootstrap factor for the transition (gamma to the number of
    steps it spanned); sampling is uniform.
    """

    def __init__(self, capacity: int, obs_dim: int, n_actions: int):
        self.capacity = int(capacity)
        self.s = np.zeros((capacity, obs_dim))
        self.a = np.zeros(capacity, dtype=np.int64)
        self.r = np.zeros(capacity)
        self.s2 = np.zeros((capacity, obs_dim))
        self.done = np.zeros(capacity, dtype=bool)
        self.mask2 = np.ones((capacity, n_actions), dtype=bool)
        self.discount = np.ones(capacity)
        self.size = 0
        self._next = 0

    def __len__(self):
        return self.size

    def add(self, s, a, r, s2, done=False, mask2=None, discount=1.0):
        i = self._next
        self.s[i] = s
        self.a[i] = a
        self.r[i] = r
        self.s2[i] = s2
        self.done[i] = done
        self.mask2[i] = True if mask2 is None else mask2
        self.discount[i] = discount
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        idx = rng.integers(0, self.size, size=batch_size)
        return (self.s[idx], self.a[idx], self.r[idx], self.s2[idx], self.done[idx], self.mask2[idx],
                self.discount[idx])
