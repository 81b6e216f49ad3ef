"""Small numpy MLP with ELU hidden layers, exact backprop, and Adam."""

import numpy as np


def elu(x):
    return np.where(x >= 0, x, np.expm1(np.minimum(x, 0)))


def elu_grad(x):
    return np.where(x >= 0, 1.0, np.exp(np.minimum(x, 0)))


class MLP:
    """Affine layers with ELU between them and a linear output.

    ``sizes`` lists layer widths from input to output, so ``[28, 64, 64, 3]``
    has two hidden layers. Parameters are kept as a flat list
    ``[W0, b0, W1, b1, ...]`` with ``W`` shaped (in, out).
    """

    def __init__(self, sizes, rng=None, scale=None):
        self.sizes = list(sizes)
        rng = np.random.default_rng(0) if rng is None else rng
        self.params = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            s = np.sqrt(2.0 / fan_in) if scale is None else scale
            self.params.append(rng.normal(0.0, s, size=(fan_in, fan_out)))
            self.params.append(np.zeros(fan_out))
        self._cache = None

    @property
    def n_layers(self) -> int:
        return len(self.params) // 2

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        h = x[None, :] if single else x
        pre, acts = [], [h]
        for k in range(self.n_layers):
            z = h @ self.params[2 * k] + self.params[2 * k + 1]
            pre.append(z)
            h = elu(z) if k < self.n_layers - 1 else z
            acts.append(h)
        self._cache = (pre, acts, single)
        return h[0] if single else h

    __call__ = forward

    def backward(self, grad_out):
        """Parameter gradients of ``sum(grad_out * forward(x))`` for the cached input."""
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        pre, acts, single = self._cache
        g = np.asarray(grad_out, dtype=float)
        if single:
            g = g[None, :]
        grads = [None] * len(self.params)
        for k in reversed(range(self.n_layers)):
            if k < self.n_layers - 1:
                g = g * elu_grad(pre[k])
            grads[2 * k] = acts[k].T @ g
            grads[2 * k + 1] = g.sum(axis=0)
            if k > 0:
                g = g @ self.params[2 * k].T
        return grads

    def copy(self) -> "MLP":
        other = MLP.__new__(MLP)
        other.sizes = list(self.sizes)
        other.params = [p.copy() for p in self.params]
        other._cache = None
        return other

    def load(self, params) -> None:
        for dst, src in zip(self.params, params):
            dst[...] = src


class Adam:
    def __init__(self, params, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, params, grads) -> None:
        """In-place bias-corrected Adam update."""
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1 ** self.t
        c2 = 1.0 - b2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def adam_step(params, grads, state: Adam, lr: float | None = None):
    if lr is not None:
        state.lr = lr
    state.step(params, grads)
    return params
