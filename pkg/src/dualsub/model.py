"""Complex-valued one-hidden-layer sigmoid network.

The candidate function is

    phi(x) = sum_{s<M} w_s sig(a_s.x + b_s) + i * sum_{s>=M} w_s sig(a_s.x + b_s)

with two disjoint neuron banks of width M, one for each of the real and
imaginary parts. Everything here is vectorised over a batch of points of
shape ``(K, n)``; a single point of shape ``(n,)`` is also accepted.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit


@dataclass
class FourierModel:
    """Parameters of the network.

    Attributes
    ----------
    w : ndarray, shape (2M,)
        Output weights. The first M feed the real part, the last M the
        imaginary part.
    a : ndarray, shape (2M, n)
        Input directions, one row per neuron.
    b : ndarray, shape (2M,)
        Biases.
    """

    w: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        two_m = self.w.shape[0]
        if two_m % 2 or self.a.shape[0] != two_m or self.b.shape != (two_m,):
            raise ValueError(
                f"inconsistent shapes w{self.w.shape} a{self.a.shape} b{self.b.shape}"
            )

    @property
    def n(self):
        return self.a.shape[1]

    @property
    def m_neurons(self):
        return self.w.shape[0] // 2

    @classmethod
    def init(cls, n, m_neurons, seed=0, zero_weights=False):
        """Seeded random initialisation.

        ``a ~ N(0, 1/n)`` per coordinate, ``b ~ U(-1, 1)``, ``w ~ N(0, 1/M)``.
        With ``zero_weights`` the output weights are zero, so the model is
        the zero function while keeping random hidden features.
        """
        rng = np.random.default_rng(seed)
        two_m = 2 * m_neurons
        a = rng.normal(0.0, 1.0 / np.sqrt(n), size=(two_m, n))
        b = rng.uniform(-1.0, 1.0, size=two_m)
        w = rng.normal(0.0, 1.0 / np.sqrt(m_neurons), size=two_m)
        if zero_weights:
            w = np.zeros(two_m)
        return cls(w, a, b)

    @property
    def size(self):
        return self.w.size + self.a.size + self.b.size

    def to_flat(self):
        """Flat parameter vector in the order w, a (row-major), b."""
        return np.concatenate([self.w, self.a.ravel(), self.b])

    @classmethod
    def from_flat(cls, flat, n, m_neurons):
        flat = np.asarray(flat, dtype=float)
        two_m = 2 * m_neurons
        if flat.size != two_m * (n + 2):
            raise ValueError(f"flat vector of size {flat.size} does not fit n={n}, M={m_neurons}")
        w = flat[:two_m]
        a = flat[two_m : two_m + two_m * n].reshape(two_m, n)
        b = flat[two_m + two_m * n :]
        return cls(w.copy(), a.copy(), b.copy())

    def copy(self):
        return FourierModel(self.w.copy(), self.a.copy(), self.b.copy())

    def save(self, path):
        np.savetxt(path, self.to_flat(), header=f"n={self.n} M={self.m_neurons}")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().lstrip("# ").split()
        meta = dict(item.split("=") for item in header)
        return cls.from_flat(np.loadtxt(path), int(meta["n"]), int(meta["M"]))


ParamGradient = FourierModel


def _points(model, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != model.n:
        raise ValueError(f"dimension mismatch: model n={model.n}, points have {x.shape[1]}")
    return x, single


@dataclass(frozen=True)
class Activations:
    """Hidden-layer quantities at a batch of K points.

    ``s = sig(z)`` and ``ds = sig'(z)`` are stored neuron-major with shape
    (2M, K) so that each bank is a contiguous block of rows.
    """

    x: np.ndarray
    s: np.ndarray
    ds: np.ndarray


def activations(model, x):
    x, _ = _points(model, x)
    z = model.a @ x.T
    z += model.b[:, None]
    s = expit(z)
    ds = np.multiply(s, s, out=z)
    np.subtract(s, ds, out=ds)
    return Activations(x, s, ds)


def _as_activations(model, x):
    return x if isinstance(x, Activations) else activations(model, x)


def value_from(model, acts):
    m = model.m_neurons
    return model.w[:m] @ acts.s[:m] + 1j * (model.w[m:] @ acts.s[m:])


def grad_from(model, acts):
    m = model.m_neurons
    coef = acts.ds * model.w[:, None]
    return coef[:m].T @ model.a[:m] + 1j * (coef[m:].T @ model.a[m:])


def evaluate(model, x):
    """Network value at one point (complex scalar) or a batch (complex array)."""
    _, single = _points(model, x)
    out = value_from(model, activations(model, x))
    return out[0] if single else out


def grad_x(model, x):
    """Input gradient, complex array of shape (n,) or (K, n)."""
    _, single = _points(model, x)
    g = grad_from(model, activations(model, x))
    return g[0] if single else g


def loss_param_grad(model, value_nodes=None, value_cot=None, grad_nodes=None, grad_cot=None):
    """Backpropagate a scalar loss through :func:`evaluate` and :func:`grad_x`.

    The loss is described by its sensitivities at two node sets:

    * ``value_cot[k] = dL/dRe phi(x_k) + i dL/dIm phi(x_k)`` at ``value_nodes``;
    * ``grad_cot[k] = dL/dRe g(x_k) + i dL/dIm g(x_k)`` at ``grad_nodes``,
      where ``g = grad_x(model, .)`` and the cotangent has shape (K, n).

    Node arguments may be raw points or precomputed :class:`Activations`.
    Returns a :class:`ParamGradient` with the exact parameter gradient. The
    gradient term needs the mixed derivative d^2 phi / dx d(theta), which
    for a sigmoid layer is closed-form through sig'' = sig'(1 - 2 sig).
    """
    m = model.m_neurons
    w, a = model.w, model.a
    gw = np.zeros(2 * m)
    ga = np.zeros_like(a)
    gb = np.zeros(2 * m)
    banks = (slice(0, m), slice(m, 2 * m))

    if value_nodes is not None:
        acts = _as_activations(model, value_nodes)
        cot = np.asarray(value_cot).reshape(-1)
        for bank, r in zip(banks, (cot.real, cot.imag)):
            ds = acts.ds[bank]
            gw[bank] += acts.s[bank] @ r
            gb[bank] += w[bank] * (ds @ r)
            ga[bank] += w[bank, None] * (ds @ (r[:, None] * acts.x))

    if grad_nodes is not None:
        acts = _as_activations(model, grad_nodes)
        cot = np.atleast_2d(np.asarray(grad_cot))
        for bank, c in zip(banks, (cot.real, cot.imag)):
            s, ds = acts.s[bank], acts.ds[bank]
            # projection of each node's cotangent on each neuron's direction
            proj = a[bank] @ c.T
            v = ds * proj
            gw[bank] += v.sum(1)
            # sig'' * proj = sig' * proj * (1 - 2 sig)
            d2 = s * v
            d2 *= -2.0
            d2 += v
            gb[bank] += w[bank] * d2.sum(1)
            ga[bank] += w[bank, None] * (ds @ c + d2 @ acts.x)

    if not (np.all(np.isfinite(gw)) and np.all(np.isfinite(ga)) and np.all(np.isfinite(gb))):
        raise FloatingPointError("divergent loss")
    return ParamGradient(gw, ga, gb)
