"""Inner-loop loss of the dual alternating scheme.

The loss at outer iteration t is

    (1/L) sum_s |f(nu_s) - phi(nu_s)|^2
        + lam * (1/K) sum_s |grad phi(xi_s) - P_{t-1} grad phi_{t-1}(xi_s)|^2

where nu and xi are frozen Gaussian node sets. Constant prefactors of
the data term and the kernel are folded into ``lam``.
"""

from dataclasses import dataclass

import numpy as np

from . import model as fm
from .spectral import Projector, symmetrize


class EmpiricalCharFn:
    """Characteristic function of a point cloud, ``(1/N) sum_i exp(-i x_i.x)``."""

    def __init__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[0] == 0 or points.size == 0:
            raise ValueError("empty point list")
        if not np.all(np.isfinite(points)):
            raise ValueError("non-finite points")
        self.points = points

    @property
    def n(self):
        return self.points.shape[1]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        phase = np.atleast_2d(x) @ self.points.T
        out = np.exp(-1j * phase).mean(axis=1)
        return out[0] if x.ndim == 1 else out


def empirical_char_fn(points):
    return EmpiricalCharFn(points)


def ackley(x, y):
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(0.5 * (x**2 + y**2)))
        - np.exp(0.5 * (np.cos(2 * np.pi * x) + np.cos(2 * np.pi * y)))
        + np.e
        + 20.0
    )


class RegressionFn:
    """Ackley function of the first two coordinates plus ``C`` on the closed unit ball."""

    def __init__(self, C):
        if not np.isfinite(C):
            raise ValueError("C must be finite")
        self.C = float(C)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        ball = np.sum(pts**2, axis=1) <= 1.0
        out = ackley(pts[:, 0], pts[:, 1]) + self.C * ball
        out = out.astype(complex)
        return out[0] if x.ndim == 1 else out


def sdr_target(C):
    return RegressionFn(C)


@dataclass(frozen=True)
class PenaltyState:
    """Projector of the previous iteration and the previous model's input
    gradients at the xi-nodes, both constant during one inner solve."""

    projector: Projector
    frozen_grads: np.ndarray

    @classmethod
    def initial(cls, n, K):
        return cls(Projector.zero(n), np.zeros((K, n), dtype=complex))

    @classmethod
    def from_model(cls, model, projector, xi_nodes):
        return cls(projector, fm.grad_x(model, xi_nodes.nodes))

    def anchor(self):
        """``P h_s`` for every node, shape (K, n)."""
        return self.frozen_grads @ self.projector.matrix


def _check_dims(model, nodes):
    if nodes.n != model.n:
        raise ValueError(f"dimension mismatch: model n={model.n}, nodes n={nodes.n}")


def data_term(model, target, nu_nodes):
    _check_dims(model, nu_nodes)
    r = target(nu_nodes.nodes) - fm.evaluate(model, nu_nodes.nodes)
    return float(np.mean(np.abs(r) ** 2))


def penalty_term(model, state, xi_nodes):
    _check_dims(model, xi_nodes)
    if state.frozen_grads.shape[0] != xi_nodes.count:
        raise ValueError(
            f"node-count mismatch: {state.frozen_grads.shape[0]} frozen gradients, "
            f"{xi_nodes.count} nodes"
        )
    diff = fm.grad_x(model, xi_nodes.nodes) - state.anchor()
    return float(np.sum(np.abs(diff) ** 2) / xi_nodes.count)


def gram_from_grads(g):
    g = np.atleast_2d(g)
    b = (g.real.T @ g.real + g.imag.T @ g.imag) / g.shape[0]
    return symmetrize(b)


def gram_matrix(model, xi_nodes):
    """``B_ij = (1/K) sum_s Re(conj(g_si) g_sj)``, symmetric PSD."""
    _check_dims(model, xi_nodes)
    return gram_from_grads(fm.grad_x(model, xi_nodes.nodes))


class InnerProblem:
    """Cached form of the inner loss for repeated evaluation by the optimizer.

    Target values at the nu-nodes and the projected frozen gradients are
    computed once.
    """

    def __init__(self, target, nu_nodes, state, xi_nodes, lam):
        if lam < 0:
            raise ValueError(f"lambda must be >= 0, got {lam}")
        if state.frozen_grads.shape[0] != xi_nodes.count:
            raise ValueError("node-count mismatch between frozen gradients and xi-nodes")
        self.nu = nu_nodes.nodes
        self.xi = xi_nodes.nodes
        self.f_nu = np.asarray(target(self.nu), dtype=complex)
        self.anchor = state.anchor()
        self.lam = float(lam)

    def loss(self, model):
        r = fm.evaluate(model, self.nu) - self.f_nu
        d = np.mean(np.abs(r) ** 2)
        if self.lam == 0.0:
            return float(d)
        e = fm.grad_x(model, self.xi) - self.anchor
        return float(d + self.lam * np.sum(np.abs(e) ** 2) / len(self.xi))

    def loss_and_grad(self, model):
        nu_acts = fm.activations(model, self.nu)
        r = fm.value_from(model, nu_acts) - self.f_nu
        L = len(self.nu)
        loss = np.mean(np.abs(r) ** 2)
        kwargs = {"value_nodes": nu_acts, "value_cot": (2.0 / L) * r}
        if self.lam != 0.0:
            K = len(self.xi)
            xi_acts = fm.activations(model, self.xi)
            e = fm.grad_from(model, xi_acts) - self.anchor
            loss += self.lam * np.sum(np.abs(e) ** 2) / K
            kwargs.update(grad_nodes=xi_acts, grad_cot=(2.0 * self.lam / K) * e)
        if not np.isfinite(loss):
            raise FloatingPointError("divergent loss")
        return float(loss), fm.loss_param_grad(model, **kwargs)


def total_loss(model, target, nu_nodes, state, xi_nodes, lam):
    """Data term plus ``lam`` times the penalty, with its parameter gradient."""
    _check_dims(model, nu_nodes)
    _check_dims(model, xi_nodes)
    return InnerProblem(target, nu_nodes, state, xi_nodes, lam).loss_and_grad(model)
