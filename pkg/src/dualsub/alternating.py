"""Outer loop of the alternating scheme in the dual space.

Starting from ``P_0 = 0`` and the zero function, each outer iteration

1. fits the network to the target while pulling its input gradient field
   towards ``P_{t-1}`` applied to the previous gradient field,
2. estimates the gradient Gram matrix ``M_t`` on the xi-nodes,
3. sets ``P_t`` to the projector onto the top-k eigenvectors of ``M_t``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .model import FourierModel, grad_x
from .objective import InnerProblem, PenaltyState, gram_from_grads
from .optimizer import AdamState, DivergenceError, OptimizerConfig, minimize
from .spectral import Projector, eigh, frobenius_distance, ky_fan_antinorm, top_k_projector


@dataclass
class IterationRecord:
    t: int
    gram: np.ndarray
    eigenvalues: np.ndarray
    projector: Projector
    inner_final_loss: float
    r_value: float
    trace_m: float
    inner_trace: np.ndarray = field(repr=False, default=None)


@dataclass
class AlternatingRun:
    iterations: list
    final_model: FourierModel
    final_projector: Projector
    top_vectors: np.ndarray

    def accuracy_trace(self, p_true):
        return [accuracy(rec.projector, p_true) for rec in self.iterations]


def accuracy(p, p_true):
    """Frobenius distance between two projectors of equal dimension and rank."""
    if p.n != p_true.n or p.k != p_true.k:
        raise ValueError(
            f"projector mismatch: (n={p.n}, k={p.k}) vs (n={p_true.n}, k={p_true.k})"
        )
    return frobenius_distance(p.matrix, p_true.matrix)


def _nodes(cfg, t=None):
    t = t if cfg.resample_nodes else None
    xi = quadrature.sample_xi(cfg.n, cfg.K, cfg.theta, cfg.seed_nodes, t=t)
    if cfg.task == "sdr":
        nu = quadrature.sample_nu_sdr(cfg.n, cfg.L, cfg.seed_nodes, t=t)
    else:
        nu = quadrature.sample_nu_dr(cfg.n, cfg.L, cfg.eta, cfg.seed_nodes, t=t)
    return xi, nu


def run_alternating(target, cfg, callback=None):
    """Run ``cfg.T`` outer iterations on ``target`` with ``lam = cfg.lam[0]``.

    ``callback(record)`` is invoked after each iteration, e.g. to stream
    diagnostics to disk. A diverging inner solve raises
    :class:`DivergenceError` tagged with the outer iteration index.
    """
    n, k, lam = cfg.n, cfg.k, cfg.lam[0]
    opt = OptimizerConfig(steps=cfg.steps, learning_rate=cfg.learning_rate)
    opt_first = OptimizerConfig(steps=cfg.first_steps, learning_rate=cfg.learning_rate)
    xi, nu = _nodes(cfg, t=1)

    # phi_0 = 0 enters only through its (zero) gradient field; t=1 starts
    # from a fresh random network and later iterations warm-start
    model = FourierModel.init(n, cfg.M, seed=cfg.seed_model)
    state = PenaltyState.initial(n, cfg.K)
    # moment estimates carry over between outer iterations, like the weights
    adam_state = AdamState()

    records = []
    for t in range(1, cfg.T + 1):
        if cfg.resample_nodes and t > 1:
            xi, nu = _nodes(cfg, t)
            state = PenaltyState.from_model(model, state.projector, xi)
        problem = InnerProblem(target, nu, state, xi, lam)
        try:
            model, trace = minimize(model, problem.loss_and_grad,
                                    opt_first if t == 1 else opt, adam_state)
        except DivergenceError as exc:
            raise DivergenceError(f"outer iteration {t}: {exc}") from exc

        grads = grad_x(model, xi.nodes)
        gram = gram_from_grads(grads)
        pairs = eigh(gram)
        projector = top_k_projector(pairs, k)
        rec = IterationRecord(
            t=t,
            gram=gram,
            eigenvalues=pairs.values,
            projector=projector,
            inner_final_loss=float(trace.min()),
            r_value=ky_fan_antinorm(gram, k),
            trace_m=float(np.trace(gram)),
            inner_trace=trace,
        )
        records.append(rec)
        if callback is not None:
            callback(rec)
        state = PenaltyState(projector, grads)

    return AlternatingRun(records, model, projector, pairs.vectors[:, :k].copy())
