"""Full-batch Adam with best-iterate selection for the inner argmin."""

from dataclasses import dataclass

import numpy as np

from .model import FourierModel


class DivergenceError(FloatingPointError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    steps: int = 500
    learning_rate: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    eps_hat: float = 1e-8
    grad_clip: float | None = None

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ValueError("Adam betas must lie in [0, 1)")


@dataclass
class AdamState:
    """First and second moment estimates plus the step counter.

    Passing the same state to consecutive :func:`adam` calls continues the
    moment estimates instead of restarting them, which keeps the first
    steps of a warm-started solve small.
    """

    m: np.ndarray | None = None
    v: np.ndarray | None = None
    t: int = 0


def adam(fun, x0, cfg, state=None):
    """Minimise ``fun(x) -> (loss, grad)`` from ``x0``.

    Returns ``(x_best, loss_best, trace)`` where ``trace`` holds the loss
    at every visited iterate, the starting point included. The returned
    point is the best one seen, so it is never worse than ``x0``.
    ``state`` (an :class:`AdamState`) is updated in place when given.
    """
    x = np.array(x0, dtype=float)
    state = AdamState() if state is None else state
    if state.m is None or state.m.shape != x.shape:
        state.m, state.v, state.t = np.zeros_like(x), np.zeros_like(x), 0
    m, v = state.m, state.v
    trace = []
    best_x, best_loss = x.copy(), np.inf

    for step in range(cfg.steps + 1):
        try:
            loss, g = fun(x)
        except FloatingPointError as exc:
            raise DivergenceError("divergence; reduce learning_rate") from exc
        if not np.isfinite(loss) or not np.all(np.isfinite(g)):
            raise DivergenceError("divergence; reduce learning_rate")
        trace.append(loss)
        if loss < best_loss:
            best_loss, best_x = loss, x.copy()
        if step == cfg.steps:
            break
        if cfg.grad_clip is not None:
            norm = np.linalg.norm(g)
            if norm > cfg.grad_clip:
                g = g * (cfg.grad_clip / norm)
        # overflow here shows up as a non-finite loss on the next step
        state.t += 1
        t = state.t
        with np.errstate(over="ignore", invalid="ignore"):
            m *= cfg.beta1
            m += (1 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1 - cfg.beta2) * (g * g)
            m_hat = m / (1 - cfg.beta1**t)
            v_hat = v / (1 - cfg.beta2**t)
            x = x - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps_hat)

    return best_x, float(best_loss), np.asarray(trace)


def minimize(model, loss_and_grad, cfg, state=None):
    """Run :func:`adam` on a :class:`FourierModel`.

    ``loss_and_grad(model) -> (loss, ParamGradient)``. Returns the best
    model and the per-step loss trace.
    """
    n, m = model.n, model.m_neurons

    def fun(flat):
        loss, grad = loss_and_grad(FourierModel.from_flat(flat, n, m))
        return loss, grad.to_flat()

    best, _, trace = adam(fun, model.to_flat(), cfg, state)
    return FourierModel.from_flat(best, n, m), trace
