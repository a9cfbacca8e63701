"""Quick built-in oracle checks, run by ``dualsub selftest``."""

import numpy as np

from . import model as fm
from .objective import InnerProblem, PenaltyState, empirical_char_fn, gram_matrix
from .quadrature import NodeSet, sample_nu_dr, sample_xi
from .spectral import Projector, eckart_young_oracle, eigh, ky_fan_antinorm


def _check_grad_x(rng):
    worst = 0.0
    for _ in range(20):
        n, m = rng.integers(2, 6), rng.integers(1, 5)
        model = fm.FourierModel.init(n, m, seed=int(rng.integers(1 << 30)))
        x = rng.normal(size=n)
        g = fm.grad_x(model, x)
        h = 1e-5
        fd = np.array([(fm.evaluate(model, x + h * e) - fm.evaluate(model, x - h * e)) / (2 * h)
                       for e in np.eye(n)])
        worst = max(worst, np.linalg.norm(fd - g) / max(np.linalg.norm(g), 1e-12))
    return worst < 1e-5, f"max relative error {worst:.2e}"


def _check_param_grad(rng):
    n, m = 3, 2
    model = fm.FourierModel.init(n, m, seed=1)
    prev = fm.FourierModel.init(n, m, seed=2)
    xi = sample_xi(n, 6, 1.5, 3)
    nu = sample_nu_dr(n, 5, 0.8, 4)
    p = Projector.from_vectors(np.linalg.qr(rng.normal(size=(n, 2)))[0])
    problem = InnerProblem(empirical_char_fn(rng.normal(size=(4, n))), nu,
                           PenaltyState.from_model(prev, p, xi), xi, 0.5)
    _, grad = problem.loss_and_grad(model)
    flat, g = model.to_flat(), grad.to_flat()
    fd = np.empty_like(flat)
    for i in range(flat.size):
        e = np.zeros_like(flat)
        e[i] = 1e-6
        fd[i] = (problem.loss(fm.FourierModel.from_flat(flat + e, n, m))
                 - problem.loss(fm.FourierModel.from_flat(flat - e, n, m))) / 2e-6
    err = np.linalg.norm(fd - g) / np.linalg.norm(g)
    return err < 1e-4, f"relative error {err:.2e}"


def _check_ky_fan(rng):
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        b = rng.normal(size=(n, n))
        m = b @ b.T
        k = int(rng.integers(1, n + 1))
        diff = abs(ky_fan_antinorm(m, k) - eckart_young_oracle(m, k)) / (1 + np.trace(m))
        worst = max(worst, diff)
    return worst < 1e-8, f"max scaled difference {worst:.2e}"


def _check_rank(rng):
    n, k, m = 6, 2, 20
    model = fm.FourierModel.init(n, m, seed=5)
    basis = np.linalg.qr(rng.normal(size=(n, k)))[0]
    model.a = model.a @ basis @ basis.T
    b = gram_matrix(model, sample_xi(n, 200, 2.0, 6))
    vals = eigh(b).values
    ok = vals[-1] >= -1e-10 * np.trace(b) and np.all(vals[k:] <= 1e-10 * np.trace(b))
    return ok, f"eigenvalues beyond k: {vals[k:].max():.1e} (trace {np.trace(b):.2e})"


def _check_rotation(rng):
    n = 5
    model = fm.FourierModel.init(n, 10, seed=7)
    xi = sample_xi(n, 100, 1.0, 8)
    u = np.linalg.qr(rng.normal(size=(n, n)))[0]
    b = gram_matrix(model, xi)
    rotated = fm.FourierModel(model.w, model.a @ u, model.b)
    b_rot = gram_matrix(rotated, NodeSet(xi.nodes @ u, xi.sigma, xi.seed))
    err = np.abs(b_rot - u.T @ b @ u).max()
    return err < 1e-10, f"max deviation {err:.1e}"


CHECKS = {
    "input gradient vs finite differences": _check_grad_x,
    "parameter gradient vs finite differences": _check_param_grad,
    "Ky Fan anti-norm vs Eckart-Young": _check_ky_fan,
    "Gram rank with confined directions": _check_rank,
    "Gram rotation equivariance": _check_rotation,
}


def run_selftest(seed=0):
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, check in CHECKS.items():
        ok, detail = check(rng)
        all_ok &= bool(ok)
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
