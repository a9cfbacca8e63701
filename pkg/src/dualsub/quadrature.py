"""Seeded Gaussian Monte-Carlo node sets.

Expectations over the kernel density and the data-term weight are replaced
by empirical means over isotropic Gaussian samples. Normalising constants
never enter, only the sampling scale does.
"""

from dataclasses import dataclass

import numpy as np

XI, NU = 0, 1


@dataclass(frozen=True)
class NodeSet:
    nodes: np.ndarray
    sigma: float
    seed: int

    @property
    def count(self):
        return self.nodes.shape[0]

    @property
    def n(self):
        return self.nodes.shape[1]


def _gaussian(n, count, sigma, seed, stream, t=None):
    if count < 1:
        raise ValueError(f"node count must be >= 1, got {count}")
    if not sigma > 0:
        raise ValueError(f"scale must be positive, got {sigma}")
    key = [int(seed), stream] if t is None else [int(seed), stream, int(t)]
    rng = np.random.default_rng(key)
    nodes = sigma * rng.standard_normal((count, n))
    nodes.setflags(write=False)
    return NodeSet(nodes, float(sigma), seed)


def sample_xi(n, K, theta, seed, t=None):
    """K draws from N(0, theta^2 I_n), the kernel density."""
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    return _gaussian(n, K, theta, seed, XI, t)


def sample_nu_dr(n, L, eta, seed, t=None):
    """L draws from N(0, eta^-2 I_n).

    The smoothing kernel gamma(x) ~ exp(-|x|^2/eta^2) has
    |gamma_hat(xi)|^2 ~ exp(-eta^2 |xi|^2 / 2), a Gaussian of variance 1/eta^2.
    """
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    return _gaussian(n, L, 1.0 / eta, seed, NU, t)


def sample_nu_sdr(n, L, seed, t=None):
    """L draws from the standard normal input density."""
    return _gaussian(n, L, 1.0, seed, NU, t)
