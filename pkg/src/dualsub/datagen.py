"""Synthetic point clouds with known subspaces, and CSV I/O for point sets."""

from dataclasses import dataclass

import numpy as np

from .spectral import Projector

DIAGONAL = np.array([1.0, 1.0]) / np.sqrt(2.0)

# mean Frobenius distance between a Haar-random rank-2 projector in R^6 and
# a fixed one, over random_projector seeds 0..999; E||P - Q||^2 = 8/3
RANDOM_BASELINE_ACC = 1.6216


@dataclass(frozen=True)
class DataSet:
    points: np.ndarray
    true_projector: Projector
    description: str
    labels: np.ndarray | None = None


def gen_near_hyperplane(n=6, N=100, eps=0.01, seed=0, span=2):
    """Points near the span of the first ``span`` coordinate axes.

    ``x_1, .., x_span ~ N(0, 1)`` and the remaining coordinates are
    ``N(0, eps^2)``. The default is the (e_1, e_2) plane in R^6.
    """
    if not 1 <= span < n:
        raise ValueError(f"span must lie in [1, n), got {span}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    rng = np.random.default_rng(seed)
    scale = np.full(n, eps)
    scale[:span] = 1.0
    points = rng.standard_normal((N, n)) * scale
    return DataSet(points, Projector.coordinate(n, range(span)), f"near-hyperplane span {span}")


def gen_cross_mixture(n=6, N=100, eps=0.01, seed=0):
    """Three thin Gaussian sticks in the (x_1, x_2) plane.

    With weights 4/9, 4/9, 1/9 the sticks lie along e_1, e_2 and the
    diagonal (e_1 + e_2)/sqrt(2). Each stick has unit variance along its
    axis and variance eps^2 across it; for the diagonal stick that means
    ``Var(x_1 + x_2) = 2`` and ``Var(x_1 - x_2) = 2 eps^2``. The remaining
    coordinates are ``N(0, eps^2)``.

    ``labels`` records the component (0, 1, 2) of every point. The stored
    truth is the e_1 axis; with k=1 either e_1 or e_2 is a valid answer.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not eps > 0:
        raise ValueError("eps must be positive")
    rng = np.random.default_rng(seed)
    labels = rng.choice(3, size=N, p=[4 / 9, 4 / 9, 1 / 9])
    along = rng.standard_normal(N)
    across = eps * rng.standard_normal(N)
    points = eps * rng.standard_normal((N, n))

    c0, c1, c2 = labels == 0, labels == 1, labels == 2
    points[c0, 0], points[c0, 1] = along[c0], across[c0]
    points[c1, 0], points[c1, 1] = across[c1], along[c1]
    # rotate (along, across) by 45 degrees onto the diagonal
    u, v = along[c2], across[c2]
    points[c2, 0] = (u - v) / np.sqrt(2.0)
    points[c2, 1] = (u + v) / np.sqrt(2.0)

    return DataSet(points, Projector.coordinate(n, [0]), "cross-mixture axis=e1", labels)


def cross_mixture_density(x1, x2, eps):
    """Density of the first two coordinates of :func:`gen_cross_mixture`."""
    norm = 1.0 / (2 * np.pi * eps)
    return norm * (
        4 / 9 * np.exp(-x1**2 / 2 - x2**2 / (2 * eps**2))
        + 4 / 9 * np.exp(-x2**2 / 2 - x1**2 / (2 * eps**2))
        + 1 / 9 * np.exp(-((x1 + x2) ** 2) / 4 - (x1 - x2) ** 2 / (4 * eps**2))
    )


def random_projector(n, k, seed=0):
    """Projector onto a Haar-random k-dimensional subspace."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    return Projector.from_vectors(q[:, :k]) if k else Projector.zero(n)


def write_points(path, points):
    points = np.atleast_2d(points)
    header = ",".join(f"x{i + 1}" for i in range(points.shape[1]))
    np.savetxt(path, points, delimiter=",", header=header, comments="", fmt="%.17g")


def read_points(path):
    """Read a CSV of points; a non-numeric first line is taken as a header."""
    with open(path) as fh:
        first = fh.readline()
    try:
        [float(v) for v in first.split(",")]
        skip = 0
    except ValueError:
        skip = 1
    return np.atleast_2d(np.loadtxt(path, delimiter=",", skiprows=skip))
