"""Dense symmetric linear algebra used by the alternating scheme.

All routines work on small (n <= ~100) dense real symmetric matrices.
"""

from dataclasses import dataclass

import numpy as np

TIE_TOL = 1e-12
PSD_SLACK = 1e-10
PSD_REJECT = 1e-6


class NotPSDError(ValueError):
    pass


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues sorted descending; ``vectors[:, i]`` pairs with ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class Projector:
    n: int
    k: int
    matrix: np.ndarray

    @classmethod
    def zero(cls, n):
        return cls(n, 0, np.zeros((n, n)))

    @classmethod
    def from_vectors(cls, vectors):
        """Orthogonal projector onto the span of orthonormal columns."""
        v = np.atleast_2d(np.asarray(vectors, dtype=float))
        if v.shape[0] == 1 and v.shape[1] > 1:
            v = v.T
        return cls(v.shape[0], v.shape[1], symmetrize(v @ v.T))

    @classmethod
    def coordinate(cls, n, axes):
        """Projector onto the span of the standard basis vectors in ``axes``."""
        m = np.zeros((n, n))
        for i in axes:
            m[i, i] = 1.0
        return cls(n, len(axes), m)


def symmetrize(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return 0.5 * (m + m.T)


def _fix_signs(vectors):
    # first coordinate with |v_i| > TIE_TOL is made positive
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > TIE_TOL)
        if nz.size and col[nz[0]] < 0:
            out[:, j] = -col
    return out


def eigh(m):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Eigenvectors get a deterministic sign (first nonzero coordinate
    positive). Inside a cluster of eigenvalues equal to within 1e-12 the
    vectors are ordered lexicographically, descending.
    """
    m = symmetrize(m)
    if not np.all(np.isfinite(m)):
        raise ValueError("non-finite matrix")
    values, vectors = np.linalg.eigh(m)
    values = values[::-1].copy()
    vectors = _fix_signs(vectors[:, ::-1])

    n = len(values)
    order = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and values[i] - values[j] <= TIE_TOL:
            j += 1
        block = list(range(i, j))
        if len(block) > 1:
            block.sort(key=lambda c: tuple(-vectors[:, c]))
        order.extend(block)
        i = j
    order = np.asarray(order)
    return EigenPairs(values[order], vectors[:, order])


def top_k_projector(e, k):
    n = len(e.values)
    if not 1 <= k <= n:
        raise ValueError(f"rank k={k} out of range [1, {n}]")
    return Projector.from_vectors(e.vectors[:, :k])


def _checked_eigenvalues(m, k):
    m = symmetrize(m)
    n = m.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"rank k={k} out of range [1, {n}]")
    values = eigh(m).values
    scale = max(np.trace(m), 0.0)
    if values[-1] < -PSD_REJECT * scale or (scale == 0.0 and values[-1] < 0.0):
        raise NotPSDError("matrix not PSD")
    return values


def ky_fan_antinorm(m, k):
    """Sum of the ``n - k`` smallest eigenvalues of a PSD matrix.

    This is the low-rank penalty directly: it vanishes exactly when ``m``
    has rank at most ``k``. Small negative round-off is clamped to zero.
    """
    values = _checked_eigenvalues(m, k)
    return max(float(np.sum(values[k:])), 0.0)


def eckart_young_oracle(m, k):
    """Squared Frobenius distance from sqrt(m) to its best rank-k approximation.

    Independent route to :func:`ky_fan_antinorm`: build the PSD square root,
    truncate its SVD at ``k`` and measure the residual.
    """
    _checked_eigenvalues(m, k)
    w, v = np.linalg.eigh(symmetrize(m))
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    u, s, vt = np.linalg.svd(root)
    approx = (u[:, :k] * s[:k]) @ vt[:k]
    return float(np.sum((root - approx) ** 2))


def frobenius_distance(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))
