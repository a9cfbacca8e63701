"""Classical PCA, the contrast baseline for the cross-mixture experiment."""

from dataclasses import dataclass

import numpy as np

from .spectral import eigh


@dataclass(frozen=True)
class PcaResult:
    components: np.ndarray  # (n, n), columns sorted by explained variance
    variances: np.ndarray
    covariance: np.ndarray


def pca(points):
    """Eigendecomposition of the mean-centred sample covariance."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[0] < 2:
        raise ValueError("PCA needs at least 2 points")
    centred = x - x.mean(axis=0)
    cov = centred.T @ centred / (x.shape[0] - 1)
    pairs = eigh(cov)
    return PcaResult(pairs.vectors, np.clip(pairs.values, 0.0, None), cov)
