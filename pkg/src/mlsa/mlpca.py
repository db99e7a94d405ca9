"""Multi-scale local PCA of ball neighborhoods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Ball, PointCloud, neighborhoods, range_query


@dataclass(frozen=True, eq=False)
class LocalPCAResult:
    radius: float
    n: int
    eigenvalues: np.ndarray  # (D,), descending
    eigenvectors: np.ndarray  # (D, D), row i pairs with eigenvalues[i]
    center_of_mass: np.ndarray
    covariance: np.ndarray


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive.

    Works on ``(..., D, D)`` stacks; ties go to the first such entry.
    """
    idx = np.argmax(np.abs(vectors), axis=-1)
    lead = np.take_along_axis(vectors, idx[..., None], axis=-1)
    return np.where(lead < 0, -vectors, vectors)


def _eig_desc(cov: np.ndarray):
    """Batched symmetric eigendecomposition, descending, sign-normalized rows."""
    w, v = np.linalg.eigh(cov)
    w = np.clip(w[..., ::-1], 0.0, None)
    vecs = np.swapaxes(v[..., ::-1], -1, -2)
    return w, fix_signs(vecs)


def _covariance(pts: np.ndarray):
    mean = pts.mean(axis=0)
    q = pts - mean
    return mean, q.T @ q / len(pts)


def local_pca(cloud: PointCloud, z, R: float) -> LocalPCAResult:
    """PCA of the points within distance ``R`` of ``z``.

    Covariance uses the 1/n normalization.  With fewer than two neighbors
    the eigenvalues are zero and the eigenvectors are the standard basis.
    """
    z = np.asarray(z, dtype=float)
    D = cloud.dim
    idx = range_query(cloud, Ball(z, R))
    if len(idx) < 2:
        com = cloud.points[idx].mean(axis=0) if idx else z.copy()
        return LocalPCAResult(float(R), len(idx), np.zeros(D), np.eye(D), com, np.zeros((D, D)))
    mean, cov = _covariance(cloud.points[idx])
    w, v = _eig_desc(cov)
    return LocalPCAResult(float(R), len(idx), w, v, mean, cov)


def mlpca_features(cloud: PointCloud, z, radii) -> np.ndarray:
    """Eigenvalues then eigenvector rows, for each radius in increasing order.

    Length ``len(radii) * (D + D**2)``.
    """
    return mlpca_features_batch(cloud, np.atleast_2d(z), radii)[0]


def mlpca_features_batch(cloud: PointCloud, centers, radii) -> np.ndarray:
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    radii = np.asarray(radii, dtype=float).reshape(-1)
    if len(radii) == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError(f"radii must be positive and strictly increasing, got {radii.tolist()}")
    n, D = centers.shape
    block = D + D * D
    out = np.empty((n, len(radii) * block))
    pts = cloud.points
    for ri, R in enumerate(radii):
        covs = np.zeros((n, D, D))
        degenerate = np.zeros(n, dtype=bool)
        for i, nb in enumerate(neighborhoods(cloud, centers, R)):
            if len(nb) < 2:
                degenerate[i] = True
                continue
            covs[i] = _covariance(pts[nb])[1]
        w, v = _eig_desc(covs)
        w[degenerate] = 0.0
        v[degenerate] = np.eye(D)
        out[:, ri * block: ri * block + D] = w
        out[:, ri * block + D: (ri + 1) * block] = v.reshape(n, D * D)
    return out
