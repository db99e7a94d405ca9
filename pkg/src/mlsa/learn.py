"""Linear SVM by stochastic subgradient descent, and error-rate metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FeatureMatrix


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray
    bias: float
    lam: float
    epochs: int
    seed: int

    def decision_function(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.weights + self.bias

    def predict(self, x) -> np.ndarray:
        return np.where(self.decision_function(x) >= 0, 1, -1)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"bias {self.bias!r}\n")
            for i, w in enumerate(self.weights.tolist()):
                fh.write(f"w[{i}] {w!r}\n")


@dataclass(frozen=True)
class Metrics:
    sensitivity: float
    specificity: float

    @property
    def max_error(self) -> float:
        return max(100.0 - self.sensitivity, 100.0 - self.specificity)


def svm_objective(x, y, w, b, lam: float) -> float:
    """``lam/2 ||w||^2 + mean(max(0, 1 - y (w.x + b)))``."""
    margins = y * (np.asarray(x) @ w + b)
    return 0.5 * lam * float(np.dot(w, w)) + float(np.maximum(0.0, 1.0 - margins).mean())


def train_svm(features: FeatureMatrix, lam: float = 1e-4, epochs: int = 50,
              seed: int = 0) -> LinearModel:
    """Pegasos-style training of ``lam/2 ||w||^2 + mean hinge loss``.

    Step ``t`` uses rate ``1 / (lam * t)``.  The bias is treated as the
    weight of a constant feature, so it shrinks with ``w``; this adds a
    ``lam/2 b^2`` term that is negligible at the default ``lam`` but keeps
    the bias from drifting under the large early steps.  Each epoch visits
    the rows in a fresh seeded permutation, and the returned model is the
    average of the iterates over the last 10% of steps.
    """
    x, y = features.values, features.labels.astype(float)
    if not np.all(np.isfinite(x)):
        raise ValueError("features must be finite")
    if len(np.unique(y)) < 2:
        raise ValueError("degenerate training set")
    if not lam > 0:
        raise ValueError("regularization strength must be positive")
    n, d = x.shape
    rng = np.random.default_rng(seed)
    total = epochs * n
    avg_from = total - max(1, total // 10)
    # w = scale * v keeps the shrink step O(1)
    v = np.zeros(d)
    scale = 1.0
    b = 0.0
    w_sum = np.zeros(d)
    b_sum = 0.0
    n_avg = 0
    rows = list(x)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n).tolist():
            t += 1
            eta = 1.0 / (lam * t)
            xi, yi = rows[i], y[i]
            violated = yi * (scale * float(v @ xi) + b) < 1.0
            shrink = 1.0 - eta * lam
            b *= shrink
            if shrink == 0.0:
                # first step: w collapses to zero before the hinge update
                v[:] = 0.0
                scale = 1.0
            else:
                scale *= shrink
            if violated:
                v += (eta * yi / scale) * xi
                b += eta * yi
            if scale < 1e-9:
                v *= scale
                scale = 1.0
            if t > avg_from:
                w_sum += scale * v
                b_sum += b
                n_avg += 1
    return LinearModel(w_sum / n_avg, b_sum / n_avg, lam, epochs, seed)


def evaluate(model: LinearModel, test: FeatureMatrix) -> Metrics:
    """Sensitivity (+1 class correct, %) and specificity (-1 class correct, %)."""
    y = test.labels
    if not (np.any(y == 1) and np.any(y == -1)):
        raise ValueError("evaluation needs both classes in the test set")
    pred = model.predict(test.values)
    return Metrics(100.0 * float(np.mean(pred[y == 1] == 1)),
                   100.0 * float(np.mean(pred[y == -1] == -1)))
