"""Independent reference implementations used to check the library.

These deliberately avoid the library's own code paths: gradients come from
central finite differences of the loss, and averages are recomputed with
exact rational arithmetic where feasible.
"""
from fractions import Fraction

import numpy as np

from ponfed.core import ModelParams
from ponfed.training import softmax_loss


def fd_grad(params: ModelParams, features, labels, l2: float, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient of the training loss."""
    base = params.weights
    grad = np.empty(base.size)
    for i in range(base.size):
        up = base.copy()
        up[i] += h
        down = base.copy()
        down[i] -= h
        grad[i] = (
            softmax_loss(ModelParams(up), features, labels, l2)
            - softmax_loss(ModelParams(down), features, labels, l2)
        ) / (2.0 * h)
    return grad


def rel_err(a: np.ndarray, b: np.ndarray) -> float:
    """Worst per-coordinate error, scaled by max(1, |a|, |b|)."""
    denom = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / denom))


def rational_weighted_mean(weight_vectors, counts):
    """Exact sample-count-weighted average of float vectors, via Fraction."""
    k_total = sum(counts)
    dim = len(weight_vectors[0])
    out = []
    for d in range(dim):
        acc = Fraction(0)
        for vec, k in zip(weight_vectors, counts):
            acc += Fraction(k, k_total) * Fraction(float(vec[d]))
        out.append(acc)
    return out
