"""Input validation helpers shared by the ranking and config code."""

from __future__ import annotations

import numpy as np

WEIGHT_SUM_TOL = 1e-9


def as_matrix(values) -> np.ndarray:
    """Coerce to a finite 2-D float array of alternatives x criteria."""
    m = np.asarray(values, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"decision matrix must be 2-D and non-empty, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("decision matrix must be finite")
    return m


def check_weights(weights, n_criteria: int) -> np.ndarray:
    """Validate a criterion weight vector: right length, non-negative, sum 1."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (n_criteria,):
        raise ValueError(f"expected {n_criteria} weights, got shape {w.shape}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("weights must be finite and non-negative")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1 (got {w.sum()!r})")
    return w


def check_benefit(benefit, n_criteria: int) -> np.ndarray:
    """Validate the per-criterion benefit/cost flags (True = larger is better)."""
    b = np.asarray(benefit, dtype=bool)
    if b.shape != (n_criteria,):
        raise ValueError(f"expected {n_criteria} benefit flags, got shape {b.shape}")
    return b


def check_pairwise(matrix, reciprocal_tol: float = 1e-9) -> np.ndarray:
    """Validate a pairwise comparison matrix: square, positive, unit diagonal,
    reciprocal (a_ji == 1 / a_ij within tolerance)."""
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 2:
        raise ValueError(f"pairwise matrix must be square (n >= 2), got shape {a.shape}")
    if not np.isfinite(a).all() or (a <= 0).any():
        raise ValueError("pairwise matrix entries must be finite and positive")
    if not np.allclose(np.diag(a), 1.0, rtol=0, atol=reciprocal_tol):
        raise ValueError("pairwise matrix diagonal must be all ones")
    if not np.allclose(a * a.T, 1.0, rtol=reciprocal_tol, atol=reciprocal_tol):
        raise ValueError("pairwise matrix must be reciprocal: a[j, i] == 1 / a[i, j]")
    return a
