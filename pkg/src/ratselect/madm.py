"""Static multi-attribute ranking baselines: SAW, WPM, TOPSIS and AHP.

All four methods score the rows of a decision matrix (alternatives x
criteria) under a weight vector and per-criterion benefit/cost flags, each
with its conventional normalization:

- SAW: min-max normalization, weighted sum.
- WPM: ratio normalization, weighted product.
- TOPSIS: vector normalization, closeness to the ideal solutions.
- AHP: criterion weights derived from a pairwise comparison matrix
  (geometric mean of rows), then SAW-style aggregation.

For the network-selection case the matrix is 4 networks x 6 QoS criteria
with bandwidth the only benefit criterion. The wrappers default to that
layout; the bare functions work for any matrix shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from .validation import as_matrix, check_benefit, check_pairwise, check_weights

#: Benefit/cost flags for the QoS criteria (B, L, J, P, U, C): only bandwidth
#: is a benefit criterion.
QOS_BENEFIT = np.array([True, False, False, False, False, False])

#: Default criterion weights for the QoS case, a cost- and load-conscious
#: consumer profile over (B, L, J, P, U, C). Importances 1:2:2:2:4:9,
#: normalized to sum 1.
DEFAULT_WEIGHTS = np.array([1.0, 2.0, 2.0, 2.0, 4.0, 9.0]) / 20.0

#: Random consistency index by matrix size, used in the consistency ratio.
RANDOM_CONSISTENCY_INDEX = {
    1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45,
}

_WPM_FLOOR = 1e-9


def default_pairwise() -> np.ndarray:
    """Pairwise comparison matrix encoding the default weights exactly.

    Built as the ratios w_i / w_j, so it is perfectly consistent and
    :func:`ahp_weights` recovers :data:`DEFAULT_WEIGHTS` with a consistency
    ratio of zero.
    """
    w = DEFAULT_WEIGHTS
    return np.outer(w, 1.0 / w)


@dataclass(frozen=True)
class Ranking:
    """Scores plus the resulting best-first order of alternative indices."""

    method: str
    scores: np.ndarray
    order: tuple = field(init=False)

    def __post_init__(self):
        # Descending scores; exact ties keep the lower index first.
        order = np.argsort(-self.scores, kind="stable")
        object.__setattr__(self, "order", tuple(int(i) for i in order))

    @property
    def best(self) -> int:
        return self.order[0]


def _resolve(matrix, weights, benefit):
    m = as_matrix(matrix)
    n_crit = m.shape[1]
    if weights is None:
        weights = DEFAULT_WEIGHTS if n_crit == len(DEFAULT_WEIGHTS) else np.full(n_crit, 1.0 / n_crit)
    if benefit is None:
        if n_crit != len(QOS_BENEFIT):
            raise ValueError("benefit flags are required for non-QoS matrix shapes")
        benefit = QOS_BENEFIT
    return m, check_weights(weights, n_crit), check_benefit(benefit, n_crit)


def saw(matrix, weights=None, benefit=None) -> Ranking:
    """Simple additive weighting.

    Columns are min-max normalized (benefit: (x-min)/(max-min), cost:
    (max-x)/(max-min); a constant column normalizes to all ones) and the
    score is the weighted sum.
    """
    m, w, b = _resolve(matrix, weights, benefit)
    lo = m.min(axis=0)
    hi = m.max(axis=0)
    span = hi - lo
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(b, m - lo, hi - m) / span
    v = np.where(span == 0, 1.0, v)
    return Ranking("saw", (v * w).sum(axis=1))


def wpm(matrix, weights=None, benefit=None) -> Ranking:
    """Weighted product method.

    Columns are ratio normalized (benefit: x/max, cost: min/x) with values
    floored at 1e-9 first so zero-valued cost entries cannot divide by zero;
    the score is the product of normalized values raised to their weights.
    """
    m, w, b = _resolve(matrix, weights, benefit)
    f = np.maximum(m, _WPM_FLOOR)
    v = np.where(b, f / f.max(axis=0), f.min(axis=0) / f)
    return Ranking("wpm", np.prod(v**w, axis=1))


def topsis(matrix, weights=None, benefit=None) -> Ranking:
    """Closeness to the ideal solutions.

    Columns are vector normalized (x / euclidean column norm; an all-zero
    column stays zero), weighted, and compared against the per-column best
    (ideal) and worst (anti-ideal) values. The score is d- / (d+ + d-), with
    the 0/0 case defined as 0.5.
    """
    m, w, b = _resolve(matrix, weights, benefit)
    norms = np.sqrt((m**2).sum(axis=0))
    v = np.divide(m, norms, out=np.zeros_like(m), where=norms != 0) * w
    ideal = np.where(b, v.max(axis=0), v.min(axis=0))
    anti = np.where(b, v.min(axis=0), v.max(axis=0))
    d_plus = np.sqrt(((v - ideal) ** 2).sum(axis=1))
    d_minus = np.sqrt(((v - anti) ** 2).sum(axis=1))
    total = d_plus + d_minus
    closeness = np.divide(d_minus, total, out=np.full(len(m), 0.5), where=total != 0)
    return Ranking("topsis", closeness)


def ahp_weights(pairwise) -> tuple[np.ndarray, float]:
    """Criterion weights and consistency ratio from a pairwise matrix.

    Weights are the geometric means of the rows, normalized to sum 1. The
    principal eigenvalue is estimated by the weighted-sum method,
    lambda_max = mean_i (A w)_i / w_i, and the consistency ratio is
    ((lambda_max - n) / (n - 1)) / RI(n). A perfectly consistent matrix has
    ratio 0 (up to rounding).
    """
    a = check_pairwise(pairwise)
    n = a.shape[0]
    gm = np.exp(np.log(a).mean(axis=1))
    weights = gm / gm.sum()
    lambda_max = float(np.mean((a @ weights) / weights))
    ci = (lambda_max - n) / (n - 1)
    ri = RANDOM_CONSISTENCY_INDEX.get(n)
    if ri is None:
        raise ValueError(f"no random consistency index for n={n}")
    cr = 0.0 if ri == 0 else ci / ri
    return weights, cr


def ahp_rank(matrix, pairwise, benefit=None) -> Ranking:
    """Rank alternatives with criterion weights taken from pairwise judgments.

    Alternative scoring uses the weighted min-max normalized matrix (the
    additive aggregation), so an all-ones pairwise matrix reduces exactly to
    equal-weight :func:`saw`.
    """
    weights, _ = ahp_weights(pairwise)
    ranking = saw(matrix, weights, benefit)
    return Ranking("ahp", ranking.scores)


class MadmRanker(BaseEstimator):
    """Base for the ranking baselines, wired for the 4 x 6 QoS matrix.

    ``fit`` only validates parameters (the methods are static scorers);
    ``predict`` accepts one decision matrix or a stack of them and returns
    the best row index per matrix.
    """

    method = ""

    def _ranking(self, matrix) -> Ranking:
        raise NotImplementedError

    def fit(self, X=None, y=None):
        self._check_params()
        self.n_criteria_ = self._n_criteria()
        return self

    def rank(self, matrix) -> Ranking:
        return self._ranking(matrix)

    def select(self, matrix) -> int:
        return self._ranking(matrix).best

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2:
            return self.select(X)
        if X.ndim == 3:
            return np.array([self.select(m) for m in X])
        raise ValueError(f"expected one matrix or a stack of matrices, got shape {X.shape}")

    def _check_params(self):
        pass

    def _n_criteria(self):
        return len(QOS_BENEFIT)


class _WeightedRanker(MadmRanker):
    def __init__(self, weights=None, benefit=None):
        self.weights = weights
        self.benefit = benefit

    def _check_params(self):
        probe = np.zeros((1, self._n_criteria()))
        _resolve(probe, self.weights, self.benefit)

    def _n_criteria(self):
        if self.weights is not None:
            return len(np.asarray(self.weights))
        return len(QOS_BENEFIT)


class SawRanker(_WeightedRanker):
    method = "saw"

    def _ranking(self, matrix):
        return saw(matrix, self.weights, self.benefit)


class WpmRanker(_WeightedRanker):
    method = "wpm"

    def _ranking(self, matrix):
        return wpm(matrix, self.weights, self.benefit)


class TopsisRanker(_WeightedRanker):
    method = "topsis"

    def _ranking(self, matrix):
        return topsis(matrix, self.weights, self.benefit)


class AhpRanker(MadmRanker):
    """AHP with a fixed pairwise judgment matrix (defaults to the built-in
    consistent encoding of the default weight profile)."""

    method = "ahp"

    def __init__(self, pairwise=None, benefit=None):
        self.pairwise = pairwise
        self.benefit = benefit

    def fit(self, X=None, y=None):
        pairwise = self.pairwise if self.pairwise is not None else default_pairwise()
        self.weights_, self.consistency_ratio_ = ahp_weights(pairwise)
        self.n_criteria_ = len(self.weights_)
        return self

    def _ranking(self, matrix):
        pairwise = self.pairwise if self.pairwise is not None else default_pairwise()
        return ahp_rank(matrix, pairwise, self.benefit)
