"""
Impurity criteria and exhaustive best-split search
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

CRITERIA = ("gini", "entropy", "mse")

# impurities closer than this count as ties
IMPURITY_TOL = 1e-12


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    impurity: float


def class_counts(y: np.ndarray, w: np.ndarray, n_classes: int) -> np.ndarray:
    return np.bincount(y, weights=w, minlength=n_classes).astype(float)


def node_impurity(counts: np.ndarray, criterion: str) -> np.ndarray:
    """
    Impurity of one or many class-count vectors

    Args:
        counts: (..., n_classes) weighted class counts
        criterion: 'gini' or 'entropy'

    Returns:
        Impurity per count vector; empty vectors score 0
    """
    counts = np.asarray(counts, dtype=float)
    total = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(total > 0, counts / total, 0.0)
        if criterion == "gini":
            return 1.0 - np.sum(p * p, axis=-1)
        if criterion == "entropy":
            logs = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
            return -np.sum(p * logs, axis=-1)
    raise ValueError(f"unknown criterion '{criterion}', expected one of {CRITERIA}")


def weighted_variance(y: np.ndarray, w: np.ndarray) -> float:
    total = w.sum()
    if total <= 0:
        return 0.0
    mean = np.dot(w, y) / total
    return float(np.dot(w, (y - mean) ** 2) / total)


def _pick(impurities: np.ndarray) -> int:
    """First candidate within tolerance of the minimum, i.e. the lowest threshold among ties"""
    best = impurities.min()
    return int(np.flatnonzero(impurities <= best + IMPURITY_TOL)[0])


def _candidates(column: np.ndarray):
    order = np.argsort(column, kind="stable")
    sorted_values = column[order]
    boundaries = np.flatnonzero(sorted_values[:-1] < sorted_values[1:])
    return order, sorted_values, boundaries


def _midpoints(sorted_values: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    lo = sorted_values[boundaries]
    hi = sorted_values[boundaries + 1]
    mid = (lo + hi) / 2.0
    # rounding must never send the lower value to the right child
    return np.where(mid > lo, mid, hi)


def best_class_split(X: np.ndarray, y: np.ndarray, w: np.ndarray, n_classes: int,
                     criterion: str = "gini") -> Optional[Split]:
    """
    Lowest weighted child impurity over every (feature, midpoint) candidate

    Ties go to the lowest feature index, then the lowest threshold.

    Args:
        X: (n, d) features
        y: (n,) integer labels
        w: (n,) positive weights
        n_classes: Label count
        criterion: 'gini' or 'entropy'

    Returns:
        Best split, or None when every feature is constant
    """
    total_weight = w.sum()
    onehot = np.zeros((len(y), n_classes))
    onehot[np.arange(len(y)), y] = w
    totals = onehot.sum(axis=0)

    best: Optional[Split] = None
    for feature in range(X.shape[1]):
        order, sorted_values, boundaries = _candidates(X[:, feature])
        if not boundaries.size:
            continue
        cumulative = np.cumsum(onehot[order], axis=0)
        left = cumulative[boundaries]
        right = totals - left
        w_left = left.sum(axis=1)
        w_right = right.sum(axis=1)
        impurity = (w_left * node_impurity(left, criterion)
                    + w_right * node_impurity(right, criterion)) / total_weight
        k = _pick(impurity)
        if best is None or impurity[k] < best.impurity - IMPURITY_TOL:
            threshold = float(_midpoints(sorted_values, boundaries[k:k + 1])[0])
            best = Split(feature, threshold, float(impurity[k]))
    return best


def best_regression_split(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> Optional[Split]:
    """Variance-reduction counterpart of ``best_class_split`` with the same tie-breaking"""
    total_weight = w.sum()
    best: Optional[Split] = None
    for feature in range(X.shape[1]):
        order, sorted_values, boundaries = _candidates(X[:, feature])
        if not boundaries.size:
            continue
        ws, ys = w[order], y[order]
        cw = np.cumsum(ws)
        cy = np.cumsum(ws * ys)
        cyy = np.cumsum(ws * ys * ys)
        wl, sl, ql = cw[boundaries], cy[boundaries], cyy[boundaries]
        wr, sr, qr = cw[-1] - wl, cy[-1] - sl, cyy[-1] - ql
        sse = np.maximum(ql - sl * sl / wl, 0.0) + np.maximum(qr - sr * sr / wr, 0.0)
        impurity = sse / total_weight
        k = _pick(impurity)
        if best is None or impurity[k] < best.impurity - IMPURITY_TOL:
            threshold = float(_midpoints(sorted_values, boundaries[k:k + 1])[0])
            best = Split(feature, threshold, float(impurity[k]))
    return best
