"""
Loss-proportional resampling
"""
from typing import Optional, Sequence

import numpy as np

from utils.errors import EmptyDataset
from utils.log import get_logger
from .dataset import AggregatedDataset

logger = get_logger(__name__)


def resample_indices(weights: Sequence[float], size: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw row indices i.i.d. with replacement, probability proportional to weight

    All-zero weights fall back to uniform draws with a warning.

    Args:
        weights: Non-negative per-row weights
        size: Number of draws
        rng: Seeded generator

    Returns:
        (size,) row indices
    """
    w = np.asarray(weights, dtype=float)
    if not w.size:
        raise EmptyDataset("cannot resample an empty dataset")
    if (w < 0).any():
        raise ValueError("resampling weights must be non-negative")
    total = w.sum()
    if total > 0:
        p = w / total
    else:
        logger.warning("all %d resampling weights are zero, falling back to uniform", w.size)
        p = None
    return rng.choice(w.size, size=int(size), replace=True, p=p)


def resample_counts(weights: Sequence[float], size: int, seed: int) -> np.ndarray:
    """How many times each row was drawn; usable directly as tree sample weights"""
    w = np.asarray(weights, dtype=float)
    indices = resample_indices(w, size, np.random.default_rng(seed))
    return np.bincount(indices, minlength=w.size).astype(float)


def resample(dataset: AggregatedDataset, weights: Sequence[float], size: Optional[int] = None,
             seed: int = 0) -> AggregatedDataset:
    """
    Resampled copy of a dataset

    Args:
        dataset: Aggregated dataset
        weights: Weights aligned with the dataset rows
        size: Number of draws, default len(dataset)
        seed: Seed of the draw

    Returns:
        New dataset of ``size`` rows
    """
    if len(weights) != len(dataset):
        raise ValueError(f"{len(weights)} weights for {len(dataset)} rows")
    size = len(dataset) if size is None else size
    return dataset.select(resample_indices(weights, size, np.random.default_rng(seed)))
