"""
Deterministic seed derivation
"""
from typing import List

import numpy as np

# Stream tags keep independent random streams apart
ROLLOUT = 1
RESAMPLE = 2
SELECTION = 3
EVALUATION = 4
BEHAVIOUR = 5
MONTE_CARLO = 6
CROSSPLAY = 7
EXPLOIT = 8


def derive_seed(*words: int) -> int:
    """
    Mix integer words into one 64-bit unsigned seed

    Args:
        words: Non-negative integers (root seed, stream tag, indices)

    Returns:
        Seed in [0, 2**64)
    """
    entropy = [int(w) for w in words]
    if any(w < 0 for w in entropy):
        raise ValueError(f"seed words must be non-negative: {entropy}")
    sequence = np.random.SeedSequence(entropy)
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(*words: int) -> np.random.Generator:
    """Build a numpy generator from the same words ``derive_seed`` takes"""
    return np.random.default_rng(derive_seed(*words))


def episode_seeds(seed: int, n_episodes: int) -> List[int]:
    """
    Episode seeds for a block of evaluation or rollout episodes

    Args:
        seed: Root seed of the block
        n_episodes: Number of episodes

    Returns:
        List of per-episode seeds, stable for a given root
    """
    return [derive_seed(seed, e) for e in range(n_episodes)]
