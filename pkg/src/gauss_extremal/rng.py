"""Counter-based random streams for reproducible simulation.

Every randomized operation in the package draws from a Philox generator
keyed by (seed, trial, stream). Philox is counter based, so a stream's
output depends only on its key, never on how many other streams were
consumed first. Results are therefore bit-reproducible regardless of
execution order or parallelism.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream ids used by the simulator; sweeps may use their own small ints.
STREAM_SOURCE = 0
STREAM_NOISE_X = 1
STREAM_NOISE_Y = 2


def stream(seed: int, trial: int, stream_id: int) -> np.random.Generator:
    """Generator for one (seed, trial, stream) triple.

    trial must fit in 48 bits and stream_id in 16 bits so the pair packs
    into the second Philox key word.
    """
    if not 0 <= trial < (1 << 48):
        raise ValueError("trial index out of range")
    if not 0 <= stream_id < (1 << 16):
        raise ValueError("stream id out of range")
    key = (int(seed) & _MASK64, ((trial << 16) | stream_id) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def random_pd(gen: np.random.Generator, n: int, ridge: float = 0.1) -> np.ndarray:
    """Random positive-definite matrix A @ A.T + ridge * I."""
    a = gen.standard_normal((n, n))
    return a @ a.T + ridge * np.eye(n)
