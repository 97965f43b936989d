"""Deterministic random streams.

All randomness in the toolkit flows through keyed Philox streams: a
(seed, index) pair fully determines a generator, so work can be split
across mixtures / domains / steps and still produce results identical
to a sequential run.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator keyed by (seed, index).

    Philox is counter-based: equal keys give bit-identical streams on
    every platform and for any creation order.
    """
    key = [int(seed) & _MASK64, int(index) & _MASK64]
    return np.random.Generator(np.random.Philox(key=key))
