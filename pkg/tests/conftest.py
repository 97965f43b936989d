from __future__ import annotations

import numpy as np
import pytest

from corpus_mixer.mixtures import Mixture
from corpus_mixer.taxonomy import Taxonomy


def toy_taxonomy(k: int, kind: str = "topic", prefix: str = "cat") -> Taxonomy:
    return Taxonomy(kind=kind, names=tuple(f"{prefix}-{i}" for i in range(k)))


def mix(tax: Taxonomy, *weights: float) -> Mixture:
    return Mixture(tax, np.asarray(weights, dtype=np.float64))


def random_simplex(rng: np.random.Generator, k: int) -> np.ndarray:
    w = rng.random(k) + 1e-3
    return w / w.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
