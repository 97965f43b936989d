"""Randomized training-mixture generation.

Mixtures are drawn hierarchically: a concentration alpha is drawn
log-uniformly, then the mixture comes from Dirichlet(alpha * prior),
where the prior is a temperature-softened corpus distribution. An
optional elementwise cap against the untempered corpus mixture is
enforced by rejection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapInfeasible, InvalidAlpha
from .mixtures import Mixture
from .rng import substream

# Paper-default configuration-phase constants.
DEFAULT_N_MIXTURES = 512
DEFAULT_LOG_ALPHA_RANGE = (math.log(0.1), math.log(10.0))
DEFAULT_TAU = 2.0

MAX_REJECTION_ATTEMPTS = 10_000


@dataclass(frozen=True)
class SamplerConfig:
    prior: Mixture  # already tempered by the caller
    n_mixtures: int = DEFAULT_N_MIXTURES
    log_alpha_range: tuple[float, float] = DEFAULT_LOG_ALPHA_RANGE
    cap: float | None = None
    seed: int = 0

    def __post_init__(self):
        low, high = self.log_alpha_range
        if not (low < high):
            raise InvalidAlpha(f"log-alpha range must satisfy low < high, got ({low}, {high})")
        if self.n_mixtures < 1:
            raise ValueError("n_mixtures must be >= 1")
        if self.cap is not None and not self.cap > 1:
            raise ValueError("cap, if set, must exceed 1")


@dataclass(frozen=True)
class MixtureSample:
    index: int
    alpha: float
    mixture: Mixture


def sample_dirichlet(alpha: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw from Dirichlet(alpha) via normalized Gammas.

    Entries with alpha_i = 0 stay exactly 0 (the category is dropped
    from the draw). Underflow of every Gamma at once is vanishingly
    rare but would yield 0/0, so such draws are retried.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.ndim != 1 or np.any(alpha < 0) or not np.all(np.isfinite(alpha)) or alpha.sum() <= 0:
        raise InvalidAlpha("alpha must be a nonnegative vector with positive total")
    while True:
        gamma = rng.standard_gamma(alpha)
        total = gamma.sum()
        if total > 0 and np.isfinite(total):
            return gamma / total


def _cap_feasible(cap: float | None, prior_w: np.ndarray, reference_w: np.ndarray) -> None:
    if cap is None:
        return
    support = prior_w > 0
    if np.any(support & (reference_w == 0)):
        raise CapInfeasible("prior puts mass where the reference mixture has none; cap can never hold")
    if cap * reference_w[support].sum() < 1.0:
        raise CapInfeasible(
            f"cap {cap} times reference mass over the prior support is below 1; no feasible mixture"
        )


def sample_config_mixtures(cfg: SamplerConfig, reference: Mixture) -> list[MixtureSample]:
    """Draw cfg.n_mixtures training mixtures, reproducible per (seed, index).

    `reference` is the untempered corpus mixture used for cap checks;
    the Dirichlet base measure is cfg.prior (tempered).
    """
    if cfg.prior.taxonomy != reference.taxonomy:
        raise CapInfeasible("prior and reference mixtures must share a taxonomy")
    prior_w = cfg.prior.weights
    ref_w = reference.weights
    _cap_feasible(cfg.cap, prior_w, ref_w)
    low, high = cfg.log_alpha_range
    bound = None if cfg.cap is None else cfg.cap * ref_w

    out: list[MixtureSample] = []
    for i in range(cfg.n_mixtures):
        rng = substream(cfg.seed, i)
        for _ in range(MAX_REJECTION_ATTEMPTS):
            alpha = math.exp(rng.uniform(low, high))
            weights = sample_dirichlet(alpha * prior_w, rng)
            if bound is None or np.all(weights <= bound):
                out.append(MixtureSample(i, alpha, Mixture(cfg.prior.taxonomy, weights)))
                break
        else:
            raise CapInfeasible(
                f"mixture {i}: no cap-feasible draw in {MAX_REJECTION_ATTEMPTS} attempts"
            )
    return out
