"""Synthetic fixtures: planted corpora and mixture -> loss oracles.

These stand in for the expensive parts of the real pipeline (annotated
web corpora and hundreds of small-model training runs) so every stage
can be exercised and verified at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .corpus_stats import DocumentRecord
from .errors import InvalidSpec, TaxonomyMismatch
from .mixtures import Mixture, temper
from .regression import GBTConfig, MultiTargetPredictor, RunObservation, fit_multi, spearman
from .rng import substream
from .sampling import SamplerConfig, sample_config_mixtures
from .search import SearchParams, brute_force_search, multi_seed_search
from .taxonomy import Taxonomy, parse_taxonomy_spec

DEFAULT_TOKEN_MEDIAN = 500.0
DEFAULT_TOKEN_SIGMA = 1.0
LOG_LINEAR_EPS = 1e-3


@dataclass(frozen=True, eq=False)
class MixingLaw:
    """A fixed mixture -> loss map; noiseless evaluation is deterministic."""

    kind: str  # linear | log_linear | quadratic_bowl | interaction
    taxonomy: Taxonomy
    coef: np.ndarray | None = None
    center: np.ndarray | None = None
    scale: float = 1.0
    offset: float = 0.0
    pairwise: np.ndarray | None = None
    noise_sigma: float = 0.0

    def __post_init__(self):
        k = self.taxonomy.arity
        if self.kind in ("linear", "log_linear", "interaction"):
            if self.coef is None or np.shape(self.coef) != (k,):
                raise InvalidSpec(f"{self.kind} law needs a coefficient vector of length {k}")
            object.__setattr__(self, "coef", np.asarray(self.coef, dtype=np.float64))
        if self.kind == "quadratic_bowl":
            if self.center is None or np.shape(self.center) != (k,):
                raise InvalidSpec(f"bowl law needs a center of length {k}")
            object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))
        if self.kind == "interaction":
            if self.pairwise is None or np.shape(self.pairwise) != (k, k):
                raise InvalidSpec(f"interaction law needs a {k}x{k} pairwise matrix")
            object.__setattr__(self, "pairwise", np.asarray(self.pairwise, dtype=np.float64))
        if self.kind not in ("linear", "log_linear", "quadratic_bowl", "interaction"):
            raise InvalidSpec(f"unknown law kind {self.kind!r}")
        if self.noise_sigma < 0:
            raise InvalidSpec("noise_sigma must be nonnegative")

    def predict_batch(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=np.float64)
        if self.kind == "linear":
            return self.offset + W @ self.coef
        if self.kind == "log_linear":
            return self.offset + np.log(W + LOG_LINEAR_EPS) @ self.coef
        if self.kind == "quadratic_bowl":
            return self.offset + self.scale * ((W - self.center) ** 2).sum(axis=1)
        return self.offset + W @ self.coef + np.einsum("ij,jk,ik->i", W, self.pairwise, W)

    def predict(self, mix: Mixture) -> float:
        if mix.taxonomy != self.taxonomy:
            raise TaxonomyMismatch("mixture taxonomy does not match the law")
        return float(self.predict_batch(mix.weights[None, :])[0])


def evaluate_law(law: MixingLaw, mix: Mixture, rng: np.random.Generator | None = None) -> float:
    """Law value plus Gaussian observation noise (noiseless at sigma 0)."""
    value = law.predict(mix)
    if law.noise_sigma > 0:
        if rng is None:
            raise ValueError("noisy evaluation needs an rng")
        value += float(rng.normal(0.0, law.noise_sigma))
    return value


@dataclass(frozen=True, eq=False)
class ScoreModel:
    """Planted quality scorer: per-domain offsets plus per-document noise."""

    name: str
    topic_offsets: np.ndarray
    format_offsets: np.ndarray
    sigma: float = 0.1


def generate_corpus(
    topics: Taxonomy,
    formats: Taxonomy,
    joint_spec: np.ndarray,
    n_docs: int,
    seed: int,
    token_median: float = DEFAULT_TOKEN_MEDIAN,
    token_sigma: float = DEFAULT_TOKEN_SIGMA,
    score_models: tuple[ScoreModel, ...] = (),
) -> list[DocumentRecord]:
    """Draw documents whose empirical (topic, format) joint converges to joint_spec."""
    spec = np.asarray(joint_spec, dtype=np.float64)
    if spec.shape != (topics.arity, formats.arity):
        raise InvalidSpec(f"joint spec must be {topics.arity}x{formats.arity}")
    if np.any(spec < 0) or abs(spec.sum() - 1.0) > 1e-9:
        raise InvalidSpec("joint spec must be nonnegative and sum to 1")
    for sm in score_models:
        if np.shape(sm.topic_offsets) != (topics.arity,) or np.shape(sm.format_offsets) != (formats.arity,):
            raise InvalidSpec(f"score model {sm.name!r} offsets must match the taxonomies")

    rng = substream(seed, 0)
    cells = rng.choice(topics.arity * formats.arity, size=n_docs, p=spec.ravel() / spec.sum())
    t_ids, f_ids = np.divmod(cells, formats.arity)
    tokens = np.maximum(1, np.rint(rng.lognormal(math.log(token_median), token_sigma, n_docs))).astype(np.int64)
    score_columns = {}
    for sm in score_models:
        base = np.asarray(sm.topic_offsets)[t_ids] + np.asarray(sm.format_offsets)[f_ids]
        score_columns[sm.name] = base + rng.normal(0.0, sm.sigma, n_docs)

    width = len(str(max(1, n_docs - 1)))
    records = []
    for i in range(n_docs):
        scores = {name: float(col[i]) for name, col in score_columns.items()}
        records.append(
            DocumentRecord(
                doc_id=f"doc-{i:0{width}d}",
                tokens=int(tokens[i]),
                topic=int(t_ids[i]),
                format=int(f_ids[i]),
                scores=scores,
            )
        )
    return records


@dataclass(frozen=True)
class RehearsalResult:
    predicted: Mixture
    predicted_value: float
    optimum_value: float
    gap: float
    holdout_spearman: float | None
    samples: int


def end_to_end_regmix(
    laws: dict[str, MixingLaw],
    corpus_prior: Mixture,
    *,
    tau: float = 2.0,
    n_mixtures: int = 512,
    config_log_alpha: tuple[float, float] = (math.log(0.1), math.log(10.0)),
    sample_seed: int = 0,
    gbt: GBTConfig = GBTConfig(),
    params: SearchParams = SearchParams(),
    seeds: tuple[int, ...] = (0, 1),
    holdout: int = 0,
    true_optimum: Mixture | None = None,
    brute_resolution: float = 0.005,
) -> RehearsalResult:
    """Full rehearsal: sample mixtures, score them with the law, fit, search.

    The gap compares the (noiseless, averaged) law at the predicted
    mixture against the law's true cap-constrained optimum, taken from
    `true_optimum` when the caller knows the closed form and from the
    brute-force oracle otherwise.
    """
    if not laws:
        raise InvalidSpec("need at least one target law")
    for law in laws.values():
        if law.taxonomy != corpus_prior.taxonomy:
            raise TaxonomyMismatch("laws and corpus prior must share a taxonomy")

    prior = temper(corpus_prior, tau)
    cfg = SamplerConfig(prior=prior, n_mixtures=n_mixtures, log_alpha_range=config_log_alpha, seed=sample_seed)
    samples = sample_config_mixtures(cfg, corpus_prior)

    noise_rng = substream(sample_seed, 1 << 32)
    observations = [
        RunObservation(s.mixture, {name: evaluate_law(law, s.mixture, noise_rng) for name, law in laws.items()})
        for s in samples
    ]

    targets = sorted(laws)
    holdout_obs = observations[len(observations) - holdout :] if holdout else []
    train_obs = observations[: len(observations) - holdout] if holdout else observations
    predictor = fit_multi(train_obs, targets, gbt)

    truth = MultiTargetPredictor(tuple(laws[t] for t in targets))
    rho = None
    if holdout_obs:
        W = np.stack([o.mixture.weights for o in holdout_obs])
        actual = np.asarray([np.mean([o.losses[t] for t in targets]) for o in holdout_obs])
        rho = spearman(predictor.predict_batch(W), actual)

    result = multi_seed_search(predictor, corpus_prior, params, list(seeds))
    predicted_value = float(truth.predict_batch(result.mixture.weights[None, :])[0])
    if true_optimum is not None:
        optimum_value = float(truth.predict_batch(true_optimum.weights[None, :])[0])
    else:
        _, optimum_value = brute_force_search(truth, corpus_prior, 0.0, params.cap, brute_resolution)
    return RehearsalResult(
        predicted=result.mixture,
        predicted_value=predicted_value,
        optimum_value=optimum_value,
        gap=predicted_value - optimum_value,
        holdout_spearman=rho,
        samples=len(samples),
    )


# -- law files (CLI) -------------------------------------------------------


def law_to_dict(law: MixingLaw) -> dict[str, Any]:
    from .mixtures import taxonomy_spec_string

    out: dict[str, Any] = {
        "kind": law.kind,
        "taxonomy": taxonomy_spec_string(law.taxonomy),
        "scale": law.scale,
        "offset": law.offset,
        "noise_sigma": law.noise_sigma,
    }
    if law.coef is not None:
        out["coef"] = law.coef.tolist()
    if law.center is not None:
        out["center"] = law.center.tolist()
    if law.pairwise is not None:
        out["pairwise"] = law.pairwise.tolist()
    return out


def law_from_dict(payload: dict[str, Any]) -> MixingLaw:
    return MixingLaw(
        kind=payload["kind"],
        taxonomy=parse_taxonomy_spec(payload["taxonomy"]),
        coef=None if "coef" not in payload else np.asarray(payload["coef"]),
        center=None if "center" not in payload else np.asarray(payload["center"]),
        scale=float(payload.get("scale", 1.0)),
        offset=float(payload.get("offset", 0.0)),
        pairwise=None if "pairwise" not in payload else np.asarray(payload["pairwise"]),
        noise_sigma=float(payload.get("noise_sigma", 0.0)),
    )
