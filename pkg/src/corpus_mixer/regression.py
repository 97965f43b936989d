"""Mixture -> loss surrogate: gradient-boosted regression trees.

The regressor is written against plain numpy so that training is
bit-deterministic given hyperparameters and input order, and so the
fitted ensemble serializes to a self-describing JSON artifact (split
features, thresholds, leaf values) that reloads anywhere.

Features are the raw mixture weights in taxonomy category order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .errors import (
    InsufficientData,
    LengthMismatch,
    TargetMissing,
    TaxonomyMismatch,
)
from .mixtures import Mixture, mixture_from_dict, mixture_to_dict, taxonomy_spec_string
from .taxonomy import Taxonomy, parse_taxonomy_spec


@dataclass(frozen=True)
class RunObservation:
    """One small-model training run: its mixture and per-target losses (bits-per-byte)."""

    mixture: Mixture
    losses: dict[str, float]

    def __post_init__(self):
        if not self.losses:
            raise ValueError("observation needs at least one target loss")
        for name, value in self.losses.items():
            if not math.isfinite(value):
                raise ValueError(f"loss {name!r} is not finite")


@dataclass(frozen=True)
class GBTConfig:
    """Defaults suit the small-sample regime: shallow trees, strong shrinkage."""

    n_trees: int = 500
    max_depth: int = 4
    learning_rate: float = 0.05
    min_samples_leaf: int = 5


@dataclass(frozen=True, eq=False)
class _Tree:
    feature: np.ndarray  # int, -1 on leaves
    threshold: np.ndarray
    left: np.ndarray  # leaves point to themselves
    right: np.ndarray
    value: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(len(X), dtype=np.intp)
        rows = np.arange(len(X))
        while True:
            feat = self.feature[idx]
            interior = feat >= 0
            if not interior.any():
                return self.value[idx]
            cols = np.where(interior, feat, 0)
            go_left = X[rows, cols] <= self.threshold[idx]
            nxt = np.where(go_left, self.left[idx], self.right[idx])
            idx = np.where(interior, nxt, idx)


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int) -> tuple[int, float]:
    """Exact squared-error split search over all features at once.

    Ties resolve to the smallest feature index, then smallest threshold
    (argmax returns the first maximum), keeping training deterministic.
    """
    n = len(y)
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    ys = y[order]
    csum = np.cumsum(ys, axis=0)
    total = csum[-1, 0]
    left_n = np.arange(1, n, dtype=np.float64)[:, None]
    right_n = n - left_n
    left_sum = csum[:-1, :]
    right_sum = total - left_sum
    score = left_sum**2 / left_n + right_sum**2 / right_n
    valid = (left_n >= min_leaf) & (right_n >= min_leaf) & (xs[:-1, :] < xs[1:, :])
    if not valid.any():
        return -1, 0.0
    score = np.where(valid, score, -np.inf)
    best_pos = np.argmax(score, axis=0)
    per_feature = score[best_pos, np.arange(X.shape[1])]
    feat = int(np.argmax(per_feature))
    gain = per_feature[feat] - total**2 / n
    if not np.isfinite(per_feature[feat]) or gain <= 1e-12:
        return -1, 0.0
    pos = int(best_pos[feat])
    thr = 0.5 * (xs[pos, feat] + xs[pos + 1, feat])
    return feat, float(thr)


def _grow_tree(X: np.ndarray, y: np.ndarray, cfg: GBTConfig) -> _Tree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[float] = []

    def new_node() -> int:
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(node)
        right.append(node)
        value.append(0.0)
        return node

    root = new_node()
    stack: list[tuple[int, np.ndarray, int]] = [(root, np.arange(len(y)), 0)]
    while stack:
        node, rows, depth = stack.pop()
        y_node = y[rows]
        value[node] = float(y_node.mean())
        if depth >= cfg.max_depth or len(rows) < 2 * cfg.min_samples_leaf or np.ptp(y_node) == 0:
            continue
        X_node = X[rows]
        feat, thr = _best_split(X_node, y_node, cfg.min_samples_leaf)
        if feat < 0:
            continue
        mask = X_node[:, feat] <= thr
        feature[node] = feat
        threshold[node] = thr
        lid, rid = new_node(), new_node()
        left[node], right[node] = lid, rid
        stack.append((rid, rows[~mask], depth + 1))
        stack.append((lid, rows[mask], depth + 1))
    return _Tree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.float64),
    )


@dataclass(frozen=True, eq=False)
class SurrogateModel:
    taxonomy: Taxonomy
    target: str
    config: GBTConfig
    base: float
    trees: tuple[_Tree, ...]
    n_observations: int
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def predict_batch(self, W: np.ndarray) -> np.ndarray:
        W = np.asarray(W, dtype=np.float64)
        out = np.full(len(W), self.base)
        for tree in self.trees:
            out += self.config.learning_rate * tree.apply(W)
        return out

    def predict(self, mix: Mixture) -> float:
        if mix.taxonomy != self.taxonomy:
            raise TaxonomyMismatch("mixture taxonomy does not match the fitted model")
        return float(self.predict_batch(mix.weights[None, :])[0])


def _canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Sort rows by mixture bytes (then loss) so file enumeration order is irrelevant."""
    keys = [(X[i].tobytes(), y[i]) for i in range(len(y))]
    return np.asarray(sorted(range(len(y)), key=keys.__getitem__), dtype=np.intp)


def fit(
    observations: Iterable[RunObservation],
    target: str,
    config: GBTConfig = GBTConfig(),
) -> SurrogateModel:
    obs = [o for o in observations if target in o.losses]
    if not obs:
        raise TargetMissing(f"no observation carries target {target!r}")
    if len(obs) < 2:
        raise InsufficientData(f"need >= 2 observations for target {target!r}, got {len(obs)}")
    taxonomy = obs[0].mixture.taxonomy
    if any(o.mixture.taxonomy != taxonomy for o in obs):
        raise TaxonomyMismatch("observations mix different taxonomies")
    X = np.stack([o.mixture.weights for o in obs])
    y = np.asarray([o.losses[target] for o in obs], dtype=np.float64)
    order = _canonical_order(X, y)
    X, y = X[order], y[order]

    base = float(y.mean())
    pred = np.full(len(y), base)
    trees: list[_Tree] = []
    for _ in range(config.n_trees):
        tree = _grow_tree(X, y - pred, config)
        pred += config.learning_rate * tree.apply(X)
        trees.append(tree)
    return SurrogateModel(
        taxonomy=taxonomy,
        target=target,
        config=config,
        base=base,
        trees=tuple(trees),
        n_observations=len(obs),
    )


@dataclass(frozen=True)
class MultiTargetPredictor:
    """Averages the outputs of independently fitted per-target models."""

    models: tuple[SurrogateModel, ...]

    def __post_init__(self):
        if not self.models:
            raise InsufficientData("need at least one model")
        tax = self.models[0].taxonomy
        if any(m.taxonomy != tax for m in self.models):
            raise TaxonomyMismatch("models fitted over different taxonomies")

    @property
    def taxonomy(self) -> Taxonomy:
        return self.models[0].taxonomy

    def predict_batch(self, W: np.ndarray) -> np.ndarray:
        acc = self.models[0].predict_batch(W)
        for model in self.models[1:]:
            acc = acc + model.predict_batch(W)
        return acc / len(self.models)

    def predict(self, mix: Mixture) -> float:
        if mix.taxonomy != self.taxonomy:
            raise TaxonomyMismatch("mixture taxonomy does not match the fitted models")
        return float(self.predict_batch(mix.weights[None, :])[0])


def fit_multi(
    observations: Iterable[RunObservation],
    targets: list[str],
    config: GBTConfig = GBTConfig(),
) -> MultiTargetPredictor:
    obs = list(observations)
    return MultiTargetPredictor(tuple(fit(obs, t, config) for t in targets))


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="mergesort")
    provisional = np.empty(len(values))
    provisional[order] = np.arange(1, len(values) + 1, dtype=np.float64)
    _, inverse = np.unique(values, return_inverse=True)
    sums = np.bincount(inverse, weights=provisional)
    counts = np.bincount(inverse)
    return (sums / counts)[inverse]


def spearman(predicted, actual) -> float:
    """Rank correlation with average-rank tie handling."""
    p = np.asarray(predicted, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.shape != a.shape or p.ndim != 1 or len(p) < 2:
        raise LengthMismatch(f"need two equal-length sequences of >= 2 values, got {p.shape} vs {a.shape}")
    rp = _average_ranks(p)
    ra = _average_ranks(a)
    rp = rp - rp.mean()
    ra = ra - ra.mean()
    denom = math.sqrt(float(np.sum(rp**2)) * float(np.sum(ra**2)))
    if denom == 0:
        return 0.0
    return float(np.sum(rp * ra) / denom)


# -- serialization --------------------------------------------------------


def model_to_dict(model: SurrogateModel) -> dict[str, Any]:
    return {
        "kind": "gbt-surrogate",
        "taxonomy": taxonomy_spec_string(model.taxonomy),
        "target": model.target,
        "config": asdict(model.config),
        "base": model.base,
        "n_observations": model.n_observations,
        "metadata": model.metadata,
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "value": t.value.tolist(),
            }
            for t in model.trees
        ],
    }


def model_from_dict(payload: dict[str, Any]) -> SurrogateModel:
    trees = tuple(
        _Tree(
            feature=np.asarray(t["feature"], dtype=np.int32),
            threshold=np.asarray(t["threshold"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int32),
            right=np.asarray(t["right"], dtype=np.int32),
            value=np.asarray(t["value"], dtype=np.float64),
        )
        for t in payload["trees"]
    )
    return SurrogateModel(
        taxonomy=parse_taxonomy_spec(payload["taxonomy"]),
        target=payload["target"],
        config=GBTConfig(**payload["config"]),
        base=float(payload["base"]),
        trees=trees,
        n_observations=int(payload["n_observations"]),
        metadata=payload.get("metadata", {}),
    )


def save_model(model: SurrogateModel, path: str | Path) -> None:
    from .fileio import atomic_write_json

    atomic_write_json(path, model_to_dict(model))


def load_model(path: str | Path) -> SurrogateModel:
    with open(path, "r", encoding="utf-8") as handle:
        return model_from_dict(json.load(handle))


def load_observations(path: str | Path) -> list[RunObservation]:
    from .fileio import iter_jsonl

    out = []
    for _, obj in iter_jsonl(path):
        mixture = mixture_from_dict(obj["mixture"])
        losses = {str(k): float(v) for k, v in obj["losses"].items()}
        out.append(RunObservation(mixture, losses))
    return out


def observation_to_dict(obs: RunObservation) -> dict[str, Any]:
    return {"mixture": mixture_to_dict(obs.mixture), "losses": obs.losses}
