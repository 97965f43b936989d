"""Mixture algebra: validation, tempering, KL, upsampling, products.

A Mixture is a probability vector over a taxonomy's categories. All
operations are pure; weights are frozen numpy arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import (
    EmptySelection,
    InvalidMixture,
    InvalidTemperature,
    TaxonomyMismatch,
)
from .taxonomy import (
    Taxonomy,
    canonical_formats,
    canonical_topics,
    parse_taxonomy_spec,
    product_taxonomy,
    resolve_label,
)

# Inputs whose sum deviates less than this are renormalized; worse are rejected.
SUM_TOLERANCE = 1e-6


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Mixture:
    taxonomy: Taxonomy
    weights: np.ndarray = field(compare=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (self.taxonomy.arity,):
            raise InvalidMixture(
                f"expected {self.taxonomy.arity} weights for {self.taxonomy.kind}, got shape {w.shape}"
            )
        if not np.all(np.isfinite(w)):
            raise InvalidMixture("weights must be finite")
        if np.any(w < 0):
            raise InvalidMixture("weights must be nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) >= SUM_TOLERANCE:
            raise InvalidMixture(f"weights sum to {total}, outside tolerance {SUM_TOLERANCE}")
        object.__setattr__(self, "weights", _frozen(w / total))

    @classmethod
    def from_named_weights(
        cls,
        tax: Taxonomy,
        named: dict[str, float],
        *,
        normalize: bool = False,
    ) -> "Mixture":
        """Build from a name->weight mapping; missing categories get 0.

        With normalize=True the values may be on any scale (e.g. percent
        shares from a table) and are divided by their total.
        """
        w = np.zeros(tax.arity)
        for name, value in named.items():
            w[resolve_label(name, tax)] = value
        total = w.sum()
        if normalize:
            if total <= 0:
                raise InvalidMixture("cannot normalize weights with nonpositive total")
            w = w / total
        return cls(tax, w)

    @classmethod
    def uniform(cls, tax: Taxonomy) -> "Mixture":
        return cls(tax, np.full(tax.arity, 1.0 / tax.arity))

    @classmethod
    def indicator(cls, tax: Taxonomy, cat_id: int) -> "Mixture":
        w = np.zeros(tax.arity)
        w[cat_id] = 1.0
        return cls(tax, w)

    def named_weights(self) -> dict[str, float]:
        return {name: float(w) for name, w in zip(self.taxonomy.names, self.weights)}

    def allclose(self, other: "Mixture", atol: float = 1e-9) -> bool:
        return self.taxonomy == other.taxonomy and bool(
            np.allclose(self.weights, other.weights, atol=atol, rtol=0)
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Mixture)
            and self.taxonomy == other.taxonomy
            and np.array_equal(self.weights, other.weights)
        )


def _require_same_taxonomy(p: Mixture, q: Mixture) -> None:
    if p.taxonomy != q.taxonomy:
        raise TaxonomyMismatch(f"{p.taxonomy.kind}({p.taxonomy.arity}) vs {q.taxonomy.kind}({q.taxonomy.arity})")


def temper(p: Mixture, tau: float) -> Mixture:
    """Soften (tau > 1) or sharpen (tau < 1) by exponent 1/tau and renormalize."""
    if not (isinstance(tau, (int, float)) and math.isfinite(tau) and tau > 0):
        raise InvalidTemperature(f"temperature must be a positive finite real, got {tau!r}")
    w = p.weights ** (1.0 / tau)
    return Mixture(p.taxonomy, w / w.sum())


def kl_divergence(p: Mixture, q: Mixture) -> float:
    """KL(p || q) in nats; +inf when q lacks support where p has mass."""
    _require_same_taxonomy(p, q)
    return kl_weights(p.weights, q.weights)


def kl_weights(p: np.ndarray, q: np.ndarray) -> float:
    """KL over raw weight vectors (no taxonomy check); used in hot loops."""
    support = p > 0
    if np.any(q[support] == 0):
        return math.inf
    ps = p[support]
    return float(np.sum(ps * np.log(ps / q[support])))


def kl_weights_batch(p: np.ndarray, q_matrix: np.ndarray) -> np.ndarray:
    """KL(p || q_i) for every row of q_matrix; rows with missing support get +inf."""
    support = p > 0
    ps = p[support]
    qs = q_matrix[:, support]
    out = np.full(q_matrix.shape[0], np.inf)
    ok = np.all(qs > 0, axis=1)
    if np.any(ok):
        out[ok] = np.sum(ps * np.log(ps / qs[ok]), axis=1)
    return out


def upsampling_factors(mix: Mixture, corpus: Mixture) -> np.ndarray:
    """Elementwise mix/corpus ratio: how much each domain is amplified.

    corpus_i = 0 with mix_i = 0 gives 0; corpus_i = 0 with mix_i > 0
    gives +inf (flag, not an error).
    """
    _require_same_taxonomy(mix, corpus)
    m, c = mix.weights, corpus.weights
    out = np.zeros(len(m))
    np.divide(m, c, out=out, where=c > 0)
    out[(c == 0) & (m > 0)] = np.inf
    return out


def product_mixture(left_mix: Mixture, right_mix: Mixture) -> Mixture:
    """Independent product: cell(a, b) = left[a] * right[b] over the product registry."""
    tax = product_taxonomy(left_mix.taxonomy, right_mix.taxonomy)
    cells = np.outer(left_mix.weights, right_mix.weights).ravel()
    return Mixture(tax, cells / cells.sum())


def product_marginals(mix: Mixture, left: Taxonomy, right: Taxonomy) -> tuple[Mixture, Mixture]:
    """Recover the two per-axis mixtures from a product-taxonomy mixture."""
    grid = mix.weights.reshape(left.arity, right.arity)
    return Mixture(left, grid.sum(axis=1)), Mixture(right, grid.sum(axis=0))


def implicit_mixture(source, tax: Taxonomy, doc_ids=None) -> Mixture:
    """Token-weighted domain proportions of a selection or corpus.

    `source` is anything exposing token_counts(tax, doc_ids=...) — a
    CorpusIndex or a SelectionManifest. Reconstructing the mixture a
    document-level filter implies is exactly this measurement applied
    to the filtered set.
    """
    counts = np.asarray(source.token_counts(tax, doc_ids=doc_ids), dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptySelection("selection has no tokens")
    return Mixture(tax, counts / total)


def taxonomy_spec_string(tax: Taxonomy) -> str:
    """Inverse of parse_taxonomy_spec for the four serializable kinds."""
    if tax == canonical_topics():
        return "topic"
    if tax == canonical_formats():
        return "format"
    if tax == product_taxonomy(canonical_topics(), canonical_formats()):
        return "product"
    if tax.kind == "cluster":
        return f"cluster:{tax.arity}"
    raise TaxonomyMismatch(f"taxonomy {tax.kind}({tax.arity}) has no file spec string")


def mixture_to_dict(mix: Mixture) -> dict[str, Any]:
    return {"taxonomy": taxonomy_spec_string(mix.taxonomy), "weights": mix.named_weights()}


def mixture_from_dict(payload: dict[str, Any]) -> Mixture:
    tax = parse_taxonomy_spec(payload["taxonomy"])
    return Mixture.from_named_weights(tax, payload["weights"])


def save_mixture(mix: Mixture, path: str | Path) -> None:
    from .fileio import atomic_write_json

    atomic_write_json(path, mixture_to_dict(mix))


def load_mixture(path: str | Path) -> Mixture:
    with open(path, "r", encoding="utf-8") as handle:
        return mixture_from_dict(json.load(handle))
