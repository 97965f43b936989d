"""Corpus metadata ingestion and composition statistics.

Documents arrive as pre-annotated metadata records (token counts, topic
and format labels, optional cluster id and quality scores). The index
accumulates exact per-domain counts plus the topic x format joint table,
and optionally keeps per-document lists for later selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

import numpy as np

from .errors import (
    DegenerateMarginals,
    DuplicateDocId,
    EmptyCorpus,
    InvalidCategory,
    MalformedRecord,
    MissingAnnotation,
)
from .mixtures import Mixture
from .taxonomy import Taxonomy, product_taxonomy, resolve_label


@dataclass(frozen=True)
class DocumentRecord:
    doc_id: str
    tokens: int
    topic: int
    format: int
    cluster: Optional[int] = None
    scores: dict[str, float] = field(default_factory=dict)


def parse_record(
    obj: dict[str, Any],
    topics: Taxonomy,
    formats: Taxonomy,
    clusters: Taxonomy | None = None,
    *,
    line: int | None = None,
    path: str | None = None,
) -> DocumentRecord:
    """Validate one JSONL object against the record schema."""

    def bad(msg: str) -> MalformedRecord:
        return MalformedRecord(msg, line, path)

    doc_id = obj.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise bad("missing or invalid 'id'")
    tokens = obj.get("tokens")
    if not isinstance(tokens, int) or isinstance(tokens, bool) or tokens < 1:
        raise bad(f"'tokens' must be a positive integer, got {tokens!r}")

    def category(key: str, tax: Taxonomy) -> int:
        value = obj.get(key)
        if value is None:
            raise bad(f"missing '{key}'")
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise bad(f"'{key}' must be an id or label, got {value!r}")
        return resolve_label(value, tax)

    topic = category("topic", topics)
    fmt = category("format", formats)

    cluster = None
    if "cluster" in obj and obj["cluster"] is not None:
        if clusters is None:
            raise bad("record carries 'cluster' but no cluster taxonomy was supplied")
        cluster = obj["cluster"]
        if isinstance(cluster, bool) or not isinstance(cluster, int) or not clusters.valid_id(cluster):
            raise bad(f"invalid cluster id {cluster!r}")

    scores: dict[str, float] = {}
    raw_scores = obj.get("scores", {})
    if raw_scores:
        if not isinstance(raw_scores, dict):
            raise bad("'scores' must be an object")
        for name, value in raw_scores.items():
            value = float(value)
            if not math.isfinite(value):
                raise bad(f"score {name!r} is not finite")
            scores[name] = value

    return DocumentRecord(doc_id, tokens, topic, fmt, cluster, scores)


def record_to_dict(rec: DocumentRecord, topics: Taxonomy, formats: Taxonomy) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": rec.doc_id,
        "tokens": rec.tokens,
        "topic": topics.name_of(rec.topic),
        "format": formats.name_of(rec.format),
    }
    if rec.cluster is not None:
        out["cluster"] = rec.cluster
    if rec.scores:
        out["scores"] = rec.scores
    return out


class CorpusIndex:
    """Exact per-domain counts for a corpus, immutable once built.

    Build via ingest() or merge(); merging is associative and
    commutative, so sharded ingestion gives results identical to a
    single pass in any order.
    """

    def __init__(
        self,
        topics: Taxonomy,
        formats: Taxonomy,
        clusters: Taxonomy | None = None,
        *,
        stats_only: bool = False,
    ):
        self.topics = topics
        self.formats = formats
        self.clusters = clusters
        self.stats_only = stats_only
        self.total_docs = 0
        self.total_tokens = 0
        self._topic_docs = np.zeros(topics.arity, dtype=np.int64)
        self._topic_tokens = np.zeros(topics.arity, dtype=np.int64)
        self._format_docs = np.zeros(formats.arity, dtype=np.int64)
        self._format_tokens = np.zeros(formats.arity, dtype=np.int64)
        self._joint_tokens = np.zeros((topics.arity, formats.arity), dtype=np.int64)
        self._joint_docs = np.zeros((topics.arity, formats.arity), dtype=np.int64)
        if clusters is not None:
            self._cluster_docs = np.zeros(clusters.arity, dtype=np.int64)
            self._cluster_tokens = np.zeros(clusters.arity, dtype=np.int64)
        else:
            self._cluster_docs = None
            self._cluster_tokens = None
        self._cluster_annotated = 0
        self._ids: set[str] = set()
        self._documents: list[DocumentRecord] | None = None if stats_only else []

    def _add(self, rec: DocumentRecord) -> None:
        if rec.doc_id in self._ids:
            raise DuplicateDocId(f"duplicate doc id {rec.doc_id!r}")
        if not self.topics.valid_id(rec.topic):
            raise InvalidCategory(f"topic id {rec.topic} out of range")
        if not self.formats.valid_id(rec.format):
            raise InvalidCategory(f"format id {rec.format} out of range")
        self._ids.add(rec.doc_id)
        self.total_docs += 1
        self.total_tokens += rec.tokens
        self._topic_docs[rec.topic] += 1
        self._topic_tokens[rec.topic] += rec.tokens
        self._format_docs[rec.format] += 1
        self._format_tokens[rec.format] += rec.tokens
        self._joint_tokens[rec.topic, rec.format] += rec.tokens
        self._joint_docs[rec.topic, rec.format] += 1
        if rec.cluster is not None:
            if self.clusters is None or not self.clusters.valid_id(rec.cluster):
                raise InvalidCategory(f"cluster id {rec.cluster} out of range")
            self._cluster_docs[rec.cluster] += 1
            self._cluster_tokens[rec.cluster] += rec.tokens
            self._cluster_annotated += 1
        if self._documents is not None:
            self._documents.append(rec)

    def merge(self, other: "CorpusIndex") -> "CorpusIndex":
        if (self.topics, self.formats, self.clusters) != (other.topics, other.formats, other.clusters):
            raise InvalidCategory("cannot merge indexes over different taxonomies")
        overlap = self._ids & other._ids
        if overlap:
            raise DuplicateDocId(f"duplicate doc ids across shards, e.g. {sorted(overlap)[0]!r}")
        out = CorpusIndex(self.topics, self.formats, self.clusters,
                          stats_only=self.stats_only or other.stats_only)
        out.total_docs = self.total_docs + other.total_docs
        out.total_tokens = self.total_tokens + other.total_tokens
        out._topic_docs = self._topic_docs + other._topic_docs
        out._topic_tokens = self._topic_tokens + other._topic_tokens
        out._format_docs = self._format_docs + other._format_docs
        out._format_tokens = self._format_tokens + other._format_tokens
        out._joint_tokens = self._joint_tokens + other._joint_tokens
        out._joint_docs = self._joint_docs + other._joint_docs
        if self.clusters is not None:
            out._cluster_docs = self._cluster_docs + other._cluster_docs
            out._cluster_tokens = self._cluster_tokens + other._cluster_tokens
        out._cluster_annotated = self._cluster_annotated + other._cluster_annotated
        out._ids = self._ids | other._ids
        if out._documents is not None:
            out._documents = list(self._documents) + list(other._documents)
        return out

    # -- lookups ---------------------------------------------------------

    def _axis_of(self, tax: Taxonomy) -> str:
        if tax == self.topics:
            return "topic"
        if tax == self.formats:
            return "format"
        if self.clusters is not None and tax == self.clusters:
            return "cluster"
        if tax == product_taxonomy(self.topics, self.formats):
            return "product"
        raise MissingAnnotation(f"corpus is not annotated with taxonomy {tax.kind}({tax.arity})")

    def _require_cluster_complete(self) -> None:
        if self.clusters is None or self._cluster_annotated != self.total_docs:
            raise MissingAnnotation("not every document carries a cluster id")

    def token_counts(self, tax: Taxonomy, doc_ids: Iterable[str] | None = None) -> np.ndarray:
        """Per-category token counts, optionally restricted to a doc-id subset."""
        axis = self._axis_of(tax)
        if doc_ids is None:
            if axis == "topic":
                return self._topic_tokens.copy()
            if axis == "format":
                return self._format_tokens.copy()
            if axis == "cluster":
                self._require_cluster_complete()
                return self._cluster_tokens.copy()
            return self._joint_tokens.ravel().copy()
        if self._documents is None:
            raise MissingAnnotation("index was built stats-only; per-document lists unavailable")
        wanted = set(doc_ids)
        counts = np.zeros(tax.arity, dtype=np.int64)
        for rec in self._documents:
            if rec.doc_id not in wanted:
                continue
            if axis == "topic":
                counts[rec.topic] += rec.tokens
            elif axis == "format":
                counts[rec.format] += rec.tokens
            elif axis == "cluster":
                if rec.cluster is None:
                    raise MissingAnnotation(f"document {rec.doc_id!r} lacks a cluster id")
                counts[rec.cluster] += rec.tokens
            else:
                counts[rec.topic * self.formats.arity + rec.format] += rec.tokens
        return counts

    def doc_counts(self, tax: Taxonomy) -> np.ndarray:
        axis = self._axis_of(tax)
        if axis == "topic":
            return self._topic_docs.copy()
        if axis == "format":
            return self._format_docs.copy()
        if axis == "cluster":
            self._require_cluster_complete()
            return self._cluster_docs.copy()
        return self._joint_docs.ravel().copy()

    def documents(self) -> list[DocumentRecord]:
        if self._documents is None:
            raise MissingAnnotation("index was built stats-only; per-document lists unavailable")
        return list(self._documents)

    def docs_by_domain(self, tax: Taxonomy) -> list[list[DocumentRecord]]:
        """Per-domain document lists, each sorted by doc_id (ingest-order independent)."""
        axis = self._axis_of(tax)
        if self._documents is None:
            raise MissingAnnotation("index was built stats-only; per-document lists unavailable")
        buckets: list[list[DocumentRecord]] = [[] for _ in range(tax.arity)]
        for rec in self._documents:
            if axis == "topic":
                dom = rec.topic
            elif axis == "format":
                dom = rec.format
            elif axis == "cluster":
                if rec.cluster is None:
                    raise MissingAnnotation(f"document {rec.doc_id!r} lacks a cluster id")
                dom = rec.cluster
            else:
                dom = rec.topic * self.formats.arity + rec.format
            buckets[dom].append(rec)
        for bucket in buckets:
            bucket.sort(key=lambda r: r.doc_id)
        return buckets


def ingest(
    records: Iterable[DocumentRecord],
    topics: Taxonomy,
    formats: Taxonomy,
    clusters: Taxonomy | None = None,
    *,
    stats_only: bool = False,
) -> CorpusIndex:
    index = CorpusIndex(topics, formats, clusters, stats_only=stats_only)
    for rec in records:
        index._add(rec)
    return index


def domain_proportions(index: CorpusIndex, tax: Taxonomy, weighting: str = "tokens") -> Mixture:
    """Empirical domain shares; token weighting is the default everywhere."""
    if index.total_docs == 0:
        raise EmptyCorpus("cannot compute proportions of an empty corpus")
    if weighting == "tokens":
        counts = index.token_counts(tax)
    elif weighting == "documents":
        counts = index.doc_counts(tax)
    else:
        raise ValueError(f"weighting must be 'tokens' or 'documents', got {weighting!r}")
    total = counts.sum()
    return Mixture(tax, counts / total)


class JointDistribution:
    """Empirical joint table over two category sets, normalized to 1."""

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ValueError("joint distribution must be a 2-D table")
        if np.any(matrix < 0) or not np.all(np.isfinite(matrix)):
            raise ValueError("joint entries must be finite and nonnegative")
        total = matrix.sum()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"joint entries sum to {total}, expected 1 within 1e-12")
        self.matrix = matrix
        self.row_marginal = matrix.sum(axis=1)
        self.col_marginal = matrix.sum(axis=0)

    @classmethod
    def from_counts(cls, counts: np.ndarray) -> "JointDistribution":
        counts = np.asarray(counts, dtype=np.float64)
        total = counts.sum()
        if total <= 0:
            raise EmptyCorpus("cannot normalize an all-zero joint table")
        return cls(counts / total)


def joint_distribution(index: CorpusIndex, tax_a: Taxonomy, tax_b: Taxonomy) -> JointDistribution:
    """Token-mass joint over two annotation axes of the corpus."""
    if index.total_docs == 0:
        raise EmptyCorpus("cannot compute a joint distribution of an empty corpus")
    if tax_a == index.topics and tax_b == index.formats:
        return JointDistribution.from_counts(index._joint_tokens)
    if tax_a == index.formats and tax_b == index.topics:
        return JointDistribution.from_counts(index._joint_tokens.T)
    # Other axis pairs (e.g. cluster vs. topic) need the per-document lists.
    docs = index.documents()

    def axis_id(rec: DocumentRecord, tax: Taxonomy) -> int:
        if tax == index.topics:
            return rec.topic
        if tax == index.formats:
            return rec.format
        if index.clusters is not None and tax == index.clusters:
            if rec.cluster is None:
                raise MissingAnnotation(f"document {rec.doc_id!r} lacks a cluster id")
            return rec.cluster
        raise MissingAnnotation(f"corpus is not annotated with taxonomy {tax.kind}({tax.arity})")

    counts = np.zeros((tax_a.arity, tax_b.arity), dtype=np.int64)
    for rec in docs:
        counts[axis_id(rec, tax_a), axis_id(rec, tax_b)] += rec.tokens
    return JointDistribution.from_counts(counts)


def npmi(joint: JointDistribution) -> np.ndarray:
    """Normalized pointwise mutual information per cell, in [-1, 1].

    log(p(a,b) / (p(a)p(b))) / log(1/p(a,b)). Cells that never co-occur
    get -1 (the never-together limit); a cell holding all the mass has
    p(a,b) = p(a)p(b) exactly and gets 0.
    """
    p = joint.matrix
    outer = np.outer(joint.row_marginal, joint.col_marginal)
    out = np.full(p.shape, -1.0)
    mask = p > 0
    denom = -np.log(p, where=mask, out=np.ones_like(p))
    ratio = np.zeros_like(p)
    np.divide(p, outer, out=ratio, where=mask)
    defined = mask & (denom > 0)
    out[defined] = np.log(ratio[defined]) / denom[defined]
    out[mask & (denom <= 0)] = 0.0
    return out


def entropy(marginal: np.ndarray) -> float:
    """Shannon entropy in nats."""
    p = marginal[marginal > 0]
    return float(-np.sum(p * np.log(p)))


def mutual_information(joint: JointDistribution) -> float:
    p = joint.matrix
    outer = np.outer(joint.row_marginal, joint.col_marginal)
    mask = p > 0
    value = float(np.sum(p[mask] * np.log(p[mask] / outer[mask])))
    return max(0.0, value)


def nmi(joint: JointDistribution) -> float:
    """2 I(A;B) / (H(A) + H(B)), in [0, 1]; measures label redundancy."""
    h_a = entropy(joint.row_marginal)
    h_b = entropy(joint.col_marginal)
    if h_a == 0.0 and h_b == 0.0:
        raise DegenerateMarginals("both marginals have zero entropy")
    value = 2.0 * mutual_information(joint) / (h_a + h_b)
    return min(1.0, max(0.0, value))


def composition_report(index: CorpusIndex, weighting: str = "tokens") -> dict[str, Any]:
    """Machine-readable composition summary: shares per taxonomy, NPMI, NMI."""
    if index.total_docs == 0:
        raise EmptyCorpus("cannot report on an empty corpus")
    taxonomies = [index.topics, index.formats]
    if index.clusters is not None and index._cluster_annotated == index.total_docs:
        taxonomies.append(index.clusters)
    sections = {}
    for tax in taxonomies:
        props = domain_proportions(index, tax, weighting)
        docs = index.doc_counts(tax)
        tokens = index.token_counts(tax)
        sections[tax.kind] = [
            {
                "category": name,
                "doc_count": int(docs[i]),
                "token_count": int(tokens[i]),
                "proportion": float(props.weights[i]),
            }
            for i, name in enumerate(tax.names)
        ]
    joint = joint_distribution(index, index.topics, index.formats)
    return {
        "totals": {"documents": index.total_docs, "tokens": index.total_tokens},
        "weighting": weighting,
        "taxonomies": sections,
        "npmi_topic_format": npmi(joint).tolist(),
        "nmi_topic_format": nmi(joint),
    }
