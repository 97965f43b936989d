"""Materialize a mixture and a token budget into a concrete selection.

Per-domain integer budgets come from largest-remainder apportionment.
Within a domain, documents are taken either in seeded-shuffle order or
highest-score-first, accumulating whole documents until the budget is
covered (overshoot bounded by one document). Product-taxonomy targets
that exceed per-cell availability are first made feasible by
water-filling redistribution.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .corpus_stats import CorpusIndex, DocumentRecord
from .errors import InsufficientCorpus, MissingAnnotation, MissingScore, TaxonomyMismatch
from .mixtures import Mixture
from .rng import substream
from .runtime import thread_cap
from .taxonomy import Taxonomy


def token_budgets(mix: Mixture, total_budget: int) -> np.ndarray:
    """Integer per-domain budgets summing exactly to total_budget (largest remainder)."""
    if total_budget < 1:
        raise ValueError("total_budget must be >= 1")
    shares = mix.weights * total_budget
    floors = np.floor(shares).astype(np.int64)
    leftover = total_budget - int(floors.sum())
    if leftover:
        remainders = shares - floors
        # stable sort descending by remainder; ties resolve to lower index
        order = np.argsort(-remainders, kind="stable")
        floors[order[:leftover]] += 1
    return floors


@dataclass(frozen=True)
class DomainSelection:
    domain: int
    target_tokens: int
    realized_tokens: int
    exhausted: bool
    docs: tuple[tuple[str, int], ...]  # (doc_id, tokens)


@dataclass(frozen=True)
class SelectionManifest:
    taxonomy: Taxonomy
    selections: tuple[DomainSelection, ...]
    mode: str  # "random" | "quality"
    seed: int | None = None
    score_name: str | None = None

    @property
    def total_target(self) -> int:
        return sum(s.target_tokens for s in self.selections)

    @property
    def total_realized(self) -> int:
        return sum(s.realized_tokens for s in self.selections)

    def doc_ids(self) -> list[str]:
        return [doc_id for s in self.selections for doc_id, _ in s.docs]

    def token_counts(self, tax: Taxonomy, doc_ids=None) -> np.ndarray:
        if tax != self.taxonomy:
            raise MissingAnnotation("manifest only carries counts over its own taxonomy")
        if doc_ids is not None:
            raise MissingAnnotation("manifest does not support doc-id restriction")
        counts = np.zeros(tax.arity, dtype=np.int64)
        for s in self.selections:
            counts[s.domain] = s.realized_tokens
        return counts


def _take_until(
    docs: list[DocumentRecord],
    order: Iterable[int],
    target: int,
) -> tuple[list[tuple[str, int]], int, bool]:
    chosen: list[tuple[str, int]] = []
    realized = 0
    for i in order:
        if realized >= target:
            return chosen, realized, False
        rec = docs[i]
        chosen.append((rec.doc_id, rec.tokens))
        realized += rec.tokens
    return chosen, realized, realized < target


def _run_per_domain(tasks):
    """Run per-domain selection closures, optionally in a thread pool.

    Each task is pure and owns its random substream, so the merged
    result is identical for any worker count.
    """
    cap = thread_cap()
    if cap <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def select_random(
    index: CorpusIndex,
    tax: Taxonomy,
    budgets: np.ndarray,
    seed: int,
) -> SelectionManifest:
    """Seeded uniform-shuffle selection per domain; exhaustion is flagged, not an error."""
    budgets = np.asarray(budgets, dtype=np.int64)
    if budgets.shape != (tax.arity,):
        raise TaxonomyMismatch(f"budgets must have length {tax.arity}")
    buckets = index.docs_by_domain(tax)

    def make_task(domain: int):
        def task() -> DomainSelection:
            docs = buckets[domain]
            target = int(budgets[domain])
            order = substream(seed, domain).permutation(len(docs))
            chosen, realized, exhausted = _take_until(docs, order, target)
            return DomainSelection(domain, target, realized, exhausted, tuple(chosen))

        return task

    selections = _run_per_domain([make_task(d) for d in range(tax.arity)])
    return SelectionManifest(tax, tuple(selections), mode="random", seed=seed)


def select_by_quality(
    index: CorpusIndex,
    tax: Taxonomy,
    budgets: np.ndarray,
    score_name: str,
) -> SelectionManifest:
    """Highest-score-first selection per domain.

    Per domain the result has a threshold character: the lowest selected
    score is >= the highest rejected one (ties broken by doc_id).
    """
    budgets = np.asarray(budgets, dtype=np.int64)
    if budgets.shape != (tax.arity,):
        raise TaxonomyMismatch(f"budgets must have length {tax.arity}")
    buckets = index.docs_by_domain(tax)

    def make_task(domain: int):
        def task() -> DomainSelection:
            docs = buckets[domain]
            for rec in docs:
                if score_name not in rec.scores:
                    raise MissingScore(rec.doc_id, score_name)
            target = int(budgets[domain])
            order = sorted(range(len(docs)), key=lambda i: (-docs[i].scores[score_name], docs[i].doc_id))
            chosen, realized, exhausted = _take_until(docs, order, target)
            return DomainSelection(domain, target, realized, exhausted, tuple(chosen))

        return task

    selections = _run_per_domain([make_task(d) for d in range(tax.arity)])
    return SelectionManifest(tax, tuple(selections), mode="quality", score_name=score_name)


def redistribute_overflow(
    target: Mixture,
    availability: np.ndarray,
    total_budget: int,
) -> Mixture:
    """Clamp cells that outgrow their availability and push the deficit elsewhere.

    Iterative water-filling: infeasible cells are pinned to their
    availability; the freed mass is spread over unclamped cells in
    proportion to their current weights (or remaining availability when
    all unclamped weights are zero). Terminates because the clamped set
    only grows.
    """
    avail = np.asarray(availability, dtype=np.float64)
    if avail.shape != (target.taxonomy.arity,):
        raise TaxonomyMismatch("availability must align with the target taxonomy")
    if avail.sum() < total_budget:
        raise InsufficientCorpus(
            f"corpus holds {avail.sum():.0f} tokens but the budget is {total_budget}"
        )
    tokens = target.weights * total_budget
    clamped = np.zeros(len(tokens), dtype=bool)
    while True:
        over = ~clamped & (tokens > avail)
        if not over.any():
            break
        clamped |= over
        tokens[over] = avail[over]
        deficit = total_budget - tokens.sum()
        free = ~clamped
        if deficit <= 0:
            break
        if not free.any():
            raise InsufficientCorpus("all cells clamped before the budget was placed")
        weight_pool = tokens[free].sum()
        if weight_pool > 0:
            tokens[free] += deficit * tokens[free] / weight_pool
        else:
            headroom = avail[free]
            tokens[free] += deficit * headroom / headroom.sum()
    return Mixture(target.taxonomy, tokens / total_budget)


def manifest_stats(manifest: SelectionManifest) -> dict[str, Any]:
    """Realized mixture plus per-domain accounting for a manifest."""
    tax = manifest.taxonomy
    realized = manifest.token_counts(tax).astype(np.float64)
    total = realized.sum()
    domains = []
    for s in manifest.selections:
        domains.append(
            {
                "domain": tax.name_of(s.domain),
                "target_tokens": s.target_tokens,
                "realized_tokens": s.realized_tokens,
                "overshoot": max(0, s.realized_tokens - s.target_tokens),
                "shortfall": max(0, s.target_tokens - s.realized_tokens),
                "exhausted": s.exhausted,
                "documents": len(s.docs),
            }
        )
    return {
        "mode": manifest.mode,
        "total_target": manifest.total_target,
        "total_realized": manifest.total_realized,
        "exhausted_domains": [tax.name_of(s.domain) for s in manifest.selections if s.exhausted],
        "realized_mixture": None if total == 0 else {
            tax.name_of(i): float(realized[i] / total) for i in range(tax.arity)
        },
        "domains": domains,
    }


def manifest_rows(manifest: SelectionManifest) -> list[dict[str, Any]]:
    """JSONL rows for the selected documents, in domain-id order."""
    tax = manifest.taxonomy
    return [
        {"id": doc_id, "tokens": tokens, "domain": tax.name_of(s.domain)}
        for s in manifest.selections
        for doc_id, tokens in s.docs
    ]


def save_manifest(manifest: SelectionManifest, directory: str | Path) -> tuple[Path, Path]:
    from .fileio import atomic_write_json, atomic_write_jsonl

    directory = Path(directory)
    rows_path = directory / "manifest.jsonl"
    summary_path = directory / "summary.json"
    atomic_write_jsonl(rows_path, manifest_rows(manifest))
    atomic_write_json(summary_path, manifest_stats(manifest))
    return rows_path, summary_path
