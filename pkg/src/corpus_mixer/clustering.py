"""k-means over precomputed document embeddings, plus NMI against label sets.

Lloyd iterations with k-means++ seeding, fully determined by the seed.
Embeddings are L2-normalized by default so Euclidean distances follow
cosine geometry.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus_stats import JointDistribution, nmi
from .errors import DimensionMismatch, LengthMismatch, TooFewPoints
from .rng import substream

_HEADER = struct.Struct("<QQ")  # n, d as little-endian uint64


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    doc_ids: tuple[str, ...]
    vectors: np.ndarray  # (n, d) float

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2 or len(self.doc_ids) != len(v):
            raise DimensionMismatch("doc_ids and vectors must align as (n,), (n, d)")
        if not np.all(np.isfinite(v)):
            raise ValueError("embedding vectors must be finite")
        object.__setattr__(self, "vectors", v)


def save_embeddings(embeds: EmbeddingSet, vectors_path: str | Path, ids_path: str | Path) -> None:
    """Binary layout: uint64 n, uint64 d, then n*d little-endian float32."""
    n, d = embeds.vectors.shape
    with open(vectors_path, "wb") as handle:
        handle.write(_HEADER.pack(n, d))
        handle.write(embeds.vectors.astype("<f4").tobytes())
    Path(ids_path).write_text("".join(f"{i}\n" for i in embeds.doc_ids), encoding="utf-8")


def load_embeddings(vectors_path: str | Path, ids_path: str | Path) -> EmbeddingSet:
    with open(vectors_path, "rb") as handle:
        n, d = _HEADER.unpack(handle.read(_HEADER.size))
        data = np.frombuffer(handle.read(n * d * 4), dtype="<f4").reshape(n, d)
    ids = tuple(Path(ids_path).read_text(encoding="utf-8").splitlines())
    if len(ids) != n:
        raise DimensionMismatch(f"ids file has {len(ids)} lines but header says {n}")
    return EmbeddingSet(ids, data.astype(np.float64))


@dataclass(frozen=True, eq=False)
class ClusterModel:
    centroids: np.ndarray  # (k, d)
    iterations: int
    inertia: float
    inertia_history: tuple[float, ...]


def _l2_normalize(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return np.divide(X, norms, out=X.copy(), where=norms > 0)


def _sq_distances(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    d2 = (X**2).sum(axis=1)[:, None] - 2.0 * (X @ C.T) + (C**2).sum(axis=1)[None, :]
    return np.maximum(d2, 0.0)


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(X)
    centroids = np.empty((k, X.shape[1]))
    centroids[0] = X[rng.integers(0, n)]
    d2 = _sq_distances(X, centroids[:1]).ravel()
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(0, n))  # all points coincide with chosen centers
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centroids[j] = X[idx]
        d2 = np.minimum(d2, _sq_distances(X, centroids[j : j + 1]).ravel())
    return centroids


def kmeans(
    embeds: EmbeddingSet,
    k: int,
    seed: int,
    max_iters: int = 100,
    tol: float = 1e-6,
    normalize: bool = True,
) -> ClusterModel:
    """Lloyd's algorithm; inertia is non-increasing across iterations."""
    X = embeds.vectors
    if len(X) < k:
        raise TooFewPoints(f"{len(X)} points cannot form {k} clusters")
    if normalize:
        X = _l2_normalize(X)
    rng = substream(seed, 0)
    centroids = _kmeans_pp_init(X, k, rng)
    history: list[float] = []
    iterations = 0
    for iterations in range(1, max_iters + 1):
        d2 = _sq_distances(X, centroids)
        labels = np.argmin(d2, axis=1)
        inertia = float(d2[np.arange(len(X)), labels].sum())
        history.append(inertia)
        assert len(history) < 2 or history[-1] <= history[-2] + 1e-9 * max(1.0, history[-2]), (
            "inertia increased between Lloyd iterations"
        )
        sums = np.zeros_like(centroids)
        np.add.at(sums, labels, X)
        counts = np.bincount(labels, minlength=k).astype(np.float64)
        new_centroids = centroids.copy()
        occupied = counts > 0
        new_centroids[occupied] = sums[occupied] / counts[occupied, None]
        # empty clusters grab the currently worst-fit points, one each
        empties = np.flatnonzero(~occupied)
        if len(empties) > 0:
            point_d2 = d2[np.arange(len(X)), labels]
            worst = np.argsort(-point_d2, kind="stable")
            for slot, cluster in enumerate(empties):
                new_centroids[cluster] = X[worst[slot]]
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break
    d2 = _sq_distances(X, centroids)
    final_inertia = float(np.min(d2, axis=1).sum())
    return ClusterModel(centroids, iterations, final_inertia, tuple(history))


def assign(model: ClusterModel, vectors: np.ndarray, normalize: bool = True) -> np.ndarray:
    """Nearest-centroid ids (ties to the lowest id)."""
    X = np.asarray(vectors, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.centroids.shape[1]:
        raise DimensionMismatch(
            f"vectors have dimension {X.shape[1]}, centroids {model.centroids.shape[1]}"
        )
    if normalize:
        X = _l2_normalize(X)
    labels = np.argmin(_sq_distances(X, model.centroids), axis=1)
    return int(labels[0]) if single else labels


def cluster_taxonomy_nmi(
    assignments,
    labels,
    weights=None,
    n_clusters: int | None = None,
    n_labels: int | None = None,
) -> float:
    """NMI between cluster ids and category labels, token- or document-weighted.

    `weights` carries per-document token counts for token weighting;
    None means every document counts once.
    """
    a = np.asarray(assignments, dtype=np.int64)
    b = np.asarray(labels, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch("assignments and labels must be equal-length 1-D sequences")
    if weights is None:
        w = np.ones(len(a))
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != a.shape:
            raise LengthMismatch("weights must align with assignments")
    ka = n_clusters or int(a.max()) + 1
    kb = n_labels or int(b.max()) + 1
    counts = np.zeros((ka, kb))
    np.add.at(counts, (a, b), w)
    return nmi(JointDistribution.from_counts(counts))
