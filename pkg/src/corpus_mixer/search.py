"""Adaptive mixture search: minimize predicted loss plus a KL anchor.

The search repeats T times: draw N Dirichlet candidates around a drifting
prior w (concentration drawn log-uniformly per candidate), keep those
within the elementwise upsampling cap against the corpus prior p, take
the objective argmin, refine it by line search against w, then move w a
step toward the winner. The best mixture ever seen is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Protocol

import numpy as np

from .errors import ArityTooLarge, CapInfeasible, NoFeasibleCandidate, TaxonomyMismatch
from .mixtures import Mixture, kl_weights, kl_weights_batch
from .rng import substream
from .taxonomy import Taxonomy

# Paper-default search constants.
DEFAULT_N_PER_STEP = 500_000
DEFAULT_STEPS = 15
DEFAULT_KL_COEFF = 0.002
DEFAULT_SMOOTHING = 0.2
DEFAULT_CAP = 6.5
DEFAULT_LOG_ALPHA_RANGE = (math.log(1.0), math.log(1000.0))
DEFAULT_LINE_SEARCH_POINTS = 500
DEFAULT_N_SEEDS = 2

_DRAW_CHUNK = 65_536  # fixed so the random stream is consumed identically everywhere
_REJECTION_FACTOR = 100  # attempts budget per step = factor * N
_CAP_SLACK = 1e-12


class Predictor(Protocol):
    taxonomy: Taxonomy

    def predict(self, mix: Mixture) -> float: ...

    def predict_batch(self, W: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class SearchParams:
    n_per_step: int = DEFAULT_N_PER_STEP
    steps: int = DEFAULT_STEPS
    kl_coeff: float = DEFAULT_KL_COEFF
    smoothing: float = DEFAULT_SMOOTHING
    cap: float = DEFAULT_CAP
    log_alpha_range: tuple[float, float] = DEFAULT_LOG_ALPHA_RANGE
    line_search_points: int = DEFAULT_LINE_SEARCH_POINTS
    seed: int = 0


@dataclass(frozen=True, eq=False)
class StepTrace:
    step: int
    candidate: np.ndarray = field(repr=False)  # best raw candidate of the step
    candidate_value: float = math.nan
    refined: np.ndarray = field(repr=False, default=None)  # after line search
    refined_value: float = math.nan
    prior: np.ndarray = field(repr=False, default=None)  # w after the smoothing update
    best_value_so_far: float = math.nan


@dataclass(frozen=True, eq=False)
class SearchResult:
    mixture: Mixture
    value: float
    trace: tuple[StepTrace, ...]


def objective(predictor, p: Mixture, gamma: float, pi: Mixture) -> float:
    """Predicted loss plus gamma * KL(p || pi); +inf if pi drops support p needs."""
    if pi.taxonomy != p.taxonomy:
        raise TaxonomyMismatch("candidate and prior mixtures use different taxonomies")
    value = predictor.predict(pi)
    if gamma == 0:
        return value
    return value + gamma * kl_weights(p.weights, pi.weights)


def _objective_batch(predictor, p_w: np.ndarray, gamma: float, W: np.ndarray) -> np.ndarray:
    values = predictor.predict_batch(W)
    if gamma == 0:
        return values
    return values + gamma * kl_weights_batch(p_w, W)


def line_search(
    predictor,
    p: Mixture,
    gamma: float,
    w: Mixture,
    w_tilde: Mixture,
    points: int = DEFAULT_LINE_SEARCH_POINTS,
) -> Mixture:
    """Objective argmin over evenly spaced blends of w and w_tilde.

    beta = 0 is w_tilde, beta = 1 is w; both endpoints are on the grid
    and ties go to the smaller beta index.
    """
    betas = np.linspace(0.0, 1.0, points)[:, None]
    grid = betas * w.weights[None, :] + (1.0 - betas) * w_tilde.weights[None, :]
    values = _objective_batch(predictor, p.weights, gamma, grid)
    j = int(np.argmin(values))
    return Mixture(p.taxonomy, grid[j])


def _draw_feasible(
    rng: np.random.Generator,
    w: np.ndarray,
    bound: np.ndarray,
    n: int,
    log_range: tuple[float, float],
) -> np.ndarray:
    """Accumulate up to n cap-feasible Dirichlet(alpha * w) draws.

    N counts accepted candidates; rejected draws burn from a budget of
    100 N attempts. Chunk size is a fixed constant so the stream of
    random numbers (hence the result) never depends on the environment.
    """
    low, high = log_range
    accepted: list[np.ndarray] = []
    n_accepted = 0
    attempts = 0
    budget = _REJECTION_FACTOR * n
    while n_accepted < n and attempts < budget:
        chunk = min(_DRAW_CHUNK, budget - attempts)
        attempts += chunk
        alphas = np.exp(rng.uniform(low, high, size=chunk))
        gammas = rng.standard_gamma(alphas[:, None] * w[None, :])
        totals = gammas.sum(axis=1)
        ok = totals > 0
        pis = np.empty_like(gammas)
        np.divide(gammas, totals[:, None], out=pis, where=ok[:, None])
        ok &= np.all(pis <= bound, axis=1)
        if ok.any():
            take = pis[ok][: n - n_accepted]
            accepted.append(take)
            n_accepted += len(take)
    if n_accepted == 0:
        raise NoFeasibleCandidate(
            f"no cap-feasible candidate in {attempts} draws; cap region too small for this prior"
        )
    return np.concatenate(accepted, axis=0)


def adaptive_search(predictor, p: Mixture, params: SearchParams) -> SearchResult:
    """Run the full adaptive search; returns the best mixture, its objective, and a trace."""
    p_w = p.weights
    cap_bound = params.cap * p_w
    if p_w[p_w > 0].sum() * params.cap < 1.0:
        raise CapInfeasible(f"cap {params.cap} leaves no feasible simplex point")

    gamma = params.kl_coeff
    best_w = p_w.copy()
    best_value = float(_objective_batch(predictor, p_w, gamma, p_w[None, :])[0])
    w = p_w.copy()
    trace: list[StepTrace] = []
    for step in range(1, params.steps + 1):
        rng = substream(params.seed, step)
        candidates = _draw_feasible(rng, w, cap_bound, params.n_per_step, params.log_alpha_range)
        values = _objective_batch(predictor, p_w, gamma, candidates)
        best_idx = int(np.argmin(values))
        candidate_value = float(values[best_idx])
        w_tilde = line_search(
            predictor,
            p,
            gamma,
            Mixture(p.taxonomy, w),
            Mixture(p.taxonomy, candidates[best_idx]),
            params.line_search_points,
        )
        wt_w = w_tilde.weights
        assert np.all(wt_w <= cap_bound + _CAP_SLACK), "line-search point escaped the cap region"
        line_value = float(_objective_batch(predictor, p_w, gamma, wt_w[None, :])[0])
        w = params.smoothing * wt_w + (1.0 - params.smoothing) * w
        if line_value < best_value:
            best_value = line_value
            best_w = wt_w
        trace.append(
            StepTrace(
                step=step,
                candidate=candidates[best_idx].copy(),
                candidate_value=candidate_value,
                refined=wt_w.copy(),
                refined_value=line_value,
                prior=w.copy(),
                best_value_so_far=best_value,
            )
        )
    values_seen = [t.best_value_so_far for t in trace]
    assert all(a >= b for a, b in zip(values_seen, values_seen[1:])), "best-value trace increased"
    return SearchResult(Mixture(p.taxonomy, best_w), best_value, tuple(trace))


def multi_seed_search(predictor, p: Mixture, params: SearchParams, seeds: list[int]) -> SearchResult:
    """Run adaptive_search once per seed and keep the lowest objective (ties: first seed)."""
    if not seeds:
        raise ValueError("need at least one seed")
    best: SearchResult | None = None
    for seed in seeds:
        result = adaptive_search(predictor, p, replace(params, seed=seed))
        if best is None or result.value < best.value:
            best = result
    return best


def _compositions(total: int, parts: int, _memo: dict | None = None) -> np.ndarray:
    """All nonnegative integer vectors of length `parts` summing to `total`, lexicographic."""
    if _memo is None:
        _memo = {}
    key = (total, parts)
    if key in _memo:
        return _memo[key]
    if parts == 1:
        out = np.array([[total]], dtype=np.int32)
    else:
        blocks = []
        for first in range(total + 1):
            rest = _compositions(total - first, parts - 1, _memo)
            block = np.empty((len(rest), parts), dtype=np.int32)
            block[:, 0] = first
            block[:, 1:] = rest
            blocks.append(block)
        out = np.concatenate(blocks, axis=0)
    _memo[key] = out
    return out


def brute_force_search(
    predictor,
    p: Mixture,
    gamma: float,
    cap: float,
    resolution: float,
) -> tuple[Mixture, float]:
    """Exhaustive lattice scan of the capped simplex; the test oracle for the search.

    Only sensible at tiny arity; ties break to the lexicographically
    smallest weight vector.
    """
    arity = p.taxonomy.arity
    if arity > 5:
        raise ArityTooLarge(f"brute force is limited to arity <= 5, got {arity}")
    steps = round(1.0 / resolution)
    if steps < 1:
        raise ValueError("resolution must be <= 1")
    lattice = _compositions(steps, arity).astype(np.float64) / steps
    feasible = np.all(lattice <= cap * p.weights[None, :] + _CAP_SLACK, axis=1)
    if not feasible.any():
        raise CapInfeasible("no lattice point satisfies the cap")
    grid = lattice[feasible]
    values = _objective_batch(predictor, p.weights, gamma, grid)
    j = int(np.argmin(values))
    return Mixture(p.taxonomy, grid[j]), float(values[j])


def trace_to_dicts(trace: tuple[StepTrace, ...]) -> list[dict[str, Any]]:
    return [
        {
            "step": t.step,
            "candidate": t.candidate.tolist(),
            "candidate_value": t.candidate_value,
            "refined": t.refined.tolist(),
            "refined_value": t.refined_value,
            "prior": t.prior.tolist(),
            "best_value_so_far": t.best_value_so_far,
        }
        for t in trace
    ]
