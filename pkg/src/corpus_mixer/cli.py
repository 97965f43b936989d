"""Command-line entry point wiring the full curation workflow.

Typical flow:

    corpus-mixer stats --input corpus.jsonl --report report.json
    corpus-mixer sample-mixtures --corpus-proportions p.json --seed 1 --out mixes/
    # ... train small models externally, collect losses ...
    corpus-mixer fit --observations runs.jsonl --target mmlu --out mmlu.json
    corpus-mixer search --model mmlu.json --prior p.json --seed 7 --out best.json
    corpus-mixer select --input corpus.jsonl --mixture best.json --budget 1000000 \
        --mode quality --score fineweb-edu --out selection/

`corpus-mixer lab ...` runs the same stages against synthetic corpora
and planted mixture->loss laws, producing identical file formats.
"""

from __future__ import annotations

import argparse
import datetime
import glob
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from . import __version__
from .clustering import EmbeddingSet, assign, cluster_taxonomy_nmi, kmeans, load_embeddings
from .corpus_stats import (
    CorpusIndex,
    composition_report,
    domain_proportions,
    ingest,
    parse_record,
    record_to_dict,
)
from .errors import CorpusMixerError
from .fileio import atomic_write_json, atomic_write_jsonl, iter_jsonl
from .lab import (
    GBTConfig,
    MixingLaw,
    ScoreModel,
    end_to_end_regmix,
    generate_corpus,
    law_from_dict,
)
from .mixtures import (
    Mixture,
    implicit_mixture,
    load_mixture,
    mixture_to_dict,
    product_mixture,
    temper,
)
from .regression import (
    MultiTargetPredictor,
    fit as fit_model,
    load_model,
    load_observations,
    model_to_dict,
    save_model,
    spearman,
)
from .rng import substream
from .sampling import (
    DEFAULT_LOG_ALPHA_RANGE as CONFIG_LOG_ALPHA,
    DEFAULT_N_MIXTURES,
    DEFAULT_TAU,
    SamplerConfig,
    sample_config_mixtures,
)
from .search import (
    DEFAULT_CAP,
    DEFAULT_KL_COEFF,
    DEFAULT_LINE_SEARCH_POINTS,
    DEFAULT_LOG_ALPHA_RANGE as SEARCH_LOG_ALPHA,
    DEFAULT_N_PER_STEP,
    DEFAULT_N_SEEDS,
    DEFAULT_SMOOTHING,
    DEFAULT_STEPS,
    SearchParams,
    multi_seed_search,
    trace_to_dicts,
)
from .selection import (
    manifest_stats,
    manifest_rows,
    redistribute_overflow,
    select_by_quality,
    select_random,
    token_budgets,
)
from .taxonomy import canonical_formats, canonical_topics, cluster_taxonomy, parse_taxonomy_spec

DEFAULT_K = 24  # cluster count matching the taxonomy arity


def paper_defaults() -> dict[str, Any]:
    """All tunables at their published values; `dump-config` prints this."""
    return {
        "sample_mixtures": {
            "tau": DEFAULT_TAU,
            "n_mixtures": DEFAULT_N_MIXTURES,
            "log_alpha_low": CONFIG_LOG_ALPHA[0],
            "log_alpha_high": CONFIG_LOG_ALPHA[1],
        },
        "search": {
            "n_per_step": DEFAULT_N_PER_STEP,
            "steps": DEFAULT_STEPS,
            "gamma": DEFAULT_KL_COEFF,
            "eta": DEFAULT_SMOOTHING,
            "cap": DEFAULT_CAP,
            "line_search_points": DEFAULT_LINE_SEARCH_POINTS,
            "log_alpha_low": SEARCH_LOG_ALPHA[0],
            "log_alpha_high": SEARCH_LOG_ALPHA[1],
            "seeds": DEFAULT_N_SEEDS,
        },
        "gbt": {
            "n_trees": GBTConfig().n_trees,
            "max_depth": GBTConfig().max_depth,
            "learning_rate": GBTConfig().learning_rate,
            "min_samples_leaf": GBTConfig().min_samples_leaf,
        },
        "cluster": {"k": DEFAULT_K},
    }


def _meta(args: argparse.Namespace, skip: tuple[str, ...] = ("func",)) -> dict[str, Any]:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in skip and not callable(v)}
    return {
        "tool_version": __version__,
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config,
    }


def _expand_inputs(patterns: list[str]) -> list[str]:
    paths: list[str] = []
    for pattern in patterns:
        hits = sorted(glob.glob(pattern))
        paths.extend(hits if hits else [pattern])
    return paths


def _read_corpus(
    patterns: list[str],
    clusters_k: int | None,
    skip_malformed: bool,
    stats_only: bool = False,
) -> CorpusIndex:
    topics, formats = canonical_topics(), canonical_formats()
    clusters = cluster_taxonomy(clusters_k) if clusters_k else None

    def records() -> Iterable:
        for path in _expand_inputs(patterns):
            for line, obj in iter_jsonl(path, skip_malformed=skip_malformed):
                yield parse_record(obj, topics, formats, clusters, line=line, path=path)

    return ingest(records(), topics, formats, clusters, stats_only=stats_only)


def _gbt_from_args(args: argparse.Namespace) -> GBTConfig:
    return GBTConfig(
        n_trees=args.trees,
        max_depth=args.depth,
        learning_rate=args.learning_rate,
        min_samples_leaf=args.min_leaf,
    )


def _add_gbt_flags(sub: argparse.ArgumentParser) -> None:
    cfg = GBTConfig()
    sub.add_argument("--trees", type=int, default=cfg.n_trees)
    sub.add_argument("--depth", type=int, default=cfg.max_depth)
    sub.add_argument("--learning-rate", type=float, default=cfg.learning_rate)
    sub.add_argument("--min-leaf", type=int, default=cfg.min_samples_leaf)


def _search_params(args: argparse.Namespace, seed: int) -> SearchParams:
    return SearchParams(
        n_per_step=args.n,
        steps=args.steps,
        kl_coeff=args.gamma,
        smoothing=args.eta,
        cap=args.cap,
        log_alpha_range=(args.log_alpha_low, args.log_alpha_high),
        line_search_points=args.line_search_points,
        seed=seed,
    )


def _add_search_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, default=DEFAULT_N_PER_STEP, help="candidates per step")
    sub.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    sub.add_argument("--gamma", type=float, default=DEFAULT_KL_COEFF, help="KL anchor coefficient")
    sub.add_argument("--eta", type=float, default=DEFAULT_SMOOTHING, help="prior smoothing rate")
    sub.add_argument("--cap", type=float, default=DEFAULT_CAP, help="max upsampling vs. the prior")
    sub.add_argument("--line-search-points", type=int, default=DEFAULT_LINE_SEARCH_POINTS)
    sub.add_argument("--log-alpha-low", type=float, default=SEARCH_LOG_ALPHA[0])
    sub.add_argument("--log-alpha-high", type=float, default=SEARCH_LOG_ALPHA[1])
    sub.add_argument("--seeds", type=int, default=DEFAULT_N_SEEDS, help="number of search seeds")
    sub.add_argument("--seed", type=int, default=0, help="base seed; runs use seed..seed+seeds-1")


# -- subcommands ------------------------------------------------------------


def cmd_dump_config(args: argparse.Namespace) -> int:
    print(json.dumps(paper_defaults(), indent=2, sort_keys=True))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    index = _read_corpus(args.input, args.clusters, args.skip_malformed, stats_only=args.stats_only)
    report = composition_report(index, weighting=args.weighting)
    report["meta"] = _meta(args)
    atomic_write_json(args.report, report)
    print(f"stats: {index.total_docs} documents, {index.total_tokens} tokens -> {args.report}")
    return 0


def cmd_sample_mixtures(args: argparse.Namespace) -> int:
    corpus = load_mixture(args.corpus_proportions)
    prior = temper(corpus, args.tau)
    cfg = SamplerConfig(
        prior=prior,
        n_mixtures=args.n,
        log_alpha_range=(args.log_alpha_low, args.log_alpha_high),
        cap=args.cap,
        seed=args.seed,
    )
    samples = sample_config_mixtures(cfg, corpus)
    out_dir = Path(args.out)
    width = len(str(max(1, args.n - 1)))
    listing = []
    for sample in samples:
        name = f"mixture-{sample.index:0{width}d}.json"
        atomic_write_json(out_dir / name, mixture_to_dict(sample.mixture))
        listing.append({"index": sample.index, "alpha": sample.alpha, "path": name})
    atomic_write_json(out_dir / "manifest.json", {"samples": listing, "meta": _meta(args)})
    print(f"sample-mixtures: wrote {len(samples)} mixtures to {out_dir}")
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    observations = load_observations(args.observations)
    held = observations[len(observations) - args.holdout :] if args.holdout else []
    train = observations[: len(observations) - args.holdout] if args.holdout else observations
    model = fit_model(train, args.target, _gbt_from_args(args))
    metadata: dict[str, Any] = {"holdout": args.holdout}
    if held:
        with_target = [o for o in held if args.target in o.losses]
        W = np.stack([o.mixture.weights for o in with_target])
        actual = [o.losses[args.target] for o in with_target]
        metadata["holdout_spearman"] = spearman(model.predict_batch(W), actual)
    model.metadata.update(metadata)
    payload = model_to_dict(model)
    payload["meta"] = _meta(args)
    atomic_write_json(args.out, payload)
    rho = metadata.get("holdout_spearman")
    extra = f", holdout spearman {rho:.3f}" if rho is not None else ""
    print(f"fit: {model.n_observations} observations, target {args.target!r}{extra} -> {args.out}")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    predictor = model if not args.model2 else MultiTargetPredictor((model, load_model(args.model2)))
    prior = load_mixture(args.prior)
    seeds = [args.seed + i for i in range(args.seeds)]
    result = multi_seed_search(predictor, prior, _search_params(args, args.seed), seeds)
    payload = mixture_to_dict(result.mixture)
    payload["objective"] = result.value
    payload["meta"] = _meta(args)
    atomic_write_json(args.out, payload)
    if args.trace:
        atomic_write_json(args.trace, {"value": result.value, "steps": trace_to_dicts(result.trace), "meta": _meta(args)})
    print(f"search: best objective {result.value:.6f} over seeds {seeds} -> {args.out}")
    return 0


def cmd_select(args: argparse.Namespace) -> int:
    if args.mode == "quality" and not args.score:
        raise CorpusMixerError("--mode quality requires --score")
    index = _read_corpus(args.input, args.clusters, args.skip_malformed)
    mixture = load_mixture(args.mixture)
    tax = mixture.taxonomy

    holdout_ids: list[str] = []
    if args.holdout_fraction > 0:
        docs = index.documents()
        mask = substream(args.seed, 1 << 48).random(len(docs)) < args.holdout_fraction
        holdout_ids = [rec.doc_id for rec, hold in zip(docs, mask) if hold]
        keep = [rec for rec, hold in zip(docs, mask) if not hold]
        index = ingest(keep, index.topics, index.formats, index.clusters)

    intended = mixture
    feasible = mixture
    if args.redistribute:
        availability = index.token_counts(tax)
        feasible = redistribute_overflow(mixture, availability, args.budget)
    budgets = token_budgets(feasible, args.budget)
    if args.mode == "random":
        manifest = select_random(index, tax, budgets, args.seed)
    else:
        manifest = select_by_quality(index, tax, budgets, args.score)

    out_dir = Path(args.out)
    atomic_write_jsonl(out_dir / "manifest.jsonl", manifest_rows(manifest))
    summary = manifest_stats(manifest)
    summary["intended_mixture"] = intended.named_weights()
    summary["feasible_mixture"] = feasible.named_weights()
    summary["holdout_doc_ids"] = holdout_ids
    summary["meta"] = _meta(args)
    atomic_write_json(out_dir / "summary.json", summary)
    print(
        f"select: {manifest.total_realized} tokens over {sum(len(s.docs) for s in manifest.selections)}"
        f" documents -> {out_dir}"
    )
    return 0


def cmd_implicit(args: argparse.Namespace) -> int:
    index = _read_corpus(args.input, args.clusters, args.skip_malformed)
    tax = parse_taxonomy_spec(args.taxonomy)
    doc_ids = None
    if args.selected:
        doc_ids = [obj["id"] for _, obj in iter_jsonl(args.selected)]
    mix = implicit_mixture(index, tax, doc_ids=doc_ids)
    payload = mixture_to_dict(mix)
    payload["meta"] = _meta(args)
    atomic_write_json(args.out, payload)
    print(f"implicit: {args.taxonomy} mixture over {len(doc_ids) if doc_ids else index.total_docs} docs -> {args.out}")
    return 0


def cmd_cluster(args: argparse.Namespace) -> int:
    embeds = load_embeddings(args.embeddings, args.ids)
    model = kmeans(
        embeds,
        k=args.k,
        seed=args.seed,
        max_iters=args.max_iters,
        tol=args.tol,
        normalize=not args.no_normalize,
    )
    labels = assign(model, embeds.vectors, normalize=not args.no_normalize)
    atomic_write_json(
        args.out,
        {
            "k": args.k,
            "iterations": model.iterations,
            "inertia": model.inertia,
            "centroids": model.centroids.tolist(),
            "meta": _meta(args),
        },
    )
    if args.assignments:
        atomic_write_jsonl(
            args.assignments,
            [{"id": doc_id, "cluster": int(c)} for doc_id, c in zip(embeds.doc_ids, labels)],
        )
    print(f"cluster: k={args.k}, inertia {model.inertia:.4f} after {model.iterations} iterations")
    return 0


def _default_lab_spec(seed: int) -> dict[str, Any]:
    topics, formats = canonical_topics(), canonical_formats()
    rng = substream(seed, 97)
    t_marg = rng.dirichlet(np.full(topics.arity, 5.0))
    f_marg = rng.dirichlet(np.full(formats.arity, 5.0))
    offsets = np.linspace(-1.0, 1.0, topics.arity)
    return {
        "joint": np.outer(t_marg, f_marg).tolist(),
        "score_models": [
            {
                "name": "quality",
                "topic_offsets": offsets.tolist(),
                "format_offsets": np.zeros(formats.arity).tolist(),
                "sigma": 0.25,
            }
        ],
        "token_median": 500.0,
        "token_sigma": 1.0,
    }


def cmd_lab_generate(args: argparse.Namespace) -> int:
    topics, formats = canonical_topics(), canonical_formats()
    if args.spec:
        with open(args.spec, "r", encoding="utf-8") as handle:
            spec = json.load(handle)
    else:
        spec = _default_lab_spec(args.seed)
    score_models = tuple(
        ScoreModel(
            name=sm["name"],
            topic_offsets=np.asarray(sm["topic_offsets"], dtype=np.float64),
            format_offsets=np.asarray(sm["format_offsets"], dtype=np.float64),
            sigma=float(sm.get("sigma", 0.1)),
        )
        for sm in spec.get("score_models", [])
    )
    records = generate_corpus(
        topics,
        formats,
        np.asarray(spec["joint"], dtype=np.float64),
        n_docs=args.n_docs,
        seed=args.seed,
        token_median=float(spec.get("token_median", 500.0)),
        token_sigma=float(spec.get("token_sigma", 1.0)),
        score_models=score_models,
    )
    atomic_write_jsonl(args.out, [record_to_dict(r, topics, formats) for r in records])
    print(f"lab generate: {len(records)} documents -> {args.out}")
    return 0


def cmd_lab_regmix(args: argparse.Namespace) -> int:
    laws: dict[str, MixingLaw] = {}
    for i, path in enumerate(args.law):
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        laws[str(payload.get("target", f"target-{i}"))] = law_from_dict(payload)
    prior = load_mixture(args.prior)
    true_optimum = load_mixture(args.true_optimum) if args.true_optimum else None
    result = end_to_end_regmix(
        laws,
        prior,
        tau=args.tau,
        n_mixtures=args.n_mixtures,
        sample_seed=args.sample_seed,
        gbt=_gbt_from_args(args),
        params=_search_params(args, args.seed),
        seeds=tuple(args.seed + i for i in range(args.seeds)),
        holdout=args.holdout,
        true_optimum=true_optimum,
        brute_resolution=args.brute_resolution,
    )
    payload = {
        "predicted_mixture": result.predicted.named_weights(),
        "predicted_value": result.predicted_value,
        "optimum_value": result.optimum_value,
        "gap": result.gap,
        "holdout_spearman": result.holdout_spearman,
        "samples": result.samples,
        "meta": _meta(args),
    }
    atomic_write_json(args.out, payload)
    print(f"lab regmix: gap {result.gap:.6f} (predicted {result.predicted_value:.6f}) -> {args.out}")
    return 0


def cmd_compose(args: argparse.Namespace) -> int:
    index = _read_corpus(args.input, None, args.skip_malformed)
    topic_mix = load_mixture(args.topic_mixture)
    format_mix = load_mixture(args.format_mixture)
    intended, feasible, manifest = compose_quality_mixture(
        index, topic_mix, format_mix, args.score, args.budget
    )
    out_dir = Path(args.out)
    atomic_write_jsonl(out_dir / "manifest.jsonl", manifest_rows(manifest))
    summary = manifest_stats(manifest)
    summary["intended_mixture"] = intended.named_weights()
    summary["feasible_mixture"] = feasible.named_weights()
    summary["meta"] = _meta(args)
    atomic_write_json(out_dir / "summary.json", summary)
    print(f"compose: {manifest.total_realized} tokens over 576 cells -> {out_dir}")
    return 0


def compose_quality_mixture(
    index: CorpusIndex,
    topic_mix: Mixture,
    format_mix: Mixture,
    score_name: str,
    budget: int,
):
    """Product mixture -> availability clamp -> per-cell quality selection."""
    intended = product_mixture(topic_mix, format_mix)
    availability = index.token_counts(intended.taxonomy)
    feasible = redistribute_overflow(intended, availability, budget)
    budgets = token_budgets(feasible, budget)
    manifest = select_by_quality(index, intended.taxonomy, budgets, score_name)
    return intended, feasible, manifest


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corpus-mixer", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"corpus-mixer {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("dump-config", help="print all defaults as JSON")
    sub.set_defaults(func=cmd_dump_config)

    sub = subs.add_parser("stats", help="corpus composition report (shares, NPMI, NMI)")
    sub.add_argument("--input", nargs="+", required=True, help="JSONL file(s) or glob(s)")
    sub.add_argument("--report", required=True)
    sub.add_argument("--weighting", choices=("tokens", "documents"), default="tokens")
    sub.add_argument("--clusters", type=int, default=None, help="cluster taxonomy arity, if annotated")
    sub.add_argument("--skip-malformed", action="store_true")
    sub.add_argument("--stats-only", action="store_true", help="drop per-document lists")
    sub.set_defaults(func=cmd_stats)

    sub = subs.add_parser("sample-mixtures", help="draw randomized training mixtures")
    sub.add_argument("--corpus-proportions", required=True, help="untempered corpus mixture JSON")
    sub.add_argument("--tau", type=float, default=DEFAULT_TAU)
    sub.add_argument("--n", type=int, default=DEFAULT_N_MIXTURES)
    sub.add_argument("--log-alpha-low", type=float, default=CONFIG_LOG_ALPHA[0])
    sub.add_argument("--log-alpha-high", type=float, default=CONFIG_LOG_ALPHA[1])
    sub.add_argument("--cap", type=float, default=None)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_sample_mixtures)

    sub = subs.add_parser("fit", help="fit the mixture->loss surrogate for one target")
    sub.add_argument("--observations", required=True)
    sub.add_argument("--target", required=True)
    sub.add_argument("--holdout", type=int, default=0, help="reserve the last N observations")
    _add_gbt_flags(sub)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_fit)

    sub = subs.add_parser("search", help="adaptive mixture search under the cap")
    sub.add_argument("--model", required=True)
    sub.add_argument("--model2", default=None, help="second model; outputs are averaged")
    sub.add_argument("--prior", required=True, help="corpus proportions mixture JSON")
    _add_search_flags(sub)
    sub.add_argument("--out", required=True)
    sub.add_argument("--trace", default=None)
    sub.set_defaults(func=cmd_search)

    sub = subs.add_parser("select", help="materialize a mixture into a token-budget manifest")
    sub.add_argument("--input", nargs="+", required=True)
    sub.add_argument("--mixture", required=True)
    sub.add_argument("--budget", type=int, required=True)
    sub.add_argument("--mode", choices=("random", "quality"), default="random")
    sub.add_argument("--score", default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--redistribute", action="store_true", help="clamp to availability first")
    sub.add_argument("--holdout-fraction", type=float, default=0.0)
    sub.add_argument("--clusters", type=int, default=None)
    sub.add_argument("--skip-malformed", action="store_true")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_select)

    sub = subs.add_parser("implicit", help="reconstruct the implicit mixture of a selection")
    sub.add_argument("--input", nargs="+", required=True)
    sub.add_argument("--selected", default=None, help="manifest JSONL; omit for the whole corpus")
    sub.add_argument("--taxonomy", default="topic")
    sub.add_argument("--clusters", type=int, default=None)
    sub.add_argument("--skip-malformed", action="store_true")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_implicit)

    sub = subs.add_parser("cluster", help="k-means over document embeddings")
    sub.add_argument("--embeddings", required=True)
    sub.add_argument("--ids", required=True)
    sub.add_argument("--k", type=int, default=DEFAULT_K)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--max-iters", type=int, default=100)
    sub.add_argument("--tol", type=float, default=1e-6)
    sub.add_argument("--no-normalize", action="store_true")
    sub.add_argument("--out", required=True)
    sub.add_argument("--assignments", default=None)
    sub.set_defaults(func=cmd_cluster)

    lab = subs.add_parser("lab", help="synthetic pipeline rehearsals")
    lab_subs = lab.add_subparsers(dest="lab_command", required=True)

    sub = lab_subs.add_parser("generate", help="generate a synthetic annotated corpus")
    sub.add_argument("--n-docs", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--spec", default=None, help="JSON spec: joint, score_models, token dist")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_lab_generate)

    sub = lab_subs.add_parser("regmix", help="sample -> evaluate law -> fit -> search")
    sub.add_argument("--law", action="append", required=True, help="law JSON; repeat for multi-task")
    sub.add_argument("--prior", required=True)
    sub.add_argument("--tau", type=float, default=DEFAULT_TAU)
    sub.add_argument("--n-mixtures", type=int, default=DEFAULT_N_MIXTURES)
    sub.add_argument("--sample-seed", type=int, default=0)
    sub.add_argument("--holdout", type=int, default=0)
    sub.add_argument("--true-optimum", default=None, help="mixture JSON with the known optimum")
    sub.add_argument("--brute-resolution", type=float, default=0.005)
    _add_gbt_flags(sub)
    _add_search_flags(sub)
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_lab_regmix)

    sub = subs.add_parser("compose", help="product mixture + per-cell quality selection")
    sub.add_argument("--input", nargs="+", required=True)
    sub.add_argument("--topic-mixture", required=True)
    sub.add_argument("--format-mixture", required=True)
    sub.add_argument("--score", required=True)
    sub.add_argument("--budget", type=int, required=True)
    sub.add_argument("--skip-malformed", action="store_true")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=cmd_compose)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CorpusMixerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
