"""corpus-mixer: organize annotated web corpora into domains, predict
good training mixtures, and materialize token-budget selections."""

__version__ = "0.1.0"

from .corpus_stats import (
    CorpusIndex,
    DocumentRecord,
    JointDistribution,
    composition_report,
    domain_proportions,
    ingest,
    joint_distribution,
    nmi,
    npmi,
)
from .mixtures import (
    Mixture,
    implicit_mixture,
    kl_divergence,
    load_mixture,
    product_marginals,
    product_mixture,
    save_mixture,
    temper,
    upsampling_factors,
)
from .regression import (
    GBTConfig,
    MultiTargetPredictor,
    RunObservation,
    SurrogateModel,
    fit,
    fit_multi,
    load_model,
    save_model,
    spearman,
)
from .sampling import MixtureSample, SamplerConfig, sample_config_mixtures, sample_dirichlet
from .search import (
    SearchParams,
    SearchResult,
    adaptive_search,
    brute_force_search,
    line_search,
    multi_seed_search,
    objective,
)
from .selection import (
    SelectionManifest,
    manifest_stats,
    redistribute_overflow,
    select_by_quality,
    select_random,
    token_budgets,
)
from .taxonomy import (
    Taxonomy,
    canonical_formats,
    canonical_topics,
    cluster_taxonomy,
    product_taxonomy,
    resolve_label,
)

__all__ = [name for name in dir() if not name.startswith("_")]
