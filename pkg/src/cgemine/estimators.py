"""Estimator facades over the mining pipelines.

The three analysis pipelines are exposed sklearn-style: constructor
parameters are stored verbatim, all validation happens in ``fit``, and
fitted state lands in trailing-underscore attributes. ``X`` is a
:class:`~cgemine.model.VersionSeries` (or a sequence of call graphs, or a
manifest path).

Parallelism is per version through joblib with order-preserving merges,
and every random seed is derived from the master seed by hashing, so
fitted results and reports are identical at any worker count.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from joblib import Parallel, delayed
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import evolution, graphlets, rules
from .complexity import WEIGHT_MODES, ComplexityReport, compute_complexity
from .errors import InvalidParamsError
from .io import load_series
from .model import CallGraph, VersionSeries


def as_version_series(X) -> VersionSeries:
    """Coerce estimator input into a version series.

    Accepts a VersionSeries, a non-empty sequence of CallGraph, or a
    manifest path.
    """
    if isinstance(X, VersionSeries):
        return X
    if isinstance(X, (str, Path)):
        return load_series(X)
    if isinstance(X, Sequence) and X and all(isinstance(g, CallGraph) for g in X):
        return VersionSeries("series", X)
    raise TypeError(
        "X must be a VersionSeries, a sequence of CallGraph, or a manifest "
        f"path; got {type(X).__name__}"
    )


def _mine_one(
    cg: CallGraph,
    scheme: str,
    min_support: float,
    min_confidence: float,
    max_itemset: int | None,
) -> rules.VersionRules:
    return rules.mine_version_rules(
        cg,
        scheme=scheme,
        min_support=min_support,
        min_confidence=min_confidence,
        max_size=max_itemset,
    )


def _census_one(cg: CallGraph, sizes: tuple[int, ...]) -> dict[int, dict[int, int]]:
    n, arcs = graphlets._graph_arcs(cg)
    graph = graphlets._IndexedGraph(n, arcs)
    return {size: graphlets._census(graph, size) for size in sizes}


def _null_one(
    cg: CallGraph,
    sizes: tuple[int, ...],
    master_seed: int,
    null_samples: int,
    swaps_per_edge: int,
) -> dict[int, dict[int, tuple[float, float]]]:
    return graphlets.null_census_stats(
        cg,
        sizes,
        master_seed=master_seed,
        null_samples=null_samples,
        swaps_per_edge=swaps_per_edge,
    )


def _parallel(n_jobs: int | None) -> Parallel:
    return Parallel(n_jobs=1 if n_jobs is None else n_jobs)


class StableRuleMiner(BaseEstimator):
    """Mine stable evolution rules from a call-graph version series.

    Parameters mirror the mining thresholds: ``min_support`` and
    ``min_confidence`` are interestingness cutoffs per version,
    ``min_stab_count``/``min_stab_frac`` set the stability threshold
    (mutually exclusive; half the series when neither is given), and
    ``scheme`` picks the transaction flattening.
    """

    def __init__(
        self,
        scheme: str = "caller",
        min_support: float = rules.DEFAULT_MIN_SUPPORT,
        min_confidence: float = rules.DEFAULT_MIN_CONFIDENCE,
        min_stab_count: int | None = None,
        min_stab_frac: float | None = None,
        max_itemset: int | None = rules.DEFAULT_MAX_ITEMSET,
        n_jobs: int | None = None,
    ):
        self.scheme = scheme
        self.min_support = min_support
        self.min_confidence = min_confidence
        self.min_stab_count = min_stab_count
        self.min_stab_frac = min_stab_frac
        self.max_itemset = max_itemset
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        series = as_version_series(X)
        scheme = rules.check_scheme(self.scheme)
        min_support = rules.check_fraction(self.min_support, "min support")
        min_confidence = rules.check_fraction(self.min_confidence, "min confidence")
        max_itemset = rules.check_max_itemset(self.max_itemset)
        resolved = evolution.resolve_min_stab(
            len(series), count=self.min_stab_count, frac=self.min_stab_frac
        )

        per_version = _parallel(self.n_jobs)(
            delayed(_mine_one)(cg, scheme, min_support, min_confidence, max_itemset)
            for cg in series
        )

        self.system_label_ = series.system_label
        self.version_labels_ = series.version_labels
        self.n_versions_ = len(series)
        self.min_stab_count_ = resolved
        self.per_version_ = tuple(per_version)
        self.empty_database_versions_ = tuple(
            vr.version_label for vr in per_version if vr.empty_database
        )
        self.distinct_rules_ = evolution.aggregate_evolution_rules(per_version)
        self.stable_ = evolution.filter_stable(
            self.distinct_rules_,
            resolved,
            min_support=min_support,
            min_confidence=min_confidence,
        )
        self.summary_ = evolution.count_summary(
            per_version, self.distinct_rules_, self.stable_
        )
        self.transitivity_ = evolution.build_transitivity_graph(self.stable_)
        self.lattice_ = evolution.build_lattice(self.stable_)
        return self

    def stable_rules(self) -> tuple[evolution.EvolutionRule, ...]:
        check_is_fitted(self, "stable_")
        return self.stable_.rules


class GraphletCensus(BaseEstimator):
    """Exact per-version graphlet census with optional motif selection."""

    def __init__(self, sizes: Iterable[int] = (2, 3, 4), n_jobs: int | None = None):
        self.sizes = sizes
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        series = as_version_series(X)
        sizes = graphlets.check_sizes(self.sizes)
        per_version = _parallel(self.n_jobs)(
            delayed(_census_one)(cg, sizes) for cg in series
        )
        censuses = {
            size: [columns[size] for columns in per_version] for size in sizes
        }
        self.series_ = series
        self.sizes_ = sizes
        self.version_labels_ = series.version_labels
        self.frequency_table_ = graphlets.build_frequency_table(
            series.version_labels, sizes, censuses
        )
        self.catalogs_ = {size: graphlets.generate_catalog(size) for size in sizes}
        return self

    def detect_motifs(
        self,
        criterion: graphlets.MotifCriterion | None = None,
        *,
        master_seed: int = 0,
    ) -> graphlets.MotifReport:
        check_is_fitted(self, "frequency_table_")
        if criterion is None:
            criterion = graphlets.MotifCriterion()
        criterion = criterion.validate()
        null_stats = None
        if criterion.z_min is not None:
            candidate_sizes = tuple(
                sorted(
                    {
                        entry.graphlet.size
                        for entry in self.frequency_table_.series
                        if entry.mean_rel_freq >= criterion.min_mean_freq_percent
                    }
                )
            ) or self.sizes_
            null_stats = _parallel(self.n_jobs)(
                delayed(_null_one)(
                    cg,
                    candidate_sizes,
                    master_seed,
                    criterion.null_samples,
                    criterion.swaps_per_edge,
                )
                for cg in self.series_
            )
        return graphlets.detect_motifs(
            self.frequency_table_,
            criterion,
            self.series_,
            master_seed=master_seed,
            null_stats=null_stats,
        )


class ComplexityProfiler(BaseEstimator):
    """Per-version call-graph complexity and its series aggregate."""

    def __init__(
        self,
        sizes: Iterable[int] = (2, 3, 4),
        weights: str = "relative",
        n_jobs: int | None = None,
    ):
        self.sizes = sizes
        self.weights = weights
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        if self.weights not in WEIGHT_MODES:
            raise InvalidParamsError(
                f"weights must be one of {WEIGHT_MODES}, got {self.weights!r}"
            )
        census = GraphletCensus(sizes=self.sizes, n_jobs=self.n_jobs).fit(X)
        self.frequency_table_ = census.frequency_table_
        self.report_: ComplexityReport = compute_complexity(
            self.frequency_table_, self.weights
        )
        self.version_labels_ = self.report_.version_labels
        self.per_version_ = self.report_.per_version
        self.ecg_cx_ = self.report_.ecg_cx
        return self
