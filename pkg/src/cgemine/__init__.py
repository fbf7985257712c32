"""Batch analytics over evolving call graphs.

Given a version series of procedure-call graphs, the package mines

* stable evolution rules: association rules over caller/callee
  transactions that stay interesting across enough versions, plus the
  transitivity and inclusion-lattice structure of the stable set;
* graphlet evolution: exact census of connected directed subgraphs of
  sizes 2-4 per version, motif selection against a degree-preserving null
  model, and frequency-weighted cyclomatic complexity per version and for
  the whole series.

The estimator facades (:class:`StableRuleMiner`, :class:`GraphletCensus`,
:class:`ComplexityProfiler`) follow sklearn conventions; the ``cgemine``
CLI drives the same pipelines from manifests to CSV/DOT reports.
"""

from .complexity import ComplexityReport, compute_complexity, cyclomatic_complexity
from .errors import (
    CgeMineError,
    ConflictingModuleError,
    EmptyGraphError,
    GraphSyntaxError,
    InvalidParamsError,
    InvalidThresholdError,
    ManifestError,
    MissingFileError,
    UnknownProcedureError,
    UnsupportedSizeError,
)
from .estimators import (
    ComplexityProfiler,
    GraphletCensus,
    StableRuleMiner,
    as_version_series,
)
from .evolution import (
    CountSummary,
    EvolutionRule,
    LatticeGraph,
    StableRuleSet,
    TransitivityGraph,
    aggregate_evolution_rules,
    build_lattice,
    build_transitivity_graph,
    count_summary,
    filter_stable,
    resolve_min_stab,
)
from .graphlets import (
    FrequencyTable,
    GraphletClass,
    GraphletFrequencySeries,
    MotifCriterion,
    MotifEntry,
    MotifReport,
    detect_motifs,
    enumerate_graphlets,
    frequency_series,
    generate_catalog,
    randomize_preserving_degrees,
)
from .io import (
    load_graph_file,
    load_manifest,
    load_series,
    parse_graph_file,
    serialize_graph,
    write_manifest,
)
from .model import (
    CallGraph,
    CallPair,
    GraphStats,
    Procedure,
    VersionSeries,
    graph_stats,
)
from .rules import (
    CallGraphRule,
    FrequentItemsets,
    TransactionDb,
    VersionRules,
    build_transactions,
    generate_rules,
    mine_frequent_itemsets,
    mine_version_rules,
)
from .synth import generate_series, write_series

__version__ = "1.0.0"

__all__ = [
    "CallGraph",
    "CallGraphRule",
    "CallPair",
    "CgeMineError",
    "ComplexityProfiler",
    "ComplexityReport",
    "ConflictingModuleError",
    "CountSummary",
    "EmptyGraphError",
    "EvolutionRule",
    "FrequencyTable",
    "FrequentItemsets",
    "GraphStats",
    "GraphSyntaxError",
    "GraphletCensus",
    "GraphletClass",
    "GraphletFrequencySeries",
    "InvalidParamsError",
    "InvalidThresholdError",
    "LatticeGraph",
    "ManifestError",
    "MissingFileError",
    "MotifCriterion",
    "MotifEntry",
    "MotifReport",
    "Procedure",
    "StableRuleMiner",
    "StableRuleSet",
    "TransactionDb",
    "TransitivityGraph",
    "UnknownProcedureError",
    "UnsupportedSizeError",
    "VersionRules",
    "VersionSeries",
    "aggregate_evolution_rules",
    "as_version_series",
    "build_lattice",
    "build_transactions",
    "build_transitivity_graph",
    "compute_complexity",
    "count_summary",
    "cyclomatic_complexity",
    "detect_motifs",
    "enumerate_graphlets",
    "filter_stable",
    "frequency_series",
    "generate_catalog",
    "generate_rules",
    "generate_series",
    "graph_stats",
    "load_graph_file",
    "load_manifest",
    "load_series",
    "mine_frequent_itemsets",
    "mine_version_rules",
    "parse_graph_file",
    "randomize_preserving_degrees",
    "resolve_min_stab",
    "serialize_graph",
    "write_manifest",
    "write_series",
]
