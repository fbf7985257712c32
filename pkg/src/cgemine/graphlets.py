"""Directed graphlet census: catalog, exact enumeration, motif selection.

A graphlet class is a weakly-connected directed-graph isomorphism class on
2, 3 or 4 unlabeled nodes (no self-loops; the two arc directions between a
node pair are independent). Identity is the canonical code: the size x size
adjacency matrix read row-major as a bit string, minimized over all node
permutations. Because the code is read as a binary integer, integer order
equals lexicographic string order, so catalogs sort by the integer.

Enumeration is the exact ESU scheme: grow connected node subsets from each
root using only higher-numbered nodes and exclusive neighbourhoods, so each
connected induced subgraph on k distinct nodes is visited exactly once
(node-subset semantics; connectivity judged on the underlying undirected
graph). Classification looks the induced adjacency mask up in a
precomputed mask -> class table covering every possible mask, so no
canonicalization happens in the hot loop.

The motif null model rewires graphs by degree-preserving directed edge
swaps; sample seeds derive from the master seed by hashing, never from
process-dependent state, so reports are reproducible at any worker count.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from .errors import InvalidThresholdError, UnsupportedSizeError
from .model import CallGraph, VersionSeries

SUPPORTED_SIZES = (2, 3, 4)

DEFAULT_MOTIF_THRESHOLD = 10.0
DEFAULT_NULL_SAMPLES = 50
DEFAULT_SWAPS_PER_EDGE = 10


def check_sizes(sizes: Iterable[int]) -> tuple[int, ...]:
    """Validate and sort a graphlet-size selection."""
    out = tuple(sorted(set(sizes)))
    if not out:
        raise UnsupportedSizeError("at least one graphlet size is required")
    for size in out:
        if size not in SUPPORTED_SIZES:
            raise UnsupportedSizeError(
                f"graphlet size must be one of {SUPPORTED_SIZES}, got {size!r}"
            )
    return out


@dataclass(frozen=True)
class GraphletClass:
    """One isomorphism class, identified by its canonical adjacency code."""

    size: int
    class_id: int
    canonical_code: str
    edge_list: tuple[tuple[int, int], ...]

    @property
    def edge_count(self) -> int:
        return len(self.edge_list)


def _mask_edges(mask: int, size: int) -> tuple[tuple[int, int], ...]:
    """Decode a row-major adjacency mask into sorted (i, j) arcs."""
    bits = size * size
    return tuple(
        (i, j)
        for i in range(size)
        for j in range(size)
        if i != j and mask >> (bits - 1 - (i * size + j)) & 1
    )


def _connected(mask: int, size: int) -> bool:
    """Weak connectivity of the mask's underlying undirected graph."""
    bits = size * size
    neighbours = [set() for _ in range(size)]
    for i in range(size):
        for j in range(size):
            if i != j and mask >> (bits - 1 - (i * size + j)) & 1:
                neighbours[i].add(j)
                neighbours[j].add(i)
    seen = {0}
    frontier = [0]
    while frontier:
        node = frontier.pop()
        for nxt in neighbours[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == size


def _canonical_int(mask: int, size: int) -> int:
    bits = size * size
    arcs = _mask_edges(mask, size)
    best = None
    for perm in permutations(range(size)):
        candidate = 0
        for i, j in arcs:
            candidate |= 1 << (bits - 1 - (perm[i] * size + perm[j]))
        if best is None or candidate < best:
            best = candidate
    return best if best is not None else 0


@lru_cache(maxsize=None)
def _catalog_and_classifier(
    size: int,
) -> tuple[tuple[GraphletClass, ...], dict[int, int]]:
    """Build the catalog and the exhaustive mask -> class_id table.

    Every possible off-diagonal mask (2^(k(k-1)) of them, at most 4096 for
    k=4) is canonicalized once here; enumeration then classifies induced
    subgraphs with a single dict lookup.
    """
    bits = size * size
    cells = [
        bits - 1 - (i * size + j)
        for i in range(size)
        for j in range(size)
        if i != j
    ]
    canonical_by_mask: dict[int, int] = {}
    for selector in range(1 << len(cells)):
        mask = 0
        for position, shift in enumerate(cells):
            if selector >> position & 1:
                mask |= 1 << shift
        if _connected(mask, size):
            canonical_by_mask[mask] = _canonical_int(mask, size)

    ordered = sorted(set(canonical_by_mask.values()))
    id_of = {canonical: idx for idx, canonical in enumerate(ordered)}
    catalog = tuple(
        GraphletClass(
            size=size,
            class_id=idx,
            canonical_code=format(canonical, f"0{bits}b"),
            edge_list=_mask_edges(canonical, size),
        )
        for idx, canonical in enumerate(ordered)
    )
    classifier = {mask: id_of[canonical] for mask, canonical in canonical_by_mask.items()}
    return catalog, classifier


def generate_catalog(size: int) -> tuple[GraphletClass, ...]:
    """All connected classes of one size, ordered by canonical code."""
    (size,) = check_sizes((size,))
    return _catalog_and_classifier(size)[0]


def classify_mask(mask: int, size: int) -> int:
    """class_id of a connected induced-subgraph adjacency mask."""
    return _catalog_and_classifier(size)[1][mask]


# ---------------------------------------------------------------------------
# exact enumeration (ESU)
# ---------------------------------------------------------------------------


class _IndexedGraph:
    """Integer-indexed adjacency built once per (graph, census) run."""

    __slots__ = ("n", "out_adj", "und_adj")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]]):
        self.n = n
        self.out_adj: list[set[int]] = [set() for _ in range(n)]
        und: list[set[int]] = [set() for _ in range(n)]
        for a, b in arcs:
            self.out_adj[a].add(b)
            und[a].add(b)
            und[b].add(a)
        self.und_adj: list[tuple[int, ...]] = [tuple(sorted(s)) for s in und]


def _graph_arcs(cg: CallGraph) -> tuple[int, list[tuple[int, int]]]:
    names = cg.procedure_names
    index = {name: i for i, name in enumerate(names)}
    # Sorted: call_pairs is a frozenset whose iteration order varies across
    # processes, and the null model's swap trajectory depends on arc order.
    arcs = sorted((index[p.caller], index[p.callee]) for p in cg.call_pairs)
    return len(names), arcs


def _census(graph: _IndexedGraph, size: int) -> dict[int, int]:
    classifier = _catalog_and_classifier(size)[1]
    bits = size * size
    out_adj = graph.out_adj
    und_adj = graph.und_adj
    counts: dict[int, int] = {}

    def classify(nodes: tuple[int, ...]):
        mask = 0
        for i, a in enumerate(nodes):
            row = out_adj[a]
            base = bits - 1 - i * size
            for j, b in enumerate(nodes):
                if b in row:
                    mask |= 1 << (base - j)
        class_id = classifier[mask]
        counts[class_id] = counts.get(class_id, 0) + 1

    def extend(sub: tuple[int, ...], extension: list[int], root: int, blocked: set[int]):
        # blocked = sub plus every neighbour of sub: candidates in it are
        # either taken or already reachable, so adding them again would
        # revisit the same subset from another branch.
        if len(sub) + 1 == size:
            for w in extension:
                classify(sub + (w,))
            return
        while extension:
            w = extension.pop()
            fresh = [u for u in und_adj[w] if u > root and u not in blocked]
            extend(sub + (w,), extension + fresh, root, blocked | set(fresh) | {w})

    if size == 1:
        return {0: graph.n}
    for root in range(graph.n):
        extension = [u for u in und_adj[root] if u > root]
        if extension:
            extend((root,), extension, root, set(extension) | {root})
    return counts


def enumerate_graphlets(cg: CallGraph, size: int) -> dict[int, int]:
    """Count every connected induced size-k subgraph once, by class_id."""
    (size,) = check_sizes((size,))
    n, arcs = _graph_arcs(cg)
    return _census(_IndexedGraph(n, arcs), size)


# ---------------------------------------------------------------------------
# frequency series over a version series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphletFrequencySeries:
    """Counts and relative frequencies of one class across all versions."""

    graphlet: GraphletClass
    counts: tuple[int, ...]
    rel_freq_percent: tuple[float, ...]

    @property
    def mean_rel_freq(self) -> float:
        return sum(self.rel_freq_percent) / len(self.rel_freq_percent)


@dataclass(frozen=True)
class FrequencyTable:
    """Per-class frequency series, plus which (size, version) were empty.

    Only classes observed somewhere in the series appear; a class absent
    from a version contributes count 0 there. ``degenerate`` lists
    (size, version_label) pairs with no size-k occurrence at all; their
    relative frequencies are recorded as 0.
    """

    version_labels: tuple[str, ...]
    sizes: tuple[int, ...]
    series: tuple[GraphletFrequencySeries, ...]
    degenerate: tuple[tuple[int, str], ...]

    def totals(self, size: int) -> tuple[int, ...]:
        cols = [0] * len(self.version_labels)
        for entry in self.series:
            if entry.graphlet.size == size:
                for pos, count in enumerate(entry.counts):
                    cols[pos] += count
        return tuple(cols)

    def by_size(self, size: int) -> tuple[GraphletFrequencySeries, ...]:
        return tuple(e for e in self.series if e.graphlet.size == size)


def build_frequency_table(
    version_labels: Sequence[str],
    sizes: Iterable[int],
    censuses: Mapping[int, Sequence[Mapping[int, int]]],
) -> FrequencyTable:
    """Assemble a frequency table from per-size, per-version class counts.

    ``censuses[size][v]`` is the class_id -> count map of version ``v``;
    the split lets per-version counting run in parallel elsewhere.
    """
    sizes = check_sizes(sizes)
    labels = tuple(version_labels)
    series = []
    degenerate = []
    for size in sizes:
        catalog = generate_catalog(size)
        per_version = censuses[size]
        if len(per_version) != len(labels):
            raise ValueError("census column count must match version count")
        totals = [sum(counts.values()) for counts in per_version]
        for pos, total in enumerate(totals):
            if total == 0:
                degenerate.append((size, labels[pos]))
        observed = sorted({cid for counts in per_version for cid in counts})
        for cid in observed:
            row = tuple(counts.get(cid, 0) for counts in per_version)
            freqs = tuple(
                (100.0 * c / t) if t else 0.0 for c, t in zip(row, totals)
            )
            series.append(GraphletFrequencySeries(catalog[cid], row, freqs))
    return FrequencyTable(labels, sizes, tuple(series), tuple(degenerate))


def frequency_series(series: VersionSeries, sizes: Iterable[int]) -> FrequencyTable:
    """Single-threaded census of every version at every requested size."""
    sizes = check_sizes(sizes)
    graphs = []
    for cg in series:
        n, arcs = _graph_arcs(cg)
        graphs.append(_IndexedGraph(n, arcs))
    censuses = {
        size: [_census(graph, size) for graph in graphs] for size in sizes
    }
    return build_frequency_table(series.version_labels, sizes, censuses)


# ---------------------------------------------------------------------------
# degree-preserving null model and motif selection
# ---------------------------------------------------------------------------


def derive_seed(master_seed: int, *scope: object) -> int:
    """Stable per-task seed: hash of the master seed and a scope path.

    Built-in ``hash()`` is process-salted for strings, so seeds go through
    sha256 to stay identical across processes and worker counts.
    """
    text = ":".join([str(master_seed), *map(str, scope)])
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def randomize_preserving_degrees(
    n: int,
    arcs: Sequence[tuple[int, int]],
    rng: random.Random,
    swaps_per_edge: int = DEFAULT_SWAPS_PER_EDGE,
) -> list[tuple[int, int]]:
    """Rewire arcs by random double-edge swaps; degree sequences are kept.

    Each attempt picks arcs (a, b) and (c, d) and proposes (a, d), (c, b),
    rejected when it would create a self-loop or a duplicate arc. In- and
    out-degrees are preserved exactly by construction.
    """
    edges = list(arcs)
    if len(edges) < 2:
        return edges
    present = set(edges)
    attempts = swaps_per_edge * len(edges)
    for _ in range(attempts):
        first = rng.randrange(len(edges))
        second = rng.randrange(len(edges))
        if first == second:
            continue
        a, b = edges[first]
        c, d = edges[second]
        if a == d or c == b:
            continue
        new_one, new_two = (a, d), (c, b)
        if new_one in present or new_two in present:
            continue
        present.discard((a, b))
        present.discard((c, d))
        present.add(new_one)
        present.add(new_two)
        edges[first] = new_one
        edges[second] = new_two
    return edges


@dataclass(frozen=True)
class MotifCriterion:
    """Thresholds governing motif selection."""

    min_mean_freq_percent: float = DEFAULT_MOTIF_THRESHOLD
    z_min: float | None = None
    null_samples: int = DEFAULT_NULL_SAMPLES
    swaps_per_edge: int = DEFAULT_SWAPS_PER_EDGE

    def validate(self) -> "MotifCriterion":
        if not 0.0 < self.min_mean_freq_percent <= 100.0:
            raise InvalidThresholdError(
                "motif frequency threshold must be in (0, 100], got "
                f"{self.min_mean_freq_percent}"
            )
        if self.z_min is not None and self.null_samples < 20:
            raise InvalidThresholdError(
                "z-score filtering needs at least 20 null samples, got "
                f"{self.null_samples}"
            )
        if self.null_samples < 1:
            raise InvalidThresholdError("null sample count must be >= 1")
        if self.swaps_per_edge < 1:
            raise InvalidThresholdError("swaps per edge must be >= 1")
        return self


@dataclass(frozen=True)
class MotifEntry:
    """One selected motif with its evidence."""

    graphlet: GraphletClass
    mean_rel_freq: float
    z_score: float | None = None
    z_per_version: tuple[float | None, ...] = ()
    degenerate_null: bool = False


@dataclass(frozen=True)
class MotifReport:
    criterion: MotifCriterion
    version_labels: tuple[str, ...]
    motifs: tuple[MotifEntry, ...]
    null_samples_used: int = 0
    candidates_rejected_by_z: tuple[int, ...] = field(default_factory=tuple)


def null_census_stats(
    cg: CallGraph,
    sizes: Iterable[int],
    *,
    master_seed: int,
    null_samples: int,
    swaps_per_edge: int,
) -> dict[int, dict[int, tuple[float, float]]]:
    """Null-model count mean/stddev per class for one version.

    Returns ``{size: {class_id: (mean, stddev)}}`` over ``null_samples``
    degree-preserving rewirings; stddev is the population form. Sample
    seeds derive from (master seed, version label, sample index), so the
    result is independent of scheduling.
    """
    sizes = check_sizes(sizes)
    n, arcs = _graph_arcs(cg)
    sums: dict[int, dict[int, float]] = {size: {} for size in sizes}
    sq_sums: dict[int, dict[int, float]] = {size: {} for size in sizes}
    seen: dict[int, set[int]] = {size: set() for size in sizes}
    for sample in range(null_samples):
        rng = random.Random(derive_seed(master_seed, cg.version_label, sample))
        rewired = randomize_preserving_degrees(n, arcs, rng, swaps_per_edge)
        graph = _IndexedGraph(n, rewired)
        for size in sizes:
            for cid, count in _census(graph, size).items():
                seen[size].add(cid)
                sums[size][cid] = sums[size].get(cid, 0.0) + count
                sq_sums[size][cid] = sq_sums[size].get(cid, 0.0) + count * count
    stats: dict[int, dict[int, tuple[float, float]]] = {}
    for size in sizes:
        per_class = {}
        for cid in seen[size]:
            mean = sums[size][cid] / null_samples
            variance = max(0.0, sq_sums[size][cid] / null_samples - mean * mean)
            per_class[cid] = (mean, variance**0.5)
        stats[size] = per_class
    return stats


def detect_motifs(
    freqs: FrequencyTable,
    criterion: MotifCriterion,
    series: VersionSeries | None = None,
    *,
    master_seed: int = 0,
    null_stats: Sequence[Mapping[int, Mapping[int, tuple[float, float]]]] | None = None,
) -> MotifReport:
    """Select motif classes from a frequency table.

    The frequency criterion always applies. With ``z_min`` set, each
    candidate must additionally reach ``z = (observed - null mean) / null
    stddev >= z_min`` in a majority of the versions where the null model
    is non-degenerate (stddev > 0); candidates degenerate in every version
    are kept on frequency alone and flagged. Precomputed ``null_stats``
    (one entry per version) take precedence over recomputing here, letting
    callers parallelize the expensive part.
    """
    criterion = criterion.validate()
    candidates = [
        entry
        for entry in freqs.series
        if entry.mean_rel_freq >= criterion.min_mean_freq_percent
    ]
    candidates.sort(key=lambda e: (-e.mean_rel_freq, e.graphlet.size, e.graphlet.class_id))

    if criterion.z_min is None:
        motifs = tuple(
            MotifEntry(entry.graphlet, entry.mean_rel_freq) for entry in candidates
        )
        return MotifReport(criterion, freqs.version_labels, motifs)

    if null_stats is None:
        if series is None:
            raise ValueError("z-score filtering needs the version series")
        if tuple(series.version_labels) != tuple(freqs.version_labels):
            raise ValueError("series does not match the frequency table")
        sizes = tuple(sorted({e.graphlet.size for e in candidates})) or freqs.sizes
        null_stats = [
            null_census_stats(
                cg,
                sizes,
                master_seed=master_seed,
                null_samples=criterion.null_samples,
                swaps_per_edge=criterion.swaps_per_edge,
            )
            for cg in series
        ]

    motifs = []
    rejected = []
    for entry in candidates:
        size = entry.graphlet.size
        cid = entry.graphlet.class_id
        z_values: list[float | None] = []
        for pos in range(len(freqs.version_labels)):
            mean, std = null_stats[pos].get(size, {}).get(cid, (0.0, 0.0))
            if std > 0.0:
                z_values.append((entry.counts[pos] - mean) / std)
            else:
                z_values.append(None)
        valid = [z for z in z_values if z is not None]
        if not valid:
            motifs.append(
                MotifEntry(
                    entry.graphlet,
                    entry.mean_rel_freq,
                    z_score=None,
                    z_per_version=tuple(z_values),
                    degenerate_null=True,
                )
            )
            continue
        passing = sum(1 for z in valid if z >= criterion.z_min)
        if passing * 2 > len(valid):
            motifs.append(
                MotifEntry(
                    entry.graphlet,
                    entry.mean_rel_freq,
                    z_score=sum(valid) / len(valid),
                    z_per_version=tuple(z_values),
                )
            )
        else:
            rejected.append(cid)
    return MotifReport(
        criterion,
        freqs.version_labels,
        tuple(motifs),
        null_samples_used=criterion.null_samples,
        candidates_rejected_by_z=tuple(rejected),
    )
