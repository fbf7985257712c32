"""Cross-version rule aggregation, stability filtering, and rule structure.

Per-version rules sharing a canonical key (sorted antecedent, sorted
consequent) merge into one evolution rule whose stability is the number of
versions where it was interesting. Rules meeting the resolved stability
threshold form the stable set, from which two derived structures are built:

* a transitivity digraph over procedures: every stable rule with a
  single-procedure antecedent ``{x} => Y`` contributes the arcs ``x -> y``
  for each ``y`` in ``Y``; its strongly connected components and maximal
  chains (source-to-sink paths of the condensation) are reported;
* an inclusion lattice: the Hasse diagram of all rule itemsets ``X | Y``
  plus their antecedents, with edges for covering set inclusions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Iterable, Sequence

from .errors import InvalidThresholdError
from .rules import VersionRules

RuleKey = tuple[tuple[str, ...], tuple[str, ...]]


@dataclass(frozen=True)
class EvolutionRule:
    """One distinct rule with the per-version record of where it held."""

    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    versions: tuple[str, ...]
    supports: tuple[float, ...]
    confidences: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.versions) == len(self.supports) == len(self.confidences)):
            raise ValueError("versions, supports and confidences must align")
        if not self.versions:
            raise ValueError("an evolution rule must hold in at least one version")

    @property
    def key(self) -> RuleKey:
        return (self.antecedent, self.consequent)

    @property
    def stability(self) -> int:
        return len(self.versions)

    @property
    def mean_support(self) -> float:
        return sum(self.supports) / len(self.supports)

    @property
    def mean_confidence(self) -> float:
        return sum(self.confidences) / len(self.confidences)


def report_order(rule: EvolutionRule):
    """Deterministic report ordering: stability, then mean support, then key."""
    return (-rule.stability, -rule.mean_support, rule.key)


@dataclass(frozen=True)
class StableRuleSet:
    """Rules whose stability met the resolved threshold, report-ordered."""

    rules: tuple[EvolutionRule, ...]
    min_support: float
    min_confidence: float
    min_stab_count: int

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def aggregate_evolution_rules(
    per_version: Sequence[VersionRules],
) -> tuple[EvolutionRule, ...]:
    """Merge per-version rules by canonical key, preserving series order."""
    labels = [vr.version_label for vr in per_version]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate version labels: {labels}")
    merged: dict[RuleKey, list[tuple[str, float, float]]] = {}
    for vr in per_version:
        for rule in vr.rules:
            merged.setdefault(rule.key, []).append(
                (vr.version_label, rule.support, rule.confidence)
            )
    rules = [
        EvolutionRule(
            antecedent=key[0],
            consequent=key[1],
            versions=tuple(v for v, _, _ in entries),
            supports=tuple(s for _, s, _ in entries),
            confidences=tuple(c for _, _, c in entries),
        )
        for key, entries in merged.items()
    ]
    rules.sort(key=report_order)
    return tuple(rules)


def resolve_min_stab(
    series_length: int,
    *,
    count: int | None = None,
    frac: float | None = None,
) -> int:
    """Resolve the stability threshold to an absolute version count.

    Exactly one of ``count`` and ``frac`` may be given; with neither, a
    0.5 fraction applies. Fractions resolve as ceil(frac x length), with a
    tiny backoff so binary-float overshoot (e.g. 0.7 x 10 -> 7.000...01)
    cannot bump the ceiling.
    """
    if count is not None and frac is not None:
        raise InvalidThresholdError(
            "give the stability threshold as a count or a fraction, not both"
        )
    if series_length < 1:
        raise InvalidThresholdError("series length must be >= 1")
    if count is not None:
        if not isinstance(count, int) or isinstance(count, bool):
            raise InvalidThresholdError(f"stability count must be an int, got {count!r}")
        if not 1 <= count <= series_length:
            raise InvalidThresholdError(
                f"stability count must be in 1..{series_length}, got {count}"
            )
        return count
    if frac is None:
        frac = 0.5
    try:
        frac = float(frac)
    except (TypeError, ValueError):
        raise InvalidThresholdError(f"stability fraction must be a number, got {frac!r}")
    if not 0.0 < frac <= 1.0:
        raise InvalidThresholdError(f"stability fraction must be in (0, 1], got {frac}")
    return max(1, ceil(frac * series_length - 1e-9))


def filter_stable(
    rules: Iterable[EvolutionRule],
    min_stab_count: int,
    *,
    min_support: float,
    min_confidence: float,
) -> StableRuleSet:
    """Keep exactly the rules with stability >= the resolved count."""
    kept = tuple(
        sorted(
            (rule for rule in rules if rule.stability >= min_stab_count),
            key=report_order,
        )
    )
    return StableRuleSet(kept, min_support, min_confidence, min_stab_count)


@dataclass(frozen=True)
class CountSummary:
    """Rule-count comparison: per version and for the whole series.

    For each version the triple is (rule occurrences, distinct keys,
    stable keys interesting there); overall, occurrences sum while
    distinct/stable count unique keys. stable <= distinct <= total holds
    throughout.
    """

    per_version: tuple[tuple[str, int, int, int], ...]
    total_occurrences: int
    distinct_count: int
    stable_count: int


def count_summary(
    per_version: Sequence[VersionRules],
    distinct: Sequence[EvolutionRule],
    stable: StableRuleSet,
) -> CountSummary:
    stable_keys = {rule.key for rule in stable}
    rows = []
    for vr in per_version:
        keys = [rule.key for rule in vr.rules]
        stable_here = sum(1 for key in keys if key in stable_keys)
        rows.append((vr.version_label, len(keys), len(set(keys)), stable_here))
    return CountSummary(
        per_version=tuple(rows),
        total_occurrences=sum(len(vr.rules) for vr in per_version),
        distinct_count=len(distinct),
        stable_count=len(stable.rules),
    )


# ---------------------------------------------------------------------------
# transitivity digraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitivityGraph:
    """Digraph induced by singleton-antecedent stable rules.

    ``components`` lists every strongly connected component (members
    sorted, components sorted by members). ``chains`` are the maximal
    transitive chains: all source-to-sink paths of the condensation DAG,
    each chain a tuple of components.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    components: tuple[tuple[str, ...], ...]
    chains: tuple[tuple[tuple[str, ...], ...], ...]

    @property
    def is_empty(self) -> bool:
        return not self.nodes


def _strongly_connected(
    nodes: Sequence[str], adjacency: dict[str, tuple[str, ...]]
) -> list[tuple[str, ...]]:
    """Tarjan with an explicit stack (no recursion-depth ceiling)."""
    order: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[tuple[str, ...]] = []
    counter = 0

    for root in nodes:
        if root in order:
            continue
        work: list[list] = [[root, 0]]
        while work:
            frame = work[-1]
            node, edge_pos = frame
            if edge_pos == 0:
                order[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            successors = adjacency.get(node, ())
            descended = False
            for pos in range(edge_pos, len(successors)):
                succ = successors[pos]
                if succ not in order:
                    frame[1] = pos + 1
                    work.append([succ, 0])
                    descended = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], order[succ])
            if descended:
                continue
            frame[1] = len(successors)
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == order[node]:
                members = []
                while True:
                    leaf = stack.pop()
                    on_stack.discard(leaf)
                    members.append(leaf)
                    if leaf == node:
                        break
                components.append(tuple(sorted(members)))
    return components


def build_transitivity_graph(stable: StableRuleSet) -> TransitivityGraph:
    edges: set[tuple[str, str]] = set()
    nodes: set[str] = set()
    for rule in stable.rules:
        if len(rule.antecedent) != 1:
            continue
        source = rule.antecedent[0]
        nodes.add(source)
        for target in rule.consequent:
            nodes.add(target)
            if target != source:
                edges.add((source, target))

    sorted_nodes = tuple(sorted(nodes))
    sorted_edges = tuple(sorted(edges))
    adjacency: dict[str, tuple[str, ...]] = {}
    for source, target in sorted_edges:
        adjacency.setdefault(source, ())
        adjacency[source] = adjacency[source] + (target,)

    components = sorted(_strongly_connected(sorted_nodes, adjacency))

    # Condensation DAG over component indices, then every maximal chain.
    component_of = {
        member: idx for idx, comp in enumerate(components) for member in comp
    }
    cond_edges: dict[int, set[int]] = {idx: set() for idx in range(len(components))}
    indegree = {idx: 0 for idx in range(len(components))}
    for source, target in sorted_edges:
        a, b = component_of[source], component_of[target]
        if a != b and b not in cond_edges[a]:
            cond_edges[a].add(b)
            indegree[b] += 1

    chains: list[tuple[tuple[str, ...], ...]] = []

    def extend(path: list[int]):
        successors = sorted(cond_edges[path[-1]])
        if not successors:
            chains.append(tuple(components[idx] for idx in path))
            return
        for nxt in successors:
            extend(path + [nxt])

    for idx in range(len(components)):
        if indegree[idx] == 0:
            extend([idx])
    chains.sort()

    return TransitivityGraph(sorted_nodes, sorted_edges, tuple(components), tuple(chains))


# ---------------------------------------------------------------------------
# inclusion lattice (Hasse diagram)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeGraph:
    """Hasse diagram of stable-rule itemsets ordered by set inclusion."""

    nodes: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]

    @property
    def is_empty(self) -> bool:
        return not self.nodes


def build_lattice(stable: StableRuleSet) -> LatticeGraph:
    itemsets: set[frozenset[str]] = set()
    for rule in stable.rules:
        itemsets.add(frozenset(rule.antecedent))
        itemsets.add(frozenset(rule.antecedent) | frozenset(rule.consequent))

    nodes = sorted(itemsets, key=lambda s: (len(s), tuple(sorted(s))))
    edges = []
    for a in nodes:
        for b in nodes:
            if not (len(a) < len(b) and a < b):
                continue
            covered = any(a < c < b for c in itemsets if len(a) < len(c) < len(b))
            if not covered:
                edges.append((tuple(sorted(a)), tuple(sorted(b))))
    edges.sort()
    return LatticeGraph(tuple(tuple(sorted(s)) for s in nodes), tuple(edges))
