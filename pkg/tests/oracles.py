"""Independent reference implementations used to check the real ones.

Everything here is deliberately naive and written with different data
representations than the package (bitmask transaction databases, sorted
arc tuples instead of adjacency bit strings) so that agreement between
the two is meaningful evidence, not a shared bug.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

Arc = tuple[int, int]


# ---------------------------------------------------------------------------
# itemset mining oracle (bitmask subset enumeration)
# ---------------------------------------------------------------------------


def brute_force_itemsets(
    transactions: Sequence[Iterable[str]], min_support: float
) -> dict[frozenset[str], int]:
    """Count every frequent itemset by scanning all 2^m - 1 candidates."""
    universe = sorted({item for t in transactions for item in t})
    position = {item: i for i, item in enumerate(universe)}
    masks = [
        sum(1 << position[item] for item in set(t)) for t in transactions
    ]
    total = len(transactions)
    out: dict[frozenset[str], int] = {}
    for candidate in range(1, 1 << len(universe)):
        count = sum(1 for mask in masks if mask & candidate == candidate)
        if total and count / total >= min_support:
            items = frozenset(
                universe[i] for i in range(len(universe)) if candidate >> i & 1
            )
            out[items] = count
    return out


def brute_force_rules(
    transactions: Sequence[Iterable[str]],
    min_support: float,
    min_confidence: float,
) -> dict[tuple[tuple[str, ...], tuple[str, ...]], tuple[float, float]]:
    """All confident rules from the frequent itemsets, keyed canonically."""
    counts = brute_force_itemsets(transactions, min_support)
    total = len(transactions)
    rules = {}
    for itemset, count in counts.items():
        if len(itemset) < 2:
            continue
        members = sorted(itemset)
        for take in range(1, len(members)):
            for antecedent in combinations(members, take):
                confidence = count / counts[frozenset(antecedent)]
                if confidence >= min_confidence:
                    consequent = tuple(sorted(itemset - set(antecedent)))
                    rules[(antecedent, consequent)] = (count / total, confidence)
    return rules


# ---------------------------------------------------------------------------
# digraph isomorphism oracle (sorted arc tuples, not bit strings)
# ---------------------------------------------------------------------------


def canonical_arcs(arcs: Iterable[Arc], size: int) -> tuple[Arc, ...]:
    """Canonical form of a small digraph: minimum sorted arc tuple."""
    arcs = tuple(arcs)
    return min(
        tuple(sorted((perm[a], perm[b]) for a, b in arcs))
        for perm in permutations(range(size))
    )


def weakly_connected(arcs: Iterable[Arc], size: int) -> bool:
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in arcs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(size)}) == 1


def catalog_classes(size: int) -> set[tuple[Arc, ...]]:
    """Every weakly-connected digraph class on ``size`` unlabeled nodes."""
    possible = [(i, j) for i in range(size) for j in range(size) if i != j]
    classes = set()
    for selector in range(1 << len(possible)):
        arcs = tuple(
            possible[i] for i in range(len(possible)) if selector >> i & 1
        )
        if weakly_connected(arcs, size):
            classes.add(canonical_arcs(arcs, size))
    return classes


def naive_census(
    n: int, arcs: Iterable[Arc], size: int
) -> dict[tuple[Arc, ...], int]:
    """Count connected induced size-k subgraphs by trying all node subsets."""
    arc_set = set(arcs)
    counts: dict[tuple[Arc, ...], int] = {}
    for combo in combinations(range(n), size):
        induced = tuple(
            (i, j)
            for i, a in enumerate(combo)
            for j, b in enumerate(combo)
            if i != j and (a, b) in arc_set
        )
        if induced and weakly_connected(induced, size):
            key = canonical_arcs(induced, size)
            counts[key] = counts.get(key, 0) + 1
    return counts


def census_to_oracle_keys(
    class_counts: Mapping[int, int], catalog
) -> dict[tuple[Arc, ...], int]:
    """Re-key an implementation census by the oracle's canonical form."""
    return {
        canonical_arcs(catalog[class_id].edge_list, catalog[class_id].size): count
        for class_id, count in class_counts.items()
    }


# ---------------------------------------------------------------------------
# cycle rank oracle (spanning-forest construction over the multigraph)
# ---------------------------------------------------------------------------


def cycle_rank(arcs: Iterable[Arc], size: int) -> tuple[int, int]:
    """(independent cycles, components) of the underlying multigraph.

    Reciprocal arc pairs count as two parallel undirected edges; each edge
    beyond a spanning forest contributes one independent cycle.
    """
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rank = 0
    for a, b in arcs:
        ra, rb = find(a), find(b)
        if ra == rb:
            rank += 1
        else:
            parent[ra] = rb
    components = len({find(i) for i in range(size)})
    return rank, components


# ---------------------------------------------------------------------------
# random inputs shared by oracle-equivalence tests
# ---------------------------------------------------------------------------


def random_transactions(
    rng: random.Random, max_items: int = 12, max_transactions: int = 40
) -> list[frozenset[str]]:
    universe = [f"i{k:02d}" for k in range(rng.randint(2, max_items))]
    out = []
    for _ in range(rng.randint(1, max_transactions)):
        width = rng.randint(1, max(1, len(universe) // 2 + 1))
        out.append(frozenset(rng.sample(universe, min(width, len(universe)))))
    return out


def random_digraph(
    rng: random.Random, max_nodes: int = 30, avg_neighbours: float = 2.5
) -> tuple[int, list[Arc]]:
    n = rng.randint(4, max_nodes)
    target = max(1, round(avg_neighbours * n / 2))
    arcs: set[Arc] = set()
    attempts = 0
    while len(arcs) < target and attempts < 50 * target:
        attempts += 1
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            arcs.add((a, b))
    return n, sorted(arcs)
