"""Per-version association-rule mining over call-graph transactions.

A call graph is flattened into a transaction database under one of two
schemes:

* ``caller``: every procedure with at least one outgoing call contributes
  the transaction ``{procedure} | callees(procedure)``;
* ``module``: every module whose procedures make at least one call
  contributes ``{callers in module} | {their callees}``.

Procedures that neither call nor get called land in no transaction.
Frequent itemsets come from a level-wise Apriori search (downward closure
for candidate pruning) and rules from all two-block partitions of each
frequent itemset of size >= 2. Support and confidence are kept as exact
ratios of integer counts so repeated runs and independent oracles agree
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidThresholdError
from .model import CallGraph

SCHEMES = ("caller", "module")

#: Mining defaults; shared by the estimator facades and the CLI.
DEFAULT_MIN_SUPPORT = 0.4
DEFAULT_MIN_CONFIDENCE = 0.8
DEFAULT_MAX_ITEMSET = 4


def check_fraction(value: float, name: str) -> float:
    """Validate a (0, 1] threshold, returning it as ``float``."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InvalidThresholdError(f"{name} must be a number, got {value!r}")
    if not 0.0 < value <= 1.0:
        raise InvalidThresholdError(f"{name} must be in (0, 1], got {value}")
    return value


def check_scheme(scheme: str) -> str:
    if scheme not in SCHEMES:
        raise InvalidThresholdError(
            f"scheme must be one of {SCHEMES}, got {scheme!r}"
        )
    return scheme


def check_max_itemset(value: int | None) -> int | None:
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool) or value < 2:
        raise InvalidThresholdError(
            f"max itemset size must be an int >= 2 or None, got {value!r}"
        )
    return value


@dataclass(frozen=True)
class TransactionDb:
    """Itemised view of one call graph version.

    ``items`` is the sorted universe of item names; transactions hold
    indices into it. ``keys`` records which caller (or module) produced
    each transaction, aligned by position.
    """

    version_label: str
    scheme: str
    items: tuple[str, ...]
    transactions: tuple[frozenset[int], ...]
    keys: tuple[str, ...]

    def __len__(self):
        return len(self.transactions)

    def names(self, itemset: frozenset[int]) -> tuple[str, ...]:
        return tuple(sorted(self.items[i] for i in itemset))


@dataclass(frozen=True)
class CallGraphRule:
    """One association rule X => Y with its exact support counts."""

    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    support: float
    confidence: float
    rule_count: int
    antecedent_count: int
    total_transactions: int

    @property
    def key(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (self.antecedent, self.consequent)


@dataclass(frozen=True)
class FrequentItemsets:
    """Apriori output: per-itemset transaction counts at one version."""

    version_label: str
    scheme: str
    min_support: float
    total_transactions: int
    counts: dict[frozenset[str], int]

    @property
    def empty_database(self) -> bool:
        return self.total_transactions == 0

    def support(self, itemset: frozenset[str]) -> float:
        return self.counts[itemset] / self.total_transactions


@dataclass(frozen=True)
class VersionRules:
    """All rules of one version, canonically ordered."""

    version_label: str
    scheme: str
    total_transactions: int
    rules: tuple[CallGraphRule, ...]

    @property
    def empty_database(self) -> bool:
        return self.total_transactions == 0


def build_transactions(cg: CallGraph, scheme: str = "caller") -> TransactionDb:
    """Flatten one call graph into a transaction database."""
    check_scheme(scheme)
    callees: dict[str, set[str]] = {}
    for pair in cg.call_pairs:
        callees.setdefault(pair.caller, set()).add(pair.callee)

    raw: list[tuple[str, set[str]]] = []
    if scheme == "caller":
        for caller in sorted(callees):
            raw.append((caller, {caller} | callees[caller]))
    else:
        by_module: dict[str, set[str]] = {}
        for caller, targets in callees.items():
            module = cg.module_of(caller)
            by_module.setdefault(module, set()).update({caller} | targets)
        for module in sorted(by_module):
            raw.append((module, by_module[module]))

    items = tuple(sorted(set().union(*(members for _, members in raw)) if raw else ()))
    index = {name: i for i, name in enumerate(items)}
    transactions = tuple(
        frozenset(index[name] for name in members) for _, members in raw
    )
    keys = tuple(key for key, _ in raw)
    return TransactionDb(cg.version_label, scheme, items, transactions, keys)


def _singleton_counts(db: TransactionDb) -> dict[frozenset[int], int]:
    counts: dict[int, int] = {}
    for transaction in db.transactions:
        for item in transaction:
            counts[item] = counts.get(item, 0) + 1
    return {frozenset((item,)): count for item, count in counts.items()}


def _candidates(previous: list[frozenset[int]], size: int) -> list[frozenset[int]]:
    """Join step plus downward-closure pruning."""
    keyed: dict[tuple[int, ...], frozenset[int]] = {
        tuple(sorted(itemset)): itemset for itemset in previous
    }
    prior = set(previous)
    ordered = sorted(keyed)
    out = []
    for a_pos, a in enumerate(ordered):
        for b in ordered[a_pos + 1 :]:
            if a[: size - 2] != b[: size - 2]:
                break  # sorted prefixes diverge; later b's diverge too
            candidate = keyed[a] | keyed[b]
            if all(candidate - {item} in prior for item in candidate):
                out.append(candidate)
    return out


def mine_frequent_itemsets(
    db: TransactionDb,
    min_support: float = DEFAULT_MIN_SUPPORT,
    max_size: int | None = DEFAULT_MAX_ITEMSET,
) -> FrequentItemsets:
    """Level-wise Apriori over ``db``; sizes stop at ``max_size`` if set."""
    min_support = check_fraction(min_support, "min support")
    max_size = check_max_itemset(max_size)
    total = len(db.transactions)
    found: dict[frozenset[int], int] = {}
    if total:
        # An itemset is frequent iff count / total >= min_support; every
        # filter below compares that exact ratio, never a count-space
        # rescaling of the threshold, so binary-float edge cases cannot
        # flip a verdict relative to independent re-derivations.
        level = {
            s: c
            for s, c in _singleton_counts(db).items()
            if c / total >= min_support
        }
        size = 1
        while level:
            found.update(level)
            size += 1
            if max_size is not None and size > max_size:
                break
            candidates = _candidates(list(level), size)
            counted = _recount(db, candidates)
            level = {s: c for s, c in counted.items() if c / total >= min_support}

    named = {
        frozenset(db.items[i] for i in itemset): count
        for itemset, count in found.items()
    }
    return FrequentItemsets(db.version_label, db.scheme, min_support, total, named)


def _recount(
    db: TransactionDb, candidates: list[frozenset[int]]
) -> dict[frozenset[int], int]:
    counts = {candidate: 0 for candidate in candidates}
    if not counts:
        return counts
    for transaction in db.transactions:
        for candidate in candidates:
            if candidate <= transaction:
                counts[candidate] += 1
    return counts


def generate_rules(
    itemsets: FrequentItemsets,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
) -> VersionRules:
    """Emit X => Y for every two-block partition of each frequent itemset.

    Confidence is count(X | Y) / count(X); the antecedent count is always
    present thanks to downward closure.
    """
    min_confidence = check_fraction(min_confidence, "min confidence")
    total = itemsets.total_transactions
    rules = []
    for itemset, count in itemsets.counts.items():
        if len(itemset) < 2:
            continue
        members = sorted(itemset)
        for take in range(1, len(members)):
            for antecedent_names in combinations(members, take):
                antecedent = frozenset(antecedent_names)
                antecedent_count = itemsets.counts[antecedent]
                confidence = count / antecedent_count
                if confidence >= min_confidence:
                    consequent = tuple(sorted(itemset - antecedent))
                    rules.append(
                        CallGraphRule(
                            antecedent=tuple(antecedent_names),
                            consequent=consequent,
                            support=count / total,
                            confidence=confidence,
                            rule_count=count,
                            antecedent_count=antecedent_count,
                            total_transactions=total,
                        )
                    )
    rules.sort(key=lambda r: r.key)
    return VersionRules(itemsets.version_label, itemsets.scheme, total, tuple(rules))


def mine_version_rules(
    cg: CallGraph,
    *,
    scheme: str = "caller",
    min_support: float = DEFAULT_MIN_SUPPORT,
    min_confidence: float = DEFAULT_MIN_CONFIDENCE,
    max_size: int | None = DEFAULT_MAX_ITEMSET,
) -> VersionRules:
    """Transactions -> frequent itemsets -> rules for one version."""
    db = build_transactions(cg, scheme)
    itemsets = mine_frequent_itemsets(db, min_support, max_size)
    return generate_rules(itemsets, min_confidence)
