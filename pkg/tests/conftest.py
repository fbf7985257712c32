"""Shared fixtures: hand-built graphs and the accessor-cluster rule set."""

from __future__ import annotations

import pytest

from cgemine.evolution import EvolutionRule, StableRuleSet
from cgemine.model import CallGraph, VersionSeries


def make_graph(label: str, nodes: dict[str, str], edges) -> CallGraph:
    return CallGraph.build(label, nodes, edges)


@pytest.fixture
def tiny_graph() -> CallGraph:
    return make_graph(
        "V1",
        {"a": "m1", "b": "m1", "c": "m2", "d": "m2"},
        [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d")],
    )


@pytest.fixture
def tiny_series(tiny_graph) -> VersionSeries:
    second = make_graph(
        "V2",
        {"a": "m1", "b": "m1", "c": "m2", "d": "m2", "e": "m2"},
        [("a", "b"), ("a", "c"), ("b", "c"), ("d", "e")],
    )
    return VersionSeries("tiny", [tiny_graph, second])


def stable_set(rules: list[tuple[tuple[str, ...], tuple[str, ...]]]) -> StableRuleSet:
    """Wrap bare rule keys into a StableRuleSet with placeholder metrics."""
    built = tuple(
        EvolutionRule(
            antecedent=tuple(sorted(antecedent)),
            consequent=tuple(sorted(consequent)),
            versions=("V1",),
            supports=(0.5,),
            confidences=(1.0,),
        )
        for antecedent, consequent in rules
    )
    return StableRuleSet(built, 0.4, 0.8, 1)


@pytest.fixture
def accessor_rules() -> StableRuleSet:
    """The published 16-rule stable set over one key and three accessors.

    All antecedents are singletons, so the transitivity construction uses
    every rule; the three accessors call each other both ways while the
    key only fans out, giving one 3-node strongly connected component.
    """
    gid, aid, vid, key = "getGroupId", "getArtifactId", "getId", "getKey"
    return stable_set(
        [
            ((gid,), (aid,)),
            ((gid,), (aid, vid)),
            ((aid,), (gid,)),
            ((aid,), (gid, vid)),
            ((gid,), (vid,)),
            ((vid,), (gid,)),
            ((vid,), (gid, aid)),
            ((key,), (gid,)),
            ((key,), (gid, vid)),
            ((key,), (gid, aid)),
            ((key,), (gid, aid, vid)),
            ((aid,), (vid,)),
            ((vid,), (aid,)),
            ((key,), (aid,)),
            ((key,), (aid, vid)),
            ((key,), (vid,)),
        ]
    )
