"""Deterministic synthetic version series for demos and tests.

The first version is a sparse random digraph with average undirected
degree near 2.4 (edge count ~ 1.2 x nodes). Three designated hub
procedures act as pure callees, and a block of core callers each call all
three hubs; those core arcs never churn, so caller-scheme mining finds
rules like {caller-of-hubs} => {the other hubs} in every version, giving
demos a guaranteed stable set. The hub fan-in is capped so the size-4
subgraph census around hubs stays small even for large node counts.

Every later version deletes, rewires, and adds a churn fraction of the
peripheral (non-core) arcs, and appends ceil(churn x nodes) fresh
procedures, topping arcs back up to the target density. All randomness
flows from per-version seeds derived by hashing the master seed, so equal
parameters give byte-identical series.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

from .errors import InvalidParamsError
from .io import serialize_graph, write_manifest
from .model import CallGraph, CallPair, Procedure, VersionSeries
from .graphlets import derive_seed

HUB_COUNT = 3
#: Core-caller ceiling: keeps every hub's in-degree desk-scale so that
#: choose(fan-in, 3) subsets per hub stay cheap in the k=4 census.
MAX_CORE_CALLERS = 45
EDGES_PER_NODE = 1.2


def _proc_name(index: int) -> str:
    return f"p{index:04d}"


def _module_name(index: int, module_count: int) -> str:
    return f"mod{index % module_count:02d}"


def _sample_peripheral_arc(
    rng: random.Random,
    population: list[str],
    present: set[tuple[str, str]],
    attempts: int = 200,
) -> tuple[str, str] | None:
    if len(population) < 2:
        return None
    for _ in range(attempts):
        caller = population[rng.randrange(len(population))]
        callee = population[rng.randrange(len(population))]
        if caller != callee and (caller, callee) not in present:
            return (caller, callee)
    return None


def generate_series(
    nodes: int,
    versions: int,
    churn: float,
    seed: int,
    *,
    system_label: str | None = None,
) -> VersionSeries:
    """Build a deterministic synthetic series; see the module docstring."""
    if not isinstance(nodes, int) or nodes < 4:
        raise InvalidParamsError(f"nodes must be an int >= 4, got {nodes!r}")
    if not isinstance(versions, int) or versions < 1:
        raise InvalidParamsError(f"versions must be an int >= 1, got {versions!r}")
    try:
        churn = float(churn)
    except (TypeError, ValueError):
        raise InvalidParamsError(f"churn must be a number, got {churn!r}")
    if not 0.0 <= churn < 1.0:
        raise InvalidParamsError(f"churn must be in [0, 1), got {churn}")

    label_width = max(2, len(str(versions)))
    module_count = max(2, nodes // 25)
    if system_label is None:
        system_label = f"synth_s{seed}"

    hubs = [_proc_name(i) for i in range(HUB_COUNT)]
    core_count = min(max(4, round(0.3 * nodes)), MAX_CORE_CALLERS, nodes - HUB_COUNT)
    core_count = max(1, core_count)
    core_callers = [_proc_name(HUB_COUNT + i) for i in range(core_count)]

    names: list[str] = [_proc_name(i) for i in range(nodes)]
    core_arcs = {(caller, hub) for caller in core_callers for hub in hubs}

    # Peripheral arcs avoid hubs on both ends: hub neighbourhoods stay
    # fixed, so churn cannot disturb the stable core rules.
    peripheral_pool = names[HUB_COUNT:]
    rng = random.Random(derive_seed(seed, "base"))
    target_edges = round(EDGES_PER_NODE * nodes)
    peripheral: list[tuple[str, str]] = []
    present: set[tuple[str, str]] = set(core_arcs)
    while len(core_arcs) + len(peripheral) < target_edges:
        arc = _sample_peripheral_arc(rng, peripheral_pool, present)
        if arc is None:
            break
        peripheral.append(arc)
        present.add(arc)

    def build_graph(version_index: int, all_names: list[str]) -> CallGraph:
        label = f"V{version_index:0{label_width}d}"
        procedures = [
            Procedure(name, _module_name(pos, module_count))
            for pos, name in enumerate(all_names)
        ]
        pairs = [CallPair(a, b) for a, b in sorted(core_arcs | set(peripheral))]
        return CallGraph(label, procedures, pairs)

    graphs = [build_graph(1, list(names))]

    for version_index in range(2, versions + 1):
        if churn == 0.0:
            # No mutation at all: later versions must be content-identical.
            graphs.append(build_graph(version_index, list(names)))
            continue
        rng = random.Random(derive_seed(seed, "version", version_index))
        fresh_count = math.ceil(churn * len(names))
        for _ in range(fresh_count):
            name = _proc_name(len(names))
            names.append(name)
            peripheral_pool.append(name)

        churn_edges = round(churn * (len(core_arcs) + len(peripheral)))
        deletions = min(churn_edges // 3, len(peripheral))
        rewires = min(churn_edges // 3, len(peripheral) - deletions)

        for _ in range(deletions):
            victim = rng.randrange(len(peripheral))
            present.discard(peripheral[victim])
            peripheral[victim] = peripheral[-1]
            peripheral.pop()
        for _ in range(rewires):
            victim = rng.randrange(len(peripheral))
            replacement = _sample_peripheral_arc(rng, peripheral_pool, present)
            if replacement is None:
                break
            present.discard(peripheral[victim])
            peripheral[victim] = replacement
            present.add(replacement)

        target = round(EDGES_PER_NODE * len(names))
        while len(core_arcs) + len(peripheral) < target:
            arc = _sample_peripheral_arc(rng, peripheral_pool, present)
            if arc is None:
                break
            peripheral.append(arc)
            present.add(arc)

        graphs.append(build_graph(version_index, list(names)))

    return VersionSeries(system_label, graphs)


def write_series(series: VersionSeries, out_dir: str | Path) -> Path:
    """Write one graph file per version plus a manifest; returns its path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for cg in series:
        file_name = f"{cg.version_label}.graph"
        (out_dir / file_name).write_text(serialize_graph(cg), encoding="utf-8")
        entries.append((cg.version_label, file_name))
    manifest_path = out_dir / "manifest.json"
    write_manifest(manifest_path, series.system_label, entries)
    return manifest_path
