"""Immutable domain model: procedures, call pairs, call graphs, version series.

All types are frozen after construction and safe to share across worker
processes without synchronization. Self-loops (recursive calls) are counted
at build time but excluded from the analytic edge set, and parallel edges
collapse to a single call pair, so every graph is a simple digraph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    ConflictingModuleError,
    EmptyGraphError,
    UnknownProcedureError,
)

#: Characters that may never appear in procedure or module names: whitespace
#: would break the line-oriented file format, '#' is its comment marker, and
#: ';' delimits the report CSVs.
RESERVED_CHARS = "#;"


def is_valid_name(name: str) -> bool:
    return bool(name) and not any(ch.isspace() or ch in RESERVED_CHARS for ch in name)


def is_valid_label(label: str) -> bool:
    """Version labels are names that additionally embed in comma-joined lists."""
    return is_valid_name(label) and "," not in label


def _check_name(name: str, what: str) -> str:
    if not isinstance(name, str) or not name:
        raise ValueError(f"{what} must be a non-empty string, got {name!r}")
    if not is_valid_name(name):
        raise ValueError(f"{what} {name!r} contains whitespace or a reserved character")
    return name


@dataclass(frozen=True)
class Procedure:
    """A procedure (method or function) together with its owning module."""

    name: str
    module: str

    def __post_init__(self):
        _check_name(self.name, "procedure name")
        _check_name(self.module, "module name")


@dataclass(frozen=True)
class CallPair:
    """One caller -> callee edge of a call graph."""

    caller: str
    callee: str

    def __post_init__(self):
        _check_name(self.caller, "caller name")
        _check_name(self.callee, "callee name")


@dataclass(frozen=True)
class GraphStats:
    procedure_count: int
    edge_count: int
    avg_neighbours: float


class CallGraph:
    """One version's directed procedure-call graph with module membership.

    Construction validates the model invariants: at least one procedure,
    exactly one module per procedure name, every edge endpoint declared, and
    no self-loops inside ``call_pairs`` (those live in ``self_loop_count``).
    Use :meth:`build` to assemble a graph from raw node/edge listings with
    duplicate collapsing and self-loop extraction.
    """

    __slots__ = (
        "version_label",
        "procedures",
        "call_pairs",
        "self_loop_count",
        "_modules",
        "_names",
        "_neighbours",
    )

    def __init__(
        self,
        version_label: str,
        procedures: Iterable[Procedure],
        call_pairs: Iterable[CallPair],
        self_loop_count: int = 0,
    ):
        procs = frozenset(procedures)
        pairs = frozenset(call_pairs)
        if not isinstance(version_label, str) or not is_valid_label(version_label):
            raise ValueError(
                f"version label {version_label!r} must be non-empty without "
                "whitespace, '#', ';' or ','"
            )
        if not procs:
            raise EmptyGraphError(f"graph {version_label!r} declares no procedures")
        if self_loop_count < 0:
            raise ValueError("self_loop_count must be non-negative")

        modules: dict[str, str] = {}
        for proc in procs:
            previous = modules.get(proc.name)
            if previous is not None and previous != proc.module:
                raise ConflictingModuleError(
                    f"procedure {proc.name!r} declared in modules "
                    f"{previous!r} and {proc.module!r}"
                )
            modules[proc.name] = proc.module

        neighbours: dict[str, set[str]] = {name: set() for name in modules}
        for pair in pairs:
            if pair.caller == pair.callee:
                raise ValueError(
                    f"self-loop {pair.caller!r} must not appear in call_pairs"
                )
            for endpoint in (pair.caller, pair.callee):
                if endpoint not in modules:
                    raise UnknownProcedureError(
                        f"edge endpoint {endpoint!r} is not a declared procedure"
                    )
            neighbours[pair.caller].add(pair.callee)
            neighbours[pair.callee].add(pair.caller)

        self.version_label = version_label
        self.procedures = procs
        self.call_pairs = pairs
        self.self_loop_count = self_loop_count
        self._modules = modules
        self._names = tuple(sorted(modules))
        self._neighbours = {k: frozenset(v) for k, v in neighbours.items()}

    @classmethod
    def build(
        cls,
        version_label: str,
        nodes: Mapping[str, str] | Iterable[tuple[str, str]],
        edges: Iterable[tuple[str, str]] = (),
    ) -> "CallGraph":
        """Assemble a graph from (name, module) nodes and (caller, callee) edges.

        Duplicate edges collapse to one call pair; edges with caller == callee
        are removed from the edge set and counted in ``self_loop_count``.
        """
        node_items = nodes.items() if isinstance(nodes, Mapping) else nodes
        procedures = {Procedure(name, module) for name, module in node_items}
        unique = {(caller, callee) for caller, callee in edges}
        loops = {pair for pair in unique if pair[0] == pair[1]}
        pairs = {CallPair(c, e) for c, e in unique - loops}
        # Validate looped endpoints too: the procedure must exist.
        declared = {p.name for p in procedures}
        for name, _ in loops:
            if name not in declared:
                raise UnknownProcedureError(
                    f"edge endpoint {name!r} is not a declared procedure"
                )
        return cls(version_label, procedures, pairs, self_loop_count=len(loops))

    @property
    def procedure_names(self) -> tuple[str, ...]:
        """All procedure names, sorted."""
        return self._names

    def module_of(self, name: str) -> str:
        return self._modules[name]

    @property
    def modules(self) -> Mapping[str, str]:
        """Read-only name -> module mapping."""
        return dict(self._modules)

    def neighbours_of(self, name: str) -> frozenset[str]:
        """Distinct adjacent procedures of ``name``, ignoring edge direction."""
        return self._neighbours[name]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CallGraph):
            return NotImplemented
        return (
            self.version_label == other.version_label
            and self.procedures == other.procedures
            and self.call_pairs == other.call_pairs
            and self.self_loop_count == other.self_loop_count
        )

    def __hash__(self):
        return hash((self.version_label, self.procedures, self.call_pairs))

    def __repr__(self):
        return (
            f"CallGraph({self.version_label!r}, procedures={len(self.procedures)}, "
            f"call_pairs={len(self.call_pairs)}, self_loops={self.self_loop_count})"
        )


class VersionSeries:
    """Chronologically ordered call graphs of one evolving system."""

    __slots__ = ("system_label", "graphs")

    def __init__(self, system_label: str, graphs: Iterable[CallGraph]):
        graphs = tuple(graphs)
        if not graphs:
            raise ValueError("a version series needs at least one graph")
        labels = [g.version_label for g in graphs]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ValueError(f"duplicate version labels in series: {dupes}")
        self.system_label = system_label
        self.graphs = graphs

    @property
    def version_labels(self) -> tuple[str, ...]:
        return tuple(g.version_label for g in self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, index: int) -> CallGraph:
        return self.graphs[index]

    def __repr__(self):
        return f"VersionSeries({self.system_label!r}, versions={len(self.graphs)})"


def graph_stats(cg: CallGraph) -> GraphStats:
    """Node count, edge count, and mean number of distinct neighbours.

    Neighbours are counted ignoring edge direction and excluding self-loops;
    isolated procedures contribute zero to the mean.
    """
    names = cg.procedure_names
    total = sum(len(cg.neighbours_of(name)) for name in names)
    return GraphStats(
        procedure_count=len(names),
        edge_count=len(cg.call_pairs),
        avg_neighbours=total / len(names),
    )
