"""Parsing and serialization of graph files and version-series manifests.

Three interchangeable graph formats are supported:

* native line format: ``node <name> <module>`` / ``edge <caller> <callee>``
  plus blank lines and full-line ``#`` comments;
* a DOT subset: ``digraph`` files whose node statements carry a
  ``module="..."`` attribute and whose edges are plain ``a -> b`` chains;
* a JSON shape mirroring the native format:
  ``{"nodes": [{"name", "module"}], "edges": [{"caller", "callee"}]}``.

Parsing is strict by default: the first problem aborts that version. With
``lenient=True`` offending lines are dropped instead and every drop is
reported through the ``on_drop(line_no, reason)`` callback, so callers can
surface counts. An empty graph is fatal either way.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Callable, Iterable

from .errors import (
    CgeMineError,
    ConflictingModuleError,
    EmptyGraphError,
    GraphSyntaxError,
    ManifestError,
    MissingFileError,
    UnknownProcedureError,
    annotate_version,
)
from .model import CallGraph, CallPair, Procedure, VersionSeries, is_valid_name

DropHook = Callable[[int, str], None]

#: File suffixes routed to the DOT and JSON adapters; anything else is native.
DOT_SUFFIXES = (".dot", ".gv")
JSON_SUFFIXES = (".json",)


class Manifest:
    """Ordered (version_label, path) entries of one system's version series."""

    __slots__ = ("system_label", "entries")

    def __init__(self, system_label: str, entries: Iterable[tuple[str, Path]]):
        entries = tuple((label, Path(path)) for label, path in entries)
        if not entries:
            raise ManifestError("manifest lists no versions")
        labels = [label for label, _ in entries]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ManifestError(f"duplicate version labels in manifest: {dupes}")
        self.system_label = system_label
        self.entries = entries

    def __len__(self):
        return len(self.entries)


# ---------------------------------------------------------------------------
# shared assembly: declarations + raw edges -> validated CallGraph
# ---------------------------------------------------------------------------


def _assemble(
    version_label: str,
    declarations: list[tuple[int, str, str]],
    edges: list[tuple[int, str, str]],
    lenient: bool,
    on_drop: DropHook | None,
) -> CallGraph:
    def drop(line_no: int, reason: str):
        if on_drop is not None:
            on_drop(line_no, reason)

    modules: dict[str, str] = {}
    for line_no, name, module in declarations:
        previous = modules.get(name)
        if previous is not None and previous != module:
            if lenient:
                drop(line_no, f"conflicting module for {name!r} (kept {previous!r})")
                continue
            raise ConflictingModuleError(
                f"line {line_no}: procedure {name!r} declared in modules "
                f"{previous!r} and {module!r}"
            )
        modules[name] = module

    if not modules:
        raise EmptyGraphError(f"no procedure declarations for {version_label!r}")

    kept: set[tuple[str, str]] = set()
    loops: set[str] = set()
    for line_no, caller, callee in edges:
        unknown = [n for n in (caller, callee) if n not in modules]
        if unknown:
            if lenient:
                drop(line_no, f"edge references undeclared procedure {unknown[0]!r}")
                continue
            raise UnknownProcedureError(
                f"line {line_no}: edge endpoint {unknown[0]!r} is not declared"
            )
        if caller == callee:
            loops.add(caller)
        else:
            kept.add((caller, callee))

    return CallGraph(
        version_label,
        (Procedure(name, module) for name, module in modules.items()),
        (CallPair(c, e) for c, e in kept),
        self_loop_count=len(loops),
    )


# ---------------------------------------------------------------------------
# native line format
# ---------------------------------------------------------------------------


def parse_graph_file(
    text: str,
    version_label: str,
    *,
    lenient: bool = False,
    on_drop: DropHook | None = None,
) -> CallGraph:
    """Parse the native line format into a validated :class:`CallGraph`."""
    declarations: list[tuple[int, str, str]] = []
    edges: list[tuple[int, str, str]] = []

    def bad(line_no: int, reason: str) -> bool:
        if lenient:
            if on_drop is not None:
                on_drop(line_no, reason)
            return True
        raise GraphSyntaxError(reason, line_no)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            bad(line_no, f"expected 3 fields, got {len(tokens)}: {raw!r}")
            continue
        kind, first, second = tokens
        if not (is_valid_name(first) and is_valid_name(second)):
            bad(line_no, f"invalid name on line: {raw!r}")
            continue
        if kind == "node":
            declarations.append((line_no, first, second))
        elif kind == "edge":
            edges.append((line_no, first, second))
        else:
            bad(line_no, f"unknown record type {kind!r}")

    return _assemble(version_label, declarations, edges, lenient, on_drop)


def serialize_graph(cg: CallGraph) -> str:
    """Render a graph in the native format, deterministically sorted.

    Re-parsing the output reproduces the graph exactly (procedures,
    call pairs, and self-loop count), which the test suite asserts.
    """
    lines = [f"# call graph for version {cg.version_label}"]
    for name in cg.procedure_names:
        lines.append(f"node {name} {cg.module_of(name)}")
    for caller, callee in sorted((p.caller, p.callee) for p in cg.call_pairs):
        lines.append(f"edge {caller} {callee}")
    # Self-loops are kept out of call_pairs but must survive a round trip.
    # The original looping procedures are not recorded, so loops are pinned
    # to the lexicographically first procedures; counts round-trip exactly.
    loop_names = cg.procedure_names[: cg.self_loop_count]
    for name in loop_names:
        lines.append(f"edge {name} {name}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT subset
# ---------------------------------------------------------------------------

_MODULE_ATTR = re.compile(r'module\s*=\s*(?:"([^"]*)"|([A-Za-z0-9_.]+))')
_ATTR_BLOCK = re.compile(r"\[[^\]]*\]")


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == '"' and token[-1] == '"':
        token = token[1:-1].replace('\\"', '"')
    return token


def _strip_dot_comments(text: str) -> str:
    text = re.sub(r"/\*.*?\*/", " ", text, flags=re.DOTALL)
    lines = []
    for raw in text.splitlines():
        cut = len(raw)
        in_quote = False
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch == '"':
                in_quote = not in_quote
            elif not in_quote:
                if ch == "#" or raw.startswith("//", i):
                    cut = i
                    break
            i += 1
        lines.append(raw[:cut])
    return "\n".join(lines)


def parse_dot_text(
    text: str,
    version_label: str,
    *,
    lenient: bool = False,
    on_drop: DropHook | None = None,
) -> CallGraph:
    """Parse the supported DOT subset (see module docstring) into a graph."""
    cleaned = _strip_dot_comments(text)
    open_brace = cleaned.find("{")
    close_brace = cleaned.rfind("}")
    if open_brace < 0 or close_brace < open_brace:
        raise GraphSyntaxError("not a DOT graph: missing braces")
    header = cleaned[:open_brace]
    if "digraph" not in header.split():
        raise GraphSyntaxError("only 'digraph' DOT files are supported")
    body = cleaned[open_brace + 1 : close_brace]

    declarations: list[tuple[int, str, str]] = []
    edges: list[tuple[int, str, str]] = []

    def bad(line_no: int, reason: str):
        if lenient:
            if on_drop is not None:
                on_drop(line_no, reason)
            return
        raise GraphSyntaxError(reason, line_no)

    for line_no, raw_line in enumerate(body.splitlines(), start=1):
        for stmt in raw_line.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if "->" in stmt:
                chain = _ATTR_BLOCK.sub(" ", stmt)
                names = [_unquote(part) for part in chain.split("->")]
                if any(not is_valid_name(n) for n in names):
                    bad(line_no, f"invalid edge statement: {stmt!r}")
                    continue
                for caller, callee in zip(names, names[1:]):
                    edges.append((line_no, caller, callee))
                continue
            head = stmt.split("[", 1)[0].strip()
            if head in ("graph", "node", "edge") and "[" in stmt:
                continue  # default-attribute statement
            if "=" in head:
                continue  # graph-level key=value attribute
            name = _unquote(head)
            if not is_valid_name(name):
                bad(line_no, f"invalid node statement: {stmt!r}")
                continue
            attr = _MODULE_ATTR.search(stmt)
            if attr is None:
                bad(line_no, f"node {name!r} has no module=\"...\" attribute")
                continue
            module = attr.group(1) if attr.group(1) is not None else attr.group(2)
            if not is_valid_name(module):
                bad(line_no, f"invalid module name on node {name!r}")
                continue
            declarations.append((line_no, name, module))

    return _assemble(version_label, declarations, edges, lenient, on_drop)


# ---------------------------------------------------------------------------
# JSON mirror of the native format
# ---------------------------------------------------------------------------


def parse_json_text(
    text: str,
    version_label: str,
    *,
    lenient: bool = False,
    on_drop: DropHook | None = None,
) -> CallGraph:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSyntaxError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise GraphSyntaxError("JSON graph must be an object")

    declarations: list[tuple[int, str, str]] = []
    edges: list[tuple[int, str, str]] = []

    def bad(index: int, reason: str):
        if lenient:
            if on_drop is not None:
                on_drop(index, reason)
            return
        raise GraphSyntaxError(reason, index)

    for index, node in enumerate(payload.get("nodes", []), start=1):
        if (
            not isinstance(node, dict)
            or not is_valid_name(node.get("name", ""))
            or not is_valid_name(node.get("module", ""))
        ):
            bad(index, f"invalid node entry #{index}: {node!r}")
            continue
        declarations.append((index, node["name"], node["module"]))
    for index, edge in enumerate(payload.get("edges", []), start=1):
        if (
            not isinstance(edge, dict)
            or not is_valid_name(edge.get("caller", ""))
            or not is_valid_name(edge.get("callee", ""))
        ):
            bad(index, f"invalid edge entry #{index}: {edge!r}")
            continue
        edges.append((index, edge["caller"], edge["callee"]))

    return _assemble(version_label, declarations, edges, lenient, on_drop)


# ---------------------------------------------------------------------------
# file and manifest loading
# ---------------------------------------------------------------------------


def load_graph_file(
    path: str | Path,
    version_label: str,
    *,
    lenient: bool = False,
    on_drop: DropHook | None = None,
) -> CallGraph:
    """Load one graph file, picking the parser from the file suffix."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"graph file not found: {path}")
    text = path.read_text(encoding="utf-8")
    suffix = path.suffix.lower()
    if suffix in DOT_SUFFIXES:
        parser = parse_dot_text
    elif suffix in JSON_SUFFIXES:
        parser = parse_json_text
    else:
        parser = parse_graph_file
    return parser(text, version_label, lenient=lenient, on_drop=on_drop)


def load_manifest(path: str | Path) -> Manifest:
    """Load a manifest JSON file; relative graph paths resolve against it."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"manifest not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"invalid manifest JSON: {exc}") from exc
    if not isinstance(payload, dict) or "versions" not in payload:
        raise ManifestError("manifest must be an object with a 'versions' list")
    system = payload.get("system")
    if not isinstance(system, str) or not system:
        raise ManifestError("manifest 'system' must be a non-empty string")
    versions = payload["versions"]
    if not isinstance(versions, list) or not versions:
        raise ManifestError("manifest 'versions' must be a non-empty list")

    base = path.parent
    entries = []
    for index, entry in enumerate(versions, start=1):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("label"), str)
            or not entry["label"]
            or not isinstance(entry.get("path"), str)
            or not entry["path"]
        ):
            raise ManifestError(f"manifest entry #{index} needs 'label' and 'path'")
        graph_path = Path(entry["path"])
        if not graph_path.is_absolute():
            graph_path = base / graph_path
        entries.append((entry["label"], graph_path))

    manifest = Manifest(system, entries)
    for label, graph_path in manifest.entries:
        if not graph_path.is_file():
            raise MissingFileError(f"graph file for {label!r} not found: {graph_path}")
    return manifest


def load_series(
    manifest: Manifest | str | Path,
    *,
    lenient: bool = False,
    on_drop: DropHook | None = None,
) -> VersionSeries:
    """Load every version of a manifest, in manifest order.

    Parse errors are re-raised with the failing version's label attached.
    """
    if not isinstance(manifest, Manifest):
        manifest = load_manifest(manifest)
    graphs = []
    for label, path in manifest.entries:
        hook = None
        if on_drop is not None:
            hook = (lambda l: lambda line, reason: on_drop(l, line, reason))(label)
        try:
            graphs.append(load_graph_file(path, label, lenient=lenient, on_drop=hook))
        except CgeMineError as exc:
            raise annotate_version(exc, label)
    return VersionSeries(manifest.system_label, graphs)


def render_manifest(system_label: str, entries: Iterable[tuple[str, str]]) -> str:
    """Manifest JSON text; entry paths are stored as given (usually relative)."""
    payload = {
        "system": system_label,
        "versions": [{"label": label, "path": p} for label, p in entries],
    }
    return json.dumps(payload, indent=2) + "\n"


def write_manifest(
    path: str | Path,
    system_label: str,
    entries: Iterable[tuple[str, str]],
) -> None:
    Path(path).write_text(render_manifest(system_label, entries), encoding="utf-8")
