"""Report rendering: semicolon CSVs and DOT graphs.

The delimiter is ';' because foreign call-graph extractors routinely emit
procedure signatures containing commas; comma-joined lists therefore live
inside fields. Reserved-character validation in the model guarantees no
field ever contains ';', '#', or whitespace, so no quoting is needed.

Every report starts with '#'-prefixed metadata lines describing the run
(thresholds, scheme, seed — never timestamps or worker counts, which must
not influence bytes). Floats are written with ``repr``, the shortest
round-tripping form, so outputs are byte-stable across runs and worker
counts and parse back to exactly the computed values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .complexity import ComplexityReport, cyclomatic_complexity
from .evolution import CountSummary, EvolutionRule, LatticeGraph, TransitivityGraph
from .graphlets import FrequencyTable, MotifReport, generate_catalog

RULES_HEADER = "antecedent;consequent;stability;versions;mean_support;mean_confidence"
COUNTS_HEADER = "version;cgr_count;cger_count;stable_count"
FREQUENCY_HEADER = "size;class_id;canonical_code;version;count;rel_freq_percent"
CATALOG_HEADER = "size;class_id;canonical_code;edge_list"
MOTIFS_HEADER = "size;class_id;canonical_code;mean_rel_freq_percent;z_score;degenerate_null"
COMPLEXITY_HEADER = "version;cg_cx;degenerate"
AGGREGATE_ROW_LABEL = "ECG-Cx"
TOTAL_ROW_LABEL = "TOTAL"


def _num(value: float) -> str:
    return repr(float(value))


def _meta_lines(meta: Mapping[str, object]) -> list[str]:
    return [f"# {key}: {value}" for key, value in meta.items()]


def render_rules_csv(
    rules: Sequence[EvolutionRule], meta: Mapping[str, object]
) -> str:
    lines = _meta_lines(meta) + [RULES_HEADER]
    for rule in rules:
        lines.append(
            ";".join(
                (
                    ",".join(rule.antecedent),
                    ",".join(rule.consequent),
                    str(rule.stability),
                    ",".join(rule.versions),
                    _num(rule.mean_support),
                    _num(rule.mean_confidence),
                )
            )
        )
    return "\n".join(lines) + "\n"


def render_counts_csv(summary: CountSummary, meta: Mapping[str, object]) -> str:
    lines = _meta_lines(meta) + [COUNTS_HEADER]
    for label, total, distinct, stable in summary.per_version:
        lines.append(f"{label};{total};{distinct};{stable}")
    lines.append(
        f"{TOTAL_ROW_LABEL};{summary.total_occurrences};"
        f"{summary.distinct_count};{summary.stable_count}"
    )
    return "\n".join(lines) + "\n"


def render_frequency_csv(table: FrequencyTable, meta: Mapping[str, object]) -> str:
    lines = _meta_lines(meta) + [FREQUENCY_HEADER]
    for entry in table.series:
        g = entry.graphlet
        for pos, label in enumerate(table.version_labels):
            lines.append(
                f"{g.size};{g.class_id};{g.canonical_code};{label};"
                f"{entry.counts[pos]};{_num(entry.rel_freq_percent[pos])}"
            )
    return "\n".join(lines) + "\n"


def _edge_list_text(edges: Iterable[tuple[int, int]]) -> str:
    return ",".join(f"{a}->{b}" for a, b in edges)


def render_catalog_csv(sizes: Iterable[int], meta: Mapping[str, object]) -> str:
    lines = _meta_lines(meta) + [CATALOG_HEADER]
    for size in sorted(set(sizes)):
        for g in generate_catalog(size):
            lines.append(
                f"{g.size};{g.class_id};{g.canonical_code};{_edge_list_text(g.edge_list)}"
            )
    return "\n".join(lines) + "\n"


def render_motifs_csv(report: MotifReport, meta: Mapping[str, object]) -> str:
    lines = _meta_lines(meta) + [MOTIFS_HEADER]
    for entry in report.motifs:
        g = entry.graphlet
        z_text = "" if entry.z_score is None else _num(entry.z_score)
        lines.append(
            f"{g.size};{g.class_id};{g.canonical_code};"
            f"{_num(entry.mean_rel_freq)};{z_text};{int(entry.degenerate_null)}"
        )
    return "\n".join(lines) + "\n"


def render_complexity_csv(
    report: ComplexityReport, meta: Mapping[str, object]
) -> str:
    degenerate = set(report.degenerate_versions)
    lines = _meta_lines(meta) + [COMPLEXITY_HEADER]
    for label, value in zip(report.version_labels, report.per_version):
        lines.append(f"{label};{_num(value)};{int(label in degenerate)}")
    lines.append(f"{AGGREGATE_ROW_LABEL};{_num(report.ecg_cx)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DOT rendering
# ---------------------------------------------------------------------------


def _quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _set_label(items: Iterable[str]) -> str:
    return "{" + ",".join(items) + "}"


def render_transitivity_dot(graph: TransitivityGraph) -> str:
    lines = ["digraph transitivity {"]
    for component in graph.components:
        if len(component) > 1:
            lines.append(f"  // scc: {_set_label(component)}")
    for chain in graph.chains:
        lines.append(
            "  // chain: " + " -> ".join(_set_label(c) for c in chain)
        )
    in_edges = {name for edge in graph.edges for name in edge}
    for node in graph.nodes:
        if node not in in_edges:
            lines.append(f"  {_quote(node)};")
    for source, target in graph.edges:
        lines.append(f"  {_quote(source)} -> {_quote(target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_lattice_dot(lattice: LatticeGraph) -> str:
    lines = ["digraph lattice {"]
    ids = {itemset: f"n{pos}" for pos, itemset in enumerate(lattice.nodes)}
    for itemset, node_id in ids.items():
        lines.append(f"  {node_id} [label={_quote(_set_label(itemset))}];")
    for lower, upper in lattice.edges:
        lines.append(f"  {ids[lower]} -> {ids[upper]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reading reports back (round-trip checks, downstream tooling)
# ---------------------------------------------------------------------------


def parse_csv_text(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Split a report into (metadata, header fields, data rows).

    Metadata lines are ``# key: value``; the first non-comment line is the
    header. Trailing aggregate rows (if any) are returned as data rows —
    schemas with such rows document them.
    """
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = line.split(";")
        else:
            rows.append(line.split(";"))
    return meta, header or [], rows


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
