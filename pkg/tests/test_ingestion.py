"""Parsers, serializer, manifests: strictness, leniency, round trips."""

from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from cgemine.errors import (
    ConflictingModuleError,
    EmptyGraphError,
    GraphSyntaxError,
    ManifestError,
    MissingFileError,
    UnknownProcedureError,
)
from cgemine.io import (
    load_graph_file,
    load_manifest,
    load_series,
    parse_dot_text,
    parse_graph_file,
    parse_json_text,
    serialize_graph,
    write_manifest,
)
from cgemine.model import CallGraph, CallPair

NATIVE = """\
# demo graph
node a m1
node b m1

node c m2
edge a b
edge b c
edge b c
edge c c
"""


class TestNativeFormat:
    def test_parse_basics(self):
        cg = parse_graph_file(NATIVE, "V1")
        assert cg.procedure_names == ("a", "b", "c")
        assert cg.module_of("c") == "m2"
        assert cg.call_pairs == frozenset(
            {CallPair("a", "b"), CallPair("b", "c")}
        )
        assert cg.self_loop_count == 1

    @pytest.mark.parametrize(
        "line, fragment",
        [
            ("node a", "expected 3 fields"),
            ("node a m1 extra", "expected 3 fields"),
            ("vertex a m1", "unknown record type"),
            ("edge a# b", "invalid name"),
        ],
    )
    def test_syntax_errors_carry_line_numbers(self, line, fragment):
        text = f"node a m1\n{line}\n"
        with pytest.raises(GraphSyntaxError) as err:
            parse_graph_file(text, "V1")
        assert "line 2" in str(err.value)
        assert fragment in str(err.value)

    def test_unknown_edge_endpoint(self):
        with pytest.raises(UnknownProcedureError) as err:
            parse_graph_file("node a m1\nedge a ghost\n", "V1")
        assert "ghost" in str(err.value)

    def test_conflicting_module(self):
        with pytest.raises(ConflictingModuleError):
            parse_graph_file("node a m1\nnode a m2\n", "V1")

    def test_empty_graph_fatal_even_when_lenient(self):
        with pytest.raises(EmptyGraphError):
            parse_graph_file("# nothing\n", "V1", lenient=True)

    def test_lenient_drops_and_reports(self):
        drops = []
        text = "node a m1\nbogus line here extra\nnode a m2\nedge a ghost\nnode b m1\nedge a b\n"
        cg = parse_graph_file(
            text, "V1", lenient=True, on_drop=lambda line, reason: drops.append(line)
        )
        assert cg.procedure_names == ("a", "b")
        assert cg.call_pairs == frozenset({CallPair("a", "b")})
        assert drops == [2, 3, 4]


class TestDotFormat:
    DOT = """\
    // exported call graph
    digraph calls {
      rankdir=LR;
      node [shape=box];
      "a" [module="m1"];
      b [module=m1]; /* inline */
      c [module="m2", color=red];
      a -> b -> c;   # trailing comment
      "a" -> "c" [weight=2];
    }
    """

    def test_parse_dot(self):
        cg = parse_dot_text(self.DOT, "V1")
        assert cg.procedure_names == ("a", "b", "c")
        assert cg.module_of("b") == "m1"
        assert cg.call_pairs == frozenset(
            {CallPair("a", "b"), CallPair("b", "c"), CallPair("a", "c")}
        )

    def test_requires_digraph(self):
        with pytest.raises(GraphSyntaxError):
            parse_dot_text("graph g { a -- b; }", "V1")

    def test_node_needs_module(self):
        with pytest.raises(GraphSyntaxError):
            parse_dot_text("digraph g { a [shape=box]; }", "V1")

    def test_lenient_dot(self):
        drops = []
        cg = parse_dot_text(
            "digraph g { a [module=m]; b; a -> a; }",
            "V1",
            lenient=True,
            on_drop=lambda line, reason: drops.append(reason),
        )
        # 'b' lacks a module and is dropped; a->a becomes a counted loop.
        assert cg.procedure_names == ("a",)
        assert cg.self_loop_count == 1
        assert len(drops) == 1


class TestJsonFormat:
    def test_parse_json(self):
        payload = {
            "nodes": [
                {"name": "a", "module": "m1"},
                {"name": "b", "module": "m2"},
            ],
            "edges": [{"caller": "a", "callee": "b"}],
        }
        cg = parse_json_text(json.dumps(payload), "V1")
        assert cg.procedure_names == ("a", "b")
        assert cg.call_pairs == frozenset({CallPair("a", "b")})

    def test_invalid_json(self):
        with pytest.raises(GraphSyntaxError):
            parse_json_text("{not json", "V1")

    def test_bad_entries_strict_vs_lenient(self):
        payload = json.dumps(
            {
                "nodes": [{"name": "a", "module": "m"}, {"name": "b ad", "module": "m"}],
                "edges": [],
            }
        )
        with pytest.raises(GraphSyntaxError):
            parse_json_text(payload, "V1")
        cg = parse_json_text(payload, "V1", lenient=True)
        assert cg.procedure_names == ("a",)


class TestManifest:
    def _write_series(self, tmp_path, labels=("V1", "V2")):
        entries = []
        for label in labels:
            path = tmp_path / f"{label}.graph"
            path.write_text(f"node p_{label} m\n", encoding="utf-8")
            entries.append((label, f"{label}.graph"))
        manifest = tmp_path / "manifest.json"
        write_manifest(manifest, "demo", entries)
        return manifest

    def test_load_series_relative_paths(self, tmp_path):
        manifest = self._write_series(tmp_path)
        series = load_series(manifest)
        assert series.system_label == "demo"
        assert series.version_labels == ("V1", "V2")

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(MissingFileError):
            load_manifest(tmp_path / "nope.json")

    def test_missing_graph_file(self, tmp_path):
        manifest = self._write_series(tmp_path)
        (tmp_path / "V2.graph").unlink()
        with pytest.raises(MissingFileError) as err:
            load_manifest(manifest)
        assert "V2" in str(err.value)

    @pytest.mark.parametrize(
        "payload",
        [
            "{",
            "[]",
            '{"system": "s"}',
            '{"system": "", "versions": [{"label": "V1", "path": "x"}]}',
            '{"system": "s", "versions": []}',
            '{"system": "s", "versions": [{"label": "V1"}]}',
        ],
    )
    def test_schema_violations(self, tmp_path, payload):
        path = tmp_path / "manifest.json"
        path.write_text(payload, encoding="utf-8")
        with pytest.raises((ManifestError,)):
            load_manifest(path)

    def test_duplicate_labels(self, tmp_path):
        (tmp_path / "a.graph").write_text("node a m\n", encoding="utf-8")
        path = tmp_path / "manifest.json"
        write_manifest(path, "s", [("V1", "a.graph"), ("V1", "a.graph")])
        with pytest.raises(ManifestError):
            load_manifest(path)

    def test_parse_error_names_the_version(self, tmp_path):
        manifest = self._write_series(tmp_path)
        (tmp_path / "V2.graph").write_text("garbage\n", encoding="utf-8")
        with pytest.raises(GraphSyntaxError) as err:
            load_series(manifest)
        assert "version 'V2'" in str(err.value)
        assert err.value.version_label == "V2"

    def test_suffix_routing(self, tmp_path):
        dot = tmp_path / "g.dot"
        dot.write_text('digraph g { a [module="m"]; }', encoding="utf-8")
        assert load_graph_file(dot, "V1").procedure_names == ("a",)
        js = tmp_path / "g.json"
        js.write_text('{"nodes": [{"name": "a", "module": "m"}]}', encoding="utf-8")
        assert load_graph_file(js, "V1").procedure_names == ("a",)


names = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126, exclude_characters="#;"),
    min_size=1,
    max_size=8,
)


@st.composite
def graphs(draw):
    nodes = draw(
        st.dictionaries(names, st.sampled_from(["m1", "m2", "m3"]), min_size=1, max_size=8)
    )
    pool = sorted(nodes)
    edges = draw(
        st.lists(
            st.tuples(st.sampled_from(pool), st.sampled_from(pool)), max_size=20
        )
    )
    return CallGraph.build("V1", nodes, edges)


@given(graphs())
def test_serialize_parse_round_trip(cg: CallGraph):
    assert parse_graph_file(serialize_graph(cg), "V1") == cg
