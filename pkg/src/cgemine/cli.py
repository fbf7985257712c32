"""Command-line front end.

Subcommands run the pipelines end-to-end over a manifest and write their
report files into ``--out``. Exit codes: 0 success, 1 user/input error
(bad flags, thresholds, unreadable or malformed inputs), 2 internal error.
Every command computes its full result in memory before writing anything,
and a failed write removes whatever it already produced, so an output
directory never holds a partial artifact set.

Reports embed the run configuration as '#' metadata but never worker
counts or timestamps: with equal inputs, seed, and thresholds the bytes
are identical at any ``--jobs`` value.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, reports
from .errors import CgeMineError, InvalidParamsError
from .estimators import ComplexityProfiler, GraphletCensus, StableRuleMiner
from .graphlets import (
    DEFAULT_MOTIF_THRESHOLD,
    DEFAULT_NULL_SAMPLES,
    DEFAULT_SWAPS_PER_EDGE,
    MotifCriterion,
    check_sizes,
)
from .io import load_series, render_manifest, serialize_graph
from .model import VersionSeries
from .rules import (
    DEFAULT_MAX_ITEMSET,
    DEFAULT_MIN_CONFIDENCE,
    DEFAULT_MIN_SUPPORT,
)
from .synth import generate_series

#: Fixed default master seed: runs are reproducible without any flags.
DEFAULT_SEED = 1729

RULES_FILES = ("rules.csv", "counts.csv", "transitivity.dot", "lattice.dot")
SUBGRAPH_FILES = ("frequencies.csv", "catalog.csv", "motifs.csv")
COMPLEXITY_FILES = ("complexity.csv",)


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract says user error = 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-joined integers: {text!r}")
    if not parts:
        raise argparse.ArgumentTypeError("at least one size is required")
    return parts


def _add_shared(parser: argparse.ArgumentParser, *, manifest: bool = True):
    if manifest:
        parser.add_argument("--manifest", required=True, help="version-series manifest JSON")
    parser.add_argument("--out", required=True, help="output directory for report files")
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker count (default: CGE_JOBS env var, then logical CPU count)",
    )
    parser.add_argument(
        "--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})"
    )
    parser.add_argument(
        "--lenient",
        action="store_true",
        help="drop malformed graph lines (reported on stderr) instead of failing",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cgemine", description=__doc__.splitlines()[1])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    rules_cmd = commands.add_parser(
        "mine-rules", help="mine stable evolution rules across versions"
    )
    _add_shared(rules_cmd)
    rules_cmd.add_argument("--min-sup", type=float, default=DEFAULT_MIN_SUPPORT)
    rules_cmd.add_argument("--min-conf", type=float, default=DEFAULT_MIN_CONFIDENCE)
    stab = rules_cmd.add_mutually_exclusive_group()
    stab.add_argument("--min-stab-count", type=int, default=None)
    stab.add_argument("--min-stab-frac", type=float, default=None)
    rules_cmd.add_argument("--scheme", choices=("caller", "module"), default="caller")
    rules_cmd.add_argument("--max-itemset", type=int, default=DEFAULT_MAX_ITEMSET)
    rules_cmd.set_defaults(func=cmd_mine_rules)

    sub_cmd = commands.add_parser(
        "mine-subgraphs", help="per-version graphlet census and motif report"
    )
    _add_shared(sub_cmd)
    sub_cmd.add_argument("--sizes", type=_parse_sizes, default=(2, 3, 4))
    sub_cmd.add_argument("--motif-threshold", type=float, default=DEFAULT_MOTIF_THRESHOLD)
    sub_cmd.add_argument("--z-min", type=float, default=None)
    sub_cmd.add_argument("--null-samples", type=int, default=DEFAULT_NULL_SAMPLES)
    sub_cmd.add_argument("--swaps-per-edge", type=int, default=DEFAULT_SWAPS_PER_EDGE)
    sub_cmd.set_defaults(func=cmd_mine_subgraphs)

    cx_cmd = commands.add_parser(
        "complexity", help="per-version and aggregated structural complexity"
    )
    _add_shared(cx_cmd)
    cx_cmd.add_argument("--sizes", type=_parse_sizes, default=(2, 3, 4))
    cx_cmd.add_argument("--weights", choices=("relative", "absolute"), default="relative")
    cx_cmd.set_defaults(func=cmd_complexity)

    synth_cmd = commands.add_parser(
        "synth", help="generate a deterministic synthetic version series"
    )
    synth_cmd.add_argument("--out", required=True)
    synth_cmd.add_argument("--nodes", type=int, default=60)
    synth_cmd.add_argument("--versions", type=int, default=5)
    synth_cmd.add_argument("--churn", type=float, default=0.05)
    synth_cmd.add_argument("--seed", type=int, default=DEFAULT_SEED)
    synth_cmd.set_defaults(func=cmd_synth)

    catalog_cmd = commands.add_parser(
        "catalog", help="dump the graphlet class catalog"
    )
    catalog_cmd.add_argument("--sizes", type=_parse_sizes, default=(2, 3, 4))
    catalog_cmd.add_argument("--out", default=None, help="directory (default: stdout)")
    catalog_cmd.set_defaults(func=cmd_catalog)

    return parser


def _resolve_jobs(args) -> int:
    jobs = args.jobs
    if jobs is None:
        env = os.environ.get("CGE_JOBS", "").strip()
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise InvalidParamsError(f"CGE_JOBS must be an integer, got {env!r}")
        else:
            jobs = os.cpu_count() or 1
    if jobs == 0:
        raise InvalidParamsError("--jobs must be a non-zero integer")
    return jobs


def _load(args) -> VersionSeries:
    dropped: dict[str, int] = {}

    def on_drop(label: str, line_no: int, reason: str):
        dropped[label] = dropped.get(label, 0) + 1

    series = load_series(
        args.manifest, lenient=args.lenient, on_drop=on_drop if args.lenient else None
    )
    for label, count in dropped.items():
        print(
            f"warning: version {label!r}: dropped {count} malformed line(s)",
            file=sys.stderr,
        )
    return series


def _emit(out_dir: str | Path, artifacts: dict[str, str]) -> list[Path]:
    """Write all artifacts, or none: failures roll written files back."""
    written: list[Path] = []
    try:
        for name, text in artifacts.items():
            written.append(reports.write_text(Path(out_dir) / name, text))
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written


def cmd_mine_rules(args) -> int:
    jobs = _resolve_jobs(args)
    series = _load(args)
    miner = StableRuleMiner(
        scheme=args.scheme,
        min_support=args.min_sup,
        min_confidence=args.min_conf,
        min_stab_count=args.min_stab_count,
        min_stab_frac=args.min_stab_frac,
        max_itemset=args.max_itemset,
        n_jobs=jobs,
    ).fit(series)
    meta = {
        "system": series.system_label,
        "versions": ",".join(series.version_labels),
        "scheme": args.scheme,
        "min_support": args.min_sup,
        "min_confidence": args.min_conf,
        "min_stability_count": miner.min_stab_count_,
        "max_itemset": args.max_itemset,
        "rows": "stable evolution rules",
    }
    counts_meta = dict(meta, rows="per-version rule counts plus TOTAL row")
    artifacts = {
        "rules.csv": reports.render_rules_csv(miner.stable_.rules, meta),
        "counts.csv": reports.render_counts_csv(miner.summary_, counts_meta),
        "transitivity.dot": reports.render_transitivity_dot(miner.transitivity_),
        "lattice.dot": reports.render_lattice_dot(miner.lattice_),
    }
    for path in _emit(args.out, artifacts):
        print(path)
    return 0


def cmd_mine_subgraphs(args) -> int:
    jobs = _resolve_jobs(args)
    sizes = check_sizes(args.sizes)
    series = _load(args)
    census = GraphletCensus(sizes=sizes, n_jobs=jobs).fit(series)
    criterion = MotifCriterion(
        min_mean_freq_percent=args.motif_threshold,
        z_min=args.z_min,
        null_samples=args.null_samples,
        swaps_per_edge=args.swaps_per_edge,
    )
    motif_report = census.detect_motifs(criterion, master_seed=args.seed)
    meta = {
        "system": series.system_label,
        "versions": ",".join(series.version_labels),
        "sizes": ",".join(map(str, sizes)),
        "seed": args.seed,
    }
    motif_meta = dict(
        meta,
        motif_threshold_percent=args.motif_threshold,
        z_min="" if args.z_min is None else args.z_min,
        null_samples=args.null_samples if args.z_min is not None else "",
        swaps_per_edge=args.swaps_per_edge if args.z_min is not None else "",
    )
    artifacts = {
        "frequencies.csv": reports.render_frequency_csv(census.frequency_table_, meta),
        "catalog.csv": reports.render_catalog_csv(sizes, {"sizes": meta["sizes"]}),
        "motifs.csv": reports.render_motifs_csv(motif_report, motif_meta),
    }
    for path in _emit(args.out, artifacts):
        print(path)
    return 0


def cmd_complexity(args) -> int:
    jobs = _resolve_jobs(args)
    sizes = check_sizes(args.sizes)
    series = _load(args)
    profiler = ComplexityProfiler(sizes=sizes, weights=args.weights, n_jobs=jobs).fit(
        series
    )
    meta = {
        "system": series.system_label,
        "versions": ",".join(series.version_labels),
        "sizes": ",".join(map(str, sizes)),
        "weights": args.weights,
        "formula": (
            "cg_cx = mean over sizes with occurrences of "
            "sum(rel_freq/100 * (E - N + 2)); ECG-Cx = mean over versions"
            if args.weights == "relative"
            else "cg_cx = sum(count * (E - N + 2)) / sum(count) pooled over sizes; "
            "ECG-Cx = mean over versions"
        ),
    }
    artifacts = {
        "complexity.csv": reports.render_complexity_csv(profiler.report_, meta)
    }
    for path in _emit(args.out, artifacts):
        print(path)
    return 0


def cmd_synth(args) -> int:
    series = generate_series(args.nodes, args.versions, args.churn, args.seed)
    entries = [(cg.version_label, f"{cg.version_label}.graph") for cg in series]
    artifacts = {name: serialize_graph(cg) for (_, name), cg in zip(entries, series)}
    artifacts["manifest.json"] = render_manifest(series.system_label, entries)
    for path in _emit(args.out, artifacts):
        print(path)
    return 0


def cmd_catalog(args) -> int:
    sizes = check_sizes(args.sizes)
    text = reports.render_catalog_csv(sizes, {"sizes": ",".join(map(str, sizes))})
    if args.out is None:
        sys.stdout.write(text)
        return 0
    for path in _emit(args.out, {"catalog.csv": text}):
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CgeMineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
