"""Structural complexity metrics derived from the graphlet census.

Each catalog class gets the cyclomatic complexity of its representative,
E - N + 2 (one connected component). A version's call-graph complexity is
the frequency-weighted mean of class complexities: within each graphlet
size the relative frequencies already sum to one, and sizes with any
occurrence are averaged with equal weight so one size cannot drown the
others. The series-level figure is the arithmetic mean over versions —
one constant against which per-version variation can be read.

An alternative weighting pools absolute counts across sizes instead; it
is kept behind a switch because it lets the (far more numerous) larger
graphlets dominate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParamsError
from .graphlets import FrequencyTable, GraphletClass

WEIGHT_MODES = ("relative", "absolute")


def cyclomatic_complexity(graphlet: GraphletClass) -> int:
    """E - N + 2P with P = 1; catalog classes are connected by construction."""
    return graphlet.edge_count - graphlet.size + 2


@dataclass(frozen=True)
class ComplexityReport:
    """Per-version complexity plus its constant series-level aggregate."""

    version_labels: tuple[str, ...]
    per_version: tuple[float, ...]
    degenerate_versions: tuple[str, ...]
    ecg_cx: float
    sizes_used: tuple[int, ...]
    weights_source: str

    def value_of(self, version_label: str) -> float:
        return self.per_version[self.version_labels.index(version_label)]


def compute_complexity(
    freqs: FrequencyTable, weights: str = "relative"
) -> ComplexityReport:
    """Fold a frequency table into per-version and series complexity."""
    if weights not in WEIGHT_MODES:
        raise InvalidParamsError(
            f"weights must be one of {WEIGHT_MODES}, got {weights!r}"
        )
    labels = freqs.version_labels
    degenerate_pairs = set(freqs.degenerate)
    per_version = []
    degenerate_versions = []
    for pos, label in enumerate(labels):
        if weights == "relative":
            size_values = []
            for size in freqs.sizes:
                if (size, label) in degenerate_pairs:
                    continue
                value = sum(
                    entry.rel_freq_percent[pos]
                    / 100.0
                    * cyclomatic_complexity(entry.graphlet)
                    for entry in freqs.series
                    if entry.graphlet.size == size
                )
                size_values.append(value)
            if size_values:
                per_version.append(sum(size_values) / len(size_values))
            else:
                per_version.append(0.0)
                degenerate_versions.append(label)
        else:
            total = sum(entry.counts[pos] for entry in freqs.series)
            if total:
                pooled = sum(
                    entry.counts[pos] * cyclomatic_complexity(entry.graphlet)
                    for entry in freqs.series
                )
                per_version.append(pooled / total)
            else:
                per_version.append(0.0)
                degenerate_versions.append(label)

    ecg = sum(per_version) / len(per_version) if per_version else 0.0
    return ComplexityReport(
        version_labels=labels,
        per_version=tuple(per_version),
        degenerate_versions=tuple(degenerate_versions),
        ecg_cx=ecg,
        sizes_used=freqs.sizes,
        weights_source=weights,
    )
