"""Flows between a source and sink: path sets, weights, series and tables.

A flow is the set of all simple paths source -> sink of bounded edge-length
in one interval.  Its weight is the sum over paths of the minimum edge
weight, the hypothetical maximum amount routable along those payment lines.
Paths may share edges, so this deliberately over-counts relative to a
classical maximum flow; no capacity deduplication is applied.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import IO, Iterable, Mapping, Sequence

from .graph import IntervalId, TemporalNetwork
from .pathfinder import Path, iter_paths

PATH_TABLE_HEADER = ("interval", "path_nodes", "edge_weights", "terminal", "min_weight")
FLOW_SERIES_HEADER = ("interval", "weight", "expected", "deviation")


def path_weight(path: Path) -> int:
    """Total amount moved along the path: sum of its edge weights."""
    return sum(path.edge_weights)


def path_min(path: Path) -> int:
    """Bottleneck of the path: the minimum edge weight."""
    return min(path.edge_weights)


@dataclass(frozen=True, slots=True)
class Flow:
    """All paths source -> sink of edge-length <= max_len in one interval."""

    source: str
    sink: str
    max_len: int
    interval: IntervalId
    paths: tuple[Path, ...]


@dataclass
class FlowSeries:
    """Per-interval flow weights, optionally annotated with expectations.

    ``points`` covers every interval of the network family in order, weight
    zero where no path exists.  ``expected`` and ``deviation`` are parallel
    lists filled in by the anomaly layer; entries are None where the chosen
    expectation method is undefined.
    """

    source: str
    sink: str
    max_len: int
    points: list[tuple[IntervalId, int]]
    expected: list[float | None] | None = field(default=None)
    deviation: list[float | None] | None = field(default=None)

    def weights(self) -> list[int]:
        return [w for _, w in self.points]

    def labels(self) -> list[str]:
        return [interval.label for interval, _ in self.points]


@dataclass(frozen=True, slots=True)
class PathTableRow:
    interval: str
    path_nodes: tuple[str, ...]
    edge_weights: tuple[int, ...]
    terminal: str
    min_weight: int
    annotations: Mapping[str, str] | None = None


def build_flow(network: TemporalNetwork, source: str, sink: str, max_len: int) -> Flow:
    """Filter the path enumeration from source down to paths ending at sink."""
    if source == sink:
        raise ValueError("flow from a node to itself is undefined")
    paths = tuple(p for p in iter_paths(network, source, max_len) if p.terminal == sink)
    return Flow(source=source, sink=sink, max_len=max_len, interval=network.interval, paths=paths)


def flow_weight(flow: Flow) -> int:
    """Sum of per-path bottlenecks; zero for an empty flow."""
    return sum(min(p.edge_weights) for p in flow.paths)


def flow_through(
    network: TemporalNetwork, source: str, sink: str, max_len: int, via: str
) -> Flow:
    """Sub-flow of the paths that use ``via`` as an interior node."""
    if via == source or via == sink:
        raise ValueError("via must differ from both source and sink")
    flow = build_flow(network, source, sink, max_len)
    kept = tuple(p for p in flow.paths if via in p.nodes[1:-1])
    return Flow(source=source, sink=sink, max_len=max_len, interval=network.interval, paths=kept)


def flow_series(
    networks: Sequence[TemporalNetwork], source: str, sink: str, max_len: int
) -> FlowSeries:
    """Flow weight per interval across a network family, in family order."""
    if not networks:
        raise ValueError("network family is empty")
    points = [
        (network.interval, flow_weight(build_flow(network, source, sink, max_len)))
        for network in networks
    ]
    return FlowSeries(source=source, sink=sink, max_len=max_len, points=points)


def through_series(
    networks: Sequence[TemporalNetwork], source: str, sink: str, max_len: int, via: str
) -> FlowSeries:
    """Per-interval weight of the sub-flow passing through ``via``."""
    if not networks:
        raise ValueError("network family is empty")
    points = [
        (network.interval, flow_weight(flow_through(network, source, sink, max_len, via)))
        for network in networks
    ]
    return FlowSeries(source=source, sink=sink, max_len=max_len, points=points)


def path_table_rows(
    paths: Iterable[Path], annotations: Mapping[str, str] | None = None
) -> list[PathTableRow]:
    """One analyst-facing table row per path, filterable and sortable."""
    rows = []
    for path in paths:
        notes = None
        if annotations:
            notes = {node: annotations[node] for node in path.nodes if node in annotations}
        rows.append(
            PathTableRow(
                interval=path.interval.label,
                path_nodes=path.nodes,
                edge_weights=path.edge_weights,
                terminal=path.terminal,
                min_weight=min(path.edge_weights),
                annotations=notes or None,
            )
        )
    return rows


def write_path_table(rows: Sequence[PathTableRow], out: IO[str] | str | FsPath) -> None:
    """Serialize rows with JSON-encoded list cells so spreadsheets filter cleanly."""
    if isinstance(out, (str, FsPath)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_path_table(rows, fh)
        return
    annotated = any(row.annotations for row in rows)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PATH_TABLE_HEADER + (("annotations",) if annotated else ()))
    for row in rows:
        cells = [
            row.interval,
            json.dumps(list(row.path_nodes)),
            json.dumps(list(row.edge_weights)),
            row.terminal,
            row.min_weight,
        ]
        if annotated:
            cells.append(json.dumps(row.annotations or {}, sort_keys=True))
        writer.writerow(cells)


def _format_optional(value: float | None) -> str:
    return "" if value is None else repr(value)


def write_flow_series(series: FlowSeries, out: IO[str] | str | FsPath) -> None:
    """Serialize a series as ``interval,weight,expected,deviation`` rows."""
    if isinstance(out, (str, FsPath)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_flow_series(series, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FLOW_SERIES_HEADER)
    expected = series.expected or [None] * len(series.points)
    deviation = series.deviation or [None] * len(series.points)
    for (interval, weight), exp, dev in zip(series.points, expected, deviation):
        writer.writerow((interval.label, weight, _format_optional(exp), _format_optional(dev)))
