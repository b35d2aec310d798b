"""Weighted directed temporal networks aggregated from transaction records.

One network per time interval at a chosen structural granularity (account,
institution or country).  Edge weights are summed amounts in minor units;
self-loops at the chosen granularity are dropped at build time because the
simple-path guard downstream can never traverse them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .ingest import TransactionRecord


class Granularity(str, Enum):
    ACCOUNT = "account"
    INSTITUTION = "institution"
    COUNTRY = "country"


class Bucket(str, Enum):
    DAY = "day"
    ISO_WEEK = "iso_week"
    CALENDAR_MONTH = "calendar_month"


@dataclass(frozen=True, slots=True)
class AggregationSpec:
    """Structural granularity plus time bucket for one network family."""

    granularity: Granularity
    bucket: Bucket


@dataclass(frozen=True, slots=True)
class IntervalId:
    """One time interval: canonical label plus integer ordinal.

    ``bucket_of`` returns absolute ordinals (days / ISO weeks / months since
    a fixed epoch); ``build_networks`` rebases its family to positions
    0..N-1.  Consecutive intervals always differ by exactly 1, and labels
    sort consistently with ordinals.  Code that mixes contexts must key by
    label.
    """

    label: str
    ordinal: int


def _interval_index(ts: datetime, bucket: Bucket) -> int:
    day = ts.astimezone(timezone.utc).date()
    if bucket is Bucket.DAY:
        return day.toordinal()
    if bucket is Bucket.ISO_WEEK:
        monday = day - timedelta(days=day.weekday())
        return monday.toordinal() // 7
    return day.year * 12 + day.month - 1


def _interval_label(index: int, bucket: Bucket) -> str:
    if bucket is Bucket.DAY:
        return date.fromordinal(index).isoformat()
    if bucket is Bucket.ISO_WEEK:
        monday = date.fromordinal(index * 7 + 1)
        iso = monday.isocalendar()
        return f"{iso[0]:04d}-W{iso[1]:02d}"
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


def bucket_of(ts: datetime, bucket: Bucket) -> IntervalId:
    """Map a UTC instant to its interval (ISO weeks start on Monday)."""
    index = _interval_index(ts, bucket)
    return IntervalId(label=_interval_label(index, bucket), ordinal=index)


_GRANULARITY_FIELDS = {
    Granularity.ACCOUNT: ("sender_account", "receiver_account"),
    Granularity.INSTITUTION: ("sender_institution", "receiver_institution"),
    Granularity.COUNTRY: ("sender_country", "receiver_country"),
}


def record_endpoints(record: TransactionRecord, granularity: Granularity) -> tuple[str, str]:
    src_field, dst_field = _GRANULARITY_FIELDS[granularity]
    return getattr(record, src_field), getattr(record, dst_field)


class TemporalNetwork:
    """Immutable weighted directed simple graph for one interval.

    At most one edge per ordered node pair (weights pre-summed), no
    self-loops, every weight positive.  Out-neighbors are stored sorted by
    node id ascending, which fixes the deterministic enumeration order used
    by the path search.
    """

    __slots__ = ("interval", "_adjacency", "_edges", "_nodes")

    def __init__(self, interval: IntervalId, edges: Mapping[tuple[str, str], int]):
        adjacency: dict[str, list[tuple[str, int]]] = {}
        flat: dict[tuple[str, str], int] = {}
        for (src, dst), weight in edges.items():
            if src == dst:
                raise ValueError(f"self-loop {src!r} is not allowed")
            if weight <= 0:
                raise ValueError(f"edge ({src!r}, {dst!r}) has non-positive weight {weight}")
            if (src, dst) in flat:
                raise ValueError(f"duplicate edge ({src!r}, {dst!r})")
            flat[(src, dst)] = weight
            adjacency.setdefault(src, []).append((dst, weight))
            adjacency.setdefault(dst, [])
        object.__setattr__(self, "interval", interval)
        object.__setattr__(self, "_edges", flat)
        object.__setattr__(
            self, "_adjacency", {node: tuple(sorted(out)) for node, out in adjacency.items()}
        )
        object.__setattr__(self, "_nodes", frozenset(adjacency))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("TemporalNetwork is immutable")

    def __contains__(self, node: str) -> bool:
        return node in self._nodes

    def __repr__(self) -> str:
        return (
            f"TemporalNetwork({self.interval.label!r}, nodes={len(self._nodes)}, "
            f"edges={len(self._edges)})"
        )

    @property
    def nodes(self) -> frozenset[str]:
        return self._nodes

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def max_out_degree(self) -> int:
        return max((len(out) for out in self._adjacency.values()), default=0)

    def out_edges(self, node: str) -> tuple[tuple[str, int], ...]:
        """Out-neighbors of ``node`` as (dst, weight), ascending by dst."""
        return self._adjacency.get(node, ())

    def weight(self, src: str, dst: str) -> int | None:
        return self._edges.get((src, dst))

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """All edges as (src, dst, weight), sorted."""
        for (src, dst), weight in sorted(self._edges.items()):
            yield src, dst, weight


def build_networks(
    records: Iterable[TransactionRecord], spec: AggregationSpec
) -> list[TemporalNetwork]:
    """Build one network per interval between the earliest and latest record.

    Gap intervals are materialized as empty networks so that downstream flow
    series are evenly spaced.  Records whose endpoints collapse to the same
    node at the chosen granularity contribute no edge; pairs whose amounts
    sum to zero are likewise omitted (edge weights must be positive).
    Interval ordinals are rebased to 0..N-1 within the returned family.
    """
    records = list(records)
    if not records:
        raise ValueError("cannot build networks from an empty record list")

    sums: dict[int, dict[tuple[str, str], int]] = {}
    lo = hi = None
    for record in records:
        index = _interval_index(record.timestamp, spec.bucket)
        lo = index if lo is None else min(lo, index)
        hi = index if hi is None else max(hi, index)
        src, dst = record_endpoints(record, spec.granularity)
        if src == dst:
            continue
        per_interval = sums.setdefault(index, {})
        per_interval[(src, dst)] = per_interval.get((src, dst), 0) + record.amount

    networks = []
    for index in range(lo, hi + 1):
        interval = IntervalId(label=_interval_label(index, spec.bucket), ordinal=index - lo)
        edges = {pair: w for pair, w in sums.get(index, {}).items() if w > 0}
        networks.append(TemporalNetwork(interval, edges))
    return networks


def write_networks(networks: Iterable[TemporalNetwork], out_dir: str | Path) -> list[Path]:
    """Export one ``src,dst,weight`` file per interval, named by its label."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for network in networks:
        path = out_dir / f"{network.interval.label}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("src", "dst", "weight"))
            for src, dst, weight in network.edges():
                writer.writerow((src, dst, weight))
        written.append(path)
    return written
