"""Shared builders for tests: canned networks, records and random graphs."""

from __future__ import annotations

import random
from datetime import datetime, timezone

from flowlens.graph import IntervalId, TemporalNetwork
from flowlens.ingest import TransactionRecord

# Five-node relay fixture: x reaches y directly and through h, k and z.
# Per-path bottlenecks are 100 (x-h-k-y), 1000 (x-k-y), 500 (x-z-y) and
# 250 (x-y), so the depth-3 flow from x to y weighs 1850.
RELAY_EDGES = {
    ("x", "h"): 300,
    ("h", "k"): 100,
    ("k", "y"): 1200,
    ("x", "k"): 1000,
    ("x", "z"): 500,
    ("z", "y"): 700,
    ("x", "y"): 250,
}
RELAY_FLOW_WEIGHT = 1850
RELAY_PATH_MINS = {
    ("x", "h", "k", "y"): 100,
    ("x", "k", "y"): 1000,
    ("x", "z", "y"): 500,
    ("x", "y"): 250,
}


def ts(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(timezone.utc)


def make_network(
    edges: dict[tuple[str, str], int], label: str = "2022-W08", ordinal: int = 0
) -> TemporalNetwork:
    return TemporalNetwork(IntervalId(label=label, ordinal=ordinal), edges)


def relay_network(label: str = "2022-W08", ordinal: int = 0) -> TemporalNetwork:
    return make_network(RELAY_EDGES, label=label, ordinal=ordinal)


def make_record(
    src: str,
    dst: str,
    amount: int,
    when: str = "2022-02-24T10:00:00Z",
    src_country: str = "AA",
    dst_country: str = "BB",
    currency: str = "EUR",
) -> TransactionRecord:
    return TransactionRecord(
        timestamp=ts(when),
        sender_account=src,
        sender_institution=f"inst-{src}",
        sender_country=src_country,
        receiver_account=dst,
        receiver_institution=f"inst-{dst}",
        receiver_country=dst_country,
        amount=amount,
        currency=currency,
    )


def relay_records(week_day: str = "2022-02-24") -> list[TransactionRecord]:
    """One record per relay edge, hours ordered along the 3-hop path."""
    hours = {
        ("x", "h"): "08", ("h", "k"): "09", ("k", "y"): "10",
        ("x", "k"): "11", ("x", "z"): "12", ("z", "y"): "13",
        ("x", "y"): "14",
    }
    return [
        make_record(src, dst, amount, when=f"{week_day}T{hours[(src, dst)]}:00:00Z")
        for (src, dst), amount in RELAY_EDGES.items()
    ]


# Mondays of 2022-W01 .. 2022-W10
WEEK_MONDAYS = [
    "2022-01-03", "2022-01-10", "2022-01-17", "2022-01-24", "2022-01-31",
    "2022-02-07", "2022-02-14", "2022-02-21", "2022-02-28", "2022-03-07",
]


def ten_week_records() -> list[TransactionRecord]:
    """Relay burst in W08 over ten weeks of steady background traffic."""
    records = list(relay_records(week_day="2022-02-24"))
    for monday in WEEK_MONDAYS:
        records.append(make_record("bg1", "bg2", 10, when=f"{monday}T12:00:00Z"))
    return records


def random_network(
    rng: random.Random,
    n_nodes: int,
    edge_prob: float = 0.3,
    max_weight: int = 10_000,
    label: str = "2022-W01",
) -> TemporalNetwork:
    nodes = [f"n{i:02d}" for i in range(n_nodes)]
    edges = {}
    for src in nodes:
        for dst in nodes:
            if src != dst and rng.random() < edge_prob:
                edges[(src, dst)] = rng.randint(1, max_weight)
    return TemporalNetwork(IntervalId(label=label, ordinal=0), edges)
