"""Bounded-length simple-path enumeration from a seed node.

The search is a depth-first walk that visits out-neighbors in ascending node
order and never revisits a node already on the current path, so for a given
network the output order is fully deterministic.  Paths are emitted through
a streaming iterator; callers that only need one endpoint can filter without
materializing the whole path set.  ``brute_force_paths`` is a deliberately
naive reference used to cross-check the search on small networks.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from datetime import datetime
from itertools import permutations
from typing import Iterable, Iterator

from .graph import AggregationSpec, IntervalId, TemporalNetwork, bucket_of, record_endpoints
from .ingest import TransactionRecord

BRUTE_FORCE_NODE_LIMIT = 12


@dataclass(frozen=True, slots=True)
class Path:
    """An ordered walk over distinct nodes with its per-edge weights."""

    nodes: tuple[str, ...]
    edge_weights: tuple[int, ...]
    interval: IntervalId

    def __post_init__(self) -> None:
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least one edge")
        if len(self.edge_weights) != len(self.nodes) - 1:
            raise ValueError("edge_weights length must be node count - 1")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path nodes must be distinct")

    @property
    def edge_length(self) -> int:
        return len(self.edge_weights)

    @property
    def terminal(self) -> str:
        return self.nodes[-1]

    def edges(self) -> Iterator[tuple[str, str]]:
        return zip(self.nodes, self.nodes[1:])


class _CallCounter:
    __slots__ = ("calls",)

    def __init__(self) -> None:
        self.calls = 0


def iter_paths(
    network: TemporalNetwork,
    seed: str,
    max_len: int,
    _counter: _CallCounter | None = None,
) -> Iterator[Path]:
    """Yield every simple path of edge-length 1..max_len starting at seed.

    Order is depth-first with out-neighbors ascending, each path yielded
    before any of its extensions (output is prefix-closed).  A seed absent
    from the network yields nothing; the zero-edge path [seed] is never
    yielded.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if seed not in network:
        return
    interval = network.interval
    nodes: list[str] = [seed]
    weights: list[int] = []
    on_path = {seed}

    def visit(node: str, remaining: int) -> Iterator[Path]:
        if _counter is not None:
            _counter.calls += 1
        if weights:
            yield Path(tuple(nodes), tuple(weights), interval)
        if remaining == 0:
            return
        for neighbor, weight in network.out_edges(node):
            if neighbor in on_path:
                continue
            nodes.append(neighbor)
            weights.append(weight)
            on_path.add(neighbor)
            yield from visit(neighbor, remaining - 1)
            on_path.discard(neighbor)
            nodes.pop()
            weights.pop()

    yield from visit(seed, max_len)


def find_paths(network: TemporalNetwork, seed: str, max_len: int) -> list[Path]:
    """Materialized iter_paths, for table export and tests."""
    return list(iter_paths(network, seed, max_len))


def count_calls(network: TemporalNetwork, seed: str, max_len: int) -> int:
    """Number of node visits the search performs, one per recursive step.

    Revisits are pruned before descending, so this never exceeds the
    unpruned recursion count and stays within
    (max_len + 1) * max_out_degree ** max_len whenever max_out_degree >= 1.
    """
    counter = _CallCounter()
    for _ in iter_paths(network, seed, max_len, _counter=counter):
        pass
    return counter.calls


def brute_force_paths(network: TemporalNetwork, seed: str, max_len: int) -> list[Path]:
    """Reference enumeration: try every distinct-node sequence from seed.

    Exponential in the node count, guarded to networks of at most
    BRUTE_FORCE_NODE_LIMIT nodes.  Set-equality with find_paths is the
    contract; the output order here is lexicographic, not depth-first.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if network.node_count > BRUTE_FORCE_NODE_LIMIT:
        raise ValueError(
            f"brute force is limited to {BRUTE_FORCE_NODE_LIMIT} nodes, "
            f"network has {network.node_count}"
        )
    if seed not in network:
        return []
    others = sorted(network.nodes - {seed})
    found = []
    for length in range(1, max_len + 1):
        for tail in permutations(others, length):
            sequence = (seed, *tail)
            weights = []
            for src, dst in zip(sequence, sequence[1:]):
                weight = network.weight(src, dst)
                if weight is None:
                    break
                weights.append(weight)
            else:
                found.append(Path(sequence, tuple(weights), network.interval))
    return found


def temporal_feasibility(
    records: Iterable[TransactionRecord], path: Path, spec: AggregationSpec
) -> bool:
    """Check whether aggregated path order is realizable transaction order.

    True iff one underlying record per path edge can be chosen, all within
    the path's interval, with strictly increasing timestamps along the path.
    False marks the path as an artifact of interval aggregation.
    """
    per_edge: list[list[datetime]] = [[] for _ in range(path.edge_length)]
    edge_index = {edge: i for i, edge in enumerate(path.edges())}
    label = path.interval.label
    for record in records:
        if bucket_of(record.timestamp, spec.bucket).label != label:
            continue
        idx = edge_index.get(record_endpoints(record, spec.granularity))
        if idx is not None:
            per_edge[idx].append(record.timestamp)

    # Greedy earliest-feasible choice per edge is exact for a chain of
    # strict inequalities.
    current = None
    for stamps in per_edge:
        if not stamps:
            return False
        stamps.sort()
        if current is None:
            current = stamps[0]
            continue
        pos = bisect_right(stamps, current)
        if pos == len(stamps):
            return False
        current = stamps[pos]
    return True
