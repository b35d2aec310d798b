#!/usr/bin/env python3
"""Benchmark bounded-path enumeration and check the call-count bound.

Builds random networks of increasing size, enumerates depth-bounded paths
from the max-out-degree seed, and reports wall time, path count, and the
instrumented call count against (n+1) * max_out_degree^n.
"""

import argparse
import random
import time

from flowlens.graph import IntervalId, TemporalNetwork
from flowlens.pathfinder import count_calls, find_paths


def build_random(rng: random.Random, n_nodes: int, n_edges: int) -> TemporalNetwork:
    edges = {}
    while len(edges) < n_edges:
        src = rng.randrange(n_nodes)
        dst = rng.randrange(n_nodes)
        if src != dst:
            edges[(f"n{src:05d}", f"n{dst:05d}")] = rng.randint(1, 1_000_000)
    return TemporalNetwork(IntervalId("bench", 0), edges)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-len", type=int, default=3)
    parser.add_argument("--seed", type=int, default=9)
    args = parser.parse_args()

    print(f"{'nodes':>7} {'edges':>8} {'d_out':>6} {'paths':>9} {'calls':>9} "
          f"{'bound':>12} {'seconds':>8}")
    for n_nodes, n_edges in ((500, 5_000), (2_000, 20_000), (5_000, 50_000), (10_000, 100_000)):
        network = build_random(random.Random(args.seed), n_nodes, n_edges)
        seed_node = max(network.nodes, key=lambda v: (len(network.out_edges(v)), v))
        degree = network.max_out_degree

        start = time.perf_counter()
        paths = find_paths(network, seed_node, args.max_len)
        elapsed = time.perf_counter() - start

        calls = count_calls(network, seed_node, args.max_len)
        bound = (args.max_len + 1) * degree**args.max_len
        status = "ok" if calls <= bound else "VIOLATED"
        print(f"{n_nodes:>7} {n_edges:>8} {degree:>6} {len(paths):>9} {calls:>9} "
              f"{bound:>12} {elapsed:>8.3f}  {status}")


if __name__ == "__main__":
    main()
