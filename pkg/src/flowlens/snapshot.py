"""Immutable dataset snapshot backing the CLI and the query service.

A snapshot wraps one parsed record set; network families per aggregation
spec are built lazily and cached, and hot path enumerations are memoized.
All answers derived from a snapshot are pure functions of (snapshot, query),
so caching can never change a response.
"""

from __future__ import annotations

import hashlib
import io
import threading
from functools import lru_cache
from pathlib import Path as FsPath

from .graph import AggregationSpec, Bucket, Granularity, TemporalNetwork, build_networks
from .ingest import TransactionRecord, parse_transactions, serialize_transactions
from .pathfinder import Path, find_paths

RECORDS_FILENAME = "records.csv"
PSEUDONYMS_FILENAME = "pseudonyms.csv"

DEFAULT_SPEC = AggregationSpec(granularity=Granularity.INSTITUTION, bucket=Bucket.ISO_WEEK)


class DatasetSnapshot:
    """One version of the data; all queries are answered against it."""

    def __init__(
        self,
        records: list[TransactionRecord],
        default_spec: AggregationSpec = DEFAULT_SPEC,
        pseudonym_map_path: str | None = None,
    ):
        if not records:
            raise ValueError("snapshot needs at least one record")
        self.records = tuple(records)
        self.default_spec = default_spec
        self.pseudonym_map_path = pseudonym_map_path
        buffer = io.StringIO()
        serialize_transactions(self.records, buffer)
        self.checksum = hashlib.sha256(buffer.getvalue().encode("utf-8")).hexdigest()
        self._families: dict[AggregationSpec, tuple[TemporalNetwork, ...]] = {}
        self._universes: dict[AggregationSpec, frozenset[str]] = {}
        self._lock = threading.Lock()
        self._paths_cached = lru_cache(maxsize=256)(self._enumerate)

    @classmethod
    def load(cls, data_dir: str | FsPath, default_spec: AggregationSpec = DEFAULT_SPEC) -> "DatasetSnapshot":
        data_dir = FsPath(data_dir)
        records_path = data_dir / RECORDS_FILENAME
        records, errors = parse_transactions(records_path)
        if errors:
            raise ValueError(
                f"{records_path} contains {len(errors)} malformed row(s); "
                f"first: row {errors[0].row}: {errors[0].reason}"
            )
        pseudonyms = data_dir / PSEUDONYMS_FILENAME
        return cls(
            records,
            default_spec=default_spec,
            pseudonym_map_path=str(pseudonyms) if pseudonyms.exists() else None,
        )

    def family(self, spec: AggregationSpec | None = None) -> tuple[TemporalNetwork, ...]:
        spec = spec or self.default_spec
        with self._lock:
            networks = self._families.get(spec)
            if networks is None:
                networks = tuple(build_networks(self.records, spec))
                self._families[spec] = networks
                self._universes[spec] = frozenset().union(*(n.nodes for n in networks))
            return networks

    def known_entities(self, spec: AggregationSpec | None = None) -> frozenset[str]:
        """Every node id appearing in any interval of the family."""
        spec = spec or self.default_spec
        self.family(spec)
        return self._universes[spec]

    def network_at(self, spec: AggregationSpec | None, interval_label: str) -> TemporalNetwork | None:
        for network in self.family(spec):
            if network.interval.label == interval_label:
                return network
        return None

    def _enumerate(
        self, spec: AggregationSpec, interval_label: str, seed: str, max_len: int
    ) -> tuple[Path, ...]:
        network = self.network_at(spec, interval_label)
        if network is None:
            return ()
        return tuple(find_paths(network, seed, max_len))

    def paths_at(
        self,
        spec: AggregationSpec | None,
        interval_label: str,
        seed: str,
        max_len: int,
    ) -> tuple[Path, ...]:
        """Memoized enumeration for hot (seed, max_len, interval) triples."""
        return self._paths_cached(spec or self.default_spec, interval_label, seed, max_len)

    def meta(self) -> dict:
        family = self.family(self.default_spec)
        return {
            "record_count": len(self.records),
            "checksum": self.checksum,
            "default_granularity": self.default_spec.granularity.value,
            "default_bucket": self.default_spec.bucket.value,
            "granularities": [g.value for g in Granularity],
            "buckets": [b.value for b in Bucket],
            "interval_range": {
                "first": family[0].interval.label,
                "last": family[-1].interval.label,
                "count": len(family),
            },
            "pseudonym_map": self.pseudonym_map_path,
        }
