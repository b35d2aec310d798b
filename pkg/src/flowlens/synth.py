"""Deterministic synthetic transaction scenarios with injected ground truth.

Baseline traffic is periodic with bounded jitter, standing in for recurring
payments; injections add ramped transfers source -> via -> sink starting at a
configured interval.  Every random draw comes from a stream keyed by
(seed, kind, entities, interval), so output is byte-stable for a given seed
and unchanged baseline draws survive adding or removing injections.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping

import yaml

from .graph import Bucket, _interval_index, _interval_label
from .ingest import TransactionRecord, _COUNTRY_CODES


@dataclass(frozen=True, slots=True)
class BaselinePattern:
    """Recurring transfer src -> dst: one transaction every ``period`` intervals."""

    src: str
    dst: str
    amount: int
    period: int = 1
    jitter: float = 0.0


@dataclass(frozen=True, slots=True)
class Injection:
    """Ramped transfer source -> via -> sink from interval ``start`` onward.

    The injected amount at interval t >= start is amount + slope * (t - start),
    emitted without jitter on both legs so per-interval totals are exact.
    """

    source: str
    sink: str
    via: str
    start: int
    amount: int
    slope: int = 0


@dataclass(frozen=True, slots=True)
class ScenarioConfig:
    rng_seed: int
    n_accounts: int
    n_institutions: int
    n_countries: int
    start: str
    n_intervals: int
    bucket: Bucket = Bucket.ISO_WEEK
    baseline: tuple[BaselinePattern, ...] = ()
    injections: tuple[Injection, ...] = ()


@dataclass(frozen=True, slots=True)
class InjectionTruth:
    source: str
    sink: str
    via: str
    start_label: str
    per_interval: Mapping[str, int]


@dataclass(frozen=True, slots=True)
class GroundTruth:
    injections: tuple[InjectionTruth, ...]

    def injected_nodes(self) -> list[str]:
        return sorted({inj.via for inj in self.injections})

    def to_json(self) -> str:
        return json.dumps(
            {
                "injections": [
                    {
                        "source": inj.source,
                        "sink": inj.sink,
                        "via": inj.via,
                        "start_label": inj.start_label,
                        "per_interval": dict(inj.per_interval),
                    }
                    for inj in self.injections
                ]
            },
            indent=2,
            sort_keys=True,
        )


@dataclass(frozen=True, slots=True)
class EntityHierarchy:
    """Accounts assigned round-robin to institutions, institutions to countries."""

    accounts: tuple[str, ...]
    institutions: tuple[str, ...]
    countries: tuple[str, ...]
    institution_of: Mapping[str, str]
    country_of: Mapping[str, str]


def build_hierarchy(config: ScenarioConfig) -> EntityHierarchy:
    if not 1 <= config.n_countries <= len(_COUNTRY_CODES):
        raise ValueError(f"n_countries must be in 1..{len(_COUNTRY_CODES)}")
    if config.n_institutions < 1 or config.n_accounts < 1:
        raise ValueError("need at least one institution and one account")
    countries = _COUNTRY_CODES[: config.n_countries]
    institutions = tuple(f"BANK{j:03d}" for j in range(config.n_institutions))
    accounts = tuple(f"ACC{i:04d}" for i in range(config.n_accounts))
    institution_of = {acc: institutions[i % len(institutions)] for i, acc in enumerate(accounts)}
    country_of = {inst: countries[j % len(countries)] for j, inst in enumerate(institutions)}
    return EntityHierarchy(accounts, institutions, countries, institution_of, country_of)


def _interval_window(index: int, bucket: Bucket) -> tuple[datetime, int]:
    """Start instant of the interval and its length in seconds."""
    if bucket is Bucket.DAY:
        start = date.fromordinal(index)
        days = 1
    elif bucket is Bucket.ISO_WEEK:
        start = date.fromordinal(index * 7 + 1)
        days = 7
    else:
        year, month = divmod(index, 12)
        start = date(year, month + 1, 1)
        nxt_year, nxt_month = divmod(index + 1, 12)
        days = (date(nxt_year, nxt_month + 1, 1) - start).days
    begin = datetime(start.year, start.month, start.day, tzinfo=timezone.utc)
    return begin, days * 86400


def _stream(config: ScenarioConfig, *key: object) -> random.Random:
    return random.Random("|".join(str(part) for part in (config.rng_seed, *key)))


def _validate(config: ScenarioConfig, hierarchy: EntityHierarchy) -> None:
    known = set(hierarchy.accounts)
    if config.n_intervals < 1:
        raise ValueError("n_intervals must be >= 1")
    for pattern in config.baseline:
        if pattern.src not in known or pattern.dst not in known:
            raise ValueError(f"baseline pattern references unknown account: {pattern}")
        if pattern.src == pattern.dst:
            raise ValueError("baseline pattern src and dst must differ")
        if pattern.period < 1:
            raise ValueError("pattern period must be >= 1")
        if pattern.amount < 0:
            raise ValueError("pattern amount must be >= 0")
        if not 0 <= pattern.jitter < 1:
            raise ValueError("jitter must be in [0, 1)")
    for injection in config.injections:
        for entity in (injection.source, injection.sink, injection.via):
            if entity not in known:
                raise ValueError(f"injection references unknown account: {entity}")
        if len({injection.source, injection.sink, injection.via}) != 3:
            raise ValueError("injection source, sink and via must be distinct")
        if injection.start * 4 <= config.n_intervals:
            raise ValueError(
                f"injection start {injection.start} must lie strictly after the "
                f"first quarter of the {config.n_intervals}-interval span"
            )
        if injection.start >= config.n_intervals:
            raise ValueError("injection start is beyond the span")
        for t in range(injection.start, config.n_intervals):
            if injection.amount + injection.slope * (t - injection.start) < 0:
                raise ValueError("injected amount must stay non-negative across the span")


def _record(
    hierarchy: EntityHierarchy, src: str, dst: str, ts: datetime, amount: int
) -> TransactionRecord:
    src_inst = hierarchy.institution_of[src]
    dst_inst = hierarchy.institution_of[dst]
    return TransactionRecord(
        timestamp=ts,
        sender_account=src,
        sender_institution=src_inst,
        sender_country=hierarchy.country_of[src_inst],
        receiver_account=dst,
        receiver_institution=dst_inst,
        receiver_country=hierarchy.country_of[dst_inst],
        amount=amount,
        currency="EUR",
    )


def generate(config: ScenarioConfig) -> tuple[list[TransactionRecord], GroundTruth]:
    """Emit the scenario's records (sorted, byte-stable) plus its ground truth."""
    hierarchy = build_hierarchy(config)
    _validate(config, hierarchy)
    first_index = _interval_index(
        datetime.combine(date.fromisoformat(config.start), datetime.min.time(), timezone.utc),
        config.bucket,
    )

    records: list[TransactionRecord] = []
    for t in range(config.n_intervals):
        begin, length = _interval_window(first_index + t, config.bucket)
        for pattern in config.baseline:
            if t % pattern.period != 0:
                continue
            rng = _stream(config, "base", pattern.src, pattern.dst, t)
            amount = round(pattern.amount * (1 + pattern.jitter * rng.uniform(-1, 1)))
            offset = rng.randrange(int(length * 0.05), int(length * 0.95))
            records.append(
                _record(hierarchy, pattern.src, pattern.dst, begin + timedelta(seconds=offset), amount)
            )
        for i, injection in enumerate(config.injections):
            if t < injection.start:
                continue
            injected = injection.amount + injection.slope * (t - injection.start)
            if injected == 0:
                continue
            rng = _stream(config, "inj", i, t)
            first_leg = rng.randrange(int(length * 0.20), int(length * 0.45))
            second_leg = rng.randrange(int(length * 0.55), int(length * 0.80))
            records.append(
                _record(hierarchy, injection.source, injection.via,
                        begin + timedelta(seconds=first_leg), injected)
            )
            records.append(
                _record(hierarchy, injection.via, injection.sink,
                        begin + timedelta(seconds=second_leg), injected)
            )

    records.sort(key=lambda r: (r.timestamp, r.sender_account, r.receiver_account, r.amount))

    truths = []
    for injection in config.injections:
        per_interval = {}
        for t in range(injection.start, config.n_intervals):
            injected = injection.amount + injection.slope * (t - injection.start)
            if injected:
                per_interval[_interval_label(first_index + t, config.bucket)] = injected
        truths.append(
            InjectionTruth(
                source=injection.source,
                sink=injection.sink,
                via=injection.via,
                start_label=_interval_label(first_index + injection.start, config.bucket),
                per_interval=per_interval,
            )
        )
    return records, GroundTruth(injections=tuple(truths))


def scenario_from_dict(data: Mapping) -> ScenarioConfig:
    required = ("rng_seed", "n_accounts", "n_institutions", "n_countries", "start", "n_intervals")
    missing = [key for key in required if key not in data]
    if missing:
        raise ValueError(f"scenario config is missing: {', '.join(missing)}")
    try:
        baseline = tuple(BaselinePattern(**p) for p in data.get("baseline", ()))
        injections = tuple(Injection(**i) for i in data.get("injections", ()))
    except TypeError as exc:
        raise ValueError(f"bad scenario entry: {exc}") from exc
    return ScenarioConfig(
        rng_seed=int(data["rng_seed"]),
        n_accounts=int(data["n_accounts"]),
        n_institutions=int(data["n_institutions"]),
        n_countries=int(data["n_countries"]),
        start=str(data["start"]),
        n_intervals=int(data["n_intervals"]),
        bucket=Bucket(data.get("bucket", Bucket.ISO_WEEK.value)),
        baseline=baseline,
        injections=injections,
    )


def scenario_to_dict(config: ScenarioConfig) -> dict:
    data = asdict(config)
    data["bucket"] = config.bucket.value
    data["baseline"] = [asdict(p) for p in config.baseline]
    data["injections"] = [asdict(i) for i in config.injections]
    return data


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Read a scenario config from YAML (JSON parses too)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"scenario file {path} does not hold a mapping")
    return scenario_from_dict(data)


def save_scenario(config: ScenarioConfig, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scenario_to_dict(config), fh, sort_keys=False)


def fan_scenario(
    rng_seed: int,
    n_intermediaries: int = 20,
    n_injected: int = 1,
    n_intervals: int = 60,
    injection_start: int = 45,
    base_amount: int = 200_000,
    jitter: float = 0.05,
    injected_amount: int | None = None,
    injected_slope: int = 0,
    start: str = "2022-01-03",
) -> ScenarioConfig:
    """Source -> intermediaries -> sink fan with a direct edge and injections.

    A compact scenario family for detection experiments: every intermediary
    relays a steady jittered flow, and ``n_injected`` of them (a seed-keyed
    choice) additionally carry a ramp starting at ``injection_start``.
    """
    n_accounts = n_intermediaries + 2
    accounts = [f"ACC{i:04d}" for i in range(n_accounts)]
    source, sink, intermediaries = accounts[0], accounts[1], accounts[2:]
    baseline = [BaselinePattern(src=source, dst=sink, amount=base_amount, jitter=jitter)]
    for node in intermediaries:
        baseline.append(BaselinePattern(src=source, dst=node, amount=base_amount, jitter=jitter))
        baseline.append(BaselinePattern(src=node, dst=sink, amount=base_amount, jitter=jitter))
    picker = random.Random(f"{rng_seed}|pick")
    injected_vias = picker.sample(intermediaries, n_injected)
    injections = tuple(
        Injection(
            source=source,
            sink=sink,
            via=via,
            start=injection_start,
            amount=base_amount if injected_amount is None else injected_amount,
            slope=injected_slope,
        )
        for via in sorted(injected_vias)
    )
    return ScenarioConfig(
        rng_seed=rng_seed,
        n_accounts=n_accounts,
        n_institutions=n_accounts,
        n_countries=min(n_accounts, len(_COUNTRY_CODES)),
        start=start,
        n_intervals=n_intervals,
        baseline=tuple(baseline),
        injections=injections,
    )
