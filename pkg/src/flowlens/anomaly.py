"""Expectation baselines and deviation-based anomaly scoring for flow series.

Expectations are causal one-step-ahead forecasts: the value at t is predicted
from strictly earlier points, never from itself, so "expected vs actual"
comparisons stay meaningful.  Deviations are relative, which makes flag sets
and rankings invariant under uniform rescaling of all amounts.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path as FsPath
from typing import IO, Literal, Sequence

from .flows import FlowSeries, build_flow
from .graph import IntervalId, TemporalNetwork


class ExpectationMethod(str, Enum):
    WMA = "wma"
    EWMA = "ewma"


@dataclass(frozen=True, slots=True)
class ExpectationConfig:
    """Chosen expectation method with exactly its own parameters set."""

    method: ExpectationMethod
    threshold: float
    window: int | None = None
    alpha: float | None = None

    def __post_init__(self) -> None:
        if not self.threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if self.method is ExpectationMethod.WMA:
            if self.window is None or self.alpha is not None:
                raise ValueError("wma takes a window and no alpha")
            if self.window < 2:
                raise ValueError(f"window must be >= 2, got {self.window}")
        else:
            if self.alpha is None or self.window is not None:
                raise ValueError("ewma takes an alpha and no window")
            if not 0 < self.alpha <= 1:
                raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

    @classmethod
    def for_wma(cls, window: int = 8, threshold: float = 0.5) -> "ExpectationConfig":
        return cls(method=ExpectationMethod.WMA, threshold=threshold, window=window)

    @classmethod
    def for_ewma(cls, alpha: float = 0.3, threshold: float = 0.5) -> "ExpectationConfig":
        return cls(method=ExpectationMethod.EWMA, threshold=threshold, alpha=alpha)

    @property
    def min_history(self) -> int:
        """Points needed before the first defined expectation."""
        return self.window if self.method is ExpectationMethod.WMA else 1


@dataclass(frozen=True, slots=True)
class AnomalyFlag:
    interval: IntervalId
    actual: float
    expected: float
    deviation: float
    direction: Literal["positive", "negative"]


@dataclass(frozen=True, slots=True)
class IntermediaryRankingRow:
    node: str
    difference: float
    n_intervals_post_cutoff: int
    newly_active: bool


@dataclass(frozen=True, slots=True)
class RankingResult:
    """Ranked intermediaries plus nodes with no history to rank against.

    ``newly_active`` holds intermediaries whose every post-cutoff deviation
    was infinite (zero expectation, positive flow): their growth is unbounded
    by construction, so they are reported separately instead of being mixed
    into the ranking.
    """

    rows: tuple[IntermediaryRankingRow, ...]
    newly_active: tuple[str, ...]


def wma(series: Sequence[float], window: int) -> list[float | None]:
    """Linearly weighted moving average, one step ahead.

    expected[t] averages the ``window`` points before t with weights
    1..window (most recent heaviest); the first ``window`` entries are None.
    """
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    if len(series) < window + 1:
        raise ValueError(f"series of {len(series)} points is too short for window {window}")
    denominator = window * (window + 1) // 2
    expected: list[float | None] = [None] * window
    for t in range(window, len(series)):
        acc = 0.0
        for i in range(1, window + 1):
            acc += i * series[t - window - 1 + i]
        expected.append(acc / denominator)
    return expected


def ewma(series: Sequence[float], alpha: float) -> list[float | None]:
    """Exponentially weighted moving average, one step ahead.

    Seeded with the first observation: expected[1] = x[0], then
    expected[t] = alpha * x[t-1] + (1 - alpha) * expected[t-1].
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if len(series) < 2:
        raise ValueError("series needs at least 2 points")
    expected: list[float | None] = [None, float(series[0])]
    for t in range(2, len(series)):
        expected.append(alpha * series[t - 1] + (1 - alpha) * expected[-1])
    return expected


def expectation(series: Sequence[float], config: ExpectationConfig) -> list[float | None]:
    if config.method is ExpectationMethod.WMA:
        return wma(series, config.window)
    return ewma(series, config.alpha)


def pct_deviation(actual: float, expected: float) -> float:
    """Relative deviation (actual - expected) / expected.

    Zero when both are zero; an infinite sentinel when the expectation is
    zero but the actual value is not (always beyond any finite threshold).
    """
    if expected < 0:
        raise ValueError(f"expected value must be non-negative, got {expected}")
    if expected == 0:
        return 0.0 if actual == 0 else math.copysign(math.inf, actual)
    return (actual - expected) / expected


def flag_anomalies(series: FlowSeries, config: ExpectationConfig) -> list[AnomalyFlag]:
    """Flag intervals whose |relative deviation| exceeds the threshold.

    Fills series.expected and series.deviation in place as a side product.
    """
    weights = series.weights()
    expected = expectation(weights, config)
    deviation: list[float | None] = [
        None if exp is None else pct_deviation(actual, exp)
        for actual, exp in zip(weights, expected)
    ]
    series.expected = expected
    series.deviation = deviation

    flags = []
    for (interval, actual), exp, dev in zip(series.points, expected, deviation):
        if dev is None or not abs(dev) > config.threshold:
            continue
        flags.append(
            AnomalyFlag(
                interval=interval,
                actual=actual,
                expected=exp,
                deviation=dev,
                direction="positive" if dev > 0 else "negative",
            )
        )
    return flags


def normalize_series(values: Sequence[float]) -> list[float]:
    """Scale a series into [0, 1] by its maximum (which maps to exactly 1)."""
    peak = max(values, default=0)
    if peak <= 0:
        raise ValueError("cannot normalize a series with no positive value")
    return [v / peak for v in values]


def _resolve_cutoff(networks: Sequence[TemporalNetwork], cutoff: IntervalId | str) -> int:
    label = cutoff.label if isinstance(cutoff, IntervalId) else cutoff
    for position, network in enumerate(networks):
        if network.interval.label == label:
            return position
    raise ValueError(f"cutoff {label!r} is not an interval of this network family")


def rank_intermediaries(
    networks: Sequence[TemporalNetwork],
    source: str,
    sink: str,
    max_len: int,
    cutoff: IntervalId | str,
    config: ExpectationConfig,
    statistic: Literal["mean", "max"] = "mean",
) -> RankingResult:
    """Rank interior nodes by post-cutoff growth over their expected through-flow.

    For every node appearing strictly inside any source->sink path, the
    through-flow series is scored with the configured expectation; the
    ranking statistic aggregates relative deviations over the intervals from
    the cutoff onward (mean by default, max optionally).  Infinite
    deviations are excluded from the aggregate but recorded; nodes with only
    infinite deviations land in the newly_active list.
    """
    position = _resolve_cutoff(networks, cutoff)
    if position < config.min_history:
        raise ValueError(
            f"insufficient pre-cutoff history: need {config.min_history} intervals "
            f"before the cutoff, have {position}"
        )

    n_intervals = len(networks)
    through: dict[str, list[int]] = {}
    for t, network in enumerate(networks):
        flow = build_flow(network, source, sink, max_len)
        for path in flow.paths:
            bottleneck = min(path.edge_weights)
            for node in path.nodes[1:-1]:
                through.setdefault(node, [0] * n_intervals)[t] += bottleneck

    rows = []
    newly_active_only = []
    for node in sorted(through):
        series = through[node]
        expected = expectation(series, config)
        deviations = [
            pct_deviation(series[t], expected[t]) for t in range(position, n_intervals)
        ]
        finite = [d for d in deviations if math.isfinite(d)]
        if not finite:
            newly_active_only.append(node)
            continue
        difference = max(finite) if statistic == "max" else sum(finite) / len(finite)
        rows.append(
            IntermediaryRankingRow(
                node=node,
                difference=difference,
                n_intervals_post_cutoff=len(finite),
                newly_active=len(finite) < len(deviations),
            )
        )
    rows.sort(key=lambda row: (-row.difference, row.node))
    return RankingResult(rows=tuple(rows), newly_active=tuple(newly_active_only))


RANKING_HEADER = ("node", "difference", "n_intervals_post_cutoff", "newly_active_flag")
FLAGS_HEADER = ("interval", "actual", "expected", "deviation", "direction")


def write_ranking(result: RankingResult, out: IO[str] | str | FsPath) -> None:
    """Ranked rows first, then unrankable newly-active nodes with no score."""
    if isinstance(out, (str, FsPath)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_ranking(result, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RANKING_HEADER)
    for row in result.rows:
        writer.writerow((row.node, repr(row.difference), row.n_intervals_post_cutoff,
                         "true" if row.newly_active else "false"))
    for node in result.newly_active:
        writer.writerow((node, "", 0, "true"))


def write_flags(flags: Sequence[AnomalyFlag], out: IO[str] | str | FsPath) -> None:
    if isinstance(out, (str, FsPath)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_flags(flags, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FLAGS_HEADER)
    for flag in flags:
        writer.writerow(
            (flag.interval.label, flag.actual, repr(flag.expected), repr(flag.deviation), flag.direction)
        )
