"""Read-only HTTP query service over a dataset snapshot.

Endpoints are synchronous and run in the server's worker threadpool, so a
long path enumeration does not stall unrelated queries.  Responses are pure
functions of (snapshot, query string): no mutation endpoints exist.

Infinite deviations (flow appearing where the expectation is zero) are
serialized as the JSON string "inf"; undefined expectations are null.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .anomaly import ExpectationConfig, ExpectationMethod, flag_anomalies, rank_intermediaries
from .flows import FlowSeries, path_table_rows, through_series
from .graph import AggregationSpec, Bucket, Granularity
from .snapshot import DatasetSnapshot


def _finite(value: float | None) -> float | str | None:
    if value is None:
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _bad_request(reason: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"reason": reason})


def _not_found(reason: str) -> HTTPException:
    return HTTPException(status_code=404, detail={"reason": reason})


def _unprocessable(reason: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"reason": reason})


def create_app(snapshot: DatasetSnapshot) -> FastAPI:
    app = FastAPI(title="flowlens query service", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    def malformed_query(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": {"reason": str(exc.errors())}})

    def resolve_spec(granularity: str | None, bucket: str | None) -> AggregationSpec:
        spec = snapshot.default_spec
        try:
            if granularity is not None:
                spec = AggregationSpec(Granularity(granularity), spec.bucket)
            if bucket is not None:
                spec = AggregationSpec(spec.granularity, Bucket(bucket))
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        return spec

    def require_known(spec: AggregationSpec, **entities: str) -> None:
        known = snapshot.known_entities(spec)
        for name, value in entities.items():
            if value not in known:
                raise _not_found(f"unknown entity {value!r} for {name}")

    def expectation_config(
        method: str, window: int, alpha: float, threshold: float
    ) -> ExpectationConfig:
        try:
            kind = ExpectationMethod(method)
        except ValueError as exc:
            raise _bad_request(f"unknown method {method!r}") from exc
        try:
            if kind is ExpectationMethod.WMA:
                return ExpectationConfig.for_wma(window=window, threshold=threshold)
            return ExpectationConfig.for_ewma(alpha=alpha, threshold=threshold)
        except ValueError as exc:
            raise _unprocessable(str(exc)) from exc

    def series_payload(series: FlowSeries) -> list[dict]:
        expected = series.expected or [None] * len(series.points)
        deviation = series.deviation or [None] * len(series.points)
        return [
            {
                "interval": interval.label,
                "weight": weight,
                "expected": _finite(exp),
                "deviation": _finite(dev),
            }
            for (interval, weight), exp, dev in zip(series.points, expected, deviation)
        ]

    @app.get("/meta")
    def meta() -> dict:
        return snapshot.meta()

    @app.get("/paths")
    def paths(
        seed: str,
        n: int,
        interval: str,
        dst: str | None = None,
        page: int = Query(default=0, ge=0),
        page_size: int = Query(default=500, ge=1, le=10_000),
        granularity: str | None = None,
        bucket: str | None = None,
    ) -> dict:
        spec = resolve_spec(granularity, bucket)
        if n < 1:
            raise _unprocessable("n must be >= 1")
        require_known(spec, seed=seed, **({"dst": dst} if dst is not None else {}))
        if snapshot.network_at(spec, interval) is None:
            raise _not_found(f"unknown interval {interval!r}")
        found = snapshot.paths_at(spec, interval, seed, n)
        if dst is not None:
            found = tuple(p for p in found if p.terminal == dst)
        rows = path_table_rows(found)
        start = page * page_size
        return {
            "rows": [
                {
                    "interval": row.interval,
                    "path_nodes": list(row.path_nodes),
                    "edge_weights": list(row.edge_weights),
                    "terminal": row.terminal,
                    "min_weight": row.min_weight,
                }
                for row in rows[start : start + page_size]
            ],
            "page": page,
            "page_size": page_size,
            "total_rows": len(rows),
        }

    @app.get("/flow/series")
    def flow_series_endpoint(
        src: str,
        dst: str,
        n: int,
        method: str = "wma",
        window: int = 8,
        alpha: float = 0.3,
        threshold: float = 0.5,
        granularity: str | None = None,
        bucket: str | None = None,
    ) -> dict:
        spec = resolve_spec(granularity, bucket)
        if n < 1:
            raise _unprocessable("n must be >= 1")
        require_known(spec, src=src, dst=dst)
        if src == dst:
            raise _unprocessable("src and dst must differ")
        config = expectation_config(method, window, alpha, threshold)
        networks = snapshot.family(spec)
        series = FlowSeries(
            source=src,
            sink=dst,
            max_len=n,
            points=[
                (net.interval, sum(min(p.edge_weights) for p in snapshot.paths_at(spec, net.interval.label, src, n) if p.terminal == dst))
                for net in networks
            ],
        )
        try:
            flags = flag_anomalies(series, config)
        except ValueError as exc:
            raise _unprocessable(str(exc)) from exc
        return {
            "source": series.source,
            "sink": series.sink,
            "max_len": series.max_len,
            "points": series_payload(series),
            "flags": [
                {
                    "interval": flag.interval.label,
                    "actual": flag.actual,
                    "expected": _finite(flag.expected),
                    "deviation": _finite(flag.deviation),
                    "direction": flag.direction,
                }
                for flag in flags
            ],
        }

    @app.get("/flow/intermediaries")
    def intermediaries(
        src: str,
        dst: str,
        n: int,
        cutoff: str,
        method: str = "wma",
        window: int = 8,
        alpha: float = 0.3,
        threshold: float = 0.5,
        statistic: str = "mean",
        granularity: str | None = None,
        bucket: str | None = None,
    ) -> dict:
        spec = resolve_spec(granularity, bucket)
        if n < 1:
            raise _unprocessable("n must be >= 1")
        if statistic not in ("mean", "max"):
            raise _bad_request(f"unknown statistic {statistic!r}")
        require_known(spec, src=src, dst=dst)
        if src == dst:
            raise _unprocessable("src and dst must differ")
        config = expectation_config(method, window, alpha, threshold)
        networks = snapshot.family(spec)
        if snapshot.network_at(spec, cutoff) is None:
            raise _not_found(f"unknown interval {cutoff!r}")
        try:
            result = rank_intermediaries(networks, src, dst, n, cutoff, config, statistic)
        except ValueError as exc:
            raise _unprocessable(str(exc)) from exc
        return {
            "rows": [
                {
                    "node": row.node,
                    "difference": row.difference,
                    "n_intervals_post_cutoff": row.n_intervals_post_cutoff,
                    "newly_active_flag": row.newly_active,
                }
                for row in result.rows
            ],
            "newly_active": list(result.newly_active),
        }

    @app.get("/flow/through")
    def through(
        src: str,
        dst: str,
        n: int,
        via: str,
        granularity: str | None = None,
        bucket: str | None = None,
    ) -> dict:
        spec = resolve_spec(granularity, bucket)
        if n < 1:
            raise _unprocessable("n must be >= 1")
        require_known(spec, src=src, dst=dst, via=via)
        if via in (src, dst):
            raise _unprocessable("via must differ from both src and dst")
        if src == dst:
            raise _unprocessable("src and dst must differ")
        series = through_series(snapshot.family(spec), src, dst, n, via)
        return {
            "source": series.source,
            "sink": series.sink,
            "via": via,
            "max_len": series.max_len,
            "points": series_payload(series),
        }

    @app.get("/edge/series")
    def edge_series(
        src: str,
        dst: str,
        granularity: str | None = None,
        bucket: str | None = None,
    ) -> dict:
        spec = resolve_spec(granularity, bucket)
        require_known(spec, src=src, dst=dst)
        points = [
            {"interval": net.interval.label, "weight": net.weight(src, dst) or 0}
            for net in snapshot.family(spec)
        ]
        return {"src": src, "dst": dst, "points": points}

    return app
