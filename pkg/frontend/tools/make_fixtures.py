#!/usr/bin/env python3
"""Capture real query-service responses as frozen JSON test fixtures.

Run from the repository root after installing the Python package:

    python frontend/tools/make_fixtures.py

Two datasets are served in-process: the ten-week relay fixture used across
the engine tests, and a small synthetic fan scenario with one injected ramp
for the drill-down tests.  Regenerate whenever the API contract changes.
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from flowlens.graph import AggregationSpec, Bucket, Granularity, build_networks
from flowlens.service import create_app
from flowlens.snapshot import DatasetSnapshot
from flowlens.synth import fan_scenario, generate

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))
from helpers import relay_records, ten_week_records  # noqa: E402

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
ACCOUNT_WEEKLY = AggregationSpec(Granularity.ACCOUNT, Bucket.ISO_WEEK)


def dump(name: str, payload: object) -> None:
    target = FIXTURE_DIR / f"{name}.json"
    target.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    print(f"wrote {target.relative_to(Path.cwd())}" if target.is_relative_to(Path.cwd()) else f"wrote {target}")


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)

    relay = TestClient(create_app(DatasetSnapshot(ten_week_records(), default_spec=ACCOUNT_WEEKLY)))
    dump("meta", relay.get("/meta").json())
    dump("paths_all", relay.get("/paths", params={"seed": "x", "n": 3, "interval": "2022-W08"}).json())
    dump("paths_dst_y", relay.get(
        "/paths", params={"seed": "x", "n": 3, "interval": "2022-W08", "dst": "y"}
    ).json())
    dump("flow_series", relay.get("/flow/series", params={"src": "x", "dst": "y", "n": 3}).json())
    dump("through_k", relay.get(
        "/flow/through", params={"src": "x", "dst": "y", "n": 3, "via": "k"}
    ).json())
    dump("edge_x_y", relay.get("/edge/series", params={"src": "x", "dst": "y"}).json())

    short = TestClient(create_app(DatasetSnapshot(relay_records(), default_spec=ACCOUNT_WEEKLY)))
    response = short.get("/flow/series", params={"src": "x", "dst": "y", "n": 3})
    dump("series_too_short", {"status": response.status_code, "body": response.json()})

    scenario = fan_scenario(rng_seed=0, n_intermediaries=8, n_injected=1,
                            n_intervals=24, injection_start=16,
                            base_amount=100_000, injected_slope=100_000)
    records, truth = generate(scenario)
    injected = truth.injections[0].via
    cutoff = truth.injections[0].start_label
    snapshot = DatasetSnapshot(records, default_spec=ACCOUNT_WEEKLY)
    fan = TestClient(create_app(snapshot))
    params = {"src": "ACC0000", "dst": "ACC0001", "n": 3}
    dump("scenario_ranking", fan.get(
        "/flow/intermediaries", params={**params, "cutoff": cutoff, "window": 6}
    ).json())
    dump("scenario_through_injected", fan.get(
        "/flow/through", params={**params, "via": injected}
    ).json())
    dump("scenario_edge_first_leg", fan.get(
        "/edge/series", params={"src": "ACC0000", "dst": injected}
    ).json())
    dump("scenario_edge_second_leg", fan.get(
        "/edge/series", params={"src": injected, "dst": "ACC0001"}
    ).json())
    dump("scenario_flow_series", fan.get(
        "/flow/series", params={**params, "window": 6}
    ).json())
    dump("scenario_info", {"injected": injected, "cutoff": cutoff})


if __name__ == "__main__":
    main()
