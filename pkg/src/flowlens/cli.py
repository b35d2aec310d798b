"""Batch command line for the investigation pipeline.

Subcommands mirror the pipeline: ingest raw files, build temporal networks,
enumerate paths from a seed, compute flow series, flag anomalies, rank
intermediaries, generate synthetic scenarios and serve the query API.
Exit codes: 0 success, 1 usage error, 2 data error.  All outputs are
byte-identical across runs on the same inputs.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import anomaly, flows, graph, ingest, synth
from .graph import AggregationSpec, Bucket, Granularity
from .snapshot import DatasetSnapshot, PSEUDONYMS_FILENAME, RECORDS_FILENAME

_GRANULARITY = click.Choice([g.value for g in Granularity])
_BUCKET = click.Choice([b.value for b in Bucket])
_METHOD = click.Choice(["wma", "ewma"])


def _spec_options(fn):
    fn = click.option("--granularity", type=_GRANULARITY, default=Granularity.INSTITUTION.value,
                      show_default=True, help="Node identity used for aggregation.")(fn)
    fn = click.option("--bucket", type=_BUCKET, default=Bucket.ISO_WEEK.value,
                      show_default=True, help="Time interval used for aggregation.")(fn)
    return fn


def _expectation_options(fn):
    fn = click.option("--method", type=_METHOD, default="wma", show_default=True)(fn)
    fn = click.option("--window", type=int, default=8, show_default=True,
                      help="Look-back points for wma.")(fn)
    fn = click.option("--alpha", type=float, default=0.3, show_default=True,
                      help="Smoothing factor for ewma.")(fn)
    fn = click.option("--threshold", type=float, default=0.5, show_default=True,
                      help="Flag when |deviation| exceeds this.")(fn)
    return fn


def _expectation_config(method: str, window: int, alpha: float, threshold: float) -> anomaly.ExpectationConfig:
    if method == "wma":
        return anomaly.ExpectationConfig.for_wma(window=window, threshold=threshold)
    return anomaly.ExpectationConfig.for_ewma(alpha=alpha, threshold=threshold)


def _load_records(path: str) -> list[ingest.TransactionRecord]:
    records, errors = ingest.parse_transactions(path)
    for error in errors:
        click.echo(f"row {error.row}: {error.reason}", err=True)
    if not records:
        raise ValueError(f"no valid records in {path}")
    return records


def _load_family(records_path: str, granularity: str, bucket: str) -> list[graph.TemporalNetwork]:
    spec = AggregationSpec(Granularity(granularity), Bucket(bucket))
    return graph.build_networks(_load_records(records_path), spec)


@click.group()
def cli() -> None:
    """Transaction-flow investigation toolkit."""


@cli.command(name="ingest")
@click.option("--input", "input_path", required=True, help="Raw delimited transaction file.")
@click.option("--salt", required=True, help="Pseudonymization salt (non-empty).")
@click.option("--out-dir", required=True, help="Directory for records.csv and pseudonyms.csv.")
@click.option("--delimiter", default=",", show_default=True)
def ingest_command(input_path: str, salt: str, out_dir: str, delimiter: str) -> None:
    """Parse, validate and pseudonymize raw transactions."""
    records, errors = ingest.parse_transactions(input_path, delimiter=delimiter)
    for error in errors:
        click.echo(f"row {error.row}: {error.reason}", err=True)
    pseudonymized, mapping = ingest.pseudonymize(records, salt.encode("utf-8"))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ingest.write_transactions(pseudonymized, out / RECORDS_FILENAME)
    mapping.write(out / PSEUDONYMS_FILENAME)
    click.echo(f"{len(pseudonymized)} records written, {len(errors)} rows rejected")


@cli.command()
@click.option("--records", "records_path", required=True, help="Canonical records file.")
@_spec_options
@click.option("--out-dir", required=True, help="Directory for per-interval network files.")
def build(records_path: str, granularity: str, bucket: str, out_dir: str) -> None:
    """Build the temporal network family and export one file per interval."""
    networks = _load_family(records_path, granularity, bucket)
    graph.write_networks(networks, out_dir)
    click.echo(f"{len(networks)} networks written to {out_dir}")


@cli.command()
@click.option("--records", "records_path", required=True)
@_spec_options
@click.option("--seed", required=True, help="Node to enumerate from.")
@click.option("--max-len", type=int, required=True, help="Maximum path edge count.")
@click.option("--interval", "interval_label", default=None,
              help="Restrict to one interval label; default is all intervals.")
@click.option("--out", "out_path", required=True, help="Path table file.")
def paths(records_path: str, granularity: str, bucket: str, seed: str,
          max_len: int, interval_label: str | None, out_path: str) -> None:
    """Enumerate bounded-length simple paths from a seed into a table."""
    from .pathfinder import iter_paths

    networks = _load_family(records_path, granularity, bucket)
    if interval_label is not None:
        networks = [n for n in networks if n.interval.label == interval_label]
        if not networks:
            raise ValueError(f"interval {interval_label!r} is outside the dataset range")
    rows = []
    for network in networks:
        rows.extend(flows.path_table_rows(iter_paths(network, seed, max_len)))
    flows.write_path_table(rows, out_path)
    click.echo(f"{len(rows)} paths written to {out_path}")


@cli.command()
@click.option("--records", "records_path", required=True)
@_spec_options
@click.option("--src", required=True)
@click.option("--dst", required=True)
@click.option("--max-len", type=int, required=True)
@click.option("--out", "out_path", required=True, help="Flow series file.")
def flow(records_path: str, granularity: str, bucket: str, src: str, dst: str,
         max_len: int, out_path: str) -> None:
    """Flow weight per interval between two nodes, across all intervals."""
    networks = _load_family(records_path, granularity, bucket)
    series = flows.flow_series(networks, src, dst, max_len)
    flows.write_flow_series(series, out_path)
    click.echo(f"{len(series.points)} intervals written to {out_path}")


@cli.command()
@click.option("--records", "records_path", required=True)
@_spec_options
@click.option("--src", required=True)
@click.option("--dst", required=True)
@click.option("--max-len", type=int, required=True)
@_expectation_options
@click.option("--out", "out_path", required=True, help="Flow series file with expectations.")
@click.option("--flags-out", "flags_path", default=None,
              help="Anomaly flag file; defaults to <out>.flags.csv.")
def series(records_path: str, granularity: str, bucket: str, src: str, dst: str,
           max_len: int, method: str, window: int, alpha: float, threshold: float,
           out_path: str, flags_path: str | None) -> None:
    """Flow series with expectation baseline, deviations and anomaly flags."""
    networks = _load_family(records_path, granularity, bucket)
    flow_series = flows.flow_series(networks, src, dst, max_len)
    config = _expectation_config(method, window, alpha, threshold)
    flags = anomaly.flag_anomalies(flow_series, config)
    flows.write_flow_series(flow_series, out_path)
    anomaly.write_flags(flags, flags_path or f"{out_path}.flags.csv")
    click.echo(f"{len(flags)} anomalies flagged over {len(flow_series.points)} intervals")


@cli.command()
@click.option("--records", "records_path", required=True)
@_spec_options
@click.option("--src", required=True)
@click.option("--dst", required=True)
@click.option("--max-len", type=int, required=True)
@click.option("--cutoff", required=True, help="Interval label starting the ranking window.")
@_expectation_options
@click.option("--statistic", type=click.Choice(["mean", "max"]), default="mean", show_default=True)
@click.option("--out", "out_path", required=True, help="Ranking file.")
def rank(records_path: str, granularity: str, bucket: str, src: str, dst: str,
         max_len: int, cutoff: str, method: str, window: int, alpha: float,
         threshold: float, statistic: str, out_path: str) -> None:
    """Rank intermediaries by post-cutoff growth over expectation."""
    networks = _load_family(records_path, granularity, bucket)
    config = _expectation_config(method, window, alpha, threshold)
    result = anomaly.rank_intermediaries(networks, src, dst, max_len, cutoff, config, statistic)
    anomaly.write_ranking(result, out_path)
    click.echo(f"{len(result.rows)} intermediaries ranked, {len(result.newly_active)} newly active")


@cli.command(name="synth")
@click.option("--config", "config_path", required=True, help="Scenario file (YAML).")
@click.option("--rng-seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_path", required=True, help="Generated records file.")
@click.option("--truth-out", "truth_path", default=None,
              help="Ground truth JSON; defaults to <out>.truth.json.")
def synth_command(config_path: str, rng_seed: int | None, out_path: str,
                  truth_path: str | None) -> None:
    """Generate a synthetic scenario with ground-truth injections."""
    import dataclasses

    config = synth.load_scenario(config_path)
    if rng_seed is not None:
        config = dataclasses.replace(config, rng_seed=rng_seed)
    records, truth = synth.generate(config)
    ingest.write_transactions(records, out_path)
    with open(truth_path or f"{out_path}.truth.json", "w", encoding="utf-8") as fh:
        fh.write(truth.to_json())
        fh.write("\n")
    click.echo(f"{len(records)} records generated")


@cli.command()
@click.option("--data-dir", required=True, help="Directory holding records.csv.")
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_spec_options
def serve(data_dir: str, port: int, host: str, granularity: str, bucket: str) -> None:
    """Serve the read-only query API over the dataset."""
    import uvicorn

    from .service import create_app

    spec = AggregationSpec(Granularity(granularity), Bucket(bucket))
    snapshot = DatasetSnapshot.load(data_dir, default_spec=spec)
    uvicorn.run(create_app(snapshot), host=host, port=port, log_level="warning")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (ValueError, ingest.IngestError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
