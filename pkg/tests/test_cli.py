import json
from pathlib import Path

import pytest
import yaml

from flowlens.cli import main
from flowlens.ingest import write_transactions
from helpers import ten_week_records


@pytest.fixture
def records_csv(tmp_path):
    target = tmp_path / "records.csv"
    write_transactions(ten_week_records(), target)
    return target


def run(*args):
    return main([str(a) for a in args])


class TestExitCodes:
    def test_unknown_command_is_usage_error(self):
        assert run("frobnicate") == 1

    def test_unknown_flag_is_usage_error(self, records_csv, tmp_path):
        assert run("build", "--records", records_csv, "--wrong-flag", "x") == 1

    def test_missing_required_flag_is_usage_error(self):
        assert run("build") == 1

    def test_missing_input_file_is_data_error(self, tmp_path):
        assert run("build", "--records", tmp_path / "absent.csv",
                   "--out-dir", tmp_path / "nets") == 2


class TestIngest:
    def test_writes_records_and_pseudonyms(self, records_csv, tmp_path, capsys):
        out_dir = tmp_path / "clean"
        assert run("ingest", "--input", records_csv, "--salt", "s3cr3t",
                   "--out-dir", out_dir) == 0
        assert (out_dir / "records.csv").exists()
        assert (out_dir / "pseudonyms.csv").exists()
        assert "rejected" in capsys.readouterr().out

    def test_empty_salt_is_data_error(self, records_csv, tmp_path):
        assert run("ingest", "--input", records_csv, "--salt", "",
                   "--out-dir", tmp_path / "clean") == 2

    def test_row_errors_reported_but_not_fatal(self, tmp_path, capsys):
        raw = tmp_path / "raw.csv"
        header = ("timestamp,sender_account,sender_institution,sender_country,"
                  "receiver_account,receiver_institution,receiver_country,amount,currency")
        raw.write_text(
            header + "\n"
            "2022-02-24T10:00:00Z,a,ba,AA,b,bb,BB,100,EUR\n"
            "2022-02-24T11:00:00Z,a,ba,AA,b,bb,BB,-5,EUR\n"
        )
        assert run("ingest", "--input", raw, "--salt", "s", "--out-dir", tmp_path / "c") == 0
        captured = capsys.readouterr()
        assert "negative amount" in captured.err
        assert "1 records written, 1 rows rejected" in captured.out


class TestBuild:
    def test_one_file_per_interval(self, records_csv, tmp_path):
        out_dir = tmp_path / "nets"
        assert run("build", "--records", records_csv, "--granularity", "account",
                   "--bucket", "iso_week", "--out-dir", out_dir) == 0
        files = sorted(p.name for p in out_dir.iterdir())
        assert files == [f"2022-W{w:02d}.csv" for w in range(1, 11)]
        assert (out_dir / "2022-W08.csv").read_text().startswith("src,dst,weight\n")


class TestPaths:
    def test_table_for_one_interval(self, records_csv, tmp_path):
        out = tmp_path / "paths.csv"
        assert run("paths", "--records", records_csv, "--granularity", "account",
                   "--seed", "x", "--max-len", 3, "--interval", "2022-W08",
                   "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "interval,path_nodes,edge_weights,terminal,min_weight"
        assert len(lines) == 1 + 8

    def test_absent_seed_gives_empty_table_and_success(self, records_csv, tmp_path):
        out = tmp_path / "paths.csv"
        assert run("paths", "--records", records_csv, "--granularity", "account",
                   "--seed", "q", "--max-len", 3, "--out", out) == 0
        assert out.read_text().splitlines() == [
            "interval,path_nodes,edge_weights,terminal,min_weight"
        ]

    def test_interval_outside_range_is_data_error(self, records_csv, tmp_path):
        assert run("paths", "--records", records_csv, "--granularity", "account",
                   "--seed", "x", "--max-len", 3, "--interval", "2030-W01",
                   "--out", tmp_path / "p.csv") == 2


class TestFlow:
    def test_series_file_contains_relay_weight(self, records_csv, tmp_path):
        out = tmp_path / "flow.csv"
        assert run("flow", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3, "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "interval,weight,expected,deviation"
        assert "2022-W08,1850,," in lines
        assert len(lines) == 1 + 10

    def test_source_equals_sink_is_data_error(self, records_csv, tmp_path):
        assert run("flow", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "x", "--max-len", 3,
                   "--out", tmp_path / "f.csv") == 2


class TestSeries:
    def test_expected_and_flags_written(self, records_csv, tmp_path):
        out = tmp_path / "series.csv"
        flags = tmp_path / "flags.csv"
        assert run("series", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--method", "wma", "--window", 3, "--threshold", "0.5",
                   "--out", out, "--flags-out", flags) == 0
        series_lines = out.read_text().splitlines()
        assert series_lines[0] == "interval,weight,expected,deviation"
        assert any(line.split(",")[2] not in ("", None) for line in series_lines[4:])
        flag_lines = flags.read_text().splitlines()
        assert flag_lines[0] == "interval,actual,expected,deviation,direction"
        assert len(flag_lines) > 1

    def test_too_short_for_window_is_data_error(self, records_csv, tmp_path):
        assert run("series", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--method", "wma", "--window", 12,
                   "--out", tmp_path / "s.csv") == 2


class TestRank:
    def test_ranking_written(self, records_csv, tmp_path):
        out = tmp_path / "rank.csv"
        assert run("rank", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--cutoff", "2022-W09", "--method", "wma", "--window", 3,
                   "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "node,difference,n_intervals_post_cutoff,newly_active_flag"
        assert {line.split(",")[0] for line in lines[1:]} == {"h", "k", "z"}

    def test_cutoff_without_history_names_the_precondition(self, records_csv, tmp_path, capsys):
        code = run("rank", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--cutoff", "2022-W02", "--method", "wma", "--window", 8,
                   "--out", tmp_path / "r.csv")
        assert code == 2
        assert "pre-cutoff history" in capsys.readouterr().err


class TestSynth:
    def scenario_file(self, tmp_path):
        config = {
            "rng_seed": 5,
            "n_accounts": 6,
            "n_institutions": 3,
            "n_countries": 2,
            "start": "2022-01-03",
            "n_intervals": 10,
            "baseline": [
                {"src": "ACC0000", "dst": "ACC0002", "amount": 1000, "jitter": 0.1},
                {"src": "ACC0002", "dst": "ACC0001", "amount": 1000},
            ],
            "injections": [
                {"source": "ACC0000", "sink": "ACC0001", "via": "ACC0003",
                 "start": 6, "amount": 500, "slope": 100},
            ],
        }
        path = tmp_path / "scenario.yaml"
        path.write_text(yaml.safe_dump(config))
        return path

    def test_generates_records_and_truth(self, tmp_path):
        scenario = self.scenario_file(tmp_path)
        out = tmp_path / "generated.csv"
        truth = tmp_path / "truth.json"
        assert run("synth", "--config", scenario, "--out", out, "--truth-out", truth) == 0
        assert out.read_text().startswith("timestamp,")
        payload = json.loads(truth.read_text())
        assert payload["injections"][0]["via"] == "ACC0003"

    def test_rng_seed_override_changes_output(self, tmp_path):
        scenario = self.scenario_file(tmp_path)
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        assert run("synth", "--config", scenario, "--out", first) == 0
        assert run("synth", "--config", scenario, "--rng-seed", 99, "--out", second) == 0
        assert first.read_text() != second.read_text()

    def test_bad_scenario_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text(yaml.safe_dump({"rng_seed": 1}))
        assert run("synth", "--config", bad, "--out", tmp_path / "x.csv") == 2


def test_repeated_runs_are_byte_identical(records_csv, tmp_path):
    outputs = []
    for name in ("one", "two"):
        out_dir = tmp_path / name
        out_dir.mkdir()
        assert run("flow", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--out", out_dir / "flow.csv") == 0
        assert run("rank", "--records", records_csv, "--granularity", "account",
                   "--src", "x", "--dst", "y", "--max-len", 3,
                   "--cutoff", "2022-W09", "--method", "wma", "--window", 3,
                   "--out", out_dir / "rank.csv") == 0
        outputs.append(
            [(p.name, p.read_bytes()) for p in sorted(out_dir.iterdir())]
        )
    assert outputs[0] == outputs[1]
