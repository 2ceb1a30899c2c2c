"""End-to-end CLI tests: reports, rounding modes, exit codes, artifacts."""

import csv
import json
import math

import pytest

from swarmstate.cli import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main

RESOURCE_CSV = """label,intensity,probability
meat,100,0.5
solar,40,0.3
empty,1,0.2
"""

TASK_CSV = """label,intensity,probability
r1,100,0.8
r2,20,0.1
r3,70,0.07
r4,100,0.03
"""

CHAIN_EDGES = "n1\nn2 n1\nn3 n2\nn4 n3\nn5 n4\n"


@pytest.fixture
def resource_table(tmp_path):
    path = tmp_path / "resource.csv"
    path.write_text(RESOURCE_CSV)
    return path


@pytest.fixture
def task_table(tmp_path):
    path = tmp_path / "task.csv"
    path.write_text(TASK_CSV)
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_report(out):
    return json.loads(out)


class TestNei:
    def test_exact_mode(self, capsys, resource_table):
        code, out, _ = run_cli(capsys, "nei", str(resource_table))
        assert code == EXIT_OK
        report = parse_report(out)
        assert report["expectation"] == 62.2
        assert report["h"] == pytest.approx(0.4655089038144403, abs=1e-9)
        assert report["zone"] == "quasi-equilibrium"
        assert report["rounding"] == "exact"
        assert report["tool"]["name"] == "swarmstate"

    def test_printed_precision_mode_resource(self, capsys, resource_table):
        code, out, _ = run_cli(capsys, "nei", str(resource_table), "--rounding", "paper-2dp")
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["q"] == [0.8, 0.19, 0.01]
        assert report["h"] == pytest.approx(0.49, abs=0.005)
        assert report["zone"] == "quasi-equilibrium"

    def test_printed_precision_mode_task(self, capsys, task_table):
        code, out, _ = run_cli(capsys, "nei", str(task_table), "--rounding", "paper-2dp")
        report = parse_report(out)
        assert report["h"] == pytest.approx(0.329, abs=0.005)
        assert report["zone"] == "order"

    def test_base_flag_changes_raw_entropy_only(self, capsys, resource_table):
        _, out_e, _ = run_cli(capsys, "nei", str(resource_table))
        _, out_2, _ = run_cli(capsys, "nei", str(resource_table), "--base", "2")
        nats, bits = parse_report(out_e), parse_report(out_2)
        assert bits["entropy"]["value"] == pytest.approx(
            nats["entropy"]["value"] / math.log(2), abs=1e-12
        )
        assert bits["h"] == nats["h"]

    def test_uniform_when_probability_column_absent(self, capsys, tmp_path):
        path = tmp_path / "ranks.csv"
        path.write_text("label,intensity\nl1,250\nl2,20\nl3,10\nl4,5\nl5,1\n")
        code, out, _ = run_cli(capsys, "nei", str(path))
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["q"][0] == pytest.approx(250 / 286, abs=1e-12)

    def test_json_input(self, capsys, tmp_path):
        path = tmp_path / "events.json"
        path.write_text(json.dumps([
            {"label": "a", "intensity": 100, "probability": 0.5},
            {"label": "b", "intensity": 40, "probability": 0.3},
            {"label": "c", "intensity": 1, "probability": 0.2},
        ]))
        code, out, _ = run_cli(capsys, "nei", str(path))
        assert code == EXIT_OK
        assert parse_report(out)["expectation"] == 62.2

    def test_report_roundtrips(self, capsys, resource_table):
        _, out, _ = run_cli(capsys, "nei", str(resource_table), "--compact")
        report = parse_report(out)
        assert json.loads(json.dumps(report)) == report
        # serialized h carries full precision
        assert repr(report["h"]) in out

    def test_zero_intensity_names_row(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,intensity,probability\nok,10,0.5\nbroken,0,0.5\n")
        code, _, err = run_cli(capsys, "nei", str(path))
        assert code == EXIT_DOMAIN
        assert "line 3" in err and "broken" in err

    def test_non_numeric_is_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,intensity,probability\nok,ten,0.5\n")
        code, _, err = run_cli(capsys, "nei", str(path))
        assert code == EXIT_PARSE
        assert "line 2" in err

    def test_missing_file_is_parse_error(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "nei", str(tmp_path / "nope.csv"))
        assert code == EXIT_PARSE

    def test_bad_header(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("name,weight\nx,1\n")
        code, _, err = run_cli(capsys, "nei", str(path))
        assert code == EXIT_PARSE
        assert "line 1" in err


class TestUsage:
    def test_no_command(self, capsys):
        code, _, _ = run_cli(capsys)
        assert code == EXIT_USAGE

    def test_unknown_flag(self, capsys, resource_table):
        code, _, _ = run_cli(capsys, "nei", str(resource_table), "--frobnicate")
        assert code == EXIT_USAGE

    def test_cube_requires_axes(self, capsys):
        code, _, _ = run_cli(capsys, "cube")
        assert code == EXIT_USAGE

    def test_cube_rejects_partial_files(self, capsys, resource_table):
        code, _, _ = run_cli(capsys, "cube", "--control", str(resource_table))
        assert code == EXIT_USAGE


class TestCube:
    def test_h_flags(self, capsys):
        code, out, _ = run_cli(capsys, "cube", "--h", "0.329", "0.49", "0.5")
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["cube"] == {
            "control": "order",
            "resource": "quasi-equilibrium",
            "function": "quasi-equilibrium",
            "index": 5,
        }

    def test_three_uniform_tables(self, capsys, tmp_path):
        path = tmp_path / "uniform.csv"
        path.write_text("label,intensity\na,3\nb,3\nc,3\n")
        code, out, _ = run_cli(
            capsys,
            "cube",
            "--control", str(path), "--resource", str(path), "--function", str(path),
        )
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["cube"]["index"] == 27
        assert report["axes"]["control"]["h"] == pytest.approx(1.0)

    def test_adjacency_listing(self, capsys):
        code, out, _ = run_cli(capsys, "cube", "--h", "0.5", "0.5", "0.5", "--adjacent")
        report = parse_report(out)
        assert len(report["adjacent"]) == 6

    def test_paths_query(self, capsys):
        code, out, _ = run_cli(
            capsys, "cube", "--h", "0", "0", "0", "--paths-to", "27", "--max-len", "6"
        )
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["paths"]["count"] == 90
        first = report["paths"]["paths"][0]
        assert first[0]["index"] == 1 and first[-1]["index"] == 27

    def test_out_of_range_h(self, capsys):
        code, _, err = run_cli(capsys, "cube", "--h", "0.5", "0.5", "1.5")
        assert code == EXIT_DOMAIN


class TestHierarchy:
    def test_chain(self, capsys, tmp_path):
        path = tmp_path / "chain.txt"
        path.write_text(CHAIN_EDGES)
        code, out, _ = run_cli(capsys, "hierarchy", str(path))
        report = parse_report(out)
        assert code == EXIT_OK
        assert report["h"] == pytest.approx(0.3177514295404957, abs=1e-9)
        assert report["cohesion"] == "linear"
        assert report["levels"] == 5

    def test_single_node(self, capsys, tmp_path):
        path = tmp_path / "solo.txt"
        path.write_text("queen\n")
        _, out, _ = run_cli(capsys, "hierarchy", str(path))
        report = parse_report(out)
        assert report["h"] == 0.0
        assert report["cohesion"] == "linear"

    def test_six_levels_rejected(self, capsys, tmp_path):
        path = tmp_path / "deep.txt"
        lines = ["n1"] + [f"n{i} n{i-1}" for i in range(2, 7)]
        path.write_text("\n".join(lines))
        code, _, err = run_cli(capsys, "hierarchy", str(path))
        assert code == EXIT_DOMAIN
        assert "5" in err

    def test_custom_ranks(self, capsys, tmp_path):
        edges = tmp_path / "pair.txt"
        edges.write_text("a\nb a\n")
        ranks = tmp_path / "ranks.json"
        ranks.write_text(json.dumps({"1": 9, "2": 1}))
        _, out, _ = run_cli(capsys, "hierarchy", str(edges), "--ranks", str(ranks))
        report = parse_report(out)
        assert report["level_distribution"][0]["rank"] == 9

    def test_bad_rank_file(self, capsys, tmp_path):
        edges = tmp_path / "pair.txt"
        edges.write_text("a\nb a\n")
        ranks = tmp_path / "ranks.json"
        ranks.write_text('{"one": 9}')
        code, _, _ = run_cli(capsys, "hierarchy", str(edges), "--ranks", str(ranks))
        assert code == EXIT_PARSE


class TestSim:
    def scenario_file(self, tmp_path, **overrides):
        data = {
            "name": "tiny",
            "robots": 6,
            "ticks": 30,
            "seed": 3,
            "initial_store": 20.0,
            "spend_per_tick": 2.0,
            "sos_threshold": 8.0,
            "advertise_threshold": 30.0,
            "controller": {"enabled": False, "warm_up": 5},
            "environment": {
                "regime": "stable",
                "base_yields": {"light": 3.0, "wind": 1.5, "chemical": 0.5},
            },
        }
        data.update(overrides)
        path = tmp_path / "tiny.json"
        path.write_text(json.dumps(data))
        return path

    def test_artifacts_written(self, capsys, tmp_path):
        scenario = self.scenario_file(tmp_path)
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(capsys, "sim", str(scenario), "--out", str(out_dir))
        assert code == EXIT_OK
        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary == parse_report(out)
        with open(out_dir / "metrics.csv") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 31  # initial snapshot + 30 ticks
        assert rows[0]["tick"] == "0"
        assert float(rows[0]["h"]) == pytest.approx(1.0)
        assert sum(int(rows[5][f"count_{f}"]) for f in ("light", "wind", "chemical")) == 6
        with open(out_dir / "h_series.csv") as handle:
            series = list(csv.DictReader(handle))
        assert len(series) == 31

    def test_zero_tick_run(self, capsys, tmp_path):
        scenario = self.scenario_file(tmp_path, ticks=0)
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(capsys, "sim", str(scenario), "--out", str(out_dir))
        assert code == EXIT_OK
        with open(out_dir / "metrics.csv") as handle:
            assert len(list(csv.DictReader(handle))) == 1

    def test_seed_override_recorded_and_deterministic(self, capsys, tmp_path):
        scenario = self.scenario_file(tmp_path)
        a, b = tmp_path / "a", tmp_path / "b"
        _, out_a, _ = run_cli(capsys, "sim", str(scenario), "--out", str(a), "--seed", "99")
        _, out_b, _ = run_cli(capsys, "sim", str(scenario), "--out", str(b), "--seed", "99")
        assert parse_report(out_a)["seed"] == 99
        assert (a / "metrics.csv").read_text() == (b / "metrics.csv").read_text()

    def test_bundled_scenario_by_name(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "sim", "stable", "--out", str(tmp_path / "s"))
        assert code == EXIT_OK
        report = parse_report(out)
        assert report["scenario"] == "stable"
        assert report["final_zone"] == "order"

    def test_invalid_config_field_diagnostic(self, capsys, tmp_path):
        scenario = self.scenario_file(tmp_path, robots="six")
        code, _, err = run_cli(capsys, "sim", str(scenario), "--out", str(tmp_path / "o"))
        assert code == EXIT_DOMAIN
        assert "robots" in err

    def test_unparseable_config(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, _ = run_cli(capsys, "sim", str(path), "--out", str(tmp_path / "o"))
        assert code == EXIT_PARSE
