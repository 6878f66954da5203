"""Command-line interface: tables, determinism, config, exit codes."""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
import pytest

import dickeent
from dickeent import cli
from dickeent import (
    classical_correlation_closed,
    mutual_information_pure,
    odlro,
    ree_pure,
    ree_two_site,
    ree_upper_bound,
    uniform_ensemble,
)
from dickeent.core import LN2

jsonschema = pytest.importorskip("jsonschema")

SCHEMA = json.loads(
    (Path(dickeent.__file__).parent / "schemas" / "rows.schema.json").read_text()
)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    return header, body


class TestPure:
    def test_bell_row(self, capsys):
        code, out, _ = run_cli(capsys, "pure", "--n", "2", "--k", "1")
        assert code == 0
        header, body = parse_csv(out)
        assert header == ["n", "k", "E_pure", "E_12", "E_1rest", "ODLRO", "C_closed", "I"]
        row = dict(zip(header, body[0]))
        assert float(row["E_pure"]) == 1.0
        assert float(row["E_12"]) == 1.0

    def test_row_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "jsonl", "pure", "--n", "4", "--k", "2")
        assert code == 0
        row = json.loads(out.strip())
        assert row["E_pure"] == pytest.approx(ree_pure(4, 2), rel=1e-12)
        assert row["E_12"] == pytest.approx(ree_two_site(4, 2), rel=1e-12)
        assert row["ODLRO"] == pytest.approx(odlro(4, 2), rel=1e-12)
        assert row["C_closed"] == pytest.approx(classical_correlation_closed(0.5), rel=1e-12)
        assert row["I"] == pytest.approx(mutual_information_pure(4, 2), rel=1e-12)

    def test_sweep_follows_half_log_law(self, capsys):
        code, out, _ = run_cli(
            capsys, "pure", "--sweep-n", "10:10000:log", "--half-filling"
        )
        assert code == 0
        header, body = parse_csv(out)
        ns = np.array([float(r[0]) for r in body])
        e = np.array([float(r[header.index("E_pure")]) for r in body])
        slope = np.polyfit(np.log2(ns), e, 1)[0]
        assert slope == pytest.approx(0.5, abs=0.02)

    def test_sweep_requires_k_rule(self, capsys):
        code, _, err = run_cli(capsys, "pure", "--sweep-n", "2:10")
        assert code == 1
        assert "half-filling" in err or "--k" in err

    def test_rejects_out_of_range(self, capsys):
        assert run_cli(capsys, "pure", "--n", "4", "--k", "9")[0] == 1
        assert run_cli(capsys, "pure", "--n", "1", "--k", "0")[0] == 1


class TestScaling:
    def test_grid_columns(self, capsys):
        code, out, _ = run_cli(capsys, "scaling", "--n-grid", "16:256:log2")
        assert code == 0
        header, body = parse_csv(out)
        assert [int(r[0]) for r in body] == [16, 32, 64, 128, 256]
        n_e12 = [float(r[header.index("n_E12")]) for r in body]
        assert all(v <= 1.0 for v in n_e12)
        drift = [float(r[header.index("E_pure_minus_half_log2n")]) for r in body]
        assert max(drift) - min(drift) < 0.05

    def test_crossover_scan_reports_flip(self, capsys):
        code, out, err = run_cli(
            capsys, "scaling", "--crossover", "--n", "100", "--k", "50", "--m-max", "31"
        )
        assert code == 0
        header, body = parse_csv(out)
        orderings = {int(r[header.index("m")]): r[header.index("ordering")] for r in body}
        assert orderings[3] == "LESS"
        assert orderings[29] == "GREATER"
        assert "m=5" in err


class TestThermal:
    def test_uniform_row_matches_library(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "jsonl", "thermal", "--uniform", "--n", "1000")
        assert code == 0
        row = json.loads(out.strip())
        assert row["T"] is None
        assert row["inseparable"] is False
        assert row["ODLRO_mix"] == pytest.approx(0.5 - 2001 / 6000, rel=1e-12)
        assert row["E_bound"] == pytest.approx(ree_upper_bound(uniform_ensemble(1000)), rel=1e-9)
        assert row["I_mix"] == pytest.approx(1000 - math.log2(1001), rel=1e-12)

    def test_energy_file_run(self, capsys, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("0,0.0\n1,1.0\n2,2.0\n3,3.0\n4,4.0\n")
        code, out, _ = run_cli(
            capsys, "--format", "jsonl", "thermal", "--energies", str(path), "--kT", "1.0"
        )
        assert code == 0
        row = json.loads(out.strip())
        ensemble = dickeent.make_ensemble(np.arange(5.0), 1.0)
        assert row["n"] == 4
        assert row["T"] == 1.0
        assert row["E_avr"] == pytest.approx(dickeent.average_entanglement(ensemble), rel=1e-12)
        assert row["inseparable"] == dickeent.thermal_inseparable(ensemble)

    def test_malformed_energy_file(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("0,0.0\n1,not-a-number\n2,2.0\n")
        code, _, err = run_cli(capsys, "thermal", "--energies", str(path), "--kT", "1.0")
        assert code == 3
        assert "line 2" in err

    def test_missing_level(self, capsys, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("0,0.0\n2,2.0\n")
        code, _, err = run_cli(capsys, "thermal", "--energies", str(path), "--kT", "1.0")
        assert code == 3
        assert "missing" in err

    def test_missing_temperature(self, capsys, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("0,0.0\n1,1.0\n2,2.0\n")
        assert run_cli(capsys, "thermal", "--energies", str(path))[0] == 1


class TestGeneralized:
    def test_counts_row(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "jsonl", "generalized", "--counts", "1,1,1")
        assert code == 0
        row = json.loads(out.strip())
        assert row == {
            "d": 3,
            "n": 3,
            "counts": "1,1,1",
            "E_pure": pytest.approx(3 * math.log2(3) - math.log2(6), rel=1e-12),
        }

    def test_exhaustive_sweep(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "jsonl", "generalized", "--d", "3", "--n", "2")
        assert code == 0
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert len(rows) == 6
        assert rows[0]["counts"] == "0,0,2"


class TestOutputContracts:
    def test_jsonl_rows_validate_against_schema(self, capsys):
        outputs = []
        outputs.append(run_cli(capsys, "--format", "jsonl", "pure", "--n", "5", "--k", "2")[1])
        outputs.append(run_cli(capsys, "--format", "jsonl", "scaling", "--n-grid", "16:64:log2")[1])
        outputs.append(
            run_cli(
                capsys, "--format", "jsonl", "scaling", "--crossover", "--n", "10", "--k", "5"
            )[1]
        )
        outputs.append(run_cli(capsys, "--format", "jsonl", "thermal", "--uniform", "--n", "12")[1])
        outputs.append(
            run_cli(capsys, "--format", "jsonl", "generalized", "--counts", "2,1")[1]
        )
        validator = jsonschema.Draft202012Validator(SCHEMA)
        for text in outputs:
            for line in text.strip().splitlines():
                validator.validate(json.loads(line))

    def test_csv_and_jsonl_carry_same_columns(self, capsys):
        _, csv_out, _ = run_cli(capsys, "pure", "--n", "6", "--k", "2")
        _, jsonl_out, _ = run_cli(capsys, "--format", "jsonl", "pure", "--n", "6", "--k", "2")
        header, _ = parse_csv(csv_out)
        assert header == list(json.loads(jsonl_out.strip()).keys())

    def test_nats_flag_scales_entanglement_columns(self, capsys):
        _, bits_out, _ = run_cli(capsys, "--format", "jsonl", "pure", "--n", "4", "--k", "1")
        _, nats_out, _ = run_cli(
            capsys, "--format", "jsonl", "--nats", "pure", "--n", "4", "--k", "1"
        )
        bits = json.loads(bits_out.strip())
        nats = json.loads(nats_out.strip())
        assert nats["E_pure"] == pytest.approx(bits["E_pure"] * LN2, rel=1e-14)
        assert nats["ODLRO"] == bits["ODLRO"]

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        code, out, _ = run_cli(capsys, "--output", str(target), "pure", "--n", "3", "--k", "1")
        assert code == 0
        assert out == ""
        header, body = parse_csv(target.read_text())
        assert header[0] == "n" and body[0][0] == "3"

    def test_unwritable_output_path(self, capsys, tmp_path):
        target = tmp_path / "missing-dir" / "rows.csv"
        code, _, err = run_cli(capsys, "--output", str(target), "pure", "--n", "3", "--k", "1")
        assert code == 3
        assert "input error" in err or "cannot write" in err


class TestConfig:
    def test_dump_config_defaults(self, capsys, monkeypatch):
        monkeypatch.delenv("DICKEENT_FORMAT", raising=False)
        code, out, _ = run_cli(capsys, "--dump-config")
        assert code == 0
        config = json.loads(out)
        assert config["format"] == "csv"
        assert config["nats"] is False

    def test_environment_overrides_defaults(self, capsys, monkeypatch):
        monkeypatch.setenv("DICKEENT_FORMAT", "jsonl")
        monkeypatch.setenv("DICKEENT_SEED", "99")
        code, out, _ = run_cli(capsys, "--dump-config")
        assert code == 0
        config = json.loads(out)
        assert config["format"] == "jsonl"
        assert config["seed"] == 99

    def test_flags_override_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("DICKEENT_FORMAT", "jsonl")
        code, out, _ = run_cli(capsys, "--format", "csv", "--dump-config")
        assert code == 0
        assert json.loads(out)["format"] == "csv"

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert run_cli(capsys)[0] == 1

    def test_unknown_flag_is_usage_error(self, capsys):
        assert run_cli(capsys, "pure", "--bogus")[0] == 1


class TestVerify:
    def test_small_run_passes_and_is_deterministic(self, capsys):
        code1, out1, err1 = run_cli(capsys, "--seed", "7", "verify", "--max-n", "3")
        code2, out2, err2 = run_cli(capsys, "--seed", "7", "verify", "--max-n", "3")
        assert code1 == code2 == 0
        assert out1 == out2
        assert "bell_anchor" in out1
        assert out1.strip().endswith("checks passed")

    def test_max_n_guard(self, capsys):
        assert run_cli(capsys, "verify", "--max-n", "20")[0] == 1
