import json
import math
from pathlib import Path

import numpy as np
import pytest

from becphase import Table, emit, parse_config, run_scenario, validation_report
from becphase.cli import main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = {"scenario": "micro_micro", "omega": 1.0, "lambda_c": 0.001, "alpha": 1.0, "eta0": 0.3}


def cfg_text(**overrides) -> str:
    doc = dict(MINIMAL)
    doc.update(overrides)
    return json.dumps(doc)


class TestParseConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(cfg_text())
        assert cfg.n_steps == 2048
        assert cfg.tail_tol == 1e-12
        assert cfg.phase_tol == 1e-7
        assert cfg.degeneracy_tol == 1e-9
        assert cfg.params.j_vdw == 0.0
        assert cfg.output_format == "csv"

    def test_unknown_keys_listed(self):
        with pytest.raises(ValueError, match="unknown configuration keys: blah, zeta"):
            parse_config(cfg_text(blah=1, zeta=2))

    def test_missing_mandatory_named(self):
        doc = dict(MINIMAL)
        del doc["eta0"]
        with pytest.raises(ValueError, match="missing: eta0"):
            parse_config(json.dumps(doc))

    def test_unknown_scenario(self):
        with pytest.raises(ValueError, match="scenario"):
            parse_config(cfg_text(scenario="bogus"))

    def test_coefficient_norm_rejected_with_value(self):
        doc = {
            "scenario": "general",
            "omega": 1.0,
            "lambda_c": 0.01,
            "alpha": 1.0,
            "coefficients": [[0.3, 0.0], [0.9, 0.0], [0.0, 0.0], [0.0, 0.0]],
        }
        with pytest.raises(ValueError, match=r"sum \|c_i\|\^2 = 1.*0.9"):
            parse_config(json.dumps(doc))

    def test_complex_alpha_forms(self):
        cfg = parse_config(cfg_text(alpha=[1.0, 0.5]))
        assert cfg.params.alpha == complex(1.0, 0.5)
        cfg = parse_config(cfg_text(alpha=2))
        assert cfg.params.alpha == complex(2.0)

    def test_sweep_block(self):
        cfg = parse_config(
            cfg_text(sweep={"variable": "concurrence", "start": 0.0, "stop": 0.99, "count": 50})
        )
        assert cfg.sweep.count == 50
        assert cfg.sweep.variable == "concurrence"

    def test_sweep_validation(self):
        with pytest.raises(ValueError, match="sweep variable"):
            parse_config(cfg_text(sweep={"variable": "zeta", "start": 0, "stop": 1, "count": 5}))
        with pytest.raises(ValueError, match="sweep requires"):
            parse_config(cfg_text(sweep={"variable": "concurrence"}))

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="n_steps"):
            parse_config(cfg_text(grid={"n_steps": 7}))
        with pytest.raises(ValueError, match="unknown grid keys"):
            parse_config(cfg_text(grid={"nstep": 8}))

    def test_not_json(self):
        with pytest.raises(ValueError, match="JSON"):
            parse_config("scenario: micro")

    def test_shipped_configs_parse(self):
        for path in sorted(CONFIG_DIR.glob("*.json")):
            parse_config(path.read_text())


class TestEmit:
    def test_three_rows_make_four_lines(self):
        table = Table(["a[1]", "b[1]"], [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        text = emit(table, "csv")
        assert text.endswith("\n")
        assert len(text.splitlines()) == 4

    def test_empty_table_errors(self, tmp_path):
        out = tmp_path / "empty.csv"
        with pytest.raises(ValueError, match="empty"):
            emit(Table(["a"], []), "csv", str(out))
        assert not out.exists()

    def test_seventeen_digit_round_trip(self):
        values = [math.pi, 1 / 3, 2e-17, 123456.789012345678, -math.e]
        table = Table(["v[1]"], [[v] for v in values])
        text = emit(table, "csv")
        parsed = [float(line) for line in text.splitlines()[1:]]
        assert parsed == values

    def test_tsv(self):
        table = Table(["a[1]", "b[1]"], [[1.0, 2.0]])
        assert "\t" in emit(table, "tsv")

    def test_bad_format(self):
        with pytest.raises(ValueError):
            emit(Table(["a"], [[1.0]]), "xml")


class TestRunScenario:
    def test_phase_row(self):
        cfg = parse_config(cfg_text(grid={"n_steps": 512}))
        table = run_scenario(cfg, "phase")
        assert len(table.rows) == 1
        row = dict(zip(table.columns, table.rows[0]))
        assert row["phase_unwrapped[rad]"] == pytest.approx(
            row["phase_closed_form[rad]"], abs=1e-5
        )

    def test_evolve_rows_and_invariants(self):
        cfg = parse_config(cfg_text(grid={"n_steps": 64}))
        table = run_scenario(cfg, "evolve")
        assert len(table.rows) == 65
        idx = {c: i for i, c in enumerate(table.columns)}
        eps1 = np.array([r[idx["eps1[1]"]] for r in table.rows])
        eps2 = np.array([r[idx["eps2[1]"]] for r in table.rows])
        np.testing.assert_allclose(eps1 + eps2, 1.0, atol=1e-10)
        assert np.all(eps1 >= -1e-10)
        purity = np.array([r[idx["purity[1]"]] for r in table.rows])
        assert np.all(purity > 0.5 - 1e-10)
        assert np.all(purity < 1.0 + 1e-10)

    def test_witness_requires_phase(self):
        cfg = parse_config(cfg_text())
        with pytest.raises(ValueError, match="phase"):
            run_scenario(cfg, "witness")

    def test_witness_row(self):
        cfg = parse_config(cfg_text(phase=0.002))
        table = run_scenario(cfg, "witness")
        row = dict(zip(table.columns, table.rows[0]))
        assert 0.0 < row["concurrence_consistent[1]"] <= 1.0

    def test_sweep_requires_block(self):
        cfg = parse_config(cfg_text())
        with pytest.raises(ValueError, match="sweep"):
            run_scenario(cfg, "sweep")

    def test_micro_sweep_monotone_and_round_trip(self):
        cfg = parse_config(
            cfg_text(
                lambda_c=1e-4 / (2 * math.pi),
                grid={"n_steps": 1024},
                sweep={"variable": "concurrence", "start": 0.0, "stop": 0.9, "count": 6},
            )
        )
        table = run_scenario(cfg, "sweep")
        idx = {c: i for i, c in enumerate(table.columns)}
        conc = [r[idx["concurrence[1]"]] for r in table.rows]
        kin = [r[idx["phase_kinematic[rad]"]] for r in table.rows]
        law = [r[idx["phase_weak_law[rad]"]] for r in table.rows]
        wit = [r[idx["witness_from_law[1]"]] for r in table.rows]
        assert np.all(np.diff(kin) > 0)
        assert np.all(np.diff(law) > 0)
        np.testing.assert_allclose(wit, conc, atol=1e-10)

    def test_macro_sweep_round_trip(self):
        cfg = parse_config(
            json.dumps(
                {
                    "scenario": "macro_both",
                    "omega": 1.0,
                    "lambda_c": 0.125,
                    "alpha": 1.0,
                    "eta0": math.pi / 4,
                    "grid": {"n_steps": 512},
                    "sweep": {"variable": "concurrence", "start": 0.0, "stop": 0.9, "count": 5},
                }
            )
        )
        table = run_scenario(cfg, "sweep")
        idx = {c: i for i, c in enumerate(table.columns)}
        conc = [r[idx["concurrence[1]"]] for r in table.rows]
        rel = [r[idx["phase_relation[rad]"]] for r in table.rows]
        wit = [r[idx["witness_roundtrip[1]"]] for r in table.rows]
        assert np.all(np.diff(rel) > 0)
        np.testing.assert_allclose(wit, conc, atol=1e-10)

    def test_sweep_workers_preserve_order(self):
        cfg = parse_config(
            cfg_text(
                lambda_c=1e-3,
                grid={"n_steps": 256},
                sweep={"variable": "concurrence", "start": 0.1, "stop": 0.8, "count": 4},
            )
        )
        serial = run_scenario(cfg, "sweep", workers=1)
        threaded = run_scenario(cfg, "sweep", workers=3)
        assert serial.rows == threaded.rows


class TestMainEntry:
    def test_phase_verb_stdout(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(cfg_text(grid={"n_steps": 512}))
        assert main(["phase", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("tau[time]")
        assert out.endswith("\n")

    def test_determinism_byte_identical(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(
            cfg_text(
                grid={"n_steps": 256},
                sweep={"variable": "concurrence", "start": 0.0, "stop": 0.8, "count": 4},
            )
        )
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", str(cfg), "--output", str(out1)]) == 0
        assert main(["sweep", "--config", str(cfg), "--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_validation_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": "micro_micro", "omega": 1.0}))
        assert main(["phase", "--config", str(cfg)]) == 1
        assert "error" in capsys.readouterr().err

    def test_nonconvergence_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(cfg_text(grid={"n_steps": 2, "phase_tol": 1e-30}))
        assert main(["phase", "--config", str(cfg)]) == 2
        assert "converge" in capsys.readouterr().err

    def test_steps_override_validation(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(cfg_text())
        assert main(["phase", "--config", str(cfg), "--steps", "7"]) == 1

    def test_missing_config_file(self, capsys):
        assert main(["phase", "--config", "/nonexistent/x.json"]) == 1

    def test_tsv_output(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(cfg_text(grid={"n_steps": 512}))
        out = tmp_path / "r.tsv"
        assert main(["phase", "--config", str(cfg), "--output", str(out), "--format", "tsv"]) == 0
        assert "\t" in out.read_text()

    def test_validate_verb(self, capsys):
        assert main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "MISMATCH" in out
        assert "resolution" in out
        assert "omega - 2J" in out


class TestValidationReport:
    def test_report_structure(self):
        text = validation_report(n_points=40)
        matches = [ln for ln in text.splitlines() if "-> MATCH" in ln]
        mismatches = [ln for ln in text.splitlines() if "-> MISMATCH" in ln]
        assert len(matches) == 5
        assert len(mismatches) == 1
        assert "macro_single" in mismatches[0]
        assert "verbatim" in mismatches[0]


def test_shipped_scenario_configs_run(tmp_path):
    # each shipped scenario config drives a small end-to-end run
    for name in ("micro_micro", "macro_both", "macro_single", "general"):
        doc = json.loads((CONFIG_DIR / f"{name}.json").read_text())
        doc["grid"] = {"n_steps": 256}
        cfg = parse_config(json.dumps(doc))
        table = run_scenario(cfg, "evolve")
        assert len(table.rows) == 257
        table = run_scenario(cfg, "phase")
        assert len(table.rows) == 1
