"""Config handling, experiment runners, CSV emission, and exit codes."""
import math
import subprocess
import sys

import numpy as np
import pytest

from qsteer import ps_2d
from qsteer.cli import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    ResultRow,
    emit_csv,
    load_config,
    main,
    run_experiment,
    sweep,
)

SINGLE_CONFIG = """\
[experiment]
kind = single
dimension = 2
rounds = 4
basis = fourier
targets = 0
seed = 7

[initial]
state = basis_state
index = 1
"""


def write_config(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    assert header == list(CSV_COLUMNS)
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestConfigParsing:
    def test_single_round_trip(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG))
        assert config.kind == "single"
        assert config.rounds == [4]
        assert config.seed == 7 and config.seed_given
        assert config.initial.kind == "basis_state" and config.initial.index == 1

    def test_rounds_range(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG.replace("rounds = 4", "rounds = 0:3")))
        assert config.rounds == [0, 1, 2, 3]

    def test_unknown_key_reports_field_path(self, tmp_path):
        text = SINGLE_CONFIG.replace("[initial]", "bogus = 1\n\n[initial]")
        with pytest.raises(ConfigError, match="experiment.bogus"):
            load_config(write_config(tmp_path, text))

    def test_bad_value_reports_field_path(self, tmp_path):
        with pytest.raises(ConfigError, match="experiment.dimension"):
            load_config(write_config(tmp_path, SINGLE_CONFIG.replace("dimension = 2", "dimension = two")))

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="not found"):
            load_config("/nonexistent/exp.ini")

    def test_bad_kind_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="experiment.kind"):
            load_config(write_config(tmp_path, SINGLE_CONFIG.replace("kind = single", "kind = mystery")))


class TestRunExperiment:
    def test_single_mub_anchor(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG))
        rows = run_experiment(config)
        assert len(rows) == 1
        row = rows[0]
        assert row.exact == pytest.approx(0.9375, abs=1e-12)
        assert row.closed_form == pytest.approx(0.9375, abs=1e-12)
        assert row.mc_estimate is None

    def test_single_with_monte_carlo(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG))
        config.trajectories = 100_000
        row = run_experiment(config)[0]
        assert abs(row.mc_estimate - 0.9375) <= 4.0 * row.mc_stderr

    def test_exact_only_suppresses_monte_carlo(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG))
        config.trajectories = 1000
        config.exact_only = True
        assert run_experiment(config)[0].mc_estimate is None

    def test_brute_force_engine(self, tmp_path):
        config = load_config(write_config(tmp_path, SINGLE_CONFIG))
        config.engine = "brute_force"
        assert run_experiment(config)[0].exact == pytest.approx(0.9375, abs=1e-12)

    def test_maximally_mixed_initial(self, tmp_path):
        text = SINGLE_CONFIG.replace("state = basis_state\nindex = 1", "state = maximally_mixed")
        row = run_experiment(load_config(write_config(tmp_path, text)))[0]
        assert row.exact == pytest.approx(1 - 0.5 * 0.5**4, abs=1e-12)

    def test_file_initial(self, tmp_path):
        rho_path = tmp_path / "rho.npy"
        np.save(rho_path, np.diag([0.0, 1.0]).astype(complex))
        text = SINGLE_CONFIG.replace("state = basis_state\nindex = 1", f"state = file\npath = {rho_path}")
        row = run_experiment(load_config(write_config(tmp_path, text)))[0]
        assert row.exact == pytest.approx(0.9375, abs=1e-12)

    def test_copies_kind(self, tmp_path):
        text = """\
[experiment]
kind = copies
dimension = 2
rounds = 0:6
seed = 1

[copies]
l = 2
m = 1
overlaps = 0.0
"""
        rows = run_experiment(load_config(write_config(tmp_path, text)))
        assert len(rows) == 7
        for n, row in enumerate(rows):
            assert row.exact == pytest.approx(1 - (3 / 4) ** n, abs=1e-12)
            assert row.closed_form == pytest.approx(row.exact, abs=1e-12)

    def test_haar_average_kind(self, tmp_path):
        text = """\
[experiment]
kind = haar_average
dimension = 2
rounds = 2
seed = 3

[haar_average]
samples = 4000
"""
        row = run_experiment(load_config(write_config(tmp_path, text)))[0]
        expected = 1 - (1 - 0.5) ** 3
        assert abs(row.mc_estimate - expected) <= 4.0 * row.mc_stderr

    def test_bipartite_kind(self, tmp_path):
        text = """\
[experiment]
kind = bipartite
dimension = 2
rounds = 3
seed = 5

[bipartite]
alpha = 0.7071067811865476
beta = -0.7071067811865476
p = 0.5

[sweep]
gamma_sq_grid = 0,0.5,1
"""
        rows = run_experiment(load_config(write_config(tmp_path, text)))
        assert [row.gamma_sq for row in rows] == [0.0, 0.5, 1.0]
        values = [row.closed_form for row in rows]
        assert values[0] > values[1] > values[2]  # singlet prefers decoherence
        for row in rows:
            assert row.exact == pytest.approx(row.closed_form, abs=1e-12)


class TestFigures:
    def test_figure1a_series(self):
        rows = run_experiment(ExperimentConfig(kind="figure1a"))
        assert len(rows) == 39
        by_series = {}
        for row in rows:
            by_series.setdefault(row.experiment, []).append(row)
        assert set(by_series) == {"figure1a:overlap=2/3", "figure1a:overlap=1/3", "figure1a:overlap=0"}
        for label, overlap in (("2/3", 2 / 3), ("1/3", 1 / 3), ("0", 0.0)):
            series = by_series[f"figure1a:overlap={label}"]
            assert [row.n for row in series] == list(range(13))
            for row in series:
                assert row.closed_form == pytest.approx(1 - (1 - overlap) / 2**row.n, abs=1e-12)
                assert row.exact == pytest.approx(row.closed_form, abs=1e-12)
            values = [row.closed_form for row in series]
            assert all(b >= a for a, b in zip(values, values[1:]))

    def test_figure1b_dominance(self):
        rows = run_experiment(ExperimentConfig(kind="figure1b"))
        assert len(rows) == 39
        by_theta = {}
        for row in rows:
            by_theta.setdefault(row.experiment, {})[row.n] = row
        quarter = by_theta["figure1b:theta=pi/4"]
        eighth = by_theta["figure1b:theta=pi/8"]
        twelfth = by_theta["figure1b:theta=pi/12"]
        for n in range(1, 13):
            assert quarter[n].exact >= eighth[n].exact >= twelfth[n].exact
        for rows_at in (quarter, eighth, twelfth):
            for n, row in rows_at.items():
                assert row.exact == pytest.approx(ps_2d(row.theta, 1.0, n), abs=1e-12)


class TestSweep:
    def test_theta_grid_maximum(self, tmp_path):
        text = """\
[experiment]
kind = sweep
dimension = 2
basis = param2d
targets = 0
seed = 2

[initial]
state = basis_state
index = 1

[sweep]
rounds = 5
theta_grid = 0:1.5707963267948966:181
"""
        rows = sweep(load_config(write_config(tmp_path, text)))
        assert len(rows) == 181
        best = max(rows, key=lambda row: row.exact)
        assert best.theta == pytest.approx(math.pi / 4)

    def test_single_point_sweep_matches_single(self, tmp_path):
        sweep_text = SINGLE_CONFIG.replace("kind = single", "kind = sweep") + "\n[sweep]\nrounds = 4\n"
        sweep_row = sweep(load_config(write_config(tmp_path, sweep_text, "s.ini")))[0]
        single_row = run_experiment(load_config(write_config(tmp_path, SINGLE_CONFIG, "p.ini")))[0]
        assert sweep_row.exact == single_row.exact
        assert sweep_row.closed_form == single_row.closed_form

    def test_rows_follow_expansion_order(self, tmp_path):
        text = """\
[experiment]
kind = sweep
basis = fourier
targets = 0
seed = 0

[initial]
state = maximally_mixed

[sweep]
d_list = 2,3
rounds = 0:1
"""
        rows = sweep(load_config(write_config(tmp_path, text)))
        assert [(row.d, row.n) for row in rows] == [(2, 0), (2, 1), (3, 0), (3, 1)]

    def test_rejects_empty_axis(self, tmp_path):
        text = SINGLE_CONFIG.replace("kind = single", "kind = sweep") + "\n[sweep]\ntheta_grid =\n"
        with pytest.raises(ConfigError, match="empty"):
            load_config(write_config(tmp_path, text))


class TestEmitCsv:
    def test_header_only_for_empty(self, tmp_path):
        out = tmp_path / "empty.csv"
        emit_csv([], out)
        assert out.read_text() == ",".join(CSV_COLUMNS) + "\n"

    def test_formatting(self, tmp_path):
        row = ResultRow("single", 2, 4, None, None, 0.9375, 1 / 3, None, None, 7)
        out = tmp_path / "row.csv"
        emit_csv([row], out)
        line = out.read_text().splitlines()[1]
        assert line == "single,2,4,,,0.9375,0.333333333333,,,7"

    def test_twelve_significant_digits(self, tmp_path):
        row = ResultRow("single", 2, 12, None, None, 0.999755859375, None, None, None, 0)
        out = tmp_path / "digits.csv"
        emit_csv([row], out)
        assert "0.999755859375" in out.read_text()

    def test_row_validation(self):
        with pytest.raises(ValueError, match="exact"):
            ResultRow("single", 2, 1, None, None, 1.5, None, None, None, 0)
        with pytest.raises(ValueError, match="stderr"):
            ResultRow("single", 2, 1, None, None, None, None, 0.5, -0.1, 0)

    def test_byte_identical_reruns(self, tmp_path):
        config = ExperimentConfig(kind="figure1a", trajectories=2000)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(run_experiment(config), out_a)
        emit_csv(run_experiment(config), out_b)
        assert out_a.read_bytes() == out_b.read_bytes()


class TestMainAndExitCodes:
    def test_run_writes_csv(self, tmp_path, capsys):
        config_path = write_config(tmp_path, SINGLE_CONFIG)
        out = tmp_path / "out.csv"
        assert main(["run", config_path, "--out", str(out)]) == 0
        rows = read_rows(out)
        assert len(rows) == 1
        assert float(rows[0]["exact"]) == pytest.approx(0.9375, abs=1e-12)
        assert rows[0]["seed"] == "7"

    def test_flags_override_config(self, tmp_path):
        config_path = write_config(tmp_path, SINGLE_CONFIG)
        out = tmp_path / "out.csv"
        assert main(["run", config_path, "--out", str(out), "--seed", "99", "--trajectories", "500"]) == 0
        row = read_rows(out)[0]
        assert row["seed"] == "99"
        assert row["mc_estimate"] != ""

    def test_set_overrides(self, tmp_path):
        config_path = write_config(tmp_path, SINGLE_CONFIG)
        out = tmp_path / "out.csv"
        assert main(["run", config_path, "--out", str(out), "--set", "experiment.rounds=12"]) == 0
        row = read_rows(out)[0]
        assert float(row["exact"]) == pytest.approx(0.999755859375, abs=1e-12)

    def test_seed_omission_warns(self, tmp_path, capsys):
        text = SINGLE_CONFIG.replace("seed = 7\n", "")
        config_path = write_config(tmp_path, text)
        out = tmp_path / "out.csv"
        assert main(["run", config_path, "--out", str(out)]) == 0
        assert "defaulting to 0" in capsys.readouterr().err

    def test_config_error_exit_code(self, tmp_path, capsys):
        config_path = write_config(tmp_path, SINGLE_CONFIG.replace("basis = fourier", "basis = bogus"))
        assert main(["run", config_path]) == 2
        assert "config error" in capsys.readouterr().err

    def test_infeasible_exit_code(self, tmp_path, capsys):
        text = SINGLE_CONFIG.replace("rounds = 4", "rounds = 30")
        config_path = write_config(tmp_path, text)
        assert main(["run", config_path, "--set", "experiment.engine=brute_force"]) == 3
        assert "infeasible" in capsys.readouterr().err

    def test_io_error_exit_code(self, tmp_path, capsys):
        config_path = write_config(tmp_path, SINGLE_CONFIG)
        assert main(["run", config_path, "--out", str(tmp_path / "missing" / "out.csv")]) == 4
        assert "i/o error" in capsys.readouterr().err

    def test_figure1a_stdout(self, capsys):
        assert main(["figure1a", "--seed", "0"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 40

    def test_cli_subprocess_figure1b(self, tmp_path):
        out = tmp_path / "fig.csv"
        result = subprocess.run(
            [sys.executable, "-m", "qsteer", "figure1b", "--out", str(out), "--seed", "0"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert len(out.read_text().splitlines()) == 40

    def test_sweep_command_requires_sweep_kind(self, tmp_path):
        config_path = write_config(tmp_path, SINGLE_CONFIG)
        assert main(["sweep", config_path]) == 2
