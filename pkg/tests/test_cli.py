import json

import numpy as np
import pytest

from qclock import cli
from qclock.sim import ScanRow


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    meta = {}
    rows = []
    header = None
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


def test_state_phase_csv(capsys):
    code, out, _ = run_cli(capsys, ["state", "--kind", "phase", "--n", "2"])
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert meta["schema_version"] == "1"
    assert header == ["m", "amplitude"]
    assert [row[1] for row in rows] == ["0.57735026919"] * 3
    assert meta["mean_cost"] == "0.666666666667"


def test_state_optimal_csv(capsys):
    code, out, _ = run_cli(
        capsys, ["state", "--kind", "optimal", "--n", "2", "--cost", "sin2"]
    )
    assert code == 0
    _, _, rows = parse_csv(out)
    assert [row[1] for row in rows] == ["0.5", "0.707106781187", "0.5"]


def test_state_optimal_requires_cost(capsys):
    code, out, err = run_cli(capsys, ["state", "--kind", "optimal", "--n", "2"])
    assert code == 2
    assert out == ""
    assert "--cost" in err


def test_state_json_format(capsys):
    code, out, _ = run_cli(
        capsys, ["state", "--kind", "phase", "--n", "4", "--format", "json"]
    )
    assert code == 0
    record = json.loads(out)
    assert record["schema_version"] == "1"
    assert record["command"] == "state"
    np.testing.assert_allclose(record["payload"]["amplitudes"], np.full(5, 0.2**0.5))
    assert record["payload"]["mean_cost"] == pytest.approx(0.4)


def test_invalid_kind_exits_2(capsys):
    code, _, _ = run_cli(capsys, ["state", "--kind", "spiral", "--n", "2"])
    assert code == 2


def test_invalid_n_exits_2(capsys):
    code, _, _ = run_cli(capsys, ["state", "--kind", "phase", "--n", "0"])
    assert code == 2


def test_posterior_peak_and_zero(capsys):
    code, out, _ = run_cli(
        capsys,
        ["posterior", "--kind", "phase", "--n", "20", "--outcome", "10", "--grid", "420"],
    )
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header == ["t", "offset", "density"]
    offsets = np.array([float(row[1]) for row in rows])
    density = np.array([float(row[2]) for row in rows])
    peak = density[np.argmin(np.abs(offsets))]
    assert abs(peak - 21.0 / (2.0 * np.pi)) <= 1e-9
    spacing = 2.0 * np.pi / 21.0
    zero_idx = np.argmin(np.abs(offsets - spacing))
    assert density[zero_idx] <= 1e-10


def test_posterior_width_ordering(capsys):
    def half_width(kind):
        argv = ["posterior", "--kind", kind, "--n", "20", "--outcome", "10",
                "--grid", "840", "--cost", "sin2"]
        code, out, _ = run_cli(capsys, argv)
        assert code == 0
        _, _, rows = parse_csv(out)
        offsets = np.array([float(row[1]) for row in rows])
        density = np.array([float(row[2]) for row in rows])
        above = offsets[density >= density.max() / 2.0]
        return above.max() - above.min()

    assert half_width("product") > half_width("phase")


def test_posterior_rejects_coarse_grid(capsys):
    code, _, err = run_cli(
        capsys, ["posterior", "--kind", "phase", "--n", "20", "--grid", "50"]
    )
    assert code == 2
    assert "--grid" in err


def test_posterior_rejects_bad_outcome(capsys):
    code, _, _ = run_cli(
        capsys, ["posterior", "--kind", "phase", "--n", "4", "--outcome", "9"]
    )
    assert code == 2


def test_scan_phase_costs(capsys):
    code, out, _ = run_cli(
        capsys, ["scan", "--kinds", "phase", "--cost", "sin2", "--n", "3:15"]
    )
    assert code == 0
    _, header, rows = parse_csv(out)
    assert header[0] == "n" and header[2] == "mean_cost"
    for row in rows:
        n = int(row[0])
        assert float(row[2]) == pytest.approx(2.0 / (n + 1), abs=1e-10)


def test_scan_neg_delta_flags_phase_state(capsys):
    code, out, _ = run_cli(
        capsys, ["scan", "--kinds", "optimal", "--cost", "neg_delta", "--n", "5:5"]
    )
    assert code == 0
    _, header, rows = parse_csv(out)
    flag_column = header.index("matches_phase_state")
    assert rows[0][flag_column] == "true"


def test_scan_invalid_range(capsys):
    code, _, err = run_cli(
        capsys, ["scan", "--kinds", "phase", "--cost", "sin2", "--n", "5:1"]
    )
    assert code == 2
    assert "range" in err


def test_scan_invalid_kind(capsys):
    code, _, _ = run_cli(
        capsys, ["scan", "--kinds", "phase,spiral", "--cost", "sin2", "--n", "2:3"]
    )
    assert code == 2


def test_scan_solver_failure_exits_3(capsys, monkeypatch):
    def fake_scan(kinds, cost, n_values):
        return [ScanRow(5, "optimal", None, None, None, None, "did not converge")]

    monkeypatch.setattr(cli, "scan_n", fake_scan)
    code, out, err = run_cli(
        capsys, ["scan", "--kinds", "optimal", "--cost", "sin2", "--n", "5:5"]
    )
    assert code == 3
    assert "did not converge" in out  # row is still emitted
    assert "converge" in err


def test_simulate_json_deterministic(capsys):
    argv = ["simulate", "--kind", "phase", "--n", "8", "--cost", "sin2",
            "--samples", "2000", "--seed", "11"]
    code1, out1, _ = run_cli(capsys, argv)
    code2, out2, _ = run_cli(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical
    record = json.loads(out1)
    assert record["schema_version"] == "1"
    assert sum(record["payload"]["histogram"]["counts"]) == 2000


def test_simulate_matches_analytic(capsys):
    code, out, _ = run_cli(
        capsys,
        ["simulate", "--kind", "phase", "--n", "20", "--cost", "sin2",
         "--samples", "20000", "--seed", "42"],
    )
    assert code == 0
    payload = json.loads(out)["payload"]
    deviation = abs(payload["empirical_mean_cost"] - 2.0 / 21.0)
    assert deviation <= 4.0 * payload["standard_error_cost"]


def test_simulate_rejects_zero_samples(capsys):
    code, _, _ = run_cli(
        capsys,
        ["simulate", "--kind", "phase", "--n", "8", "--cost", "sin2",
         "--samples", "0"],
    )
    assert code == 2


def test_simulate_csv_format(capsys):
    code, out, _ = run_cli(
        capsys,
        ["simulate", "--kind", "phase", "--n", "4", "--cost", "sin2",
         "--samples", "100", "--format", "csv"],
    )
    assert code == 0
    meta, header, rows = parse_csv(out)
    assert header == ["bin_left", "bin_right", "count"]
    assert sum(int(row[2]) for row in rows) == 100
    assert "empirical_mean_cost" in meta


def test_mutinfo_basis_state_is_zero(capsys):
    code, out, _ = run_cli(capsys, ["mutinfo", "--kind", "basis", "--n", "10"])
    assert code == 0
    payload = json.loads(out)["payload"]
    assert abs(payload["bits"]) <= 1e-12
    assert payload["holevo_bound_bits"] == pytest.approx(np.log2(11.0))


def test_mutinfo_phase_doubling(capsys):
    values = {}
    for n in (31, 63):
        code, out, _ = run_cli(capsys, ["mutinfo", "--kind", "phase", "--n", str(n)])
        assert code == 0
        values[n] = json.loads(out)["payload"]
    assert abs(values[63]["bits"] - values[31]["bits"] - 1.0) <= 0.25
    for n, payload in values.items():
        assert payload["bits"] <= np.log2(n + 1) + 1e-9
        assert payload["nats"] == pytest.approx(payload["bits"] * np.log(2.0))


def test_csv_uses_lf_line_endings_and_12_digits(capsys):
    _, out, _ = run_cli(capsys, ["state", "--kind", "phase", "--n", "2"])
    assert "\r" not in out
    assert "0.57735026919" in out  # 12 significant digits, trailing zeros trimmed


def test_gnuplot_companion_script(capsys, tmp_path):
    script = tmp_path / "fig.gp"
    code, out, err = run_cli(
        capsys,
        ["posterior", "--kind", "phase", "--n", "6", "--gnuplot", str(script)],
    )
    assert code == 0
    assert script.exists()
    content = script.read_text()
    assert "fig.csv" in content and "plot" in content
    assert str(script) in err  # logged on stderr, not stdout
    assert "gnuplot" not in out


def test_missing_subcommand_exits_2(capsys):
    assert cli.main([]) == 2
