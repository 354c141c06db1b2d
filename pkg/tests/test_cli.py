import numpy as np
import pandas as pd
import pytest

from dspline.engine import DEFAULT_CONFIG, _build_arg_parser, main
from dspline.metrics import round_significant
from src.data import heterogeneous_truth
from src.utils.io import read_config, read_json


@pytest.fixture()
def data_csv(tmp_path):
    rng = np.random.default_rng(0)
    x = np.sort(rng.uniform(0.0, 1.0, 60))
    y = heterogeneous_truth(x) + 0.1 * rng.standard_normal(x.size)
    path = tmp_path / "data.csv"
    pd.DataFrame({"x": x, "y": y}).to_csv(path, index=False)
    return path


def test_default_config_has_every_section():
    cfg = read_config(str(DEFAULT_CONFIG))
    assert {"numerics", "solver", "fit", "bench", "check", "logging"} <= set(cfg)
    assert cfg["solver"]["rho"] is None
    assert isinstance(cfg["numerics"]["pivot_floor"], float)


def test_parser_flags():
    args = _build_arg_parser().parse_args(["fit", "d.csv", "-k", "2", "--lambda", "0.5", "--no-polish"])
    assert args.degree == 2 and args.lam == 0.5 and args.polish is False
    with pytest.raises(SystemExit):
        _build_arg_parser().parse_args(["fit", "d.csv", "--method", "lasso"])


def test_fit_writes_values_and_summary(data_csv, tmp_path):
    out = tmp_path / "fit.csv"
    code = main(["fit", str(data_csv), "-k", "1", "--lambda", "0.01", "--verify", "--output", str(out)])
    assert code == 0
    fitted = pd.read_csv(out)
    assert list(fitted.columns) == ["x", "theta_hat"]
    summary = read_json(out.with_suffix(".json"))
    assert summary["method"] == "tf" and summary["degree"] == 1
    assert summary["converged"] is True and summary["partial"] is False
    assert summary["penalty_jumps"] == pytest.approx(summary["penalty_weighted"], rel=1e-9)
    assert all(1 <= p <= summary["n"] - 2 for p in summary["active_knots"])
    assert np.allclose(summary["theta_hat"], fitted["theta_hat"])


@pytest.mark.parametrize("method", ["ss", "bw", "bw-unweighted"])
def test_fit_linear_smoothers(data_csv, tmp_path, method):
    out = tmp_path / f"{method}.csv"
    assert main(["fit", str(data_csv), "--method", method, "-m", "2", "--lambda", "1e-5", "--verify",
                 "--output", str(out)]) == 0
    summary = read_json(out.with_suffix(".json"))
    assert summary["order"] == 2 and summary["degree"] is None
    assert 2.0 - 1e-9 <= summary["df"] <= summary["n"]


def test_natural_fit_and_interpolation(data_csv, tmp_path):
    out = tmp_path / "ntf.csv"
    code = main(["fit", str(data_csv), "--natural", "-k", "3", "--lambda", "1e-5", "--verify",
                 "--output", str(out)])
    assert code in (0, 3)
    summary = read_json(out.with_suffix(".json"))
    assert summary["method"] == "ntf"
    assert summary["constraint_residual"] <= 1e-10 * max(1.0, np.abs(summary["theta_hat"]).max())

    points = tmp_path / "points.csv"
    pd.DataFrame({"x": [0.2, 0.5, 1.5, summary["x"][3]]}).to_csv(points, index=False)
    values = tmp_path / "values.csv"
    assert main(["interp", str(out.with_suffix(".json")), str(points), "--output", str(values)]) == 0
    got = pd.read_csv(values)
    assert np.isnan(got["value"].iloc[2])
    assert got["value"].iloc[3] == pytest.approx(summary["theta_hat"][3])
    explicit = tmp_path / "explicit.csv"
    assert main(["interp", str(out.with_suffix(".json")), str(points), "--mode", "explicit",
                 "--output", str(explicit)]) == 0
    assert np.allclose(pd.read_csv(explicit)["value"], got["value"], atol=1e-8, equal_nan=True)


def test_iteration_cap_exit_code_still_writes_output(data_csv, tmp_path):
    out = tmp_path / "capped.csv"
    code = main(["fit", str(data_csv), "-k", "2", "--lambda", "1e-4", "--max-iter", "2", "--no-polish",
                 "--output", str(out)])
    assert code == 3
    assert read_json(out.with_suffix(".json"))["partial"] is True


def test_input_errors_exit_with_two(tmp_path, capsys):
    assert main(["fit", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "dup.csv"
    pd.DataFrame({"x": [0.0, 0.0, 1.0], "y": [1.0, 2.0, 3.0]}).to_csv(bad, index=False)
    assert main(["fit", str(bad)]) == 2
    assert "ERROR" in capsys.readouterr().err
    assert main(["--config", str(tmp_path / "nope.yaml"), "check"]) == 2


def test_basis_export(tmp_path):
    out = tmp_path / "basis.csv"
    assert main(["basis", "--n", "15", "-k", "2", "--kind", "sparse", "--knots", "4,9",
                 "--mesh", "50", "--output", str(out)]) == 0
    frame = pd.read_csv(out)
    assert frame.shape == (50, 1 + 5)
    assert main(["basis", "--n", "15", "-k", "3", "--kind", "natural", "--output", str(out)]) == 0
    assert pd.read_csv(out).shape == (15, 1 + 11)


def test_bench_cond(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench-cond", "--n", "50", "--reps", "2", "--degree", "2", "--workers", "1",
                 "--output", str(out)]) == 0
    table = pd.read_csv(out)
    assert table["route"].tolist() == ["FF", "DD", "DB"]


def test_check_interpolation_suite_passes(tmp_path):
    assert main(["check", "interpolation", "--seed", "1", "--output", str(tmp_path / "checks.csv")]) == 0
    table = pd.read_csv(tmp_path / "checks.csv")
    assert table["passed"].all()


def test_zero_lambda_fit_reproduces_y(data_csv, tmp_path):
    out = tmp_path / "raw.csv"
    assert main(["fit", str(data_csv), "--lambda", "0", "--output", str(out)]) == 0
    assert np.array_equal(pd.read_csv(out)["theta_hat"], pd.read_csv(data_csv)["y"])


def test_linear_bw_and_smoothing_spline_files_agree(data_csv, tmp_path):
    outputs = {}
    for method in ("bw", "ss"):
        out = tmp_path / f"{method}_m1.csv"
        assert main(["fit", str(data_csv), "--method", method, "-m", "1", "--lambda", "1e-3",
                     "--output", str(out)]) == 0
        outputs[method] = round_significant(pd.read_csv(out)["theta_hat"].to_numpy(), 12)
    assert np.array_equal(outputs["bw"], outputs["ss"])
