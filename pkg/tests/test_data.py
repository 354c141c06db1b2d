import json
import logging

import numpy as np
import pandas as pd
import pytest

from src.data import DataSet, heterogeneous_signal, heterogeneous_truth, load_dataset
from src.utils.config import NumericsConfig, load_numerics_config
from src.utils.errors import DomainError, FactorizationError
from src.utils.io import read_json, write_csv, write_json
from src.utils.logs import kv, setup_logging


def test_load_dataset_sorts_and_drops_missing_rows(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text(" X , Y\n0.5,2\n0.1,1\n,3\n0.9,oops\n0.3,4\n")
    data = load_dataset(path)
    assert data.x.tolist() == [0.1, 0.3, 0.5]
    assert data.y.tolist() == [1.0, 4.0, 2.0]
    assert data.grid().n == 3


def test_load_dataset_rejects_duplicates_and_missing_columns(tmp_path):
    dup = tmp_path / "dup.csv"
    pd.DataFrame({"x": [0.0, 0.5, 0.5], "y": [1.0, 2.0, 3.0]}).to_csv(dup, index=False)
    with pytest.raises(DomainError):
        load_dataset(dup)
    no_y = tmp_path / "no_y.csv"
    pd.DataFrame({"x": [0.0, 1.0]}).to_csv(no_y, index=False)
    with pytest.raises(DomainError):
        load_dataset(no_y)
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "missing.csv")


def test_dataset_length_mismatch():
    with pytest.raises(DomainError):
        DataSet(np.arange(3.0), np.arange(4.0))


@pytest.mark.parametrize("design", ["uniform", "random"])
def test_heterogeneous_signal(design):
    data, truth = heterogeneous_signal(200, np.random.default_rng(0), design=design)
    assert data.n == 200
    assert data.x[0] == 0.0 and data.x[-1] == 1.0
    assert np.all(np.diff(data.x) > 0)
    assert np.allclose(truth, heterogeneous_truth(data.x))
    assert np.std(data.y - truth) == pytest.approx(0.1, rel=0.3)
    with pytest.raises(DomainError):
        heterogeneous_signal(100, np.random.default_rng(0), design="grid")


def test_json_and_csv_output_keep_full_precision(tmp_path):
    payload = {"theta": np.array([1.0 / 3.0, np.pi]), "n": np.int64(2), "ok": np.bool_(True)}
    write_json(tmp_path / "s.json", payload)
    back = read_json(tmp_path / "s.json")
    assert back == {"theta": [1.0 / 3.0, np.pi], "n": 2, "ok": True}
    write_csv(tmp_path / "t.csv", pd.DataFrame({"x": [0.1], "v": [2.0 / 3.0]}))
    assert pd.read_csv(tmp_path / "t.csv")["v"].iloc[0] == 2.0 / 3.0
    assert json.loads((tmp_path / "s.json").read_text())["n"] == 2


def test_numerics_config_from_yaml(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text("numerics:\n  active_tol: 1.0e-6\n  unknown: 3\n")
    cfg = load_numerics_config(str(path))
    assert cfg.active_tol == 1e-6
    assert cfg.pivot_floor == NumericsConfig().pivot_floor


def test_factorization_error_names_route():
    err = FactorizationError("pivot too small", "DB")
    assert err.route == "DB"
    assert str(err).startswith("[DB]")
    assert isinstance(err, np.linalg.LinAlgError)


def test_kv_formatting_and_logging_setup():
    assert kv("FIT", n=3, lam=0.1234567891, mode="standard") == "FIT | n=3 | lam=0.123457 | mode=standard"
    setup_logging("debug")
    setup_logging("WARNING")
    root = logging.getLogger()
    assert root.level == logging.WARNING
    assert sum(getattr(h, "_dspline", False) for h in root.handlers) == 1
