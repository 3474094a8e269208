import numpy as np
import pytest

from src.lib.error_handler import InputError
from src.lib.io import (
    format_report,
    format_value,
    meta_path,
    parse_vector,
    read_config_file,
    read_edge_list,
    read_matrix,
    read_meta,
    read_trajectory_csv,
    write_csv,
    write_trajectory_csv,
)


def test_format_value():
    assert format_value(0.1) == "0.1"
    assert format_value(np.float64(1 / 3)) == repr(1 / 3)
    assert format_value(np.array([0.5, 0.0])) == "0.5,0.0"
    assert format_value(True) == "true"
    assert format_value(7) == "7"


def test_format_report_keeps_order():
    text = format_report({"gamma": 0.1, "K": 10, "x0": [1.0, 2.0]})
    assert text == "gamma=0.1\nK=10\nx0=1.0,2.0\n"


def test_parse_vector():
    assert np.array_equal(parse_vector("0.5, 0,-1"), [0.5, 0.0, -1.0])
    with pytest.raises(InputError):
        parse_vector("0.5,abc")


def test_meta_path():
    assert meta_path("/tmp/run/chain.csv") == "/tmp/run/chain.meta"


def test_trajectory_csv_round_trip(tmp_path):
    path = str(tmp_path / "chain.csv")
    samples = np.array([[0.1, 1 / 3], [-2.5, 1e-20]])
    write_trajectory_csv(path, np.array([1, 2]), samples, {"gamma": 0.1, "seed": 3})
    with open(path) as f:
        assert f.readline().strip() == "step,x1,x2"
    steps, loaded = read_trajectory_csv(path)
    assert np.array_equal(steps, [1, 2])
    assert np.array_equal(loaded, samples)
    assert read_meta(meta_path(path)) == {"gamma": "0.1", "seed": "3"}


def test_read_trajectory_csv_errors(tmp_path):
    with pytest.raises(InputError):
        read_trajectory_csv(str(tmp_path / "missing.csv"))
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(InputError):
        read_trajectory_csv(str(path))


def test_read_meta_rejects_malformed_lines(tmp_path):
    path = tmp_path / "chain.meta"
    path.write_text("# comment\ngamma=0.1\nnot a pair\n")
    with pytest.raises(InputError):
        read_meta(str(path))


def test_read_matrix(tmp_path):
    path = tmp_path / "H.txt"
    path.write_text("2\n1 0.5\n0.5 2\n")
    assert np.array_equal(read_matrix(str(path)), [[1.0, 0.5], [0.5, 2.0]])
    path.write_text("2\n1 0.5\n")
    with pytest.raises(InputError):
        read_matrix(str(path))


def test_read_edge_list(tmp_path):
    path = tmp_path / "paths.txt"
    path.write_text("# traveller paths\nedges=4 cutoff=2.5 sigma2=1.0\n0,3;1\n\n1,2,3;0\n")
    data = read_edge_list(str(path))
    assert data["cutoff"] == 2.5 and data["sigma2"] == 1.0
    assert np.array_equal(data["X"], [[1, 0], [0, 1], [0, 1], [1, 1]])
    assert np.array_equal(data["y"], [1.0, 0.0])


def test_read_edge_list_errors(tmp_path):
    path = tmp_path / "paths.txt"
    path.write_text("edges=4 cutoff=2.5\n0;1\n")
    with pytest.raises(InputError):
        read_edge_list(str(path))
    path.write_text("edges=4 cutoff=2.5 sigma2=1.0\n0;2\n")
    with pytest.raises(InputError):
        read_edge_list(str(path))
    path.write_text("edges=4 cutoff=2.5 sigma2=1.0\n0,1\n")
    with pytest.raises(InputError):
        read_edge_list(str(path))


def test_write_csv(tmp_path):
    path = tmp_path / "grid.csv"
    write_csv(str(path), ["r", "d", "rho"], [(0.05, 0.01, 1.5), (0.1, 1.0, 0.9)])
    assert path.read_text() == "r,d,rho\n0.05,0.01,1.5\n0.1,1.0,0.9\n"


def test_read_config_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# sampling defaults\ngamma = 0.05\nrecord_every=10\nsvg=true\nverbose=false\nx0=0.1,0.2\n")
    assert read_config_file(str(path)) == [
        "--gamma", "0.05",
        "--record-every", "10",
        "--svg",
        "--x0", "0.1,0.2",
    ]


def test_read_config_file_errors(tmp_path):
    with pytest.raises(InputError):
        read_config_file(str(tmp_path / "missing.conf"))
    path = tmp_path / "bad.conf"
    path.write_text("gamma\n")
    with pytest.raises(InputError):
        read_config_file(str(path))
