import json
import math

import numpy as np
import pytest

import eulerspin as es
from eulerspin.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_simulate_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "run"
    code = run_cli("simulate", "--rep", "euler", "--omega", "const:0,0,1",
                   "--e0", "1.5,0,0", "--t-end", "1.0", "--dt", "0.01",
                   "--out", str(out))
    assert code == 0
    traj = es.load_trajectory_csv(out / "trajectory.csv")
    assert traj.rep == "euler"
    assert len(traj) == 101
    sidecar = json.loads((out / "trajectory.json").read_text())
    assert sidecar["config"]["dt"] == 0.01
    assert sidecar["aborted"] is False


def test_simulate_reruns_bit_identical(tmp_path):
    args = ("simulate", "--rep", "quat", "--omega", "rotplane:40",
            "--e0", "0.5,0.5,0.5", "--t-end", "2.0", "--dt", "0.01")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(*args, "--out", str(out1)) == 0
    assert run_cli(*args, "--out", str(out2)) == 0
    assert (out1 / "trajectory.csv").read_bytes() == \
        (out2 / "trajectory.csv").read_bytes()


def test_simulate_singular_abort_exit_2(tmp_path):
    out = tmp_path / "run"
    code = run_cli("simulate", "--rep", "gibbs", "--omega", "const:0,0,1",
                   "--e0", "0,0,3.0", "--t-end", "10.0", "--dt", "0.001",
                   "--out", str(out))
    assert code == 2
    sidecar = json.loads((out / "trajectory.json").read_text())
    assert sidecar["aborted"] is True
    assert sidecar["abort_time"] is not None
    # partial trajectory still written
    traj = es.load_trajectory_csv(out / "trajectory.csv")
    assert len(traj) >= 2


def test_simulate_missing_args_exit_3():
    assert run_cli("simulate", "--rep", "euler") == 3


def test_simulate_bad_omega_spec_exit_3(tmp_path):
    assert run_cli("simulate", "--omega", "wobble:1", "--t-end", "1",
                   "--dt", "0.1", "--out", str(tmp_path)) == 3


def test_simulate_config_file_with_flag_override(tmp_path):
    cfg = {"rep": "euler", "omega": "const:0,0,1",
           "e0": [1.0, 0.0, 0.0], "t_end": 1.0, "dt": 0.01}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "run"
    code = run_cli("simulate", "--config", str(cfg_path),
                   "--dt", "0.02", "--out", str(out))
    assert code == 0
    traj = es.load_trajectory_csv(out / "trajectory.csv")
    assert len(traj) == 51  # override applied


def test_spinor_subcommand(tmp_path):
    out = tmp_path / "sp"
    code = run_cli("spinor", "--n0", "1,0,0", "--theta0", str(math.pi / 2),
                   "--omega-vec", "0,0,1", "--t-end", "12.6", "--dt", "0.01",
                   "--out", str(out))
    assert code == 0
    sidecar = json.loads((out / "spinor.json").read_text())
    assert math.isclose(sidecar["a"], 1 / math.sqrt(2), abs_tol=1e-12)
    assert abs(sidecar["b"]) < 1e-12
    data = np.loadtxt(out / "spinor.csv", delimiter=",", skiprows=1)
    assert data.shape[1] == 5  # t, nx, ny, nz, theta


def test_spinor_parallel_axis_exit_2(tmp_path):
    code = run_cli("spinor", "--n0", "0,0,1", "--theta0", "1.0",
                   "--omega-vec", "0,0,2", "--t-end", "1", "--dt", "0.1",
                   "--out", str(tmp_path))
    assert code == 2


@pytest.fixture(scope="module")
def sample_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("sample")
    assert run_cli("simulate", "--rep", "euler", "--omega", "rotplane:40",
                   "--e0", "0.577,0.577,0.577", "--t-end", "200", "--dt", "0.01",
                   "--out", str(out)) == 0
    return out


def test_analyze_strobe(sample_run, tmp_path):
    code = run_cli("analyze", "strobe", "--in", str(sample_run / "trajectory.csv"),
                   "--period", "40", "--out", str(tmp_path))
    assert code == 0
    data = np.loadtxt(tmp_path / "strobe.csv", delimiter=",", skiprows=1)
    assert data.shape == (6, 5)  # floor(200/40)+1 rows; k,t,ex,ey,ez


def test_analyze_psd(sample_run, tmp_path):
    code = run_cli("analyze", "psd", "--in", str(sample_run / "trajectory.csv"),
                   "--out", str(tmp_path))
    assert code == 0
    data = np.loadtxt(tmp_path / "spectrum.csv", delimiter=",", skiprows=1)
    assert data.shape[1] == 2
    sidecar = json.loads((tmp_path / "spectrum.json").read_text())
    assert "peaks" in sidecar


def test_analyze_recurrence(sample_run, tmp_path):
    code = run_cli("analyze", "recurrence", "--in",
                   str(sample_run / "trajectory.csv"),
                   "--epsilon", "0.1", "--stride", "10", "--out", str(tmp_path))
    assert code == 0
    pairs = np.loadtxt(tmp_path / "recurrence.csv", delimiter=",",
                       skiprows=1, dtype=int, ndmin=2)
    n = 2001
    diag = set(map(tuple, pairs)) >= {(i, i) for i in range(0, n, 500)}
    assert diag


def test_analyze_lyapunov(sample_run, tmp_path):
    code = run_cli("analyze", "lyapunov", "--in",
                   str(sample_run / "trajectory.csv"),
                   "--omega", "rotplane:40", "--out", str(tmp_path))
    assert code == 0
    sidecar = json.loads((tmp_path / "lyapunov.json").read_text())
    assert max(abs(x) for x in sidecar["exponents"]) < 1e-2


def test_analyze_schema_mismatch_exit_3(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert run_cli("analyze", "psd", "--in", str(bad),
                   "--out", str(tmp_path)) == 3


def test_analyze_missing_file_exit_3(tmp_path):
    assert run_cli("analyze", "psd", "--in", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path)) == 3
