from __future__ import annotations

import contextlib
import io
import re
import subprocess
import sys

import numpy as np
import pytest

from nlsground.cli import main
from nlsground.grid import RadialGrid, state_from_csv


def run_cli(*args: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(args))
    return code, out.getvalue(), err.getvalue()


def write_conf(path, body: str) -> str:
    path.write_text(body)
    return str(path)


@pytest.fixture(scope="module")
def coupled_run(tmp_path_factory):
    """One CLI coupled solve shared by the round-trip tests."""
    root = tmp_path_factory.mktemp("coupled_cli")
    conf = write_conf(root / "run.conf", f"""
f.family = cubic
beta = 2.0
grid.N = 1600
output.dir = {root / 'out'}
""")
    code, out, err = run_cli("coupled", conf)
    assert code == 0, err
    return root, conf, out


def test_scalar_command(tmp_path):
    conf = write_conf(tmp_path / "s.conf", f"""
f.family = cubic
grid.N = 1200
output.dir = {tmp_path / 'out'}
""")
    code, out, err = run_cli("scalar", conf)
    assert code == 0
    assert re.match(r"a=\S+ action=\S+ residual=\S+\s*$", out)
    csv_path = tmp_path / "out" / "u0.csv"
    report = (tmp_path / "out" / "u0.report").read_text()
    assert csv_path.exists()
    assert "center_value=" in report and "action=" in report
    assert "residual_u=" in report
    # no leftover temp files from the atomic writes
    assert not list((tmp_path / "out").glob("*.tmp"))
    st = state_from_csv(csv_path, RadialGrid(R=20.0, N=1200))
    assert st.u.values[0] == pytest.approx(4.34, abs=0.05)


def test_scalar_numeric_failure(tmp_path):
    conf = write_conf(tmp_path / "s.conf", """
f.family = cubic
grid.N = 500
shooting.a_max = 2.0
""")
    code, out, err = run_cli("scalar", conf)
    assert code == 2
    assert "error:" in err


def test_coupled_command_output(coupled_run):
    root, conf, out = coupled_run
    assert re.match(r"kind=vector m=\S+ beta=2\s*$", out)
    report = (root / "out" / "state.report").read_text()
    assert "kind=vector" in report
    assert "iterations=" in report
    for key in ("I=", "J=", "K=", "W="):
        assert key in report
    m = float(re.search(r"^m=(\S+)$", report, re.M).group(1))
    assert m == pytest.approx(12.598, abs=1e-3)


def test_coupled_deterministic(coupled_run, tmp_path):
    root, _, _ = coupled_run
    conf = write_conf(tmp_path / "again.conf", f"""
f.family = cubic
beta = 2.0
grid.N = 1600
output.dir = {tmp_path / 'out'}
""")
    code, _, err = run_cli("coupled", conf)
    assert code == 0, err
    first = (root / "out" / "state.csv").read_bytes()
    second = (tmp_path / "out" / "state.csv").read_bytes()
    assert first == second


def test_coupled_requires_beta(tmp_path):
    conf = write_conf(tmp_path / "c.conf", "f.family = cubic\n")
    code, out, err = run_cli("coupled", conf)
    assert code == 1
    assert "beta is required" in err


def test_coupled_numeric_failure_on_coarse_grid(tmp_path):
    conf = write_conf(tmp_path / "c.conf", """
f.family = cubic
beta = 2.0
grid.N = 640
""")
    code, out, err = run_cli("coupled", conf)
    assert code == 2
    assert "error:" in err


def test_sweep_command(tmp_path):
    conf = write_conf(tmp_path / "w.conf", f"""
f.family = cubic
beta_list = [0.9, 1.1]
grid.N = 1600
output.dir = {tmp_path / 'out'}
""")
    code, out, err = run_cli("sweep", conf)
    assert code == 0, err
    assert "bracket_lo=0.90000000000000002 bracket_hi=1.1000000000000001" in out
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert lines[0] == "beta,m,kind,scalar_min,lhs_bound,beats"
    low = lines[1].split(",")
    high = lines[2].split(",")
    assert low[2] == "scalar_u" and low[5] == "false"
    assert high[2] == "vector" and high[5] == "true"
    assert float(high[1]) < float(high[3]) < float(low[1]) + 1e-6


def test_sweep_requires_beta_list(tmp_path):
    conf = write_conf(tmp_path / "w.conf", "f.family = cubic\nbeta = 2.0\n")
    code, out, err = run_cli("sweep", conf)
    assert code == 1
    assert "beta_list" in err


def test_sweep_partial_failure(tmp_path):
    conf = write_conf(tmp_path / "w.conf", f"""
f.family = cubic
beta_list = [2.0]
grid.N = 640
output.dir = {tmp_path / 'out'}
""")
    code, out, err = run_cli("sweep", conf)
    assert code == 4
    assert "bracket=none" in out
    assert "failed" in err
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert lines[1].split(",")[2] == "failed"


def test_check_accepts_solver_output(coupled_run):
    root, conf, _ = coupled_run
    code, out, err = run_cli("check", conf, str(root / "out" / "state.csv"))
    assert code == 0
    assert re.search(r"^J=", out, re.M)
    assert re.search(r"^residual_u=", out, re.M)


def test_check_rejects_perturbed_state(coupled_run, tmp_path):
    root, conf, _ = coupled_run
    grid = RadialGrid(R=20.0, N=1600)
    st = state_from_csv(root / "out" / "state.csv", grid)
    u = st.u.values.copy()
    u[1:-1] += 1e-3 * np.exp(-(grid.r[1:-1] - 2.0) ** 2)
    bad = tmp_path / "bad.csv"
    rows = ["r,u,v"]
    for r, a, b in zip(grid.r, u, st.v.values):
        rows.append(f"{r:.17g},{a:.17g},{b:.17g}")
    bad.write_text("\n".join(rows) + "\n")
    code, out, err = run_cli("check", conf, str(bad))
    assert code == 3


def test_check_scalar_profile(tmp_path):
    conf = write_conf(tmp_path / "s.conf", f"""
f.family = cubic
output.dir = {tmp_path / 'out'}
""")
    code, _, err = run_cli("scalar", conf)
    assert code == 0, err
    # two-column CSVs load with a vanishing second component
    code, out, _ = run_cli("check", conf, str(tmp_path / "out" / "u0.csv"))
    assert code == 0
    assert re.search(r"^residual_v=0\b", out, re.M)


def test_check_bad_inputs(coupled_run, tmp_path):
    root, conf, _ = coupled_run
    code, _, err = run_cli("check", conf, str(tmp_path / "missing.csv"))
    assert code == 1
    assert "error:" in err
    other_conf = write_conf(tmp_path / "other.conf",
                            "f.family = cubic\ngrid.N = 800\n")
    code, _, err = run_cli("check", other_conf,
                           str(root / "out" / "state.csv"))
    assert code == 1
    assert "node count" in err


def test_config_error_exit(tmp_path):
    conf = write_conf(tmp_path / "bad.conf", "nonsense = true\n")
    code, _, err = run_cli("scalar", conf)
    assert code == 1
    assert "config error:" in err


def test_module_entrypoint(tmp_path):
    conf = write_conf(tmp_path / "s.conf", f"""
f.family = cubic
grid.N = 800
output.dir = {tmp_path / 'out'}
""")
    proc = subprocess.run([sys.executable, "-m", "nlsground", "scalar", conf],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("a=")
    assert (tmp_path / "out" / "u0.csv").exists()
