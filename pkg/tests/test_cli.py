import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from efimov_tms import cli
from efimov_tms.config import geometric_grid
from efimov_tms.specfun import GAMMA_AT_ZERO, get_s0


def run(*argv):
    buf = io.BytesIO()
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


def rows(data):
    r = list(csv.reader(io.StringIO(data.decode())))
    return r[0], r[1:]


def test_spectrum_ratio_column():
    code, out = run("spectrum", "--beta", "1", "--n", "-2..2")
    assert code == 0
    head, body = rows(out)
    assert head == list(cli.SCHEMAS["spectrum"])
    assert [int(r[1]) for r in body] == [-2, -1, 0, 1, 2]
    for r in body:
        assert float(r[3]) == pytest.approx(math.exp(2 * math.pi / get_s0()), rel=1e-13)
        assert float(r[2]) < 0


def test_spectrum_empty_range_header_only():
    code, out = run("spectrum", "--n", "3..1")
    assert code == 0
    assert out == b"beta,n,energy,ratio\n"


def test_gamma_at_zero():
    code, out = run("gamma", "--s", "0")
    _, body = rows(out)
    assert float(body[0][1]) == pytest.approx(GAMMA_AT_ZERO, rel=1e-14)


def test_gamma_default_range_row_count():
    code, out = run("gamma")
    _, body = rows(out)
    assert len(body) == 2001
    assert float(body[0][0]) == -10 and float(body[-1][0]) == pytest.approx(10, abs=1e-12)


def test_gamma_regularized_needs_sigma():
    assert run("gamma", "--variant", "high-energy")[0] == 2
    code, out = run("gamma", "--variant", "high-energy", "--sigma", "1", "--s", "0", "--format", "json")
    env = json.loads(out)
    assert env["variant"] == "high-energy" and env["columns"] == ["s", "value"]


def test_byte_determinism():
    a = run("gamma", "--s-min", "-1", "--s-max", "1", "--s-step", "0.1", "--format", "json")[1]
    b = run("gamma", "--s-min", "-1", "--s-max", "1", "--s-step", "0.1", "--format", "json")[1]
    assert a == b
    assert b"\r" not in a


def test_json_envelope():
    env = json.loads(run("spectrum", "--format", "json")[1])
    for key in ("version", "s0", "tolerances", "grid", "units", "columns", "rows"):
        assert key in env
    assert env["s0"] == get_s0()


def test_eigenfunction_rho_sums_to_one():
    code, out = run("eigenfunction", "--beta", "1", "--n", "2", "--format", "json")
    env = json.loads(out)
    p = np.array([r[0] for r in env["rows"]])
    rho = np.array([r[2] for r in env["rows"]])
    q, w = geometric_grid(p[0], p[-1], p.size)
    assert np.allclose(p, q, rtol=1e-13)
    assert np.sum(w * rho) == pytest.approx(1.0, abs=1e-8)


def test_out_file(tmp_path):
    f = tmp_path / "s.csv"
    code, out = run("spectrum", "--out", str(f))
    assert code == 0 and out == b""
    assert f.read_bytes().startswith(b"beta,n,energy,ratio\n")


def test_solve_tms_residual_column():
    code, out = run("solve-tms", "--seed", "3", "--c", "0.5")
    head, body = rows(out)
    assert head == ["x", "theta", "residual"]
    assert max(float(r[2]) for r in body) < 1e-5


def test_kernels_small_error():
    code, out = run("kernels")
    _, body = rows(out)
    assert {r[0] for r in body} == {"log-ratio", "sech2", "cosh-plus", "cosh-minus", "log-coth"}
    assert max(float(r[4]) for r in body) < 1e-6


def test_usage_errors_exit_2(capsys):
    assert run("gamma", "--s-step", "-1")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.run(["spectrum", "--n", "x..y"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.run(["nonsense"])
    assert e.value.code == 2


def test_verify_exit_codes(monkeypatch):
    from efimov_tms import checks
    ok = [checks.Check("a", 0.0, 1.0, True)]
    bad = ok + [checks.Check("b", 2.0, 1.0, False)]
    monkeypatch.setattr(checks, "run_all", lambda seed=0: ok)
    assert run("verify")[0] == 0
    monkeypatch.setattr(checks, "run_all", lambda seed=0: bad)
    code, out = run("verify")
    assert code == 1
    assert out.decode().splitlines()[-1] == "b,2,1,false"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "efimov_tms", "spectrum", "--n", "0"],
                       capture_output=True, check=True)
    assert r.stdout.count(b"\n") == 2
