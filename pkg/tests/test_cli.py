import json

import numpy as np
import pytest

from liouvsym.cli import main
from liouvsym.serialization import read_series_csv

GENERIC = {"alpha": 0.7, "gamma": -1.1, "delta": 0.4, "zeta": 0.9, "eta": -0.3}


def write_cfg(tmp_path, name="cfg.json", **cfg):
    path = tmp_path / name
    path.write_text(json.dumps({"schema": 1, **cfg}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_alpha_only(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params={"alpha": 1.0})
    code, out, _ = run(capsys, "spectrum", cfg)
    rep = json.loads(out)
    assert code == 0
    assert np.allclose(rep["eigenvalues_numeric"], [-1, -1, 1, 1])
    assert rep["analytic_agrees"] is True


def test_spectrum_generic_and_circuit(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    code, out, _ = run(capsys, "spectrum", cfg)
    assert code == 0 and json.loads(out)["analytic_agrees"] is True
    circ = write_cfg(tmp_path, "c.json", model="circuit",
                     params={"Delta": 0.5, "E1": 1.0, "E2": 0.8, "phi0": 0.3, "phie": 0.6, "C1": 1.0,
                             "C2": 1.0, "Cb": 2.0, "Cg": 1.0, "Vg": 0.5, "Q0": -1.5, "q": 0.2, "e": 1.0})
    code, out, _ = run(capsys, "spectrum", circ)
    rep = json.loads(out)
    assert code == 0 and rep["params"]["beta"] == 0.0 and rep["params"]["epsilon"] == 0.0


def test_spectrum_draws_parallel_is_deterministic(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", analysis={"draws": 6, "seed": 3})
    _, serial, _ = run(capsys, "spectrum", cfg)
    _, parallel, _ = run(capsys, "spectrum", cfg, "--jobs", "2")
    assert serial == parallel
    assert all(d["analytic_agrees"] for d in json.loads(serial)["draws"])


def test_exit_codes(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    assert run(capsys, "spectrum", cfg, "--set", "params.bogus=1")[0] == 2
    assert run(capsys, "spectrum", write_cfg(tmp_path, "s.json", model="effparams"), "--set", "schema=2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": 1,\n "model": }')
    code, _, err = run(capsys, "spectrum", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "spectrum", cfg, "--set", "params.beta=0.3", "--set", "analysis.analytic=true")
    assert code == 3
    code, out, _ = run(capsys, "liouvillian", cfg, "--set", "analysis.tol=-1")
    assert code == 4 and json.loads(out)["oracle_max_error"] <= 1e-13


def test_liouvillian_blocks(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    code, out, _ = run(capsys, "liouvillian", cfg)
    rep = json.loads(out)
    assert code == 0 and rep["blocks"]["sizes"] == [5, 10]
    assert rep["blocks"]["blocks"][0] == ["y0", "z0", "xx", "xy", "xz"]
    code, out, _ = run(capsys, "liouvillian", cfg, "--set", "params.beta=0.5")
    assert json.loads(out)["blocks"]["sizes"] == [15]
    diag = write_cfg(tmp_path, "d.json", model="custom-hamiltonian", params={"matrix": [[1, 0], [0, 3]]})
    code, out, _ = run(capsys, "liouvillian", diag, "--basis", "vectorized")
    rep = json.loads(out)
    assert code == 0 and rep["blocks"]["sizes"] == [1, 1, 1, 1]
    assert rep["labels"][1] == "|1><0|"


def test_correlators(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    csv_path = tmp_path / "f.csv"
    code, out, _ = run(capsys, "correlators", cfg, "--all", "--out", str(csv_path))
    rep = json.loads(out)
    assert code == 0 and rep["n_vanishing"] == 25 and rep["generic_pattern"]
    header, data = read_series_csv(csv_path.read_text())
    assert header[0] == "t" and len(header) == 46 and data.shape == (50, 46)
    assert data[0, header.index("xx0")] == pytest.approx(4.0)
    code, out, err = run(capsys, "correlators", cfg, "--jkl", "y,x,0", "--set", "params.beta=0.3")
    assert code == 0 and out.splitlines()[0] == "t,yx0"
    assert not json.loads(err)["generic_pattern"]


def test_evolve(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC,
                    dissipator={"jumps": [{"op": "0x", "rate": 0.3}], "confine": "ten-block"},
                    analysis={"times": {"start": 0, "stop": 10, "num": 11}})
    csv_path = tmp_path / "e.csv"
    code, out, _ = run(capsys, "evolve", cfg, "--rho0", "yz:0.9,0.4", "--out", str(csv_path))
    rep = json.loads(out)
    assert code == 0 and rep["block_leakage_max"] <= 1e-8 and rep["max_trace_error"] <= 1e-10
    assert rep["dfls"][0]["decoherence_free"] and not rep["dfls"][1]["decoherence_free"]
    header, data = read_series_csv(csv_path.read_text())
    assert header[:3] == ["t", "trace", "0x"] and np.allclose(data[:, 1], 1)
    code, out, _ = run(capsys, "evolve", cfg, "--rho0", "yz:0.9,0.4", "--out", str(csv_path),
                       "--set", 'dissipator.jumps=[{"op": "0-", "rate": 0.01}]', "--set", "dissipator.confine=null")
    assert code == 0 and json.loads(out)["block_leakage_max"] >= 1e-4
    assert run(capsys, "evolve", cfg, "--rho0", "basis:9")[0] == 3


def test_evolve_marginals_independent_of_set_state(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    outs = []
    for s in ("0.1,0.2,0.3", "-0.5,0.0,0.6"):
        path = tmp_path / "m.csv"
        assert run(capsys, "evolve", cfg, "--rho0", f"yz:0.9,0.4;set:{s}", "--out", str(path))[0] == 0
        header, data = read_series_csv(path.read_text())
        outs.append(data[:, [header.index("y0"), header.index("z0")]])
    assert np.max(np.abs(outs[0] - outs[1])) <= 1e-10


def test_classical(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="classical", params={"gamma": 0.05, "mu": 0.05, "start": [0, 1]})
    path = tmp_path / "flow.csv"
    code, out, _ = run(capsys, "classical", cfg, "flow", "--out", str(path))
    assert code == 0
    header, data = read_series_csv(path.read_text())
    assert header == ["t", "p", "q"]
    assert np.hypot(*data[-1, 1:]) == pytest.approx(np.exp(-np.pi / 10), abs=1e-8)
    code, out, _ = run(capsys, "classical", cfg, "algebra")
    rep = json.loads(out)
    assert code == 0 and rep["jacobi_exact_zero"] and rep["l_tot_commutes_with_scaling"]
    wrong = write_cfg(tmp_path, "w.json", model="effparams")
    assert run(capsys, "classical", wrong, "flow")[0] == 3


def test_byte_identical_reruns(tmp_path, capsys):
    cfg = write_cfg(tmp_path, model="effparams", params=GENERIC)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "correlators", cfg, "--out", str(a))
    run(capsys, "correlators", cfg, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_stdin_config(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"schema": 1, "model": "oscillator", "params": {"D": 4}})))
    code, out, _ = run(capsys, "spectrum", "-")
    assert code == 0 and np.allclose(json.loads(out)["eigenvalues_numeric"], [0.5, 1.5, 2.5, 3.5])
