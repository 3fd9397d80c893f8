import json

import pytest

from siss.cli import run


def _run(tmp_path, command, cfg=None, *extra, name="out"):
    out = tmp_path / name
    argv = [command, "--out", str(out), *extra]
    if cfg is not None:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(cfg))
        argv += ["--config", str(path)]
    return run(argv), out


def test_tables(tmp_path):
    code, out = _run(tmp_path, "tables", {"table": "T1"}, "--markdown")
    assert code == 0
    lines = (out / "T1.csv").read_text().splitlines()
    assert len(lines) == 49
    assert (out / "T1.md").exists()


def test_constants_csv(tmp_path):
    code, out = _run(tmp_path, "constants", {"r": [1], "methods": ["exact-table"], "m": [0, 1]})
    assert code == 0
    rows = (out / "constants.csv").read_text().splitlines()
    assert rows[0] == "constant,index,method,value,uncertainty"
    assert rows[1].startswith("c,1,exact-table,9.869604401")
    assert rows[2].startswith("K,0,")


def test_bernstein(tmp_path):
    code, out = _run(tmp_path, "bernstein", {"generator": {"kind": "sinc"}, "s": [1, 2]})
    data = json.loads((out / "bernstein.json").read_text())
    assert code == 0
    assert abs(data["constants"][0]["difference"]) < 1e-10


def test_density_uniform(tmp_path):
    cfg = {"sampling": {"pattern": "uniform", "params": {"h": 1}, "window": [-10, 10]}}
    code, out = _run(tmp_path, "density-check", cfg)
    rep = json.loads((out / "density.json").read_text())
    assert code == 0
    assert rep["gamma"] == 1 and rep["delta"] == {"1": 1.0, "2": 2.0, "3": 3.0, "4": 4.0}


def test_density_compliance_exit(tmp_path):
    cfg = {"sampling": {"pattern": "uniform", "params": {"h": 1.2}, "window": [-10, 10]},
           "generator": {"kind": "sinc"}, "k": 1}
    assert _run(tmp_path, "density-check", cfg)[0] == 2


def test_reconstruct(tmp_path):
    cfg = {"generator": {"kind": "sinc"}, "window": [-8, 7],
           "sampling": {"pattern": "uniform", "params": {"h": 0.8}}, "csv": True}
    code, out = _run(tmp_path, "reconstruct", cfg, "--seed", "3")
    trace = json.loads((out / "trace.json").read_text())
    assert code == 0 and trace["converged"] and trace["relative_error"] < 1e-6
    assert (out / "signal.csv").read_text().startswith("x,value\n")


def test_reconstruct_noncompliant(tmp_path):
    cfg = {"generator": {"kind": "sinc"}, "window": [-4, 4],
           "sampling": {"pattern": "uniform", "params": {"h": 1.1}}}
    assert _run(tmp_path, "reconstruct", cfg)[0] == 2


def test_reconstruct_divergence(tmp_path):
    cfg = {"generator": {"kind": "sinc"}, "window": [-6, 5], "warn": True, "max_iter": 60,
           "sampling": {"pattern": "uniform", "params": {"h": 1.9}}}
    with pytest.warns(UserWarning):
        code, out = _run(tmp_path, "reconstruct", cfg)
    assert code == 3
    assert json.loads((out / "trace.json").read_text())["diverged"]


def test_sharpness(tmp_path):
    code, out = _run(tmp_path, "sharpness", {})
    rows = [ln.split(",") for ln in (out / "sharpness.csv").read_text().splitlines()[1:]]
    A = [float(r[1]) for r in rows]
    assert code == 0 and [int(r[0]) for r in rows] == [16, 32, 64]
    assert A[0] > A[1] > A[2]


def test_gabor(tmp_path):
    cfg = {"y": [-1, 0, 1], "row": {"pattern": "uniform", "params": {"h": 0.8}}, "signals": 5}
    code, out = _run(tmp_path, "gabor-check", cfg)
    rep = json.loads((out / "gabor.json").read_text())
    assert code == 0 and rep["covered"] and len(rep["ratios"]) == 5


def test_gabor_uncovered(tmp_path):
    cfg = {"y": [-2, 0, 2], "row": {"pattern": "uniform", "params": {"h": 0.8}}}
    assert _run(tmp_path, "gabor-check", cfg)[0] == 2


@pytest.mark.parametrize("command,cfg", [
    ("reconstruct", {}),
    ("bernstein", {"generator": {"kind": "haar"}}),
    ("density-check", {"sampling": {"pattern": "nope", "window": [0, 1]}}),
])
def test_config_errors(tmp_path, command, cfg):
    assert _run(tmp_path, command, cfg)[0] == 4


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(["tables", "--config", str(path), "--out", str(tmp_path)]) == 4


@pytest.mark.parametrize("command,cfg,files", [
    ("tables", {"table": "T3"}, ["T3.csv"]),
    ("reconstruct", {"generator": {"kind": "bspline", "m": 4}, "window": [-6, 5],
                     "sampling": {"pattern": "jittered", "params": {"h": 0.5, "amplitude": 0.1}},
                     "csv": True}, ["trace.json", "signal.csv"]),
    ("gabor-check", {"y": [0, 1], "row": {"pattern": "uniform", "params": {"h": 0.8}}, "signals": 3},
     ["gabor.json"]),
])
def test_deterministic(tmp_path, command, cfg, files):
    _, a = _run(tmp_path, command, cfg, "--seed", "11", name="a")
    _, b = _run(tmp_path, command, cfg, "--seed", "11", name="b")
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes()


def test_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("SISS_THREADS", "1")
    assert _run(tmp_path, "tables", {"table": "T2"})[0] == 0
