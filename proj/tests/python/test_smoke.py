import math

import pytest

import kinetic_uq


def test_version_is_nonempty():
    assert isinstance(kinetic_uq.version(), str)
    assert kinetic_uq.version()


def test_builtin_scenarios_are_listed():
    ids = kinetic_uq.scenario_ids()
    assert len(ids) == 9
    assert "fig1" in ids
    assert "ex3_swarming" in ids


def test_validate_builtin():
    info = kinetic_uq.validate("fig1")
    assert info["id"] == "fig1"
    assert info["model"] == "linear_fp"
    assert info["dt"] > 0
    assert info["t_final"] > 0


def test_validate_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[scenario]\nid = x\nnope = 1\n")
    with pytest.raises(ValueError) as err:
        kinetic_uq.validate(str(bad))
    assert "bad.ini:" in str(err.value)


TINY = """\
[scenario]
id = tiny
title = smoke run
model = linear_fp
method = mc

[grid]
w_min = -1
w_max = 1
n_cells = 16

[input]
a = -1
b = 1

[model]
u = 0
mixture_c = 0.1
sigma2_base = 0.1
sigma2_slope = 0.005

[solver]
scheme = explicit_euler
weights = quasi_steady
flux = cc
face_rule = gauss
gauss_points = 20
dt = 1 / 128
t_final = 0.25

[uq]
sample_counts = 2, 4
repetitions = 2
reference_nodes = 8
seed = 42

[output]
snapshots = 0.125, 0.25
"""


def test_run_produces_artifacts(tmp_path):
    cfg = tmp_path / "tiny.ini"
    cfg.write_text(TINY)
    out = tmp_path / "out"
    result = kinetic_uq.run(str(cfg), out_dir=str(out), seed=7, threads=1)
    assert result["files"]
    for name in result["files"]:
        assert (out / name).is_file()
    manifest = next(n for n in result["files"] if "manifest" in n)
    text = (out / manifest).read_text()
    assert "status = ok" in text
    assert "run.seed = 7" in text
    errors = next(n for n in result["files"] if "error" in n)
    rows = (out / errors).read_text().strip().splitlines()
    assert rows[0] == "samples,time,mean_l1_error"
    for row in rows[1:]:
        for cell in row.split(","):
            assert math.isfinite(float(cell))
