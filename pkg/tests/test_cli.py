import csv
import io
import json
import math

import numpy as np
import pytest

from tpssv import cli
from tpssv.export import atomic_write, fmt
from tpssv.state import StateSpec, pnd


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt_round_trips():
    for v in (0.1, math.pi, 1e-300, -2.5e17):
        assert float(fmt(v)) == v
    assert fmt(3) == "3"
    assert fmt(np.float64(0.5)) == "0.5"


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "a" / "x.txt"
    atomic_write(p, "one")
    atomic_write(p, "two")
    assert p.read_text() == "two"
    assert [f.name for f in p.parent.iterdir()] == ["x.txt"]


def test_info_fields(capsys):
    code, out, _ = run(capsys, "info", "--lambda", "0.5", "--m", "0", "--n", "0", "--nbar", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["var_Q"] == pytest.approx(math.e / 2, rel=1e-14)
    assert rep["R_ab"] == pytest.approx(-1 / math.cosh(1.0), rel=1e-14)
    assert rep["kt_c"] == pytest.approx(0.14384, abs=1e-5)


@pytest.mark.parametrize(
    "argv",
    [
        ("info", "--lambda", "-1"),
        ("info", "--m", "11"),
        ("wigner", "--slice", "q1q1"),
        ("wigner", "--kappa-t", "-0.1"),
        ("moments-sweep", "--pairs", "1-2"),
        ("wigner", "--fixed", "z=1"),
        ("threshold", "--nbar", "-2"),
        ("info", "--lambda", "abc"),
    ],
)
def test_invalid_input_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_oversized_grid_is_resource_limit(capsys):
    code, _, err = run(capsys, "wigner", "--steps", "1001")
    assert code == 3
    assert "limit" in err


def test_pnd_lattice_support_and_values(capsys):
    code, out, _ = run(capsys, "pnd", "--lambda", "1", "--m", "2", "--n", "5")
    assert code == 0
    data = rows(out)
    spec = StateSpec(1.0, 2, 5)
    total = 0.0
    for r in data:
        na, nb, p = int(r["n_a"]), int(r["n_b"]), float(r["probability"])
        assert p == pnd(spec, na, nb)
        if p:
            assert nb == na - 3
        total += p
    assert total == pytest.approx(1.0, abs=1e-12)
    cutoff = int(data[-1]["n_a"])
    assert len(data) == (cutoff + 1) ** 2


def test_pnd_vacuum_is_diagonal(capsys):
    _, out, _ = run(capsys, "pnd", "--lambda", "1")
    assert all(r["n_a"] == r["n_b"] for r in rows(out) if float(r["probability"]) > 0)


def test_pnd_refuses_truncating_cutoff(capsys):
    code, _, _ = run(capsys, "pnd", "--lambda", "1", "--cutoff", "5")
    assert code == 3


def test_pnd_files(tmp_path, capsys):
    out = tmp_path / "pnd.csv"
    assert run(capsys, "pnd", "--lambda", "0.4", "--n", "1", "--output", str(out))[0] == 0
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["n"] == 1 and meta["cutoff"] >= 20


def test_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "wigner", "--lambda", "0.5", "--m", "1", "--n", "2", "--steps", "21", "--output", str(p))
    assert a.read_bytes() == b.read_bytes()
    assert a.with_suffix(".json").read_bytes() == b.with_suffix(".json").read_bytes()


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"lambda": 0.8, "m": 1, "n": 2}))
    _, out, _ = run(capsys, "info", "--config", str(cfg))
    assert json.loads(out)["lambda"] == 0.8
    _, out, _ = run(capsys, "info", "--config", str(cfg), "--lambda", "0.3")
    rep = json.loads(out)
    assert rep["lambda"] == 0.3 and rep["m"] == 1 and rep["n"] == 2


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"lamda": 0.8}))
    assert run(capsys, "info", "--config", str(cfg))[0] == 2


def test_wigner_threshold_examples(tmp_path, capsys):
    base = ("wigner", "--lambda", "0.3", "--m", "0", "--n", "1", "--nbar", "1", "--slice", "q1q2")
    after, before = tmp_path / "after.csv", tmp_path / "before.csv"
    run(capsys, *base, "--kappa-t", "0.2", "--output", str(after))
    run(capsys, *base, "--kappa-t", "0.05", "--output", str(before))
    assert json.loads(after.with_suffix(".json").read_text())["min_value"] >= -1e-10
    assert json.loads(before.with_suffix(".json").read_text())["min_value"] < 0
    assert min(float(r["W"]) for r in rows(after.read_text())) >= -1e-10


def test_zero_time_equals_static(capsys):
    args = ("wigner", "--lambda", "0.6", "--m", "2", "--n", "1", "--steps", "15")
    _, static, _ = run(capsys, *args)
    _, evolved, _ = run(capsys, *args, "--kappa-t", "0", "--nbar", "1")
    assert static == evolved


def test_moments_sweep_schema(capsys):
    code, out, _ = run(capsys, "moments-sweep", "--pairs", "1:2,3:4", "--lambda-steps", "5")
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["lambda", "m", "n", "mean_na", "mean_nb", "var_Q", "var_P", "g12", "R_ab"]
    assert len(data) == 10


def test_evolve_sweep_and_threshold(capsys):
    code, out, _ = run(
        capsys, "evolve-sweep", "--lambda", "0.3", "--n", "1", "--nbar", "1", "--slice", "q1q2", "--kappa-t-values", "0.05,0.2"
    )
    assert code == 0
    data = rows(out)
    assert list(data[0]) == ["kappa_t", "nbar", "lambda", "m", "n", "grid_min", "negative_fraction"]
    assert float(data[0]["grid_min"]) < 0 <= float(data[1]["grid_min"]) + 1e-10
    code, out, _ = run(capsys, "threshold", "--nbar", "1")
    assert json.loads(out) == {"kt_c": pytest.approx(0.5 * math.log(4 / 3)), "nbar": 1.0}


def test_verify_quick_passes(capsys):
    code, out, err = run(capsys, "verify", "--quick")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and len(rep["checks"]) == 11
    assert all({"tolerance", "deviation", "passed"} <= set(c) for c in rep["checks"])


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--inject-fault")
    assert code == 1
    failed = [c["criterion"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert 1 in failed
