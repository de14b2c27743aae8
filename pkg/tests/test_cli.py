import json

import numpy as np
import pytest

from entangle_bench.cli import main, parse_angle
from entangle_bench.io import RunManifest, format_float, read_csv, read_states, write_states
from entangle_bench.states import EnsembleSpec, bell_state, product_state, sample_state, werner_state


def run(*args):
    return main([str(a) for a in args])


def test_sample_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run("sample", "--count", 1, "--seed", 7, "--out", a) == 0
    assert run("sample", "--count", 1, "--seed", 7, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.jsonl.manifest.json").exists()


def test_sample_roundtrip_bit_exact(tmp_path):
    out = tmp_path / "s.jsonl"
    assert run("sample", "--count", 20, "--seed", 3, "--dims", "2x3", "--field", "real", "--out", out) == 0
    spec = EnsembleSpec(20, seed=3, field="real", dims=(2, 3))
    for idx, rho in read_states(out):
        assert rho.mat.tobytes() == sample_state(spec, idx).mat.tobytes()
        assert rho.dims == (2, 3)


def test_sample_count_zero(tmp_path):
    out = tmp_path / "e.jsonl"
    assert run("sample", "--count", 0, "--out", out) == 0
    assert out.read_text() == ""


def test_sample_usage_errors(tmp_path):
    assert run("sample", "--count", -1, "--out", tmp_path / "x") == 2
    assert run("sample", "--count", 1, "--dims", "3x3", "--out", tmp_path / "x") == 2
    assert run("bogus") == 2
    assert run("sample", "--count", 1, "--out", tmp_path / "missing" / "x.jsonl") == 3


def test_seed_environment(tmp_path, monkeypatch):
    a, b, c = (tmp_path / n for n in ("a", "b", "c"))
    monkeypatch.setenv("ENTANGLE_BENCH_SEED", "11")
    run("sample", "--count", 2, "--out", a)
    run("sample", "--count", 2, "--seed", 11, "--out", b)
    run("sample", "--count", 2, "--seed", 12, "--out", c)
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()
    manifest = RunManifest.read(str(a) + ".manifest.json")
    assert manifest.seed == 11 and "--seed" in manifest.argv


def _write_named(path):
    write_states(path, [(0, bell_state(1)), (1, product_state([1, 0], [0, 1])), (2, werner_state(0.5))])


def test_measure_named_states(tmp_path):
    src, out = tmp_path / "n.jsonl", tmp_path / "m.csv"
    _write_named(src)
    assert run("measure", "--in", src, "--out", out, "--jobs", 1) == 0
    header, rows = read_csv(out)
    assert header == ["id", "concurrence", "c_max", "negativity", "log_negativity", "neg_eig", "eof", "ree", "ree_gap"]
    bell, prod, wer = rows
    assert bell["concurrence"] == pytest.approx(1) and bell["negativity"] == pytest.approx(1)
    assert bell["ree"] == pytest.approx(1, abs=1e-3)
    for k in ("concurrence", "negativity", "log_negativity", "neg_eig", "eof"):
        assert prod[k] == 0
    assert prod["ree"] <= 1e-4
    assert wer["concurrence"] == pytest.approx(0.25, abs=1e-9)


def test_measure_subset_and_qutrit(tmp_path):
    src, out = tmp_path / "q.jsonl", tmp_path / "m.csv"
    assert run("sample", "--count", 3, "--dims", "2x3", "--field", "real", "--out", src) == 0
    assert run("measure", "--in", src, "--out", out, "--jobs", 1, "--measures", "concurrence,negativity") == 0
    _, rows = read_csv(out)
    assert all(r["concurrence"] is None and r["ree"] is None and r["negativity"] is not None for r in rows)
    assert run("measure", "--in", src, "--out", out, "--measures", "purity") == 2


def test_measure_bad_line(tmp_path):
    src = tmp_path / "bad.jsonl"
    _write_named(src)
    with open(src, "a") as fh:
        fh.write('{"id": 3, "dim_a": 2, "dim_b": 2, "entries": [[1, 0]]}\n')
    assert run("measure", "--in", src, "--out", tmp_path / "m.csv") == 4
    src.write_text('{"id": 0, "dim_a": 2, "dim_b": 2, "entries": ' + json.dumps([[0.5, 0]] * 16) + "}\n")
    assert run("measure", "--in", src, "--out", tmp_path / "m.csv") == 4
    assert run("measure", "--in", tmp_path / "nope.jsonl", "--out", tmp_path / "m.csv") == 3


def test_measure_nonconvergence_exit(tmp_path):
    src = tmp_path / "w.jsonl"
    write_states(src, [(0, werner_state(0.9))])
    assert run("measure", "--in", src, "--out", tmp_path / "m.csv", "--ree-tol", "1e-300", "--ree-max-iter", 2, "--jobs", 1) == 5


def test_optimize(tmp_path):
    src, out = tmp_path / "n.jsonl", tmp_path / "o.csv"
    write_states(src, [(0, bell_state(1)), (1, product_state([1, 0], [1, 0])), (2, werner_state(0))])
    assert run("optimize", "--in", src, "--out", out, "--step", "pi/2", "--refine", "pi/3", "--jobs", 1) == 0
    header, rows = read_csv(out)
    assert header[:4] == ["state_id", "qfi", "mqfi_max", "mqfi_min"] and len(header) == 16
    assert rows[0]["mqfi_max"] == pytest.approx(2, abs=1e-12) and rows[0]["mqfi_min"] == pytest.approx(0, abs=1e-12)
    assert rows[2]["mqfi_max"] == 0 and rows[2]["mqfi_min"] == 0
    assert run("optimize", "--in", src, "--out", out, "--step", "pi/3", "--refine", "pi/2") == 2


def test_sweep_command(tmp_path):
    out = tmp_path / "s.csv"
    assert run("sweep", "--state", "ghz3", "--channel", "pdc", "--p-steps", 11, "--out", out, "--jobs", 1) == 0
    header, rows = read_csv(out)
    assert header == ["p", "value"] and len(rows) == 11
    assert rows[-1]["p"] == 1 and rows[-1]["value"] == pytest.approx(1, abs=1e-9)
    assert run("sweep", "--state", "ghz3", "--channel", "adc", "--p-steps", 11, "--out", out, "--jobs", 1) == 0
    _, rows = read_csv(out)
    assert rows[0]["value"] == pytest.approx(3, abs=1e-9) and rows[-1]["value"] == pytest.approx(1, abs=1e-9)
    assert run("sweep", "--state", "ghz9", "--channel", "adc", "--out", out) == 2
    assert run("sweep", "--state", "ghz3", "--channel", "xyz", "--out", out) == 2


def test_sweep_w_versus_w_like_dpc(tmp_path):
    w, wl = tmp_path / "w.csv", tmp_path / "wl.csv"
    run("sweep", "--state", "w3", "--channel", "dpc", "--p-steps", 11, "--out", w, "--jobs", 1)
    run("sweep", "--state", "wlike3", "--channel", "dpc", "--p-steps", 11, "--out", wl, "--jobs", 1)
    from entangle_bench.channels import SweepSpec, sweep
    from entangle_bench.states import w_like_state, w_state

    grid = np.linspace(0, 1, 11)
    for path, rho in ((w, w_state(3)), (wl, w_like_state())):
        got = [(r["p"], r["value"]) for r in read_csv(path)[1]]
        assert got == sweep(SweepSpec(rho, "DPC", grid))


def test_superposition_scan(tmp_path):
    out = tmp_path / "sc.csv"
    assert run("superposition-scan", "--n", 3, "--alpha-steps", 11, "--out", out) == 0
    _, rows = read_csv(out)
    assert rows[0]["mean_qfi"] == pytest.approx(3, abs=1e-9)
    assert rows[-1]["mean_qfi"] == pytest.approx(7 / 3, abs=1e-9)
    assert run("superposition-scan", "--n", 7, "--out", out) == 2


def test_census_and_join(tmp_path):
    src, m, o, c = (tmp_path / n for n in ("s.jsonl", "m.csv", "o.csv", "c.csv"))
    run("sample", "--count", 8, "--seed", 2, "--out", src)
    run("measure", "--in", src, "--out", m, "--jobs", 1)
    run("optimize", "--in", src, "--out", o, "--jobs", 1)
    assert run("census", "--in", m, "--mqfi", o, "--measures", "C,N,E,MQFI", "--out", c) == 0
    header, rows = read_csv(c)
    assert header == ["pattern", "count", "frequency"]
    assert sum(r["count"] for r in rows) == 28
    assert sum(r["frequency"] for r in rows) == pytest.approx(1)
    # id mismatch between the two files
    lines = o.read_text().splitlines()
    o.write_text("\n".join(lines[:-1]) + "\n")
    assert run("census", "--in", m, "--mqfi", o, "--measures", "C,MQFI", "--out", c) == 4
    assert run("census", "--in", m, "--measures", "C,purity", "--out", c) == 2


def test_scatter(tmp_path):
    src, m, svg = tmp_path / "n.jsonl", tmp_path / "m.csv", tmp_path / "p.svg"
    _write_named(src)
    run("measure", "--in", src, "--out", m, "--jobs", 1)
    assert run("scatter", "--in", m, "--x", "concurrence", "--y", "negativity", "--out", svg) == 0
    text = svg.read_text()
    assert text.count("<circle") == 3
    assert "negativity vs concurrence" in text
    assert run("scatter", "--in", m, "--x", "concurrence", "--y", "purity", "--out", svg) == 4


def test_scatter_point_positions():
    from entangle_bench.svg import scatter_svg

    text = scatter_svg([1, 0, 0.25], [1, 0, 0.25], "concurrence", "negativity")
    # pixel coordinates invert the affine axis map
    x0, x1 = -0.05, 1.05
    circles = [line for line in text.splitlines() if line.startswith("<circle")]
    xs = [float(c.split('cx="')[1].split('"')[0]) for c in circles]
    data_x = [x0 + (x - 60) / 400 * (x1 - x0) for x in xs]
    assert np.allclose(data_x, [1, 0, 0.25], atol=1e-3)


def test_scatter_empty(tmp_path):
    m, svg = tmp_path / "m.csv", tmp_path / "p.svg"
    m.write_text("id,concurrence,negativity\n")
    assert run("scatter", "--in", m, "--x", "concurrence", "--y", "negativity", "--out", svg) == 0
    text = svg.read_text()
    assert "<circle" not in text and "<line" in text


def test_replay(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run("sample", "--count", 4, "--seed", 5, "--out", "s.jsonl") == 0
    assert run("measure", "--in", "s.jsonl", "--out", "m.csv", "--jobs", 1) == 0
    assert run("replay", "m.csv.manifest.json") == 0
    with open("m.csv", "a") as fh:
        fh.write("tampered\n")
    manifest = RunManifest.read("m.csv.manifest.json")
    manifest.outputs["m.csv"] = "0" * 64
    manifest.write("m.csv.manifest.json")
    assert run("replay", "m.csv.manifest.json") == 4


def test_parse_angle():
    assert parse_angle("pi/2") == pytest.approx(np.pi / 2)
    assert parse_angle("2pi/3") == pytest.approx(2 * np.pi / 3)
    assert parse_angle("pi") == pytest.approx(np.pi)
    assert parse_angle("0.5") == 0.5


def test_format_float():
    assert format_float(0.1) == "0.1"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(None) == ""
    assert format_float(3) == "3"
