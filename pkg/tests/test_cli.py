import json
import subprocess
import sys
from pathlib import Path

import pytest

from socle.cli import main

ROOT = Path(__file__).resolve().parents[1]
EX46 = str(ROOT / "instances" / "example46.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def last_json(text):
    return json.loads(text.strip().splitlines()[-1])


def test_rank_example46(capsys):
    code, out, _ = run(capsys, "rank", EX46, "a")
    assert code == 0 and last_json(out)["rank"] == 4


def test_trace_and_spectrum(capsys):
    code, out, _ = run(capsys, "trace", EX46, "a")
    assert code == 0 and last_json(out)["trace"] == [0.0, 0.0]
    code, out, _ = run(capsys, "spectrum", EX46, "a")
    mults = sorted(v["multiplicity"] for v in last_json(out)["spectrum"])
    assert code == 0 and mults == [2, 2]


def test_shoda_example46(capsys):
    code, out, _ = run(capsys, "shoda", EX46, "a")
    cert = last_json(out)["certificate"]
    assert code == 0 and cert["residual"] <= 1e-8 and cert["rank_x"] <= 4


def test_shoda_obstruction_exit_1(capsys):
    code, out, _ = run(capsys, "shoda", EX46, "b")
    rep = last_json(out)
    assert code == 1 and not rep["member"] and rep["ideal_traces"] == [[1.0, 0.0], [-1.0, 0.0]]


def test_ideal_and_diagonalize(capsys):
    code, out, _ = run(capsys, "ideal", EX46, "p")
    rep = last_json(out)
    assert code == 0 and rep["ideal"]["block_index"] == 0 and rep["tensor_model"]["ok"]
    code, out, _ = run(capsys, "diagonalize", EX46, "a")
    assert code == 0 and len(last_json(out)["terms"]) == 4


def _pipe(args1, args2):
    gen = subprocess.run([sys.executable, "-m", "socle.cli", *args1], capture_output=True,
                         text=True, check=True)
    return subprocess.run([sys.executable, "-m", "socle.cli", *args2], input=gen.stdout,
                          capture_output=True, text=True)


def test_gen_piped_to_central():
    res = _pipe(["gen", "--sizes", "1", "--seed", "0"], ["central", "-"])
    rep = json.loads(res.stdout)
    assert res.returncode == 0
    assert all(rep["predicates"][k]["value"] for k in
               ("central", "square_zero", "corner_rank", "commutators_trivial",
                "extremal_dims_lower"))


def test_gen_scramble_round_trip(tmp_path):
    iso_path = tmp_path / "iso.json"
    res = _pipe(["gen", "--sizes", "3,1", "--seed", "4", "--scramble"],
                ["decompose", "-", "--seed", "4", "-o", str(iso_path)])
    assert res.returncode == 0
    assert sorted(json.loads(res.stdout)["sizes"]) == [1, 3]
    assert sorted(json.loads(iso_path.read_text())["sizes"]) == [1, 3]


def test_structure_instance_uses_stored_iso(tmp_path, capsys):
    inst = tmp_path / "inst.json"
    code, out, _ = run(capsys, "gen", "--sizes", "2,1", "--seed", "1", "--scramble")
    doc = json.loads(out)
    inst.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "decompose", str(inst), "--seed", "1")
    doc["iso"] = last_json(out)["iso"]
    inst.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "rank", str(inst), "a")
    assert code == 0 and last_json(out)["rank"] == 3


def test_determinism_modulo_wall_time(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "shoda", EX46, "a", "--seed", "3")
        rep = last_json(out)
        rep.pop("wall_time")
        outs.append(json.dumps(rep, sort_keys=True))
    assert outs[0] == outs[1]


def test_malformed_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": {"kind": "blocks",\n "sizes": [2,]}}')
    code, _, err = run(capsys, "rank", str(bad), "a")
    assert code == 2 and "line 2" in err and "column" in err


@pytest.mark.parametrize("doc", [
    {"algebra": {"kind": "blocks", "sizes": [0]}},
    {"algebra": {"kind": "blocks", "sizes": [2]}, "elements": {"a": {"coords": [[1, 0]]}}},
    {"algebra": {"kind": "blocks", "sizes": [2]}, "tolerances": {"rank_tol": -1}},
    {"algebra": {"kind": "ring"}},
])
def test_bad_instances_exit_2(tmp_path, capsys, doc):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "rank", str(path), "a")
    assert code == 2


def test_unknown_element_and_usage(capsys):
    code, _, err = run(capsys, "rank", EX46, "zz")
    assert code == 2 and "zz" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_tolerance_env_override(monkeypatch, capsys):
    monkeypatch.setenv("SOCLE_TOL_RESIDUAL", "1e-7")
    _, out, _ = run(capsys, "trace", EX46, "a")
    assert last_json(out)["tolerances"]["residual_tol"] == 1e-7


def test_check_sweep_json_lines(capsys):
    code, out, _ = run(capsys, "check", "--suite", "all", "--seeds", "0..1", "--sizes", "2;2,1")
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert code == 0 and len(lines) == 21 and lines[-1]["failed"] == 0
    assert all(l["pass"] for l in lines[:-1])


def test_check_bad_seed_range(capsys):
    code, _, _ = run(capsys, "check", "--seeds", "5..1")
    assert code == 2
