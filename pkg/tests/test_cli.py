import json
import subprocess
import sys

import pytest

from ksverify import formats
from ksverify.cli import main
from ksverify.coloring import parse_dimacs
from ksverify.geometry import build_ray_system, enumerate_bases


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def rs():
    return build_ray_system()


def test_rays_records(capsys, rs):
    code, out, _ = run(capsys, "rays", "--format", "records")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 33
    assert json.loads(lines[0]) == {"id": 1, "components": [[1, 0], [0, 0], [0, 0]], "cube": "X", "axis": "100"}
    assert formats.parse_rays_records(out) == list(rs.rays)


def test_rays_with_completions_round_trip(capsys, rs):
    code, out, _ = run(capsys, "rays", "--format", "records", "--completions")
    assert code == 0
    assert formats.parse_rays_records(out) == list(rs.directions)


def test_rays_table(capsys):
    code, out, _ = run(capsys, "rays")
    assert code == 0
    assert len(out.splitlines()) == 34
    assert "(√2, 1, 1)" in out


def test_triples(capsys, rs):
    code, out, _ = run(capsys, "triples", "--format", "records")
    assert code == 0
    assert formats.parse_triples_records(out) == enumerate_bases(rs)
    assert json.loads(out.splitlines()[0]) == {"rank": 1, "ids": [1, 2, 3], "complete": True}
    code, table, _ = run(capsys, "triples")
    assert len(table.splitlines()) == 42


@pytest.mark.parametrize("mode", ["triples_only", "triples_and_pairs"])
def test_verify(capsys, mode):
    code, out, _ = run(capsys, "verify", "--mode", mode)
    assert code == 0
    fields = dict(line.split(": ", 1) for line in out.splitlines())
    assert fields["result"] == "UNSAT"
    assert int(fields["nodes_visited"]) > 0
    assert "elapsed_s" not in fields


def test_verify_timing(capsys):
    code, out, _ = run(capsys, "verify", "--timing")
    assert code == 0 and "elapsed_s: " in out


def test_cnf_stdout_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "cnf")
    assert code == 0
    doc = parse_dimacs(out)
    assert len(doc.clauses) == 160
    target = tmp_path / "ks.cnf"
    code, out2, _ = run(capsys, "cnf", "--mode", "projected", "-o", str(target))
    assert code == 0 and out2 == ""
    assert parse_dimacs(target.read_text()).header == "p cnf 33 88"


def test_refute_sources(capsys, tmp_path):
    code, out, _ = run(capsys, "refute", "--predictor", "all_ones", "--seed", "1")
    assert code == 0 and "k: 1\n" in out and "predicted: 111" in out
    a = run(capsys, "refute", "--predictor", "random:99", "--seed", "4")
    b = run(capsys, "refute", "--predictor", "random:99", "--seed", "4")
    assert a == b and a[0] == 0
    f = tmp_path / "p.txt"
    f.write_text("0" * 10 + "\n" + "1" * 23 + "\n")
    code, out, _ = run(capsys, "refute", "--predictor", f"file:{f}", "--seed", "0")
    assert code == 0 and "k: " in out


@pytest.mark.parametrize("content", ["1" * 32, "1" * 34, "1" * 32 + "2", ""])
def test_refute_bad_file(capsys, tmp_path, content):
    f = tmp_path / "bad.txt"
    f.write_text(content)
    code, _, err = run(capsys, "refute", "--predictor", str(f), "--seed", "0")
    assert code == 1
    assert "predictor file" in err


def test_refute_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "refute", "--predictor", str(tmp_path / "none"), "--seed", "0")
    assert code == 1


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--trials", "300", "--seed", "5",
                       "--schedule", "exhaustive_keys", "--predictor", "all_zeros")
    assert code == 0
    rep = json.loads(out)
    assert rep["twin_agreement_rate"] == 1.0
    assert rep["refutations"][0]["k"] == 1
    code, verbose, _ = run(capsys, "simulate", "--trials", "3", "--seed", "5", "--verbose")
    assert len(verbose.splitlines()) > 3


def test_maxsat(capsys):
    code, out, _ = run(capsys, "maxsat")
    assert code == 0
    assert "max_valid_bases: 39" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["rays", "--format", "xml"],
        ["simulate", "--trials", "10"],
        ["simulate", "--trials", "0", "--seed", "1"],
        ["refute", "--predictor", "all_ones"],
        ["verify", "--nope"],
    ],
)
def test_usage_errors_exit_1(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ksverify", "verify"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("result: UNSAT")
    proc = subprocess.run([sys.executable, "-m", "ksverify", "frobnicate"], capture_output=True)
    assert proc.returncode == 1


@pytest.mark.parametrize(
    "argv",
    [["rays", "--format", "records"], ["cnf"], ["simulate", "--trials", "500", "--seed", "8", "--verbose"]],
)
def test_output_independent_of_hash_seed(argv):
    outs = set()
    for hashseed in ("0", "1", "12345"):
        proc = subprocess.run(
            [sys.executable, "-m", "ksverify", *argv],
            capture_output=True,
            env={"PYTHONHASHSEED": hashseed, "PATH": ""},
        )
        assert proc.returncode == 0
        outs.add(proc.stdout)
    assert len(outs) == 1
