import json
import subprocess
import sys

import pytest

from cubechrome.cli import EXIT_ABSENT, EXIT_BUDGET, EXIT_FOUND, EXIT_USAGE, main
from cubechrome.coloring import PartialColoring, avoids, is_proper
from cubechrome.figure1 import configurations
from cubechrome.hypercube import build
from cubechrome.io import coloring_from_json, coloring_to_json, dump


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_avoid_on_drawn_configuration_is_absent(tmp_path, capsys):
    path = tmp_path / "fig.json"
    dump(coloring_to_json(configurations()[0]), path)
    code, out, _ = run(capsys, "solve", "avoid", "--input", path)
    assert code == EXIT_ABSENT and json.loads(out)["status"] == "none"


def test_avoid_on_empty_coloring_writes_witness(tmp_path, capsys):
    src, dst = tmp_path / "empty.json", tmp_path / "f.json"
    dump(coloring_to_json(PartialColoring.empty(build(4), 4)), src)
    code, out, _ = run(capsys, "solve", "avoid", "--input", src, "--output", dst)
    assert code == EXIT_FOUND and json.loads(out)["status"] == "found"
    f = coloring_from_json(json.loads(dst.read_text()))
    assert f.is_total() and is_proper(f)


def test_extend_avoid_reports_obstruction_kind(tmp_path, capsys):
    cube = build(2)
    phi = PartialColoring.empty(cube, 2)
    psi = PartialColoring(cube, 2, (1, 2, 0, 0))
    path = tmp_path / "pair.json"
    dump({"phi": coloring_to_json(phi), "psi": coloring_to_json(psi)}, path)
    code, out, _ = run(capsys, "solve", "extend-avoid", "--input", path)
    rec = json.loads(out)
    assert code == EXIT_ABSENT and rec["obstruction"]["kind"] == "D3"
    code, out, _ = run(capsys, "classify", "extend-avoid", "--input", path)
    assert code == EXIT_ABSENT and json.loads(out)["kind"] == "D3"


def test_extend_and_classify(tmp_path, capsys):
    cube = build(3)
    phi = PartialColoring(cube, 3, (1, 2, 3) + (0,) * 9)
    path = tmp_path / "phi.json"
    dump(coloring_to_json(phi), path)
    code, out, _ = run(capsys, "solve", "extend", "--input", path)
    assert code == EXIT_ABSENT and json.loads(out)["obstruction"]["kind"] == "C4"
    dump(coloring_to_json(PartialColoring(cube, 3, (1,) + (0,) * 11)), path)
    code, out, _ = run(capsys, "classify", "extension", "--input", path)
    assert code == EXIT_FOUND and json.loads(out)["kind"] == "none"


@pytest.mark.parametrize("bad", ["{not json", '{"d": 3, "edges": [{"base": 1, "dim": 0, "color": 1}]}', "[]"])
def test_malformed_input_exit_2(tmp_path, capsys, bad):
    path = tmp_path / "bad.json"
    path.write_text(bad)
    code, _, err = run(capsys, "solve", "avoid", "--input", path)
    assert code == EXIT_USAGE and "error" in err


def test_missing_file_and_bad_arguments(capsys):
    assert run(capsys, "solve", "avoid", "--input", "/nonexistent.json")[0] == EXIT_USAGE
    assert run(capsys, "solve", "paint", "--input", "x")[0] == EXIT_USAGE
    assert run(capsys, "enumerate", "--d", "7")[0] == EXIT_USAGE
    assert run(capsys, "enumerate", "--d", "2", "--shards", "3/2")[0] == EXIT_USAGE


def test_budget_exhaustion_exit_3(tmp_path, capsys):
    path = tmp_path / "cx.json"
    assert run(capsys, "generate", "counterexample", "--d", 3, "--output", path)[0] == EXIT_FOUND
    code, out, _ = run(capsys, "solve", "avoid", "--input", path, "--budget", 5)
    assert code == EXIT_BUDGET and json.loads(out)["status"] == "indeterminate"
    code, out, _ = run(capsys, "solve", "avoid", "--input", path)
    assert code == EXIT_ABSENT


@pytest.mark.parametrize("d,proper,lines", [(3, True, 6), (2, True, 1), (3, False, 29)])
def test_enumerate_counts(tmp_path, capsys, d, proper, lines):
    out = tmp_path / "cat.jsonl"
    args = ["enumerate", "--d", d, "--output", out] + (["--proper"] if proper else [])
    code, _, _ = run(capsys, *args)
    assert code == EXIT_FOUND
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    assert len(rows) == lines
    assert len((tmp_path / "cat.tsv").read_text().splitlines()) == lines + 1
    if d == 3:
        assert (tmp_path / "cat.png").stat().st_size > 0


def test_enumerate_to_stdout_and_shards(tmp_path, capsys):
    code, out, _ = run(capsys, "enumerate", "--d", 2)
    assert code == EXIT_FOUND and len(out.splitlines()) == 2
    code, _, err = run(capsys, "enumerate", "--d", 3, "--proper", "--shards", "0/2", "--checkpoint-dir", tmp_path)
    assert code == EXIT_BUDGET and "complete=False" in err
    assert any(tmp_path.iterdir())


def test_enumerate_parallel_workers(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CUBECHROME_THREADS", "2")
    out = tmp_path / "q3.jsonl"
    code, _, err = run(capsys, "enumerate", "--d", 3, "--proper", "--output", out, "--checkpoint-dir", tmp_path / "ck")
    assert code == EXIT_FOUND and "complete=True" in err
    assert len(out.read_text().splitlines()) == 6
    assert len(list((tmp_path / "ck").iterdir())) == 2
    monkeypatch.setenv("CUBECHROME_THREADS", "many")
    assert run(capsys, "enumerate", "--d", 2)[0] == EXIT_USAGE


def test_verify_writes_reports(tmp_path, capsys):
    code, out, _ = run(
        capsys, "verify", "th15", "--param", "exhaustive_dims=[3]", "--param", "samples=0", "--output", tmp_path
    )
    assert code == EXIT_FOUND and out.startswith("th15\tPASS")
    rep = json.loads((tmp_path / "th15.json").read_text())
    assert rep["status"] == "PASS" and rep["failed"] == 0 and rep["instances"] > 0
    assert (tmp_path / "th15.tsv").read_text().startswith("group\tinstances\tfailed")
    assert (tmp_path / "th15.png").stat().st_size > 0
    before = (tmp_path / "th15.json").read_text()
    assert run(capsys, "verify", "lem11", "--output", tmp_path)[0] == EXIT_FOUND
    # another id leaves the first report alone
    assert (tmp_path / "th15.json").read_text() == before
    assert json.loads((tmp_path / "lem11.json").read_text())["status"] == "PASS"


def test_verify_claim_table_figure(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", "claim1", "--param", "samples=3", "--param", "enumerate_up_to=6", "--output", tmp_path)
    assert code == EXIT_FOUND and (tmp_path / "claim1_table.png").exists()


def test_verify_unknown_id(capsys):
    code, _, err = run(capsys, "verify", "th99")
    assert code == EXIT_USAGE and "unknown result id" in err


def test_generate_named_instances(tmp_path, capsys):
    code, out, _ = run(capsys, "generate", "counterexample", "--d", 3)
    g = json.loads(out)
    assert code == EXIT_FOUND and g["n"] == 18 and len(g["edges"]) == 27 and len(g["precoloring"]) == 3
    code, out, _ = run(capsys, "generate", "near-vertex", "--d", 4)
    assert len(json.loads(out)["edges"]) == 6
    assert run(capsys, "generate", "galaxy", "--d", 4)[0] == EXIT_USAGE
    assert run(capsys, "generate", "sparse")[0] == EXIT_USAGE


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "generate", "sparse", "--d", 8, "--seed", 7, "--output", a)
    run(capsys, "generate", "sparse", "--d", 8, "--seed", 7, "--output", b)
    assert a.read_bytes() == b.read_bytes()
    lists = tmp_path / "m.json"
    run(capsys, "generate", "multi", "--d", 4, "--seed", 2, "--param", "k=2", "--output", lists)
    assert "lists" in json.loads(lists.read_text())


@pytest.mark.parametrize("method", ["single", "three", "partition", "subcube", "block-few-matchings"])
def test_construct(tmp_path, capsys, method):
    family = {"single": "single", "three": "three", "partition": "proper-d2", "subcube": "half",
              "block-few-matchings": "few-matchings"}[method]
    src, dst = tmp_path / "phi.json", tmp_path / "f.json"
    run(capsys, "generate", family, "--d", 5, "--seed", 1, "--output", src)
    code, out, _ = run(capsys, "construct", method, "--input", src, "--output", dst)
    assert code == EXIT_FOUND
    phi = coloring_from_json(json.loads(src.read_text()))
    f = coloring_from_json(json.loads(dst.read_text()))
    assert is_proper(f) and f.is_total() and avoids(f, phi)


def test_construct_outside_class_is_usage_error(tmp_path, capsys):
    src = tmp_path / "phi.json"
    run(capsys, "generate", "near-vertex", "--d", 4, "--output", src)
    assert run(capsys, "construct", "single", "--input", src)[0] == EXIT_USAGE


def test_construct_rebalance(tmp_path, capsys):
    src = tmp_path / "phi.json"
    run(capsys, "generate", "sparse", "--d", 8, "--seed", 3, "--output", src)
    code, out, _ = run(capsys, "construct", "rebalance-i", "--input", src, "--output", tmp_path / "f.json")
    rec = json.loads(out)
    assert code == EXIT_FOUND and rec["status"] == "found"
    assert any("feasibility" in w for w in rec["warnings"])


def test_list_color(tmp_path, capsys):
    from cubechrome.coloring import ListAssignment
    from cubechrome.io import lists_to_json
    from cubechrome.coloring import standard_coloring

    cube = build(3)
    lists = ListAssignment.from_coloring(standard_coloring(cube))
    path = tmp_path / "lists.json"
    dump(lists_to_json(lists), path)
    assert run(capsys, "solve", "list-color", "--input", path)[0] == EXIT_FOUND
    bad = ListAssignment.from_edges(cube, {e: [1] for e in cube.edges})
    dump(lists_to_json(bad), path)
    assert run(capsys, "solve", "list-color", "--input", path)[0] == EXIT_ABSENT


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cubechrome.cli", "generate", "near-vertex", "--d", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and len(json.loads(proc.stdout)["edges"]) == 4
