import json
import subprocess
import sys

from localfield_mra.cli import main

from .conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_find_irreducible(capsys):
    code, out, _ = run(capsys, "field", "find-irreducible", "--p", "2", "--s", "3")
    assert code == 0 and json.loads(out)["modulus"] == [1, 1, 0, 1]


def test_tree_random_and_validate(capsys, tmp_path):
    path = tmp_path / "t.json"
    code, out, _ = run(capsys, "tree", "random", "--p", "2", "--s", "2", "--seed", "4", "--out", str(path))
    assert code == 0 and json.loads(path.read_text()) == json.loads(out)
    code, out, _ = run(capsys, "tree", "validate", "--tree", str(path))
    assert code == 0 and json.loads(out)["valid"]


def test_tree_enumerate(capsys):
    code, out, _ = run(capsys, "tree", "enumerate", "--p", "3", "--s", "1")
    data = json.loads(out)
    assert code == 0 and data["count"] == data["expected"] == 3


def test_errors_are_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": {"p": 2, "s": 2, "modulus": [1, 1, 1]},
                               "parent": {"1,0": "0,1", "0,1": "1,0", "1,1": "0,0"}}))
    code, _, err = run(capsys, "tree", "validate", "--tree", str(bad))
    assert code == 2 and json.loads(err)["error"] == "CycleError"
    code, _, err = run(capsys, "tree", "enumerate", "--p", "2", "--s", "3", "--cap", "10")
    assert code == 2 and json.loads(err)["error"] == "CapExceededError"
    code, _, err = run(capsys, "tree", "random", "--p", "2", "--s", "2")
    assert code == 2 and "seed" in json.loads(err)["message"]


def test_build_worked_example(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "--tree", str(DATA / "worked_example_tree.json"), "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "grid.txt").read_text() == (DATA / "worked_example_phi_grid.txt").read_text()
    assert (tmp_path / "spectrum_grid.txt").read_text() == (DATA / "worked_example_spectrum_grid.txt").read_text()
    for name in ("mask.json", "spectrum.json", "phi.json", "indicator.json"):
        json.loads((tmp_path / name).read_text())
    assert (tmp_path / "phi.csv").read_text().startswith("digits,value_re_exact")


def test_build_with_lambdas(capsys, tmp_path):
    lam = tmp_path / "lam.json"
    lam.write_text(json.dumps({"edges": [{"parent": "0,0", "child": "1,1", "exp": 1}]}))
    code, _, _ = run(capsys, "build", "--tree", str(DATA / "worked_example_tree.json"), "--lambdas", str(lam),
                     "--out", str(tmp_path / "o"))
    assert code == 0
    spec = json.loads((tmp_path / "o" / "spectrum.json").read_text())
    assert {tuple(e["digits"]): e["exp"] for e in spec["entries"]}[("1,1", "0,0")] == 1
    lam.write_text(json.dumps({"edges": [{"parent": "0,0", "child": "0,1", "exp": 1}]}))
    code, _, err = run(capsys, "build", "--tree", str(DATA / "worked_example_tree.json"), "--lambdas", str(lam),
                       "--out", str(tmp_path / "o2"))
    assert code == 2 and json.loads(err)["error"] == "MaskError"


def test_verify(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--tree", str(DATA / "worked_example_tree.json"), "--out", str(out_path))
    assert code == 0 and json.loads(out_path.read_text())["certified_mra"]


def test_sweep(capsys):
    code, out, err = run(capsys, "sweep", "--p", "2", "--s", "2")
    assert code == 0 and "16 trees, 16 certified" in err
    assert json.loads(out)["height_histogram"] == {"2": 1, "3": 9, "4": 6}
    code, out, err = run(capsys, "sweep", "--p", "5", "--s", "1", "--sample", "5", "--seed", "1")
    assert code == 0 and json.loads(out)["trees"] == 5


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "localfield_mra", "field", "find-irreducible", "--p", "3", "--s", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["modulus"] == [1, 0, 1]


def test_sweep_workers_match_sequential(capsys):
    code, seq_out, _ = run(capsys, "sweep", "--p", "3", "--s", "1")
    code2, par_out, err = run(capsys, "sweep", "--p", "3", "--s", "1", "--workers", "2")
    assert code == code2 == 0 and seq_out == par_out and "3 trees, 3 certified" in err


def test_build_is_deterministic_and_reloadable(capsys, tmp_path):
    from localfield_mra.mra import MaskTable, SpectrumTable, spectrum_from_product
    from localfield_mra.stepfn import StepFn

    for name in ("a", "b"):
        assert main(["build", "--tree", str(DATA / "worked_example_tree.json"), "--out", str(tmp_path / name)]) == 0
    capsys.readouterr()
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
    mask = MaskTable.from_json(json.loads((tmp_path / "a" / "mask.json").read_text()))
    spec = SpectrumTable.from_json(json.loads((tmp_path / "a" / "spectrum.json").read_text()))
    assert spectrum_from_product(mask, spec.M) == spec
    phi = StepFn.from_json(json.loads((tmp_path / "a" / "phi.json").read_text()))
    assert phi.grid.M == spec.M
