"""CLI surface: exit codes, deterministic JSON, file formats."""

import json

import pytest

from oligoperm.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = main([*argv, "--json", str(out)])
    doc = json.loads(out.read_text(encoding="utf-8")) if out.exists() else None
    return code, doc


def test_atoms(tmp_path):
    code, doc = run(tmp_path, "atoms", "--backend", "sym", "--bound", "2")
    assert code == 0
    assert doc["payload"]["atoms"] == ["sym:inj[0]", "sym:inj[1]", "sym:inj[2]"]


def test_measure_solve_sym(tmp_path):
    code, doc = run(tmp_path, "measure", "solve", "--backend", "sym",
                    "--bound", "4")
    assert code == 0
    assert doc["payload"]["family_params"] == ["t"]
    assert doc["payload"]["residual"] == []
    assert doc["payload"]["values"][2] == "t^2 - t"


def test_measure_solve_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    main(["measure", "solve", "--backend", "line", "--bound", "4",
          "--json", str(out1)])
    main(["measure", "solve", "--backend", "line", "--bound", "4",
          "--json", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def _sym_fibers(depth):
    # the product identities at bound b reach atoms of arity 2b, so a spec
    # table needs fiber classes out to depth 2b - 1
    return {f"omega-minus[{c}]": f"t - {c}" if c else "t" for c in range(depth)}


def test_measure_check_spec_file(tmp_path):
    spec = tmp_path / "measure.json"
    spec.write_text(json.dumps({
        "backend": "sym",
        "field": "qt",
        "atoms": {"sym:inj[0]": "1", "sym:inj[1]": "t"},
        "fibers": _sym_fibers(6),
    }), encoding="utf-8")
    code, doc = run(tmp_path, "measure", "check", "--spec", str(spec),
                    "--bound", "3")
    assert code == 0 and doc["status"] == "PASS"


def test_measure_check_rejects_perturbed(tmp_path):
    spec = tmp_path / "measure.json"
    fibers = _sym_fibers(4)
    doc_in = {
        "backend": "sym",
        "field": "qt",
        "atoms": {"sym:inj[0]": "1", "sym:inj[1]": "t",
                  "sym:inj[2]": "t^2 - t + 1"},
        "fibers": fibers,
    }
    spec.write_text(json.dumps(doc_in), encoding="utf-8")
    code, doc = run(tmp_path, "measure", "check", "--spec", str(spec),
                    "--bound", "2")
    assert code == 1 and doc["status"] == "FAIL"


def test_pregalois_sym_fails_with_swap_witness(tmp_path):
    code, doc = run(tmp_path, "pregalois", "--backend", "sym", "--bound", "3")
    assert code == 1
    failing = [r for r in doc["results"] if r["status"] == "FAIL"]
    assert len(failing) == 1
    assert failing[0]["check"] == "h-effective-equivalence-relations"
    assert failing[0]["witness"]["atom"] == "sym:inj[2]"
    assert "[1>2,2>1]" in failing[0]["witness"]["relation-orbits"]


def test_pregalois_finite_passes(tmp_path):
    code, doc = run(tmp_path, "pregalois", "--backend", "finite",
                    "--group", "S3", "--bound", "6")
    assert code == 0


def test_homdim(tmp_path):
    code, doc = run(tmp_path, "homdim", "--X", "line:inc[2]",
                    "--Y", "line:inc[2]")
    assert code == 0 and doc["payload"]["dim"] == 13


def test_dim(tmp_path):
    code, doc = run(tmp_path, "dim", "--X", "sym:inj[1]", "--field", "qt")
    assert code == 0 and doc["payload"]["dim"] == "t"
    code, doc = run(tmp_path, "dim", "--X", "line:inc[1]")
    assert code == 0 and doc["payload"]["dim"] == "-1"


def test_compose_files(tmp_path):
    e_neq = {"backend": "sym", "field": "qt", "source": "sym:inj[1]",
             "target": "sym:inj[1]", "entries": [[0, 0, "[]", "1"]]}
    lhs = tmp_path / "lhs.json"
    rhs = tmp_path / "rhs.json"
    lhs.write_text(json.dumps(e_neq), encoding="utf-8")
    rhs.write_text(json.dumps(e_neq), encoding="utf-8")
    code, doc = run(tmp_path, "compose", "--lhs", str(lhs), "--rhs", str(rhs),
                    "--field", "qt")
    assert code == 0
    entries = {tuple(e[:3]): e[3] for e in doc["payload"]["entries"]}
    assert entries[(0, 0, "[]")] == "t - 2"
    assert entries[(0, 0, "[1>1]")] == "t - 1"


def test_frob_verify(tmp_path):
    code, doc = run(tmp_path, "frob", "verify", "--X", "sym:inj[2]",
                    "--field", "qt", "--bound", "3")
    assert code == 0 and doc["status"] == "PASS"


def test_frob_eidem_presets(tmp_path):
    for gamma in ("diagonal", "all-ones"):
        code, doc = run(tmp_path, "frob", "eidem", "--B", "sym:inj[2]",
                        "--gamma", gamma, "--field", "qt")
        assert code == 0


def test_frob_eidem_file(tmp_path):
    gamma = tmp_path / "gamma.json"
    gamma.write_text(json.dumps({
        "entries": [[0, 0, "[1>1,2>2]", "1"], [0, 0, "[1>1]", "1"]],
    }), encoding="utf-8")
    code, doc = run(tmp_path, "frob", "eidem", "--B", "sym:inj[2]",
                    "--gamma", str(gamma), "--field", "qt")
    assert code == 0


def test_frob_gamma_of(tmp_path):
    code, doc = run(tmp_path, "frob", "gamma-of",
                    "--map", "sym:inj[2] -> sym:inj[1] : [1]",
                    "--field", "qt")
    assert code == 0
    labels = {entry[0][2] for entry in doc["payload"]["gamma"]}
    assert labels == {"[1>1]", "[1>1,2>2]"}


def test_check_linearization(tmp_path):
    code, doc = run(tmp_path, "check-linearization", "--backend", "line",
                    "--bound", "3")
    assert code == 0


def test_suite_finite(tmp_path):
    code, doc = run(tmp_path, "suite", "--backend", "finite", "--group", "S3",
                    "--bound", "6")
    assert code == 0


def test_suite_infinite_backends(tmp_path):
    for backend in ("sym", "line"):
        code, doc = run(tmp_path, "suite", "--backend", backend, "--bound", "3")
        assert code == 0, [r for r in doc["results"] if r["status"] == "FAIL"]


def test_usage_errors(tmp_path):
    assert main(["pregalois"]) == 2  # missing backend
    assert main(["measure", "solve", "--backend", "finite", "--bound", "4"]) == 2
    assert main(["homdim", "--X", "sym:inj[1]", "--Y", "line:inc[1]"]) == 2


def test_bound_guard(tmp_path, monkeypatch):
    monkeypatch.setenv("OLIGOPERM_MAX_BOUND", "3")
    assert main(["atoms", "--backend", "sym", "--bound", "5"]) == 2
