from __future__ import annotations

import json
import math

import pytest

from graphent import __version__
from graphent.cli import build_parser, run


@pytest.fixture
def fib_file(tmp_path):
    path = tmp_path / "fib.edges"
    path.write_text("a a\na b\nb a\n")
    return str(path)


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# counts


def test_counts_csv_fibonacci(capsys, fib_file):
    code, out, _ = invoke(capsys, "counts", "--graph", fib_file, "--vertex", "a", "--nmax", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,count"
    assert [int(l.split(",")[1]) for l in lines[1:]] == [1, 2, 3, 5, 8, 13]


def test_counts_first_return_e28(capsys):
    code, out, _ = invoke(capsys, "counts", "--family", "salama_2_8", "--class", "first-return", "--nmax", "9")
    assert code == 0
    counts = [int(c) for c in json.loads(out)["counts"]]
    assert counts == [0, 1, 0, 0, 0, 8, 0, 0, 0, 64]


def test_header_contents(capsys):
    code, out, _ = invoke(capsys, "counts", "--family", "salama_2_8", "--nmax", "6")
    d = json.loads(out)
    assert d["tool"] == "graphent" and d["version"] == __version__
    assert d["command"] == "counts" and d["vertex"] == "0"
    assert d["config"]["nmax"] == 6 and d["window_radius"] == 6
    assert d["family"] == "salama_2_8"
    assert d["known_entropies"]["provenance"]


def test_output_is_deterministic(capsys):
    args = ("entropy", "--family", "random_strongly_connected", "--seed", "4", "--nmax", "30")
    _, a, _ = invoke(capsys, *args)
    _, b, _ = invoke(capsys, *args)
    assert a == b


def test_out_file(capsys, tmp_path, fib_file):
    target = tmp_path / "o.json"
    code, out, err = invoke(capsys, "counts", "--graph", fib_file, "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "counts"
    assert "counts: ok" in err


# entropy / sandwich


def test_entropy_finite_has_spectral_value(capsys, fib_file):
    code, out, _ = invoke(capsys, "entropy", "--graph", fib_file, "--nmax", "40")
    d = json.loads(out)
    golden = math.log((1 + math.sqrt(5)) / 2)
    assert code == 0 and d["log_spectral_radius"] == pytest.approx(golden, abs=1e-9)
    assert {e["quantity"] for e in d["estimates"]} == {"h_l", "h_b", "h_b_t", "through"}


def test_entropy_tail_max(capsys, fib_file):
    code, out, _ = invoke(capsys, "entropy", "--graph", fib_file, "--quantity", "h_b", "--method", "tail_max", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1].startswith("h_b,") and "tail_max" in out


def test_sandwich_ep_exact(capsys):
    code, out, _ = invoke(capsys, "sandwich", "--family", "salama_pp", "--p", "2", "--nmax", "120")
    d = json.loads(out)
    assert code == 0 and d["exact"] is True
    assert d["value_nats"] == pytest.approx(math.log(2), abs=0.05)


def test_sandwich_csv(capsys):
    code, out, _ = invoke(capsys, "sandwich", "--family", "salama_2_8", "--nmax", "60", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "lower_nats,upper_nats,exact,consistent"


# verify / af / subgraphs


def test_verify_e28(capsys):
    code, out, _ = invoke(capsys, "verify", "--family", "salama_2_8", "--nmax", "20", "--tol", "0.3")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    names = [c["check"] for c in d["checks"]]
    assert len(names) == 5


def test_verify_finite_includes_coherence(capsys, fib_file):
    code, out, _ = invoke(capsys, "verify", "--graph", fib_file, "--nmax", "40")
    d = json.loads(out)
    assert code == 0 and len(d["checks"]) == 6


def test_verify_fails_with_tiny_tolerance(capsys):
    code, _, err = invoke(capsys, "verify", "--family", "salama_2_8", "--nmax", "20", "--tol", "1e-9")
    assert code == 1 and "FAILED" in err


def test_af_two_cycle(capsys, tmp_path):
    path = tmp_path / "c.edges"
    path.write_text("a b\nb a\n")
    code, out, _ = invoke(capsys, "af", "--graph", str(path), "--n", "1", "--nmax", "6")
    d = json.loads(out)
    assert code == 0
    assert d["homomorphism"]["passed"] and d["independence"]["passed"]
    assert d["dimension"]["omega_cardinality"] == 2 and d["dimension"]["r_n_squared"] == 4


def test_af_single_vertex_skips_independence(capsys, tmp_path):
    path = tmp_path / "b.edges"
    path.write_text("v v 2\n")
    code, out, _ = invoke(capsys, "af", "--graph", str(path), "--n", "1", "--nmax", "3")
    d = json.loads(out)
    assert code == 0 and d["independence"]["passed"] is None


def test_subgraphs(capsys):
    code, out, _ = invoke(capsys, "subgraphs", "--family", "salama_2_8", "--radii", "5,9,13")
    d = json.loads(out)
    assert code == 0 and d["monotone"] and d["radii"] == [5, 9, 13]


def test_family_file(capsys, tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"family": "salama_pp", "p": 3}))
    code, out, _ = invoke(capsys, "counts", "--family-file", str(spec), "--class", "loop", "--nmax", "3")
    assert code == 0 and json.loads(out)["family"] == "salama_pp"


# errors


@pytest.mark.parametrize(
    "argv",
    [
        ["counts"],
        ["counts", "--family", "nope"],
        ["counts", "--family", "salama_pp"],
        ["counts", "--family", "salama_2_8", "--p", "3"],
        ["counts", "--family", "salama_2_8", "--nmax", "0"],
        ["sandwich", "--family", "salama_2_8", "--tol", "0"],
        ["entropy", "--family", "salama_2_8", "--stride", "0"],
        ["subgraphs", "--family", "salama_2_8", "--radii", "9,5"],
        ["counts", "--graph", "/nonexistent/file"],
        ["af", "--family", "salama_2_8", "--n", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2 and "error" in err


def test_missing_vertex(capsys, fib_file):
    code, _, err = invoke(capsys, "counts", "--graph", fib_file, "--vertex", "zz")
    assert code == 2 and "zz" in err


def test_bad_edge_list(capsys, tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("a b c d\n")
    assert invoke(capsys, "counts", "--graph", str(path))[0] == 2


def test_degree_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("GRAPHENT_MAX_DEGREE", "4")
    code, _, err = invoke(capsys, "counts", "--family", "salama_2_8", "--nmax", "3")
    assert code == 2 and "error" in err


def test_parser_lists_all_commands():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == {"counts", "entropy", "sandwich", "verify", "af", "subgraphs"}
