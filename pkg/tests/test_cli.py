"""Command-line interface: exit codes, JSON output, file round trips."""

import json

import pytest

from omlkit.cli import main
from omlkit.corpus import load_text
from omlkit.mmp import parse_mmp


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


# ---------------------------------------------------------------------------
# validate / stats / dual


def test_validate_corpus_fixture(capsys):
    code, out, _ = run_json(capsys, "validate", "--mmp", "pentagon")
    assert code == 0
    assert out["valid"] is True


def test_validate_rejects_small_loop(capsys, tmp_path):
    bad = tmp_path / "square.mmp"
    bad.write_text("123,345,567,781.\n")
    code, out, _ = run_json(capsys, "validate", "--mmp", str(bad))
    assert code == 1
    assert out["valid"] is False
    assert any(f["rule"] == "greechie-5" for f in out["violations"])


def test_validate_mmp_level_allows_loops(capsys, tmp_path):
    bad = tmp_path / "square.mmp"
    bad.write_text("123,345,567,781.\n")
    code, out, _ = run_json(
        capsys, "validate", "--mmp", str(bad), "--level", "MMP"
    )
    assert code == 0 and out["valid"] is True


def test_stats(capsys):
    code, out, _ = run_json(capsys, "stats", "--mmp", "39-39-00")
    assert code == 0
    assert out["atoms"] == 39 and out["blocks"] == 39
    assert out["girth"] == 10
    assert out["loops"]["max_loop_order"] == 19
    assert out["degree_histogram"] == {"3": 39}


def test_stats_no_loops(capsys):
    code, out, _ = run_json(capsys, "stats", "--mmp", "pentagon", "--no-loops")
    assert code == 0 and "loops" not in out


def test_dual_involution(capsys):
    code1, once, _ = run(capsys, "dual", "--mmp", "39-39-01a")
    code2 = None
    import io, sys

    # feed the dual back through stdin
    stdin = sys.stdin
    sys.stdin = io.StringIO(once)
    try:
        code2, twice, _ = run(capsys, "dual", "--mmp", "-")
    finally:
        sys.stdin = stdin
    assert code1 == code2 == 0
    assert twice.strip() == load_text("39-39-01a").strip()


# ---------------------------------------------------------------------------
# convert


def test_convert_roundtrip_graph6(capsys, tmp_path):
    mmp = tmp_path / "k.mmp"
    mmp.write_text(load_text("39-39-00"))
    code, g6, _ = run(
        capsys, "convert", "--input", str(mmp), "--to", "graph6"
    )
    assert code == 0
    g6file = tmp_path / "k.g6"
    g6file.write_text(g6)
    code, back, _ = run(
        capsys, "convert", "--input", str(g6file), "--to", "mmp"
    )
    assert code == 0
    assert parse_mmp(back).n_atoms == 39
    code, back_flip, _ = run(
        capsys,
        "convert",
        "--input",
        str(g6file),
        "--to",
        "mmp",
        "--atom-color",
        "black",
    )
    assert code == 0
    assert parse_mmp(back_flip).n_atoms == 39  # both sides have 39 vertices


def test_convert_mmp_to_text_graph(capsys, tmp_path):
    mmp = tmp_path / "k.mmp"
    mmp.write_text(load_text("39-39-02"))
    code, out, _ = run(capsys, "convert", "--input", str(mmp), "--to", "graph")
    assert code == 0 and out.strip()


def test_convert_rejects_non_cubic(capsys, tmp_path):
    mmp = tmp_path / "s.mmp"
    mmp.write_text("123,145.\n")
    code, _, err = run(capsys, "convert", "--input", str(mmp), "--to", "graph")
    assert code == 2 and "error" in err


# ---------------------------------------------------------------------------
# check / states / vectorfind / subspaces


def test_check_expectation_match(capsys):
    code, out, _ = run_json(
        capsys,
        "check", "--eq", "oml_law", "--mmp", "pentagon", "--expect", "holds",
    )
    assert code == 0 and out["verdict"] == "HOLDS"


def test_check_expectation_mismatch(capsys):
    code, out, _ = run_json(
        capsys,
        "check", "--eq", "modular_law", "--mmp", "pentagon",
        "--expect", "holds",
    )
    assert code == 1
    assert out["verdict"] == "FAILS"
    assert out["counterexample"]


def test_check_condition_file(capsys, tmp_path):
    cond = tmp_path / "comm.eq"
    cond.write_text("a = (a ^ b) v (a ^ b')")
    code, out, _ = run_json(
        capsys, "check", "--eq", str(cond), "--mmp", "star-1"
    )
    assert code == 0 and out["verdict"] == "HOLDS"


def test_states_coloring(capsys):
    code, out, _ = run_json(
        capsys, "states", "--mmp", "smallest-oml", "--query", "coloring"
    )
    assert code == 0 and out["two_valued"] is True


def test_vectorfind_count(capsys):
    code, out, _ = run_json(capsys, "vectorfind", "--mmp", "star-2", "--count")
    assert code == 0 and out["solutions"] == 6


def test_vectorfind_infeasible(capsys):
    code, out, _ = run_json(
        capsys, "vectorfind", "--mmp", "star-3", "--components=-1,0,1"
    )
    assert code == 1 and out["found"] is False


def test_check_oa_subspace(capsys, tmp_path):
    spec = tmp_path / "pairs.json"
    spec.write_text(
        json.dumps(
            {"M": [[0, 0, 1], [1, 1, -1]], "N": [[1, 0, 0], [1, -2, -1]]}
        )
    )
    code, out, _ = run_json(
        capsys, "check-oa-subspace", "--n", "1", "--subspaces", str(spec)
    )
    assert code == 0
    assert out["holds"] is True
    assert out["trace"]["T01"] == "line{2,2,1}"


def test_check_oa_subspace_bad_pair(capsys, tmp_path):
    spec = tmp_path / "pairs.json"
    spec.write_text(
        json.dumps({"M": [[1, 0, 0], [0, 1, 0]], "N": [[1, 1, 0], [0, 0, 1]]})
    )
    code, _, err = run(
        capsys, "check-oa-subspace", "--n", "1", "--subspaces", str(spec)
    )
    assert code == 2 and "error" in err


# ---------------------------------------------------------------------------
# generate


def test_generate_odd_vertices_usage_error(capsys):
    code, _, err = run(capsys, "generate", "--vertices", "7", "--min-girth", "4")
    assert code == 2 and "even" in err


def test_generate_small(capsys):
    code, out, err = run(
        capsys, "generate", "--vertices", "6", "--min-girth", "4"
    )
    assert code == 0
    assert "1 graph(s)" in err
    h = parse_mmp(out.strip())
    assert h.n_atoms == 3 and h.n_blocks == 3


def test_generate_budget_exhausted(capsys):
    code, _, err = run(
        capsys,
        "generate", "--vertices", "14", "--min-girth", "6",
        "--budget-nodes", "2",
    )
    assert code == 3
    assert "--resume" in err


# ---------------------------------------------------------------------------
# layout / suite / misc


def test_layout_writes_artifacts(capsys, tmp_path):
    out_dir = tmp_path / "art"
    code, out, _ = run_json(
        capsys, "layout", "--mmp", "pentagon", "--out", str(out_dir)
    )
    assert code == 0
    assert (out_dir / "plan.json").exists()
    for name in ("level1", "level2", "level3", "combined"):
        assert (out_dir / f"{name}.svg").read_text().startswith("<svg ")
    assert json.loads((out_dir / "plan.json").read_text()) == out


def test_suite_packaged_expectations(capsys):
    from importlib import resources

    path = resources.files("omlkit.corpus") / "expected.json"
    code, out, err = run_json(capsys, "suite", "--expect", str(path))
    assert code == 0 and "MISMATCH" not in err


def test_suite_expectations(capsys, tmp_path):
    expect = tmp_path / "expect.json"
    expect.write_text(
        json.dumps(
            {
                "pentagon": {"atoms": 10, "blocks": 5},
                "39-39-00": {"girth": 10, "self_dual": True},
            }
        )
    )
    code, out, err = run_json(capsys, "suite", "--expect", str(expect))
    assert code == 0 and "pentagon" in out
    expect.write_text(json.dumps({"pentagon": {"atoms": 11}}))
    code, _, err = run(capsys, "suite", "--expect", str(expect))
    assert code == 1 and "MISMATCH" in err


def test_unknown_command_usage(capsys):
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "--mmp", "/nonexistent/x.mmp")
    assert code == 2 and "error" in err


def test_text_format(capsys):
    code, out, _ = run(
        capsys, "--format", "text", "stats", "--mmp", "star-1", "--no-loops"
    )
    assert code == 0
    assert "atoms: 3" in out
