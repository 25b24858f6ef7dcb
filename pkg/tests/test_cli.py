"""End-to-end checks of the command-line front end."""

import re

import pytest

from funalg import finalg
from funalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def qex_file(tmp_path_factory):
    alg = finalg.from_concrete(finalg.build_quotient_example(2), "qex2")
    path = tmp_path_factory.mktemp("alg") / "qex2.alg"
    path.write_text(finalg.format_algebra_file(alg))
    return str(path)


@pytest.fixture(scope="module")
def quotient_file(tmp_path_factory):
    calg = finalg.build_quotient_example(2)
    alg = finalg.from_concrete(calg, "qex2")
    q = finalg.quotient(alg, finalg.quotient_example_partition(calg), "q")
    path = tmp_path_factory.mktemp("alg") / "q.alg"
    path.write_text(finalg.format_algebra_file(q))
    return str(path)


def test_gen_round_trips_through_parser(capsys):
    code, out, _ = run(capsys, "gen", "quotient-example", "--n", "2")
    assert code == 0
    alg = finalg.parse_algebra_file(out)
    assert alg.size == 10
    code, out, _ = run(capsys, "gen", "one-point-product", "--n", "1")
    assert code == 0
    assert finalg.parse_algebra_file(out).size == 4


def test_check_axioms_pass_lines(capsys, qex_file):
    code, out, _ = run(capsys, "check-axioms", qex_file)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 9
    assert [ln.split()[0] for ln in lines] == [f"({k})" for k in range(1, 10)]
    assert all(ln.endswith("PASS") for ln in lines)


def test_check_axioms_failure_names_witness(capsys, quotient_file):
    code, out, _ = run(capsys, "check-axioms", quotient_file)
    assert code == 1
    fails = [ln for ln in out.splitlines() if " FAIL " in ln]
    assert len(fails) == 1
    assert fails[0].startswith("(7) FAIL ")
    assert re.search(r"\b[a-z][a-z0-9_]*=\S+", fails[0])


def test_represent_writes_verifiable_file(capsys, qex_file, tmp_path):
    out_path = str(tmp_path / "rep.txt")
    code, out, _ = run(capsys, "represent", "-o", out_path, qex_file)
    assert code == 0
    assert out.startswith("base ")
    code, out, _ = run(capsys, "verify-rep", qex_file, out_path)
    assert code == 0
    assert out.strip() == "representation PASS"


def test_represent_quotient_fails_citing_sentence(capsys, quotient_file):
    code, out, _ = run(capsys, "represent", quotient_file)
    assert code == 1
    assert "not representable" in out
    assert "(7)" in out


def test_verify_rep_rejects_mismatched_pair(capsys, qex_file, quotient_file, tmp_path):
    out_path = str(tmp_path / "rep.txt")
    assert run(capsys, "represent", "-o", out_path, qex_file)[0] == 0
    code, out, _ = run(capsys, "verify-rep", quotient_file, out_path)
    assert code == 1
    assert out.startswith("representation FAIL")


def test_classify_injective(capsys, qex_file):
    code, out, _ = run(capsys, "classify-injective", qex_file)
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 10
    assert all(
        re.fullmatch(r"\S+ (injective|not-injective)", ln) for ln in lines
    )


def test_decide_valid_and_refuted(capsys):
    code, out, _ = run(
        capsys, "decide", "--sig", "comp,adom", "--n", "1",
        "--eq", "adom1(adom1(adom1(a))) = adom1(a)",
    )
    assert code == 0
    assert out.strip() == "VALID (complete)"
    code, out, _ = run(
        capsys, "decide", "--sig", "comp,adom", "--n", "1",
        "--eq", "a = adom1(a)",
    )
    assert code == 1
    assert out.strip().endswith("REFUTED")
    assert "at (" in out


def test_decide_bounded_budget(capsys):
    code, out, _ = run(
        capsys, "decide", "--sig", "comp,adom", "--n", "2",
        "--eq", "comp(dom1(a),dom2(a);a) = a", "--max-base", "1",
    )
    assert code == 0
    assert out.strip() == "NO COUNTEREXAMPLE (bounded)"


def test_reduce_taut_both_encodings(capsys):
    code, out, _ = run(
        capsys, "reduce-taut", "~(a & ~a)", "--i", "1", "--n", "1",
    )
    assert code == 0
    assert "=" in out and "meet" not in out
    code, out2, _ = run(
        capsys, "reduce-taut", "~(a & ~a)", "--i", "1", "--n", "1",
        "--use-meet",
    )
    assert code == 0
    assert "meet(" in out2


def test_usage_and_format_errors_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "check-axioms", str(tmp_path / "missing.alg"))
    assert code == 2
    assert err.startswith("error:")
    bad = tmp_path / "bad.alg"
    bad.write_text("not an algebra file\n")
    code, _, err = run(capsys, "check-axioms", str(bad))
    assert code == 2
    assert err.startswith("error:")
    code, _, err = run(
        capsys, "decide", "--sig", "comp,adom", "--n", "1", "--eq", "a = ",
    )
    assert code == 2
    assert err.startswith("error:")
