import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import conftest as H
from funalg import finalg, pfun
from funalg.terms import (
    Quasiequation,
    Signature,
    Term,
    parse_equation,
    parse_quasiequation,
)
from funalg import terms as T


def _slow_eval(t, alg, assign):
    """Independent recursive evaluator used to cross-check holds()."""
    if isinstance(t, T.Var):
        return assign[t.name]
    if isinstance(t, T.Zero):
        return alg.zero_elem
    if isinstance(t, T.Proj):
        return alg.proj_elem[t.i - 1]
    if isinstance(t, T.Comp):
        idx = 0
        for a in t.args:
            idx = idx * alg.size + _slow_eval(a, alg, assign)
        return alg.tables["comp"][idx * alg.size + _slow_eval(t.tail, alg, assign)]
    if isinstance(t, T.Adom):
        return alg.tables[("adom", t.i)][_slow_eval(t.arg, alg, assign)]
    if isinstance(t, T.Dom):
        ad = alg.tables[("adom", t.i)]
        return ad[ad[_slow_eval(t.arg, alg, assign)]]
    if isinstance(t, T.Fix):
        return alg.tables[("fix", t.i)][_slow_eval(t.arg, alg, assign)]
    if isinstance(t, T.Meet):
        return alg.tables["meet"][
            _slow_eval(t.left, alg, assign) * alg.size
            + _slow_eval(t.right, alg, assign)
        ]
    if isinstance(t, T.Pref):
        return alg.tables["pref"][
            _slow_eval(t.left, alg, assign) * alg.size
            + _slow_eval(t.right, alg, assign)
        ]
    return alg.tables[("tie", t.i)][
        _slow_eval(t.left, alg, assign) * alg.size
        + _slow_eval(t.right, alg, assign)
    ]


def _slow_holds(alg, q):
    names = sorted(
        set().union(
            *(
                T.term_vars(e.lhs) | T.term_vars(e.rhs)
                for e in (*q.premises, q.conclusion)
            )
        )
    )
    for combo in itertools.product(range(alg.size), repeat=len(names)):
        assign = dict(zip(names, combo))
        if any(
            _slow_eval(e.lhs, alg, assign) != _slow_eval(e.rhs, alg, assign)
            for e in q.premises
        ):
            continue
        if _slow_eval(q.conclusion.lhs, alg, assign) != _slow_eval(
            q.conclusion.rhs, alg, assign
        ):
            return assign
    return None


@pytest.fixture(scope="module")
def small_full_algebra():
    base = pfun.Base.square(2)
    elems = []
    for vals in itertools.product((None, 0, 1), repeat=2):
        graph = tuple(((x,), y) for x, y in enumerate(vals) if y is not None)
        elems.append(pfun.PartialFunction(base, 1, graph))
    calg = pfun.ConcreteAlgebra(
        base,
        1,
        Signature.of(1, "comp,adom,meet,pref,fix,tie"),
        tuple(sorted(elems, key=lambda f: f.graph)),
    )
    return finalg.from_concrete(calg, "full1")


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_holds_agrees_with_slow_evaluator(small_full_algebra, data):
    alg = small_full_algebra
    sig = Signature.of(1, "comp,adom,meet,pref,fix,tie")
    mk = lambda: data.draw(H.terms_over(["a", "b"], 1, max_depth=2, sig=sig))
    q = Quasiequation(
        tuple(T.Equation(mk(), mk()) for _ in range(data.draw(st.integers(0, 2)))),
        T.Equation(mk(), mk()),
    )
    assert finalg.holds(alg, q) == _slow_holds(alg, q)


def test_holds_returns_least_witness(small_full_algebra):
    alg = small_full_algebra
    sig = Signature.of(1, "comp,adom")
    q = Quasiequation((), parse_equation("a=b", sig))
    w = finalg.holds(alg, q)
    assert w == {"a": 0, "b": 1}


def test_holds_budget():
    _, prod = finalg.build_one_point_example(2)
    sig = Signature.of(2, "comp,adom")
    q = Quasiequation((), parse_equation("comp(a1,a2;b)=comp(b1,b2;a)", sig))
    with pytest.raises(finalg.BudgetError):
        finalg.holds(prod, q, budget=10)


def test_zero_well_definedness_check():
    # a one-element "algebra" whose comp/adom tables cannot produce a
    # constant antidomain composite is rejected at load
    tables = {
        "comp": (0, 0, 1, 0),
        ("adom", 1): (1, 0),
    }
    with pytest.raises(finalg.FinalgError, match="not constant"):
        finalg.FiniteAlgebra(1, Signature.of(1, "comp,adom"), ("e0", "e1"), tables)


def test_suite_shapes_and_classifications():
    for n in (1, 2, 3):
        for row in finalg.SUITE_ROWS:
            sig = Signature.of(n, row)
            for injective in (False, True):
                suite = finalg.axiom_suite(sig, injective)
                tags = [s.tag for s in suite.sentences]
                assert len(tags) == len(set(tags))
                assert ("(28)" in tags) <= injective or "meet" in row


def test_table1_classifications():
    sig = lambda row: Signature.of(2, row)
    rows = {
        ("comp,adom", False): "proper quasivariety",
        ("comp,adom", True): "quasivariety",
        ("comp,adom,meet", False): "variety",
        ("comp,adom,meet", True): "variety",
        ("comp,adom,pref", False): "variety",
        ("comp,adom,pref", True): "quasivariety",
        ("comp,adom,meet,pref", False): "variety",
        ("comp,adom,meet,pref", True): "variety",
        ("comp,adom,fix", False): "quasivariety",
        ("comp,adom,fix", True): "quasivariety",
        ("comp,adom,fix,pref", False): "quasivariety",
        ("comp,adom,fix,pref", True): "quasivariety",
    }
    for (row, injective), want in rows.items():
        assert finalg.axiom_suite(sig(row), injective).classification == want


def test_quotient_example_structure():
    for n in (1, 2, 3):
        calg = finalg.build_quotient_example(n)
        assert len(calg.elements) == 2 * (n + 3)
        calg.verify_closed()
        alg = finalg.from_concrete(calg)
        assert finalg.check_axioms(alg).passed


def test_quotient_fails_exactly_the_quasiequation():
    calg = finalg.build_quotient_example(2)
    alg = finalg.from_concrete(calg)
    q = finalg.quotient(alg, finalg.quotient_example_partition(calg))
    report = finalg.check_axioms(q)
    assert report.failing_tags() == ["(7)"]
    lines = report.lines(q.names)
    assert sum(1 for ln in lines if "FAIL" in ln) == 1


def test_quotient_rejects_non_congruences():
    calg = finalg.build_quotient_example(1)
    alg = finalg.from_concrete(calg)
    bad = [[0, 1]] + [[k] for k in range(2, alg.size)]
    with pytest.raises(finalg.FinalgError, match="congruence"):
        finalg.quotient(alg, bad)


def test_derived_laws_hold_in_corpus():
    for n, row, calg in H.corpus(17, 12, rows=("comp,adom",)):
        alg = finalg.from_concrete(calg)
        for sent in finalg.derived_sentences(n):
            for q in sent.instances:
                assert finalg.holds(alg, q) is None, (n, sent.tag)


def test_product_projects_back():
    a, prod = finalg.build_one_point_example(2)
    assert prod.size == 4
    assert finalg.check_axioms(prod).passed
    assert finalg.leq(prod, prod.zero_elem, 3)


def test_algebra_file_roundtrip():
    calg = finalg.build_quotient_example(2)
    alg = finalg.from_concrete(calg, "qex")
    text = finalg.format_algebra_file(alg)
    back = finalg.parse_algebra_file(text)
    assert back.names == alg.names
    assert back.tables == alg.tables
    assert back.sig == alg.sig
    assert finalg.format_algebra_file(back) == text


def test_algebra_file_errors():
    with pytest.raises(finalg.FinalgError):
        finalg.parse_algebra_file("not an algebra\n")
    calg = finalg.build_quotient_example(1)
    text = finalg.format_algebra_file(finalg.from_concrete(calg))
    # drop one table line -> incomplete
    lines = text.splitlines()
    broken = "\n".join(ln for ln in lines if not ln.startswith("table adom1 e0")) + "\n"
    with pytest.raises(finalg.FinalgError, match="incomplete"):
        finalg.parse_algebra_file(broken)


def test_report_line_format(small_full_algebra):
    report = finalg.check_axioms(
        small_full_algebra, Signature.of(1, "comp,adom"), injective=True
    )
    lines = report.lines(small_full_algebra.names)
    assert any(ln.startswith("(28) FAIL ") for ln in lines)
    for ln in lines:
        assert ln.split()[1] in ("PASS", "FAIL")
