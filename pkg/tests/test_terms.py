import pytest
from hypothesis import given, settings, strategies as st

from conftest import bases, pfuns, terms_over
from funalg import pfun, terms
from funalg.terms import (
    Adom,
    Comp,
    Dom,
    Equation,
    Meet,
    Proj,
    Quasiequation,
    Signature,
    TermSyntaxError,
    Var,
    Zero,
    expand_derived,
    fresh_var,
    parse_equation,
    parse_quasiequation,
    parse_term,
    print_equation,
    print_quasiequation,
    print_term,
    term_length,
    term_vars,
)

FULL2 = Signature.of(2, "comp,adom,meet,pref,fix,tie")


def test_parse_basics():
    t = parse_term("comp(a,adom2(b);pi1)", FULL2)
    assert t == Comp((Var("a"), Adom(2, Var("b"))), Proj(1))
    assert parse_term("zero", FULL2) == Zero()
    assert term_vars(t) == {"a", "b"}
    assert term_length(t) == 5


def test_parse_errors_carry_positions():
    with pytest.raises(TermSyntaxError) as e:
        parse_term("comp(a;b)", FULL2)
    assert "expected 2 arguments before ';'" in str(e.value)
    with pytest.raises(TermSyntaxError):
        parse_term("pi3", FULL2)  # index out of range
    with pytest.raises(TermSyntaxError):
        parse_term("meet(a,b)", Signature.of(2, "comp,adom"))
    with pytest.raises(TermSyntaxError):
        parse_term("comp(a,b;c) d", FULL2)


def test_quasiequation_parsing():
    q = parse_quasiequation("a=b & dom1(c)=c => comp(a,a;b)=zero", FULL2)
    assert len(q.premises) == 2
    assert q.conclusion == Equation(Comp((Var("a"), Var("a")), Var("b")), Zero())
    assert print_quasiequation(q) == "a = b & dom1(c) = c => comp(a,a;b) = zero"


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_parse_print_roundtrip(data):
    n = data.draw(st.integers(1, 3))
    sig = Signature.of(n, "comp,adom,meet,pref,fix,tie")
    t = data.draw(terms_over(["a", "b", "x1"], n, max_depth=3, sig=sig))
    assert parse_term(print_term(t), sig) == t


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_equation_roundtrip(data):
    n = data.draw(st.integers(1, 3))
    sig = Signature.of(n, "comp,adom,meet,pref,fix,tie")
    lhs = data.draw(terms_over(["a", "b"], n, max_depth=2, sig=sig))
    rhs = data.draw(terms_over(["a", "b"], n, max_depth=2, sig=sig))
    eq = Equation(lhs, rhs)
    assert parse_equation(print_equation(eq), sig) == eq


def test_fresh_var_avoids_taken():
    assert fresh_var({"a", "x0"}) == "x1"
    assert fresh_var(set()) == "x0"


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_expand_derived_preserves_value(data):
    """Rewriting zero/pi/dom/fix/tie into the core signature never changes
    the function a term denotes."""
    base = data.draw(bases(3))
    n = data.draw(st.integers(1, 2))
    sig = Signature.of(n, "comp,adom,meet,pref,fix,tie")
    t = data.draw(terms_over(["a", "b"], n, max_depth=2, sig=sig))
    assign = {
        v: data.draw(pfuns(base=base, n=n)) for v in ("a", "b", "x0")
    }
    expanded = expand_derived(t, sig, expand_tie=True, expand_fix=True)
    got = pfun.eval_concrete(expanded, assign, base, n)
    want = pfun.eval_concrete(t, assign, base, n)
    assert got == want


def test_expand_derived_uses_one_designated_witness():
    sig = Signature.of(2, "comp,adom")
    t = expand_derived(Zero(), sig)
    assert term_vars(t) == {"x0"}
    # nested zero occurrences share the same witness variable
    t2 = expand_derived(Meet(Zero(), Zero()), Signature.of(2, "comp,adom,meet"))
    assert term_vars(t2) == {"x0"}


def test_signature_validation():
    with pytest.raises(terms.TermError):
        Signature.of(0, "comp,adom")
    with pytest.raises(terms.TermError):
        Signature.of(2, "comp,quux")
    sig = Signature.of(2, "comp adom meet".split())
    assert sig.has("meet") and not sig.has("pref")
