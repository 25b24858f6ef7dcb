"""Signatures, term syntax, parsing, printing and structural measures.

The term language covers composition, intersection, the indexed domain /
antidomain / fixset / tie families, preferential union, projections and the
nowhere-defined constant.  Zero, projections and domain are derived forms
whenever composition and antidomain are available.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

OP_NAMES = frozenset(
    {"comp", "meet", "zero", "proj", "dom", "adom", "fix", "tie", "pref"}
)

# operator families that carry an index 1..n
INDEXED = frozenset({"proj", "dom", "adom", "fix", "tie"})


class TermError(ValueError):
    pass


class TermSyntaxError(TermError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Signature:
    """Arity together with the set of operation families available."""

    n: int
    ops: frozenset[str]

    def __post_init__(self):
        if self.n < 1:
            raise TermError(f"arity must be positive, got {self.n}")
        bad = self.ops - OP_NAMES
        if bad:
            raise TermError(f"unknown operations in signature: {sorted(bad)}")

    @staticmethod
    def of(n: int, ops) -> "Signature":
        if isinstance(ops, str):
            ops = [o for o in re.split(r"[,\s]+", ops) if o]
        return Signature(n, frozenset(ops))

    def has(self, op: str) -> bool:
        return op in self.ops

    def allows(self, op: str) -> bool:
        """Whether terms over this signature may use ``op``.

        zero / proj / dom are admitted as derived forms when composition and
        antidomain are present.
        """
        if op in self.ops:
            return True
        if op in {"zero", "proj", "dom"}:
            return "comp" in self.ops and "adom" in self.ops
        return False


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Proj(Term):
    i: int


@dataclass(frozen=True)
class Comp(Term):
    args: tuple
    tail: Term

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Dom(Term):
    i: int
    arg: Term


@dataclass(frozen=True)
class Adom(Term):
    i: int
    arg: Term


@dataclass(frozen=True)
class Fix(Term):
    i: int
    arg: Term


@dataclass(frozen=True)
class Tie(Term):
    i: int
    left: Term
    right: Term


@dataclass(frozen=True)
class Pref(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Quasiequation:
    premises: tuple
    conclusion: Equation

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    @staticmethod
    def plain(eq: Equation) -> "Quasiequation":
        return Quasiequation((), eq)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(=>|[a-z][a-z0-9_]*|[(),;=&])")
_INDEXED_NAME = re.compile(r"^(pi|dom|adom|fix|tie)([1-9][0-9]*)$")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self):
        return self.tokens[self.idx]

    def next(self):
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, symbol: str):
        tok, pos = self.next()
        if tok != symbol:
            raise TermSyntaxError(f"expected {symbol!r}, found {tok!r}", pos)

    def _check_index(self, op: str, i: int, pos: int):
        if not 1 <= i <= self.sig.n:
            raise TermSyntaxError(
                f"index {i} out of range 1..{self.sig.n} for {op}", pos
            )

    def _check_op(self, op: str, pos: int):
        if not self.sig.allows(op):
            raise TermSyntaxError(f"operator {op!r} not in signature", pos)

    def term(self) -> Term:
        tok, pos = self.next()
        m = _INDEXED_NAME.match(tok)
        if m:
            op = "proj" if m.group(1) == "pi" else m.group(1)
            i = int(m.group(2))
            self._check_op(op, pos)
            self._check_index(op, i, pos)
            if op == "proj":
                return Proj(i)
            self.expect("(")
            if op == "tie":
                left = self.term()
                self.expect(",")
                right = self.term()
                self.expect(")")
                return Tie(i, left, right)
            arg = self.term()
            self.expect(")")
            return {"dom": Dom, "adom": Adom, "fix": Fix}[op](i, arg)
        if tok == "zero":
            self._check_op("zero", pos)
            return Zero()
        if tok == "comp":
            self._check_op("comp", pos)
            self.expect("(")
            args = [self.term()]
            while self.peek()[0] == ",":
                self.next()
                args.append(self.term())
            tok2, pos2 = self.next()
            if tok2 != ";":
                raise TermSyntaxError(
                    f"expected {self.sig.n} arguments before ';'", pos2
                )
            if len(args) != self.sig.n:
                raise TermSyntaxError(
                    f"expected {self.sig.n} arguments before ';', got {len(args)}",
                    pos,
                )
            tail = self.term()
            self.expect(")")
            return Comp(tuple(args), tail)
        if tok in ("meet", "pref"):
            self._check_op(tok, pos)
            self.expect("(")
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(")")
            return Meet(left, right) if tok == "meet" else Pref(left, right)
        if re.fullmatch(r"[a-z][a-z0-9_]*", tok) and tok not in OP_NAMES:
            return Var(tok)
        raise TermSyntaxError(f"unexpected token {tok!r}", pos)

    def equation(self) -> Equation:
        lhs = self.term()
        self.expect("=")
        rhs = self.term()
        return Equation(lhs, rhs)

    def quasiequation(self) -> Quasiequation:
        eqs = [self.equation()]
        while self.peek()[0] == "&":
            self.next()
            eqs.append(self.equation())
        if self.peek()[0] == "=>":
            self.next()
            conclusion = self.equation()
            return Quasiequation(tuple(eqs), conclusion)
        if len(eqs) != 1:
            tok, pos = self.peek()
            raise TermSyntaxError("expected '=>' after premises", pos)
        return Quasiequation((), eqs[0])

    def finish(self):
        tok, pos = self.peek()
        if tok != "<end>":
            raise TermSyntaxError(f"trailing input {tok!r}", pos)


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    p.finish()
    return t


def parse_equation(text: str, sig: Signature) -> Equation:
    p = _Parser(text, sig)
    eq = p.equation()
    p.finish()
    return eq


def parse_quasiequation(text: str, sig: Signature) -> Quasiequation:
    p = _Parser(text, sig)
    q = p.quasiequation()
    p.finish()
    return q


# ---------------------------------------------------------------------------
# printing

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "zero"
    if isinstance(t, Proj):
        return f"pi{t.i}"
    if isinstance(t, Comp):
        args = ",".join(print_term(a) for a in t.args)
        return f"comp({args};{print_term(t.tail)})"
    if isinstance(t, Meet):
        return f"meet({print_term(t.left)},{print_term(t.right)})"
    if isinstance(t, Dom):
        return f"dom{t.i}({print_term(t.arg)})"
    if isinstance(t, Adom):
        return f"adom{t.i}({print_term(t.arg)})"
    if isinstance(t, Fix):
        return f"fix{t.i}({print_term(t.arg)})"
    if isinstance(t, Tie):
        return f"tie{t.i}({print_term(t.left)},{print_term(t.right)})"
    if isinstance(t, Pref):
        return f"pref({print_term(t.left)},{print_term(t.right)})"
    raise TermError(f"not a term: {t!r}")


def print_equation(eq: Equation) -> str:
    return f"{print_term(eq.lhs)} = {print_term(eq.rhs)}"


def print_quasiequation(q: Quasiequation) -> str:
    if not q.premises:
        return print_equation(q.conclusion)
    prem = " & ".join(print_equation(e) for e in q.premises)
    return f"{prem} => {print_equation(q.conclusion)}"


# ---------------------------------------------------------------------------
# structure

def subterms(t: Term):
    yield t
    if isinstance(t, Comp):
        for a in t.args:
            yield from subterms(a)
        yield from subterms(t.tail)
    elif isinstance(t, (Meet, Tie, Pref)):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, (Dom, Adom, Fix)):
        yield from subterms(t.arg)


def term_length(t: Term) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in subterms(t))


def term_vars(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def fresh_var(taken, prefix: str = "x") -> str:
    k = 0
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


# ---------------------------------------------------------------------------
# derived-form expansion

def zero_term(n: int, witness: str) -> Term:
    """The nowhere-defined function expressed from a witness variable."""
    w = Var(witness)
    return Comp(tuple(Adom(i, w) for i in range(1, n + 1)), w)


def plus_term(n: int, i: int, u: Term, v: Term) -> Term:
    """Join of two i-th-projection restrictions, via antidomain."""
    return Adom(i, Comp(tuple(Adom(j, u) for j in range(1, n + 1)), Adom(i, v)))


def tie_term(n: int, i: int, a: Term, b: Term) -> Term:
    """Tie expressed from intersection, composition and antidomain."""
    agree = Dom(i, Meet(a, b))
    both_undef = Comp(tuple(Adom(j, a) for j in range(1, n + 1)), Adom(i, b))
    return plus_term(n, i, agree, both_undef)


def expand_derived(
    t: Term,
    sig: Signature,
    expand_tie: bool = False,
    expand_fix: bool = False,
    witness: str | None = None,
) -> Term:
    """Rewrite Zero, Proj and Dom (and on request Tie / Fix) into primitives.

    Requires comp and adom in the signature; Tie and Fix expansion
    additionally require meet.  One designated fresh witness variable is
    introduced for the zero definition.
    """
    if not (sig.has("comp") and sig.has("adom")):
        raise TermError("expansion requires comp and adom in the signature")
    if (expand_tie or expand_fix) and not sig.has("meet"):
        raise TermError("tie/fix expansion requires meet in the signature")
    n = sig.n
    if witness is None:
        witness = fresh_var(term_vars(t))

    def go(t: Term) -> Term:
        if isinstance(t, (Var,)):
            return t
        if isinstance(t, Zero):
            return zero_term(n, witness)
        if isinstance(t, Proj):
            return Adom(t.i, zero_term(n, witness))
        if isinstance(t, Dom):
            return Adom(t.i, Adom(t.i, go(t.arg)))
        if isinstance(t, Adom):
            return Adom(t.i, go(t.arg))
        if isinstance(t, Comp):
            return Comp(tuple(go(a) for a in t.args), go(t.tail))
        if isinstance(t, Meet):
            return Meet(go(t.left), go(t.right))
        if isinstance(t, Fix):
            if expand_fix:
                return go(Meet(Proj(t.i), t.arg))
            return Fix(t.i, go(t.arg))
        if isinstance(t, Tie):
            if expand_tie:
                return go(tie_term(n, t.i, t.left, t.right))
            return Tie(t.i, go(t.left), go(t.right))
        if isinstance(t, Pref):
            return Pref(go(t.left), go(t.right))
        raise TermError(f"not a term: {t!r}")

    return go(t)
