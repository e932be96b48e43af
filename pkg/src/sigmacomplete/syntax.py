"""ASCII concrete syntax: tokenizer, recursive-descent parser and printer.

Binding strength, tightest first: unary minus, scalar and index multiples,
``/\\``, ``\\/``, ``+``. Binary ``a - b`` is read as ``a + -b``.

::

    term   := "0" | "one" | ident | "-" term | term "+" term | term "-" term
            | term "/\\" term | term "\\/" term | rational "*" term
            | "n*" term | "(" a "*n+" b ")*" term        (inside a family body)
            | "abs(" term ")" | "pos(" term ")" | "neg(" term ")"
            | "csup[" term "](" family ")" | "(" term ")"
    family := "n :" term                           indexed by n >= 1
            | "[" term {"," term} "] ~" term       prefix, then constant tail
            | "n, k :" ["[" term {"," term} "]" ["++"]] [term]
                                                   members k*c_n (compiler output)
    stmt   := term "=" term | term "<=" term
    quasi  := [premise {";" premise}] "=>" stmt ;  premise := stmt | "n :" stmt
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .rationals import Q
from .terms import (
    INDEX,
    PAIR_INDEX,
    Add,
    CSup,
    DoubleIndexed,
    Equation,
    EventuallyConstant,
    FamilySpec,
    IndexedPL,
    IndexExpr,
    IndexUsageError,
    Join,
    Meet,
    NatScale,
    Neg,
    One,
    QuasiEquation,
    ScalarMul,
    Signature,
    Term,
    TermError,
    Var,
    Zero,
    abs_,
    check_equation_terms,
    check_quasi_terms,
    check_term,
    leq,
    neg_part,
    pos,
)

KEYWORDS = {"one", "abs", "pos", "neg", "csup"}


class ParseError(TermError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, ID, OP, END
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<NUM>\d+)|(?P<ID>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<OP>/\\|\\/|<=|=>|\+\+|[+\-*/()\[\],:~=;]|∧|∨|≤|⇒))"
)
_UNICODE = {"∧": "/\\", "∨": "\\/", "≤": "<=", "⇒": "=>"}


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "OP":
            value = _UNICODE.get(value, value)
        tokens.append(Token(kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers -----------------------------------------------------
    def peek(self, offset: int = 0) -> Token:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def at(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("OP", "ID") and tok.value == value

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        if not self.at(value):
            tok = self.peek()
            raise ParseError(f"expected {value!r}, found {tok.value or 'end of input'!r}", tok.pos, self.text)
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.peek().pos, self.text)

    # -- terms -------------------------------------------------------------
    def term(self, in_body: bool = False) -> Term:
        left = self.join(in_body)
        while self.at("+") or self.at("-"):
            op = self.advance().value
            right = self.join(in_body)
            left = Add(left, right) if op == "+" else Add(left, Neg(right))
        return left

    def join(self, in_body: bool) -> Term:
        left = self.meet(in_body)
        while self.at("\\/"):
            self.advance()
            left = Join(left, self.meet(in_body))
        return left

    def meet(self, in_body: bool) -> Term:
        left = self.scalar(in_body)
        while self.at("/\\"):
            self.advance()
            left = Meet(left, self.scalar(in_body))
        return left

    def _rational_ahead(self, offset: int) -> Optional[int]:
        """Token count of ``NUM ["/" NUM] "*"`` starting at ``offset``, if present."""
        if self.peek(offset).kind != "NUM":
            return None
        if self.at("/", offset + 1) and self.peek(offset + 2).kind == "NUM":
            return 4 if self.at("*", offset + 3) else None
        return 2 if self.at("*", offset + 1) else None

    def _rational(self, negative: bool) -> "Q":
        num = int(self.advance().value)
        den = 1
        if self.at("/"):
            self.advance()
            tok = self.advance()
            den = int(tok.value)
            if den == 0:
                raise ParseError("zero denominator", tok.pos, self.text)
        self.expect("*")
        q = Q(num, den)
        return -q if negative else q

    def scalar(self, in_body: bool) -> Term:
        if self.at("-"):
            if self._rational_ahead(1):
                self.advance()
                q = self._rational(negative=True)
                return ScalarMul(q, self.scalar(in_body))
            if self._index_ahead(1):
                self.advance()
                return Neg(self.scalar(in_body))
        if self._rational_ahead(0):
            if self.at(INDEX, 2) and self.at("*", 3):
                # "a*n*t"
                alpha = int(self.advance().value)
                self.advance()
                return self._index_multiple(IndexExpr(alpha, 0), in_body)
            q = self._rational(negative=False)
            return ScalarMul(q, self.scalar(in_body))
        if self.at(INDEX) and self.at("*", 1):
            return self._index_multiple(IndexExpr(1, 0), in_body)
        if self.at("("):
            e = self._try_index_paren()
            if e is not None:
                return self._index_multiple(e, in_body)
        return self.unary(in_body)

    def _index_ahead(self, offset: int) -> bool:
        if self.at(INDEX, offset) and self.at("*", offset + 1):
            return True
        if self.peek(offset).kind == "NUM" and self.at("*", offset + 1) and self.at(INDEX, offset + 2):
            return True
        if self.at("(", offset):
            save = self.i
            self.i += offset
            try:
                return self._try_index_paren() is not None
            finally:
                self.i = save
        return False

    def _try_index_paren(self) -> Optional[IndexExpr]:
        # "(" [a "*"] "n" ["+" b] ")" "*"
        save = self.i
        try:
            self.expect("(")
            alpha = 1
            if self.peek().kind == "NUM":
                alpha = int(self.advance().value)
                self.expect("*")
            self.expect(INDEX)
            beta = 0
            if self.at("+"):
                self.advance()
                if self.peek().kind != "NUM":
                    raise self.error("expected a natural number")
                beta = int(self.advance().value)
            self.expect(")")
            if not self.at("*"):
                raise self.error("expected '*'")
            return IndexExpr(alpha, beta)
        except TermError:
            self.i = save
            return None

    def _index_multiple(self, e: IndexExpr, in_body: bool) -> Term:
        tok = self.peek()
        if not in_body:
            raise ParseError("the index n may only occur inside an indexed family body", tok.pos, self.text)
        if self.at(INDEX):
            self.advance()
        self.expect("*")
        return NatScale(e, self.scalar(in_body=False))

    def unary(self, in_body: bool) -> Term:
        if self.at("-"):
            self.advance()
            return Neg(self.unary(in_body))
        return self.primary(in_body)

    def primary(self, in_body: bool) -> Term:
        tok = self.peek()
        if tok.kind == "NUM":
            if tok.value == "0":
                self.advance()
                return Zero()
            if tok.value == "1":
                self.advance()
                return One()
            raise self.error(f"bare number {tok.value}; scalars need '*'")
        if tok.kind == "ID":
            name = tok.value
            if name == "one":
                self.advance()
                return One()
            if name in ("abs", "pos", "neg") and self.at("(", 1):
                self.advance()
                self.advance()
                inner = self.term(in_body)
                self.expect(")")
                return {"abs": abs_, "pos": pos, "neg": neg_part}[name](inner)
            if name == "csup":
                return self.csup(in_body)
            if name == INDEX:
                raise ParseError("the index n may only occur as a multiple 'n*t' or '(a*n+b)*t'", tok.pos, self.text)
            if name in KEYWORDS:
                raise self.error(f"misplaced keyword {name!r}")
            self.advance()
            return Var(name)
        if self.at("("):
            self.advance()
            inner = self.term(in_body)
            self.expect(")")
            return inner
        raise self.error(f"unexpected {tok.value or 'end of input'!r}")

    def csup(self, in_body: bool) -> Term:
        start = self.advance()
        if in_body:
            raise ParseError("nested csup inside an indexed family body is not supported", start.pos, self.text)
        self.expect("[")
        bound = self.term()
        self.expect("]")
        self.expect("(")
        fam = self.family()
        self.expect(")")
        return CSup(bound, fam)

    def family(self) -> FamilySpec:
        if self.at(INDEX) and self.at(",", 1):
            self.advance()
            self.advance()
            self.expect(PAIR_INDEX)
            self.expect(":")
            head: Tuple[Term, ...] = ()
            body = None
            if self.at("["):
                head = self.term_list()
                if self.at("++"):
                    self.advance()
                    body = self.term(in_body=True)
            else:
                body = self.term(in_body=True)
            try:
                return DoubleIndexed(head, body)
            except TermError as exc:
                raise self.error(str(exc)) from None
        if self.at(INDEX) and self.at(":", 1):
            self.advance()
            self.advance()
            return IndexedPL(self.term(in_body=True))
        if self.at("["):
            prefix = self.term_list()
            self.expect("~")
            return EventuallyConstant(prefix, self.term())
        raise self.error("expected a family: 'n : body', '[...] ~ tail' or 'n, k : ...'")

    def term_list(self) -> Tuple[Term, ...]:
        self.expect("[")
        items = []
        if not self.at("]"):
            items.append(self.term())
            while self.at(","):
                self.advance()
                items.append(self.term())
        self.expect("]")
        return tuple(items)

    # -- statements --------------------------------------------------------
    def statement(self, in_body: bool = False) -> Tuple[Term, Term]:
        lhs = self.term(in_body)
        if self.at("="):
            self.advance()
            return lhs, self.term(in_body)
        if self.at("<="):
            self.advance()
            return leq(lhs, self.term(in_body))
        raise self.error("expected '=' or '<='")

    def quasi(self):
        finite = []
        indexed = None
        if not self.at("=>"):
            while True:
                if self.at(INDEX) and self.at(":", 1):
                    tok = self.peek()
                    if indexed is not None:
                        raise ParseError("only one indexed premise family is supported", tok.pos, self.text)
                    self.advance()
                    self.advance()
                    indexed = self.statement(in_body=True)
                else:
                    finite.append(self.statement())
                if not self.at(";"):
                    break
                self.advance()
        self.expect("=>")
        return finite, indexed, self.statement()

    def end(self) -> None:
        if self.peek().kind != "END":
            raise self.error(f"unexpected trailing {self.peek().value!r}")


def _has_op(tokens: List[Token], value: str) -> bool:
    return any(t.kind == "OP" and t.value == value for t in tokens)


def parse(text: str, signature: Union[str, Signature] = Signature.RSU):
    """Parse a term, an equation (``=`` / ``<=``) or a quasi-equation (``=>``)."""
    sig = Signature.parse(signature)
    p = _Parser(text)
    toks = p.toks
    if _has_op(toks, "=>"):
        return parse_quasi(text, sig)
    if _has_op(toks, "=") or _has_op(toks, "<="):
        return parse_equation(text, sig)
    return parse_term(text, sig)


def parse_term(text: str, signature: Union[str, Signature] = Signature.RSU) -> Term:
    p = _Parser(text)
    t = p.term()
    p.end()
    check_term(t, signature)
    return t


def parse_equation(text: str, signature: Union[str, Signature] = Signature.RSU) -> Equation:
    sig = Signature.parse(signature)
    p = _Parser(text)
    lhs, rhs = p.statement()
    p.end()
    eq = Equation(lhs, rhs, sig)
    check_equation_terms(eq)
    return eq


def parse_quasi(text: str, signature: Union[str, Signature] = Signature.RSU) -> QuasiEquation:
    sig = Signature.parse(signature)
    p = _Parser(text)
    finite, indexed, conclusion = p.quasi()
    p.end()
    qe = QuasiEquation(tuple(finite), indexed, conclusion, sig)
    try:
        check_quasi_terms(qe)
    except IndexUsageError as exc:
        raise ParseError(str(exc), 0, text) from None
    return qe


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PLUS, _JOIN, _MEET, _SCALAR, _UNARY, _ATOM = range(1, 7)


def _level(t: Term) -> int:
    if isinstance(t, Add):
        return _PLUS
    if isinstance(t, Join):
        return _ATOM if _sugar(t) else _JOIN
    if isinstance(t, Meet):
        return _MEET
    if isinstance(t, (ScalarMul, NatScale)):
        return _SCALAR
    if isinstance(t, Neg):
        return _UNARY
    return _ATOM


def _sugar(t: Join) -> Optional[Tuple[str, Term]]:
    if isinstance(t.b, Neg) and t.b.t == t.a:
        return "abs", t.a
    if isinstance(t.b, Zero):
        if isinstance(t.a, Neg):
            return "neg", t.a.t
        return "pos", t.a
    return None


def _fmt_q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_index(e: IndexExpr) -> str:
    if e.alpha == 1 and e.beta == 0:
        return "n"
    a = "n" if e.alpha == 1 else f"{e.alpha}*n"
    return f"({a}+{e.beta})" if e.beta else f"({a})"


def _fmt(t: Term, ctx: int) -> str:
    s = _fmt_bare(t)
    return f"({s})" if _level(t) < ctx else s


def _fmt_bare(t: Term) -> str:
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "one"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Neg):
        return "-" + _fmt(t.t, _UNARY)
    if isinstance(t, Add):
        return f"{_fmt(t.a, _PLUS)} + {_fmt(t.b, _PLUS + 1)}"
    if isinstance(t, Join):
        sugar = _sugar(t)
        if sugar:
            name, inner = sugar
            return f"{name}({_fmt(inner, 0)})"
        return f"{_fmt(t.a, _JOIN)} \\/ {_fmt(t.b, _JOIN + 1)}"
    if isinstance(t, Meet):
        return f"{_fmt(t.a, _MEET)} /\\ {_fmt(t.b, _MEET + 1)}"
    if isinstance(t, ScalarMul):
        # "2*n*x" would read back as an index multiple
        inner = f"({_fmt_bare(t.t)})" if isinstance(t.t, NatScale) else _fmt(t.t, _SCALAR)
        return f"{_fmt_q(t.q)}*{inner}"
    if isinstance(t, NatScale):
        return f"{_fmt_index(t.e)}*{_fmt(t.t, _SCALAR)}"
    if isinstance(t, CSup):
        return f"csup[{_fmt(t.bound, 0)}]({format_family(t.family)})"
    raise TermError(f"not a term: {t!r}")


def format_family(fam: FamilySpec) -> str:
    if isinstance(fam, IndexedPL):
        return f"n : {_fmt(fam.body, 0)}"
    if isinstance(fam, EventuallyConstant):
        items = ", ".join(_fmt(p, 0) for p in fam.prefix)
        return f"[{items}] ~ {_fmt(fam.tail, 0)}"
    if isinstance(fam, DoubleIndexed):
        parts = []
        if fam.head:
            parts.append("[" + ", ".join(_fmt(h, 0) for h in fam.head) + "]")
        if fam.body is not None:
            parts.append(_fmt(fam.body, 0))
        return "n, k : " + " ++ ".join(parts)
    raise TermError(f"unknown family {fam!r}")


def format_term(t: Term) -> str:
    return _fmt(t, 0)


def format_equation(eq: Equation) -> str:
    return f"{format_term(eq.lhs)} = {format_term(eq.rhs)}"


def format_quasi(qe: QuasiEquation) -> str:
    parts = [f"{format_term(a)} = {format_term(b)}" for a, b in qe.finite_premises]
    if qe.indexed_premises is not None:
        a, b = qe.indexed_premises
        parts.append(f"n : {format_term(a)} = {format_term(b)}")
    a, b = qe.conclusion
    head = " ; ".join(parts)
    return f"{head} => {format_term(a)} = {format_term(b)}" if head else f"=> {format_term(a)} = {format_term(b)}"
