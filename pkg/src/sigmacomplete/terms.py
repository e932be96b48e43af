"""Terms over the signature {0, +, -, \\/, /\\, q*, 1, csup}.

A term is an immutable tree of frozen dataclasses. The countably infinitary
operation ``csup`` carries a bound ``g`` and a family ``(f_n)``; it denotes
``sup_n (f_n /\\ g)``. Families are restricted to three finite descriptions:

* :class:`EventuallyConstant` - a finite prefix followed by a constant tail;
* :class:`IndexedPL` - a body in which the reserved index ``n`` only occurs
  as a natural multiple ``(a*n+b)*t`` of an index-free term ``t``;
* :class:`DoubleIndexed` - members ``k * c_n`` over pairs ``(n, k)``, where
  ``c_n`` runs through a finite head and then an optional indexed body.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Optional, Tuple, Union

from .rationals import Q, RationalLike, to_rational

INDEX = "n"
PAIR_INDEX = "k"


class TermError(ValueError):
    """Base class for malformed terms."""


class SignatureError(TermError):
    pass


class IndexUsageError(TermError):
    """The family index occurs where an index-free term is required."""


class Signature(enum.Enum):
    LG = "lg"
    LGU = "lgu"
    RS = "rs"
    RSU = "rsu"

    @property
    def has_unit(self) -> bool:
        return self in (Signature.LGU, Signature.RSU)

    @property
    def has_scalars(self) -> bool:
        return self in (Signature.RS, Signature.RSU)

    @classmethod
    def parse(cls, tag: Union[str, "Signature"]) -> "Signature":
        if isinstance(tag, Signature):
            return tag
        try:
            return cls(tag.lower())
        except ValueError:
            raise SignatureError(f"unknown signature {tag!r}; expected one of lg, lgu, rs, rsu") from None

    def includes(self, other: "Signature") -> bool:
        """True when every operation of ``other`` is available here."""
        return (self.has_unit or not other.has_unit) and (self.has_scalars or not other.has_scalars)


# ---------------------------------------------------------------------------
# Term nodes
# ---------------------------------------------------------------------------


class Term:
    __slots__ = ()

    def __add__(self, other: "Term") -> "Term":
        return Add(self, other)

    def __sub__(self, other: "Term") -> "Term":
        return Add(self, Neg(other))

    def __neg__(self) -> "Term":
        return Neg(self)

    def __and__(self, other: "Term") -> "Term":
        return Meet(self, other)

    def __or__(self, other: "Term") -> "Term":
        return Join(self, other)

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Neg(Term):
    t: Term


@dataclass(frozen=True)
class Add(Term):
    a: Term
    b: Term


@dataclass(frozen=True)
class Meet(Term):
    a: Term
    b: Term


@dataclass(frozen=True)
class Join(Term):
    a: Term
    b: Term


@dataclass(frozen=True)
class ScalarMul(Term):
    q: "Q"
    t: Term

    def __post_init__(self):
        object.__setattr__(self, "q", to_rational(self.q))


@dataclass(frozen=True)
class IndexExpr:
    """The natural number ``alpha * n + beta`` for family index ``n``."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta < 1:
            raise TermError(f"invalid index expression {self.alpha}*n+{self.beta}")

    def value(self, n: int) -> int:
        return self.alpha * n + self.beta

    def shifted(self, k: int) -> "IndexExpr":
        return IndexExpr(self.alpha, self.beta + self.alpha * k)

    @property
    def is_constant(self) -> bool:
        return self.alpha == 0


@dataclass(frozen=True)
class NatScale(Term):
    e: IndexExpr
    t: Term


@dataclass(frozen=True)
class CSup(Term):
    bound: Term
    family: "FamilySpec"


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


class FamilySpec:
    __slots__ = ()


@dataclass(frozen=True)
class EventuallyConstant(FamilySpec):
    prefix: Tuple[Term, ...]
    tail: Term

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))


@dataclass(frozen=True)
class IndexedPL(FamilySpec):
    body: Term


@dataclass(frozen=True)
class DoubleIndexed(FamilySpec):
    head: Tuple[Term, ...]
    body: Optional[Term] = None

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        if not self.head and self.body is None:
            raise TermError("double-indexed family needs a head or a body")


def constant_family(t: Term) -> EventuallyConstant:
    return EventuallyConstant((), t)


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    signature: Signature = Signature.RSU

    def __str__(self) -> str:
        from .syntax import format_equation

        return format_equation(self)


@dataclass(frozen=True)
class QuasiEquation:
    finite_premises: Tuple[Tuple[Term, Term], ...]
    indexed_premises: Optional[Tuple[Term, Term]]
    conclusion: Tuple[Term, Term]
    signature: Signature = Signature.RSU

    def __post_init__(self):
        object.__setattr__(self, "finite_premises", tuple(tuple(p) for p in self.finite_premises))
        if self.indexed_premises is not None:
            object.__setattr__(self, "indexed_premises", tuple(self.indexed_premises))
        object.__setattr__(self, "conclusion", tuple(self.conclusion))

    def __str__(self) -> str:
        from .syntax import format_quasi

        return format_quasi(self)


# ---------------------------------------------------------------------------
# Sugar
# ---------------------------------------------------------------------------


def abs_(t: Term) -> Term:
    return Join(t, Neg(t))


def pos(t: Term) -> Term:
    return Join(t, Zero())


def neg_part(t: Term) -> Term:
    return Join(Neg(t), Zero())


def diff(a: Term, b: Term) -> Term:
    return Add(a, Neg(b))


def times(c: int, t: Term) -> Term:
    """The ``c``-fold sum ``t + ... + t`` (``0`` when ``c == 0``)."""
    if c < 0:
        raise TermError("times() needs a natural multiplier")
    if c == 0:
        return Zero()
    out = t
    for _ in range(c - 1):
        out = Add(out, t)
    return out


def scale(q: RationalLike, t: Term) -> Term:
    return ScalarMul(to_rational(q), t)


def leq(a: Term, b: Term) -> Tuple[Term, Term]:
    """``a <= b`` as the pair ``(a /\\ b, a)``."""
    return Meet(a, b), a


# ---------------------------------------------------------------------------
# Traversal
# ---------------------------------------------------------------------------

_UNARY = (Neg,)
_BINARY = (Add, Meet, Join)


def family_terms(fam: FamilySpec) -> Iterator[Term]:
    if isinstance(fam, EventuallyConstant):
        yield from fam.prefix
        yield fam.tail
    elif isinstance(fam, IndexedPL):
        yield fam.body
    elif isinstance(fam, DoubleIndexed):
        yield from fam.head
        if fam.body is not None:
            yield fam.body
    else:
        raise TermError(f"unknown family {fam!r}")


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order walk, descending into family members."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, _BINARY):
            stack.extend((s.b, s.a))
        elif isinstance(s, (Neg, ScalarMul, NatScale)):
            stack.append(s.t)
        elif isinstance(s, CSup):
            stack.extend(reversed(list(family_terms(s.family))))
            stack.append(s.bound)


def free_vars(t: Union[Term, Equation, QuasiEquation]) -> frozenset:
    if isinstance(t, Equation):
        return free_vars(t.lhs) | free_vars(t.rhs)
    if isinstance(t, QuasiEquation):
        out = set()
        for pair in statement_pairs(t):
            for side in pair:
                out |= free_vars(side)
        return frozenset(out)
    return frozenset(s.name for s in subterms(t) if isinstance(s, Var))


def statement_pairs(qe: QuasiEquation) -> Iterator[Tuple[Term, Term]]:
    yield from qe.finite_premises
    if qe.indexed_premises is not None:
        yield qe.indexed_premises
    yield qe.conclusion


def has_index(t: Term) -> bool:
    """Whether ``t`` mentions the family index (through a non-constant multiple)."""
    return any(isinstance(s, NatScale) and not s.e.is_constant for s in _walk_outer(t))


def _walk_outer(t: Term) -> Iterator[Term]:
    # does not enter nested families: those bind their own index
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, _BINARY):
            stack.extend((s.b, s.a))
        elif isinstance(s, (Neg, ScalarMul, NatScale)):
            stack.append(s.t)
        elif isinstance(s, CSup):
            stack.append(s.bound)


def map_children(t: Term, fn: Callable[[Term], Term]) -> Term:
    if isinstance(t, Neg):
        return Neg(fn(t.t))
    if isinstance(t, _BINARY):
        return type(t)(fn(t.a), fn(t.b))
    if isinstance(t, ScalarMul):
        return ScalarMul(t.q, fn(t.t))
    if isinstance(t, NatScale):
        return NatScale(t.e, fn(t.t))
    if isinstance(t, CSup):
        return CSup(fn(t.bound), map_family(t.family, fn))
    return t


def map_family(fam: FamilySpec, fn: Callable[[Term], Term]) -> FamilySpec:
    """Apply ``fn`` to every member description of ``fam``."""
    if isinstance(fam, EventuallyConstant):
        return EventuallyConstant(tuple(fn(p) for p in fam.prefix), fn(fam.tail))
    if isinstance(fam, IndexedPL):
        return IndexedPL(fn(fam.body))
    if isinstance(fam, DoubleIndexed):
        return DoubleIndexed(tuple(fn(h) for h in fam.head), None if fam.body is None else fn(fam.body))
    raise TermError(f"unknown family {fam!r}")


def substitute(t: Term, env: Mapping[str, Term], *, _in_family: bool = False) -> Term:
    """Capture-free substitution of variables by terms.

    Only the family index is a binder and it is never a variable name, so
    capture cannot happen; a replacement that mentions the index is refused.
    """
    for name, repl in env.items():
        if any(isinstance(s, NatScale) for s in subterms(repl)):
            raise IndexUsageError(f"substitution for {name!r} is not index-free")
    return _subst(t, env)


def _subst(t: Term, env: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return env.get(t.name, t)
    return map_children(t, lambda s: _subst(s, env))


# ---------------------------------------------------------------------------
# Families: shifting and members
# ---------------------------------------------------------------------------


def shift_family(fam: FamilySpec, k: int) -> FamilySpec:
    """The family ``(f_{n+k})_n``."""
    if k < 0:
        raise TermError("shift must be nonnegative")
    if isinstance(fam, EventuallyConstant):
        return EventuallyConstant(fam.prefix[k:], fam.tail)
    if isinstance(fam, IndexedPL):
        return IndexedPL(_shift_body(fam.body, k))
    raise TermError(f"cannot shift {type(fam).__name__}")


def _shift_body(t: Term, k: int) -> Term:
    if isinstance(t, NatScale):
        return NatScale(t.e.shifted(k), t.t)
    if isinstance(t, CSup):
        return t
    return map_children(t, lambda s: _shift_body(s, k))


def instantiate(body: Term, n: int) -> Term:
    """Index-free term for ``body`` at index value ``n``; multiples become sums."""
    if isinstance(body, NatScale):
        return times(body.e.value(n), body.t)
    if isinstance(body, CSup):
        return body
    return map_children(body, lambda s: instantiate(s, n))


def member(fam: FamilySpec, n: int) -> Term:
    """The ``n``-th member (``n >= 1``) of a single-indexed family."""
    if n < 1:
        raise TermError("families are indexed from 1")
    if isinstance(fam, EventuallyConstant):
        return fam.prefix[n - 1] if n <= len(fam.prefix) else fam.tail
    if isinstance(fam, IndexedPL):
        return instantiate(fam.body, n)
    raise TermError(f"{type(fam).__name__} has no single-index members")


def inner_member(fam: DoubleIndexed, n: int) -> Term:
    """``c_n`` of a double-indexed family (the member at ``(n, k)`` is ``k * c_n``)."""
    if n <= len(fam.head):
        return fam.head[n - 1]
    if fam.body is None:
        return fam.head[-1]
    return instantiate(fam.body, n - len(fam.head))


# ---------------------------------------------------------------------------
# Well-formedness
# ---------------------------------------------------------------------------


def check_term(t: Term, signature: Union[str, Signature]) -> None:
    """Raise unless ``t`` is well formed over ``signature``."""
    sig = Signature.parse(signature)
    _check(t, sig, in_body=False)


def _check(t: Term, sig: Signature, in_body: bool) -> None:
    if isinstance(t, (Zero, Var)):
        return
    if isinstance(t, One):
        if not sig.has_unit:
            raise SignatureError(f"the constant 1 is not in signature {sig.value}")
        return
    if isinstance(t, Neg):
        return _check(t.t, sig, in_body)
    if isinstance(t, _BINARY):
        _check(t.a, sig, in_body)
        return _check(t.b, sig, in_body)
    if isinstance(t, ScalarMul):
        if not sig.has_scalars:
            raise SignatureError(f"scalar multiplication is not in signature {sig.value}")
        return _check(t.t, sig, in_body)
    if isinstance(t, NatScale):
        if not in_body:
            raise IndexUsageError("the index n may only occur inside an indexed family body")
        if any(isinstance(s, NatScale) for s in subterms(t.t)):
            raise IndexUsageError("the multiplicand of an index multiple must be index-free")
        return _check(t.t, sig, False)
    if isinstance(t, CSup):
        if in_body:
            raise IndexUsageError("nested csup inside an indexed family body is not supported")
        _check(t.bound, sig, False)
        return _check_family(t.family, sig)
    raise TermError(f"not a term: {t!r}")


def _check_family(fam: FamilySpec, sig: Signature) -> None:
    if isinstance(fam, EventuallyConstant):
        for p in (*fam.prefix, fam.tail):
            _check(p, sig, in_body=False)
    elif isinstance(fam, IndexedPL):
        _check(fam.body, sig, in_body=True)
    elif isinstance(fam, DoubleIndexed):
        for h in fam.head:
            _check(h, sig, in_body=False)
        if fam.body is not None:
            _check(fam.body, sig, in_body=True)
    else:
        raise TermError(f"unknown family {fam!r}")


def accepts(t: Term, signature: Union[str, Signature]) -> bool:
    try:
        check_term(t, signature)
    except SignatureError:
        return False
    return True


def signatures_accepting(t: Term) -> frozenset:
    return frozenset(s for s in Signature if accepts(t, s))


def check_equation_terms(eq: Equation) -> None:
    check_term(eq.lhs, eq.signature)
    check_term(eq.rhs, eq.signature)


def check_quasi_terms(qe: QuasiEquation) -> None:
    for a, b in qe.finite_premises:
        check_term(a, qe.signature)
        check_term(b, qe.signature)
    if qe.indexed_premises is not None:
        for side in qe.indexed_premises:
            _check(side, qe.signature, in_body=True)
    check_term(qe.conclusion[0], qe.signature)
    check_term(qe.conclusion[1], qe.signature)
