"""Exact evaluation of terms in the real line at rational points.

Finitary operations are evaluated pointwise. For ``csup[g](n : body)`` the
body is turned into a piecewise-linear function of a real index ``n >= 1``
(every operation in a body is piecewise linear in ``n`` once the variables
are fixed), and the supremum over integers ``n >= 1`` of ``min(body(n), g)``
is read off the finitely many pieces.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .rationals import ONE, Q, ZERO, RationalLike, ceil, floor, to_rational
from .terms import (
    INDEX,
    Add,
    CSup,
    DoubleIndexed,
    EventuallyConstant,
    FamilySpec,
    IndexedPL,
    IndexUsageError,
    Join,
    Meet,
    NatScale,
    Neg,
    One,
    ScalarMul,
    Term,
    TermError,
    Var,
    Zero,
    has_index,
)

Valuation = Mapping[str, "Q"]


class EvaluationError(TermError):
    pass


class PreconditionError(EvaluationError):
    def __init__(self, message: str, witness: Optional[int] = None):
        self.witness = witness
        super().__init__(message)


def valuation(**values: RationalLike) -> Dict[str, "Q"]:
    """Build a valuation from keyword arguments, e.g. ``valuation(f="-7/2")``."""
    return {k: to_rational(v) for k, v in values.items()}


# ---------------------------------------------------------------------------
# Piecewise-linear functions of the index
# ---------------------------------------------------------------------------


class Piece(NamedTuple):
    slope: "Q"
    intercept: "Q"

    def __call__(self, x):
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class PLFunction1:
    """Continuous piecewise-linear function on ``[1, oo)``.

    ``pieces[0]`` covers ``[1, breakpoints[0]]``, ``pieces[i]`` covers
    ``[breakpoints[i-1], breakpoints[i]]`` and the last piece is unbounded.
    """

    breakpoints: Tuple["Q", ...]
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        prev = ONE
        for b in self.breakpoints:
            if not b > prev:
                raise ValueError("breakpoints must be strictly increasing and > 1")
            prev = b
        for b, (p, q) in zip(self.breakpoints, zip(self.pieces, self.pieces[1:])):
            if p(b) != q(b):
                raise ValueError(f"discontinuity at {b}")

    @classmethod
    def _trusted(cls, breakpoints, pieces) -> "PLFunction1":
        # results of operations on valid functions are valid; skip the checks
        obj = object.__new__(cls)
        object.__setattr__(obj, "breakpoints", breakpoints)
        object.__setattr__(obj, "pieces", pieces)
        return obj

    @classmethod
    def affine(cls, slope, intercept) -> "PLFunction1":
        return cls._trusted((), (Piece(Q(slope), Q(intercept)),))

    @classmethod
    def constant(cls, c) -> "PLFunction1":
        return cls.affine(ZERO, c)

    def __call__(self, x):
        x = to_rational(x) if not isinstance(x, type(ONE)) else x
        return self.pieces[bisect_right(self.breakpoints, x)](x)

    def intervals(self) -> Iterator[Tuple["Q", Optional["Q"], Piece]]:
        """``(lo, hi, piece)`` triples; ``hi`` is ``None`` for the tail."""
        lo = ONE
        for b, p in zip(self.breakpoints, self.pieces):
            yield lo, b, p
            lo = b
        yield lo, None, self.pieces[-1]

    @property
    def tail(self) -> Piece:
        return self.pieces[-1]

    def __neg__(self) -> "PLFunction1":
        return PLFunction1._trusted(self.breakpoints, tuple(Piece(-p.slope, -p.intercept) for p in self.pieces))

    def scaled(self, q) -> "PLFunction1":
        if q == 0:
            return PLFunction1.constant(ZERO)
        return PLFunction1._trusted(self.breakpoints, tuple(Piece(q * p.slope, q * p.intercept) for p in self.pieces))

    def __add__(self, other: "PLFunction1") -> "PLFunction1":
        return _combine(self, other, "add")

    def minimum(self, other: "PLFunction1") -> "PLFunction1":
        return _combine(self, other, "min")

    def maximum(self, other: "PLFunction1") -> "PLFunction1":
        return _combine(self, other, "max")


def _combine(f: PLFunction1, g: PLFunction1, op: str) -> PLFunction1:
    if not f.breakpoints and not g.breakpoints:
        p, q = f.pieces[0], g.pieces[0]
        if op == "add":
            return PLFunction1._trusted((), (Piece(p.slope + q.slope, p.intercept + q.intercept),))
        if p == q or p.slope == q.slope:
            keep = p if (p.intercept <= q.intercept) == (op == "min") else q
            return PLFunction1._trusted((), (keep,))
        # two lines crossing once; the steeper one is lower left of the crossing
        steep, flat = (p, q) if p.slope > q.slope else (q, p)
        left, right = (steep, flat) if op == "min" else (flat, steep)
        x = (q.intercept - p.intercept) / (p.slope - q.slope)
        if x > ONE:
            return PLFunction1._trusted((x,), (left, right))
        return PLFunction1._trusted((), (right,))
    edges = sorted(set(f.breakpoints) | set(g.breakpoints))
    starts: List["Q"] = []
    pieces: List[Piece] = []

    def emit(start, piece):
        if pieces and pieces[-1] == piece:
            return
        starts.append(start)
        pieces.append(piece)

    lo = ONE
    for hi in [*edges, None]:
        mid = lo + 1 if hi is None else (lo + hi) / 2
        p = f.pieces[bisect_right(f.breakpoints, mid)]
        q = g.pieces[bisect_right(g.breakpoints, mid)]
        if op == "add":
            emit(lo, Piece(p.slope + q.slope, p.intercept + q.intercept))
        else:
            pick_min = op == "min"
            cross = None
            if p.slope != q.slope:
                x = (q.intercept - p.intercept) / (p.slope - q.slope)
                if x > lo and (hi is None or x < hi):
                    cross = x
            segments = [(lo, hi)] if cross is None else [(lo, cross), (cross, hi)]
            for a, b in segments:
                m = a + 1 if b is None else (a + b) / 2
                lower = p if p(m) <= q(m) else q
                upper = q if lower is p else p
                emit(a, lower if pick_min else upper)
        lo = hi
    return PLFunction1._trusted(tuple(starts[1:]), tuple(pieces))


class Positivity(NamedTuple):
    found: bool
    witness: Optional[int]

    def __bool__(self) -> bool:
        return self.found


def exists_positive(p: PLFunction1) -> Positivity:
    """Decide whether ``p(n) > 0`` for some integer ``n >= 1``; the witness is the least one."""
    for lo, hi, piece in p.intervals():
        first = ceil(lo)
        last = None if hi is None else floor(hi)
        if last is not None and first > last:
            continue
        s, c = piece
        if s > 0:
            # least integer with s*n + c > 0
            n = max(first, floor(-c / s) + 1)
            if last is None or n <= last:
                return Positivity(True, n)
        elif piece(first) > 0:
            return Positivity(True, first)
    return Positivity(False, None)


def _integer_max(p: PLFunction1) -> Tuple[Optional["Q"], bool]:
    """Max of ``p`` over integers ``n >= 1`` and whether the tail is unbounded above."""
    best = None
    for lo, hi, piece in p.intervals():
        first = ceil(lo)
        if hi is None:
            if piece.slope > 0:
                return best, True
            cands = [first]
        else:
            last = floor(hi)
            if first > last:
                continue
            cands = [first, last]
        for n in cands:
            val = piece(n)
            if best is None or val > best:
                best = val
    return best, False


def sup_over_integers(p: PLFunction1, cap: RationalLike):
    """``sup { min(p(n), cap) : n integer, n >= 1 }`` computed exactly."""
    cap = to_rational(cap)
    best, unbounded = _integer_max(p)
    if unbounded:
        return cap
    return min(best, cap)


def stabilization_index(p: PLFunction1, cap: RationalLike) -> int:
    """An ``N`` such that truncating the supremum at ``n <= N`` already gives its value."""
    cap = to_rational(cap)
    n = ceil(p.breakpoints[-1]) + 1 if p.breakpoints else 1
    s, c = p.tail
    if s > 0:
        n = max(n, ceil((cap - c) / s) + 1)
    return max(n, 1)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_term(t: Term, v: Valuation, index: Optional[int] = None):
    """Value of ``t`` in the reals under ``v``.

    ``index`` fixes the family index; it is only needed when ``t`` is a
    family body containing multiples ``(a*n+b)*s``.
    """
    try:
        fn = _DISPATCH[type(t)]
    except KeyError:
        raise EvaluationError(f"not a term: {t!r}") from None
    return fn(t, v, index)


def _var(t, v, index):
    if t.name == INDEX:
        raise IndexUsageError("the index n may only occur as a multiple")
    try:
        return v[t.name]
    except KeyError:
        raise EvaluationError(f"unbound variable {t.name!r}") from None


def _natscale(t, v, index):
    if index is None:
        if not t.e.is_constant:
            raise IndexUsageError("index multiple evaluated without an index value")
        return t.e.beta * eval_term(t.t, v)
    return t.e.value(index) * eval_term(t.t, v)


def _csup(t, v, index):
    cap = eval_term(t.bound, v)
    return eval_family_sup(t.family, cap, v)


_DISPATCH = {
    Zero: lambda t, v, i: ZERO,
    One: lambda t, v, i: ONE,
    Var: _var,
    Neg: lambda t, v, i: -eval_term(t.t, v, i),
    Add: lambda t, v, i: eval_term(t.a, v, i) + eval_term(t.b, v, i),
    Meet: lambda t, v, i: min(eval_term(t.a, v, i), eval_term(t.b, v, i)),
    Join: lambda t, v, i: max(eval_term(t.a, v, i), eval_term(t.b, v, i)),
    ScalarMul: lambda t, v, i: t.q * eval_term(t.t, v, i),
    NatScale: _natscale,
    CSup: _csup,
}


def eval_family_sup(fam: FamilySpec, cap, v: Valuation):
    """``sup_n min(f_n, cap)`` for a family under ``v``."""
    if isinstance(fam, EventuallyConstant):
        return max(min(eval_term(m, v), cap) for m in (*fam.prefix, fam.tail))
    if isinstance(fam, IndexedPL):
        return sup_over_integers(pl_of_index(fam.body, v), cap)
    if isinstance(fam, DoubleIndexed):
        return _double_sup_value(fam, cap, v)
    raise EvaluationError(f"malformed family {fam!r}")


def pl_of_index(body: Term, v: Valuation) -> PLFunction1:
    """The map ``n -> body(n)`` under ``v``, extended to real ``n >= 1``."""
    # keyed by identity (hashing a deep term costs as much as evaluating it);
    # the entry keeps the body alive so its id cannot be reused
    hit = _PLANS.get(id(body))
    if hit is None or hit[0] is not body:
        if len(_PLANS) > 4096:
            _PLANS.clear()
        hit = _PLANS[id(body)] = (body, _pl_plan(body))
    return hit[1](v)


_PLANS: Dict[int, Tuple[Term, Callable]] = {}


@lru_cache(maxsize=4096)
def _pl_plan(body: Term) -> Callable[[Valuation], PLFunction1]:
    # compiled once per body; index-free subterms are evaluated directly
    if not has_index(body):
        return lambda v: PLFunction1.constant(eval_term(body, v))
    tp = type(body)
    if tp is NatScale:
        alpha, beta, inner = body.e.alpha, body.e.beta, body.t
        def natscale(v):
            c = eval_term(inner, v)
            return PLFunction1.affine(alpha * c, beta * c)
        return natscale
    if tp is Neg:
        f = _pl_plan(body.t)
        return lambda v: -f(v)
    if tp is ScalarMul:
        f, q = _pl_plan(body.t), body.q
        return lambda v: f(v).scaled(q)
    f, g = _pl_plan(body.a), _pl_plan(body.b)
    if tp is Add:
        return lambda v: f(v) + g(v)
    if tp is Meet:
        return lambda v: f(v).minimum(g(v))
    if tp is Join:
        return lambda v: f(v).maximum(g(v))
    raise EvaluationError(f"not a family body: {body!r}")


def _double_sup_value(fam: DoubleIndexed, cap, v: Valuation):
    if cap < 0:
        raise PreconditionError(f"double supremum needs a nonnegative bound, got {cap}")
    positive = False
    for i, h in enumerate(fam.head, start=1):
        c = eval_term(h, v)
        if c < 0:
            raise PreconditionError(f"family member {i} is negative ({c})", witness=i)
        positive = positive or c > 0
    if fam.body is not None:
        p = pl_of_index(fam.body, v)
        neg = exists_positive(-p)
        if neg:
            w = neg.witness + len(fam.head)
            raise PreconditionError(f"family member {w} is negative", witness=w)
        positive = positive or exists_positive(p).found
    # for c > 0, sup_k min(k*c, cap) = cap
    return cap if positive else ZERO


def double_sup(body: Union[Term, DoubleIndexed], cap_term: Term, v: Valuation):
    """``sup_{n,k >= 1} min(k * c_n, cap)`` for a nonnegative family ``c``."""
    fam = body if isinstance(body, DoubleIndexed) else DoubleIndexed((), body)
    return _double_sup_value(fam, eval_term(cap_term, v), v)


# ---------------------------------------------------------------------------
# Independent oracle
# ---------------------------------------------------------------------------


def truncated_sup(t: CSup, v: Valuation, N: int):
    """``max_{n <= N} (f_n /\\ g)`` (pairs ``n, k <= N`` for double families).

    Members are evaluated pointwise at each integer index; no piecewise-linear
    analysis is involved.
    """
    if not isinstance(t, CSup):
        raise EvaluationError("truncated_sup needs a csup term")
    if N < 1:
        raise ValueError("N must be positive")
    cap = eval_term(t.bound, v)
    fam = t.family
    if isinstance(fam, EventuallyConstant):
        members = (fam.prefix[n - 1] if n <= len(fam.prefix) else fam.tail for n in range(1, N + 1))
        return max(min(eval_term(m, v), cap) for m in members)
    if isinstance(fam, IndexedPL):
        return max(min(eval_term(fam.body, v, index=n), cap) for n in range(1, N + 1))
    if isinstance(fam, DoubleIndexed):
        best = None
        for n in range(1, N + 1):
            if n <= len(fam.head):
                c = eval_term(fam.head[n - 1], v)
            elif fam.body is None:
                c = eval_term(fam.head[-1], v)
            else:
                c = eval_term(fam.body, v, index=n - len(fam.head))
            for k in range(1, N + 1):
                val = min(k * c, cap)
                if best is None or val > best:
                    best = val
        return best
    raise EvaluationError(f"malformed family {fam!r}")


def brute_force_sup(values: Sequence, cap):
    """Plain ``max(min(x, cap))`` over an explicit finite list."""
    return max(min(x, cap) for x in values)
