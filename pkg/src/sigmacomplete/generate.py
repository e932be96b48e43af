"""Random terms, family bodies and quasi-equations for randomized checks."""

from __future__ import annotations

import random
from typing import Sequence

from .rationals import Q
from .terms import (
    Add,
    CSup,
    EventuallyConstant,
    IndexedPL,
    IndexExpr,
    Join,
    Meet,
    NatScale,
    Neg,
    One,
    QuasiEquation,
    ScalarMul,
    Signature,
    Term,
    Var,
    Zero,
)

SCALARS = (Q(2), Q(-1), Q(1, 2), Q(-3, 2), Q(3), Q(2, 3), Q(0))


def random_leaf(rng: random.Random, names: Sequence[str], unit: bool) -> Term:
    r = rng.random()
    if r < 0.1:
        return Zero()
    if unit and r < 0.2:
        return One()
    return Var(rng.choice(list(names)))


def random_term(
    rng: random.Random,
    names: Sequence[str],
    depth: int = 3,
    unit: bool = False,
    scalars: bool = False,
    csup: bool = False,
) -> Term:
    """A random index-free term of height at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        return random_leaf(rng, names, unit)
    ops = ["neg", "add", "meet", "join", "meet", "join"]
    if scalars:
        ops.append("scalar")
    if csup:
        ops += ["csup", "csup"]
    op = rng.choice(ops)
    sub = lambda: random_term(rng, names, depth - 1, unit, scalars, csup)  # noqa: E731
    if op == "neg":
        return Neg(sub())
    if op == "scalar":
        return ScalarMul(rng.choice(SCALARS), sub())
    if op == "csup":
        bound = random_term(rng, names, depth - 1, unit, scalars, False)
        return CSup(bound, random_family(rng, names, depth - 1, unit, scalars))
    cls = {"add": Add, "meet": Meet, "join": Join}[op]
    return cls(sub(), sub())


def random_index_expr(rng: random.Random) -> IndexExpr:
    alpha = rng.randint(0, 3)
    beta = rng.randint(0 if alpha else 1, 3)
    return IndexExpr(alpha, beta)


def random_body(rng: random.Random, names: Sequence[str], depth: int = 3, unit: bool = False, scalars: bool = False) -> Term:
    """A random indexed family body: index multiples combined by lattice-group operations."""
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.7:
            e = IndexExpr(1, 0) if rng.random() < 0.4 else random_index_expr(rng)
            return NatScale(e, random_term(rng, names, 1, unit, scalars))
        return random_leaf(rng, names, unit)
    ops = ["neg", "add", "add", "meet", "join"]
    if scalars:
        ops.append("scalar")
    op = rng.choice(ops)
    sub = lambda: random_body(rng, names, depth - 1, unit, scalars)  # noqa: E731
    if op == "neg":
        return Neg(sub())
    if op == "scalar":
        return ScalarMul(rng.choice(SCALARS), sub())
    cls = {"add": Add, "meet": Meet, "join": Join}[op]
    return cls(sub(), sub())


def random_family(rng: random.Random, names: Sequence[str], depth: int = 2, unit: bool = False, scalars: bool = False):
    if rng.random() < 0.4:
        prefix = tuple(random_term(rng, names, depth, unit, scalars) for _ in range(rng.randint(0, 3)))
        return EventuallyConstant(prefix, random_term(rng, names, depth, unit, scalars))
    return IndexedPL(random_body(rng, names, max(depth, 1), unit, scalars))


def random_quasi(rng: random.Random, names: Sequence[str] = ("a", "b", "c"), signature: Signature = Signature.LG) -> QuasiEquation:
    """A quasi-equation with up to two finite premises and an indexed premise family."""
    unit, scalars = signature.has_unit, signature.has_scalars
    finite = tuple(
        (random_term(rng, names, 2, unit, scalars), random_term(rng, names, 2, unit, scalars))
        for _ in range(rng.randint(0, 2))
    )
    indexed = (random_body(rng, names, 2, unit, scalars), random_body(rng, names, 2, unit, scalars))
    conclusion = (random_term(rng, names, 2, unit, scalars), random_term(rng, names, 2, unit, scalars))
    return QuasiEquation(finite, indexed, conclusion, signature)
