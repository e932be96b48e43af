"""Consequences of the axioms, packaged as equations and quasi-equations.

Each builder returns statements that can be fed to the checkers in
:mod:`sigmacomplete.logic`, in the reals or in a finite quotient model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple, Union

from .logic import FAMILY_TEMPLATES, family_template, ineq_to_eq
from .syntax import parse
from .terms import (
    CSup,
    Equation,
    FamilySpec,
    IndexedPL,
    Join,
    Meet,
    QuasiEquation,
    Signature,
    Var,
    map_family,
    member,
    neg_part,
    shift_family,
    times,
)

Statement = Union[Equation, QuasiEquation]


@dataclass(frozen=True)
class Lemma:
    name: str
    statements: Tuple[Tuple[str, Statement], ...]
    # "lgu" statements mention the unit and only make sense in unital models
    signature: Signature = Signature.LG


def upper_bound_instances(fam: FamilySpec, k: int, signature: Signature = Signature.LG) -> Equation:
    """``f_k /\\ g <= csup[g](f)``: the csup bounds every member."""
    g = Var("g")
    return ineq_to_eq(Meet(member(fam, k), g), CSup(g, fam), signature)


def a2_unfolded(fam: FamilySpec, k: int, signature: Signature = Signature.LG) -> Equation:
    """Iterating the head-splitting axiom ``k`` times."""
    g = Var("g")
    rhs = CSup(g, shift_family(fam, k))
    for j in range(k, 0, -1):
        rhs = Join(Meet(member(fam, j), g), rhs)
    return Equation(CSup(g, fam), rhs, signature)


def least_upper_bound(fam: FamilySpec, signature: Signature = Signature.LG) -> QuasiEquation:
    """If ``h`` bounds every ``f_n /\\ g`` then it bounds the csup."""
    g, h = Var("g"), Var("h")
    conclusion = (Meet(CSup(g, fam), h), CSup(g, fam))
    if isinstance(fam, IndexedPL):
        body = Meet(fam.body, g)
        return QuasiEquation((), (Meet(body, h), body), conclusion, signature)
    members = [member(fam, n) for n in range(1, len(fam.prefix) + 2)]
    premises = tuple((Meet(Meet(f, g), h), Meet(f, g)) for f in members)
    return QuasiEquation(premises, None, conclusion, signature)


def minus_distributes(n: int) -> Equation:
    """``(n a)^- = n a^-``."""
    a = Var("a")
    return Equation(neg_part(times(n, a)), times(n, neg_part(a)), Signature.LG)


def disjoint_sum() -> QuasiEquation:
    return parse("a /\\ c = 0 ; b /\\ c = 0 => (a + b) /\\ c = 0", Signature.LG)


def unit_nonnegative() -> Equation:
    return parse("0 <= 1", Signature.LGU)


def unit_is_weak() -> QuasiEquation:
    return parse("f /\\ 1 = 0 => f = 0", Signature.LGU)


def positive_is_sup_of_truncations() -> QuasiEquation:
    return parse("0 <= f => f = csup[f](n : f /\\ n*1)", Signature.LGU)


def meet_distributes_finite(k: int) -> Equation:
    """``a /\\ (x1 \\/ ... \\/ xk) = (a /\\ x1) \\/ ... \\/ (a /\\ xk)``."""
    a = Var("a")
    xs = [Var(f"x{i}") for i in range(1, k + 1)]
    lhs_join = xs[0]
    rhs = Meet(a, xs[0])
    for x in xs[1:]:
        lhs_join = Join(lhs_join, x)
        rhs = Join(rhs, Meet(a, x))
    return Equation(Meet(a, lhs_join), rhs, Signature.LG)


def meet_distributes_csup(fam: FamilySpec) -> Equation:
    """``a /\\ csup[g](f) = csup[a /\\ g](a /\\ f)``, the countable form."""
    a, g = Var("a"), Var("g")
    return Equation(Meet(a, CSup(g, fam)), CSup(Meet(a, g), map_family(fam, lambda b: Meet(a, b))), Signature.LG)


def archimedean() -> QuasiEquation:
    return parse("a \\/ 0 = a ; n : (n*a) /\\ b = n*a => a = 0", Signature.LG)


def sup_characterization() -> QuasiEquation:
    """With ``g`` bounding a finite family, ``g = csup[g](f)`` pins ``g`` to the supremum."""
    return parse(
        "g = csup[g]([f1, f2] ~ f3) ; f1 /\\ g = f1 ; f2 /\\ g = f2 ; f3 /\\ g = f3 => g = f1 \\/ f2 \\/ f3",
        Signature.LG,
    )


def meet_distributes_indexed() -> QuasiEquation:
    """If ``b`` is the supremum of ``c - n d`` then ``a /\\ b`` is the supremum of ``a /\\ (c - n d)``."""
    return parse(
        "b = csup[b](n : c + -(n*d)) ; n : (c + -(n*d)) /\\ b = c + -(n*d)"
        " => a /\\ b = csup[a /\\ b](n : a /\\ (c + -(n*d)))",
        Signature.LG,
    )


def templates() -> List[Tuple[str, FamilySpec]]:
    return [(tag, family_template(text, Signature.LG)) for tag, text in FAMILY_TEMPLATES.items()]


def catalogue(max_k: int = 5, max_n: int = 20) -> List[Lemma]:
    """Every derived statement checked by the regression suite."""
    fams = templates()
    return [
        Lemma(
            "csup_bounds_members",
            tuple((f"{tag}[k={k}]", upper_bound_instances(fam, k)) for tag, fam in fams for k in range(1, max_k + 1))
            + tuple((f"{tag}[unfold={k}]", a2_unfolded(fam, k)) for tag, fam in fams for k in (2, 3)),
        ),
        Lemma("csup_is_least", tuple((tag, least_upper_bound(fam)) for tag, fam in fams)),
        Lemma("negative_part_of_multiple", tuple((f"n={n}", minus_distributes(n)) for n in range(1, max_n + 1))),
        Lemma("sum_of_disjoint", (("main", disjoint_sum()),)),
        Lemma("unit_is_weak", (("nonnegative", unit_nonnegative()), ("weak", unit_is_weak())), Signature.LGU),
        Lemma("unit_truncations", (("main", positive_is_sup_of_truncations()),), Signature.LGU),
        Lemma(
            "meet_distributes",
            tuple((f"finite[k={k}]", meet_distributes_finite(k)) for k in range(1, max_k + 1))
            + tuple((f"csup[{tag}]", meet_distributes_csup(fam)) for tag, fam in fams)
            + (("indexed", meet_distributes_indexed()),),
        ),
        Lemma("archimedean", (("main", archimedean()),)),
        Lemma("sup_characterization", (("main", sup_characterization()),)),
    ]
