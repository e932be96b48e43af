import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigmacomplete.rationals import Q
from sigmacomplete.syntax import ParseError, format_equation, format_quasi, format_term, parse, parse_equation, parse_term
from sigmacomplete.terms import (
    Add,
    CSup,
    DoubleIndexed,
    Equation,
    EventuallyConstant,
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
    SignatureError,
    Var,
    Zero,
    abs_,
    accepts,
    check_term,
    constant_family,
    free_vars,
    member,
    shift_family,
    signatures_accepting,
    subterms,
    substitute,
)

from strategies import families, terms

x, y, z, f, g, h = (Var(n) for n in "xyzfgh")


# -- construction ------------------------------------------------------------


def test_index_expr_rejects_zero_expression():
    with pytest.raises(ValueError):
        IndexExpr(0, 0)
    with pytest.raises(ValueError):
        IndexExpr(-1, 2)


def test_index_expr_value_and_shift():
    e = IndexExpr(2, 1)
    assert [e.value(n) for n in (1, 2, 3)] == [3, 5, 7]
    assert e.shifted(2) == IndexExpr(2, 5)
    assert IndexExpr(0, 4).is_constant


def test_scalar_is_exact_rational():
    t = ScalarMul("3/6", x)
    assert t.q == Q(1, 2)


def test_operator_sugar():
    assert (x & y) == Meet(x, y)
    assert (x | y) == Join(x, y)
    assert (x - y) == Add(x, Neg(y))
    assert abs_(x) == Join(x, Neg(x))


# -- parsing -----------------------------------------------------------------


def test_parse_meet():
    assert parse_term("x /\\ y") == Meet(x, y)


def test_parse_weak_unit_left_side():
    t = parse_term("csup[g](n : abs(f) /\\ n*one)", "lgu")
    assert t == CSup(g, IndexedPL(Meet(abs_(f), NatScale(IndexExpr(1, 0), One()))))


def test_one_rejected_under_lg():
    with pytest.raises(SignatureError):
        parse_term("1", "lg")
    with pytest.raises(SignatureError):
        parse_term("one /\\ x", "rs")


def test_scalar_rejected_without_scalars():
    with pytest.raises(SignatureError):
        parse_term("2*x", "lgu")
    assert parse_term("2*x", "rs") == ScalarMul(Q(2), x)


def test_precedence():
    # + is loosest, then \/, then /\
    assert parse_term("x + y \\/ z /\\ x") == Add(x, Join(y, Meet(z, x)))
    assert parse_term("-x /\\ y") == Meet(Neg(x), y)
    assert parse_term("1/2*x /\\ y") == Meet(ScalarMul(Q(1, 2), x), y)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_term("x /\\ (y")
    assert info.value.position == 7


@pytest.mark.parametrize("text", ["", "x +", "csup[g](x)", "n*x", "x y", "2/0*x", "csup[g](n : csup[g](n : n*x))"])
def test_malformed_inputs_rejected(text):
    with pytest.raises((ParseError, IndexUsageError, ValueError, ZeroDivisionError)):
        parse_term(text)


def test_index_only_inside_bodies():
    with pytest.raises(IndexUsageError):
        check_term(NatScale(IndexExpr(1, 0), x), "lg")


def test_families_parse():
    ec = parse_term("csup[g]([a, b] ~ c)")
    assert ec.family == EventuallyConstant((Var("a"), Var("b")), Var("c"))
    pl = parse_term("csup[g](n : (2*n+1)*x + -(n*y))")
    assert pl.family == IndexedPL(Add(NatScale(IndexExpr(2, 1), x), Neg(NatScale(IndexExpr(1, 0), y))))
    d = parse_term("csup[g](n, k : [abs(x)] ++ abs(n*y))")
    assert d.family == DoubleIndexed((abs_(x),), abs_(NatScale(IndexExpr(1, 0), y)))


def test_inequality_desugars_to_meet_form():
    assert parse_equation("x <= y", "lg") == Equation(Meet(x, y), x, Signature.LG)


def test_quasi_equation_parse():
    qe = parse("a \\/ 0 = a ; n : (n*a) /\\ b = n*a => a = 0", "lg")
    a, b = Var("a"), Var("b")
    na = NatScale(IndexExpr(1, 0), a)
    assert qe == QuasiEquation(((Join(a, Zero()), a),), (Meet(na, b), na), (a, Zero()), Signature.LG)


def test_only_one_indexed_premise():
    with pytest.raises(ParseError):
        parse("n : n*a = 0 ; n : n*b = 0 => a = b", "lg")


def test_unicode_operators():
    assert parse_term("x ∧ y ∨ z") == Join(Meet(x, y), z)


# -- printing and round trip -------------------------------------------------


def test_printer_resugars():
    assert format_term(Join(x, Neg(x))) == "abs(x)"
    assert format_term(Join(x, Zero())) == "pos(x)"
    assert format_term(Join(Neg(x), Zero())) == "neg(x)"


def test_scalar_of_index_multiple_prints_unambiguously():
    body = ScalarMul(Q(2), NatScale(IndexExpr(1, 0), x))
    t = CSup(g, IndexedPL(body))
    assert parse_term(format_term(t)) == t


@given(terms(unit=True, scalars=True))
def test_round_trip_terms(t):
    assert parse_term(format_term(t), "rsu") == t


@given(terms(), terms())
def test_round_trip_equations(a, b):
    eq = Equation(a, b, Signature.LG)
    assert parse_equation(format_equation(eq), "lg") == eq


def test_round_trip_quasi():
    text = "x /\\ y = 0 ; n : n*x /\\ y = n*x => x = 0"
    qe = parse(text, "lg")
    assert parse(format_quasi(qe), "lg") == qe


# -- signatures --------------------------------------------------------------


@given(terms(unit=True, scalars=True))
def test_signature_check_is_exact(t):
    kinds = list(subterms(t))
    uses_one = any(isinstance(s, One) for s in kinds)
    uses_scalar = any(isinstance(s, ScalarMul) for s in kinds)
    expected = {s for s in Signature if (s.has_unit or not uses_one) and (s.has_scalars or not uses_scalar)}
    assert signatures_accepting(t) == expected
    for s in Signature:
        assert accepts(t, s) == (s in expected)


# -- families ----------------------------------------------------------------


def test_shift_eventually_constant():
    a, b, c, d = (Var(n) for n in "abcd")
    assert shift_family(EventuallyConstant((a, b, c), d), 2) == EventuallyConstant((c,), d)
    assert shift_family(EventuallyConstant((a,), d), 5) == EventuallyConstant((), d)


def test_shift_indexed():
    fam = IndexedPL(NatScale(IndexExpr(1, 0), x))
    assert shift_family(fam, 1) == IndexedPL(NatScale(IndexExpr(1, 1), x))


def test_shift_constant_family_is_invariant():
    fam = constant_family(x)
    assert shift_family(fam, 5) == fam


@given(families(), st.integers(1, 4), st.integers(1, 4))
def test_shift_composes(fam, j, k):
    assert shift_family(shift_family(fam, j), k) == shift_family(fam, j + k)


@given(families(), st.integers(1, 4), st.integers(1, 4))
def test_shift_moves_members(fam, j, n):
    assert member(shift_family(fam, j), n) == member(fam, n + j)


def test_members_of_indexed_family():
    fam = IndexedPL(Meet(abs_(f), NatScale(IndexExpr(1, 0), One())))
    assert member(fam, 3) == Meet(abs_(f), Add(Add(One(), One()), One()))


# -- variables and substitution ---------------------------------------------


def test_free_vars_of_a3():
    eq = parse_equation("csup[g](n : n*f1 /\\ h) <= h", "lg")
    assert free_vars(eq) == {"f1", "g", "h"}


def test_substitute_simple():
    assert substitute(Meet(x, y), {"x": Zero()}) == Meet(Zero(), y)


def test_substitute_into_bound():
    a, b = Var("a"), Var("b")
    t = CSup(g, IndexedPL(NatScale(IndexExpr(1, 0), x)))
    out = substitute(t, {"g": abs_(a - b)})
    assert out.bound == abs_(a - b)
    assert out.family == t.family


def test_substitute_rejects_index_dependent_replacement():
    with pytest.raises(IndexUsageError):
        substitute(Meet(x, y), {"x": NatScale(IndexExpr(1, 0), y)})
