import random
from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmacomplete.generate import random_quasi
from sigmacomplete.logic import (
    CheckConfig,
    CheckError,
    Counterexample,
    ExactlyVerified,
    NoCounterexampleFound,
    axiom_suite,
    check_equation,
    check_equation_in_model,
    check_quasi_direct,
    check_quasi_in_model,
    check_suite,
    compile_quasi,
    ineq_to_eq,
    premises_hold,
    replay,
)
from sigmacomplete.models import IdealOfSubsets, ModelError, QuotientModel
from sigmacomplete.rationals import Q
from sigmacomplete.semantics import eval_term
from sigmacomplete.syntax import format_equation, parse, parse_equation, parse_term
from sigmacomplete.terms import CSup, DoubleIndexed, Equation, Join, Meet, Signature, Var, Zero, abs_, diff

ARCHIMEDEAN = "a \\/ 0 = a ; n : (n*a) /\\ b = n*a => a = 0"


# -- axiom suites -------------------------------------------------------------


def test_lg_suite_contents():
    suite = axiom_suite("lg")
    names = suite.names()
    for required in ("add_assoc", "add_comm", "add_zero", "add_inverse", "meet_absorb", "join_idem", "translation"):
        assert required in names
    for tag in ("ec", "pl", "pl2"):
        for ax in ("A1", "A2", "A3"):
            assert f"{ax}[{tag}]" in names


def test_a3_is_in_meet_form():
    eq = axiom_suite("lg")["A3[ec]"]
    assert isinstance(eq.lhs, Meet) and eq.lhs.a == eq.rhs
    assert eq.lhs.b == Var("h")


def test_unit_adds_one_axiom():
    lg, lgu = axiom_suite("lg"), axiom_suite("lgu")
    assert len(lgu) == len(lg) + 1
    assert set(lgu.names()) - set(lg.names()) == {"weak_unit"}


def test_suite_inclusions():
    def eqs(tag):
        return {(name, format_equation(eq)) for name, eq in axiom_suite(tag)}

    assert eqs("lg") <= eqs("rs") <= eqs("rsu")
    assert eqs("lgu") <= eqs("rsu")


def test_scalar_axioms_only_with_scalars():
    assert not any(n.startswith("scalar") for n in axiom_suite("lgu").names())
    assert any(n.startswith("scalar_join") for n in axiom_suite("rs").names())


def test_a2_uses_shifted_family():
    eq = axiom_suite("lg")["A2[ec]"]
    assert format_equation(eq) == "csup[g]([f1, f2, f3] ~ f4) = f1 /\\ g \\/ csup[g]([f2, f3] ~ f4)"


@pytest.mark.parametrize("tag", ["lg", "lgu", "rs", "rsu"])
def test_suites_hold_in_reals(tag):
    report = check_suite(axiom_suite(tag), CheckConfig(trials=300, seed=1))
    assert report.ok, report.failures()


# -- checking equations -------------------------------------------------------


def test_bogus_csup_equation_has_counterexample():
    eq = parse_equation("csup[g]([] ~ 0) = g", "lg")
    verdict = check_equation(eq, trials=100, seed=0)
    assert isinstance(verdict, Counterexample)
    lhs, rhs = replay(eq, verdict.valuation)
    assert lhs != rhs
    assert check_equation(eq, trials=100, seed=0) == verdict


def test_bogus_csup_equation_at_one():
    eq = parse_equation("csup[g]([] ~ 0) = g", "lg")
    assert replay(eq, {"g": Q(1)}) == (0, 1)


def test_upper_bound_lemma_instance():
    eq = parse_equation("f1 /\\ g <= csup[g]([f1, f2] ~ f3)", "lg")
    assert isinstance(check_equation(eq, trials=500, seed=2), NoCounterexampleFound)


def test_closed_equations_are_decided_exactly():
    assert isinstance(check_equation(parse_equation("0 <= 1", "lgu")), ExactlyVerified)
    bad = check_equation(parse_equation("1 <= 0", "lgu"))
    assert isinstance(bad, Counterexample) and (bad.lhs_value, bad.rhs_value) == (0, 1)


def test_inequality_helper():
    a = Var("a")
    assert ineq_to_eq(a, a) == Equation(Meet(a, a), a, Signature.RSU)
    assert isinstance(check_equation(ineq_to_eq(a, a), trials=50), NoCounterexampleFound)


def test_boundary_values_are_sampled():
    # fails only at x = 0, where the supremum jumps
    eq = parse_equation("csup[one](n : n*abs(x)) = one", "lgu")
    verdict = check_equation(eq, trials=30, seed=9)
    assert isinstance(verdict, Counterexample)
    assert verdict.valuation == {"x": 0}


def test_evaluation_errors_report_the_valuation():
    lhs = CSup(Var("c"), DoubleIndexed((Var("x"),)))
    eq = Equation(lhs, lhs, Signature.LG)
    with pytest.raises(CheckError) as info:
        check_equation(eq, trials=50, seed=1)
    assert "x" in info.value.valuation


@given(st.integers(0, 2**64 - 1))
@settings(max_examples=10)
def test_verdicts_are_deterministic(seed):
    eq = parse_equation("x /\\ y = x", "lg")
    assert check_equation(eq, trials=40, seed=seed) == check_equation(eq, trials=40, seed=seed)


# -- checking in models ---------------------------------------------------------


def test_weak_unit_axiom_in_two_point_model():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")), unit=(1, 1))
    eq = axiom_suite("lgu")["weak_unit"]
    assert check_equation_in_model(eq, model, trials=200, seed=3).ok


def test_a1_in_zero_model():
    model = QuotientModel(("a",), IdealOfSubsets.principal(("a",), ("a",)))
    assert check_equation_in_model(axiom_suite("lg")["A1[pl]"], model, trials=50).ok


def test_unenriched_model_rejects_csup_equations():
    model = QuotientModel(("a",), IdealOfSubsets.trivial(("a",)), enriched=False)
    with pytest.raises(ModelError):
        check_equation_in_model(axiom_suite("lg")["A1[ec]"], model, trials=5)
    assert check_equation_in_model(axiom_suite("lg")["translation"], model, trials=50).ok


@dataclass(frozen=True)
class SkewedMeet(QuotientModel):
    """Meet computed as in a lexicographic order on the first two coordinates."""

    def meet(self, a, b):
        pick = a if (a.values[0], a.values[1]) <= (b.values[0], b.values[1]) else b
        return pick


def test_broken_operation_table_is_caught():
    model = SkewedMeet(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    verdict = check_equation_in_model(axiom_suite("lg")["translation"], model, trials=200, seed=4)
    verdict2 = check_equation_in_model(parse_equation("x /\\ y = -(-x \\/ -y)", "lg"), model, trials=200, seed=4)
    assert verdict.ok  # translation survives a total order
    assert isinstance(verdict2, Counterexample)


# -- quasi-equations ------------------------------------------------------------


def test_compile_archimedean():
    qe = parse(ARCHIMEDEAN, "lg")
    eq = compile_quasi(qe)
    a, b = Var("a"), Var("b")
    cap = abs_(diff(a, Zero()))
    assert eq.rhs == cap
    assert eq.lhs.bound == cap
    assert eq.lhs.family.head == (abs_(diff(Join(a, Zero()), a)),)
    assert check_equation(eq, trials=500, seed=5).ok


def test_compile_premise_equal_to_conclusion():
    qe = parse("a = b => a = b", "lg")
    eq = compile_quasi(qe)
    for a in (Q(-1), Q(0), Q(3, 2)):
        for b in (Q(-1), Q(2)):
            v = {"a": a, "b": b}
            assert eval_term(eq.lhs, v) == eval_term(eq.rhs, v)


def test_compile_trivial_premise():
    eq = compile_quasi(parse("0 = 0 => x = 0", "lg"))
    assert eval_term(eq.lhs, {"x": Q(1)}) == 0
    assert eval_term(eq.rhs, {"x": Q(1)}) == 1
    assert isinstance(check_equation(eq, trials=20, seed=0), Counterexample)


def test_compile_without_premises_uses_trivial_premise():
    a = compile_quasi(parse("=> x = 0", "lg"))
    b = compile_quasi(parse("0 = 0 => x = 0", "lg"))
    assert a == b


def test_direct_check_at_origin():
    qe = parse(ARCHIMEDEAN, "lg")
    assert premises_hold(qe, {"a": Q(0), "b": Q(0)}).hold


def test_direct_check_skips_failing_premise():
    qe = parse(ARCHIMEDEAN, "lg")
    status = premises_hold(qe, {"a": Q(1), "b": Q(5)})
    assert not status.hold
    # the one finite premise comes first, then n = 6 fails: 6 /\ 5 != 6
    assert status.failing_index == 1 + 6


def test_sup_characterization_on_finite_families():
    qe = parse("g = csup[g]([f1, f2] ~ f3) ; f1 /\\ g = f1 ; f2 /\\ g = f2 ; f3 /\\ g = f3 => g = f1 \\/ f2 \\/ f3", "lg")
    verdict = check_quasi_direct(qe, trials=2000, seed=6)
    assert verdict.ok and verdict.premises_held > 0


def test_direct_and_compiled_agree_on_fixtures():
    for text in (ARCHIMEDEAN, "0 = 0 => x = 0", "x = y => x = y", "x /\\ y = 0 => x = 0"):
        qe = parse(text, "lg")
        cfg = CheckConfig(500, 7)
        assert check_quasi_direct(qe, cfg).ok == check_equation(compile_quasi(qe), cfg).ok


@given(st.integers(0, 10_000), st.integers(0, 10_000))
@settings(max_examples=60)
def test_compiled_equation_matches_premises_pointwise(qseed, vseed):
    qe = random_quasi(random.Random(qseed))
    eq = compile_quasi(qe)
    rng = random.Random(vseed)
    v = {x: Q(rng.randint(-6, 6), rng.choice([1, 2])) for x in "abc"}
    lhs, rhs = eval_term(eq.lhs, v), eval_term(eq.rhs, v)
    conclusion_holds = eval_term(qe.conclusion[0], v) == eval_term(qe.conclusion[1], v)
    if premises_hold(qe, v).hold:
        # premises hold: the family is 0, so the equation says the conclusion holds
        assert lhs == 0
        assert (lhs == rhs) == conclusion_holds
    else:
        assert lhs == rhs


def test_quasi_in_model():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    qe = parse("x /\\ one = 0 => x = 0", "lgu")
    assert check_quasi_in_model(qe, model, trials=300, seed=8).ok
    bogus = parse("x /\\ y = 0 => x = 0", "lg")
    assert isinstance(check_quasi_in_model(bogus, model, trials=300, seed=8), Counterexample)
