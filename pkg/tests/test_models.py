import itertools
from dataclasses import dataclass

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigmacomplete.models import (
    FiniteIndexSet,
    IdealOfSubsets,
    ModelElement,
    ModelError,
    ModelMorphism,
    QuotientModel,
    all_ideals,
    check_homomorphism,
    check_sigma_continuity,
    check_weak_unit,
    compare_enrichments,
    eval_in_model,
    ideal_closure,
    normalize_unit,
    positive_representative,
    quotient_model,
    same_class,
)
from sigmacomplete.rationals import Q
from sigmacomplete.semantics import eval_term
from sigmacomplete.syntax import parse_term
from sigmacomplete.terms import CSup, EventuallyConstant, Meet, Var

from strategies import index_free_terms, rationals, terms

ABC = ("a", "b", "c")


def subsets(ground):
    return [frozenset(c) for r in range(len(ground) + 1) for c in itertools.combinations(ground, r)]


def is_ideal(ground, family):
    return (
        frozenset() in family
        and all(s in family for m in family for s in subsets(sorted(m)))
        and all(a | b in family for a in family for b in family)
    )


# -- ideals ------------------------------------------------------------------


def test_closure_of_single_point():
    assert ideal_closure(ABC, [["c"]]).members == {frozenset(), frozenset("c")}


def test_closure_of_nothing():
    assert ideal_closure(ABC, []).members == {frozenset()}


def test_closure_of_two_points():
    assert ideal_closure(ABC, [["a"], ["b"]]).members == {frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")}


def test_closure_rejects_foreign_generator():
    with pytest.raises(ModelError):
        ideal_closure(ABC, [["d"]])


def test_ideal_validation():
    with pytest.raises(ModelError):
        IdealOfSubsets(ABC, frozenset([frozenset("ab")]))
    with pytest.raises(ModelError):
        IdealOfSubsets(ABC, frozenset([frozenset(), frozenset("a"), frozenset("b")]))


@pytest.mark.parametrize("size", [0, 1, 2, 3])
def test_all_ideals_matches_brute_force(size):
    ground = [str(i) for i in range(size)]
    families = [frozenset(c) for r in range(len(subsets(ground)) + 1) for c in itertools.combinations(subsets(ground), r)]
    expected = {fam for fam in families if is_ideal(ground, fam)}
    assert {i.members for i in all_ideals(ground)} == expected


@given(st.lists(st.lists(st.sampled_from(ABC), max_size=3), max_size=3))
def test_closure_is_smallest_ideal(gens):
    closed = ideal_closure(ABC, gens).members
    assert is_ideal(ABC, closed)
    for fam in (i.members for i in all_ideals(ABC)):
        if all(frozenset(g) in fam for g in gens):
            assert closed <= fam


# -- quotients ---------------------------------------------------------------


def test_trivial_ideal_quotient_is_identity():
    model, q = quotient_model(ABC, IdealOfSubsets.trivial(ABC))
    assert model.support == ABC
    f = ModelElement(ABC, (Q(1), Q(-2), Q(3)))
    assert q(f) == f


def test_quotient_drops_ideal_points():
    model, q = quotient_model(ABC, ideal_closure(ABC, [["c"]]))
    assert model.support == ("a", "b")
    assert q(ModelElement(ABC, (Q(1), Q(2), Q(9)))) == ModelElement(("a", "b"), (Q(1), Q(2)))


def test_full_ideal_gives_zero_model():
    model, q = quotient_model(ABC, IdealOfSubsets.principal(ABC, ABC))
    assert model.support == ()
    assert q(ModelElement(ABC, (Q(1), Q(2), Q(3)))) == model.zero()


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_quotient_map_identifies_exactly_the_ideal_classes(size):
    ground = [str(i) for i in range(size)]
    grid = list(itertools.product([Q(0), Q(1)], repeat=size))
    for ideal in all_ideals(ground):
        _, q = quotient_model(ground, ideal)
        for f, g in itertools.product(grid, repeat=2):
            fe, ge = ModelElement(tuple(ground), f), ModelElement(tuple(ground), g)
            assert (q(fe) == q(ge)) == same_class(ideal, dict(zip(ground, f)), dict(zip(ground, g)))


# -- evaluation in models -----------------------------------------------------


def test_pointwise_absolute_value():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    x = model.element([3, -2])
    assert eval_in_model(parse_term("abs(x)"), {"x": x}, model) == model.element([3, 2])


def test_weak_unit_term_in_model():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")), unit=(1, 1))
    t = parse_term("csup[abs(f)](n : abs(f) /\\ n*one)", "lgu")
    assert eval_in_model(t, {"f": model.element(["-7/2", 4])}, model) == model.element(["7/2", 4])


def test_non_standard_unit_is_used_inside_families():
    model = QuotientModel(("a",), IdealOfSubsets.trivial(("a",)), unit=("1/4",))
    t = parse_term("csup[x](n : n*one)", "lgu")
    # sup_n min(n/4, x) at x = 3/8
    assert eval_in_model(t, {"x": model.element(["3/8"])}, model) == model.element(["3/8"])
    t2 = parse_term("csup[x]([one] ~ 0)", "lgu")
    assert eval_in_model(t2, {"x": model.element([5])}, model) == model.element(["1/4"])


@given(terms(unit=True, scalars=True), st.fixed_dictionaries({k: rationals for k in "xyz"}))
def test_single_point_model_agrees_with_reals(t, v):
    model = QuotientModel(("p",), IdealOfSubsets.trivial(("p",)))
    env = {k: model.element([q]) for k, q in v.items()}
    assert eval_in_model(t, env, model).values == (eval_term(t, v),)


def test_csup_requires_enrichment():
    model = QuotientModel(ABC, IdealOfSubsets.trivial(ABC), enriched=False)
    with pytest.raises(ModelError):
        eval_in_model(parse_term("csup[x]([y] ~ y)"), {"x": model.zero(), "y": model.zero()}, model)


@given(terms(scalars=True), st.lists(st.fixed_dictionaries({k: rationals for k in "xyz"}), min_size=2, max_size=2))
def test_forget_then_enrich_restores_operations(t, rows):
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    restored = model.forget().enrich()
    assert restored == model
    env = {k: model.element([rows[0][k], rows[1][k]]) for k in "xyz"}
    assert eval_in_model(t, env, restored) == eval_in_model(t, env, model)


def test_forget_keeps_finitary_operations():
    model = QuotientModel(ABC, ideal_closure(ABC, [["b"]]))
    plain = model.forget()
    a, b = model.element([1, -3]), model.element(["1/2", 4])
    assert plain.support == model.support
    for op in ("add", "meet", "join"):
        assert getattr(plain, op)(a, b) == getattr(model, op)(a, b)


@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=4), st.tuples(rationals, rationals))
def test_csup_is_supremum_of_capped_members(members, bound):
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    names = [f"f{i}" for i in range(len(members))]
    env = {n: model.element(list(m)) for n, m in zip(names, members)}
    env["g"] = model.element(list(bound))
    fam = EventuallyConstant(tuple(Var(n) for n in names[:-1]), Var(names[-1]))
    got = eval_in_model(CSup(Var("g"), fam), env, model)
    want = tuple(max(min(m[i], bound[i]) for m in members) for i in range(2))
    assert got.values == want


@given(st.lists(st.tuples(rationals, rationals), min_size=1, max_size=4), st.tuples(rationals, rationals))
def test_meet_distributes_over_finite_suprema(xs, a):
    sup = tuple(max(x[i] for x in xs) for i in range(2))
    lhs = tuple(min(a[i], sup[i]) for i in range(2))
    rhs = tuple(max(min(a[i], x[i]) for x in xs) for i in range(2))
    assert lhs == rhs


@given(st.tuples(rationals, rationals), st.tuples(rationals, rationals))
def test_positive_element_is_sup_of_truncations_by_weak_unit(f, e):
    f = tuple(abs(v) for v in f)
    e = tuple(abs(v) + Q(1, 4) for v in e)
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")), unit=e)
    t = parse_term("csup[f](n : f /\\ n*one)", "lgu")
    assert eval_in_model(t, {"f": model.element(list(f))}, model).values == f


# -- enrichment routes --------------------------------------------------------


def test_enrichment_routes_agree_on_trivial_ideal():
    assert compare_enrichments(ABC, IdealOfSubsets.trivial(ABC), trials=200, seed=1).ok


def test_enrichment_routes_ignore_hidden_coordinate():
    ideal = ideal_closure(ABC, [["c"]])
    t = parse_term("csup[g]([x] ~ y)")
    report = compare_enrichments(ABC, ideal, trials=50, seed=2, terms=[t])
    assert report.ok and report.trials == 50


def test_enrichment_routes_agree_on_all_small_ideals():
    for ideal in all_ideals(ABC):
        assert compare_enrichments(ABC, ideal, trials=60, seed=3).ok


# -- weak units --------------------------------------------------------------


def test_all_ones_is_weak_unit():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    assert check_weak_unit(model, model.one()).is_weak_unit


def test_vanishing_coordinate_is_not_weak_unit():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    verdict = check_weak_unit(model, model.element([2, 0]))
    assert not verdict.is_weak_unit
    assert verdict.witness == "b"
    assert verdict.counterexample == model.element([0, 1])


def test_zero_is_not_weak_unit():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    assert not check_weak_unit(model, model.zero()).is_weak_unit


def test_negative_element_is_not_weak_unit():
    model = QuotientModel(("a",), IdealOfSubsets.trivial(("a",)))
    verdict = check_weak_unit(model, model.element([-1]))
    assert not verdict.is_weak_unit and verdict.witness == "a"


# -- morphisms ----------------------------------------------------------------


def test_quotient_maps_are_sigma_continuous():
    for ideal in all_ideals(ABC):
        _, q = quotient_model(ABC, ideal)
        assert check_sigma_continuity(q, samples=50, seed=4).ok
        assert check_homomorphism(q, samples=50, seed=4).ok


def test_permutation_is_sigma_continuous():
    model = QuotientModel(ABC, IdealOfSubsets.trivial(ABC))
    perm = ModelMorphism(model, model, (("b", 1), ("c", 1), ("a", 1)))
    assert check_sigma_continuity(perm, samples=100, seed=5).ok


def test_recipes_need_positive_factors():
    model = QuotientModel(ABC, IdealOfSubsets.trivial(ABC))
    with pytest.raises(ModelError):
        ModelMorphism(model, model, (("a", -1), ("b", 1), ("c", 1)))
    with pytest.raises(ModelError):
        ModelMorphism(model, model, (("a", 0), ("b", 1), ("c", 1)))


@dataclass(frozen=True)
class SupToZero(ModelMorphism):
    """Identity everywhere except that strictly positive elements go to 0."""

    def __call__(self, a):
        if all(v > 0 for v in a.values):
            return self.target.zero()
        return super().__call__(a)


def test_broken_map_fails_sigma_continuity():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    broken = SupToZero(model, model, (("a", 1), ("b", 1)))
    report = check_sigma_continuity(broken, samples=200, seed=6)
    assert not report.ok
    assert report.witness["image_of_sup"] != report.witness["sup_of_images"]


def test_composition_order():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    swap = ModelMorphism(model, model, (("b", 1), ("a", 1)))
    double_a = ModelMorphism(model, model, (("a", 2), ("b", 1)))
    e = model.element([1, 5])
    assert double_a.compose(swap)(e) == double_a(swap(e)) == model.element([10, 1])


# -- positive representatives and unit normalization ------------------------


def test_positive_representative_clears_hidden_negative():
    model = QuotientModel(("a", "b"), ideal_closure(("a", "b"), [["b"]]))
    assert positive_representative(model, {"a": 2, "b": -3}) == {"a": 2, "b": 0}


def test_positive_representative_keeps_positive_and_zero():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    assert positive_representative(model, {"a": 2, "b": 3}) == {"a": 2, "b": 3}
    assert positive_representative(model, {"a": 0, "b": 0}) == {"a": 0, "b": 0}


def test_positive_representative_rejects_negative_class():
    model = QuotientModel(("a", "b"), IdealOfSubsets.trivial(("a", "b")))
    with pytest.raises(ModelError):
        positive_representative(model, {"a": 2, "b": -3})


def test_pipeline_with_hidden_zero():
    res = normalize_unit(["1", "2", "3"], [[], ["2"]], [2, 0, 5])
    assert res.X.elements == ("1", "3")
    assert res.I.members == {frozenset()}
    assert res.injective
    assert res.unit_image.values == (1, 1)
    assert res.kernel_witness() is None


def test_pipeline_with_visible_zero_loses_injectivity():
    res = normalize_unit(["1", "2", "3"], [[]], [2, 0, 5])
    assert not res.injective
    f = res.kernel_witness()
    assert f != res.source.zero()
    assert res.phi(f) == res.phi.target.zero()
    assert f == res.source.element([0, 1, 0])


def test_pipeline_with_positive_unit_is_rescaling():
    res = normalize_unit(["1", "2"], [[]], [2, "1/3"])
    assert res.X.elements == ("1", "2") and res.injective
    assert res.phi.action == (("1", Q(1, 2)), ("2", Q(3)))
    assert check_homomorphism(res.phi, samples=50).ok
    assert res.unit_image == res.phi.target.one()


def test_pipeline_phi_is_composite():
    res = normalize_unit(["1", "2", "3"], [["3"]], [4, 0, -1])
    assert res.phi.action == res.eta.compose(res.rho).action
    assert res.unit_image.values == (1,)


def test_pipeline_rejects_negative_unit():
    with pytest.raises(ModelError):
        normalize_unit(["1", "2"], [[]], [2, -1])
