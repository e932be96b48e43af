"""Quotients of finite powers of the reals by ideals of subsets.

On a finite ground set ``X`` every ideal of subsets is closed under countable
unions, so it is the powerset of its largest member ``M``. Two tuples are
identified in ``R^X / I`` exactly when they agree off ``M``; the quotient is
represented canonically by restriction to the *support* ``X \\ M``.
"""

from __future__ import annotations

import functools
import itertools
import operator
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .rationals import ONE, Q, ZERO, RationalLike, format_rational, to_rational
from .sampling import DEFAULT_SAMPLER, RationalSampler
from .semantics import eval_family_sup, eval_term
from .terms import (
    Add,
    CSup,
    EventuallyConstant,
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
    free_vars,
    map_children,
)

Label = str


class ModelError(ValueError):
    pass


def _labels(items: Iterable) -> Tuple[Label, ...]:
    return tuple(str(x) for x in items)


@dataclass(frozen=True)
class FiniteIndexSet:
    elements: Tuple[Label, ...]

    def __post_init__(self):
        elems = _labels(self.elements)
        if len(set(elems)) != len(elems):
            raise ModelError(f"duplicate labels in {elems}")
        object.__setattr__(self, "elements", elems)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return str(x) in self.elements

    def subsets(self) -> Iterator[frozenset]:
        for r in range(len(self.elements) + 1):
            for combo in itertools.combinations(self.elements, r):
                yield frozenset(combo)


def _as_index_set(ground) -> FiniteIndexSet:
    return ground if isinstance(ground, FiniteIndexSet) else FiniteIndexSet(tuple(ground))


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdealOfSubsets:
    ground: FiniteIndexSet
    members: frozenset

    def __post_init__(self):
        ground = _as_index_set(self.ground)
        members = frozenset(frozenset(_labels(m)) for m in self.members)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", members)
        if frozenset() not in members:
            raise ModelError("an ideal must contain the empty set")
        for m in members:
            if not m <= set(ground.elements):
                raise ModelError(f"{sorted(m)} is not a subset of the ground set")
            for sub in _proper_subsets(m):
                if sub not in members:
                    raise ModelError(f"not downward closed: {sorted(sub)} missing below {sorted(m)}")
        for a, b in itertools.combinations(members, 2):
            if a | b not in members:
                raise ModelError(f"not closed under union: {sorted(a | b)} missing")

    @property
    def union(self) -> frozenset:
        return frozenset().union(*self.members)

    def __contains__(self, subset) -> bool:
        return frozenset(_labels(subset)) in self.members

    @classmethod
    def principal(cls, ground, top: Iterable) -> "IdealOfSubsets":
        """All subsets of ``top``."""
        ground = _as_index_set(ground)
        top = _labels(top)
        return cls(ground, frozenset(frozenset(c) for r in range(len(top) + 1) for c in itertools.combinations(top, r)))

    @classmethod
    def trivial(cls, ground) -> "IdealOfSubsets":
        return cls(_as_index_set(ground), frozenset([frozenset()]))

    def describe(self) -> List[List[str]]:
        return sorted((sorted(m) for m in self.members), key=lambda m: (len(m), m))


def _proper_subsets(s: frozenset) -> Iterator[frozenset]:
    items = sorted(s)
    for r in range(len(items)):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def ideal_closure(ground, generators: Iterable[Iterable]) -> IdealOfSubsets:
    """Smallest ideal of subsets containing ``generators``."""
    ground = _as_index_set(ground)
    gens = [frozenset(_labels(g)) for g in generators]
    for g in gens:
        if not g <= set(ground.elements):
            raise ModelError(f"generator {sorted(g)} is not a subset of the ground set")
    family = {frozenset(), *gens}
    while True:
        grown = set(family)
        grown.update(a | b for a in family for b in family)
        grown.update(sub for m in family for sub in _proper_subsets(m))
        if grown == family:
            return IdealOfSubsets(ground, frozenset(family))
        family = grown


def as_ideal(ground, ideal) -> IdealOfSubsets:
    """Accept an ideal or any iterable of generating subsets."""
    if isinstance(ideal, IdealOfSubsets):
        return ideal
    return ideal_closure(ground, ideal)


def all_ideals(ground) -> List[IdealOfSubsets]:
    """Every ideal on a finite ground set (one per possible largest member)."""
    ground = _as_index_set(ground)
    return [IdealOfSubsets.principal(ground, top) for top in ground.subsets()]


# ---------------------------------------------------------------------------
# Elements and models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelElement:
    labels: Tuple[Label, ...]
    values: Tuple["Q", ...]

    def __getitem__(self, label) -> "Q":
        return self.values[self.labels.index(str(label))]

    def as_dict(self) -> Dict[Label, "Q"]:
        return dict(zip(self.labels, self.values))

    def to_json(self) -> Dict[Label, str]:
        return {k: format_rational(v) for k, v in zip(self.labels, self.values)}

    def __str__(self) -> str:
        inner = ", ".join(f"{k}: {v}" for k, v in zip(self.labels, self.values))
        return "{" + inner + "}"


# never produced by the parser: identifiers cannot start with a digit
UNIT_VAR = "1"


def _unit_name() -> str:
    return UNIT_VAR


@dataclass(frozen=True)
class QuotientModel:
    """``R^X / I``; with ``enriched`` the countable operation is interpreted.

    ``unit`` is the designated element used for the constant ``one``; by
    default it is the class of the all-ones tuple.
    """

    ground: FiniteIndexSet
    ideal: IdealOfSubsets
    enriched: bool = True
    unit: Optional[Tuple["Q", ...]] = None
    support: Tuple[Label, ...] = field(init=False)

    def __post_init__(self):
        ground = _as_index_set(self.ground)
        object.__setattr__(self, "ground", ground)
        if self.ideal.ground != ground:
            raise ModelError("ideal lives on a different ground set")
        hidden = self.ideal.union
        object.__setattr__(self, "support", tuple(x for x in ground if x not in hidden))
        if self.unit is not None:
            unit = tuple(to_rational(u) for u in self.unit)
            if len(unit) != len(self.support):
                raise ModelError("unit must give one value per support coordinate")
            object.__setattr__(self, "unit", unit)

    # -- construction helpers ----------------------------------------------
    def element(self, values: Union[Mapping, Sequence]) -> ModelElement:
        """Class of a tuple given on the support (or on the whole ground set)."""
        if isinstance(values, ModelElement):
            values = values.as_dict()
        if isinstance(values, Mapping):
            vals = {str(k): to_rational(v) for k, v in values.items()}
            missing = [x for x in self.support if x not in vals]
            if missing:
                raise ModelError(f"no value for support coordinates {missing}")
            return ModelElement(self.support, tuple(vals[x] for x in self.support))
        vals = tuple(to_rational(v) for v in values)
        if len(vals) == len(self.support):
            return ModelElement(self.support, vals)
        if len(vals) == len(self.ground):
            return self.element(dict(zip(self.ground, vals)))
        raise ModelError(f"expected {len(self.support)} or {len(self.ground)} values, got {len(vals)}")

    def constant(self, c) -> ModelElement:
        return ModelElement(self.support, (to_rational(c),) * len(self.support))

    def zero(self) -> ModelElement:
        return self.constant(ZERO)

    def one(self) -> ModelElement:
        if self.unit is None:
            return self.constant(ONE)
        return ModelElement(self.support, self.unit)

    def with_unit(self, unit) -> "QuotientModel":
        return QuotientModel(self.ground, self.ideal, self.enriched, tuple(self.element(unit).values))

    def enrich(self) -> "QuotientModel":
        return QuotientModel(self.ground, self.ideal, True, self.unit)

    def forget(self) -> "QuotientModel":
        return QuotientModel(self.ground, self.ideal, False, self.unit)

    def power(self) -> "QuotientModel":
        """The unquotiented power ``R^X``."""
        return QuotientModel(self.ground, IdealOfSubsets.trivial(self.ground), self.enriched)

    # -- operations (coordinatewise on the support) ---------------------------
    def _zip(self, a: ModelElement, b: ModelElement, op) -> ModelElement:
        return ModelElement(self.support, tuple(map(op, a.values, b.values)))

    def add(self, a, b):
        return self._zip(a, b, operator.add)

    def neg(self, a):
        return ModelElement(self.support, tuple(-x for x in a.values))

    def meet(self, a, b):
        return self._zip(a, b, min)

    def join(self, a, b):
        return self._zip(a, b, max)

    def scale(self, q, a):
        return ModelElement(self.support, tuple(q * x for x in a.values))

    def leq(self, a, b) -> bool:
        return all(x <= y for x, y in zip(a.values, b.values))

    def csup(self, bound: ModelElement, family, env: Mapping[str, ModelElement]) -> ModelElement:
        """``sup_n ([f_n] /\\ [g])``, computed as a least upper bound on the support."""
        if not self.enriched:
            raise ModelError("csup is not interpreted in a model without the countable operation")
        if isinstance(family, EventuallyConstant):
            members = [eval_in_model(m, env, self) for m in (*family.prefix, family.tail)]
            capped = [self.meet(m, bound) for m in members]
            return ModelElement(self.support, tuple(max(col) for col in zip(*(c.values for c in capped)))) if self.support else self.zero()
        fam = family if self.unit is None else _with_unit_var(family)
        out = []
        for i, x in enumerate(self.support):
            local = {k: e.values[i] for k, e in env.items()}
            if self.unit is not None:
                local[_unit_name()] = self.unit[i]
            out.append(eval_family_sup(fam, bound.values[i], local))
        return ModelElement(self.support, tuple(out))

    def describe(self) -> dict:
        return {
            "ground": list(self.ground),
            "ideal": self.ideal.describe(),
            "support": list(self.support),
            "enriched": self.enriched,
            "unit": None if self.unit is None else self.one().to_json(),
        }


def _replace_one(t: Term) -> Term:
    if isinstance(t, One):
        return Var(_unit_name())
    return map_children(t, _replace_one)


def unit_as_var(t: Term) -> Term:
    """Replace the constant by a reserved variable, so a non-standard unit can be supplied per coordinate."""
    return _replace_one(t)


@functools.lru_cache(maxsize=1024)
def _with_unit_var(family):
    from .terms import map_family

    return map_family(family, _replace_one)


def quotient_model(ground, ideal: IdealOfSubsets, enriched: bool = True):
    """``(R^X / I, [-])`` where ``[-]`` restricts tuples to the support."""
    ground = _as_index_set(ground)
    model = QuotientModel(ground, ideal, enriched)
    power = QuotientModel(ground, IdealOfSubsets.trivial(ground), enriched)
    qmap = ModelMorphism(power, model, tuple((x, ONE) for x in model.support), name="quotient")
    return model, qmap


def same_class(ideal: IdealOfSubsets, f: Mapping, g: Mapping) -> bool:
    """``f ~ g`` iff the set where they differ belongs to the ideal."""
    diff = frozenset(str(x) for x in ideal.ground if to_rational(f[x]) != to_rational(g[x]))
    return diff in ideal.members


# ---------------------------------------------------------------------------
# Evaluation in a model
# ---------------------------------------------------------------------------


def eval_in_model(t: Term, v: Mapping[str, ModelElement], model: QuotientModel) -> ModelElement:
    """Evaluate ``t`` with the model's own operations."""
    hit = _MODEL_PLANS.get(id(t))
    if hit is None or hit[0] is not t:
        if len(_MODEL_PLANS) > 4096:
            _MODEL_PLANS.clear()
        hit = _MODEL_PLANS[id(t)] = (t, _model_plan(t))
    return hit[1](v, model)


# keyed by identity; each entry keeps its term alive so the id stays unique
_MODEL_PLANS: Dict[int, tuple] = {}


def _model_plan(t: Term):
    """Compile ``t`` into a function of (valuation, model) calling the model's operations."""
    tp = type(t)
    if tp is Zero:
        return lambda v, m: m.zero()
    if tp is One:
        return lambda v, m: m.one()
    if tp is Var:
        name = t.name

        def var(v, m):
            try:
                return v[name]
            except KeyError:
                raise ModelError(f"unbound variable {name!r}") from None

        return var
    if tp is Neg:
        f = _model_plan(t.t)
        return lambda v, m: m.neg(f(v, m))
    if tp is ScalarMul:
        f, q = _model_plan(t.t), t.q
        return lambda v, m: m.scale(q, f(v, m))
    if tp in (Add, Meet, Join):
        f, g = _model_plan(t.a), _model_plan(t.b)
        if tp is Add:
            return lambda v, m: m.add(f(v, m), g(v, m))
        if tp is Meet:
            return lambda v, m: m.meet(f(v, m), g(v, m))
        return lambda v, m: m.join(f(v, m), g(v, m))
    if tp is CSup:
        bound, family = _model_plan(t.bound), t.family

        def csup(v, m):
            if not m.enriched:
                raise ModelError("csup is not interpreted in a model without the countable operation")
            return m.csup(bound(v, m), family, v)

        return csup
    if tp is NatScale:
        raise TermError("index multiple outside a family body")
    raise TermError(f"not a term: {t!r}")


def eval_pointwise(t: Term, reps: Mapping[str, Mapping], ground: FiniteIndexSet) -> Dict[Label, "Q"]:
    """Evaluate ``t`` in the power ``R^X`` coordinate by coordinate with real semantics."""
    return {x: eval_term(t, {k: to_rational(r[x]) for k, r in reps.items()}) for x in ground}


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelMorphism:
    """Map given per target coordinate as ``(source coordinate, factor)``.

    Factors must be positive, so every recipe is a lattice-group morphism.
    """

    source: QuotientModel
    target: QuotientModel
    action: Tuple[Tuple[Label, "Q"], ...]
    name: str = ""

    def __post_init__(self):
        action = tuple((str(lbl), to_rational(c)) for lbl, c in self.action)
        object.__setattr__(self, "action", action)
        if len(action) != len(self.target.support):
            raise ModelError("one action entry per target support coordinate is required")
        for lbl, c in action:
            if lbl not in self.source.support:
                raise ModelError(f"{lbl!r} is not a source support coordinate")
            if c <= 0:
                raise ModelError(f"factor for {lbl!r} must be positive, got {c}")
        index = {x: i for i, x in enumerate(self.source.support)}
        object.__setattr__(self, "_positions", tuple((index[lbl], c) for lbl, c in action))

    @property
    def shape(self) -> Tuple[int, int, Tuple[Tuple[int, "Q"], ...]]:
        """The recipe with labels replaced by positions; seeded checks depend only on this."""
        return len(self.source.support), len(self.target.support), self._positions

    def __call__(self, a: ModelElement) -> ModelElement:
        if a.labels != self.source.support:
            a = self.source.element(a.as_dict())
        vals = a.values
        return ModelElement(self.target.support, tuple(c * vals[i] for i, c in self._positions))

    def compose(self, first: "ModelMorphism") -> "ModelMorphism":
        """``self o first``."""
        if first.target.support != self.source.support:
            raise ModelError("morphisms do not compose")
        inner = dict(zip(first.target.support, first.action))
        action = []
        for lbl, c in self.action:
            src, c0 = inner[lbl]
            action.append((src, c * c0))
        name = f"{self.name}.{first.name}" if self.name and first.name else ""
        return ModelMorphism(first.source, self.target, tuple(action), name)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "source_support": list(self.source.support),
            "target_support": list(self.target.support),
            "action": {t: [s, format_rational(c)] for t, (s, c) in zip(self.target.support, self.action)},
        }


# ---------------------------------------------------------------------------
# Randomized checks
# ---------------------------------------------------------------------------


def random_element(model: QuotientModel, rng: random.Random, sampler: RationalSampler = DEFAULT_SAMPLER) -> ModelElement:
    return ModelElement(model.support, tuple(sampler.value(rng) for _ in model.support))


@functools.lru_cache(maxsize=32)
def _sample_rows(width: int, count: int, seed: int) -> Tuple[Tuple["Q", ...], ...]:
    # shared by every morphism check with the same source width and seed
    rng = random.Random(seed)
    return tuple(tuple(DEFAULT_SAMPLER.value(rng) for _ in range(width)) for _ in range(count))


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    checked: int
    note: str = ""
    witness: Optional[dict] = None


def check_homomorphism(phi: ModelMorphism, samples: int = 200, seed: int = 0) -> CheckReport:
    """Exact check that ``phi`` preserves ``0, +, -, \\/, /\\`` on sampled pairs."""
    src, tgt = phi.source, phi.target
    if phi(src.zero()) != tgt.zero():
        return CheckReport(False, 0, "zero not preserved")
    rows = _sample_rows(len(src.support), 2 * samples, seed)
    for i in range(samples):
        a, b = ModelElement(src.support, rows[2 * i]), ModelElement(src.support, rows[2 * i + 1])
        pa, pb = phi(a), phi(b)
        for name, lhs, rhs in (
            ("+", phi(src.add(a, b)), tgt.add(pa, pb)),
            ("-", phi(src.neg(a)), tgt.neg(pa)),
            ("\\/", phi(src.join(a, b)), tgt.join(pa, pb)),
            ("/\\", phi(src.meet(a, b)), tgt.meet(pa, pb)),
        ):
            if lhs != rhs:
                return CheckReport(False, i + 1, f"{name} not preserved", {"a": a.to_json(), "b": b.to_json()})
    return CheckReport(True, samples, "preserves 0, +, -, \\/, /\\ on all samples")


def check_sigma_continuity(phi: ModelMorphism, samples: int = 200, seed: int = 0) -> CheckReport:
    """``phi(sup S) = sup phi(S)`` on random finite families ``S``.

    In a quotient of a finite power every bounded countable family has only
    finitely many distinct values per coordinate, so finite families suffice.
    """
    src, tgt = phi.source, phi.target
    rng = random.Random(seed)
    rows = iter(_sample_rows(len(src.support), 5 * samples, seed))
    for i in range(samples):
        fam = [ModelElement(src.support, next(rows)) for _ in range(rng.randint(1, 5))]
        top = ModelElement(src.support, tuple(max(col) for col in zip(*(f.values for f in fam)))) if src.support else src.zero()
        images = [phi(f) for f in fam]
        sup_images = ModelElement(tgt.support, tuple(max(col) for col in zip(*(f.values for f in images)))) if tgt.support else tgt.zero()
        if phi(top) != sup_images:
            return CheckReport(
                False,
                i + 1,
                "supremum not preserved",
                {"family": [f.to_json() for f in fam], "image_of_sup": phi(top).to_json(), "sup_of_images": sup_images.to_json()},
            )
    return CheckReport(True, samples, "preserves suprema of all sampled families")


@dataclass(frozen=True)
class WeakUnitVerdict:
    is_weak_unit: bool
    witness: Optional[Label]
    counterexample: Optional[ModelElement]
    trials: int
    premise_hits: int
    note: str


def check_weak_unit(model: QuotientModel, e: ModelElement, trials: int = 200, seed: int = 0) -> WeakUnitVerdict:
    """Decide whether ``e`` is a weak unit: ``e >= 0`` and ``f /\\ e = 0`` forces ``f = 0``.

    On a finite support this holds exactly when ``e`` is strictly positive on
    every coordinate; the randomized part only corroborates that criterion.
    """
    e = model.element(e)
    witness = None
    counter = None
    note = "strictly positive on every support coordinate"
    for i, x in enumerate(model.support):
        if e.values[i] < 0:
            witness, note = x, f"not >= 0 at {x}"
            break
        if e.values[i] == 0:
            witness, note = x, f"vanishes at {x}"
            counter = model.element({y: ONE if y == x else ZERO for y in model.support})
            break
    exact = witness is None
    rng = random.Random(seed)
    hits = 0
    zero = model.zero()
    for _ in range(trials):
        f = ModelElement(model.support, tuple(ZERO if rng.random() < 0.5 else abs(DEFAULT_SAMPLER.value(rng)) for _ in model.support))
        if model.meet(f, e) == zero:
            hits += 1
            if f != zero and counter is None:
                counter = f
                note += f"; sampled counterexample {f}"
    return WeakUnitVerdict(exact and counter is None, witness, counter, trials, hits, note)


def positive_representative(model: QuotientModel, e: Mapping) -> Dict[Label, "Q"]:
    """A coordinatewise-nonnegative preimage ``f+`` of a class ``[f] >= 0``."""
    rep = {str(k): to_rational(v) for k, v in dict(e).items()}
    missing = [x for x in model.ground if x not in rep]
    if missing:
        raise ModelError(f"representative has no value at {missing}")
    bad = [x for x in model.support if rep[x] < 0]
    if bad:
        raise ModelError(f"class is not >= 0: negative at support coordinates {bad}")
    return {x: max(rep[x], ZERO) for x in model.ground}


# ---------------------------------------------------------------------------
# Unit normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    X: FiniteIndexSet
    I: IdealOfSubsets
    rho: ModelMorphism
    m_iso: ModelMorphism
    eta: ModelMorphism
    phi: ModelMorphism
    unit_image: ModelElement
    injective: bool
    explanation: str
    source: QuotientModel
    unit_rep: Dict[Label, "Q"]

    def kernel_witness(self) -> Optional[ModelElement]:
        """A nonzero class sent to 0 (the indicator of a lost coordinate), if any."""
        lost = [x for x in self.source.support if x not in self.X]
        if not lost:
            return None
        return self.source.element({y: ONE if y == lost[0] else ZERO for y in self.source.support})


def normalize_unit(Y, J: IdealOfSubsets, u: Union[Mapping, Sequence]) -> PipelineResult:
    """Turn ``[u]`` in ``R^Y / J`` into the all-ones class of ``R^X / I``.

    ``X`` keeps the coordinates where (a positive representative of) ``u`` is
    strictly positive, ``I`` is the trace of ``J`` on ``X``; ``rho``
    restricts, ``eta`` divides coordinatewise by ``u`` and ``phi = eta o rho``.
    ``phi`` is injective iff ``{u = 0}`` belongs to ``J``.
    """
    Y = _as_index_set(Y)
    if not isinstance(u, Mapping):
        u = dict(zip(Y, u))
    J = as_ideal(Y, J)
    source = QuotientModel(Y, J)
    u_pos = positive_representative(source, u)
    X = FiniteIndexSet(tuple(y for y in Y if u_pos[y] > 0))
    I = IdealOfSubsets(X, frozenset(m & set(X.elements) for m in J.members))
    target = QuotientModel(X, I)
    rho = ModelMorphism(source, target, tuple((x, ONE) for x in target.support), name="rho")
    power = QuotientModel(X, IdealOfSubsets.trivial(X))
    m_iso = ModelMorphism(power, power, tuple((x, 1 / u_pos[x]) for x in X), name="m")
    eta = ModelMorphism(target, target, tuple((x, 1 / u_pos[x]) for x in target.support), name="eta")
    phi = eta.compose(rho)
    phi = ModelMorphism(phi.source, phi.target, phi.action, name="phi")
    unit_image = phi(source.element(u_pos))
    zeros = frozenset(y for y in Y if u_pos[y] == 0)
    injective = zeros in J.members
    if injective:
        explanation = f"{{u = 0}} = {sorted(zeros)} belongs to the ideal, so the kernel is trivial"
    else:
        explanation = f"{{u = 0}} = {sorted(zeros)} is not in the ideal; classes supported there are sent to 0"
    return PipelineResult(X, I, rho, m_iso, eta, phi, unit_image, injective, explanation, source, u_pos)


# ---------------------------------------------------------------------------
# Two enrichments of R^X / I
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnrichmentReport:
    trials: int
    discrepancies: int
    first: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.discrepancies == 0


def compare_enrichments(ground, ideal: IdealOfSubsets, trials: int = 1000, seed: int = 0, terms: Optional[Sequence[Term]] = None) -> EnrichmentReport:
    """Compare the enriched quotient with the quotient of the enriched power.

    Route (a) quotients the inputs and evaluates with the quotient's own
    operations (its countable operation is the least upper bound of classes).
    Route (b) evaluates in ``R`` at every ground coordinate, then quotients.
    Inputs are random tuples over the whole ground set, so values on hidden
    coordinates vary freely.
    """
    from .generate import random_term

    ground = _as_index_set(ground)
    ideal = as_ideal(ground, ideal)
    model, qmap = quotient_model(ground, ideal, enriched=True)
    rng = random.Random(seed)
    names = tuple(sorted(frozenset().union(*(free_vars(t) for t in terms)))) if terms else ("x", "y", "z")
    bad = 0
    first = None
    for i in range(trials):
        t = terms[i % len(terms)] if terms else random_term(rng, names, depth=3, unit=True, scalars=True, csup=True)
        reps = {k: {x: DEFAULT_SAMPLER.value(rng) for x in ground} for k in names}
        classes = {k: qmap(ModelElement(tuple(ground), tuple(r[x] for x in ground))) for k, r in reps.items()}
        route_a = eval_in_model(t, classes, model)
        pointwise = eval_pointwise(t, reps, ground)
        route_b = qmap(ModelElement(tuple(ground), tuple(pointwise[x] for x in ground)))
        if route_a != route_b:
            bad += 1
            if first is None:
                first = {"trial": i, "term": str(t), "a": route_a.to_json(), "b": route_b.to_json()}
    return EnrichmentReport(trials, bad, first)
