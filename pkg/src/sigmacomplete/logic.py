"""Axiom suites, randomized equation checking and the quasi-equation compiler.

Validity in the whole variety reduces to validity in the reals, so the
checkers sample exact rational valuations of the real line. This is a
semi-decision: a :class:`Counterexample` refutes an equation, while
:class:`NoCounterexampleFound` is only evidence. Suprema of families can jump
(``sup_n (n*x /\\ 1)`` is discontinuous at ``x = 0``), which is why the sampler
always tries boundary values and coinciding variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .models import UNIT_VAR, ModelElement, ModelError, QuotientModel, eval_in_model, unit_as_var
from .rationals import Q, format_rational
from .sampling import DEFAULT_SAMPLER, RationalSampler
from .semantics import EvaluationError, Positivity, eval_term, exists_positive, pl_of_index
from .syntax import parse_equation, parse_term
from .terms import (
    CSup,
    DoubleIndexed,
    Equation,
    FamilySpec,
    Join,
    Meet,
    QuasiEquation,
    Signature,
    Term,
    Zero,
    abs_,
    check_equation_terms,
    check_quasi_terms,
    diff,
    free_vars,
    map_family,
    member,
    shift_family,
    subterms,
)

# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, ModelElement):
        return value.to_json()
    return format_rational(value)


@dataclass(frozen=True)
class NoCounterexampleFound:
    trials: int
    seed: int
    premises_held: Optional[int] = None
    ok = True

    def to_json(self) -> dict:
        out = {"verdict": "no_counterexample_found", "trials": self.trials, "seed": self.seed}
        if self.premises_held is not None:
            out["premises_held"] = self.premises_held
        return out


@dataclass(frozen=True)
class Counterexample:
    valuation: Dict[str, object]
    lhs_value: object
    rhs_value: object
    trial: int = 0
    ok = False

    def to_json(self) -> dict:
        return {
            "verdict": "counterexample",
            "trial": self.trial,
            "valuation": {k: _jsonable(v) for k, v in sorted(self.valuation.items())},
            "lhs": _jsonable(self.lhs_value),
            "rhs": _jsonable(self.rhs_value),
        }


@dataclass(frozen=True)
class ExactlyVerified:
    note: str
    ok = True

    def to_json(self) -> dict:
        return {"verdict": "exactly_verified", "note": self.note}


Verdict = Union[NoCounterexampleFound, Counterexample, ExactlyVerified]


class CheckError(EvaluationError):
    def __init__(self, message: str, valuation: Mapping):
        self.valuation = dict(valuation)
        super().__init__(f"{message} under valuation {{{', '.join(f'{k}: {v}' for k, v in sorted(self.valuation.items()))}}}")


@dataclass(frozen=True)
class CheckConfig:
    trials: int = 2000
    seed: int = 0
    sampler: RationalSampler = field(default=DEFAULT_SAMPLER)


def _config(config: Optional[CheckConfig], trials: Optional[int], seed: Optional[int]) -> CheckConfig:
    config = config or CheckConfig()
    if trials is not None or seed is not None:
        config = CheckConfig(config.trials if trials is None else trials, config.seed if seed is None else seed, config.sampler)
    return config


# ---------------------------------------------------------------------------
# Checking equations
# ---------------------------------------------------------------------------


def ineq_to_eq(a: Term, b: Term, signature: Union[str, Signature] = Signature.RSU) -> Equation:
    """``a <= b`` as the equation ``a /\\ b = a``."""
    return Equation(Meet(a, b), a, Signature.parse(signature))


def check_equation(eq: Equation, config: Optional[CheckConfig] = None, *, trials: Optional[int] = None, seed: Optional[int] = None) -> Verdict:
    """Search for a rational valuation refuting ``eq`` in the reals."""
    config = _config(config, trials, seed)
    check_equation_terms(eq)
    names = sorted(free_vars(eq))
    if not names:
        lhs, rhs = eval_term(eq.lhs, {}), eval_term(eq.rhs, {})
        if lhs != rhs:
            return Counterexample({}, lhs, rhs, 0)
        return ExactlyVerified("closed equation: both sides evaluate to the same rational")
    for i, v in enumerate(config.sampler.valuation_list(tuple(names), config.trials, config.seed)):
        try:
            lhs = eval_term(eq.lhs, v)
            rhs = eval_term(eq.rhs, v)
        except EvaluationError as exc:
            raise CheckError(str(exc), v) from exc
        if lhs != rhs:
            return Counterexample(dict(v), lhs, rhs, i)
    return NoCounterexampleFound(config.trials, config.seed)


def replay(eq: Equation, valuation: Mapping) -> Tuple[object, object]:
    """Re-evaluate both sides of ``eq`` under a (real) valuation."""
    return eval_term(eq.lhs, valuation), eval_term(eq.rhs, valuation)


def _model_valuations(names: Sequence[str], model: QuotientModel, config: CheckConfig) -> Iterator[Dict[str, ModelElement]]:
    width = len(model.support)
    for rows in config.sampler.tuples(names, width, config.trials, config.seed):
        yield {x: ModelElement(model.support, tuple(row[x] for row in rows)) for x in names}


def check_equation_in_model(eq: Equation, model: QuotientModel, config: Optional[CheckConfig] = None, *, trials: Optional[int] = None, seed: Optional[int] = None) -> Verdict:
    """As :func:`check_equation`, with valuations ranging over the model's elements."""
    config = _config(config, trials, seed)
    check_equation_terms(eq)
    if not model.enriched and any(isinstance(s, CSup) for side in (eq.lhs, eq.rhs) for s in subterms(side)):
        raise ModelError("equation uses csup but the model does not interpret it")
    names = sorted(free_vars(eq))
    for i, v in enumerate(_model_valuations(names, model, config)):
        lhs = eval_in_model(eq.lhs, v, model)
        rhs = eval_in_model(eq.rhs, v, model)
        if lhs != rhs:
            return Counterexample(dict(v), lhs, rhs, i)
    return NoCounterexampleFound(config.trials, config.seed)


# ---------------------------------------------------------------------------
# Quasi-equations
# ---------------------------------------------------------------------------


def compile_quasi(qe: QuasiEquation) -> Equation:
    """The single equation ``csup[|t - r|](n, k : k*|t_n - r_n|) = |t - r|``.

    Finite premises come first in the enumeration, the indexed premise family
    follows; with no premises at all the trivially true ``0 = 0`` is used.
    """
    check_quasi_terms(qe)
    head = tuple(abs_(diff(a, b)) for a, b in qe.finite_premises)
    body = None
    if qe.indexed_premises is not None:
        a, b = qe.indexed_premises
        body = abs_(diff(a, b))
    if not head and body is None:
        head = (abs_(diff(Zero(), Zero())),)
    cap = abs_(diff(*qe.conclusion))
    return Equation(CSup(cap, DoubleIndexed(head, body)), cap, qe.signature)


@dataclass(frozen=True)
class PremiseStatus:
    hold: bool
    failing_index: Optional[int] = None  # 1-based position in the premise enumeration


def premises_hold(qe: QuasiEquation, v: Mapping) -> PremiseStatus:
    """Exact test of all (countably many) premises at ``v``."""
    for i, (a, b) in enumerate(qe.finite_premises, start=1):
        if eval_term(a, v) != eval_term(b, v):
            return PremiseStatus(False, i)
    if qe.indexed_premises is not None:
        a, b = qe.indexed_premises
        pos: Positivity = exists_positive(pl_of_index(abs_(diff(a, b)), v))
        if pos:
            return PremiseStatus(False, len(qe.finite_premises) + pos.witness)
    return PremiseStatus(True)


def check_quasi_direct(qe: QuasiEquation, config: Optional[CheckConfig] = None, *, trials: Optional[int] = None, seed: Optional[int] = None) -> Verdict:
    """Sample valuations; wherever every premise holds, test the conclusion."""
    config = _config(config, trials, seed)
    check_quasi_terms(qe)
    names = sorted(free_vars(qe))
    held = 0
    valuations = config.sampler.valuations(names, config.trials, config.seed) if names else iter([{}])
    for i, v in enumerate(valuations):
        if not premises_hold(qe, v).hold:
            continue
        held += 1
        lhs, rhs = eval_term(qe.conclusion[0], v), eval_term(qe.conclusion[1], v)
        if lhs != rhs:
            return Counterexample(dict(v), lhs, rhs, i)
    if not names:
        return ExactlyVerified("closed quasi-equation")
    return NoCounterexampleFound(config.trials, config.seed, premises_held=held)


# ---------------------------------------------------------------------------
# Axiom suites
# ---------------------------------------------------------------------------

FAMILY_TEMPLATES: Dict[str, str] = {
    "ec": "[f1, f2, f3] ~ f4",
    "pl": "n : f1 + n*f2",
    "pl2": "n : ((2*n+1)*f1 /\\ f2) \\/ (f3 + -(n*f4))",
}
SCALAR_FAMILY_TEMPLATES: Dict[str, str] = {
    "rs": "n : 3/2*(n*f1) /\\ (f2 + -1/2*(n*f3))",
}


def family_template(text: str, signature: Union[str, Signature] = Signature.RSU) -> FamilySpec:
    term = parse_term(f"csup[g]({text})", signature)
    return term.family


def csup_axioms(fam: FamilySpec, tag: str, signature: Signature) -> List[Tuple[str, Equation]]:
    """(A1)-(A3) instantiated at one family shape, with bound ``g``."""
    g = parse_term("g")
    h = parse_term("h")
    return [
        (f"A1[{tag}]", Equation(CSup(g, fam), CSup(g, map_family(fam, lambda b: Meet(b, g))), signature)),
        (
            f"A2[{tag}]",
            Equation(CSup(g, fam), Join(Meet(member(fam, 1), g), CSup(g, shift_family(fam, 1))), signature),
        ),
        (f"A3[{tag}]", ineq_to_eq(CSup(g, map_family(fam, lambda b: Meet(b, h))), h, signature)),
    ]


LATTICE_GROUP_AXIOMS = [
    ("add_assoc", "(a + b) + c = a + (b + c)"),
    ("add_comm", "a + b = b + a"),
    ("add_zero", "a + 0 = a"),
    ("add_inverse", "a + -a = 0"),
    ("meet_comm", "a /\\ b = b /\\ a"),
    ("join_comm", "a \\/ b = b \\/ a"),
    ("meet_assoc", "(a /\\ b) /\\ c = a /\\ (b /\\ c)"),
    ("join_assoc", "(a \\/ b) \\/ c = a \\/ (b \\/ c)"),
    ("meet_absorb", "a /\\ (a \\/ b) = a"),
    ("join_absorb", "a \\/ (a /\\ b) = a"),
    ("meet_idem", "a /\\ a = a"),
    ("join_idem", "a \\/ a = a"),
    ("translation", "a + (b /\\ c) = (a + b) /\\ (a + c)"),
]

WEAK_UNIT_AXIOM = ("weak_unit", "csup[abs(f)](n : abs(f) /\\ n*one) = abs(f)")

# instances of the scalar schemas; p, q range over these rationals
SCALAR_PAIRS = [(Q(2, 3), Q(-3, 2)), (Q(5), Q(1, 4)), (Q(0), Q(-2))]


def _q(x) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def scalar_axioms() -> List[Tuple[str, str]]:
    out = []
    qs = sorted({q for pair in SCALAR_PAIRS for q in pair})
    for q in qs:
        out.append((f"scalar_add[q={_q(q)}]", f"{_q(q)}*(a + b) = {_q(q)}*a + {_q(q)}*b"))
    for p, q in SCALAR_PAIRS:
        out.append((f"scalar_sum[p={_q(p)},q={_q(q)}]", f"{_q(p + q)}*a = {_q(p)}*a + {_q(q)}*a"))
        out.append((f"scalar_mul[p={_q(p)},q={_q(q)}]", f"{_q(p * q)}*a = {_q(p)}*({_q(q)}*a)"))
    out.append(("scalar_one", "1*a = a"))
    for q in qs:
        if q > 0:
            out.append((f"scalar_join[q={_q(q)}]", f"{_q(q)}*(a \\/ b) = {_q(q)}*a \\/ {_q(q)}*b"))
    return out


@dataclass(frozen=True)
class AxiomSuite:
    variety: Signature
    equations: Tuple[Tuple[str, Equation], ...]

    def names(self) -> List[str]:
        return [name for name, _ in self.equations]

    def __getitem__(self, name: str) -> Equation:
        for n, eq in self.equations:
            if n == name:
                return eq
        raise KeyError(name)

    def __iter__(self):
        return iter(self.equations)

    def __len__(self):
        return len(self.equations)


def axiom_suite(variety: Union[str, Signature]) -> AxiomSuite:
    """Named equations axiomatizing the variety over the given signature."""
    sig = Signature.parse(variety)
    eqs: List[Tuple[str, Equation]] = [(name, parse_equation(text, sig)) for name, text in LATTICE_GROUP_AXIOMS]
    templates = dict(FAMILY_TEMPLATES)
    if sig.has_scalars:
        eqs += [(name, parse_equation(text, sig)) for name, text in scalar_axioms()]
        templates.update(SCALAR_FAMILY_TEMPLATES)
    for tag, text in templates.items():
        eqs += csup_axioms(family_template(text, sig), tag, sig)
    if sig.has_unit:
        eqs.append((WEAK_UNIT_AXIOM[0], parse_equation(WEAK_UNIT_AXIOM[1], sig)))
    return AxiomSuite(sig, tuple(eqs))


@dataclass
class SuiteReport:
    variety: Signature
    results: List[Tuple[str, Verdict]]

    @property
    def ok(self) -> bool:
        return all(v.ok for _, v in self.results)

    def failures(self) -> List[Tuple[str, Verdict]]:
        return [(n, v) for n, v in self.results if not v.ok]


def check_suite(suite: AxiomSuite, config: Optional[CheckConfig] = None, model: Optional[QuotientModel] = None) -> SuiteReport:
    results = []
    for name, eq in suite:
        verdict = check_equation(eq, config) if model is None else check_equation_in_model(eq, model, config)
        results.append((name, verdict))
    return SuiteReport(suite.variety, results)


def premises_hold_in_model(qe: QuasiEquation, v: Mapping[str, ModelElement], model: QuotientModel) -> PremiseStatus:
    """Premises hold in a quotient iff they hold at every support coordinate."""
    for i, (a, b) in enumerate(qe.finite_premises, start=1):
        if eval_in_model(a, v, model) != eval_in_model(b, v, model):
            return PremiseStatus(False, i)
    if qe.indexed_premises is not None:
        a, b = qe.indexed_premises
        body = abs_(diff(a, b))
        for j, label in enumerate(model.support):
            coord = {x: e.values[j] for x, e in v.items()}
            if model.unit is not None:
                coord[UNIT_VAR] = model.unit[j]
                body_j = unit_as_var(body)
            else:
                body_j = body
            pos = exists_positive(pl_of_index(body_j, coord))
            if pos:
                return PremiseStatus(False, len(qe.finite_premises) + pos.witness)
    return PremiseStatus(True)


def check_quasi_in_model(qe: QuasiEquation, model: QuotientModel, config: Optional[CheckConfig] = None, *, trials: Optional[int] = None, seed: Optional[int] = None) -> Verdict:
    """As :func:`check_quasi_direct`, with valuations ranging over the model's elements."""
    config = _config(config, trials, seed)
    check_quasi_terms(qe)
    names = sorted(free_vars(qe))
    held = 0
    for i, v in enumerate(_model_valuations(names, model, config)):
        if not premises_hold_in_model(qe, v, model).hold:
            continue
        held += 1
        lhs = eval_in_model(qe.conclusion[0], v, model)
        rhs = eval_in_model(qe.conclusion[1], v, model)
        if lhs != rhs:
            return Counterexample(dict(v), lhs, rhs, i)
    return NoCounterexampleFound(config.trials, config.seed, premises_held=held)
