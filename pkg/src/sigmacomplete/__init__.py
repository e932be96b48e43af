"""Equational tools for sigma-complete lattice-ordered groups and Riesz spaces.

Terms over the signatures ``lg``, ``lgu``, ``rs`` and ``rsu`` (with the
countable operation ``csup``) are parsed, evaluated exactly in the reals and
in finite quotient models, and checked for validity by seeded random search.
"""

from .logic import (
    AxiomSuite,
    CheckConfig,
    Counterexample,
    ExactlyVerified,
    NoCounterexampleFound,
    axiom_suite,
    check_equation,
    check_equation_in_model,
    check_quasi_direct,
    check_quasi_in_model,
    compile_quasi,
    ineq_to_eq,
)
from .models import (
    FiniteIndexSet,
    IdealOfSubsets,
    ModelElement,
    ModelMorphism,
    QuotientModel,
    check_sigma_continuity,
    check_weak_unit,
    compare_enrichments,
    ideal_closure,
    normalize_unit,
    quotient_model,
)
from .rationals import Q, to_rational
from .semantics import PLFunction1, eval_term, exists_positive, pl_of_index, sup_over_integers, truncated_sup
from .syntax import ParseError, format_equation, format_quasi, format_term, parse, parse_equation, parse_term
from .terms import Equation, QuasiEquation, Signature, Term

__all__ = [name for name in dir() if not name.startswith("_")]
