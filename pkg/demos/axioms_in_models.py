"""Check the axiom suites in the reals and in finite quotient models."""

from sigmacomplete.logic import CheckConfig, axiom_suite, check_suite
from sigmacomplete.models import IdealOfSubsets, QuotientModel

cfg = CheckConfig(trials=300, seed=0)
for variety in ("lg", "lgu", "rs", "rsu"):
    report = check_suite(axiom_suite(variety), cfg)
    print(f"{variety}: {len(axiom_suite(variety))} axioms, ok={report.ok}")

ground = ("p", "q", "r")
model = QuotientModel(ground, IdealOfSubsets.principal(ground, ("r",)))
print("R^{p,q,r} modulo subsets of {r}; support", model.support)
print("lgu suite there:", check_suite(axiom_suite("lgu"), cfg, model).ok)

skewed = model.with_unit((1, 0))
report = check_suite(axiom_suite("lgu"), cfg, skewed)
print("with unit (1, 0) instead:", [name for name, _ in report.failures()])
