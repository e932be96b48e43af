"""Turn a quasi-equation into one equation and check both forms."""

from sigmacomplete.lemmas import archimedean
from sigmacomplete.logic import CheckConfig, check_equation, check_quasi_direct, compile_quasi
from sigmacomplete.syntax import format_equation, format_quasi, parse

cfg = CheckConfig(trials=1000, seed=3)
qe = archimedean()
print("statement:", format_quasi(qe))
print("compiled :", format_equation(compile_quasi(qe)))
print("direct   :", check_quasi_direct(qe, cfg))
print("compiled :", check_equation(compile_quasi(qe), cfg))

bogus = parse("x /\\ y = 0 => x = 0", "lg")
print("\nstatement:", format_quasi(bogus))
print("direct   :", check_quasi_direct(bogus, cfg))
print("compiled :", check_equation(compile_quasi(bogus), cfg))
