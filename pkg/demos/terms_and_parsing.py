"""Parse, print and type-check terms under the four signatures."""

from sigmacomplete.syntax import format_term, parse, parse_term
from sigmacomplete.terms import Signature, signatures_accepting

t = parse_term("csup[abs(f)](n : abs(f) /\\ n*one)", "lgu")
print("parsed     :", t)
print("printed    :", format_term(t))
print("accepted by:", sorted(s.name for s in signatures_accepting(t)))

qe = parse("a \\/ 0 = a ; n : (n*a) /\\ b = n*a => a = 0", "lg")
print("premises   :", len(qe.finite_premises), "finite plus one indexed family")
print("conclusion :", " = ".join(format_term(side) for side in qe.conclusion))

for text in ("2*x /\\ y", "one \\/ x"):
    ok = [s.name for s in Signature if s in signatures_accepting(parse_term(text, "rsu"))]
    print(f"{text!r:14} fits {ok}")
