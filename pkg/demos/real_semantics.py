"""Evaluate countable suprema in the reals exactly and compare with finite truncations."""

from sigmacomplete.semantics import eval_term, pl_of_index, stabilization_index, truncated_sup, valuation
from sigmacomplete.syntax import parse_term

v = valuation(x="1", g="5")
t = parse_term("csup[g](n : n*x)")
print("sup_n (n*x /\\ g) at x=1, g=5 :", eval_term(t, v))
for k in (1, 3, 5, 8):
    print(f"  truncated at {k}:", truncated_sup(t, v, k))

t = parse_term("csup[h](n : (10*one + -(n*x)) /\\ 4*one)", "rsu")
v = valuation(x="3/2", h="7")
p = pl_of_index(t.family.body, v)
print("family as a function of n: breakpoints", [str(b) for b in p.breakpoints], "pieces", [tuple(map(str, piece)) for piece in p.pieces])
print("value:", eval_term(t, v), "stabilises by n =", stabilization_index(p, 7))
