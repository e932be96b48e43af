"""Rescale a quotient model so that a chosen element becomes the all-ones unit."""

from sigmacomplete.models import IdealOfSubsets, check_homomorphism, check_sigma_continuity, normalize_unit

Y = (1, 2, 3)
for gens in ((), ((2,),)):
    J = IdealOfSubsets.principal(Y, *gens) if gens else IdealOfSubsets.trivial(Y)
    res = normalize_unit(Y, J, {1: 2, 2: 0, 3: 5})
    print("ideal generated by", [list(g) for g in gens] or "nothing")
    print("  X =", list(res.X), " image of u =", res.unit_image)
    print("  injective:", res.injective, "-", res.explanation)
    if not res.injective:
        print("  kernel element:", res.kernel_witness())
    print("  homomorphism:", check_homomorphism(res.phi).ok, " sigma-continuous:", check_sigma_continuity(res.phi).ok)
