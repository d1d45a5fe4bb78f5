"""Twisting Salem lattices and powering rational isometries to integrality.

Twisting by a in Z[f + f^-1] replaces the form by <x, y>_a = <a x, y>;
twisting by a square preserves the signature while inflating the
determinant. Twisting by (an exponent of) a split prime of norm p makes the
p-primary discriminant form hyperbolic, which is the engine behind the
realization certificates.
"""

from fractions import Fraction

from salemk3 import (
    IntPolynomial,
    Isometry,
    Lattice,
    TwistElement,
    power_to_integral,
    twist,
    twist_split_certificate,
)
from salemk3.polynomials import companion_matrix

quad = IntPolynomial([1, -3, 1])
L = Lattice([[2, 3], [3, 2]])
f = Isometry(L, companion_matrix(quad))
print("base lattice", L.gram, "with companion isometry, char poly", f.char_poly())

scaled, _ = twist(L, f, TwistElement(11))
print("twist by 11:", scaled.gram, " signature:", scaled.signature())

report = twist_split_certificate(L, f, TwistElement(11), 1, 11)
print("split-prime twist certificate at p = 11, exponent 1:")
print("  passed:", report.passed)
print("  determinant:", report.determinant, "(11-part is 11^2)")
print("  11-primary discriminant group:", report.p_part_orders,
      "hyperbolic:", report.form_matches_hyperbolic)

report2 = twist_split_certificate(L, f, TwistElement(11), 2, 11)
print("exponent 2: determinant", report2.determinant,
      "group", report2.p_part_orders)

bad = twist_split_certificate(L, f, TwistElement(5), 1, 5)
print("p = 5 violates the hypotheses:", bad.problems)
print()

print("rational isometries power into the orthogonal group:")
F = ((Fraction(3, 2), Fraction(5, 4)), (Fraction(1), Fraction(3, 2)))
M = Lattice([[-4, 0], [0, 5]])
g = Isometry(M, F)
n, gn = power_to_integral(M, g)
print("  f =", F)
print(f"  f^{n} =", gn.matrix, "is integral; so are all further powers")
