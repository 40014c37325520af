"""
Symbolic trace expansion
========================

With A diagonal and B = S E conj(S) for a symmetric unitary S, the trace of a
word is a generalized polynomial in the diagonal entries. Each term remembers
which blocks produced it.
"""

import numpy as np

from gwords import Family, Parameterization, parse_word, standard_form, symbolic_trace, term_coefficient
from gwords.numeric import build_pair, evaluate_word
from gwords.trace import class2_imag_closed_form, merged_imaginary

param = Parameterization.paper("general")

# Class 1: nine terms, all real.
exp = symbolic_trace(standard_form(parse_word("A^2 B^3")), param)
for key, c in sorted(exp.poly.terms.items()):
    print(f"x1^{key[0]} y1^{key[1]} x2^{key[2]} y2^{key[3]}   {c.real:+.6f}{c.imag:+.2e}i")

# The expansion agrees with the numeric product.
w = standard_form(parse_word("A B^2 A^2 B"))
exp = symbolic_trace(w, param)
point = [0.5, 3.0, 0.5, 3.0]
A, B = build_pair(param, point)
print("\nsymbolic trace:", exp.evaluate(point))
print("numeric trace: ", np.trace(evaluate_word(w, A, B)))

# A single coefficient, once from the full expansion and once by the
# substitution that zeroes every other block.
f = Family(P1={1}, Q2={1})
print("\nfamily", f.as_dict())
print("  from expansion: ", exp.family_coefficient(f))
print("  by substitution:", term_coefficient(w, param, f))

# With x1 = x2 = x and y1 = y2 = y the imaginary part collapses to a product
# of two factors.
g = merged_imaginary(exp)
print("\nmerged imaginary part has", len(g), "terms")
for x, y in [(0.5, 3.0), (0.2, 0.7), (4.0, 1.5)]:
    print(f"x={x} y={y}  expansion={g(x, y).real:+.12f}  closed form={class2_imag_closed_form(1, 2, 2, 1, x, y):+.12f}")
