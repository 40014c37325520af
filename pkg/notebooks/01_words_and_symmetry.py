"""
Words, standard form and near symmetry
======================================

A word is a product of real powers of two letters. This walk-through shows
how words are normalized, which ones split into two palindromes, and what the
cyclic pair sums say about positive words.
"""

from gwords import exactness, nearly_symmetric_split, parse_word, standard_form
from gwords.gword import cycle_pairs, reversal, words_of_class

# Standard form merges equal neighbours (also across the wrap-around) and
# rotates so the word starts with A and ends with B.
for text in ["A^2 B A^3", "B^2 A^3", "A B^0 A^2 B", "A B^2 A^-1 B^3"]:
    print(f"{text:>16}  ->  {standard_form(parse_word(text))}")

# A nearly symmetric word is a rotation that splits into two palindromes.
w = standard_form(parse_word("A^2 B^3 A^2 B^5"))
split = nearly_symmetric_split(w)
print("\nsplit of", w, "->", split.as_dict())

# Near symmetry survives reversal and cycling.
print("reversal:", reversal(w), nearly_symmetric_split(reversal(w)) is not None)
print("cycled:  ", cycle_pairs(w, 1), nearly_symmetric_split(cycle_pairs(w, 1)) is not None)

# In class 2 the test reduces to p1 = p2 or q1 = q2.
words = list(words_of_class(2, (-2, -1, 1, 2)))
ns = sum(nearly_symmetric_split(v) is not None for v in words)
print(f"\nclass 2 over {{-2,-1,1,2}}: {ns} of {len(words)} words are nearly symmetric")

# Cyclic pair sums and the odd/even count of their minimum positions.
for text in ["A^4 B^2 A^3 B^3 A^4 B", "A B^2 A^2 B^2 A^3 B^4", "A B^2 A B^3 A^4 B^5"]:
    r = exactness(parse_word(text))
    print(f"{text:>24}  L={tuple(int(v) for v in r.l_values)}  odd={r.count_odd} even={r.count_even}  exact={r.exact}")
