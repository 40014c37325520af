"""
Counterexamples for bad words
=============================

A word is bad when some pair of positive definite matrices gives it a
non-real or non-positive eigenvalue. The search below uses the fixed unitary
first and a random eigenbasis second, and every witness is re-checked from
its stored entries.
"""

import numpy as np

from gwords import Counterexample, RefuteConfig, parse_word, refute, spectrum_check
from gwords.numeric import eig_general, evaluate_word, random_pd

for text in ["A B^2 A^2 B", "A B^2 A^2 B^2 A^3 B^4", "A^2 B^-1 A^-1 B^3"]:
    w = parse_word(text)
    cex = refute(w, RefuteConfig("paper_u"))
    if cex is None:
        cex = refute(w, RefuteConfig("random", samples=500))
    ev = eig_general(evaluate_word(cex.word, cex.A, cex.B))
    print(f"{text}\n  construction {cex.construction}\n  evidence {cex.evidence}")
    print("  eigenvalues", np.round(ev, 6))
    again = Counterexample.from_json(cex.to_json())
    print("  re-validated from JSON:", again.validate())

# A nearly symmetric word never yields a witness.
rng = np.random.default_rng(0)
w = parse_word("A^2 B^3 A^2 B^5")
ok = all(spectrum_check(w, random_pd(3, rng, 0.5, 2), random_pd(3, rng, 0.5, 2)).all_positive for _ in range(500))
print("\nA^2 B^3 A^2 B^5 positive on 500 random pairs:", ok)
print("search result:", refute(w, RefuteConfig("random", samples=500)))
