"""
Sweeping a class
================

Enumerate every word of a class over a finite exponent set, one per orbit of
reversal, letter swap and cycling, and see how many are settled by a theorem,
by a numeric witness, or not at all.
"""

from collections import Counter

from gwords import classify, conjecture_check, sweep

reports, summary = sweep(2, [-2, -1, 1, 2])
print("class 2:", summary)

reports, summary = sweep(3, [1, 2, 3])
print("class 3:", summary)
print(Counter(r.reason for r in reports if r.reason))

# One word in detail.
rep = classify("A B^2 A B^3 A^4 B^5", witness=True)
print("\n", rep.standard_form, rep.verdict, rep.reason)
print("  relation summary", rep.relations)
print("  witness found:", rep.counterexample is not None)

# Words left without certificate or witness after an escalating search.
report = conjecture_check(3, [-1, 1, 2], budget=128)
print("\nclass 3 over {-1,1,2}:", {k: v for k, v in report.items() if k != "survivors"})
print("survivors:", report["survivors"])
