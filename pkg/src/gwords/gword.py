"""Generalized words in two letters and their combinatorial invariants.

A word is a sequence of ``(letter, exponent)`` blocks with letters ``"A"`` and
``"B"`` and real exponents. Exponents are kept as :class:`fractions.Fraction`
whenever they were given exactly (integers, decimals, ``a/b``) and as ``float``
otherwise. All objects are immutable and every function is pure.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

__all__ = [
    "Word",
    "WordSyntaxError",
    "ExactnessReport",
    "NearSymmetrySplit",
    "RelationWitness",
    "parse_word",
    "standard_form",
    "transform",
    "reversal",
    "swap_letters",
    "cycle_pairs",
    "scale",
    "is_symmetric",
    "nearly_symmetric_split",
    "is_nearly_symmetric",
    "exactness",
    "thm31_relations",
    "adjacent",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9
LETTERS = ("A", "B")


class WordSyntaxError(ValueError):
    """Raised when a word string does not follow the word grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


def _as_exponent(value) -> Fraction | float:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean exponent")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Real):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite exponent {value!r}")
        return value
    raise TypeError(f"unsupported exponent type {type(value).__name__}")


def _fmt_exp(e) -> str:
    if isinstance(e, Fraction):
        return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
    return repr(float(e))


@dataclass(frozen=True)
class Word:
    """An ordered tuple of ``(letter, exponent)`` blocks.

    The constructor does not normalize; use :func:`standard_form` for that.
    """

    blocks: tuple[tuple[str, Fraction | float], ...] = ()

    def __post_init__(self):
        blocks = []
        for letter, exp in self.blocks:
            if letter not in LETTERS:
                raise ValueError(f"unknown letter {letter!r}")
            blocks.append((letter, _as_exponent(exp)))
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def from_exponents(cls, p: Sequence, q: Sequence) -> "Word":
        """Build ``A^p1 B^q1 ... A^pk B^qk``."""
        if len(p) != len(q):
            raise ValueError("p and q must have the same length")
        blocks = []
        for pi, qi in zip(p, q):
            blocks.append(("A", pi))
            blocks.append(("B", qi))
        return cls(tuple(blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        if not self.blocks:
            return "I"
        parts = []
        for letter, exp in self.blocks:
            parts.append(letter if exp == 1 else f"{letter}^{_fmt_exp(exp)}")
        return " ".join(parts)

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(b[0] for b in self.blocks)

    @property
    def exponents(self) -> tuple:
        return tuple(b[1] for b in self.blocks)

    @property
    def p(self) -> tuple:
        """Exponents of the A-blocks, in order."""
        return tuple(e for letter, e in self.blocks if letter == "A")

    @property
    def q(self) -> tuple:
        """Exponents of the B-blocks, in order."""
        return tuple(e for letter, e in self.blocks if letter == "B")

    @property
    def class_number(self) -> int:
        """Number of A-blocks of the standard form (0 for one block or none)."""
        return len(standard_form(self).blocks) // 2

    @property
    def is_exact(self) -> bool:
        """True when every exponent is an exact rational."""
        return all(isinstance(e, Fraction) for e in self.exponents)

    @property
    def is_positive(self) -> bool:
        return all(e > 0 for e in self.exponents)

    def is_standard(self) -> bool:
        return self == standard_form(self)


# -- parsing -----------------------------------------------------------------

_NUMBER = re.compile(r"-?\d+(?:/\d+|\.\d+)?")


def parse_word(text: str) -> Word:
    """Parse ``"A^3/2 B^-2 A"`` style text into an un-normalized word.

    Grammar::

        word     := block+
        block    := letter exponent?
        letter   := "A" | "B"
        exponent := "^" number
        number   := ["-"] digits ["." digits] | ["-"] digits "/" digits
    """
    blocks = []
    pos, n = 0, len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        ch = text[pos]
        if ch not in LETTERS:
            raise WordSyntaxError(f"expected letter A or B, got {ch!r}", pos)
        pos += 1
        exp = Fraction(1)
        if pos < n and text[pos] == "^":
            pos += 1
            m = _NUMBER.match(text, pos)
            if m is None:
                raise WordSyntaxError("malformed exponent", pos)
            token = m.group(0)
            if "/" in token:
                num, den = token.split("/")
                if int(den) == 0:
                    raise WordSyntaxError("division by zero in exponent", pos)
                exp = Fraction(int(num), int(den))
            else:
                exp = Fraction(token)
            pos = m.end()
        blocks.append((ch, exp))
    if not blocks:
        raise WordSyntaxError("empty word", 0)
    return Word(tuple(blocks))


# -- normalization -----------------------------------------------------------

def _merge_linear(blocks: list) -> list:
    out: list = []
    for letter, exp in blocks:
        if exp == 0:
            continue
        if out and out[-1][0] == letter:
            total = out[-1][1] + exp
            out.pop()
            if total != 0:
                out.append((letter, total))
            # a cancelled block can expose two equal neighbours
            while len(out) >= 2 and out[-1][0] == out[-2][0]:
                l2, e2 = out.pop()
                l1, e1 = out.pop()
                if e1 + e2 != 0:
                    out.append((l1, e1 + e2))
        else:
            out.append((letter, exp))
    return out


def standard_form(w: Word) -> Word:
    """Merge, drop zero blocks and rotate to start with A and end with B.

    Rotation moves the fewest leading blocks to the end, so the first A-block
    of the merged cyclic sequence becomes ``p1``.
    """
    blocks = _merge_linear(list(w.blocks))
    while len(blocks) >= 2 and blocks[0][0] == blocks[-1][0]:
        letter, e = blocks.pop()
        blocks[0] = (letter, e + blocks[0][1])
        blocks = _merge_linear(blocks)
    if len(blocks) >= 2 and blocks[0][0] == "B":
        blocks = blocks[1:] + blocks[:1]
    return Word(tuple(blocks))


# -- transformations ---------------------------------------------------------

def reversal(w: Word) -> Word:
    return standard_form(Word(w.blocks[::-1]))


def swap_letters(w: Word) -> Word:
    return standard_form(Word(tuple(("B" if l == "A" else "A", e) for l, e in w.blocks)))


def cycle_pairs(w: Word, j: int = 1) -> Word:
    """Rotate a standard-form word left by ``j`` (A, B) block pairs."""
    if not w.is_standard():
        raise ValueError("cycle_pairs needs a word in standard form")
    k = len(w.blocks) // 2
    if k == 0:
        return w
    shift = 2 * (j % k)
    return Word(w.blocks[shift:] + w.blocks[:shift])


def scale(w: Word, letter: str, c) -> Word:
    """Multiply every exponent of ``letter`` by the nonzero scalar ``c``."""
    if letter not in LETTERS:
        raise ValueError(f"unknown letter {letter!r}")
    c = _as_exponent(c)
    if c == 0:
        raise ValueError("scale factor must be nonzero")
    return Word(tuple((l, e * c if l == letter else e) for l, e in w.blocks))


def transform(w: Word, kind: str, *args) -> Word:
    """Dispatch on ``kind`` in ``reversal``, ``swap_letters``, ``cycle_pairs``, ``scale``."""
    funcs = {
        "reversal": reversal,
        "swap_letters": swap_letters,
        "cycle_pairs": cycle_pairs,
        "scale": scale,
    }
    try:
        func = funcs[kind]
    except KeyError:
        raise ValueError(f"unknown transformation {kind!r}") from None
    return func(w, *args)


# -- symmetry ----------------------------------------------------------------

def is_symmetric(w: Word) -> bool:
    return w.blocks == w.blocks[::-1]


@dataclass(frozen=True)
class NearSymmetrySplit:
    """After ``cycle_pairs(rotation)``, the first ``2*index - 1`` blocks and the
    remaining blocks are both palindromes."""

    rotation: int
    index: int
    left: Word
    right: Word

    def as_dict(self) -> dict:
        return {
            "rotation": self.rotation,
            "index": self.index,
            "left": str(self.left),
            "right": str(self.right),
        }


def nearly_symmetric_split(w: Word) -> NearSymmetrySplit | None:
    """Find a rotation and split into two symmetric words, or ``None``.

    Every pair rotation is searched, so the result does not depend on which
    A-block the standard form happened to start from.
    """
    w = standard_form(w)
    k = len(w.blocks) // 2
    if k == 0:
        return NearSymmetrySplit(0, 0, w, Word())
    for r in range(k):
        blocks = w.blocks[2 * r:] + w.blocks[:2 * r]
        for i in range(1, k + 1):
            left, right = blocks[:2 * i - 1], blocks[2 * i - 1:]
            if left == left[::-1] and right == right[::-1]:
                return NearSymmetrySplit(r, i, Word(left), Word(right))
    return None


def is_nearly_symmetric(w: Word) -> bool:
    return nearly_symmetric_split(w) is not None


# -- exactness ---------------------------------------------------------------

def _close(a, b, tol: float) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tol


@dataclass(frozen=True)
class ExactnessReport:
    l_values: tuple
    min_value: Fraction | float
    min_indices: tuple[int, ...]
    count_odd: int
    count_even: int

    @property
    def exact(self) -> bool:
        return self.count_odd == self.count_even

    def as_dict(self) -> dict:
        return {
            "l_values": [float(v) for v in self.l_values],
            "min_value": float(self.min_value),
            "min_indices": list(self.min_indices),
            "count_odd": self.count_odd,
            "count_even": self.count_even,
            "exact": self.exact,
        }


def pair_sums(w: Word) -> tuple:
    """Cyclically consecutive sums ``p1+q1, q1+p2, ..., pk+qk, qk+p1``."""
    e = w.exponents
    n = len(e)
    return tuple(e[i] + e[(i + 1) % n] for i in range(n))


def exactness(w: Word, tol: float = DEFAULT_TOL) -> ExactnessReport:
    """Locate the minima of the pair sums and count them by index parity.

    Indices are 1-based; comparisons are exact when all exponents are
    rational and use ``tol`` otherwise.
    """
    w = standard_form(w)
    if len(w.blocks) < 2:
        raise ValueError("exactness needs class number >= 1")
    values = pair_sums(w)
    lo = min(values)
    idx = tuple(i + 1 for i, v in enumerate(values) if _close(v, lo, tol))
    odd = sum(1 for i in idx if i % 2 == 1)
    return ExactnessReport(values, lo, idx, odd, len(idx) - odd)


# -- subset-sum relations ----------------------------------------------------

@dataclass(frozen=True)
class RelationWitness:
    """Index sets (1-based) with ``sum(p[P]) == p1`` and ``sum(q[Q]) == q1``."""

    p_subset: frozenset
    q_subset: frozenset
    approximate: bool = False

    @property
    def trivial(self) -> bool:
        return self.p_subset == {1} and self.q_subset == {1}

    def as_dict(self) -> dict:
        return {
            "P": sorted(self.p_subset),
            "Q": sorted(self.q_subset),
            "trivial": self.trivial,
            "approximate": self.approximate,
        }


def _subsets_summing_to(values: Sequence, target, exact: bool, tol: float) -> list[frozenset]:
    hits = []
    n = len(values)
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            s = sum((values[i] for i in combo), Fraction(0) if exact else 0.0)
            if (s == target) if exact else abs(float(s) - float(target)) <= tol:
                hits.append(frozenset(i + 1 for i in combo))
    return hits


def thm31_relations(w: Word, tol: float = DEFAULT_TOL) -> list[RelationWitness]:
    """All pairs of index subsets whose exponent sums reproduce ``p1`` and ``q1``.

    If the only pair returned is the trivial one, no nontrivial linear
    relation protects the word and it cannot be good. Exact arithmetic is
    used for rational exponents; otherwise sums are compared to ``tol`` and
    the witnesses are flagged approximate.
    """
    w = standard_form(w)
    if len(w.blocks) < 2:
        raise ValueError("relations need class number >= 1")
    exact = w.is_exact
    p, q = w.p, w.q
    if len(p) > 20:
        raise ValueError("subset enumeration is limited to class number 20")
    ps = _subsets_summing_to(p, p[0], exact, tol)
    qs = _subsets_summing_to(q, q[0], exact, tol)
    return [RelationWitness(P, Q, not exact) for P in ps for Q in qs]


def adjacent(i: int, j: int, k: int) -> bool:
    """Whether ``p_i`` and ``q_j`` are cyclic neighbours in a class-``k`` word."""
    if not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"indices ({i}, {j}) out of range for class {k}")
    return i == j or i - 1 == j or (i == 1 and j == k)


def words_of_class(k: int, exponents: Iterable) -> Iterable[Word]:
    """Every standard-form word of class ``k`` with exponents from ``exponents``."""
    values = [_as_exponent(e) for e in exponents]
    for combo in itertools.product(values, repeat=2 * k):
        yield Word.from_exponents(combo[0::2], combo[1::2])
