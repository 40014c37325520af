"""Symbolic traces of words under the diagonal-times-unitary parameterization.

With ``S = U U^T`` symmetric unitary, ``A`` diagonal and ``B = S E conj(S)``
for a diagonal ``E``, the trace of a standard-form word is a generalized
polynomial in the diagonal entries. Two layouts are supported:

``general``
    ``A = diag(1, x1, y1)``, ``E = diag(1, x2, y2)``.
``positive``
    ``A = diag(1, x, 0)``, ``E = diag(1, y, 0)`` (positive words only).

A term is identified by its *family* ``(P1, P2, Q1, Q2)``: the 1-based
indices of the A-blocks that contribute their second (P1) or third (P2)
diagonal slot, and likewise for the E-blocks (Q1, Q2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gpoly import GPoly, evaluate, imaginary_part, merge_variables, reduce
from .gword import Word, adjacent, exactness, standard_form

__all__ = [
    "Family",
    "Parameterization",
    "TraceExpansion",
    "AdjacentCoefficient",
    "paper_unitary",
    "symbolic_trace",
    "term_coefficient",
    "adjacent_coefficient",
    "class2_imag_closed_form",
    "inexactness_certificate",
    "minimal_degree_imaginary",
    "family_has_adjacent_pair",
]

GENERAL_VARS = ("x1", "y1", "x2", "y2")
POSITIVE_VARS = ("x", "y")


def paper_unitary() -> np.ndarray:
    """The 3x3 unitary used for the class-2 counterexamples.

    Every entry is a multiple of 1/4, so the matrix is exact in binary.
    """
    return np.array(
        [
            [2, -1 - 1j, 3 - 1j],
            [-1 + 1j, 3, 1 - 2j],
            [3 + 1j, 1 + 2j, -1],
        ],
        dtype=complex,
    ) / 4


@dataclass(frozen=True)
class Parameterization:
    """Symmetric unitary ``S`` plus the diagonal layout (``general`` or ``positive``)."""

    S: np.ndarray
    mode: str = "general"

    def __post_init__(self):
        S = np.asarray(self.S, dtype=complex)
        if S.shape != (3, 3):
            raise ValueError("S must be 3x3")
        if self.mode not in ("general", "positive"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if np.abs(S - S.T).max() > 1e-12:
            raise ValueError("S is not symmetric")
        if np.abs(S @ S.conj().T - np.eye(3)).max() > 1e-12:
            raise ValueError("S is not unitary")
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @classmethod
    def from_unitary(cls, U: np.ndarray, mode: str = "general") -> "Parameterization":
        U = np.asarray(U, dtype=complex)
        return cls(U @ U.T, mode)

    @classmethod
    def paper(cls, mode: str = "general") -> "Parameterization":
        return cls.from_unitary(paper_unitary(), mode)

    @property
    def variables(self) -> tuple[str, ...]:
        return GENERAL_VARS if self.mode == "general" else POSITIVE_VARS

    @property
    def slots(self) -> tuple[int, ...]:
        return (0, 1, 2) if self.mode == "general" else (0, 1)

    def s(self, i: int, j: int) -> complex:
        """Entry ``s_{i,j}`` with 1-based indices."""
        return complex(self.S[i - 1, j - 1])

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "S": [[_r17(z.real), _r17(z.imag)] for z in self.S.ravel()],
        }


def _r17(x) -> float:
    return float(f"{float(x):.17g}")


@dataclass(frozen=True)
class Family:
    """Index subsets (1-based) selecting the non-unit diagonal slot of each block."""

    P1: frozenset = frozenset()
    P2: frozenset = frozenset()
    Q1: frozenset = frozenset()
    Q2: frozenset = frozenset()

    def __post_init__(self):
        for name in ("P1", "P2", "Q1", "Q2"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.P1 & self.P2 or self.Q1 & self.Q2:
            raise ValueError("a block can contribute only one diagonal slot")

    @classmethod
    def from_slots(cls, a: Sequence[int], b: Sequence[int]) -> "Family":
        return cls(
            frozenset(i + 1 for i, s in enumerate(a) if s == 1),
            frozenset(i + 1 for i, s in enumerate(a) if s == 2),
            frozenset(i + 1 for i, s in enumerate(b) if s == 1),
            frozenset(i + 1 for i, s in enumerate(b) if s == 2),
        )

    def slots(self, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        self.check(k)
        a = tuple(1 if i in self.P1 else 2 if i in self.P2 else 0 for i in range(1, k + 1))
        b = tuple(1 if j in self.Q1 else 2 if j in self.Q2 else 0 for j in range(1, k + 1))
        return a, b

    def check(self, k: int):
        for idx in self.P1 | self.P2 | self.Q1 | self.Q2:
            if not 1 <= idx <= k:
                raise ValueError(f"index {idx} out of range for class {k}")

    @property
    def P(self) -> frozenset:
        return self.P1 | self.P2

    @property
    def Q(self) -> frozenset:
        return self.Q1 | self.Q2

    def exponents(self, w: Word, mode: str = "general") -> tuple:
        p, q = w.p, w.q
        # sums run over ascending indices so equal subsets give identical floats
        def total(idx, vals):
            return sum((vals[i - 1] for i in sorted(idx)), Fraction(0))
        if mode == "general":
            return (total(self.P1, p), total(self.P2, p), total(self.Q1, q), total(self.Q2, q))
        if self.P2 or self.Q2:
            raise ValueError("positive layout has no third slot")
        return (total(self.P1, p), total(self.Q1, q))

    def as_dict(self) -> dict:
        return {name: sorted(getattr(self, name)) for name in ("P1", "P2", "Q1", "Q2")}


def family_has_adjacent_pair(f: Family, k: int) -> bool:
    return any(adjacent(i, j, k) for i in f.P for j in f.Q)


def _slot_coefficient(S: np.ndarray, a: Sequence[int], b: Sequence[int]) -> complex:
    # A_i B_i A_{i+1}: B_{uv} = sum_m S[u, m] e_m conj(S[v, m])
    k = len(a)
    c = 1 + 0j
    for i in range(k):
        c *= S[a[i], b[i]] * np.conj(S[a[(i + 1) % k], b[i]])
    return complex(c)


@dataclass
class TraceExpansion:
    """Reduced symbolic trace plus the coefficient contributed by every family."""

    word: Word
    param: Parameterization
    poly: GPoly
    provenance: dict = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.word.blocks) // 2

    def family_coefficient(self, family: Family) -> complex:
        family.check(self.k)
        return self.provenance.get(family, (None, 0j))[1]

    def families_for(self, exps: Sequence, tol: float = 1e-12) -> list[Family]:
        """Families whose exponent vector matches ``exps``."""
        target = [float(e) for e in exps]
        return [
            f
            for f, (key, _) in self.provenance.items()
            if all(abs(float(e) - t) <= tol for e, t in zip(key, target))
        ]

    def constant_term(self) -> complex:
        return self.family_coefficient(Family())

    def evaluate(self, point: Sequence[float]) -> complex:
        return evaluate(self.poly, point)

    def to_dict(self) -> dict:
        terms = []
        for f, (key, c) in sorted(self.provenance.items(), key=lambda kv: _family_order(kv[0])):
            if abs(c) == 0:
                continue
            d = f.as_dict()
            d.update(exp=[_r17(e) for e in key], re=_r17(c.real), im=_r17(c.imag))
            terms.append(d)
        return {
            "word": str(self.word),
            **self.param.as_dict(),
            "poly": self.poly.to_dict(),
            "provenance": terms,
        }


def _family_order(f: Family):
    return (sorted(f.P1), sorted(f.P2), sorted(f.Q1), sorted(f.Q2))


def _require_standard(w: Word) -> Word:
    sw = standard_form(w)
    if sw != w:
        raise ValueError(f"word {w} is not in standard form (expected {sw})")
    if len(w.blocks) < 2:
        raise ValueError("trace expansion needs class number >= 1")
    return w


def symbolic_trace(w: Word, param: Parameterization) -> TraceExpansion:
    """Expand ``Tr[A^p1 S E^q1 conj(S) ... A^pk S E^qk conj(S)]``.

    Every choice of one diagonal slot per block is a family; its coefficient
    is a product of entries of ``S`` and ``conj(S)`` and its monomial carries
    the subset sums of the chosen exponents.
    """
    w = _require_standard(w)
    if param.mode == "positive" and not w.is_positive:
        raise ValueError("positive layout needs a positive word")
    k = len(w.blocks) // 2
    S = np.asarray(param.S)
    provenance: dict = {}
    raw = []
    for a in itertools.product(param.slots, repeat=k):
        for b in itertools.product(param.slots, repeat=k):
            c = _slot_coefficient(S, a, b)
            f = Family.from_slots(a, b)
            key = f.exponents(w, param.mode)
            if not w.is_exact:
                key = tuple(float(e) for e in key)
            provenance[f] = (key, c)
            raw.append((key, c))
    poly = reduce(param.variables, raw)
    return TraceExpansion(w, param, poly, provenance)


# -- F-substitution -----------------------------------------------------------

def _diag_poly(entries: Sequence[GPoly]) -> list[list[GPoly]]:
    vs = entries[0].variables
    z = GPoly.zero(vs)
    return [[entries[i] if i == j else z for j in range(3)] for i in range(3)]


def _const_matrix(M: np.ndarray, vs) -> list[list[GPoly]]:
    return [[GPoly.constant(vs, M[i, j]) for j in range(3)] for i in range(3)]


def _matmul(X, Y):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = X[i][0] * Y[0][j]
            for m in (1, 2):
                acc = acc + X[i][m] * Y[m][j]
            row.append(acc)
        out.append(row)
    return out


def term_coefficient(w: Word, param: Parameterization, family: Family) -> complex:
    """Coefficient of one family, isolated by substituting ``F = diag(1,0,0)``.

    Blocks outside the family's index sets are replaced by ``F``; the kept
    blocks get one formal variable per diagonal slot, the resulting matrix
    product is expanded, and the coefficient of the monomial selecting the
    family's slots is read off. This does not share code with
    :func:`symbolic_trace`.
    """
    w = _require_standard(w)
    k = len(w.blocks) // 2
    family.check(k)
    if param.mode == "positive" and (family.P2 or family.Q2):
        raise ValueError("positive layout has no third slot")
    vs = []
    for i in sorted(family.P):
        vs += [f"X1_{i}", f"Y1_{i}"]
    for j in sorted(family.Q):
        vs += [f"X2_{j}", f"Y2_{j}"]
    vs = tuple(vs) or ("_",)
    one = GPoly.constant(vs, 1)
    zero = GPoly.zero(vs)
    third = param.mode == "general"

    def block(kept: bool, xname: str, yname: str):
        if not kept:
            return _diag_poly([one, zero, zero])
        return _diag_poly([
            one,
            GPoly.monomial(vs, {xname: 1}),
            GPoly.monomial(vs, {yname: 1}) if third else zero,
        ])

    S = _const_matrix(np.asarray(param.S), vs)
    Sbar = _const_matrix(np.conj(param.S), vs)
    M = None
    for i in range(1, k + 1):
        Ai = block(i in family.P, f"X1_{i}", f"Y1_{i}")
        Ei = block(i in family.Q, f"X2_{i}", f"Y2_{i}")
        factor = _matmul(_matmul(Ai, S), _matmul(Ei, Sbar))
        M = factor if M is None else _matmul(M, factor)
    tr = M[0][0] + M[1][1] + M[2][2]
    target = {}
    for i in family.P1:
        target[f"X1_{i}"] = 1
    for i in family.P2:
        target[f"Y1_{i}"] = 1
    for j in family.Q1:
        target[f"X2_{j}"] = 1
    for j in family.Q2:
        target[f"Y2_{j}"] = 1
    return tr.coefficient(tuple(target.get(v, 0) for v in vs))


# -- closed forms ---------------------------------------------------------------

@dataclass(frozen=True)
class AdjacentCoefficient:
    """Closed-form coefficient of an adjacent pair term and its conjugate."""

    value: complex
    conjugate: complex
    nonreal: bool

    def matches(self, c: complex, tol: float = 1e-10) -> str | None:
        if abs(c - self.value) <= tol:
            return "value"
        if abs(c - self.conjugate) <= tol:
            return "conjugate"
        return None


def adjacent_coefficient(k: int, S: np.ndarray, mode: str = "general", tol: float = 1e-12) -> AdjacentCoefficient:
    """Coefficient of ``x1^p_i y2^q_j`` (general) or ``x^p_i y^q_j`` (positive)
    for an adjacent pair in a class-``k`` word.

    The value returned is the one for ``(i, j) = (1, 1)``; the other adjacent
    orientation carries the conjugate.
    """
    if k <= 1:
        raise ValueError("adjacent coefficients need class number > 1")
    S = np.asarray(S, dtype=complex)
    s11, s21, s31, s22, s32 = S[0, 0], S[1, 0], S[2, 0], S[1, 1], S[2, 1]
    tail = (s11 * np.conj(s11)) ** (k - 2)
    if mode == "general":
        c = np.conj(s21) * s11 * np.conj(s31) * s32 * tail
    elif mode == "positive":
        c = s22 * np.conj(s21) ** 2 * s11 * tail
    else:
        raise ValueError(f"unknown mode {mode!r}")
    c = complex(c)
    return AdjacentCoefficient(c, c.conjugate(), abs(c.imag) > tol)


def class2_imag_closed_form(p1, q1, p2, q2, x: float, y: float) -> float:
    """Imaginary part of the class-2 trace for the fixed unitary with
    ``x = x1 = x2`` and ``y = y1 = y2``."""
    if not (x > 0 and y > 0):
        raise ValueError("x and y must be positive")
    p1, q1, p2, q2 = map(float, (p1, q1, p2, q2))

    def factor(a, b):
        return x ** b * (y ** a - 1) + x ** a * (1 - y ** b) + y ** b - y ** a

    return 3.0 / 128.0 * factor(p1, p2) * factor(q1, q2)


def merged_imaginary(exp: TraceExpansion) -> GPoly:
    """Imaginary part of a trace with all x-type and all y-type variables identified."""
    if exp.param.mode == "general":
        g = merge_variables(exp.poly, {"x1": "x", "x2": "x", "y1": "y", "y2": "y"})
    else:
        g = merge_variables(exp.poly, {"x": "t", "y": "t"})
    return imaginary_part(g)


def minimal_degree_imaginary(exp: TraceExpansion, tol: float = 1e-12) -> tuple[float, float] | None:
    """Lowest total degree with a nonzero imaginary coefficient after setting
    ``x = y`` in the positive layout, and that coefficient."""
    if exp.param.mode != "positive":
        raise ValueError("needs the positive layout")
    g = merged_imaginary(exp)
    live = [(float(key[0]), c.real) for key, c in g.terms.items() if abs(c) > tol]
    if not live:
        return None
    return min(live)


def inexactness_certificate(
    w: Word,
    S: np.ndarray,
    x_grid: Iterable[float] = (0.9, 0.7, 0.5, 0.3, 0.1, 0.05, 0.01),
    threshold: float = 1e-10,
) -> tuple[float, float] | None:
    """First grid value ``x`` (with ``y = x``) at which the positive-layout
    trace has imaginary part above ``threshold``, or ``None``."""
    w = standard_form(w)
    if not w.is_positive:
        raise ValueError("needs a positive word")
    exp = symbolic_trace(w, Parameterization(np.asarray(S), "positive"))
    g = merged_imaginary(exp)
    for x in x_grid:
        val = evaluate(g, [x]).real
        if abs(val) > threshold:
            return float(x), float(val)
    return None


def predicted_minimal_sum(w: Word, S: np.ndarray) -> float:
    """``Im(c) * (#odd - #even)`` where ``c`` is the positive-layout adjacent
    coefficient; the lowest-degree imaginary coefficient of an inexact word."""
    rep = exactness(w)
    c = adjacent_coefficient(len(w.blocks) // 2, S, "positive")
    return c.value.imag * (rep.count_odd - rep.count_even)
