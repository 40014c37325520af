"""Sparse polynomials with complex coefficients and arbitrary real exponents.

A :class:`GPoly` maps exponent vectors (one real per variable) to complex
coefficients. Instances are always reduced: no exponent vector is stored
twice and negligible coefficients are dropped.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GPoly",
    "reduce",
    "combine",
    "evaluate",
    "imaginary_part",
    "merge_variables",
    "COEF_TOL",
    "EXP_TOL",
]

COEF_TOL = 1e-14
EXP_TOL = 1e-12


def _collapse_close(terms: dict, tol: float) -> dict:
    """Snap float exponents that agree within ``tol`` onto one value, then merge.

    Clustering is done per coordinate on the sorted distinct values, which
    keeps the pass O(n log n).
    """
    if not terms:
        return terms
    keys = list(terms)
    m = len(keys[0])
    if all(isinstance(e, (Fraction, int)) for k in keys for e in k):
        return terms
    snaps = []
    for j in range(m):
        values = sorted({k[j] for k in keys}, key=float)
        snap, rep = {}, None
        for v in values:
            if rep is None or float(v) - float(rep) > tol:
                rep = v
            snap[v] = rep
        snaps.append(snap)
    out: dict = {}
    for k in keys:
        nk = tuple(snaps[j][e] for j, e in enumerate(k))
        out[nk] = out.get(nk, 0j) + terms[k]
    return out


class GPoly:
    """Generalized polynomial over named variables.

    Build instances with :func:`reduce` or the arithmetic operators; the
    constructor trusts that ``terms`` is already reduced.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, complex] | None = None):
        self.variables = tuple(variables)
        self.terms = dict(terms or {})

    # construction helpers
    @classmethod
    def zero(cls, variables: Sequence[str]) -> "GPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], c: complex) -> "GPoly":
        return reduce(variables, [((0,) * len(variables), c)])

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Mapping[str, object], c: complex = 1.0) -> "GPoly":
        vec = tuple(exps.get(v, 0) for v in variables)
        unknown = set(exps) - set(variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        return reduce(variables, [(vec, c)])

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence) -> complex:
        key = tuple(exps)
        if key in self.terms:
            return self.terms[key]
        fk = tuple(float(e) for e in key)
        for k, c in self.terms.items():
            if all(abs(float(a) - b) <= EXP_TOL for a, b in zip(k, fk)):
                return c
        return 0j

    def constant_term(self) -> complex:
        return self.coefficient((0,) * len(self.variables))

    def _check(self, other: "GPoly"):
        if not isinstance(other, GPoly):
            raise TypeError(f"expected GPoly, got {type(other).__name__}")
        if other.variables != self.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other):
        if not isinstance(other, GPoly):
            other = GPoly.constant(self.variables, other)
        return combine("add", self, other)

    __radd__ = __add__

    def __neg__(self):
        return GPoly(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GPoly):
            return combine("mul", self, other)
        return reduce(self.variables, [(k, c * other) for k, c in self.terms.items()])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __call__(self, *point):
        return evaluate(self, point)

    def __repr__(self):
        return f"GPoly({self.variables!r}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: tuple(float(e) for e in k)):
            c = self.terms[key]
            mono = "*".join(f"{v}^{_fmt(e)}" for v, e in zip(self.variables, key) if e != 0)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # serialization
    def to_dict(self) -> dict:
        keys = sorted(self.terms, key=lambda k: tuple(float(e) for e in k))
        return {
            "vars": list(self.variables),
            "terms": [
                {
                    "exp": [_r17(e) for e in k],
                    "re": _r17(self.terms[k].real),
                    "im": _r17(self.terms[k].imag),
                }
                for k in keys
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "GPoly":
        variables = data["vars"]
        return reduce(variables, [(tuple(t["exp"]), complex(t["re"], t["im"])) for t in data["terms"]], tol=0.0)

    @classmethod
    def from_json(cls, text: str) -> "GPoly":
        return cls.from_dict(json.loads(text))


def _fmt(e) -> str:
    if isinstance(e, Fraction):
        return str(e)
    return f"{float(e):g}"


def _r17(x) -> float:
    # round-trips through JSON with 17 significant digits
    return float(f"{float(x):.17g}")


def reduce(variables: Sequence[str], raw_terms: Iterable[tuple[Sequence, complex]], tol: float = COEF_TOL) -> GPoly:
    """Combine like terms and drop coefficients with magnitude below ``tol``."""
    variables = tuple(variables)
    m = len(variables)
    acc: dict = {}
    for exps, c in raw_terms:
        key = tuple(exps)
        if len(key) != m:
            raise ValueError(f"exponent vector {key} has arity {len(key)}, expected {m}")
        acc[key] = acc.get(key, 0j) + complex(c)
    acc = _collapse_close(acc, EXP_TOL)
    return GPoly(variables, {k: c for k, c in acc.items() if abs(c) > tol})


def combine(op: str, a: GPoly, b: GPoly) -> GPoly:
    """``op`` is ``"add"`` or ``"mul"``; both operands share one variable list."""
    a._check(b)
    if op == "add":
        return reduce(a.variables, list(a.terms.items()) + list(b.terms.items()))
    if op == "mul":
        raw = []
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                raw.append((tuple(x + y for x, y in zip(ka, kb)), ca * cb))
        return reduce(a.variables, raw)
    raise ValueError(f"unknown operation {op!r}")


def evaluate(g: GPoly, point: Sequence[float]) -> complex:
    """Value of ``g`` at a point with strictly positive coordinates."""
    point = [float(x) for x in point]
    if len(point) != len(g.variables):
        raise ValueError(f"point has {len(point)} coordinates, expected {len(g.variables)}")
    if any(not (x > 0) for x in point):
        raise ValueError("evaluation needs strictly positive coordinates")
    if not g.terms:
        return 0j
    logs = np.log(point)
    keys = list(g.terms)
    exps = np.array([[float(e) for e in k] for k in keys], dtype=float).reshape(len(keys), len(point))
    coefs = np.array([g.terms[k] for k in keys], dtype=complex)
    return complex(np.sum(coefs * np.exp(exps @ logs)))


def imaginary_part(g: GPoly) -> GPoly:
    """Replace each coefficient by its imaginary part.

    Monomials are real and positive at positive points, so this commutes with
    taking ``Im`` of the value.
    """
    return reduce(g.variables, [(k, c.imag) for k, c in g.terms.items()])


def merge_variables(g: GPoly, mapping: Mapping[str, str]) -> GPoly:
    """Identify variables: exponents of variables mapped to the same name add up.

    Variables missing from ``mapping`` keep their own name. The new variable
    order follows first appearance in the old order.
    """
    targets = [mapping.get(v, v) for v in g.variables]
    new_vars: list[str] = []
    for t in targets:
        if t not in new_vars:
            new_vars.append(t)
    pos = {v: i for i, v in enumerate(new_vars)}
    raw = []
    for key, c in g.terms.items():
        vec = [0] * len(new_vars)
        for t, e in zip(targets, key):
            vec[pos[t]] = vec[pos[t]] + e
        raw.append((tuple(vec), c))
    return reduce(new_vars, raw)


def isclose_poly(a: GPoly, b: GPoly, atol: float = 1e-12) -> bool:
    """Coefficientwise comparison of two polynomials over the same variables."""
    a._check(b)
    diff = a - b
    return all(abs(c) <= atol for c in diff.terms.values())
