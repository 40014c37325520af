"""Concrete matrices: primary powers, word evaluation, spectra and refutation.

The refutation engine searches for Hermitian positive definite pairs that
give a word a non-real trace, following the diagonal-plus-symmetric-unitary
constructions of :mod:`gwords.trace`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .gword import Word, parse_word, standard_form
from .trace import Parameterization, paper_unitary

__all__ = [
    "HermitianPD",
    "NotPositiveDefinite",
    "EigenvalueError",
    "primary_power",
    "charpoly",
    "durand_kerner",
    "eig_general",
    "haar_unitary",
    "random_pd",
    "build_pair",
    "evaluate_word",
    "spectrum_check",
    "SpectrumReport",
    "RefuteConfig",
    "Counterexample",
    "refute",
    "sample_rng",
]

HERMITIAN_TOL = 1e-12
EIG_POS_TOL = 1e-12
DEFAULT_GRID = (0.9, 0.7, 0.5, 0.3, 0.1, 0.05, 0.01)
EPSILONS = tuple(10.0 ** -e for e in range(2, 9))


class NotPositiveDefinite(ValueError):
    pass


class EigenvalueError(ArithmeticError):
    """Durand-Kerner failed to reach the residual target."""


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


class HermitianPD:
    """Hermitian positive definite matrix with a cached eigendecomposition."""

    def __init__(self, entries, _eig=None):
        M = np.array(entries, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("expected a square matrix")
        scale = max(1.0, float(np.abs(M).max()))
        if np.abs(M - M.conj().T).max() > HERMITIAN_TOL * scale:
            raise NotPositiveDefinite("matrix is not Hermitian")
        M = (M + M.conj().T) / 2
        if _eig is None:
            w, V = np.linalg.eigh(M)
        else:
            w, V = _eig
        # a supplied decomposition (e.g. a power of a PD matrix) only needs
        # strictly positive eigenvalues; a fresh one gets a safety margin
        floor = 0.0 if _eig is not None else EIG_POS_TOL
        if w.min() <= floor:
            raise NotPositiveDefinite(f"smallest eigenvalue {w.min():.3e} is not positive")
        recon = (V * w) @ V.conj().T
        if np.linalg.norm(recon - M) > 1e-10 * max(1.0, np.linalg.norm(M)):
            raise NotPositiveDefinite("eigendecomposition does not reconstruct the matrix")
        M.setflags(write=False)
        self.entries = M
        self.eigenvalues = w
        self.eigenvectors = V

    @classmethod
    def from_eig(cls, V, w) -> "HermitianPD":
        V = np.asarray(V, dtype=complex)
        w = np.asarray(w, dtype=float)
        return cls((V * w) @ V.conj().T, _eig=(w, V))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def power(self, p) -> "HermitianPD":
        return primary_power(self, p)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return f"HermitianPD(n={self.n}, eigenvalues={self.eigenvalues})"


def primary_power(M: HermitianPD, p) -> HermitianPD:
    """``U D^p U*`` from the cached decomposition of ``M``."""
    p = float(p)
    if p == 1.0:
        return M
    return HermitianPD.from_eig(M.eigenvectors, M.eigenvalues ** p)


# -- eigenvalues via the characteristic polynomial ----------------------------

def charpoly(M) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first
    (Faddeev-LeVerrier)."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    Mk = np.zeros_like(M)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(M @ Mk) / k
    return coeffs


def durand_kerner(coeffs, max_iter: int = 2000, tol: float = 1e-15) -> tuple[np.ndarray, bool]:
    """Simultaneous root iteration for a monic polynomial; returns (roots, converged)."""
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex), True
    bound = 1 + np.abs(c[1:]).max()
    z = bound * (0.4 + 0.9j) ** np.arange(n)
    converged = False
    best, stalled = np.inf, 0
    for _ in range(max_iter):
        num = np.polyval(c, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        den = diff.prod(axis=1)
        # coincident iterates would divide by zero; nudge them apart
        den = np.where(den == 0, 1e-300, den)
        step = num / den
        z = z - step
        rel = float((np.abs(step) / np.maximum(1.0, np.abs(z))).max())
        if rel <= tol:
            converged = True
            break
        # below 1e-11 the steps are rounding noise once they stop shrinking
        if rel < best:
            best, stalled = rel, 0
        else:
            stalled += 1
        if best <= 1e-11 and stalled >= 5:
            converged = True
            break
    # Newton polish for simple roots
    dc = np.polyder(c)
    for _ in range(3):
        d = np.polyval(dc, z)
        ok = np.abs(d) > 1e-12 * np.maximum(1.0, np.abs(z)) ** (n - 1)
        newz = np.where(ok, z - np.polyval(c, z) / np.where(ok, d, 1.0), z)
        better = np.abs(np.polyval(c, newz)) <= np.abs(np.polyval(c, z))
        z = np.where(better, newz, z)
    return z, converged


def charpoly_residuals(M, roots) -> np.ndarray:
    """``|p(l)| / max(1, |l|^n)`` for each root ``l``."""
    c = charpoly(M)
    n = len(c) - 1
    roots = np.asarray(roots)
    return np.abs(np.polyval(c, roots)) / np.maximum(1.0, np.abs(roots) ** n)


def _merge_clusters(c, roots, radius: float = 1e-3) -> np.ndarray:
    """Replace clusters of iterates around a multiple root by one polished value.

    An m-fold root is only resolved to about eps^(1/m) by the iteration.
    Newton on the (m-1)-th derivative, started at the cluster mean, recovers
    it to full precision. The result is kept only when its residual is no
    worse than the worst member's.
    """
    roots = roots.copy()
    n = len(roots)
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        near = np.abs(roots - roots[i]) <= radius * max(1.0, abs(roots[i]))
        near &= ~seen
        seen |= near
        if near.sum() < 2:
            continue
        # an m-fold root of p is a simple root of its (m-1)-th derivative
        m = int(near.sum())
        d = np.polyder(c, m - 1)
        dd = np.polyder(d)
        z = roots[near].mean()
        for _ in range(5):
            slope = np.polyval(dd, z)
            if slope == 0:
                break
            z = z - np.polyval(d, z) / slope
        if abs(np.polyval(c, z)) <= np.abs(np.polyval(c, roots[near])).max():
            roots[near] = z
    return roots


def eig_general(M, residual_tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a square matrix (n <= 6), sorted by (real, imag).

    The matrix is rescaled to unit max-entry before root finding and the
    residual bound applies to the rescaled characteristic polynomial.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("expected a square matrix")
    if n > 6:
        raise ValueError("eig_general is limited to n <= 6")
    s = float(np.abs(M).max())
    if s == 0.0:
        return np.zeros(n, dtype=complex)
    c = charpoly(M / s)
    roots, _ = durand_kerner(c)
    roots = _merge_clusters(c, roots)
    # residuals of the unit-scaled problem, so the bound is scale invariant
    res = charpoly_residuals(M / s, roots)
    roots = roots * s
    if not np.all(res < residual_tol):
        raise EigenvalueError(f"Durand-Kerner residual {res.max():.3e} above {residual_tol:.1e}")
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


# -- sampling -----------------------------------------------------------------

def haar_unitary(n: int, seed=None, rng: np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if n < 1:
        raise ValueError("n must be positive")
    if rng is None:
        rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_pd(n: int, rng: np.random.Generator, low: float = 0.2, high: float = 5.0) -> HermitianPD:
    """Haar eigenvectors with eigenvalues log-uniform in ``[low, high]``."""
    V = haar_unitary(n, rng=rng)
    w = np.exp(rng.uniform(np.log(low), np.log(high), n))
    return HermitianPD.from_eig(V, w)


def build_pair(param: Parameterization, values, epsilon: float | None = None) -> tuple[HermitianPD, HermitianPD]:
    """``A = diag(1, x1, y1)``, ``B = S diag(1, x2, y2) conj(S)``.

    In the positive layout ``values = (x, y)`` and ``epsilon`` fills the third
    diagonal slot of both matrices.
    """
    values = [float(v) for v in values]
    if param.mode == "general":
        if len(values) != 4:
            raise ValueError("general layout needs (x1, y1, x2, y2)")
        a = [1.0, values[0], values[1]]
        e = [1.0, values[2], values[3]]
    else:
        if len(values) != 2:
            raise ValueError("positive layout needs (x, y)")
        if epsilon is None or not epsilon > 0:
            raise ValueError("positive layout needs epsilon > 0")
        a = [1.0, values[0], epsilon]
        e = [1.0, values[1], epsilon]
    if min(a + e) <= 0:
        raise ValueError("diagonal entries must be positive")
    S = np.asarray(param.S)
    A = HermitianPD.from_eig(np.eye(3), a)
    # conj(S) = S^{-1} because S is symmetric and unitary
    B = HermitianPD.from_eig(S, e)
    return A, B


def evaluate_word(w: Word, A: HermitianPD, B: HermitianPD) -> np.ndarray:
    """Left-to-right product of primary powers."""
    if A.n != B.n:
        raise ValueError("A and B have different sizes")
    out = np.eye(A.n, dtype=complex)
    for letter, e in w.blocks:
        M = A if letter == "A" else B
        out = out @ primary_power(M, e).entries
    return out


def word_scale(w: Word, A: HermitianPD, B: HermitianPD) -> float:
    """Product of the spectral norms of the factors, floored at 1."""
    log_s = 0.0
    for letter, e in w.blocks:
        ev = (A if letter == "A" else B).eigenvalues
        log_s += float(np.max(np.log(ev) * float(e)))
    return max(1.0, math.exp(log_s))


@dataclass
class SpectrumReport:
    all_positive: bool
    eigenvalues: np.ndarray | None
    im_trace: float

    def as_dict(self) -> dict:
        ev = None if self.eigenvalues is None else [[float(z.real), float(z.imag)] for z in self.eigenvalues]
        return {"all_positive": self.all_positive, "eigenvalues": ev, "im_trace": self.im_trace}


def spectrum_check(w: Word, A: HermitianPD, B: HermitianPD, tol: float = 1e-8) -> SpectrumReport:
    """Whether every eigenvalue of the evaluated word is real and positive.

    If the eigensolver fails, the imaginary part of the trace decides alone.
    """
    M = evaluate_word(w, A, B)
    im_tr = float(np.trace(M).imag)
    try:
        ev = eig_general(M)
    except EigenvalueError:
        return SpectrumReport(abs(im_tr) <= tol, None, im_tr)
    ok = bool(np.all((np.abs(ev.imag) <= tol * (1 + np.abs(ev))) & (ev.real > tol)))
    return SpectrumReport(ok, ev, im_tr)


# -- refutation ---------------------------------------------------------------

@dataclass(frozen=True)
class RefuteConfig:
    strategy: str = "paper_u"
    samples: int = 200
    seed: int = 0
    epsilon: float = 1e-2
    im_threshold: float = 1e-9
    grid: tuple = DEFAULT_GRID
    low: float = 1e-2
    high: float = 1e2

    def __post_init__(self):
        if self.strategy not in ("paper_u", "general_param", "random"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not (self.epsilon > 0 and self.im_threshold > 0):
            raise ValueError("epsilon and im_threshold must be positive")
        if any(not x > 0 for x in self.grid):
            raise ValueError("grid values must be positive")
        object.__setattr__(self, "grid", tuple(float(x) for x in self.grid))


def _cplx_pairs(M) -> list:
    return [[[_r17(z.real), _r17(z.imag)] for z in row] for row in np.asarray(M)]


def _r17(x) -> float:
    return float(f"{float(x):.17g}")


def _from_pairs(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


@dataclass
class Counterexample:
    """A Hermitian PD pair on which the word has a non-real trace or a
    non-positive eigenvalue."""

    word: Word
    A: HermitianPD
    B: HermitianPD
    evidence: dict
    construction: dict
    tolerances: dict = field(default_factory=lambda: {"im_threshold": 1e-9, "revalidation_factor": 10.0})

    def validate(self) -> bool:
        """Recompute everything from the raw entries without cached data."""
        try:
            A = HermitianPD(np.array(self.A.entries))
            B = HermitianPD(np.array(self.B.entries))
        except NotPositiveDefinite:
            return False
        thr = self.tolerances["im_threshold"] * self.tolerances.get("revalidation_factor", 10.0)
        M = evaluate_word(self.word, A, B)
        scale = word_scale(self.word, A, B)
        if self.evidence["kind"] == "im_trace":
            im = float(np.trace(M).imag)
            recorded = float(self.evidence["im_trace"][1])
            return abs(im) > thr * scale and abs(im - recorded) <= thr * scale
        if self.evidence["kind"] == "eigenvalue":
            try:
                ev = eig_general(M)
            except EigenvalueError:
                return False
            return bool(_bad_eigenvalue(ev, scale) is not None)
        return False

    def to_dict(self) -> dict:
        return {
            "word": str(self.word),
            "construction": self.construction,
            "A": _cplx_pairs(self.A.entries),
            "B": _cplx_pairs(self.B.entries),
            "evidence": self.evidence,
            "tolerances": self.tolerances,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Counterexample":
        return cls(
            parse_word(data["word"]),
            HermitianPD(_from_pairs(data["A"])),
            HermitianPD(_from_pairs(data["B"])),
            data["evidence"],
            data["construction"],
            data["tolerances"],
        )

    @classmethod
    def from_json(cls, text: str) -> "Counterexample":
        return cls.from_dict(json.loads(text))


def _bad_eigenvalue(ev, scale: float):
    # eigenvalues are trusted only to ~1e-6 of the largest one
    big = max(1.0, float(np.abs(ev).max()))
    for z in ev:
        if abs(z.imag) > 1e-6 * big or z.real < -1e-6 * big:
            return complex(z)
    return None


def _check_candidate(w: Word, A: HermitianPD, B: HermitianPD, config: RefuteConfig, construction: dict):
    M = evaluate_word(w, A, B)
    tr = complex(np.trace(M))
    scale = word_scale(w, A, B)
    tols = {"im_threshold": config.im_threshold, "revalidation_factor": 10.0, "scale": _r17(scale)}
    cex = None
    if abs(tr.imag) > config.im_threshold * scale:
        evidence = {"kind": "im_trace", "im_trace": [_r17(tr.real), _r17(tr.imag)]}
        cex = Counterexample(w, A, B, evidence, construction, tols)
    else:
        try:
            bad = _bad_eigenvalue(eig_general(M), scale)
        except EigenvalueError:
            bad = None
        if bad is not None:
            evidence = {"kind": "eigenvalue", "eigenvalue": [_r17(bad.real), _r17(bad.imag)]}
            cex = Counterexample(w, A, B, evidence, construction, tols)
    if cex is not None and cex.validate():
        return cex
    return None


def _log_uniform(rng, low, high, size):
    return np.exp(rng.uniform(math.log(low), math.log(high), size))


def refute(w: Word, config: RefuteConfig | None = None) -> Counterexample | None:
    """Search for a PD pair that makes the word's spectrum non-positive.

    ``paper_u`` uses the fixed unitary; positive words go through the
    x = y grid with a shrinking third diagonal entry, other words sample the
    four diagonal values log-uniformly. ``general_param`` draws one Haar
    unitary from the seed and samples diagonals, ``random`` draws a fresh
    Haar eigenbasis for ``B`` on every sample. ``None`` means inconclusive.
    """
    config = config or RefuteConfig()
    w = standard_form(w)
    k = len(w.blocks) // 2
    if k < 2:
        raise ValueError("words of class 0 or 1 are nearly symmetric and cannot be refuted")

    if config.strategy == "paper_u":
        param = Parameterization.paper("general")
        if w.is_positive:
            pos = Parameterization(param.S, "positive")
            attempts = 0
            for x in config.grid:
                eps = config.epsilon
                while eps >= 1e-8 * (1 - 1e-9):
                    A, B = build_pair(pos, (x, x), epsilon=eps)
                    construction = {"kind": "paper_u", "x": x, "y": x, "epsilon": eps}
                    cex = _check_candidate(w, A, B, config, construction)
                    if cex is not None:
                        return cex
                    eps /= 10
                    attempts += 1
                    if attempts >= config.samples:
                        return None
            return None
        for i in range(config.samples):
            vals = _log_uniform(sample_rng(config.seed, i), config.low, config.high, 4)
            A, B = build_pair(param, vals)
            construction = {"kind": "general_param", "unitary": "paper", "values": [_r17(v) for v in vals]}
            cex = _check_candidate(w, A, B, config, construction)
            if cex is not None:
                return cex
        return None

    if config.strategy == "general_param":
        param = Parameterization.from_unitary(haar_unitary(3, seed=config.seed))
        for i in range(config.samples):
            vals = _log_uniform(sample_rng(config.seed, i), config.low, config.high, 4)
            A, B = build_pair(param, vals)
            construction = {"kind": "general_param", "unitary_seed": config.seed, "values": [_r17(v) for v in vals]}
            cex = _check_candidate(w, A, B, config, construction)
            if cex is not None:
                return cex
        return None

    for i in range(config.samples):
        rng = sample_rng(config.seed, i)
        V = haar_unitary(3, rng=rng)
        a = np.concatenate([[1.0], _log_uniform(rng, config.low, config.high, 2)])
        e = np.concatenate([[1.0], _log_uniform(rng, config.low, config.high, 2)])
        A = HermitianPD.from_eig(np.eye(3), a)
        B = HermitianPD.from_eig(V, e)
        construction = {"kind": "random", "seed": config.seed, "sample": i}
        cex = _check_candidate(w, A, B, config, construction)
        if cex is not None:
            return cex
    return None
