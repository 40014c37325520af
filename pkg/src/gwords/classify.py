"""Classification pipeline, enumeration sweeps and conjecture exploration.

Decision order for a word in standard form:

1. nearly symmetric -> good (split certificate);
2. class 2 and not nearly symmetric -> bad;
3. exact exponents and some adjacent pair ``(p_i, q_j)`` whose exponents
   admit no alternative subset-sum representation -> bad;
4. positive (after flipping the sign of all ``p`` and/or all ``q``) and
   inexact -> bad;
5. numeric refutation, if requested -> bad when a witness validates;
6. otherwise unknown, conjectured bad.
"""

from __future__ import annotations

import itertools
import os
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .gword import (
    Word,
    cycle_pairs,
    exactness,
    nearly_symmetric_split,
    parse_word,
    reversal,
    scale,
    standard_form,
    thm31_relations,
)
from .numeric import Counterexample, RefuteConfig, refute

__all__ = [
    "ClassificationReport",
    "classify",
    "canonical_key",
    "canonical_words",
    "sweep",
    "conjecture_check",
    "SweepTooLarge",
    "VERDICTS",
    "CSV_COLUMNS",
]

GOOD = "good_nearly_symmetric"
BAD_THEOREM = "bad_theorem"
BAD_REFUTED = "bad_refuted"
UNKNOWN = "unknown_conjectured_bad"
VERDICTS = (GOOD, BAD_THEOREM, BAD_REFUTED, UNKNOWN)
UNKNOWN_NOTE = "conjectured bad: not nearly symmetric, but no certificate or witness was found"

CSV_COLUMNS = (
    "word",
    "class",
    "verdict",
    "reason",
    "nearly_symmetric",
    "exact",
    "n_min_indices",
    "count_odd",
    "count_even",
    "nontrivial_relations",
    "witness_found",
    "seed",
)

DEFAULT_CAP = 10 ** 6


class SweepTooLarge(ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(f"enumeration would produce {count} words, above the cap of {cap}")
        self.count = count
        self.cap = cap


@dataclass
class ClassificationReport:
    input: str
    standard_form: str
    class_number: int
    verdict: str
    reason: str | None = None
    split: dict | None = None
    exactness: dict | None = None
    relations: dict | None = None
    counterexample: dict | None = None
    seed: int = 0
    note: str | None = None
    timings: dict = field(default_factory=dict)

    @property
    def category(self) -> str:
        if self.verdict == GOOD:
            return "good"
        if self.verdict == UNKNOWN:
            return "unknown"
        return "bad"

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "input": self.input,
            "standard_form": self.standard_form,
            "class_number": self.class_number,
            "verdict": self.verdict,
            "reason": self.reason,
            "certificates": {
                "split": self.split,
                "exactness": self.exactness,
                "relations": self.relations,
                "counterexample": self.counterexample,
            },
            "seed": self.seed,
        }
        if self.note:
            d["note"] = self.note
        if timings:
            d["timings"] = self.timings
        return d

    def csv_row(self) -> dict:
        ex = self.exactness or {}
        rel = self.relations or {}
        return {
            "word": self.standard_form,
            "class": self.class_number,
            "verdict": self.verdict,
            "reason": self.reason or "",
            "nearly_symmetric": self.split is not None,
            "exact": ex.get("exact", ""),
            "n_min_indices": len(ex.get("min_indices", [])) if ex else "",
            "count_odd": ex.get("count_odd", ""),
            "count_even": ex.get("count_even", ""),
            "nontrivial_relations": rel.get("nontrivial", ""),
            "witness_found": self.counterexample is not None,
            "seed": self.seed,
        }


def _relation_summary(w: Word) -> dict:
    rels = thm31_relations(w)
    return {
        "word": str(w),
        "nontrivial": sum(1 for r in rels if not r.trivial),
        "approximate": not w.is_exact,
    }


def _relation_violation(w: Word) -> dict | None:
    """A cyclic rotation of ``w`` or of its reversal whose leading pair has
    only the trivial relation, summarized; ``None`` if every one has more."""
    k = len(w.blocks) // 2
    for base in (w, reversal(w)):
        for j in range(k):
            summary = _relation_summary(cycle_pairs(base, j))
            if summary["nontrivial"] == 0:
                return summary
    return None


def _sign_normalized(w: Word) -> Word | None:
    p, q = w.p, w.q
    if not (all(e > 0 for e in p) or all(e < 0 for e in p)):
        return None
    if not (all(e > 0 for e in q) or all(e < 0 for e in q)):
        return None
    out = w
    if p[0] < 0:
        out = scale(out, "A", -1)
    if q[0] < 0:
        out = scale(out, "B", -1)
    return out


def _search_witness(w: Word, samples: int, seed: int) -> Counterexample | None:
    for strategy in ("paper_u", "random"):
        cex = refute(w, RefuteConfig(strategy=strategy, samples=samples, seed=seed))
        if cex is not None:
            return cex
    return None


def classify(
    word: str | Word,
    refute_search: bool = False,
    witness: bool = False,
    samples: int = 200,
    seed: int = 0,
) -> ClassificationReport:
    """Classify a word as good, bad (with a certificate) or unknown."""
    t0 = time.perf_counter()
    w = parse_word(word) if isinstance(word, str) else word
    sw = standard_form(w)
    k = len(sw.blocks) // 2
    rep = ClassificationReport(str(word), str(sw), k, UNKNOWN, seed=seed)

    split = nearly_symmetric_split(sw)
    if k >= 1:
        rep.exactness = exactness(sw).as_dict()
        rep.relations = _relation_summary(sw)
    rep.timings["combinatorics"] = time.perf_counter() - t0
    if split is not None:
        rep.verdict = GOOD
        rep.split = split.as_dict()
        return rep

    if k == 2:
        rep.verdict, rep.reason = BAD_THEOREM, "class2"
    elif sw.is_exact and (violation := _relation_violation(sw)) is not None:
        rep.verdict, rep.reason = BAD_THEOREM, "thm31_violation"
        rep.relations = violation
    else:
        pw = _sign_normalized(sw)
        if pw is not None:
            ex = exactness(pw)
            if not ex.exact:
                rep.verdict, rep.reason = BAD_THEOREM, "inexact_positive"
                rep.exactness = dict(ex.as_dict(), word=str(pw))
    rep.timings["theorems"] = time.perf_counter() - t0

    want_search = (rep.verdict == UNKNOWN and refute_search) or (rep.verdict == BAD_THEOREM and witness)
    if want_search:
        cex = _search_witness(sw, samples, seed)
        if cex is not None:
            rep.counterexample = cex.to_dict()
            if rep.verdict == UNKNOWN:
                rep.verdict = BAD_REFUTED
        rep.timings["search"] = time.perf_counter() - t0
    if rep.verdict == UNKNOWN:
        rep.note = UNKNOWN_NOTE
    return rep


# -- enumeration ----------------------------------------------------------------

def _sortable(e):
    return (float(e), str(e))


def canonical_key(w: Word) -> tuple:
    """Smallest exponent sequence over rotations and reflections of the cyclic
    block sequence; identifies words related by reversal, letter swap and
    cycling."""
    e = list(standard_form(w).exponents)
    n = len(e)
    if n == 0:
        return ()
    best = None
    for seq in (e, e[::-1]):
        for r in range(n):
            cand = tuple(seq[r:] + seq[:r])
            key = tuple(_sortable(x) for x in cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def canonical_words(k: int, exponents: Iterable, cap: int = DEFAULT_CAP) -> list[Word]:
    """One representative per orbit, sorted by canonical sequence."""
    values = sorted({Fraction(e) if not isinstance(e, float) else e for e in exponents}, key=_sortable)
    values = [v for v in values if v != 0]
    if k < 1:
        raise ValueError("class number must be >= 1")
    count = len(values) ** (2 * k)
    if count > cap:
        raise SweepTooLarge(count, cap)
    seen = {}
    for combo in itertools.product(values, repeat=2 * k):
        w = Word.from_exponents(combo[0::2], combo[1::2])
        key = canonical_key(w)
        if key not in seen:
            seen[key] = Word.from_exponents(key[0::2], key[1::2])
    return [seen[key] for key in sorted(seen, key=lambda t: tuple(_sortable(x) for x in t))]


def word_seed(base: int, w: Word) -> int:
    return (int(base) * 1_000_003 + zlib.crc32(str(w).encode())) % (2 ** 31)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GW_THREADS", "1")))
    except ValueError:
        return 1


def _classify_job(args):
    w, refute_search, samples, seed = args
    return classify(w, refute_search=refute_search, samples=samples, seed=seed)


def _map(func, jobs: list):
    n = _threads()
    if n == 1 or len(jobs) < 2:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * n))))


def sweep(
    k: int,
    exponents: Sequence,
    refute_search: bool = False,
    samples: int = 200,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> tuple[list[ClassificationReport], dict]:
    """Classify one representative of every orbit; returns rows and verdict counts."""
    words = canonical_words(k, exponents, cap)
    jobs = [(w, refute_search, samples, word_seed(seed, w)) for w in words]
    reports = _map(_classify_job, jobs)
    summary = {v: 0 for v in VERDICTS}
    for r in reports:
        summary[r.verdict] += 1
    summary["total"] = len(reports)
    return reports, summary


def _escalate(args):
    w, budget, seed = args
    rep = classify(w, seed=seed)
    if rep.verdict != UNKNOWN:
        return rep
    samples = 16
    while True:
        n = min(samples, budget)
        for strategy in ("paper_u", "general_param", "random"):
            cex = refute(w, RefuteConfig(strategy=strategy, samples=n, seed=seed))
            if cex is not None:
                rep.verdict, rep.counterexample, rep.note = BAD_REFUTED, cex.to_dict(), None
                return rep
        if n >= budget:
            return rep
        samples *= 2


def conjecture_check(k: int, exponents: Sequence, budget: int = 256, seed: int = 0, cap: int = DEFAULT_CAP) -> dict:
    """Try to certify or refute every word that is not nearly symmetric.

    Survivors are words for which neither a theorem nor a numeric witness
    within ``budget`` samples per strategy settled badness.
    """
    if not list(exponents):
        return {"class": k, "total": 0, "nearly_symmetric": 0, "bad_theorem": 0, "bad_refuted": 0, "survivors": []}
    words = canonical_words(k, exponents, cap)
    jobs = [(w, budget, word_seed(seed, w)) for w in words]
    reports = _map(_escalate, jobs)
    out = {
        "class": k,
        "exponents": [str(Fraction(e)) if not isinstance(e, float) else e for e in exponents],
        "budget": budget,
        "total": len(reports),
        "nearly_symmetric": sum(r.verdict == GOOD for r in reports),
        "bad_theorem": sum(r.verdict == BAD_THEOREM for r in reports),
        "bad_refuted": sum(r.verdict == BAD_REFUTED for r in reports),
        "survivors": [
            {"word": r.standard_form, "exact": (r.exactness or {}).get("exact")}
            for r in reports
            if r.verdict == UNKNOWN
        ],
    }
    return out
