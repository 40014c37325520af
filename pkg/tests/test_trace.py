import itertools
import json

import numpy as np
import pytest

from gwords.gword import Word, exactness, is_nearly_symmetric, parse_word, standard_form, words_of_class
from gwords.numeric import build_pair, haar_unitary
from gwords.trace import (
    Family,
    Parameterization,
    adjacent_coefficient,
    class2_imag_closed_form,
    family_has_adjacent_pair,
    inexactness_certificate,
    merged_imaginary,
    minimal_degree_imaginary,
    paper_unitary,
    predicted_minimal_sum,
    symbolic_trace,
    term_coefficient,
)

from conftest import oracle_product


def W(text):
    return standard_form(parse_word(text))


def numeric_trace(w, param, values, epsilon=None):
    A, B = build_pair(param, values, epsilon)
    return np.trace(oracle_product(w, np.asarray(A), np.asarray(B)))


# -- the fixed unitary ------------------------------------------------------------

def test_paper_unitary():
    U = paper_unitary()
    assert np.abs(U @ U.conj().T - np.eye(3)).max() < 1e-15
    assert np.sum(np.abs(U[0]) ** 2) == 1.0
    S = U @ U.T
    assert np.array_equal(S, S.T)


def test_parameterization_rejects_non_symmetric():
    with pytest.raises(ValueError):
        Parameterization(paper_unitary(), "general")


# -- expansion --------------------------------------------------------------------

def test_class1_nine_terms():
    param = Parameterization.paper("general")
    w = W("A^2 B^3")
    exp = symbolic_trace(w, param)
    s = lambda i, j: param.s(i, j) * np.conj(param.s(i, j))
    # (x1, y1, x2, y2) exponents
    expected = {
        (0, 0, 0, 0): s(1, 1),
        (0, 0, 3, 0): s(2, 1),
        (0, 0, 0, 3): s(3, 1),
        (2, 0, 0, 0): s(2, 1),
        (2, 0, 3, 0): s(2, 2),
        (2, 0, 0, 3): s(3, 2),
        (0, 2, 0, 0): s(3, 1),
        (0, 2, 3, 0): s(3, 2),
        (0, 2, 0, 3): s(3, 3),
    }
    assert len(exp.poly) == 9
    for key, c in expected.items():
        assert abs(exp.poly.coefficient(key) - c) < 1e-14


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_constant_term_real(k):
    for seed in range(5):
        param = Parameterization.from_unitary(haar_unitary(3, seed=seed))
        w = Word.from_exponents(list(range(1, k + 1)), list(range(k + 1, 2 * k + 1)))
        c = symbolic_trace(w, param).constant_term()
        s11 = param.s(1, 1)
        assert abs(c.imag) < 1e-12
        assert abs(c - abs(s11) ** (2 * k)) < 1e-12


def test_expansion_matches_numeric_trace(rng):
    for trial in range(12):
        k = int(rng.integers(1, 4))
        p = list(rng.uniform(-2, 2, k))
        q = list(rng.uniform(-2, 2, k))
        w = Word.from_exponents(p, q)
        param = Parameterization.from_unitary(haar_unitary(3, rng=rng))
        exp = symbolic_trace(w, param)
        for values in np.exp(rng.uniform(-1, 1, (5, 4))):
            ref = numeric_trace(w, param, values)
            assert abs(exp.evaluate(values) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_positive_expansion_matches_limit(rng):
    # the positive layout is the epsilon -> 0 limit of the general one
    w = W("A B^2 A^2 B^2 A^3 B^4")
    param = Parameterization.paper("positive")
    exp = symbolic_trace(w, param)
    for x, y in [(0.5, 0.7), (2.0, 1.3)]:
        ref = numeric_trace(w, param, (x, y), epsilon=1e-10)
        # the third slot contributes terms of order epsilon
        assert abs(exp.evaluate([x, y]) - ref) <= 1e-8 * abs(ref)


def test_positive_mode_rejects_negative_word():
    with pytest.raises(ValueError):
        symbolic_trace(W("A B^-1"), Parameterization.paper("positive"))


def test_requires_standard_form():
    with pytest.raises(ValueError):
        symbolic_trace(parse_word("B A"), Parameterization.paper())


def test_provenance_records_collisions():
    w = W("A B A B")
    exp = symbolic_trace(w, Parameterization.paper())
    fams = exp.families_for((1, 0, 0, 0))
    assert {f.P1 for f in fams} == {frozenset({1}), frozenset({2})}


def test_to_dict_json():
    exp = symbolic_trace(W("A^1/2 B^2"), Parameterization.paper())
    d = json.loads(json.dumps(exp.to_dict()))
    assert d["word"] == "A^1/2 B^2"
    assert len(d["provenance"]) == 9
    assert d["poly"]["vars"] == ["x1", "y1", "x2", "y2"]


# -- F-substitution ---------------------------------------------------------------

def _all_families(k, slots):
    for a in itertools.product(slots, repeat=k):
        for b in itertools.product(slots, repeat=k):
            yield Family.from_slots(a, b)


def test_term_coefficient_constant():
    param = Parameterization.paper()
    w = W("A B^2 A^3 B")
    assert abs(term_coefficient(w, param, Family()) - abs(param.s(1, 1)) ** 4) < 1e-14


def test_term_coefficient_adjacent_example():
    param = Parameterization.paper()
    s = param.s
    w = W("A B^2 A^3 B^5")
    c = term_coefficient(w, param, Family(P1={1}, Q2={1}))
    assert abs(c - np.conj(s(2, 1)) * s(1, 1) * np.conj(s(3, 1)) * s(3, 2)) < 1e-14


def test_term_coefficient_matches_expansion_k2():
    param = Parameterization.from_unitary(haar_unitary(3, seed=7))
    w = W("A B^2 A^3 B^-1")
    exp = symbolic_trace(w, param)
    for f in _all_families(2, (0, 1, 2)):
        assert abs(term_coefficient(w, param, f) - exp.family_coefficient(f)) < 1e-10


def test_term_coefficient_matches_expansion_k3_sampled(rng):
    param = Parameterization.from_unitary(haar_unitary(3, rng=rng))
    w = Word.from_exponents([1, 2, 0.5], [3, -1, 2])
    exp = symbolic_trace(w, param)
    for _ in range(20):
        a, b = rng.integers(0, 3, 3), rng.integers(0, 3, 3)
        f = Family.from_slots(a, b)
        assert abs(term_coefficient(w, param, f) - exp.family_coefficient(f)) < 1e-10


def test_term_coefficient_range_error():
    with pytest.raises(ValueError):
        term_coefficient(W("A B"), Parameterization.paper(), Family(P1={2}))


# -- adjacent coefficients --------------------------------------------------------

def test_adjacent_coefficient_nonreal_for_paper_s():
    S = Parameterization.paper().S
    assert adjacent_coefficient(2, S).nonreal


def test_adjacent_coefficient_ratio():
    S = Parameterization.from_unitary(haar_unitary(3, seed=3)).S
    for mode in ("general", "positive"):
        r = adjacent_coefficient(3, S, mode).value / adjacent_coefficient(2, S, mode).value
        assert abs(r - abs(S[0, 0]) ** 2) < 1e-12


def test_adjacent_coefficient_k1_error():
    with pytest.raises(ValueError):
        adjacent_coefficient(1, Parameterization.paper().S)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_adjacent_coefficient_matches_expansion(k):
    param = Parameterization.from_unitary(haar_unitary(3, seed=11 + k))
    pos = Parameterization(param.S, "positive")
    w = Word.from_exponents(list(range(1, k + 1)), [2 * k + j for j in range(1, k + 1)])
    gen_closed = adjacent_coefficient(k, param.S, "general")
    pos_closed = adjacent_coefficient(k, param.S, "positive")
    for i, j in itertools.product(range(1, k + 1), repeat=2):
        if not (i == j or i - 1 == j or (i, j) == (1, k)):
            continue
        cg = term_coefficient(w, param, Family(P1={i}, Q2={j}))
        cp = term_coefficient(w, pos, Family(P1={i}, Q1={j}))
        assert gen_closed.matches(cg) is not None, (i, j)
        assert pos_closed.matches(cp) is not None, (i, j)
    # the (1, 1) orientation carries the listed value
    assert pos_closed.matches(term_coefficient(w, pos, Family(P1={1}, Q1={1}))) == "value"


# -- class-2 closed form ------------------------------------------------------------

def test_closed_form_zero_on_nearly_symmetric():
    assert class2_imag_closed_form(2, 1, 2, 3, 0.4, 1.7) == 0
    assert class2_imag_closed_form(1, 3, 2, 3, 0.4, 1.7) == 0


def test_closed_form_against_numeric_trace():
    param = Parameterization.paper()
    w = Word.from_exponents([1, 2], [2, 1])
    x, y = 0.5, 3.0
    ref = numeric_trace(w, param, (x, y, x, y)).imag
    got = class2_imag_closed_form(1, 2, 2, 1, x, y)
    assert abs(got - ref) <= 1e-9 * abs(ref)


def test_closed_form_rejects_nonpositive():
    with pytest.raises(ValueError):
        class2_imag_closed_form(1, 2, 2, 1, 0.0, 1.0)


# -- positive layout, adjacency and inexactness -------------------------------------

def test_non_adjacent_terms_are_real():
    for seed in range(2):
        param = Parameterization.from_unitary(haar_unitary(3, seed=100 + seed), "positive")
        for k in (2, 3):
            for w in words_of_class(k, (1, 2, 3)):
                exp = symbolic_trace(w, param)
                for f, (_, c) in exp.provenance.items():
                    if not family_has_adjacent_pair(f, k):
                        assert abs(c.imag) < 1e-10


def test_certificate_for_inexact_example():
    cert = inexactness_certificate(W("A B^2 A^2 B^2 A^3 B^4"), Parameterization.paper().S, x_grid=(0.9, 0.5, 0.1, 0.05))
    assert cert is not None and abs(cert[1]) > 1e-10


def test_no_certificate_for_nearly_symmetric():
    w = W("A B^2 A B^2")
    assert is_nearly_symmetric(w)
    assert inexactness_certificate(w, Parameterization.paper().S, x_grid=np.geomspace(1e-3, 10, 30)) is None


def test_minimal_degree_coefficient_sign():
    S = Parameterization.paper().S
    param = Parameterization(S, "positive")
    checked = 0
    for w in words_of_class(3, (1, 2, 3)):
        rep = exactness(w)
        if rep.exact:
            continue
        deg, coef = minimal_degree_imaginary(symbolic_trace(w, param))
        assert deg == rep.min_value
        assert abs(coef - predicted_minimal_sum(w, S)) < 1e-12
        checked += 1
    assert checked > 100


def test_merged_imaginary_zero_for_real_orthogonal_s():
    # a real orthogonal symmetric S makes every coefficient real
    theta = 0.3
    R = np.array([[np.cos(theta), np.sin(theta), 0], [np.sin(theta), -np.cos(theta), 0], [0, 0, 1]])
    exp = symbolic_trace(W("A B^2 A^3 B"), Parameterization(R.astype(complex), "general"))
    assert merged_imaginary(exp).is_zero()
