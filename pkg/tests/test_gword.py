import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gwords.gword import (
    Word,
    WordSyntaxError,
    adjacent,
    cycle_pairs,
    exactness,
    is_nearly_symmetric,
    is_symmetric,
    nearly_symmetric_split,
    pair_sums,
    parse_word,
    reversal,
    scale,
    standard_form,
    swap_letters,
    thm31_relations,
    transform,
    words_of_class,
)


def W(text):
    return standard_form(parse_word(text))


def small_words(max_k=3, exps=(-2, -1, 1, 2)):
    for k in range(1, max_k + 1):
        yield from words_of_class(k, exps)


# -- parsing ------------------------------------------------------------------

def test_parse_default_exponent():
    assert parse_word("A B^2").blocks == (("A", 1), ("B", 2))


def test_parse_rational_and_negative():
    w = parse_word("A^3/2 B^-2")
    assert w.blocks == (("A", Fraction(3, 2)), ("B", -2))
    assert isinstance(w.blocks[0][1], Fraction)


def test_parse_decimal_is_exact():
    assert parse_word("A^0.1").blocks[0][1] == Fraction(1, 10)


def test_parse_no_whitespace():
    assert parse_word("A^2B^-1A").blocks == (("A", 2), ("B", -1), ("A", 1))


@pytest.mark.parametrize("text,offset", [("A^x B", 2), ("A C", 2), ("A^1/0", 2), ("", 0), ("A^", 2)])
def test_parse_errors(text, offset):
    with pytest.raises(WordSyntaxError) as err:
        parse_word(text)
    assert err.value.position == offset


def test_str_roundtrip():
    w = parse_word("A^3/2 B^-2 A B^0.5")
    assert parse_word(str(w)) == w


# -- standard form ------------------------------------------------------------

def test_standard_form_merges_cyclically():
    assert W("A^2 B A^3") == parse_word("A^5 B")


def test_standard_form_keeps_standard_word():
    w = parse_word("A B^2 A^-1 B^3")
    assert standard_form(w) == w


def test_standard_form_rotates_to_a_first():
    assert W("B^2 A^3") == parse_word("A^3 B^2")


def test_standard_form_drops_zeros_and_cancels():
    assert W("A B^0 A^2 B") == parse_word("A^3 B")
    assert W("A B A^-1") == parse_word("B")
    assert W("A B B^-1 A^-1") == Word()
    assert Word().class_number == 0


def test_class_numbers():
    assert W("A^2").class_number == 0
    assert W("A^2 B^3 A^2 B^5").class_number == 2


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("AB"), st.integers(-3, 3)), max_size=10))
def test_standard_form_idempotent(blocks):
    w = standard_form(Word(tuple(blocks)))
    assert standard_form(w) == w
    letters = w.letters
    assert all(a != b for a, b in zip(letters, letters[1:]))
    assert 0 not in w.exponents
    if len(w) >= 2:
        assert letters[0] == "A" and letters[-1] == "B"


# -- transformations ----------------------------------------------------------

def test_reversal_example():
    assert reversal(W("A^2 B^3")) == W("A^2 B^3")
    assert reversal(W("A B^2 A^3 B^4")) == W("A^3 B^2 A B^4")
    assert cycle_pairs(W("A^3 B^2 A B^4"), 1) == W("A B^4 A^3 B^2")


def test_cycle_pairs_example():
    w = Word.from_exponents([1, 2], [3, 4])
    assert cycle_pairs(w, 1) == Word.from_exponents([2, 1], [4, 3])
    assert cycle_pairs(w, 2) == w


def test_cycle_pairs_requires_standard_form():
    with pytest.raises(ValueError):
        cycle_pairs(parse_word("B A"), 1)


def test_scale_example():
    assert scale(W("A B^3"), "A", 2) == W("A^2 B^3")
    with pytest.raises(ValueError):
        scale(W("A B"), "A", 0)


def test_swap_letters():
    assert swap_letters(W("A^2 B^3")) == W("A^3 B^2")


def test_transform_dispatch():
    w = W("A B^2 A^3 B^4")
    assert transform(w, "cycle_pairs", 1) == cycle_pairs(w, 1)
    assert transform(w, "scale", "B", -1) == scale(w, "B", -1)
    with pytest.raises(ValueError):
        transform(w, "shear")


# -- symmetry -----------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [("A^2 B^3 A^2", True), ("A^2 B^3", False), ("A^5", True)])
def test_is_symmetric(text, expected):
    assert is_symmetric(parse_word(text)) is expected


def test_split_class2_example():
    split = nearly_symmetric_split(W("A^2 B^3 A^2 B^5"))
    assert (split.rotation, split.index) == (0, 2)
    assert split.left == parse_word("A^2 B^3 A^2") and split.right == parse_word("B^5")


@pytest.mark.parametrize("text", ["A B^2 A^2 B^4", "A B^2 A B^3 A^4 B^5"])
def test_split_none(text):
    assert nearly_symmetric_split(W(text)) is None


def test_split_class0_and_1():
    assert nearly_symmetric_split(W("A^3")) is not None
    assert nearly_symmetric_split(W("A^3 B^-7")) is not None


def test_split_needs_rotation():
    # p2 = p3 and q2 symmetric centre only visible after rotating by one pair
    w = Word.from_exponents([1, 2, 2], [3, 5, 3])
    split = nearly_symmetric_split(w)
    assert split is not None
    rotated = cycle_pairs(w, split.rotation)
    i = split.index
    assert is_symmetric(Word(rotated.blocks[: 2 * i - 1]))
    assert is_symmetric(Word(rotated.blocks[2 * i - 1:]))


def _near_symmetric_brute(w):
    """Cyclic word has a reflection symmetry through block centres."""
    e = list(w.exponents)
    n = len(e)
    for c in range(n):
        if all(e[(c + t) % n] == e[(c - t) % n] for t in range(n)):
            return True
    return False


def test_split_matches_reflection_oracle():
    for w in small_words(3, (1, 2, 3)):
        assert is_nearly_symmetric(w) == _near_symmetric_brute(w), str(w)


def test_class2_criterion():
    for w in words_of_class(2, (-2, -1, 1, 2)):
        p, q = w.p, w.q
        assert is_nearly_symmetric(w) == (p[0] == p[1] or q[0] == q[1])


def test_near_symmetry_invariant_under_transformations():
    for w in small_words(3, (-2, -1, 1, 2)):
        ns = is_nearly_symmetric(w)
        k = len(w) // 2
        images = [reversal(w), swap_letters(w)]
        images += [cycle_pairs(w, j) for j in range(k)]
        images += [scale(w, letter, c) for letter in "AB" for c in (-1, 2, Fraction(1, 3))]
        for v in images:
            assert is_nearly_symmetric(v) == ns, (str(w), str(v))


# -- exactness ----------------------------------------------------------------

def test_exactness_paper_examples():
    r = exactness(W("A^4 B^2 A^3 B^3 A^4 B^1"))
    assert r.l_values == (6, 5, 6, 7, 5, 5)
    assert (r.count_odd, r.count_even, r.exact) == (1, 2, False)
    assert r.min_indices == (2, 5, 6)
    r = exactness(W("A^1 B^2 A^2 B^2 A^3 B^4"))
    assert r.l_values == (3, 4, 4, 5, 7, 5)
    assert (r.count_odd, r.count_even, r.exact) == (1, 0, False)


def test_exactness_full_symmetry():
    r = exactness(W("A B A B"))
    assert r.l_values == (2, 2, 2, 2)
    assert (r.count_odd, r.count_even, r.exact) == (2, 2, True)


def test_exactness_float_tolerance():
    w = Word.from_exponents([1.0 + 1e-12, 1.0], [1.0, 1.0])
    assert exactness(w).exact
    assert len(exactness(w, tol=0.0).min_indices) < 4


def test_exactness_invariant_under_symmetries():
    for w in small_words(3, (-2, -1, 1, 2)):
        ex = exactness(w).exact
        k = len(w) // 2
        for v in [reversal(w), swap_letters(w)] + [cycle_pairs(w, j) for j in range(k)]:
            assert exactness(v).exact == ex


def test_nearly_symmetric_implies_exact():
    for w in small_words(3, (-2, -1, 1, 2)):
        if is_nearly_symmetric(w):
            assert exactness(w).exact, str(w)


def test_distinct_pair_sums_inexact():
    for w in small_words(3, (1, 2, 3, 5)):
        if len(set(pair_sums(w))) == len(w):
            assert not exactness(w).exact


# -- relations ----------------------------------------------------------------

def _brute_relations(w):
    p, q = w.p, w.q
    k = len(p)
    subs = [frozenset(i + 1 for i in range(k) if mask >> i & 1) for mask in range(1, 2 ** k)]
    ps = [s for s in subs if sum(p[i - 1] for i in s) == p[0]]
    qs = [s for s in subs if sum(q[i - 1] for i in s) == q[0]]
    return {(a, b) for a in ps for b in qs}


def test_relations_paper_example_has_nontrivial():
    rels = thm31_relations(W("A^1 B^2 A^2 B^2 A^3 B^4"))
    assert any(not r.trivial for r in rels)
    assert any(r.p_subset == {1} and r.q_subset == {2} for r in rels)


def test_relations_only_trivial():
    rels = thm31_relations(W("A^1 B^2 A^3 B^5"))
    assert [(r.p_subset, r.q_subset) for r in rels] == [({1}, {1})]
    assert rels[0].trivial


def test_relations_match_brute_force():
    for w in small_words(3, (-2, -1, 1, 2)):
        got = {(r.p_subset, r.q_subset) for r in thm31_relations(w)}
        assert got == _brute_relations(w)
        assert (frozenset({1}), frozenset({1})) in got


def test_relations_nearly_symmetric_have_nontrivial():
    for w in small_words(3, (-2, -1, 1, 2)):
        if is_nearly_symmetric(w) and len(w) >= 4:
            assert any(not r.trivial for r in thm31_relations(w)), str(w)


def test_relations_approximate_mode():
    w = Word.from_exponents([0.1 + 0.2, 0.1, 0.2], [1.5, 0.7, 0.3])
    rels = thm31_relations(w)
    assert all(r.approximate for r in rels)
    assert any(r.p_subset == {2, 3} for r in rels)


# -- adjacency ----------------------------------------------------------------

def test_adjacent_k2():
    table = {(i, j): adjacent(i, j, 2) for i in (1, 2) for j in (1, 2)}
    assert table == {(1, 1): True, (1, 2): True, (2, 1): True, (2, 2): True}


def test_adjacent_k3():
    expected = {(1, 1), (2, 2), (3, 3), (2, 1), (3, 2), (1, 3)}
    for i, j in itertools.product(range(1, 4), repeat=2):
        assert adjacent(i, j, 3) == ((i, j) in expected)


def test_adjacent_out_of_range():
    with pytest.raises(ValueError):
        adjacent(0, 1, 2)
