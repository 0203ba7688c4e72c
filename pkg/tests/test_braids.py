import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridecomp.braids import (
    BraidError,
    BraidWord,
    NormalForm,
    delete_strands,
    delta_word,
    format_word,
    free_reduce,
    in_band,
    left_normal_form,
    nf_debug,
    nf_equal,
    nf_identity,
    nf_inv,
    nf_mul,
    nf_permutation,
    nf_pow,
    nf_to_word,
    parabolic_support,
    parse_word,
    permutation_braid_word,
    permutation_of,
)
from tridecomp.permutations import identity_perm, pmul, transposition


def random_word(rng, n, length):
    letters = [i for i in range(-(n - 1), n) if i != 0]
    return BraidWord(n, tuple(rng.choice(letters) for _ in range(length)))


def words(n_max=12, len_max=20):
    return st.integers(min_value=2, max_value=n_max).flatmap(
        lambda n: st.lists(
            st.integers(min_value=-(n - 1), max_value=n - 1).filter(lambda x: x != 0),
            max_size=len_max,
        ).map(lambda ls: BraidWord(n, tuple(ls)))
    )


# --- parsing / formatting ---------------------------------------------------


def test_parse_format_examples():
    assert parse_word("", 4) == BraidWord(4, ())
    assert parse_word("1 -1", 4).letters == (1, -1)
    assert parse_word("1 -2 3", 4).letters == (1, -2, 3)
    with pytest.raises(BraidError, match="position 1"):
        parse_word("1 0", 4)
    with pytest.raises(BraidError, match="position 0"):
        parse_word("4", 4)
    with pytest.raises(BraidError):
        parse_word("x", 4)


@given(words())
def test_parse_format_roundtrip(w):
    assert parse_word(format_word(w), w.n) == w


def test_free_reduce_examples():
    assert free_reduce(parse_word("1 -1", 3)).letters == ()
    assert free_reduce(parse_word("1 2 -2 -1", 3)).letters == ()
    assert free_reduce(parse_word("1 2 -1", 3)).letters == (1, 2, -1)


@given(words())
def test_free_reduce_preserves_element(w):
    assert nf_equal(free_reduce(w), w)


# --- normal forms -----------------------------------------------------------


def test_normal_form_examples():
    # sigma1 sigma1^-1 collapses
    assert left_normal_form(parse_word("1 -1", 3)) == NormalForm(3, 0, ())
    # sigma1 sigma2 sigma1 is the half twist of B_3
    assert left_normal_form(parse_word("1 2 1", 3)) == NormalForm(3, 1, ())
    # a single negative letter: delta^-1 times one permutation braid
    nf = left_normal_form(parse_word("-1", 3))
    assert nf.inf == -1 and len(nf.factors) == 1
    assert nf.factors[0] == (3, 1, 2)
    # recomposition gives the same element back
    assert left_normal_form(nf_to_word(nf)) == nf


def test_nf_equal_examples():
    assert nf_equal(parse_word("1 2 1", 3), parse_word("2 1 2", 3))
    assert nf_equal(parse_word("1 3", 4), parse_word("3 1", 4))
    assert not nf_equal(parse_word("1", 3), parse_word("2", 3))
    with pytest.raises(BraidError):
        nf_equal(parse_word("1", 3), parse_word("1", 4))


def test_idempotence_and_debug_format():
    nf = left_normal_form(parse_word("1 -2 3 3 -1", 4))
    assert left_normal_form(nf_to_word(nf)) == nf
    text = nf_debug(nf)
    assert text.startswith("Δ^")


@settings(deadline=None, max_examples=60)
@given(words(), st.randoms())
def test_word_times_inverse_is_identity(w, rnd):
    assert left_normal_form(w * w.inverse()).is_identity()


@settings(deadline=None, max_examples=60)
@given(words(n_max=8, len_max=12), words(n_max=8, len_max=12))
def test_nf_mul_matches_word_concatenation(w1, w2):
    if w1.n != w2.n:
        return
    assert nf_mul(left_normal_form(w1), left_normal_form(w2)) == left_normal_form(
        w1 * w2
    )


@settings(deadline=None, max_examples=60)
@given(words())
def test_nf_inv_cancels(w):
    nf = left_normal_form(w)
    assert nf_mul(nf, nf_inv(nf)).is_identity()
    assert nf_mul(nf_inv(nf), nf).is_identity()


def test_nf_pow():
    g = left_normal_form(parse_word("1 2", 4))
    acc = nf_identity(4)
    for k in range(5):
        assert nf_pow(g, k) == acc
        acc = nf_mul(acc, g)
    assert nf_pow(g, -3) == nf_inv(nf_pow(g, 3))


def _insert_relation(rng, letters, n):
    """Insert a braid relation or far-commutation rewrite at a random spot."""
    letters = list(letters)
    pos = rng.randrange(len(letters) + 1)
    if rng.random() < 0.5 and n >= 3:
        i = rng.randrange(1, n - 1)
        chunk = [i, i + 1, i, -(i + 1), -i, -(i + 1)]
    else:
        pairs = [
            (i, j)
            for i in range(1, n)
            for j in range(1, n)
            if abs(i - j) >= 2
        ]
        if not pairs:
            return None
        i, j = rng.choice(pairs)
        chunk = [i, j, -i, -j]
    return BraidWord(n, tuple(letters[:pos] + chunk + letters[pos:]))


def test_relation_insertion_never_changes_normal_form():
    rng = random.Random(7)
    for _ in range(80):
        n = rng.choice([3, 4, 6, 12])
        w = random_word(rng, n, rng.randint(0, 25))
        mutated = _insert_relation(rng, w.letters, n)
        if mutated is None:
            continue
        assert left_normal_form(mutated) == left_normal_form(w)


def test_half_twist_squared_is_central():
    rng = random.Random(3)
    d2 = nf_pow(left_normal_form(BraidWord(12, delta_word(12))), 2)
    for _ in range(30):
        a = left_normal_form(random_word(rng, 12, 20))
        assert nf_mul(d2, a) == nf_mul(a, d2)


# --- permutation projection -------------------------------------------------


def test_permutation_of_examples():
    assert permutation_of(parse_word("", 3)) == identity_perm(3)
    assert permutation_of(parse_word("1", 3)) == (2, 1, 3)
    # left-to-right composition: apply the first crossing first
    assert permutation_of(parse_word("1 2", 3)) == (3, 1, 2)


@settings(deadline=None, max_examples=60)
@given(words(n_max=8, len_max=12), words(n_max=8, len_max=12))
def test_permutation_of_is_homomorphism(w1, w2):
    if w1.n != w2.n:
        return
    assert permutation_of(w1 * w2) == pmul(permutation_of(w1), permutation_of(w2))


@settings(deadline=None, max_examples=60)
@given(words())
def test_permutation_factors_through_normal_form(w):
    assert permutation_of(w) == nf_permutation(left_normal_form(w))


def test_permutation_braid_word_roundtrip():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.choice([3, 5, 12])
        perm = tuple(rng.sample(range(1, n + 1), n))
        letters = permutation_braid_word(perm)
        back = identity_perm(n)
        for l in letters:
            back = pmul(back, transposition(n, l))
        assert back == perm


# --- bands, support, deletion -----------------------------------------------


def test_support_examples():
    assert parabolic_support(parse_word("", 5)) == frozenset()
    assert parabolic_support(parse_word("2", 5)) == frozenset({2, 3})
    assert parabolic_support(parse_word("1 2 1 2 1 2", 3)) == frozenset({1, 2, 3})
    # negative letters stay inside their band
    assert parabolic_support(parse_word("-1", 3)) == frozenset({1, 2})
    # a zero-linking tangle is still full support
    assert parabolic_support(parse_word("2 1 1 -2", 3)) == frozenset({1, 2, 3})


def test_in_band():
    assert in_band(left_normal_form(parse_word("-1", 3)), 1, 2)
    assert not in_band(left_normal_form(parse_word("-1", 3)), 2, 3)
    assert in_band(left_normal_form(parse_word("9 -10 11 10", 12)), 9, 12)
    assert not in_band(left_normal_form(parse_word("8", 12)), 9, 12)
    assert in_band(left_normal_form(parse_word("5", 12)), 1, 12)


def test_band_words_have_band_support():
    rng = random.Random(5)
    for lo, hi in [(1, 4), (5, 8), (9, 12), (5, 12)]:
        letters = [s * i for i in range(lo, hi) for s in (1, -1)]
        for _ in range(25):
            w = BraidWord(12, tuple(rng.choice(letters) for _ in range(10)))
            assert parabolic_support(w) <= frozenset(range(lo, hi + 1))


def test_disjoint_bands_commute():
    rng = random.Random(9)
    low = [s * i for i in range(1, 4) for s in (1, -1)]
    high = [s * i for i in range(9, 12) for s in (1, -1)]
    for _ in range(20):
        a = left_normal_form(BraidWord(12, tuple(rng.choice(low) for _ in range(8))))
        b = left_normal_form(BraidWord(12, tuple(rng.choice(high) for _ in range(8))))
        assert nf_mul(a, b) == nf_mul(b, a)


def test_delete_strands_is_a_retraction():
    rng = random.Random(13)
    for _ in range(30):
        w = BraidWord(
            12, tuple(rng.choice([9, 10, 11, -9, -10, -11]) for _ in range(12))
        )
        sub = delete_strands(nf_to_word(left_normal_form(w)), frozenset(range(9, 13)))
        shifted = BraidWord(12, tuple(l + 8 if l > 0 else l - 8 for l in sub.letters))
        assert nf_equal(shifted, w)
