import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridecomp.braids import parabolic_support
from tridecomp.groups import (
    EmptyGeneratingSet,
    IncompatibleElements,
    SubgroupSpec,
    band_spec,
    braid_element,
    braid_identity,
    commute,
    compose,
    compose_all,
    conjugate,
    conjugate_left,
    conjugated_band_spec,
    element_from_text,
    element_permutation,
    element_to_text,
    full_braid_spec,
    full_perm_spec,
    identity_like,
    invert,
    perm_block_spec,
    permutation_element,
    permutation_identity,
    sample_word,
    spec_member,
)


def braid_elems(n=6, len_max=10):
    return st.lists(
        st.integers(min_value=-(n - 1), max_value=n - 1).filter(lambda x: x != 0),
        max_size=len_max,
    ).map(lambda ls: braid_element(" ".join(map(str, ls)), n))


def perm_elems(n=7):
    return st.permutations(list(range(1, n + 1))).map(
        lambda p: permutation_element(tuple(p))
    )


@settings(deadline=None, max_examples=50)
@given(braid_elems(), braid_elems(), braid_elems())
def test_braid_group_axioms(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    e = identity_like(a)
    assert compose(e, a) == a == compose(a, e)
    assert compose(a, invert(a)) == e


@given(perm_elems(), perm_elems(), perm_elems())
def test_perm_group_axioms(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    e = identity_like(a)
    assert compose(e, a) == a == compose(a, e)
    assert compose(a, invert(a)) == e


@settings(deadline=None, max_examples=40)
@given(braid_elems(), braid_elems(), braid_elems())
def test_conjugation_cocycle_braids(g, z1, z2):
    assert conjugate(conjugate(g, z1), z2) == conjugate(g, compose(z1, z2))


@given(perm_elems(), perm_elems(), perm_elems())
def test_conjugation_cocycle_perms(g, z1, z2):
    assert conjugate(conjugate(g, z1), z2) == conjugate(g, compose(z1, z2))


def test_conjugate_examples():
    g = permutation_element("(1 2 3)", 5)
    z = permutation_element("(1 4)", 5)
    out = conjugate(g, z)
    # independent check by composing image tables directly
    zi, gi, zz = invert(z).images, g.images, z.images
    expected = tuple(zz[gi[zi[x - 1] - 1] - 1] for x in range(1, 6))
    assert out.images == expected
    assert out == permutation_element("(4 2 3)", 5)
    # conjugating by the identity does nothing
    assert conjugate(g, identity_like(g)) == g
    # disjoint bands: conjugation acts trivially
    low = braid_element("1 2 3 -2", 12)
    high = braid_element("9 11 -10", 12)
    assert conjugate(low, high) == low


def test_involution_and_identity_examples():
    t = permutation_element("(1 2)", 4)
    assert compose(t, t) == permutation_identity(4)
    assert invert(permutation_identity(4)) == permutation_identity(4)
    assert invert(permutation_element("(1 2 3)", 4)) == permutation_element(
        "(1 3 2)", 4
    )
    b = braid_element("1 2", 3)
    assert compose(invert(b), b) == braid_identity(3)
    # the braid relation survives composition and canonicalisation
    assert compose(braid_element("1 2", 3), braid_element("1", 3)) == compose(
        braid_element("2 1", 3), braid_element("2", 3)
    )


def test_incompatible_elements():
    with pytest.raises(IncompatibleElements, match="incompatible"):
        compose(braid_element("1", 3), braid_element("1", 4))
    with pytest.raises(IncompatibleElements):
        compose(braid_element("1", 3), permutation_element("(1 2)", 3))


def test_element_text_roundtrip():
    b = braid_element("1 -2 3", 4)
    assert element_from_text("braid", element_to_text(b), 4) == b
    p = permutation_element("(1 3)(2 4)", 4)
    assert element_from_text("permutation", element_to_text(p), 4) == p


# --- subgroup specs ----------------------------------------------------------


def test_spec_construction_and_membership():
    spec = band_spec(12, 9, 12)
    assert spec_member(spec, sample_word(spec, 6, 1))
    assert not spec_member(spec, braid_element("8", 12))
    full = full_braid_spec(12)
    assert spec_member(full, braid_element("1 5 -3", 12))
    with pytest.raises(EmptyGeneratingSet):
        SubgroupSpec(())


def test_conjugated_spec_generators_are_conjugated_band_generators():
    s = braid_element("1 5 -3 2", 12)
    spec = conjugated_band_spec(12, 9, 12, s)
    for i, g in enumerate(spec.generators):
        assert g == conjugate_left(braid_element(str(9 + i), 12), s)
    # membership unwraps the conjugation
    x = sample_word(spec, 5, 3)
    assert spec_member(spec, x)
    assert not spec_member(spec, braid_element("1", 12))

    with pytest.raises(ValueError, match="leaves the band"):
        SubgroupSpec(
            (braid_element("1", 12),), band=(9, 12), conjugator=s
        )


def test_perm_spec_membership():
    spec = perm_block_spec(9, 4, 6)
    assert spec_member(spec, permutation_element("(4 5 6)", 9))
    assert not spec_member(spec, permutation_element("(3 4)", 9))


def test_sample_word_contract():
    spec = band_spec(12, 1, 4)
    assert sample_word(spec, 0, 5) == braid_identity(12)
    assert sample_word(spec, 7, 42) == sample_word(spec, 7, 42)
    assert sample_word(spec, 7, 42) != sample_word(spec, 7, 43)
    for seed in range(25):
        x = sample_word(spec, 6, seed)
        assert parabolic_support(x.nf) <= frozenset(range(1, 5))
    with pytest.raises(ValueError):
        sample_word(spec, -1, 0)


def test_disjoint_band_generator_pairs_commute():
    low = band_spec(12, 1, 4)
    high = band_spec(12, 9, 12)
    for g in low.generators:
        for h in high.generators:
            assert commute(g, h)


def test_full_perm_spec_and_projection():
    spec = full_perm_spec(5)
    x = sample_word(spec, 6, 2)
    assert element_permutation(x) == x.images
    b = braid_element("1 2", 3)
    assert element_permutation(b) == (3, 1, 2)
