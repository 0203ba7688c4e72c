"""Platform layer: one element interface over braid groups and S_n.

Protocols and attacks are written against :data:`GroupElement`, which is
either a braid (held as its canonical normal form) or a permutation (held as
its image table).  Elements of the same platform and rank compose, invert and
conjugate through the free functions below; mixing platforms or ranks raises
:class:`IncompatibleElements`.  Everything is immutable and canonical at
construction, so equality and hashing are structural.

The conjugation convention is fixed as ``conjugate(g, z) = z^-1 g z``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import braids
from .braids import BraidWord, NormalForm
from . import permutations as perms
from .permutations import Perm


class IncompatibleElements(ValueError):
    pass


class EmptyGeneratingSet(ValueError):
    pass


@dataclass(frozen=True)
class BraidElement:
    nf: NormalForm

    @property
    def n(self) -> int:
        return self.nf.n

    @property
    def platform(self) -> str:
        return "braid"

    def is_identity(self) -> bool:
        return self.nf.is_identity()

    def to_text(self) -> str:
        return braids.format_word(braids.nf_to_word(self.nf))


@dataclass(frozen=True)
class PermutationElement:
    images: Perm

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def platform(self) -> str:
        return "permutation"

    def is_identity(self) -> bool:
        return perms.is_identity_perm(self.images)

    def to_text(self) -> str:
        return perms.format_image_table(self.images)


GroupElement = BraidElement | PermutationElement


def braid_element(word: BraidWord | str, n: int | None = None) -> BraidElement:
    if isinstance(word, str):
        if n is None:
            raise ValueError("text braid words need an explicit strand count")
        word = braids.parse_word(word, n)
    return BraidElement(braids.left_normal_form(word))


def braid_identity(n: int) -> BraidElement:
    return BraidElement(braids.nf_identity(n))


def permutation_element(images_or_text: Perm | str, n: int | None = None) -> PermutationElement:
    if isinstance(images_or_text, str):
        if n is None:
            raise ValueError("text permutations need an explicit point count")
        return PermutationElement(perms.parse_permutation(images_or_text, n))
    perms.check_perm(images_or_text)
    return PermutationElement(tuple(images_or_text))


def permutation_identity(n: int) -> PermutationElement:
    return PermutationElement(perms.identity_perm(n))


def element_from_text(platform: str, text: str, n: int) -> GroupElement:
    if platform == "braid":
        return braid_element(text, n)
    if platform == "permutation":
        return permutation_element(text, n)
    raise ValueError(f"unknown platform {platform!r}")


def _require_compatible(a: GroupElement, b: GroupElement) -> None:
    if a.platform != b.platform or a.n != b.n:
        raise IncompatibleElements(
            f"incompatible elements: {a.platform}/{a.n} vs {b.platform}/{b.n}"
        )


def identity_like(a: GroupElement) -> GroupElement:
    if isinstance(a, BraidElement):
        return braid_identity(a.n)
    return permutation_identity(a.n)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Canonical product a.b."""
    _require_compatible(a, b)
    if isinstance(a, BraidElement):
        return BraidElement(braids.nf_mul(a.nf, b.nf))
    return PermutationElement(perms.pmul(a.images, b.images))


def compose_all(*elements: GroupElement) -> GroupElement:
    if not elements:
        raise ValueError("compose_all needs at least one element")
    acc = elements[0]
    for e in elements[1:]:
        acc = compose(acc, e)
    return acc


def invert(a: GroupElement) -> GroupElement:
    if isinstance(a, BraidElement):
        return BraidElement(braids.nf_inv(a.nf))
    return PermutationElement(perms.pinv(a.images))


def conjugate(g: GroupElement, z: GroupElement) -> GroupElement:
    """z^-1 . g . z"""
    _require_compatible(g, z)
    return compose(compose(invert(z), g), z)


def conjugate_left(g: GroupElement, s: GroupElement) -> GroupElement:
    """s . g . s^-1 (the published-generator convention for conjugated subgroups)."""
    _require_compatible(g, s)
    return compose(compose(s, g), invert(s))


def commute(a: GroupElement, b: GroupElement) -> bool:
    return compose(a, b) == compose(b, a)


def element_permutation(a: GroupElement) -> Perm:
    """Underlying permutation (projection B_n -> S_n for braids)."""
    if isinstance(a, BraidElement):
        return braids.nf_permutation(a.nf)
    return a.images


@dataclass(frozen=True)
class SubgroupSpec:
    """A published generating set, with optional band/conjugator structure.

    ``band`` marks the spec as the strand (or point) interval subgroup
    [lo, hi]; with a ``conjugator`` s the published generators are exactly
    s g s^-1 for the band generators g.  A spec with neither band nor
    conjugator is unconstrained: membership checks accept anything, which is
    how the bounded-word full-group specs of the presets behave.
    """

    generators: tuple[GroupElement, ...]
    band: tuple[int, int] | None = None
    conjugator: GroupElement | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if not self.generators:
            raise EmptyGeneratingSet(f"spec {self.label!r} has no generators")
        first = self.generators[0]
        for g in self.generators[1:]:
            _require_compatible(first, g)
        if self.conjugator is not None and self.band is None:
            raise ValueError(f"spec {self.label!r}: conjugator requires a band")
        if self.band is not None:
            lo, hi = self.band
            if not (1 <= lo < hi <= first.n):
                raise ValueError(f"spec {self.label!r}: band {self.band} out of range")
            for g in self.generators:
                core = g if self.conjugator is None else conjugate(g, self.conjugator)
                if not _band_member(core, lo, hi):
                    raise ValueError(
                        f"spec {self.label!r}: generator leaves the band {self.band}"
                    )

    @property
    def platform(self) -> str:
        return self.generators[0].platform

    @property
    def n(self) -> int:
        return self.generators[0].n

    def is_full(self) -> bool:
        return self.band is None and self.conjugator is None


def _band_member(x: GroupElement, lo: int, hi: int) -> bool:
    if isinstance(x, BraidElement):
        return braids.in_band(x.nf, lo, hi)
    return all(lo <= pt <= hi for pt in perms.moved_points(x.images))


def spec_member(spec: SubgroupSpec, x: GroupElement) -> bool:
    """Membership in the subgroup the spec describes (exact for banded specs)."""
    _require_compatible(spec.generators[0], x)
    if spec.conjugator is not None:
        x = conjugate(x, spec.conjugator)
    if spec.band is not None:
        return _band_member(x, *spec.band)
    return True


def band_spec(n: int, lo: int, hi: int, label: str = "") -> SubgroupSpec:
    gens = tuple(
        braid_element(w) for w in braids.band_generator_words(n, lo, hi)
    )
    return SubgroupSpec(gens, band=(lo, hi), label=label or f"band[{lo},{hi}]")


def full_braid_spec(n: int, label: str = "") -> SubgroupSpec:
    gens = tuple(braid_element(BraidWord(n, (i,))) for i in range(1, n))
    return SubgroupSpec(gens, label=label or f"B_{n}")


def conjugated_band_spec(
    n: int, lo: int, hi: int, s: GroupElement, label: str = ""
) -> SubgroupSpec:
    gens = tuple(
        conjugate_left(braid_element(w), s)
        for w in braids.band_generator_words(n, lo, hi)
    )
    return SubgroupSpec(
        gens, band=(lo, hi), conjugator=s, label=label or f"conj-band[{lo},{hi}]"
    )


def perm_block_spec(n: int, lo: int, hi: int, label: str = "") -> SubgroupSpec:
    """Symmetric group on the point block [lo, hi], by adjacent transpositions."""
    if not (1 <= lo < hi <= n):
        raise ValueError(f"block [{lo},{hi}] out of range for S_{n}")
    gens = tuple(
        PermutationElement(perms.transposition(n, i)) for i in range(lo, hi)
    )
    return SubgroupSpec(gens, band=(lo, hi), label=label or f"S[{lo},{hi}]")


def full_perm_spec(n: int, label: str = "") -> SubgroupSpec:
    gens = tuple(PermutationElement(perms.transposition(n, i)) for i in range(1, n))
    return SubgroupSpec(gens, label=label or f"S_{n}")


def sample_word(spec: SubgroupSpec, length: int, seed: int) -> GroupElement:
    """Deterministic product of ``length`` uniform published generators or inverses."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    rng = random.Random(seed)
    acc = identity_like(spec.generators[0])
    for _ in range(length):
        g = rng.choice(spec.generators)
        if rng.random() < 0.5:
            g = invert(g)
        acc = compose(acc, g)
    return acc


def element_to_text(x: GroupElement) -> str:
    return x.to_text()
