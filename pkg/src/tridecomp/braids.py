"""Exact arithmetic in the Artin braid groups B_n.

Elements are canonicalised to the left-weighted normal form

    delta^k . f_1 f_2 ... f_m

where delta is the positive half twist on n strands and every factor f_i is a
permutation braid (a positive braid in which each pair of strands crosses at
most once), stored as the 1-based image table of its underlying permutation.
No factor is the identity or delta, and each adjacent pair is left-weighted:
every generator that starts f_{i+1} also finishes f_i.  The normal form is
unique per group element, so equality, hashing and canonical serialisation
are all structural.

Permutations compose left to right (apply the first factor, then the second),
matching how the strand permutation of a braid word is read top to bottom:
the permutation of sigma_1 sigma_2 in B_3 sends 1 -> 3, 3 -> 2, 2 -> 1.

Conventions used throughout:

* the starting set S(f) of a permutation braid with image table pi is the set
  of descents {i : pi(i) > pi(i+1)}; sigma_i left-divides f iff i is in S(f);
* the finishing set F(f) is S of the inverse table: sigma_i right-divides f
  iff the value i appears after the value i+1 in pi;
* a pair (f, g) is left-weighted iff S(g) is a subset of F(f);
* negative letters enter through the rewrite sigma_i^-1 = delta^-1 (delta
  sigma_i^-1), whose second factor is the permutation braid with table
  pmul(w0, tau_i).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .permutations import (
    Perm,
    identity_perm,
    inversions,
    is_identity_perm,
    longest_perm,
    pinv,
    pmul,
    transposition,
)

# Guard against runaway normal forms; see the module docstring of the
# protocol presets for why realistic inputs stay tiny compared to this.
MAX_CANONICAL_FACTORS = 20000


class BraidError(ValueError):
    pass


class CanonicalLengthExceeded(BraidError):
    """Normal form grew past MAX_CANONICAL_FACTORS."""


@dataclass(frozen=True)
class BraidWord:
    """A word in the Artin generators: positive i means sigma_i, negative its inverse."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 2:
            raise BraidError(f"braid group needs at least 2 strands, got n={self.n}")
        for pos, letter in enumerate(self.letters):
            if letter == 0 or abs(letter) > self.n - 1:
                raise BraidError(
                    f"letter {letter} at position {pos} out of range for B_{self.n}"
                )

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise BraidError("cannot concatenate words from different braid groups")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-l for l in reversed(self.letters)))


@dataclass(frozen=True)
class NormalForm:
    """Left-weighted normal form delta^inf . factors, factors as image tables."""

    n: int
    inf: int
    factors: tuple[Perm, ...] = ()

    def is_identity(self) -> bool:
        return self.inf == 0 and not self.factors

    def canonical_length(self) -> int:
        return len(self.factors)

    def sup(self) -> int:
        return self.inf + len(self.factors)


@dataclass(frozen=True)
class StrandBand:
    """The strand interval [lo, hi]; its subgroup is generated by sigma_lo..sigma_{hi-1}."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 1 or self.lo >= self.hi:
            raise BraidError(f"invalid band [{self.lo}, {self.hi}]")

    def generator_indices(self) -> range:
        return range(self.lo, self.hi)

    def strands(self) -> range:
        return range(self.lo, self.hi + 1)


# ---------------------------------------------------------------------------
# word parsing / formatting


def parse_word(text: str, n: int) -> BraidWord:
    """Parse whitespace-separated signed generator indices, e.g. "1 -2 3"."""
    letters = []
    for pos, tok in enumerate(text.split()):
        try:
            val = int(tok)
        except ValueError as exc:
            raise BraidError(f"token {tok!r} at position {pos} is not an integer") from exc
        if val == 0 or abs(val) > n - 1:
            raise BraidError(f"index {val} at position {pos} out of range for B_{n}")
        letters.append(val)
    return BraidWord(n, tuple(letters))


def format_word(word: BraidWord) -> str:
    return " ".join(str(l) for l in word.letters)


def free_reduce(word: BraidWord) -> BraidWord:
    """Cancel adjacent sigma_i sigma_i^-1 pairs (including nested runs)."""
    out: list[int] = []
    for letter in word.letters:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return BraidWord(word.n, tuple(out))


# ---------------------------------------------------------------------------
# permutation-braid helpers


def _tau(p: Perm, n: int) -> Perm:
    """Conjugation by the half twist: flips sigma_i to sigma_{n-i}."""
    return tuple(n + 1 - p[n - 1 - i] for i in range(n))


def _left_weight_pair(a: Perm, b: Perm) -> tuple[Perm, Perm, bool]:
    """Slide prefix generators of b into a until the pair (a, b) is left-weighted.

    Each transfer moves one sigma_s with s in S(b) \\ F(a): it lengthens a by a
    crossing and shortens b, so the loop ends after at most len(delta) steps.
    """
    n = len(a)
    la = list(a)
    lb = list(b)
    pos = [0] * (n + 2)  # pos[v] = index of the value v in la
    for i, v in enumerate(la):
        pos[v] = i
    changed = False
    progress = True
    while progress:
        progress = False
        for s in range(1, n):
            # s in S(b): descent of the image table; s not in F(a): the value s
            # sits before the value s+1.
            if lb[s - 1] > lb[s] and pos[s] < pos[s + 1]:
                i, j = pos[s], pos[s + 1]
                la[i], la[j] = s + 1, s
                pos[s], pos[s + 1] = j, i
                lb[s - 1], lb[s] = lb[s], lb[s - 1]
                changed = True
                progress = True
    if not changed:
        return a, b, False
    return tuple(la), tuple(lb), True


def _normalize_factors(
    factors: list[Perm], n: int, hot: list[int] | None = None
) -> tuple[int, list[Perm]]:
    """Left-weight a factor list in place; return (delta prefix length, trimmed factors).

    ``hot`` lists the junctions that may violate left-weighting; None means all
    of them.  Junctions adjacent to a change are re-examined, so the loop stops
    exactly at the unique left-weighted fixpoint, after which any run of delta
    factors sits at the front and identity factors at the back.
    """
    if len(factors) > MAX_CANONICAL_FACTORS:
        raise CanonicalLengthExceeded(
            f"normal form would exceed {MAX_CANONICAL_FACTORS} factors"
        )
    count = len(factors)
    if count > 1:
        pending = deque(range(count - 1) if hot is None else hot)
        queued = set(pending)
        while pending:
            i = pending.popleft()
            queued.discard(i)
            a, b, changed = _left_weight_pair(factors[i], factors[i + 1])
            if changed:
                factors[i] = a
                factors[i + 1] = b
                for j in (i - 1, i + 1):
                    if 0 <= j < count - 1 and j not in queued:
                        pending.append(j)
                        queued.add(j)
    w0 = longest_perm(n)
    lead = 0
    while lead < len(factors) and factors[lead] == w0:
        lead += 1
    tail = len(factors)
    while tail > lead and is_identity_perm(factors[tail - 1]):
        tail -= 1
    return lead, factors[lead:tail]


def left_normal_form(word: BraidWord) -> NormalForm:
    """Canonicalise a word: unique left-weighted form with a delta-power prefix."""
    n = word.n
    w0 = longest_perm(n)
    factors: list[Perm] = []
    powers: list[int] = []
    for letter in word.letters:
        tau_i = transposition(n, abs(letter))
        if letter > 0:
            factors.append(tau_i)
            powers.append(0)
        else:
            # sigma_i^-1 = delta^-1 . (delta sigma_i^-1)
            factors.append(pmul(w0, tau_i))
            powers.append(-1)
    delta_pow = 0
    for k in range(len(factors) - 1, -1, -1):
        if delta_pow % 2:
            factors[k] = _tau(factors[k], n)
        delta_pow += powers[k]
    shift, trimmed = _normalize_factors(factors, n)
    return NormalForm(n, delta_pow + shift, tuple(trimmed))


def nf_identity(n: int) -> NormalForm:
    return NormalForm(n, 0, ())


def nf_generator(n: int, i: int) -> NormalForm:
    """sigma_i (or its inverse for negative i) as a normal form."""
    return left_normal_form(BraidWord(n, (i,)))


def nf_mul(a: NormalForm, b: NormalForm) -> NormalForm:
    """Product of two normal forms without rebuilding words from scratch."""
    if a.n != b.n:
        raise BraidError("cannot multiply braids on different strand counts")
    n = a.n
    if a.is_identity():
        return b
    if b.is_identity():
        return a
    if b.inf % 2:
        left = [_tau(f, n) for f in a.factors]
    else:
        left = list(a.factors)
    factors = left + list(b.factors)
    if left and b.factors:
        hot = [len(left) - 1]
    else:
        hot = []
    shift, trimmed = _normalize_factors(factors, n, hot=hot)
    return NormalForm(n, a.inf + b.inf + shift, tuple(trimmed))


def nf_inv(a: NormalForm) -> NormalForm:
    """Inverse: reverse the factors through their delta-complements."""
    n = a.n
    w0 = longest_perm(n)
    factors = [pmul(w0, pinv(f)) for f in reversed(a.factors)]
    delta_pow = -a.inf
    for k in range(len(factors) - 1, -1, -1):
        if delta_pow % 2:
            factors[k] = _tau(factors[k], n)
        delta_pow -= 1
    shift, trimmed = _normalize_factors(factors, n)
    return NormalForm(n, delta_pow + shift, tuple(trimmed))


def nf_pow(a: NormalForm, exp: int) -> NormalForm:
    acc = nf_identity(a.n)
    if exp == 0:
        return acc
    base = a if exp > 0 else nf_inv(a)
    exp = abs(exp)
    while exp:
        if exp & 1:
            acc = nf_mul(acc, base)
        exp >>= 1
        if exp:
            base = nf_mul(base, base)
    return acc


def nf_equal(a: BraidWord, b: BraidWord) -> bool:
    """True iff the two words represent the same element of B_n."""
    if a.n != b.n:
        raise BraidError("cannot compare words from different braid groups")
    return left_normal_form(a) == left_normal_form(b)


def nf_permutation(nf: NormalForm) -> Perm:
    """Image of the element under the projection B_n -> S_n."""
    perm = longest_perm(nf.n) if nf.inf % 2 else identity_perm(nf.n)
    for f in nf.factors:
        perm = pmul(perm, f)
    return perm


def permutation_of(word: BraidWord) -> Perm:
    """Strand permutation of a word; a homomorphism sending sigma_i to (i, i+1)."""
    perm = identity_perm(word.n)
    for letter in word.letters:
        perm = pmul(perm, transposition(word.n, abs(letter)))
    return perm


def permutation_braid_word(p: Perm) -> tuple[int, ...]:
    """A positive word for the permutation braid with image table p.

    Peels generators off the right end: each step removes a finishing
    generator, so the output has exactly inversions(p) letters.
    """
    n = len(p)
    table = list(p)
    pos = [0] * (n + 2)
    for i, v in enumerate(table):
        pos[v] = i
    letters: list[int] = []
    remaining = inversions(p)
    while remaining:
        for s in range(1, n):
            if pos[s] > pos[s + 1]:
                i, j = pos[s], pos[s + 1]
                table[i], table[j] = s + 1, s
                pos[s], pos[s + 1] = j, i
                letters.append(s)
                remaining -= 1
                break
    letters.reverse()
    return tuple(letters)


def delta_word(n: int) -> tuple[int, ...]:
    """The standard positive word for the half twist."""
    letters: list[int] = []
    for k in range(1, n):
        letters.extend(range(k, 0, -1))
    return tuple(letters)


def nf_to_word(nf: NormalForm) -> BraidWord:
    """An explicit word for the element (delta letters, then factor letters)."""
    letters: list[int] = []
    dword = delta_word(nf.n)
    if nf.inf > 0:
        letters.extend(dword * nf.inf)
    elif nf.inf < 0:
        inv = tuple(-l for l in reversed(dword))
        letters.extend(inv * (-nf.inf))
    for f in nf.factors:
        letters.extend(permutation_braid_word(f))
    return BraidWord(nf.n, tuple(letters))


def nf_debug(nf: NormalForm) -> str:
    """Debug rendering "Δ^k | [..] | [..]" with factor image tables."""
    parts = [f"Δ^{nf.inf}"]
    parts.extend("[" + ",".join(str(v) for v in f) + "]" for f in nf.factors)
    return " | ".join(parts)


# ---------------------------------------------------------------------------
# strand bands, deletion, support


def band_generator_words(n: int, lo: int, hi: int) -> list[BraidWord]:
    band = StrandBand(lo, hi)
    if hi > n:
        raise BraidError(f"band [{lo}, {hi}] does not fit in B_{n}")
    return [BraidWord(n, (i,)) for i in band.generator_indices()]


def delete_strands(word: BraidWord, keep: frozenset[int] | set[int]) -> BraidWord:
    """Forget every strand not in ``keep`` (strands named by initial position).

    Crossings between two kept strands survive, renumbered to the kept strand
    ranks; crossings involving a deleted strand vanish.  This is the usual
    strand-forgetting map and is well defined on group elements.
    """
    n = word.n
    m = len(keep)
    if m < 2:
        return BraidWord(2, ())  # nothing left to braid
    occupant = list(range(1, n + 1))
    out: list[int] = []
    for letter in word.letters:
        i = abs(letter)
        s, t = occupant[i - 1], occupant[i]
        if s in keep and t in keep:
            rank = sum(1 for x in occupant[: i - 1] if x in keep)
            out.append((rank + 1) if letter > 0 else -(rank + 1))
        occupant[i - 1], occupant[i] = t, s
    return BraidWord(m, tuple(out))


def _embed_word(sub: BraidWord, n: int, offset: int) -> BraidWord:
    letters = tuple((l + offset) if l > 0 else (l - offset) for l in sub.letters)
    return BraidWord(n, letters)


def in_band(nf: NormalForm, lo: int, hi: int) -> bool:
    """Exact membership in the band subgroup generated by sigma_lo..sigma_{hi-1}.

    The element lies in the band iff its permutation fixes every outside strand
    and forgetting the outside strands followed by re-embedding reproduces it.
    """
    n = nf.n
    if lo == 1 and hi == n:
        return True
    if nf.is_identity():
        return True
    perm = nf_permutation(nf)
    for i in range(1, n + 1):
        if (i < lo or i > hi) and perm[i - 1] != i:
            return False
    word = nf_to_word(nf)
    sub = delete_strands(word, frozenset(range(lo, hi + 1)))
    return left_normal_form(_embed_word(sub, n, lo - 1)) == nf


def _splits_at(word: BraidWord, perm: Perm, nf: NormalForm, g: int) -> bool:
    """Whether the element factors through B([1..g]) x B([g+1..n])."""
    n = word.n
    if any(perm[i] > g for i in range(g)):
        return False
    left = delete_strands(word, frozenset(range(1, g + 1)))
    right = delete_strands(word, frozenset(range(g + 1, n + 1)))
    if g == 1:
        recomposed = _embed_word(right, n, g)
    elif g == n - 1:
        recomposed = _embed_word(left, n, 0)
    else:
        recomposed = _embed_word(left, n, 0) * _embed_word(right, n, g)
    return left_normal_form(recomposed) == nf


def _linking_counts(word: BraidWord) -> dict[tuple[int, int], int]:
    """Signed crossing count per strand pair (strands named by start position).

    Invariant under braid relations, so a strand pair with nonzero linking can
    never be separated by a band split.
    """
    occupant = list(range(1, word.n + 1))
    link: dict[tuple[int, int], int] = {}
    for letter in word.letters:
        i = abs(letter)
        s, t = occupant[i - 1], occupant[i]
        key = (s, t) if s < t else (t, s)
        link[key] = link.get(key, 0) + (1 if letter > 0 else -1)
        occupant[i - 1], occupant[i] = t, s
    return {k: v for k, v in link.items() if v != 0}


def _recompose_blocks(word: BraidWord, splits: list[int]) -> BraidWord:
    n = word.n
    letters: list[int] = []
    bounds = [0] + splits + [n]
    for lo_b, hi_b in zip(bounds, bounds[1:]):
        if hi_b - lo_b < 2:
            continue
        sub = delete_strands(word, frozenset(range(lo_b + 1, hi_b + 1)))
        letters.extend(_embed_word(sub, n, lo_b).letters)
    return BraidWord(n, tuple(letters))


def parabolic_support(source: BraidWord | NormalForm) -> frozenset[int]:
    """Smallest union of strand intervals supporting the element.

    The element lies in the band subgroup B([lo, hi]) iff its support is
    contained in {lo..hi}.  The identity has empty support.
    """
    nf = source if isinstance(source, NormalForm) else left_normal_form(source)
    if nf.is_identity():
        return frozenset()
    n = nf.n
    if nf.inf > 0:
        # a positive delta power links every strand pair
        return frozenset(range(1, n + 1))
    word = nf_to_word(nf)
    perm = nf_permutation(nf)
    link = _linking_counts(word)
    candidates = []
    for g in range(1, n):
        if any(perm[i] > g for i in range(g)):
            continue
        if any(i <= g < j for (i, j) in link):
            continue
        candidates.append(g)
    # Zero cross-linking is necessary but not sufficient; confirm all candidate
    # gaps at once and only fall back to per-gap checks when that fails.
    if candidates and left_normal_form(_recompose_blocks(word, candidates)) == nf:
        splits = candidates
    else:
        splits = [g for g in candidates if _splits_at(word, perm, nf, g)]
    bounds = [0] + splits + [n]
    support: set[int] = set()
    for lo_b, hi_b in zip(bounds, bounds[1:]):
        # a block bounded by true splits whose inner gaps do not split is
        # nontrivial, so every multi-strand block belongs to the support
        if hi_b - lo_b >= 2:
            support.update(range(lo_b + 1, hi_b + 1))
    return frozenset(support)
