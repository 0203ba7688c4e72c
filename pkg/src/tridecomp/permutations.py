"""Dense permutations on the points 1..n, stored as 1-based image tables.

A permutation is a tuple ``images`` of length n whose entry at index i-1 is
the image of the point i.  Products compose left to right: ``pmul(a, b)`` is
the permutation "apply a, then b".  This is the convention under which the
permutation of a braid word is read off by following strand positions from
top to bottom.
"""

from __future__ import annotations

import re

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def is_identity_perm(p: Perm) -> bool:
    return all(v == i + 1 for i, v in enumerate(p))


def check_perm(p: Perm) -> None:
    """Raise ValueError unless p is a 1-based image table."""
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..{len(p)}: {p!r}")


def pmul(a: Perm, b: Perm) -> Perm:
    """Product "a then b": (pmul(a, b))(x) = b(a(x))."""
    return tuple(b[v - 1] for v in a)


def pinv(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, v in enumerate(a):
        inv[v - 1] = i + 1
    return tuple(inv)


def papply(p: Perm, x: int) -> int:
    return p[x - 1]


def transposition(n: int, i: int) -> Perm:
    """The adjacent transposition swapping i and i+1."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"transposition index {i} out of range for n={n}")
    images = list(range(1, n + 1))
    images[i - 1], images[i] = images[i], images[i - 1]
    return tuple(images)


def longest_perm(n: int) -> Perm:
    """The order-reversing permutation i -> n+1-i."""
    return tuple(range(n, 0, -1))


def inversions(p: Perm) -> int:
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def moved_points(p: Perm) -> frozenset[int]:
    return frozenset(i + 1 for i, v in enumerate(p) if v != i + 1)


def cycles(p: Perm) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each rotated to start at its minimum."""
    seen: set[int] = set()
    out = []
    for start in range(1, len(p) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = papply(p, start)
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = papply(p, x)
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def from_cycles(n: int, cycs: list[tuple[int, ...]]) -> Perm:
    images = list(range(1, n + 1))
    for cyc in cycs:
        for a in cyc:
            if not 1 <= a <= n:
                raise ValueError(f"cycle point {a} out of range 1..{n}")
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    check_perm(tuple(images))
    return tuple(images)


def format_image_table(p: Perm) -> str:
    return "[" + ",".join(str(v) for v in p) + "]"


def format_cycles(p: Perm) -> str:
    cycs = cycles(p)
    if not cycs:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int) -> Perm:
    """Parse either an image table "[2,3,1]" or cycle notation "(1 2 3)(4 5)".

    The empty cycle "()" and the empty string both mean the identity.
    """
    text = text.strip()
    if not text or text == "()":
        return identity_perm(n)
    if text.startswith("["):
        body = text.strip("[]")
        images = tuple(int(tok) for tok in body.split(",") if tok.strip())
        if len(images) != n:
            raise ValueError(f"image table has {len(images)} entries, expected {n}")
        check_perm(images)
        return images
    if text.startswith("("):
        chunks = _CYCLE_RE.findall(text)
        joined = "".join(f"({c})" for c in chunks)
        if joined.replace(" ", "") != text.replace(" ", ""):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycs = []
        for chunk in chunks:
            pts = tuple(int(tok) for tok in chunk.split())
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle {chunk!r}")
            if pts:
                cycs.append(pts)
        return from_cycles(n, cycs)
    raise ValueError(f"unrecognised permutation syntax: {text!r}")
