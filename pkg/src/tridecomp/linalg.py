"""Dense linear algebra over prime fields, plus specialised Burau matrices.

Matrices are numpy ``int64`` arrays with entries reduced mod an odd prime p;
scalars are plain Python ints (inverses via ``pow(x, -1, p)``).  Products stay
well inside int64 range for the primes used here (p ~ 10^3, dimensions up to
a few hundred).

The Burau map sends sigma_i to the identity matrix with the 2x2 block
[[1-t, t], [1, 0]] at rows/columns (i, i+1), evaluated at a fixed field unit
t; it is a homomorphism B_n -> GL_n(F_p) for any unit t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import braids
from .braids import BraidWord

DEFAULT_PRIME = 1009
DEFAULT_T0 = 3


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class MatrixFq:
    """An immutable dense matrix over F_p."""

    __slots__ = ("p", "data")

    def __init__(self, data: np.ndarray | list, p: int):
        arr = np.array(data, dtype=np.int64) % p
        if arr.ndim != 2:
            raise ValueError("MatrixFq needs a 2-d array")
        arr.setflags(write=False)
        self.data = arr
        self.p = p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @staticmethod
    def identity(n: int, p: int) -> "MatrixFq":
        return MatrixFq(np.eye(n, dtype=np.int64), p)

    @staticmethod
    def zeros(rows: int, cols: int, p: int) -> "MatrixFq":
        return MatrixFq(np.zeros((rows, cols), dtype=np.int64), p)

    def _check(self, other: "MatrixFq") -> None:
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.data.shape} @ {other.data.shape}")
        return MatrixFq(self.data @ other.data, self.p)

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        self._check(other)
        return MatrixFq(self.data + other.data, self.p)

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        self._check(other)
        return MatrixFq(self.data - other.data, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixFq):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.p, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"MatrixFq(p={self.p},\n{self.data!r})"

    def dump(self) -> str:
        """Row-major integer grid, one row per line."""
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.data)

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(
            self.data, np.eye(self.rows, dtype=np.int64)
        )


def rref(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (R, pivot column list)."""
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def matrix_rank(m: MatrixFq) -> int:
    return len(rref(m.data, m.p)[1])


def nullspace_basis(m: MatrixFq) -> list[np.ndarray]:
    """Basis of the right nullspace; empty iff the matrix has full column rank."""
    r, pivots = rref(m.data, m.p)
    cols = m.cols
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for row_idx, c in enumerate(pivots):
            v[c] = (-int(r[row_idx, f])) % m.p
        basis.append(v)
    return basis


def mat_inverse(m: MatrixFq) -> MatrixFq | None:
    """Inverse over F_p, or None when the matrix is singular."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    aug = np.concatenate([m.data, np.eye(n, dtype=np.int64)], axis=1)
    r, pivots = rref(aug, m.p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return MatrixFq(r[:, n:], m.p)


def solve_affine(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray | None, list[np.ndarray]]:
    """Solve a x = b mod p; returns (particular solution or None, nullspace basis)."""
    rows, cols = a.shape
    aug = np.concatenate([a % p, (b % p).reshape(rows, 1)], axis=1)
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None, []
    x0 = np.zeros(cols, dtype=np.int64)
    for row_idx, c in enumerate(pivots):
        x0[c] = int(r[row_idx, cols])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for row_idx, c in enumerate(pivots):
            v[c] = (-int(r[row_idx, f])) % p
        basis.append(v)
    return x0, basis


# ---------------------------------------------------------------------------
# Burau


@dataclass(frozen=True)
class BurauParams:
    """Strand count, prime modulus and the field unit the variable is fixed at."""

    n: int
    p: int = DEFAULT_PRIME
    t0: int = DEFAULT_T0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two strands")
        if not is_prime(self.p) or self.p == 2:
            raise ValueError(f"modulus {self.p} must be an odd prime")
        if self.t0 % self.p == 0:
            raise ValueError("the Burau parameter must be a field unit")


def _generator_matrix(params: BurauParams, i: int, inverse: bool) -> np.ndarray:
    n, p, t = params.n, params.p, params.t0 % params.p
    m = np.eye(n, dtype=np.int64)
    if inverse:
        tinv = pow(t, -1, p)
        block = [[0, 1], [tinv, (1 - tinv) % p]]
    else:
        block = [[(1 - t) % p, t], [1, 0]]
    m[i - 1 : i + 1, i - 1 : i + 1] = block
    return m


def burau(word: BraidWord, params: BurauParams) -> MatrixFq:
    """Burau image of a braid word at the fixed field unit."""
    if word.n != params.n:
        raise ValueError(f"word is on {word.n} strands, params on {params.n}")
    acc = np.eye(params.n, dtype=np.int64)
    for letter in word.letters:
        g = _generator_matrix(params, abs(letter), letter < 0)
        acc = (acc @ g) % params.p
    return MatrixFq(acc, params.p)


def burau_nf(nf: braids.NormalForm, params: BurauParams) -> MatrixFq:
    """Burau image of a canonical element (well defined: the map is a homomorphism)."""
    return burau(braids.nf_to_word(nf), params)


# ---------------------------------------------------------------------------
# simultaneous conjugacy in matrix form


def solve_conjugator_matrix(
    pairs: list[tuple[MatrixFq, MatrixFq]],
    dim: int,
    *,
    seed: int = 0,
    max_tries: int = 64,
    support: list[int] | None = None,
    extra_commuting: list[MatrixFq] | None = None,
) -> MatrixFq | None:
    """Find an invertible X with g X = X h for every pair (g, h).

    The dim^2 linear constraints per pair are stacked, the solution space is
    computed by row reduction, and up to ``max_tries`` random points of the
    space are tested for invertibility; None means no invertible solution was
    found.

    ``support`` restricts X to act as the identity outside the given 0-based
    index block (the linear constraints then become affine).  Matrices in
    ``extra_commuting`` are added as pairs (m, m), i.e. X must commute with
    them.
    """
    if not pairs and not extra_commuting:
        raise ValueError("need at least one constraint pair")
    all_pairs = list(pairs)
    for m in extra_commuting or []:
        all_pairs.append((m, m))
    p = all_pairs[0][0].p
    for g, h in all_pairs:
        if g.p != p or h.p != p:
            raise ValueError("modulus mismatch among constraint pairs")
        if g.data.shape != (dim, dim) or h.data.shape != (dim, dim):
            raise ValueError(
                f"constraint matrices must be {dim}x{dim}, got {g.data.shape} and {h.data.shape}"
            )

    eye = np.eye(dim, dtype=np.int64)
    if support is None:
        cells = [(i, j) for i in range(dim) for j in range(dim)]
        fixed = np.zeros((dim, dim), dtype=np.int64)
    else:
        sup = sorted(set(support))
        if any(not 0 <= i < dim for i in sup):
            raise ValueError("support indices out of range")
        cells = [(i, j) for i in sup for j in sup]
        fixed = eye.copy()
        for i in sup:
            fixed[i, i] = 0
    cell_index = [i * dim + j for (i, j) in cells]

    blocks = []
    rhs_parts = []
    for g, h in all_pairs:
        # row-major vec: vec(gX - Xh) = (g (x) I - I (x) h^T) vec(X)
        m = (np.kron(g.data, eye) - np.kron(eye, h.data.T)) % p
        blocks.append(m[:, cell_index])
        rhs = (fixed @ h.data - g.data @ fixed) % p
        rhs_parts.append(rhs.reshape(-1))
    a = np.concatenate(blocks, axis=0) % p
    b = np.concatenate(rhs_parts) % p

    x0, basis = solve_affine(a, b, p)
    if x0 is None:
        return None

    rng = np.random.default_rng(seed)

    def assemble(coeffs: np.ndarray) -> MatrixFq:
        vec = x0.copy()
        for c, v in zip(coeffs, basis):
            vec = (vec + int(c) * v) % p
        out = fixed.copy()
        for (i, j), val in zip(cells, vec):
            out[i, j] = int(val)
        return MatrixFq(out, p)

    for attempt in range(max_tries):
        if attempt == 0:
            coeffs = np.zeros(len(basis), dtype=np.int64)
        else:
            coeffs = rng.integers(0, p, size=len(basis), dtype=np.int64)
        candidate = assemble(coeffs)
        if mat_inverse(candidate) is not None:
            return candidate
    return None
