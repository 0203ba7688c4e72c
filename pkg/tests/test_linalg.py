import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridecomp.braids import BraidWord, parse_word
from tridecomp.linalg import (
    BurauParams,
    MatrixFq,
    burau,
    burau_nf,
    is_prime,
    mat_inverse,
    matrix_rank,
    nullspace_basis,
    rref,
    solve_affine,
    solve_conjugator_matrix,
)


def test_is_prime():
    assert is_prime(1009) and is_prime(2003) and is_prime(5)
    assert not is_prime(1) and not is_prime(1000)


def test_burau_params_validation():
    with pytest.raises(ValueError):
        BurauParams(3, 10, 2)
    with pytest.raises(ValueError):
        BurauParams(3, 5, 0)
    with pytest.raises(ValueError):
        BurauParams(3, 5, 5)


def test_burau_generator_block():
    # substitute t0=2 into the 2x2 block over F_5
    m = burau(parse_word("1", 2), BurauParams(2, 5, 2))
    assert m.data.tolist() == [[4, 2], [1, 0]]
    assert burau(parse_word("", 2), BurauParams(2, 5, 2)).is_identity()


def test_burau_inverse_letter():
    bp = BurauParams(3, 1009, 3)
    prod = burau(parse_word("1", 3), bp) @ burau(parse_word("-1", 3), bp)
    assert prod.is_identity()
    assert mat_inverse(burau(parse_word("1", 2), BurauParams(2, 5, 2))) == burau(
        parse_word("-1", 2), BurauParams(2, 5, 2)
    )


def letters(n):
    return st.lists(
        st.integers(min_value=-(n - 1), max_value=n - 1).filter(lambda x: x != 0),
        max_size=12,
    )


@settings(deadline=None, max_examples=60)
@given(letters(6), letters(6))
def test_burau_is_homomorphism(l1, l2):
    bp = BurauParams(6, 1009, 3)
    w1, w2 = BraidWord(6, tuple(l1)), BraidWord(6, tuple(l2))
    assert burau(w1 * w2, bp) == burau(w1, bp) @ burau(w2, bp)


@pytest.mark.parametrize("p,t0", [(1009, 3), (2003, 7)])
def test_burau_relations_all_generator_pairs(p, t0):
    bp = BurauParams(12, p, t0)
    for i in range(1, 12):
        for j in range(i + 1, 12):
            wi, wj = str(i), str(j)
            if j - i == 1:
                assert burau(parse_word(f"{wi} {wj} {wi}", 12), bp) == burau(
                    parse_word(f"{wj} {wi} {wj}", 12), bp
                )
            else:
                assert burau(parse_word(f"{wi} {wj}", 12), bp) == burau(
                    parse_word(f"{wj} {wi}", 12), bp
                )


@pytest.mark.parametrize("p,t0", [(1009, 3), (2003, 7), (5, 2)])
def test_burau_generator_determinant(p, t0):
    bp = BurauParams(12, p, t0)
    for i in range(1, 12):
        m = burau(parse_word(str(i), 12), bp).data.astype(object)
        n = m.shape[0]
        # fraction-free determinant mod p by elimination over the integers
        det = 1
        m = [[int(v) for v in row] for row in m]
        for c in range(n):
            piv = next(r for r in range(c, n) if m[r][c] % p != 0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                det = -det
            det = det * m[c][c] % p
            inv = pow(m[c][c], -1, p)
            for r in range(c + 1, n):
                f = m[r][c] * inv % p
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[c])]
        assert det % p == (-t0) % p


# --- rref / nullspace / inverse ----------------------------------------------


def test_rref_and_nullspace_examples():
    assert nullspace_basis(MatrixFq.identity(3, 7)) == []
    zero = nullspace_basis(MatrixFq.zeros(2, 2, 5))
    assert len(zero) == 2
    ns = nullspace_basis(MatrixFq([[1, 2], [2, 4]], 5))
    assert len(ns) == 1
    assert ns[0].tolist() == [3, 1]
    r, piv = rref(np.array([[2, 4], [1, 2]]), 5)
    assert piv == [0] and r[0].tolist() == [1, 2]


def test_nullspace_vectors_are_in_kernel():
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = MatrixFq(rng.integers(0, 1009, size=(6, 9)), 1009)
        for v in nullspace_basis(m):
            assert np.all((m.data @ v) % 1009 == 0)
        assert len(nullspace_basis(m)) == 9 - matrix_rank(m)


def test_mat_inverse():
    assert mat_inverse(MatrixFq.identity(4, 7)) == MatrixFq.identity(4, 7)
    assert mat_inverse(MatrixFq.zeros(3, 3, 7)) is None
    with pytest.raises(ValueError):
        mat_inverse(MatrixFq.zeros(2, 3, 7))
    rng = np.random.default_rng(1)
    for _ in range(20):
        m = MatrixFq(rng.integers(0, 1009, size=(5, 5)), 1009)
        inv = mat_inverse(m)
        if inv is not None:
            assert (m @ inv).is_identity() and (inv @ m).is_identity()


def test_solve_affine():
    a = np.array([[1, 1], [0, 1]])
    b = np.array([3, 4])
    x0, basis = solve_affine(a, b, 7)
    assert ((a @ x0) % 7).tolist() == [3, 4]
    assert basis == []
    # inconsistent system
    a = np.array([[1, 1], [1, 1]])
    b = np.array([1, 2])
    x0, basis = solve_affine(a, b, 7)
    assert x0 is None


# --- the conjugator solver ---------------------------------------------------


def test_solver_trivial_pair_returns_any_invertible():
    X = solve_conjugator_matrix([(MatrixFq.identity(3, 5), MatrixFq.identity(3, 5))], 3)
    assert X is not None and mat_inverse(X) is not None


def test_solver_centralizer_case():
    A = burau(parse_word("1", 2), BurauParams(2, 5, 2))
    X = solve_conjugator_matrix([(A, A)], 2, seed=4)
    assert X is not None and (A @ X) == (X @ A)


def test_solver_true_conjugation_instance():
    bp = BurauParams(3, 1009, 3)
    g = burau(parse_word("1", 3), bp)
    h = burau(parse_word("-2 1 2", 3), bp)
    X = solve_conjugator_matrix([(g, h)], 3)
    assert X is not None and (g @ X) == (X @ h)


def test_solver_support_restriction():
    bp = BurauParams(12, 1009, 3)
    g = burau(parse_word("9 10 11", 12), bp)
    h = burau(parse_word("-11 9 10 11 11", 12), bp)  # conjugate by sigma_11
    X = solve_conjugator_matrix([(g, h)], 12, support=list(range(8, 12)))
    assert X is not None
    assert (g @ X) == (X @ h)
    assert np.array_equal(X.data[:8, :8], np.eye(8, dtype=np.int64))
    assert not X.data[:8, 8:].any() and not X.data[8:, :8].any()


def test_solver_extra_commuting():
    bp = BurauParams(6, 1009, 3)
    g = burau(parse_word("1", 6), bp)
    extra = [burau(parse_word("3", 6), bp), burau(parse_word("4", 6), bp)]
    X = solve_conjugator_matrix([(g, g)], 6, extra_commuting=extra)
    assert X is not None
    for m in extra + [g]:
        assert (m @ X) == (X @ m)


def test_solver_shape_errors():
    with pytest.raises(ValueError):
        solve_conjugator_matrix(
            [(MatrixFq.identity(2, 5), MatrixFq.identity(3, 5))], 3
        )
    with pytest.raises(ValueError):
        solve_conjugator_matrix([], 3)


def test_matrix_dump_roundtrip():
    m = MatrixFq([[1, 2], [3, 4]], 5)
    rows = [[int(x) for x in line.split()] for line in m.dump().splitlines()]
    assert MatrixFq(rows, 5) == m
