from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracspec import ConvergenceError, ShapeError, SymmetricMatrix, jacobi_eigen
from fracspec.eigensolver import _round_robin


def random_symmetric(seed: int, m: int) -> np.ndarray:
    a = np.random.default_rng(seed).standard_normal((m, m))
    return a + a.T


def check_decomposition(a: np.ndarray, values, vectors):
    norm = np.linalg.norm(a)
    assert np.all(np.diff(values) >= 0)
    assert np.max(np.abs(a @ vectors - vectors * values)) <= 1e-10 * max(norm, 1e-300)
    assert np.max(np.abs(vectors.T @ vectors - np.eye(len(values)))) <= 1e-12
    trace = np.trace(a)
    assert abs(values.sum() - trace) <= 1e-10 * abs(trace) + 1e-12 * max(1.0, norm)


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (np.eye(3), [1.0, 1.0, 1.0]),
        ([[2.0, 1.0], [1.0, 2.0]], [1.0, 3.0]),
        ([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [2 - math.sqrt(2), 2.0, 2 + math.sqrt(2)]),
        ([[5.0]], [5.0]),
    ],
)
def test_examples(matrix, expected):
    values, vectors = jacobi_eigen(SymmetricMatrix(matrix))
    np.testing.assert_allclose(values, expected, rtol=0, atol=1e-14)
    check_decomposition(np.asarray(matrix, dtype=float), values, vectors)


def test_tridiagonal_matches_classical_row():
    values, _ = jacobi_eigen(np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], dtype=float))
    np.testing.assert_allclose(values, [0.5857864376, 2.0, 3.414213562], atol=1e-9)


@pytest.mark.parametrize("m", [2, 3, 7, 50, 200])
def test_random_matrices(m):
    a = random_symmetric(m, m)
    result = jacobi_eigen(SymmetricMatrix(a))
    check_decomposition(a, result.values, result.vectors)
    np.testing.assert_allclose(result.values, np.linalg.eigvalsh(a), atol=1e-11 * np.linalg.norm(a))
    assert 1 <= result.sweeps <= 100


@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_decomposition_property(m, seed):
    a = random_symmetric(seed, m)
    values, vectors = jacobi_eigen(a)
    check_decomposition(a, values, vectors)


def test_repeated_eigenvalues():
    q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((6, 6)))
    a = q @ np.diag([1.0, 1.0, 1.0, 2.0, 2.0, 5.0]) @ q.T
    a = 0.5 * (a + a.T)
    values, vectors = jacobi_eigen(a)
    np.testing.assert_allclose(values, [1, 1, 1, 2, 2, 5], atol=1e-13)
    check_decomposition(a, values, vectors)


def test_diagonal_input_needs_no_sweeps():
    result = jacobi_eigen(np.diag([3.0, -1.0, 2.0]))
    assert result.sweeps == 0
    np.testing.assert_array_equal(result.values, [-1.0, 2.0, 3.0])


def test_zero_matrix():
    values, vectors = jacobi_eigen(np.zeros((4, 4)))
    np.testing.assert_array_equal(values, np.zeros(4))
    np.testing.assert_array_equal(vectors, np.eye(4))


def test_sweep_cap():
    with pytest.raises(ConvergenceError) as info:
        jacobi_eigen(random_symmetric(1, 30), max_sweeps=1)
    assert info.value.iterations == 1


@pytest.mark.parametrize("bad", [np.ones((2, 3)), np.zeros((0, 0)), [[1.0, 2.0], [0.0, 1.0]]])
def test_symmetric_matrix_validation(bad):
    with pytest.raises(ShapeError):
        SymmetricMatrix(bad)


def test_symmetric_matrix_tolerates_roundoff():
    a = np.array([[1.0, 0.5], [0.5 + 1e-15, 1.0]])
    s = SymmetricMatrix(a)
    assert s.order == 2
    np.testing.assert_array_equal(s.entries, s.entries.T)


def test_input_not_mutated():
    a = random_symmetric(3, 8)
    before = a.copy()
    jacobi_eigen(a)
    np.testing.assert_array_equal(a, before)


@pytest.mark.parametrize("m", [1, 2, 5, 8, 11])
def test_round_robin_covers_each_pair_once(m):
    seen = []
    for p, q in _round_robin(m):
        assert len(set(p) | set(q)) == 2 * len(p)
        seen += [tuple(sorted(pair)) for pair in zip(p.tolist(), q.tolist())]
    assert sorted(seen) == [(i, j) for i in range(m) for j in range(i + 1, m)]
