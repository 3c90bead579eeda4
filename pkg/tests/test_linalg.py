import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import random_hermitian, random_skew, scipy_expm
from qlie.linalg import (
    DimensionError,
    NotHermitianError,
    commutator,
    expm_hermitian_factor,
    frobenius_inner,
    hermitian,
    numerical_rank,
    realify,
    traceless_part,
    unitarity_residual,
    unrealify,
)

SZ = np.diag([1.0, -1.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(n):
    return st.tuples(arrays(float, (n, n), elements=finite), arrays(float, (n, n), elements=finite)).map(
        lambda p: p[0] + 1j * p[1]
    )


def test_commutator_examples():
    np.testing.assert_allclose(commutator(1j * SZ, 1j * SX), [[0, -2], [2, 0]])
    x = np.arange(9.0).reshape(3, 3) + 1j
    assert np.all(commutator(x, x) == 0)
    assert np.all(commutator(1j * np.eye(3), x) == 0)


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutator(np.eye(2), np.eye(3))


def test_commutator_of_skew_is_skew():
    rng = np.random.default_rng(3)
    a, b = random_skew(4, rng), random_skew(4, rng)
    c = commutator(a, b)
    assert np.linalg.norm(c + c.conj().T) <= 1e-12 * np.linalg.norm(a) * np.linalg.norm(b)


@given(complex_matrices(3), complex_matrices(3))
def test_commutator_antisymmetric(a, b):
    np.testing.assert_array_equal(commutator(a, b), -commutator(b, a))


def test_jacobi_identity_random_triples():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b, c = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
        j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
        scale = np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
        assert np.linalg.norm(j) <= 1e-13 * scale


def test_frobenius_inner():
    assert frobenius_inner(np.eye(2), np.eye(2)) == 2
    assert frobenius_inner(1j * SZ, 1j * SX) == 0
    with pytest.raises(DimensionError):
        frobenius_inner(np.eye(2), np.eye(3))


@given(complex_matrices(3), complex_matrices(3))
def test_frobenius_inner_symmetric_and_matches_realify(a, b):
    assert frobenius_inner(a, b) == pytest.approx(frobenius_inner(b, a), abs=1e-9)
    assert frobenius_inner(a, a) >= 0
    assert frobenius_inner(a, b) == pytest.approx(realify(a) @ realify(b), rel=1e-12, abs=1e-9)


def test_realify_layout():
    assert np.all(realify(np.zeros((2, 2))) == 0)
    v = realify(1j * np.eye(2))
    assert np.count_nonzero(v) == 2
    np.testing.assert_array_equal(v, [0, 0, 0, 0, 1, 0, 0, 1])


@given(complex_matrices(3), complex_matrices(3))
def test_realify_linear_isometric_invertible(a, b):
    np.testing.assert_allclose(realify(a + b), realify(a) + realify(b), atol=1e-12)
    assert np.linalg.norm(realify(a)) == pytest.approx(np.linalg.norm(a), rel=1e-12, abs=1e-300)
    np.testing.assert_array_equal(unrealify(realify(a), 3), a)


def test_numerical_rank_examples():
    assert numerical_rank([(1, 0), (0, 1), (1, 1)]) == 2
    assert numerical_rank([]) == 0
    v = np.array([0.3, -1.2, 2.5])
    assert numerical_rank([v, v * (1 + 1e-14)]) == 1
    assert numerical_rank([np.zeros(3)]) == 0
    with pytest.raises(ValueError):
        numerical_rank([(1, 0)], tol=0)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.floats(1e-6, 1e6), st.integers(1, 6), st.integers(1, 6))
def test_numerical_rank_permutation_and_scale_invariant(seed, scale, k, r):
    rng = np.random.default_rng(seed)
    base = rng.normal(size=(min(k, r), 6))
    vs = rng.normal(size=(k, min(k, r))) @ base
    expected = numerical_rank(vs)
    assert numerical_rank(vs[rng.permutation(k)]) == expected
    assert numerical_rank(scale * vs) == expected
    assert numerical_rank(-scale * vs) == expected


def test_traceless_part():
    np.testing.assert_allclose(traceless_part(np.diag([1.0, 0.0])), np.diag([0.5, -0.5]))
    np.testing.assert_allclose(traceless_part(1j * SX), 1j * SX)
    np.testing.assert_allclose(traceless_part(np.eye(4)), np.zeros((4, 4)))
    rng = np.random.default_rng(1)
    assert abs(np.trace(traceless_part(random_hermitian(5, rng)))) < 1e-12


def test_hermitian_validation_rejects_not_repairs():
    with pytest.raises(NotHermitianError):
        hermitian([[0, 1], [0, 0]])
    with pytest.raises(DimensionError):
        hermitian(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        hermitian([[np.nan, 0], [0, 1]])
    h = np.array([[1, 1 + 1e-13], [1, 1]], dtype=complex)
    np.testing.assert_array_equal(hermitian(h), h)


def test_expm_examples():
    u = expm_hermitian_factor(np.diag([0.3, -1.7]), 2.0)
    np.testing.assert_allclose(u, np.diag(np.exp(-1j * 2.0 * np.array([0.3, -1.7]))), atol=1e-15)
    np.testing.assert_allclose(expm_hermitian_factor(SX, 0.0), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(expm_hermitian_factor(SX, np.pi / 2), [[0, -1j], [-1j, 0]], atol=1e-15)
    with pytest.raises(NotHermitianError):
        expm_hermitian_factor([[0, 1], [0, 0]], 1.0)


def test_expm_matches_scipy_and_is_unitary():
    rng = np.random.default_rng(7)
    for n in (2, 3, 5, 8):
        h = random_hermitian(n, rng)
        t = rng.uniform(-3, 3)
        u = expm_hermitian_factor(h, t)
        np.testing.assert_allclose(u, scipy_expm(-1j * t * h), atol=1e-12)
        assert unitarity_residual(u) <= 1e-12


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(-5, 5))
def test_expm_semigroup(seed, t, s):
    h = random_hermitian(3, np.random.default_rng(seed))
    lhs = expm_hermitian_factor(h, t) @ expm_hermitian_factor(h, s)
    assert np.linalg.norm(lhs - expm_hermitian_factor(h, t + s)) <= 1e-10
