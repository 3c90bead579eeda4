import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_hermitian, random_skew, scipy_expm
from qlie import models
from qlie.criteria import ControlSystem, system_from_arrays
from qlie.functionals import FunctionalFamily, OffGridError, ValueSet
from qlie.linalg import expm_hermitian_factor, unitarity_residual
from qlie.simulator import (
    PiecewiseConstantControl,
    concat,
    propagate_density,
    propagate_state,
    propagator,
    reachability_search,
    trotter_commutator_error,
    trotter_product,
)

SZ = np.diag([1.0, -1.0])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
RABI = system_from_arrays(np.zeros((2, 2)), [SX])


def ctrl(*segs):
    return PiecewiseConstantControl(tuple(segs))


def test_control_validation():
    with pytest.raises(ValueError):
        ctrl((0.0, 1.0))
    with pytest.raises(ValueError):
        ctrl((-1.0, 1.0))
    with pytest.raises(ValueError):
        ctrl((1.0, np.inf))
    assert ctrl((1, 2)).segments == ((1.0, 2.0),)
    assert ctrl((1.0, 0.0), (2.5, 1.0)).duration == 3.5


def test_propagator_examples():
    np.testing.assert_array_equal(propagator(RABI, ctrl()), np.eye(2))
    sys_ = models.spin_half()
    np.testing.assert_allclose(propagator(sys_, ctrl((0.7, 0.3))), expm_hermitian_factor(SZ + 0.3 * SX, 0.7))
    np.testing.assert_allclose(propagator(RABI, ctrl((np.pi / 2, 1.0))), [[0, -1j], [-1j, 0]], atol=1e-15)


def test_propagator_matches_scipy_time_ordering():
    rng = np.random.default_rng(0)
    sys_ = models.random_dense(3, 2, seed=4)
    segs = [(rng.uniform(0.1, 2), rng.uniform(-1, 1)) for _ in range(5)]
    expected = np.eye(3)
    for dt, x in segs:
        expected = scipy_expm(-1j * dt * (sys_.h0 + x * sys_.mus[0] + x**2 * sys_.mus[1])) @ expected
    np.testing.assert_allclose(propagator(sys_, ctrl(*segs)), expected, atol=1e-12)


def test_sampled_family_rejects_off_grid_values():
    v = ValueSet((0.0, 1.0))
    sys_ = ControlSystem(SZ, [SX], FunctionalFamily.sampled([[0.0, 3.0]], v), v)
    np.testing.assert_allclose(propagator(sys_, ctrl((0.5, 1.0))), expm_hermitian_factor(SZ + 3 * SX, 0.5))
    with pytest.raises(OffGridError):
        propagator(sys_, ctrl((0.5, 0.5)))
    # monomials accept any real amplitude
    propagator(models.spin_half(), ctrl((0.5, 7.25)))


def test_state_examples():
    sys_ = models.diagonal_pair(3)
    c = propagate_state(sys_, ctrl((1.3, 0.0)), [0, 1, 0])
    np.testing.assert_allclose(c, [0, np.exp(-1j * 2 * 1.3), 0], atol=1e-15)
    # pi pulse for H = sigma_x lasts pi/2
    c = propagate_state(RABI, ctrl((np.pi / 2, 1.0)), [1, 0])
    assert abs(c[1]) == pytest.approx(1.0, abs=1e-12) and abs(c[0]) < 1e-12
    # duration pi is a full 2 pi rotation: -identity, no transfer
    np.testing.assert_allclose(propagator(RABI, ctrl((np.pi, 1.0))), -np.eye(2), atol=1e-15)
    with pytest.raises(ValueError):
        propagate_state(RABI, ctrl(), [1, 1])


def test_density_examples():
    sys_ = models.random_dense(3, 1, seed=1)
    c = ctrl((0.4, 0.2), (1.1, -0.9))
    np.testing.assert_allclose(propagate_density(sys_, c, np.eye(3) / 3), np.eye(3) / 3, atol=1e-15)
    np.testing.assert_allclose(propagate_density(RABI, ctrl((np.pi / 2, 1.0)), np.diag([1.0, 0])), np.diag([0, 1.0]), atol=1e-9)
    rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    np.testing.assert_array_equal(propagate_density(RABI, ctrl(), rho), rho)
    with pytest.raises(ValueError):
        propagate_density(RABI, ctrl(), np.diag([2.0, -1.0]))


def test_concat_examples():
    sys_ = models.spin_half()
    c = ctrl((0.3, 0.5))
    assert concat(c, ctrl()) == c
    merged = propagator(sys_, ctrl((0.7, 0.2)))
    split = propagator(sys_, concat(ctrl((0.3, 0.2)), ctrl((0.4, 0.2))))
    np.testing.assert_allclose(split, merged, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_concat_law(seed):
    rng = np.random.default_rng(seed)
    sys_ = models.spin_half()

    def rnd():
        return ctrl(*[(rng.uniform(0.01, 3), rng.uniform(-1, 1)) for _ in range(rng.integers(0, 5))])

    c1, c2 = rnd(), rnd()
    lhs = propagator(sys_, c1 + c2)
    assert np.linalg.norm(lhs - propagator(sys_, c2) @ propagator(sys_, c1)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_conservation_properties(seed, n):
    rng = np.random.default_rng(seed)
    sys_ = models.random_dense(n, int(rng.integers(1, 3)), seed=int(rng.integers(1000)))
    c = ctrl(*[(rng.uniform(0.01, 5), rng.uniform(-1, 1)) for _ in range(rng.integers(1, 9))])
    u = propagator(sys_, c)
    assert unitarity_residual(u) <= 1e-9
    c0 = rng.normal(size=n) + 1j * rng.normal(size=n)
    c0 /= np.linalg.norm(c0)
    assert abs(np.linalg.norm(propagate_state(sys_, c, c0)) - 1) <= 1e-10
    w = rng.dirichlet(np.ones(n))
    q = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))[0]
    rho0 = (q * w) @ q.conj().T
    rho = propagate_density(sys_, c, rho0)
    np.testing.assert_allclose(np.linalg.eigvalsh(rho), np.linalg.eigvalsh(rho0), atol=1e-9)


def test_trotter_examples():
    a = 1j * np.diag([1.0, 2.0, -0.5])
    b = 1j * np.diag([0.3, 0.0, 1.0])
    for n in (1, 4, 64, 4096):
        assert trotter_commutator_error(a, b, 0.5, n) <= 1e-10
        assert trotter_commutator_error(a, b, 0.5, n, form="literal") <= 1e-10
    assert trotter_commutator_error(1j * SZ, 1j * SX, 0.0, 16) == 0.0
    e = [trotter_commutator_error(1j * SZ, 1j * SX, 0.5, n) for n in (4, 64, 4096)]
    assert e[2] < e[1] < e[0]
    with pytest.raises(ValueError):
        trotter_commutator_error(SZ, 1j * SX, 0.5, 4)
    with pytest.raises(ValueError):
        trotter_product(1j * SZ, 1j * SX, 0.5, 0)


def test_trotter_negative_time_and_literal_limit():
    rng = np.random.default_rng(3)
    x1, x2 = random_skew(3, rng), random_skew(3, rng)
    assert trotter_commutator_error(x1, x2, -0.5, 4096) < trotter_commutator_error(x1, x2, -0.5, 64)
    # the product with step t/sqrt(n) and the other ordering tends to exp(-t^2 [x1, x2])
    t = 0.5
    c = x1 @ x2 - x2 @ x1
    lit = trotter_product(x1, x2, t, 4096, form="literal")
    assert np.linalg.norm(lit - scipy_expm(-t * t * c)) < 0.1 * np.linalg.norm(lit - scipy_expm(t * c))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_trotter_decrease(seed, n):
    rng = np.random.default_rng(seed)
    x1, x2 = random_skew(n, rng), random_skew(n, rng)
    e64 = trotter_commutator_error(x1, x2, 0.5, 64)
    if e64 > 1e-8:
        assert trotter_commutator_error(x1, x2, 0.5, 4096) < e64


def test_search_identity_target_is_free():
    res = reachability_search(models.spin_half(), np.eye(2), budget=50, seed=0)
    assert res.best_fidelity == pytest.approx(1.0) and len(res.best_control) == 0
    assert res.evaluations == 1


def test_search_deterministic_and_controllable():
    sys_ = models.spin_half()
    a = reachability_search(sys_, [0, 1], budget=4000, seed=5)
    b = reachability_search(sys_, [0, 1], budget=4000, seed=5)
    assert a == b
    achieved = propagate_state(sys_, a.best_control, [1, 0])
    assert abs(achieved[1]) == pytest.approx(a.best_fidelity, abs=1e-12)


def test_search_unitary_target():
    sys_ = models.spin_half()
    target = expm_hermitian_factor(SX, np.pi / 2)
    res = reachability_search(sys_, target, budget=6000, seed=2)
    u = propagator(sys_, res.best_control)
    assert res.best_fidelity == pytest.approx(abs(np.trace(target.conj().T @ u)) / 2)
    assert res.best_fidelity > 0.9


def test_search_sampled_stays_on_grid():
    v = ValueSet((-1.0, 0.0, 2.0))
    sys_ = ControlSystem(SZ, [SX], FunctionalFamily.sampled([[-1.0, 0.0, 4.0]], v), v)
    res = reachability_search(sys_, [0, 1], budget=500, seed=1)
    assert all(x in v for _, x in res.best_control.segments)


def test_search_bounded_by_invariant_populations():
    # simultaneously diagonal generators conserve populations: |<e_j, U e_1>| = 0 for j != 1
    rng = np.random.default_rng(9)
    for n in (2, 3):
        sys_ = ControlSystem(
            np.diag(rng.normal(size=n)), [np.diag(rng.normal(size=n))], FunctionalFamily.monomial(1), ValueSet((-1.0, 1.0))
        )
        target = np.ones(n) / np.sqrt(n)
        res = reachability_search(sys_, target, budget=500, seed=n)
        assert res.best_fidelity <= 1 / np.sqrt(n) + 1e-12
