"""Independent reference routes used only by the tests.

Nothing here imports the package's Lie engine or functional machinery.
"""
import itertools

import numpy as np
from scipy.linalg import expm


def _vec(m):
    return np.concatenate([m.real.ravel(), m.imag.ravel()])


def _rank(rows, rtol=1e-9):
    if not rows:
        return 0
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0


def brute_closure(mats, rtol=1e-9):
    """Closure by repeatedly bracketing *every* pair and re-ranking the whole stack with SVD."""
    n = mats[0].shape[0]
    span = [m / np.linalg.norm(m) for m in mats if np.linalg.norm(m) > 0]
    r = _rank([_vec(m) for m in span], rtol)
    while True:
        # orthonormal basis of the current span via SVD, then bracket all pairs
        if not span:
            return []
        u, s, vt = np.linalg.svd(np.array([_vec(m) for m in span]), full_matrices=False)
        basis = [(v[: n * n] + 1j * v[n * n:]).reshape(n, n) for v in vt[:r]]
        new = basis + [a @ b - b @ a for a, b in itertools.combinations(basis, 2)]
        new = [m / np.linalg.norm(m) for m in new if np.linalg.norm(m) > 1e-13]
        r2 = _rank([_vec(m) for m in new], rtol)
        span = new
        if r2 == r:
            return basis
        r = r2


def brute_dim(mats, rtol=1e-9):
    return len(brute_closure(mats, rtol))


def brute_centralizer_dim(basis, p, rtol=1e-9):
    if not basis:
        return 0
    images = np.array([_vec(b @ p - p @ b) for b in basis])
    s = np.linalg.svd(images, compute_uv=False)
    return len(basis) - int(np.sum(s > rtol * np.linalg.norm(p)))


def monomial_verdicts(h0, mus):
    """Density / wavefunction verdicts for ``H0 + sum eps^k mu_k`` straight from the matrices."""
    n = h0.shape[0]
    gens = [-1j * h0] + [-1j * m for m in mus]
    basis = brute_closure(gens)
    d = len(basis)
    traced = any(abs(np.trace(m)) > 1e-10 * n for m in [h0, *mus])
    density = d == (n * n if traced else n * n - 1)
    p = np.zeros((n, n), complex)
    p[0, 0] = 1j
    wave = d - brute_centralizer_dim(basis, p) == 2 * n - 2
    return d, density, wave


def vandermonde_det(points):
    pts = list(points)
    out = 1.0
    for i, j in itertools.combinations(range(len(pts)), 2):
        out *= pts[j] - pts[i]
    return out


def scipy_expm(a):
    return expm(a)


def random_hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def random_skew(n, rng):
    return 1j * random_hermitian(n, rng)


def random_unitary(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
