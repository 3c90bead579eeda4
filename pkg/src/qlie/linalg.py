"""Dense complex matrix helpers shared by the Lie engine, criteria and simulator.

Matrices are plain ``numpy`` arrays of dtype complex128.  Validation helpers
return a checked copy rather than wrapping arrays in a custom class.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

TOL_HERM = 1e-10
TOL_RANK = 1e-9


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NotHermitianError(ValueError):
    """A matrix expected to be (skew-)Hermitian is not, within tolerance."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite square complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"{name}: expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name}: entries must be finite")
    return m


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def hermiticity_defect(a: np.ndarray) -> float:
    """Relative distance ``|a - a^H|_F / |a|_F`` (0 for the zero matrix)."""
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return 0.0
    return float(np.linalg.norm(a - a.conj().T) / norm)


def hermitian(a, tol: float = TOL_HERM, name: str = "operator") -> np.ndarray:
    """Validate a Hermitian operator.  Inputs are rejected, never symmetrized."""
    m = as_matrix(a, name)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitianError(f"{name}: not Hermitian (relative defect {defect:.3e} > {tol:g})")
    return m


def is_skew_hermitian(a: np.ndarray, tol: float = TOL_HERM) -> bool:
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return True
    return bool(np.linalg.norm(a + a.conj().T) <= tol * norm)


def skew_hermitian(a, tol: float = TOL_HERM, name: str = "generator") -> np.ndarray:
    m = as_matrix(a, name)
    if not is_skew_hermitian(m, tol):
        raise NotHermitianError(f"{name}: not skew-Hermitian within relative tolerance {tol:g}")
    return m


def commutator(a, b) -> np.ndarray:
    """``ab - ba``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _same_shape(a, b)
    return a @ b - b @ a


def frobenius_inner(a, b) -> float:
    """Real inner product ``Re tr(a^H b)``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    _same_shape(a, b)
    return float(np.real(np.vdot(a, b)))


def realify(x) -> np.ndarray:
    """Row-major real parts followed by row-major imaginary parts (length ``2 n^2``)."""
    x = np.asarray(x, dtype=np.complex128)
    return np.concatenate([x.real.ravel(), x.imag.ravel()])


def unrealify(v, n: int) -> np.ndarray:
    """Inverse of :func:`realify` for an ``n x n`` matrix."""
    v = np.asarray(v, dtype=float)
    if v.shape != (2 * n * n,):
        raise DimensionError(f"expected a real vector of length {2 * n * n}, got {v.shape}")
    return (v[: n * n] + 1j * v[n * n:]).reshape(n, n)


def as_vector_set(vectors: Iterable[Sequence[float]]) -> np.ndarray:
    """Stack real vectors as rows; an empty input gives a ``(0, 0)`` array."""
    rows = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not rows:
        return np.zeros((0, 0))
    dim = rows[0].shape[0]
    if any(r.shape[0] != dim for r in rows):
        raise DimensionError("all vectors must share one length")
    out = np.vstack(rows)
    if not np.all(np.isfinite(out)):
        raise ValueError("vector entries must be finite")
    return out


def singular_values(vectors) -> np.ndarray:
    vs = vectors if isinstance(vectors, np.ndarray) and vectors.ndim == 2 else as_vector_set(vectors)
    if vs.size == 0:
        return np.zeros(0)
    return np.linalg.svd(vs, compute_uv=False)


def numerical_rank(vectors, tol: float = TOL_RANK) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(vectors)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def traceless_part(a) -> np.ndarray:
    a = as_matrix(a)
    n = a.shape[0]
    return a - (np.trace(a) / n) * np.eye(n)


def expm_hermitian_factor(h, t: float) -> np.ndarray:
    """``exp(-i t h)`` for Hermitian ``h`` via its eigendecomposition."""
    h = hermitian(h, name="h")
    if t == 0:
        return np.eye(h.shape[0], dtype=np.complex128)
    # eigh reads one triangle only; average so tiny asymmetries are not amplified
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def expm_skew(x, t: float = 1.0) -> np.ndarray:
    """``exp(t x)`` for skew-Hermitian ``x``, written as ``exp(-i t (i x))``."""
    return expm_hermitian_factor(1j * np.asarray(x, dtype=np.complex128), t)


def unitarity_residual(u) -> float:
    u = np.asarray(u, dtype=np.complex128)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
