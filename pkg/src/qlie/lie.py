"""Real Lie algebras generated by skew-Hermitian matrices.

The closure is grown by taking commutators of basis elements and keeping
the ones that are not already in the span (modified Gram-Schmidt in the
realified ``2 n^2`` coordinates).  The same iteration also runs on abstract
structure constants through :class:`BracketTable`.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .linalg import (
    TOL_HERM,
    TOL_RANK,
    DimensionError,
    as_matrix,
    commutator,
    realify,
    skew_hermitian,
    unrealify,
)

TOL_ACCEPT = 1e-8
GENERATOR_FLOOR = 1e-13


class ClosureWarning(UserWarning):
    """The closure iteration hit ``max_rounds`` before stabilizing."""


class _Orthonormalizer:
    """Incremental orthonormal basis of real vectors.

    A candidate is rescaled to unit norm, orthogonalized twice against the
    current basis and accepted iff the remaining norm exceeds ``tol``.
    Candidates whose raw norm is at most ``floor`` are zero: rescaling pure
    round-off to unit norm would otherwise manufacture a direction.
    """

    def __init__(self, dim: int, tol: float):
        self.tol = tol
        self.rows = np.zeros((0, dim))

    def __len__(self):
        return self.rows.shape[0]

    def offer(self, v: np.ndarray, floor: float = 0.0) -> bool:
        norm = np.linalg.norm(v)
        if norm <= floor or not np.isfinite(norm):
            return False
        r = v / norm
        for _ in range(2):
            for q in self.rows:
                r = r - (q @ r) * q
        rn = np.linalg.norm(r)
        if rn <= self.tol:
            return False
        self.rows = np.vstack([self.rows, r / rn])
        return True


@dataclass
class SkewBasis:
    """Orthonormal (Frobenius) real basis of a subspace of u(n)."""

    n: int
    elements: list = field(default_factory=list)
    converged: bool = True
    rounds: int = 0

    def __post_init__(self):
        if len(self.elements) > self.n * self.n:
            raise ValueError("a subspace of u(n) has at most n^2 basis elements")

    def __len__(self):
        return len(self.elements)

    def coords_matrix(self) -> np.ndarray:
        """Realified elements as rows, shape ``(d, 2 n^2)``."""
        if not self.elements:
            return np.zeros((0, 2 * self.n * self.n))
        return np.vstack([realify(e) for e in self.elements])


def dim(basis: SkewBasis) -> int:
    return len(basis.elements)


def lie_closure(
    generators: Sequence,
    tol: float = TOL_ACCEPT,
    max_rounds: int | None = None,
    herm_tol: float = TOL_HERM,
) -> SkewBasis:
    """Orthonormal basis of the smallest real Lie algebra containing ``generators``.

    Each round brackets every new basis element with every basis element
    (pairs in lexicographic index order); pairs of two old elements were
    already examined in an earlier round.  The iteration stops when a round
    adds nothing, when the dimension reaches ``n^2``, or after ``max_rounds``
    rounds, in which case ``converged`` is False and a :class:`ClosureWarning`
    is emitted.
    """
    mats = [skew_hermitian(g, herm_tol, name=f"generator[{k}]") for k, g in enumerate(generators)]
    if not mats:
        raise ValueError("at least one generator is required")
    n = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape != (n, n):
            raise DimensionError(f"generator[{k}] has shape {m.shape}, expected {(n, n)}")
    if max_rounds is None:
        max_rounds = n * n + 2
    full = n * n

    ortho = _Orthonormalizer(2 * full, tol)
    largest = max(np.linalg.norm(m) for m in mats)
    for m in mats:
        ortho.offer(realify(m), floor=GENERATOR_FLOOR * largest)

    old = 0
    rounds = 0
    converged = True
    while len(ortho) > old and len(ortho) < full:
        if rounds >= max_rounds:
            converged = False
            warnings.warn(
                f"Lie closure did not stabilize within {max_rounds} rounds (dim {len(ortho)})",
                ClosureWarning,
                stacklevel=2,
            )
            break
        rounds += 1
        basis = [unrealify(r, n) for r in ortho.rows]
        size = len(basis)
        for i, j in itertools.combinations(range(size), 2):
            if j < old:
                continue
            # basis elements have unit norm, so tol is relative to |b_i| |b_j|
            ortho.offer(realify(commutator(basis[i], basis[j])), floor=tol)
            if len(ortho) >= full:
                break
        old = size

    elements = [unrealify(r, n) for r in ortho.rows]
    return SkewBasis(n=n, elements=elements, converged=converged, rounds=rounds)


def contains(basis: SkewBasis, x, tol: float = 1e-7) -> bool:
    """True iff ``x`` lies in ``span(basis)`` up to relative residual ``tol``."""
    x = as_matrix(x, "x")
    if x.shape != (basis.n, basis.n):
        raise DimensionError(f"x has shape {x.shape}, basis dimension is {basis.n}")
    v = realify(x)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return True
    q = basis.coords_matrix()
    r = v - q.T @ (q @ v)
    r = r - q.T @ (q @ r)
    return bool(np.linalg.norm(r) <= tol * norm)


def centralizer_intersection_dim(basis: SkewBasis, p, tol: float = TOL_RANK) -> int:
    """Dimension of ``{X in span(basis) : [X, p] = 0}``.

    Computed as the nullity of the map ``c -> [sum_i c_i b_i, p]`` on basis
    coordinates.  Singular values are compared with ``tol * |p|_F`` (the map's
    scale for an orthonormal basis), not with the largest one, so a map that
    is zero up to round-off has full nullity.
    """
    p = as_matrix(p, "p")
    if p.shape != (basis.n, basis.n):
        raise DimensionError(f"p has shape {p.shape}, basis dimension is {basis.n}")
    d = dim(basis)
    if d == 0:
        return 0
    images = np.vstack([realify(commutator(b, p)) for b in basis.elements])
    s = np.linalg.svd(images, compute_uv=False)
    scale = max(np.linalg.norm(p), s[0])
    if scale == 0.0:
        return d
    return d - int(np.count_nonzero(s > tol * scale))


@dataclass
class BracketTable:
    """Structure constants of an abstract real Lie algebra on ``k`` generators.

    ``brackets`` maps a pair of labels (or indices) to the coefficient vector
    of their bracket.  Only one orientation is needed; the other is filled in
    by antisymmetry and unspecified pairs bracket to zero.
    """

    names: Sequence[str]
    brackets: Mapping = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        k = len(self.names)
        if k == 0:
            raise ValueError("a bracket table needs at least one generator")
        if len(set(self.names)) != k:
            raise ValueError("generator names must be unique")
        index = {name: i for i, name in enumerate(self.names)}
        self._c = np.zeros((k, k, k))
        seen = set()
        for (a, b), vec in dict(self.brackets).items():
            i = index[a] if isinstance(a, str) else int(a)
            j = index[b] if isinstance(b, str) else int(b)
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (k,):
                raise ValueError(f"bracket ({a}, {b}) must have {k} coefficients")
            if i == j and np.any(vec != 0):
                raise ValueError(f"bracket ({a}, {a}) must vanish")
            if (j, i) in seen:
                if not np.allclose(self._c[i, j], vec, atol=1e-12):
                    raise ValueError(f"brackets ({a}, {b}) and ({b}, {a}) are not antisymmetric")
                continue
            seen.add((i, j))
            self._c[i, j] = vec
            self._c[j, i] = -vec

    @property
    def k(self) -> int:
        return len(self.names)

    def bracket(self, u, v) -> np.ndarray:
        """Bilinear extension to coefficient vectors."""
        return np.einsum("i,j,ijk->k", np.asarray(u, float), np.asarray(v, float), self._c)

    def index(self, name) -> int:
        return self.names.index(name) if isinstance(name, str) else int(name)


def closure_dim_from_bracket_table(
    table: BracketTable,
    tol: float = TOL_ACCEPT,
    max_rounds: int | None = None,
    generators: Sequence | None = None,
) -> int:
    """Dimension of the subalgebra generated by ``generators`` (default: all)."""
    k = table.k
    if max_rounds is None:
        max_rounds = k + 2
    picks = range(k) if generators is None else [table.index(g) for g in generators]
    ortho = _Orthonormalizer(k, tol)
    for i in picks:
        ortho.offer(np.eye(k)[i])

    old, rounds = 0, 0
    while len(ortho) > old and len(ortho) < k:
        if rounds >= max_rounds:
            warnings.warn("bracket closure did not stabilize", ClosureWarning, stacklevel=2)
            break
        rounds += 1
        basis = list(ortho.rows)
        size = len(basis)
        for i, j in itertools.combinations(range(size), 2):
            if j >= old:
                ortho.offer(table.bracket(basis[i], basis[j]), floor=tol)
        old = size
    return len(ortho)
