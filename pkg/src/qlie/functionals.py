"""Control functionals ``F_1..F_L`` over a finite value set.

Linear (in)dependence is decided on the evaluation matrix ``E[v, k] = F_k(v)``
over the points of the value set.  Dependent families are reduced to an
independent subfamily and the coupling operators are folded accordingly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import TOL_RANK, numerical_rank

POINT_TOL = 1e-12


class OffGridError(ValueError):
    """A sampled functional was evaluated away from its value set."""


@dataclass(frozen=True)
class ValueSet:
    """Finite, sorted set of admissible control amplitudes."""

    points: tuple

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=float).ravel())
        if pts.size == 0:
            raise ValueError("value set must be nonempty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("value set points must be finite")
        if np.any(np.diff(pts) <= POINT_TOL):
            raise ValueError("value set points must be distinct")
        object.__setattr__(self, "points", tuple(float(p) for p in pts))

    @classmethod
    def interval(cls, lo: float, hi: float, points: int = 33) -> "ValueSet":
        if not hi > lo or points < 2:
            raise ValueError("interval needs min < max and at least 2 points")
        return cls(tuple(np.linspace(lo, hi, points)))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index_of(self, x: float) -> int | None:
        pts = np.asarray(self.points)
        i = int(np.argmin(np.abs(pts - x)))
        return i if abs(pts[i] - x) <= POINT_TOL * max(1.0, abs(x)) else None

    def __contains__(self, x) -> bool:
        return self.index_of(float(x)) is not None


@dataclass(frozen=True)
class FunctionalFamily:
    """Either monomials ``x^p`` for ``p`` in ``powers`` or a sampled table.

    ``FunctionalFamily.monomial(L)`` is the usual expansion ``x, x^2, ..., x^L``.
    A sampled family carries one row per functional, aligned with ``grid``.
    """

    kind: str
    powers: tuple = ()
    table: np.ndarray | None = field(default=None, compare=False)
    grid: ValueSet | None = None

    def __post_init__(self):
        if self.kind == "monomial":
            if len(self.powers) < 1 or any(int(p) != p or p < 1 for p in self.powers):
                raise ValueError("monomial family needs positive integer powers")
            object.__setattr__(self, "powers", tuple(int(p) for p in self.powers))
        elif self.kind == "sampled":
            if self.grid is None or self.table is None:
                raise ValueError("sampled family needs a table and its value set")
            tab = np.array(self.table, dtype=float, ndmin=2)
            if tab.shape[0] < 1 or tab.shape[1] != len(self.grid):
                raise ValueError(f"sampled table must be L x {len(self.grid)}, got {tab.shape}")
            if not np.all(np.isfinite(tab)):
                raise ValueError("sampled values must be finite")
            tab.setflags(write=False)
            object.__setattr__(self, "table", tab)
        else:
            raise ValueError(f"unknown functional kind {self.kind!r}")

    @classmethod
    def monomial(cls, degree: int) -> "FunctionalFamily":
        if degree < 1:
            raise ValueError("degree must be >= 1")
        return cls("monomial", powers=tuple(range(1, degree + 1)))

    @classmethod
    def sampled(cls, table, grid: ValueSet) -> "FunctionalFamily":
        return cls("sampled", table=np.asarray(table, dtype=float), grid=grid)

    def __len__(self):
        return len(self.powers) if self.kind == "monomial" else self.table.shape[0]

    def subset(self, indices: Sequence[int]) -> "FunctionalFamily":
        indices = list(indices)
        if self.kind == "monomial":
            return FunctionalFamily("monomial", powers=tuple(self.powers[i] for i in indices))
        return FunctionalFamily.sampled(self.table[indices], self.grid)

    def evaluate(self, x: float) -> np.ndarray:
        if self.kind == "monomial":
            return np.array([float(x) ** p for p in self.powers])
        i = self.grid.index_of(float(x))
        if i is None:
            raise OffGridError(f"control value {x!r} is not a point of the sampled value set")
        return self.table[:, i].copy()

    def matrix(self, v: ValueSet, include_constant: bool = False) -> np.ndarray:
        """Evaluation matrix of shape ``(|V|, L)`` (constant column first if requested)."""
        rows = np.array([self.evaluate(x) for x in v.points])
        if include_constant:
            rows = np.hstack([np.ones((len(v), 1)), rows])
        return rows


def evaluate(fam: FunctionalFamily, x: float) -> np.ndarray:
    return fam.evaluate(x)


@dataclass
class IndependenceResult:
    """Outcome of an independence test.

    ``retained_indices`` index the family (the constant, when included, is
    implicit and always retained if nonzero).  ``combination[d]`` expresses a
    dropped functional over the retained ones; with the constant included its
    first coefficient belongs to the constant.
    """

    independent: bool
    effective_count: int
    retained_indices: list
    witnesses: list
    combination: dict
    include_constant: bool
    condition: float
    residual: float = 0.0


def _select_columns(e: np.ndarray, tol: float, forced: int) -> list:
    """Greedy in-order column selection; the first ``forced`` columns are kept."""
    scale = np.linalg.norm(e, 2) if e.size else 0.0
    kept: list = []
    q = np.zeros((e.shape[0], 0))
    for j in range(e.shape[1]):
        col = e[:, j]
        r = col - q @ (q.T @ col)
        r = r - q @ (q.T @ r)
        rn = np.linalg.norm(r)
        if rn > tol * scale or (j < forced and rn > 0.0):
            kept.append(j)
            q = np.hstack([q, (r / rn)[:, None]])
    return kept


def _select_rows(sub: np.ndarray) -> list:
    """Greedily pick ``p`` rows maximizing the smallest singular value of the minor."""
    p = sub.shape[1]
    chosen: list = []
    for _ in range(p):
        best, best_s = None, -1.0
        for i in range(sub.shape[0]):
            if i in chosen:
                continue
            s = np.linalg.svd(sub[chosen + [i]], compute_uv=False)[-1]
            if s > best_s + 1e-15:
                best, best_s = i, s
        chosen.append(best)
    return sorted(chosen)


def is_independent(
    fam: FunctionalFamily,
    v: ValueSet,
    include_constant: bool = True,
    tol: float = TOL_RANK,
) -> IndependenceResult:
    e = fam.matrix(v, include_constant)
    m = e.shape[1]
    rank = numerical_rank(e.T, tol)
    forced = 1 if include_constant else 0
    kept = _select_columns(e, tol, forced)
    offset = forced
    retained = [j - offset for j in kept if j >= offset]
    sub = e[:, kept]
    if kept:
        rows = _select_rows(sub)
        minor = sub[rows]
        s = np.linalg.svd(minor, compute_uv=False)
        condition = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    else:
        rows, condition = [], float("inf")
    combination = {}
    residual = 0.0
    for j in range(offset, m):
        if j in kept:
            continue
        if kept:
            coef, *_ = np.linalg.lstsq(sub, e[:, j], rcond=None)
            residual = max(residual, float(np.linalg.norm(sub @ coef - e[:, j])))
        else:
            coef = np.zeros(0)
        combination[j - offset] = coef
    return IndependenceResult(
        independent=rank == m and len(kept) == m,
        effective_count=len(kept),
        retained_indices=retained,
        witnesses=[v.points[i] for i in rows],
        combination=combination,
        include_constant=include_constant,
        condition=condition,
        residual=residual,
    )


def _fold(fam, h0, mus, v, tol, include_constant):
    mus = [np.asarray(mu, dtype=np.complex128) for mu in mus]
    if len(mus) != len(fam):
        raise ValueError(f"{len(fam)} functionals but {len(mus)} coupling operators")
    res = is_independent(fam, v, include_constant, tol)
    if not res.combination:
        return fam, h0, mus, res
    new_mus = {q: mus[q].copy() for q in res.retained_indices}
    h0 = None if h0 is None else np.asarray(h0, dtype=np.complex128).copy()
    for d, coef in res.combination.items():
        coef = list(coef)
        if include_constant and coef:
            c0 = coef.pop(0)
            h0 = h0 + c0 * mus[d]
        for q, c in zip(res.retained_indices, coef):
            new_mus[q] = new_mus[q] + c * mus[d]
    kept = res.retained_indices
    # nothing retained: every functional was constant or zero on V
    return (fam.subset(kept) if kept else None), h0, [new_mus[q] for q in kept], res


def reduce_to_independent(fam: FunctionalFamily, mus: Sequence, v: ValueSet, tol: float = TOL_RANK):
    """Drop dependent functionals, folding their operators into the retained ones.

    Returns ``(family, operators)`` with ``sum_k F_k(x) mu_k`` unchanged on ``V``;
    the family is None when every functional vanishes on ``V``.
    """
    fam2, _, mus2, _ = _fold(fam, None, mus, v, tol, include_constant=False)
    return fam2, mus2


def reduce_with_drift(fam: FunctionalFamily, h0, mus: Sequence, v: ValueSet, tol: float = TOL_RANK):
    """Like :func:`reduce_to_independent` but against ``{1, F_1..F_L}``.

    Parts of a dropped functional proportional to the constant are folded
    into the drift ``h0``.  Returns ``(family, h0, operators, result)``.
    """
    return _fold(fam, h0, mus, v, tol, include_constant=True)


def witness_generators(sys, witnesses: Sequence[float], include_constant: bool = True) -> list:
    """``M_j = -i (H0 + sum_k F_k(e_j) mu_k)`` for each witness point ``e_j``.

    With ``include_constant=False`` the drift term is left out.
    """
    out = []
    for e in witnesses:
        if e not in sys.v:
            raise OffGridError(f"witness {e!r} is not a point of the value set")
        f = sys.fam.evaluate(e)
        h = sys.h0.copy() if include_constant else np.zeros_like(sys.h0)
        for fk, mu in zip(f, sys.mus):
            h = h + fk * mu
        out.append(-1j * h)
    return out
