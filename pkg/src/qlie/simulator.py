"""Piecewise-constant propagation of states, propagators and density matrices.

Time is dimensionless (hbar = 1).  On a segment of duration ``dt`` with
control value ``x`` the propagator factor is ``exp(-i dt H(x))`` with
``H(x) = H0 + sum_k F_k(x) mu_k``; factors are applied in time order, the
earliest rightmost.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .criteria import ControlSystem
from .functionals import OffGridError
from .linalg import DimensionError, commutator, expm_hermitian_factor, expm_skew, skew_hermitian

STATE_TOL = 1e-10


@dataclass(frozen=True)
class PiecewiseConstantControl:
    """Ordered ``(duration, value)`` segments; an empty control is the identity."""

    segments: tuple = ()

    def __post_init__(self):
        segs = []
        for seg in self.segments:
            dt, x = seg
            dt, x = float(dt), float(x)
            if not (math.isfinite(dt) and dt > 0):
                raise ValueError(f"segment duration must be positive and finite, got {dt!r}")
            if not math.isfinite(x):
                raise ValueError(f"segment value must be finite, got {x!r}")
            segs.append((dt, x))
        object.__setattr__(self, "segments", tuple(segs))

    def __len__(self):
        return len(self.segments)

    @property
    def duration(self) -> float:
        return sum(dt for dt, _ in self.segments)

    def __add__(self, other: "PiecewiseConstantControl") -> "PiecewiseConstantControl":
        return concat(self, other)


def concat(c1: PiecewiseConstantControl, c2: PiecewiseConstantControl) -> PiecewiseConstantControl:
    """Run ``c1`` then ``c2``."""
    return PiecewiseConstantControl(c1.segments + c2.segments)


def _check_values(sys: ControlSystem, ctrl: PiecewiseConstantControl) -> None:
    # monomials are defined for every real value; sampled families only on the grid
    if sys.fam.kind != "sampled":
        return
    for _, x in ctrl.segments:
        if x not in sys.v:
            raise OffGridError(f"control value {x!r} is not a point of the sampled value set")


def propagator(sys: ControlSystem, ctrl: PiecewiseConstantControl) -> np.ndarray:
    _check_values(sys, ctrl)
    u = np.eye(sys.n, dtype=np.complex128)
    for dt, x in ctrl.segments:
        u = expm_hermitian_factor(sys.hamiltonian(x), dt) @ u
    return u


def _state(c0, n: int) -> np.ndarray:
    c = np.asarray(c0, dtype=np.complex128).ravel()
    if c.shape != (n,):
        raise DimensionError(f"state must have length {n}, got {c.shape}")
    if abs(np.linalg.norm(c) - 1.0) > STATE_TOL:
        raise ValueError(f"state must have unit norm, got {np.linalg.norm(c):.15g}")
    return c


def density_matrix(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Validate a density matrix (Hermitian, unit trace, positive semidefinite)."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) > tol * max(1.0, np.linalg.norm(rho)):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix must have unit trace, got {np.trace(rho)}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix must be positive semidefinite")
    return rho


def propagate_state(sys: ControlSystem, ctrl: PiecewiseConstantControl, c0) -> np.ndarray:
    return propagator(sys, ctrl) @ _state(c0, sys.n)


def propagate_density(sys: ControlSystem, ctrl: PiecewiseConstantControl, rho0) -> np.ndarray:
    rho0 = density_matrix(rho0)
    if rho0.shape != (sys.n, sys.n):
        raise DimensionError(f"density matrix must be {sys.n}x{sys.n}")
    u = propagator(sys, ctrl)
    return u @ rho0 @ u.conj().T


def trotter_product(x1, x2, t: float, n: int, form: str = "convergent") -> np.ndarray:
    """``n``-th power of a group-commutator product approximating ``exp(t [x1, x2])``.

    ``form="convergent"`` uses step ``s = sqrt(|t| / n)`` and the ordering
    ``exp(-s x1) exp(-s x2) exp(s x1) exp(s x2)`` (roles swapped for ``t < 0``),
    whose power tends to ``exp(t [x1, x2])``.  ``form="literal"`` uses step
    ``t / sqrt(n)`` and ``exp(-s x2) exp(-s x1) exp(s x2) exp(s x1)``; its power
    tends to ``exp(-t^2 [x1, x2])`` instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if form == "convergent":
        s = math.sqrt(abs(t) / n)
        a, b = (x1, x2) if t >= 0 else (x2, x1)
        g = expm_skew(a, -s) @ expm_skew(b, -s) @ expm_skew(a, s) @ expm_skew(b, s)
    elif form == "literal":
        s = t / math.sqrt(n)
        g = expm_skew(x2, -s) @ expm_skew(x1, -s) @ expm_skew(x2, s) @ expm_skew(x1, s)
    else:
        raise ValueError(f"unknown form {form!r}")
    return np.linalg.matrix_power(g, n)


def trotter_commutator_error(x1, x2, t: float, n: int, form: str = "convergent") -> float:
    """Frobenius distance between ``exp(t [x1, x2])`` and :func:`trotter_product`."""
    x1 = skew_hermitian(x1, name="x1")
    x2 = skew_hermitian(x2, name="x2")
    if x1.shape != x2.shape:
        raise DimensionError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    exact = expm_skew(commutator(x1, x2), t)
    return float(np.linalg.norm(exact - trotter_product(x1, x2, t, n, form)))


@dataclass
class SearchResult:
    best_fidelity: float
    best_control: PiecewiseConstantControl
    evaluations: int


def _fidelity_fn(sys: ControlSystem, target, initial):
    target = np.asarray(target, dtype=np.complex128)
    n = sys.n
    if target.ndim == 2:
        if target.shape != (n, n):
            raise DimensionError(f"target propagator must be {n}x{n}")
        return lambda u: abs(np.trace(target.conj().T @ u)) / n
    tgt = _state(target, n)
    c0 = _state(np.eye(n)[0] if initial is None else initial, n)
    return lambda u: abs(np.vdot(tgt, u @ c0))


def reachability_search(
    sys: ControlSystem,
    target,
    budget: int = 20_000,
    seed: int = 0,
    segment_bounds: tuple = (1e-2, 10.0),
    initial=None,
    max_segments: int = 8,
    explore_fraction: float = 0.5,
) -> SearchResult:
    """Randomized search for a control maximizing fidelity with ``target``.

    ``target`` is either a unitary (fidelity ``|tr(target^H U)| / n``) or a
    unit state reached from ``initial`` (default ``e_1``; fidelity
    ``|<target, U c0>|``).  The first half of the budget samples random
    controls; the rest perturbs the incumbent.  The result depends only on
    ``(seed, budget)``; ties keep the earliest candidate.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    fidelity = _fidelity_fn(sys, target, initial)
    rng = np.random.default_rng(seed)
    lo, hi = segment_bounds
    if not 0 < lo <= hi:
        raise ValueError("segment_bounds must satisfy 0 < lo <= hi")
    sampled = sys.fam.kind == "sampled"
    pts = np.asarray(sys.v.points)
    vmin, vmax = float(pts.min()), float(pts.max())

    def draw_value():
        if sampled or vmin == vmax:
            return float(pts[rng.integers(len(pts))])
        return float(rng.uniform(vmin, vmax))

    def draw_duration():
        return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

    def score(segs):
        u = np.eye(sys.n, dtype=np.complex128)
        for dt, x in segs:
            u = expm_hermitian_factor(sys.hamiltonian(x), dt) @ u
        return fidelity(u)

    best_segs: list = []
    best = score(best_segs)
    evals = 1
    n_explore = max(0, int(round(budget * explore_fraction)) - 1)
    while evals < 1 + n_explore and best < 1.0 - 1e-12:
        k = int(rng.integers(1, max_segments + 1))
        segs = [(draw_duration(), draw_value()) for _ in range(k)]
        f = score(segs)
        evals += 1
        if f > best:
            best, best_segs = f, segs

    scale = 0.3
    stall = 0
    while evals < budget and best < 1.0 - 1e-12:
        segs = list(best_segs)
        move = rng.random()
        if not segs or (move < 0.1 and len(segs) < max_segments):
            segs.insert(int(rng.integers(0, len(segs) + 1)), (draw_duration(), draw_value()))
        elif move < 0.15 and len(segs) > 1:
            segs.pop(int(rng.integers(len(segs))))
        else:
            i = int(rng.integers(len(segs)))
            dt, x = segs[i]
            dt = float(np.clip(dt * np.exp(scale * rng.normal()), lo, hi))
            if sampled:
                if rng.random() < 0.5:
                    x = draw_value()
            else:
                x = float(np.clip(x + scale * (vmax - vmin) * 0.5 * rng.normal(), vmin, vmax))
            segs[i] = (dt, x)
        f = score(segs)
        evals += 1
        if f > best:
            best, best_segs = f, segs
            stall = 0
        else:
            stall += 1
            if stall > 200:
                scale = max(scale * 0.5, 1e-4)
                stall = 0
    return SearchResult(
        best_fidelity=float(min(best, 1.0)),
        best_control=PiecewiseConstantControl(tuple(best_segs)),
        evaluations=evals,
    )
