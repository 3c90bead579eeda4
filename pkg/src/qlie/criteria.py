"""Controllability verdicts for ``H(t) = H0 + sum_k F_k(eps(t)) mu_k``.

Density-matrix controllability is decided by the dimension of the Lie
algebra generated by ``-i H0, -i mu_1, ..., -i mu_L`` (``n^2`` if some
operator has nonzero trace, ``n^2 - 1`` otherwise).  Wavefunction
controllability is decided by the codimension of the centralizer of
``P = i diag(1, 0, ..., 0)`` inside that algebra, which must be ``2n - 2``.
Both verdicts require ``{1, F_1, ..., F_L}`` to be linearly independent on
the value set.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import lie
from .functionals import FunctionalFamily, ValueSet, is_independent, reduce_with_drift
from .linalg import TOL_HERM, TOL_RANK, DimensionError, hermitian, traceless_part

DEPENDENT_WARNING = (
    "dependent family: {1, F_1..F_L} is not independent on V; "
    "analysis run on reduced family reported separately"
)


class InternalConsistencyError(RuntimeError):
    """Two independent routes to the same verdict disagreed."""


@dataclass(frozen=True)
class Tolerances:
    herm: float = TOL_HERM
    rank: float = TOL_RANK
    accept: float = lie.TOL_ACCEPT
    trace: float = 1e-10
    max_rounds: int | None = None


@dataclass
class ControlSystem:
    h0: np.ndarray
    mus: list
    fam: FunctionalFamily
    v: ValueSet
    herm_tol: float = TOL_HERM

    def __post_init__(self):
        self.h0 = hermitian(self.h0, self.herm_tol, "h0")
        self.mus = [hermitian(mu, self.herm_tol, f"mu[{k}]") for k, mu in enumerate(self.mus)]
        n = self.h0.shape[0]
        if not self.mus:
            raise ValueError("at least one coupling operator is required")
        for k, mu in enumerate(self.mus):
            if mu.shape != (n, n):
                raise DimensionError(f"mu[{k}] has shape {mu.shape}, expected {(n, n)}")
        if len(self.mus) != len(self.fam):
            raise ValueError(f"{len(self.fam)} functionals but {len(self.mus)} coupling operators")
        if self.fam.kind == "sampled" and self.fam.grid != self.v:
            raise ValueError("sampled family must be tabulated on the system's value set")

    @property
    def n(self) -> int:
        return self.h0.shape[0]

    @property
    def L(self) -> int:
        return len(self.mus)

    def hamiltonian(self, x: float) -> np.ndarray:
        h = self.h0.copy()
        for f, mu in zip(self.fam.evaluate(x), self.mus):
            h += f * mu
        return h

    def generators(self) -> list:
        return [-1j * self.h0] + [-1j * mu for mu in self.mus]


def p_matrix(n: int) -> np.ndarray:
    """``i diag(1, 0, ..., 0)``."""
    p = np.zeros((n, n), dtype=np.complex128)
    p[0, 0] = 1j
    return p


@dataclass
class ControllabilityReport:
    n: int
    lie_dim: int
    traceless_lie_dim: int
    any_nonzero_trace: bool
    centralizer_dim: int
    functional_independent: bool
    density_controllable: bool
    wavefunction_controllable: bool
    witnesses: list
    tolerances: dict
    warnings: list = field(default_factory=list)
    traces: list = field(default_factory=list)
    effective_functional_count: int = 0
    retained_functionals: list = field(default_factory=list)
    value_set: list = field(default_factory=list)
    identity_in_algebra: bool = False
    procedure_density_controllable: bool = False
    full_unitary_algebra: bool = False
    reduced_density_controllable: bool | None = None
    reduced_wavefunction_controllable: bool | None = None
    closure_converged: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def _traces(sys: ControlSystem) -> list:
    return [complex(np.trace(m)) for m in [sys.h0, *sys.mus]]


def _has_trace(sys: ControlSystem, tol: float) -> bool:
    return any(abs(t) > tol * sys.n for t in _traces(sys))


def _closure(gens, tol: Tolerances):
    return lie.lie_closure(gens, tol=tol.accept, max_rounds=tol.max_rounds, herm_tol=tol.herm)


def _density_from(lie_dim: int, n: int, nonzero_trace: bool) -> bool:
    return lie_dim == (n * n if nonzero_trace else n * n - 1)


def density_matrix_controllable(sys: ControlSystem, tol: Tolerances | None = None):
    """Return ``(verdict, evidence)`` for density-matrix controllability."""
    tol = tol or Tolerances()
    ind = is_independent(sys.fam, sys.v, include_constant=True, tol=tol.rank)
    basis = _closure(sys.generators(), tol)
    nonzero = _has_trace(sys, tol.trace)
    d = lie.dim(basis)
    evidence = {
        "lie_dim": d,
        "any_nonzero_trace": nonzero,
        "required_dim": sys.n ** 2 if nonzero else sys.n ** 2 - 1,
        "functional_independent": ind.independent,
        "warnings": [],
    }
    if not ind.independent:
        evidence["warnings"].append(DEPENDENT_WARNING)
        return False, evidence
    return _density_from(d, sys.n, nonzero), evidence


def wavefunction_controllable(sys: ControlSystem, tol: Tolerances | None = None):
    """Return ``(verdict, evidence)`` for wavefunction controllability."""
    tol = tol or Tolerances()
    ind = is_independent(sys.fam, sys.v, include_constant=True, tol=tol.rank)
    basis = _closure(sys.generators(), tol)
    c = lie.centralizer_intersection_dim(basis, p_matrix(sys.n), tol.rank)
    d = lie.dim(basis)
    evidence = {
        "lie_dim": d,
        "centralizer_dim": c,
        "codimension": d - c,
        "required_codimension": 2 * sys.n - 2,
        "sufficient_full_algebra": d == sys.n ** 2,
        "functional_independent": ind.independent,
        "warnings": [],
    }
    if not ind.independent:
        evidence["warnings"].append(DEPENDENT_WARNING)
        return False, evidence
    return d - c == 2 * sys.n - 2, evidence


def analyze(sys: ControlSystem, tol: Tolerances | None = None) -> ControllabilityReport:
    """Run the independence test, both criteria and their cross-checks."""
    tol = tol or Tolerances()
    n = sys.n
    warnings: list = []

    ind = is_independent(sys.fam, sys.v, include_constant=True, tol=tol.rank)
    work = sys
    if not ind.independent:
        warnings.append(DEPENDENT_WARNING)
        fam, h0, mus, _ = reduce_with_drift(sys.fam, sys.h0, sys.mus, sys.v, tol.rank)
        if mus:
            work = ControlSystem(h0, mus, fam, sys.v, herm_tol=max(sys.herm_tol, 1e-8))
        else:
            warnings.append("every functional folds into the drift; only -iH0 remains")
            work = None

    if work is not None:
        gens = work.generators()
        ops = [work.h0, *work.mus]
    else:
        gens = [-1j * h0]
        ops = [h0]

    traces = [complex(np.trace(m)) for m in ops]
    nonzero = any(abs(t) > tol.trace * n for t in traces)
    near = [t for t in traces if tol.trace * n < abs(t) <= 1e3 * tol.trace * n]
    if near:
        warnings.append(f"trace magnitude close to the zero-trace threshold: {[abs(t) for t in near]}")

    basis = _closure(gens, tol)
    tl_basis = _closure([traceless_part(g) for g in gens], tol)
    if not (basis.converged and tl_basis.converged):
        warnings.append("Lie closure hit max_rounds before stabilizing")
    d, dt = lie.dim(basis), lie.dim(tl_basis)
    c = lie.centralizer_intersection_dim(basis, p_matrix(n), tol.rank)
    has_identity = lie.contains(basis, 1j * np.eye(n), 1e-7)

    # dimension test vs. traceless-only test
    by_dim = _density_from(d, n, nonzero)
    procedure = dt == n * n - 1
    wave = d - c == 2 * n - 2
    expected_split = dt + (1 if has_identity else 0)
    if d != expected_split:
        raise InternalConsistencyError(
            f"lie_dim {d} != traceless_lie_dim {dt} + [iI in algebra]={int(has_identity)}"
        )
    if by_dim != procedure:
        raise InternalConsistencyError(
            f"density verdicts disagree: dimension test {by_dim}, traceless procedure {procedure}"
        )
    if by_dim and not wave:
        raise InternalConsistencyError("density-matrix controllable but not wavefunction controllable")
    if nonzero and d != dt + 1:
        warnings.append(
            f"nonzero trace but identity not in algebra: lie_dim {d} = traceless_lie_dim {dt}"
        )

    report = ControllabilityReport(
        n=n,
        lie_dim=d,
        traceless_lie_dim=dt,
        any_nonzero_trace=nonzero,
        centralizer_dim=c,
        functional_independent=ind.independent,
        density_controllable=by_dim if ind.independent else False,
        wavefunction_controllable=wave if ind.independent else False,
        witnesses=list(ind.witnesses),
        tolerances=asdict(tol),
        warnings=warnings,
        traces=[[t.real, t.imag] for t in traces],
        effective_functional_count=ind.effective_count,
        retained_functionals=list(ind.retained_indices),
        value_set=list(sys.v.points),
        identity_in_algebra=has_identity,
        procedure_density_controllable=procedure if ind.independent else False,
        full_unitary_algebra=d == n * n,
        closure_converged=basis.converged and tl_basis.converged,
    )
    if not ind.independent:
        report.reduced_density_controllable = by_dim
        report.reduced_wavefunction_controllable = wave
    return report


def system_from_arrays(h0, mus: Sequence, fam: FunctionalFamily | None = None, v=None) -> ControlSystem:
    """Convenience constructor defaulting to a bilinear family on ``{-1, 0, 1}``."""
    fam = fam or FunctionalFamily.monomial(len(mus))
    if v is None:
        v = ValueSet((-1.0, 0.0, 1.0))
    elif not isinstance(v, ValueSet):
        v = ValueSet(tuple(v))
    return ControlSystem(np.asarray(h0), list(mus), fam, v)
