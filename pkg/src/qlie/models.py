"""Canonical example systems."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import ControlSystem
from .functionals import FunctionalFamily, ValueSet
from .lie import BracketTable


@dataclass(frozen=True)
class ModelSpec:
    name: str
    n: int = 2
    L: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.name not in BUILDERS:
            raise ValueError(f"unknown model {self.name!r}; choose from {sorted(BUILDERS)}")
        if self.n < 2 or self.L < 1:
            raise ValueError("models need n >= 2 and L >= 1")

    def build(self) -> ControlSystem:
        if self.name == "random_dense":
            return random_dense(self.n, self.L, self.seed)
        return BUILDERS[self.name](self.n)


def truncated_oscillator(n: int) -> ControlSystem:
    """First ``n`` oscillator levels: ``H0 = diag(k + 1/2)``, dipole ``x = (a + a^H)/sqrt 2``."""
    if n < 2:
        raise ValueError("truncated oscillator needs n >= 2")
    h0 = np.diag(np.arange(n) + 0.5)
    off = np.sqrt(np.arange(1, n) / 2.0)
    mu = np.diag(off, 1) + np.diag(off, -1)
    return ControlSystem(h0, [mu], FunctionalFamily.monomial(1), ValueSet((-1.0, 0.0, 1.0)))


def oscillator_bracket_table() -> BracketTable:
    """Brackets of ``a = iH0, b = ix, c = d/dx, d = -i I`` for the untruncated oscillator."""
    e = np.eye(4)
    return BracketTable(
        names=("a", "b", "c", "d"),
        brackets={
            ("a", "b"): 2 * e[2],
            ("a", "c"): -2 * e[1],
            ("b", "c"): e[3],
        },
    )


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_dense(n: int, L: int = 1, seed: int = 0) -> ControlSystem:
    if n < 2 or L < 1:
        raise ValueError("random_dense needs n >= 2 and L >= 1")
    rng = np.random.default_rng(seed)
    h0 = random_hermitian(n, rng)
    mus = [random_hermitian(n, rng) for _ in range(L)]
    return ControlSystem(h0, mus, FunctionalFamily.monomial(L), ValueSet(tuple(np.linspace(-1, 1, L + 2))))


def diagonal_pair(n: int) -> ControlSystem:
    """Commuting diagonal drift and coupling; never controllable."""
    if n < 2:
        raise ValueError("diagonal_pair needs n >= 2")
    h0 = np.diag(np.arange(1.0, n + 1))
    mu = np.diag(np.arange(float(n), 0.0, -1.0))
    return ControlSystem(h0, [mu], FunctionalFamily.monomial(1), ValueSet((-1.0, 0.0, 1.0)))


def spin_half() -> ControlSystem:
    """``H0 = sigma_z``, ``mu = sigma_x``, bilinear on ``{-1, 0, 1}``."""
    sz = np.diag([1.0, -1.0])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return ControlSystem(sz, [sx], FunctionalFamily.monomial(1), ValueSet((-1.0, 0.0, 1.0)))


BUILDERS = {
    "truncated_oscillator": truncated_oscillator,
    "random_dense": random_dense,
    "diagonal_pair": diagonal_pair,
}
