"""Born-rule propensities over projective measurement contexts."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .feasibility import Behavior, Context

MAX_DIM = 8
NORM_TOL = 1e-12


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        if a.size < 2:
            raise DimensionError("state dimension must be >= 2")
        if abs(np.vdot(a, a).real - 1) > NORM_TOL:
            raise ValueError("state is not normalized")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self):
        return self.amplitudes.size

    @classmethod
    def normalized(cls, amplitudes):
        a = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(a / np.linalg.norm(a))


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Orthonormal measurement basis; ``vectors[i]`` is the eigenvector of outcome ``i``."""

    label: str
    vectors: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        if v.shape[0] != v.shape[1]:
            raise DimensionError(f"basis {self.label!r} needs d vectors of dimension d")
        if not np.allclose(v.conj() @ v.T, np.eye(v.shape[0]), rtol=0, atol=NORM_TOL):
            raise ValueError(f"basis {self.label!r} is not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self):
        return self.vectors.shape[0]


@dataclass(frozen=True)
class ContextDistribution:
    context_label: str
    outcome_propensities: tuple


def born_propensities(psi: StateVector, basis: ObservableBasis) -> ContextDistribution:
    if psi.dim != basis.dim:
        raise DimensionError(f"state has dimension {psi.dim}, basis {basis.label!r} {basis.dim}")
    p = np.abs(basis.vectors.conj() @ psi.amplitudes) ** 2
    return ContextDistribution(basis.label, tuple(float(x) for x in p / p.sum()))


def computational_basis(d: int, label: str = "Z") -> ObservableBasis:
    return ObservableBasis(label, np.eye(d))


def qubit_basis(theta: float, label: str) -> ObservableBasis:
    """Spin basis along the direction at angle ``theta`` from z in the x-z plane."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return ObservableBasis(label, [[c, s], [-s, c]])


def random_state(d: int, rng: np.random.Generator) -> StateVector:
    return StateVector.normalized(rng.normal(size=d) + 1j * rng.normal(size=d))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase fix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_basis(d: int, rng: np.random.Generator, label: str = "R") -> ObservableBasis:
    return ObservableBasis(label, random_unitary(d, rng).T)


def bipartite_behavior(psi: StateVector, settings_a, settings_b, labels=("A", "B")) -> Behavior:
    """Joint Born distributions ``p(a, b | x, y)`` for every pair of local settings.

    Party measurements are labelled ``A0, A1, ...`` and ``B0, B1, ...``;
    outcomes are basis indices.
    """
    if len(settings_a) < 2 or len(settings_b) < 2:
        raise ValueError("each party needs at least two settings")
    da, db = settings_a[0].dim, settings_b[0].dim
    if any(s.dim != da for s in settings_a) or any(s.dim != db for s in settings_b):
        raise DimensionError("settings of one party must share a dimension")
    if max(da, db) > MAX_DIM:
        raise DimensionError(f"local dimension capped at {MAX_DIM}")
    if psi.dim != da * db:
        raise DimensionError(f"state dimension {psi.dim} != {da}*{db}")
    amp = psi.amplitudes.reshape(da, db)
    la, lb = labels
    alphabets = {f"{la}{x}": tuple(range(da)) for x in range(len(settings_a))}
    alphabets.update({f"{lb}{y}": tuple(range(db)) for y in range(len(settings_b))})
    contexts = []
    for (x, A), (y, B) in itertools.product(enumerate(settings_a), enumerate(settings_b)):
        # <a|<b| psi for every (a, b) at once
        overlap = A.vectors.conj() @ amp @ B.vectors.conj().T
        p = np.abs(overlap) ** 2
        p = p / p.sum()
        contexts.append(Context((f"{la}{x}", f"{lb}{y}"), tuple(float(v) for v in p.ravel())))
    return Behavior(alphabets, tuple(contexts))


def singlet() -> StateVector:
    return StateVector.normalized([0, 1, -1, 0])


def chsh_optimal_settings():
    """Local bases for which the singlet reaches the CHSH value 2*sqrt(2)."""
    a = [qubit_basis(0.0, "A0"), qubit_basis(np.pi / 2, "A1")]
    b = [qubit_basis(5 * np.pi / 4, "B0"), qubit_basis(3 * np.pi / 4, "B1")]
    return a, b
