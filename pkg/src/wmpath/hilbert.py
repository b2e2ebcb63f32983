"""Finite-dimensional complex Hilbert-space arithmetic.

States, Hermitian observables in spectral form, and unitary time evolution
(hbar = 1 throughout).  Everything here is immutable after construction and
all operations are pure, so objects can be shared freely between workers.

The eigensolver is a self-contained cyclic complex Jacobi iteration rather
than a LAPACK call: dimensions never exceed ~16 in practice, and a
hand-rolled solver lets us pin down the deterministic ordering and phase
convention that downstream reconstruction tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "StateVector",
    "HermitianMatrix",
    "Observable",
    "inner_product",
    "evolve",
    "spectral_decompose",
]

# Tolerances fixed by the library contract.
HERMITICITY_TOL = 1e-12
ORTHONORMALITY_TOL = 1e-10
PHASE_PIVOT_TOL = 1e-8

_JACOBI_SWEEP_CAP = 100
_JACOBI_OFF_TOL = 1e-14


def _as_complex_vector(values) -> np.ndarray:
    vec = np.asarray(values, dtype=complex).reshape(-1)
    if vec.size < 1:
        raise ValueError("state vector needs at least one component")
    if not np.all(np.isfinite(vec)):
        raise ValueError("state vector contains non-finite entries")
    return vec


@dataclass(frozen=True)
class StateVector:
    """A normalized ket.  The constructor rescales its input to unit norm."""

    amplitudes: np.ndarray

    def __init__(self, amplitudes):
        vec = _as_complex_vector(amplitudes)
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        vec = vec / norm
        vec.setflags(write=False)
        object.__setattr__(self, "amplitudes", vec)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def __getitem__(self, idx) -> complex:
        return complex(self.amplitudes[idx])


@dataclass(frozen=True)
class HermitianMatrix:
    """An N x N complex Hermitian matrix (energy units when a Hamiltonian)."""

    entries: np.ndarray

    def __init__(self, entries):
        mat = np.asarray(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix contains non-finite entries")
        scale = max(1.0, float(np.abs(mat).max()))
        if np.abs(mat - mat.conj().T).max() > HERMITICITY_TOL * scale:
            raise ValueError("matrix is not Hermitian within 1e-12")
        # store the exactly-Hermitian average so round-trips are symmetric
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @classmethod
    def zero(cls, dimension: int) -> "HermitianMatrix":
        return cls(np.zeros((dimension, dimension)))

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Observable:
    """A measured quantity in spectral form.

    ``eigenvalues`` are sorted non-decreasing (repeats allowed) and
    ``eigenvectors[:, i]`` is the unit eigenvector for ``eigenvalues[i]``,
    with the first component of modulus > 1e-8 made positive-real.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    def __init__(self, eigenvalues, eigenvectors):
        vals = np.asarray(eigenvalues, dtype=float).reshape(-1)
        vecs = np.asarray(eigenvectors, dtype=complex)
        n = vals.size
        if vecs.shape != (n, n):
            raise ValueError("eigenvector matrix shape must be (N, N)")
        if np.any(np.diff(vals) < 0):
            raise ValueError("eigenvalues must be sorted non-decreasing")
        gram = vecs.conj().T @ vecs
        if np.abs(gram - np.eye(n)).max() > ORTHONORMALITY_TOL:
            raise ValueError("eigenvectors are not orthonormal within 1e-10")
        vals.setflags(write=False)
        vecs = vecs.copy()
        vecs.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "eigenvectors", vecs)

    @classmethod
    def from_matrix(cls, matrix) -> "Observable":
        """Spectral decomposition of a Hermitian matrix (or raw array)."""
        if not isinstance(matrix, HermitianMatrix):
            matrix = HermitianMatrix(matrix)
        return spectral_decompose(matrix)

    @property
    def dimension(self) -> int:
        return self.eigenvalues.size

    def eigenstate(self, i: int) -> StateVector:
        return StateVector(self.eigenvectors[:, i])

    def matrix(self) -> np.ndarray:
        """Reassemble sum_i S_i |i><i|."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> = sum_k conj(a_k) b_k."""
    if a.dimension != b.dimension:
        raise ValueError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _fix_phase(column: np.ndarray) -> np.ndarray:
    """Rotate a unit vector so its first non-negligible entry is positive-real."""
    for entry in column:
        mag = abs(entry)
        if mag > PHASE_PIVOT_TOL:
            return column * (entry.conjugate() / mag)
    return column


def _offdiag_norm(m: np.ndarray) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.linalg.norm(off))


def spectral_decompose(m: HermitianMatrix) -> Observable:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Convergence: off-diagonal Frobenius mass below 1e-14 (relative to the
    matrix scale), capped at 100 sweeps.  Output ordering is deterministic:
    eigenvalues ascending, ties kept in sweep order, and each eigenvector's
    phase fixed by the positive-real convention.
    """
    a = np.array(m.entries, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    tol = _JACOBI_OFF_TOL * scale

    if n > 1:
        for _ in range(_JACOBI_SWEEP_CAP):
            if _offdiag_norm(a) <= tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= tol / (n * n):
                        continue
                    app = a[p, p].real
                    aqq = a[q, q].real
                    # absorb the phase of a_pq, then rotate the real 2x2 core;
                    # the small root of t^2 - 2 tau t - 1 = 0 keeps |t| <= 1
                    phase = apq / abs(apq)
                    tau = (aqq - app) / (2.0 * abs(apq))
                    if tau == 0.0:
                        t = -1.0
                    else:
                        t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                    c = 1.0 / np.hypot(1.0, t)
                    s = t * c
                    rot = np.array([[c, -s * phase],
                                    [s * phase.conjugate(), c]], dtype=complex)
                    a[:, [p, q]] = a[:, [p, q]] @ rot
                    a[[p, q], :] = rot.conj().T @ a[[p, q], :]
                    v[:, [p, q]] = v[:, [p, q]] @ rot
        else:
            # cap exhausted; the final sweep may still have finished the job
            if _offdiag_norm(a) > tol:
                raise ConvergenceError(
                    f"Jacobi sweep cap ({_JACOBI_SWEEP_CAP}) reached; "
                    f"off-diagonal mass {_offdiag_norm(a):.3e}")

    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]
    for i in range(n):
        vecs[:, i] = _fix_phase(vecs[:, i])
    return Observable(vals, vecs)


def evolve(state: StateVector, h, t: float) -> StateVector:
    """Apply exp(-i h t) to a state via the spectral decomposition of h."""
    if not isinstance(h, HermitianMatrix):
        h = HermitianMatrix(h)  # raises on non-Hermitian input
    if h.dimension != state.dimension:
        raise ValueError(
            f"dimension mismatch: state {state.dimension}, matrix {h.dimension}")
    if not np.isfinite(t):
        raise ValueError("evolution time must be finite")
    obs = spectral_decompose(h)
    coeffs = obs.eigenvectors.conj().T @ state.amplitudes
    evolved = obs.eigenvectors @ (np.exp(-1j * obs.eigenvalues * t) * coeffs)
    return StateVector(evolved)
