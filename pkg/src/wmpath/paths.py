"""Virtual-path amplitudes of a pre- and post-selected transition.

A transition prepared in |psi> at t=0 and post-selected in |phi> at t=T can
reach the final state along N interfering paths, one per eigenstate |i> of
the quantity measured at t=T/2:

    A_i = <phi| U(T/2) |i><i| U(T/2) |psi>,      U(t) = exp(-i H t).

Everything downstream is built from these amplitudes: an accurate meter
decoheres the paths and samples them with probabilities |A_i|^2 (suitably
normalized), while a vanishingly inaccurate meter leaves the interference
intact and reads out the relative amplitudes alpha_i = A_i / sum(A).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import OrthogonalPostselection, ZeroTransmission
from .hilbert import HermitianMatrix, Observable, StateVector, evolve

__all__ = [
    "TransitionSpec",
    "PathAmplitudeSet",
    "RelativeAmplitudeSet",
    "EigenvaluePartition",
    "StrongStatistics",
    "path_amplitudes",
    "relative_amplitudes",
    "group",
    "strong_probabilities",
    "strong_mean",
    "weak_value",
    "weak_value_from_matrix",
]

ORTHOGONALITY_THRESHOLD = 1e-12
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class TransitionSpec:
    """One pre/post-selected experiment.

    ``observable`` is the quantity measured at t = T/2; it may be left
    ``None`` for operations that supply their own measurement basis
    (e.g. a battery of simultaneous weak meters).
    """

    psi: StateVector
    phi: StateVector
    hamiltonian: HermitianMatrix
    total_time: float = 0.0
    observable: Observable | None = None

    def __post_init__(self):
        n = self.psi.dimension
        if self.phi.dimension != n or self.hamiltonian.dimension != n:
            raise ValueError("psi, phi and the Hamiltonian must share one dimension")
        if self.observable is not None and self.observable.dimension != n:
            raise ValueError("observable dimension does not match the states")
        if not (np.isfinite(self.total_time) and self.total_time >= 0.0):
            raise ValueError("total_time must be finite and >= 0")

    @property
    def dimension(self) -> int:
        return self.psi.dimension

    def with_observable(self, observable: Observable) -> "TransitionSpec":
        return TransitionSpec(self.psi, self.phi, self.hamiltonian,
                              self.total_time, observable)


@dataclass(frozen=True)
class PathAmplitudeSet:
    """The N complex path amplitudes A_i together with their sum."""

    amplitudes: np.ndarray
    total: complex = field(default=None)  # type: ignore[assignment]

    def __init__(self, amplitudes, total=None):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        computed = complex(amps.sum())
        if total is None:
            total = computed
        elif abs(total - computed) > 1e-12 * max(1.0, abs(computed)):
            raise ValueError("stated total disagrees with the amplitude sum")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "total", complex(total))

    def __len__(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class RelativeAmplitudeSet:
    """Relative amplitudes alpha_i = A_i / sum(A); they sum to one."""

    alphas: np.ndarray

    def __init__(self, alphas, tol: float = 1e-10):
        arr = np.asarray(alphas, dtype=complex).reshape(-1)
        if abs(arr.sum() - 1.0) > tol:
            raise ValueError(
                f"relative amplitudes sum to {arr.sum():.3e}, expected 1")
        arr.setflags(write=False)
        object.__setattr__(self, "alphas", arr)

    def __len__(self) -> int:
        return self.alphas.size


@dataclass(frozen=True)
class EigenvaluePartition:
    """Disjoint index groups sharing one observable eigenvalue each."""

    groups: tuple[tuple[int, ...], ...]
    group_values: tuple[float, ...]

    def __init__(self, groups, group_values):
        groups = tuple(tuple(int(i) for i in g) for g in groups)
        group_values = tuple(float(v) for v in group_values)
        if len(groups) != len(group_values):
            raise ValueError("one value per group required")
        flat = [i for g in groups for i in g]
        if len(flat) != len(set(flat)):
            raise ValueError("groups overlap")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "group_values", group_values)

    @property
    def dimension(self) -> int:
        return sum(len(g) for g in self.groups)

    @classmethod
    def from_observable(cls, obs: Observable,
                        tol: float = DEGENERACY_TOL) -> "EigenvaluePartition":
        """Group indices whose (sorted) eigenvalues are equal within ``tol``.

        Runs of consecutive eigenvalues with gaps <= tol are merged, so the
        grouping depends only on exact (or near-exact) degeneracy.
        """
        vals = obs.eigenvalues
        groups: list[list[int]] = [[0]]
        for i in range(1, vals.size):
            if vals[i] - vals[i - 1] <= tol:
                groups[-1].append(i)
            else:
                groups.append([i])
        values = [float(np.mean(vals[list(g)])) for g in groups]
        return cls(groups, values)

    def validate_against(self, obs: Observable, tol: float = DEGENERACY_TOL):
        """Check the groups cover 0..N-1 and carry equal eigenvalues."""
        n = obs.dimension
        flat = sorted(i for g in self.groups for i in g)
        if flat != list(range(n)):
            raise ValueError("partition does not cover every path index exactly once")
        for g, val in zip(self.groups, self.group_values):
            ev = obs.eigenvalues[list(g)]
            if np.abs(ev - val).max() > tol:
                raise ValueError(
                    f"group {g} mixes eigenvalues {ev} (stated value {val})")


@dataclass(frozen=True)
class StrongStatistics:
    """Per-route probabilities of a decohering (accurate) measurement."""

    omegas: np.ndarray
    mean: float | None = None

    def __init__(self, omegas, mean=None):
        w = np.asarray(omegas, dtype=float).reshape(-1)
        if w.min() < -1e-12 or w.max() > 1.0 + 1e-12:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {w.sum()}, expected 1")
        w.setflags(write=False)
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "mean", None if mean is None else float(mean))


def path_amplitudes(spec: TransitionSpec) -> PathAmplitudeSet:
    """Amplitudes A_i of the N virtual paths, one per eigenstate of the
    observable, with the evolution applied in two half-steps around T/2."""
    if spec.observable is None:
        raise ValueError("TransitionSpec needs an observable to define paths")
    half = spec.total_time / 2.0
    u_psi = evolve(spec.psi, spec.hamiltonian, half)
    # <phi| U(T/2) = (U(-T/2)|phi>)^dagger
    u_phi = evolve(spec.phi, spec.hamiltonian, -half)
    basis = spec.observable.eigenvectors
    left = basis.conj().T @ u_phi.amplitudes     # <i|U(-T/2)|phi>
    right = basis.conj().T @ u_psi.amplitudes    # <i|U(T/2)|psi>
    return PathAmplitudeSet(left.conj() * right)


def relative_amplitudes(a: PathAmplitudeSet,
                        threshold: float = ORTHOGONALITY_THRESHOLD
                        ) -> RelativeAmplitudeSet:
    """alpha_i = A_i / sum(A).

    Raises OrthogonalPostselection when |sum(A)| <= threshold: the weak
    values diverge for an (almost) forbidden transition and the caller must
    decide what to do, rather than receive silently enormous numbers.
    """
    total = a.total
    if abs(total) <= threshold:
        raise OrthogonalPostselection(
            f"|total amplitude| = {abs(total):.3e} <= {threshold:.1e}; "
            "post-selection (nearly) orthogonal; weak values diverge")
    return RelativeAmplitudeSet(a.amplitudes / total)


def group(a: PathAmplitudeSet, p: EigenvaluePartition) -> PathAmplitudeSet:
    """Coarse-grain amplitudes over degenerate-eigenvalue groups.

    Interference inside each group survives an accurate measurement, so the
    grouped set carries one coherent amplitude per group; the total is
    unchanged.
    """
    if p.dimension != len(a):
        raise ValueError("partition size does not match the amplitude count")
    flat = sorted(i for g in p.groups for i in g)
    if flat != list(range(len(a))):
        raise ValueError("partition does not cover every path index exactly once")
    grouped = [a.amplitudes[list(g)].sum() for g in p.groups]
    return PathAmplitudeSet(grouped)


def strong_probabilities(a: PathAmplitudeSet) -> StrongStatistics:
    """Route probabilities omega_i = |A_i|^2 / sum |A_j|^2."""
    weights = np.abs(a.amplitudes) ** 2
    total = weights.sum()
    if total <= 0.0:
        raise ZeroTransmission(
            "all path amplitudes vanish; post-selection unreachable")
    return StrongStatistics(weights / total)


def strong_mean(values, w: StrongStatistics) -> float:
    """Weighted eigenvalue sum sum_i omega_i S_i.

    ``values`` may be an Observable (its eigenvalues are used) or a plain
    sequence of per-route values, e.g. the group values of a partition.
    """
    if isinstance(values, Observable):
        values = values.eigenvalues
    vals = np.asarray(values, dtype=float).reshape(-1)
    if vals.size != w.omegas.size:
        raise ValueError("value count does not match probability count")
    return float(vals @ w.omegas)


def weak_value(obs, r: RelativeAmplitudeSet) -> complex:
    """The complex weak value sum_i S_i alpha_i.

    Its real part is what a vanishingly inaccurate position meter reads on
    average; its imaginary part drives the momentum kick of the pointer.
    ``obs`` may be an Observable or a plain eigenvalue sequence aligned with
    the relative amplitudes.
    """
    if isinstance(obs, Observable):
        values = obs.eigenvalues
    else:
        values = np.asarray(obs, dtype=float).reshape(-1)
    if values.size != len(r):
        raise ValueError("eigenvalue count does not match amplitude count")
    return complex(np.sum(values * r.alphas))


def weak_value_from_matrix(spec: TransitionSpec, s_matrix) -> complex:
    """Weak value in matrix form, <phi|U S U|psi> / <phi|U^2|psi>.

    For H = 0 this reduces to the familiar <phi|S|psi>/<phi|psi>.  Unlike
    :func:`weak_value` it needs no eigenbasis, which makes it linear in the
    operator argument even for non-commuting operators.
    """
    s = np.asarray(s_matrix, dtype=complex)
    half = spec.total_time / 2.0
    u_psi = evolve(spec.psi, spec.hamiltonian, half)
    u_phi = evolve(spec.phi, spec.hamiltonian, -half)
    denom = complex(np.vdot(u_phi.amplitudes, u_psi.amplitudes))
    if abs(denom) <= ORTHOGONALITY_THRESHOLD:
        raise OrthogonalPostselection(
            "post-selection (nearly) orthogonal; weak values diverge")
    numer = complex(np.vdot(u_phi.amplitudes, s @ u_psi.amplitudes))
    return numer / denom
