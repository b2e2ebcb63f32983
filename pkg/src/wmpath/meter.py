"""Exact Gaussian von Neumann pointer statistics at any accuracy.

The pointer starts in G(f) = (delta_f)^(-1/2) G0(f/delta_f) with the fixed
unit-norm profile G0(f) = (2/pi)^(1/4) exp(-f^2), and is kicked impulsively
at t = T/2 so that a successful post-selection leaves it in

    G'(f)      = sum_i A_i G(f - S_i)                 (position),
    G'(lambda) = G(lambda) sum_i A_i exp(-i lambda S_i)  (momentum).

For this profile both first moments have closed forms built from the single
overlap kernel K_ij = exp(-(S_i - S_j)^2 / (2 delta_f^2)), which is the
production path here; a trapezoid quadrature of the same densities serves
as an independent oracle.  delta_f -> 0 reproduces the strong (decohered)
statistics, delta_f -> infinity the weak asymptotes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridError, ZeroNorm
from .hilbert import Observable
from .paths import PathAmplitudeSet, RelativeAmplitudeSet

__all__ = [
    "GaussianPointer",
    "MeterReadout",
    "QuadratureGrid",
    "pointer_position_amplitude",
    "pointer_momentum_amplitude",
    "exact_mean_position",
    "exact_mean_momentum",
    "quadrature_moments",
    "weak_asymptotics",
]

ZERO_NORM_THRESHOLD = 1e-300

# (2/pi)^(1/4), the L2-normalizing prefactor of G0
_G0_PREFACTOR = (2.0 / np.pi) ** 0.25


@dataclass(frozen=True)
class GaussianPointer:
    """A one-dimensional meter of accuracy delta_f (pointer width)."""

    delta_f: float

    def __post_init__(self):
        if not (np.isfinite(self.delta_f) and self.delta_f > 0.0):
            raise ValueError("delta_f must be finite and > 0")

    def profile(self, f):
        """Initial pointer wave function G(f)."""
        f = np.asarray(f, dtype=float)
        return (_G0_PREFACTOR / np.sqrt(self.delta_f)
                * np.exp(-(f / self.delta_f) ** 2))

    def momentum_profile(self, lam):
        """Fourier transform G(lambda) of the initial profile."""
        lam = np.asarray(lam, dtype=float)
        return (_G0_PREFACTOR * np.sqrt(self.delta_f / 2.0)
                * np.exp(-(lam * self.delta_f) ** 2 / 4.0))

    @property
    def momentum_variance(self) -> float:
        """int lambda^2 |G(lambda)|^2 d lambda = 1 / delta_f^2 for G0."""
        return 1.0 / self.delta_f ** 2


@dataclass(frozen=True)
class MeterReadout:
    """Mean pointer position/momentum plus the post-selection weight."""

    mean_f: float
    mean_lambda: float
    norm: float

    def __post_init__(self):
        if self.norm < 0.0:
            raise ValueError("post-selection weight cannot be negative")


def _eigenvalues_for(a: PathAmplitudeSet, obs) -> np.ndarray:
    values = obs.eigenvalues if isinstance(obs, Observable) else obs
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != len(a):
        raise ValueError("eigenvalue count does not match amplitude count")
    return values


def pointer_position_amplitude(a: PathAmplitudeSet, obs, m: GaussianPointer,
                               f) -> np.ndarray | complex:
    """Final pointer amplitude G'(f) = sum_i A_i G(f - S_i)."""
    s = _eigenvalues_for(a, obs)
    f = np.asarray(f, dtype=float)
    out = np.tensordot(a.amplitudes, m.profile(f[..., None] - s), axes=([0], [-1]))
    return out if out.ndim else complex(out)


def pointer_momentum_amplitude(a: PathAmplitudeSet, obs, m: GaussianPointer,
                               lam) -> np.ndarray | complex:
    """Final momentum amplitude G'(lambda) = G(lambda) sum_i A_i e^{-i lambda S_i}."""
    s = _eigenvalues_for(a, obs)
    lam = np.asarray(lam, dtype=float)
    phases = np.exp(-1j * lam[..., None] * s)
    out = m.momentum_profile(lam) * (phases @ a.amplitudes)
    return out if out.ndim else complex(out)


def _kernel_moments(a: PathAmplitudeSet, obs, m: GaussianPointer):
    """The three closed-form double sums over the Gaussian overlap kernel."""
    s = _eigenvalues_for(a, obs)
    amps = a.amplitudes
    ds = s[:, None] - s[None, :]
    kernel = np.exp(-(ds ** 2) / (2.0 * m.delta_f ** 2))
    pair = np.outer(amps, amps.conj()) * kernel
    norm = pair.sum()
    mean_f_num = (pair * (s[:, None] + s[None, :]) * 0.5).sum()
    mean_l_num = (-1j * m.momentum_variance * pair * ds).sum()
    return norm, mean_f_num, mean_l_num


def _checked_norm(norm: complex) -> float:
    value = norm.real
    if value <= ZERO_NORM_THRESHOLD:
        raise ZeroNorm(
            f"post-selection weight {value:.3e} underflowed; "
            "post-selection impossible at this accuracy")
    return value


def exact_mean_position(a: PathAmplitudeSet, obs, m: GaussianPointer) -> MeterReadout:
    """Closed-form mean pointer position at accuracy delta_f."""
    norm, num_f, num_l = _kernel_moments(a, obs, m)
    n = _checked_norm(norm)
    return MeterReadout(mean_f=num_f.real / n, mean_lambda=num_l.real / n, norm=n)


def exact_mean_momentum(a: PathAmplitudeSet, obs, m: GaussianPointer) -> MeterReadout:
    """Closed-form mean pointer momentum at accuracy delta_f.

    Identically zero whenever all amplitudes share a common phase: the
    kernel double sum is then real-symmetric and the antisymmetric momentum
    weight cancels pairwise.
    """
    return exact_mean_position(a, obs, m)


def weak_asymptotics(r: RelativeAmplitudeSet, obs, m: GaussianPointer) -> MeterReadout:
    """First-order (delta_f -> infinity) meter readings.

    mean_f      = sum_i S_i Re alpha_i
    mean_lambda = (2 / delta_f^2) sum_i S_i Im alpha_i
    """
    values = obs.eigenvalues if isinstance(obs, Observable) else np.asarray(obs, float)
    values = values.reshape(-1)
    if values.size != len(r):
        raise ValueError("eigenvalue count does not match amplitude count")
    wv = complex(np.sum(values * r.alphas))
    return MeterReadout(mean_f=wv.real,
                        mean_lambda=2.0 * m.momentum_variance * wv.imag,
                        norm=1.0)


@dataclass(frozen=True)
class QuadratureGrid:
    """Grid request for the quadrature oracle.

    ``span_sigmas`` counts pointer standard deviations added beyond the
    extreme eigenvalues; at least 8 are required, and at least 2^12 points.
    """

    points: int = 1 << 13
    span_sigmas: float = 12.0

    def __post_init__(self):
        if self.points < (1 << 12):
            raise GridError("quadrature grid needs at least 2^12 points")
        if self.span_sigmas < 8.0:
            raise GridError("quadrature grid must span >= 8 standard deviations")


def quadrature_moments(a: PathAmplitudeSet, obs, m: GaussianPointer,
                       grid: QuadratureGrid | None = None) -> MeterReadout:
    """Trapezoid-rule moments of |G'(f)|^2 and |G'(lambda)|^2.

    A numerical oracle for the closed forms, deliberately sharing no code
    with them beyond the profile definitions.
    """
    if grid is None:
        grid = QuadratureGrid()
    s = _eigenvalues_for(a, obs)

    # position density: |G(f)|^2 has sigma = delta_f / 2
    sigma_f = m.delta_f / 2.0
    lo = s.min() - grid.span_sigmas * sigma_f
    hi = s.max() + grid.span_sigmas * sigma_f
    f = np.linspace(lo, hi, grid.points)
    gf = pointer_position_amplitude(a, s, m, f)
    rho_f = np.abs(gf) ** 2
    norm_f = np.trapezoid(rho_f, f)

    # momentum density: |G(lambda)|^2 has sigma = 1 / delta_f, but the
    # integrand also oscillates at the eigenvalue gaps, so the resolution
    # must beat both scales
    sigma_l = 1.0 / m.delta_f
    span_l = grid.span_sigmas * sigma_l
    gap = float(s.max() - s.min())
    points_l = grid.points
    min_step = (np.pi / gap / 8.0) if gap > 0 else np.inf
    if 2 * span_l / points_l > min_step:
        points_l = int(2 ** np.ceil(np.log2(2 * span_l / min_step)))
    lam = np.linspace(-span_l, span_l, points_l)
    gl = pointer_momentum_amplitude(a, s, m, lam)
    rho_l = np.abs(gl) ** 2
    norm_l = np.trapezoid(rho_l, lam)

    if abs(norm_f - norm_l) > 1e-8 * max(norm_f, norm_l, 1e-30):
        raise GridError(
            f"position/momentum norms disagree ({norm_f:.6e} vs {norm_l:.6e}); "
            "grid span or resolution inadequate")
    n = _checked_norm(complex(norm_f))
    mean_f = np.trapezoid(f * rho_f, f) / n
    mean_l = np.trapezoid(lam * rho_l, lam) / norm_l
    return MeterReadout(mean_f=float(mean_f), mean_lambda=float(mean_l), norm=n)
