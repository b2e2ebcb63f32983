"""Built-in scenario library for the command-line front end.

Each discrete scenario bundles a transition, a catalog of named observables
with a default selection, and an optional battery ordering for joint weak
measurements.  The state pairs behind the named scenarios reproduce fixed
reference amplitudes (checked on every construction, so a corrupted build
fails loudly rather than emitting wrong tables):

* ``spin100``  -- two-path spin transition with relative amplitudes
  (50.5, -49.5); the weak meter for the z-component reads 100.
* ``cheshire`` -- four paths (left/right times spin up/down) with relative
  amplitudes (1/2, 1/2, 1/2, -1/2): the occupation meters read (1, 0) while
  the spin meters read (0, 1).
* ``threebox`` -- three paths with relative amplitudes (1, -1, 1): strong
  checks of path 1 and path 3 each succeed with certainty.
* ``tunneling`` -- opaque-barrier defaults (V=1, d=10, mu=1, p=0.8,
  packet width 500).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .hilbert import HermitianMatrix, Observable, StateVector
from .paths import TransitionSpec, path_amplitudes, relative_amplitudes
from .tunneling import BarrierSpec, PacketSpec

__all__ = ["DiscreteScenario", "TunnelingScenario", "get_scenario",
           "SCENARIO_NAMES"]

SCENARIO_NAMES = ("spin100", "cheshire", "threebox", "tunneling")


@dataclass(frozen=True)
class DiscreteScenario:
    """A named transition plus its observable catalog."""

    name: str
    transition: TransitionSpec          # observable field unset
    observables: dict[str, Observable]
    default_observable: str
    battery_order: tuple[str, ...]
    reference_alphas: np.ndarray | None = None

    def observable(self, name: str | None = None) -> Observable:
        key = self.default_observable if name is None else name
        try:
            return self.observables[key]
        except KeyError:
            raise ConfigError(
                f"scenario '{self.name}' has no observable '{key}' "
                f"(choose from {sorted(self.observables)})") from None

    def verify(self):
        """Check the hard-coded state pair reproduces the reference alphas.

        Uses a non-degenerate basis-ordered observable so the amplitudes
        come out indexed by path, not by sorted eigenvalue.
        """
        if self.reference_alphas is None:
            return
        n = self.transition.dimension
        labeler = _diagonal_observable(np.arange(1.0, n + 1.0))
        spec = self.transition.with_observable(labeler)
        alphas = relative_amplitudes(path_amplitudes(spec)).alphas
        if np.abs(alphas - self.reference_alphas).max() > 1e-12:
            raise ConfigError(
                f"scenario '{self.name}' failed its startup verification: "
                f"alphas {alphas} != {self.reference_alphas}")


@dataclass(frozen=True)
class TunnelingScenario:
    name: str
    barrier: BarrierSpec
    packet: PacketSpec


def _diagonal_observable(values) -> Observable:
    """Observable diagonal in the standard basis, *kept in basis order*.

    The eigenvalues are not sorted: index i stays attached to basis state
    |i>, which is what the path bookkeeping of the named scenarios needs.
    Sorted order is only a requirement of the Observable constructor, so we
    sort and permute the identity columns accordingly.
    """
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    eye = np.eye(values.size)
    return Observable(values[order], eye[:, order])


def _spin100() -> DiscreteScenario:
    b = -99.0 / 101.0
    psi = StateVector([1.0, 1.0])
    phi = StateVector([1.0, b])
    transition = TransitionSpec(psi, phi, HermitianMatrix.zero(2))
    observables = {
        "sigma_z": _diagonal_observable([1.0, -1.0]),
        "identity": _diagonal_observable([1.0, 1.0]),
        "P1": _diagonal_observable([1.0, 0.0]),
        "P2": _diagonal_observable([0.0, 1.0]),
    }
    return DiscreteScenario(
        name="spin100",
        transition=transition,
        observables=observables,
        default_observable="sigma_z",
        battery_order=("P1", "P2"),
        reference_alphas=np.array([50.5, -49.5], dtype=complex),
    )


def _cheshire() -> DiscreteScenario:
    # basis order: (left,up), (left,down), (right,up), (right,down)
    psi = StateVector([1.0, 1.0, 1.0, 1.0])
    phi = StateVector([1.0, 1.0, 1.0, -1.0])
    transition = TransitionSpec(psi, phi, HermitianMatrix.zero(4))
    observables = {
        "PL": _diagonal_observable([1.0, 1.0, 0.0, 0.0]),
        "PR": _diagonal_observable([0.0, 0.0, 1.0, 1.0]),
        "sigmaL": _diagonal_observable([1.0, -1.0, 0.0, 0.0]),
        "sigmaR": _diagonal_observable([0.0, 0.0, 1.0, -1.0]),
    }
    return DiscreteScenario(
        name="cheshire",
        transition=transition,
        observables=observables,
        default_observable="sigmaR",
        battery_order=("PL", "PR", "sigmaL", "sigmaR"),
        reference_alphas=np.array([0.5, 0.5, 0.5, -0.5], dtype=complex),
    )


def _threebox() -> DiscreteScenario:
    psi = StateVector([1.0, 1.0, 1.0])
    phi = StateVector([1.0, -1.0, 1.0])
    transition = TransitionSpec(psi, phi, HermitianMatrix.zero(3))
    observables = {
        "P1": _diagonal_observable([1.0, 0.0, 0.0]),
        "P2": _diagonal_observable([0.0, 1.0, 0.0]),
        "P3": _diagonal_observable([0.0, 0.0, 1.0]),
    }
    return DiscreteScenario(
        name="threebox",
        transition=transition,
        observables=observables,
        default_observable="P1",
        battery_order=("P1", "P2", "P3"),
        reference_alphas=np.array([1.0, -1.0, 1.0], dtype=complex),
    )


def _tunneling() -> TunnelingScenario:
    return TunnelingScenario(
        name="tunneling",
        barrier=BarrierSpec(height=1.0, width=10.0, mass=1.0),
        packet=PacketSpec(momentum=0.8, delta_x=500.0),
    )


def get_scenario(name: str):
    """Look up a built-in scenario; discrete ones are verified on the spot."""
    builders = {
        "spin100": _spin100,
        "cheshire": _cheshire,
        "threebox": _threebox,
        "tunneling": _tunneling,
    }
    try:
        scenario = builders[name]()
    except KeyError:
        raise ConfigError(
            f"unknown scenario '{name}' (choose from {SCENARIO_NAMES})") from None
    if isinstance(scenario, DiscreteScenario):
        scenario.verify()
    return scenario
