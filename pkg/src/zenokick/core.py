"""Domain types and exact single-excitation dynamics of the kicked two-qubit pair.

Two qubits a and b trade one excitation through a coupling of strength
``coupling`` (angular frequency, hbar = 1).  Everything of interest happens in
the subspace spanned by |1,0> (a excited) and |0,1> (b excited); the shared
vacuum |0,0> is reachable only through probe kicks, which move weight from
|0,1> onto frozen, mutually orthogonal vacuum branches.

Conventions:

* hbar = 1; energies are angular frequencies, times are their inverse.
* ``ReducedState`` holds the complex amplitudes (a, b) on |1,0>, |0,1> plus a
  single real accumulator ``v`` for all vacuum-branch population.
* Free evolution is the exact closed form of the 2x2 block
  [[eps_a, coupling], [coupling, eps_b]]; there is no numerical integrator.
* A kick of strength g rescales b by cos(g) and leaks |b|^2 sin^2(g) into v;
  the survivor amplitude a is never touched by a kick.
* Global phases are not normalised away; compare populations, or amplitudes
  up to one overall phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "CapacityError",
    "OffResonanceError",
    "SystemParams",
    "KickSchedule",
    "ReducedState",
    "Trajectory",
    "TrajectorySample",
    "single_excitation_block",
    "free_propagate",
    "apply_kick",
    "which_way_information",
    "schedule_steps",
]


class CapacityError(Exception):
    """Requested problem size exceeds what this simulator supports."""


class OffResonanceError(Exception):
    """A resonance-only closed form was asked for detuned qubits."""


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the coupled pair and its probes.

    coupling: excitation-exchange rate between the qubits, > 0.
    eps_a, eps_b: excited-state energies of qubit a and qubit b.
    probe_phases: (excited, ground) free energies given to every probe level.
        They dress orthogonal frozen branches with global phases and cannot
        move any population; kept so the dense path evolves the full model.
    """

    coupling: float = 1.0
    eps_a: float = 0.0
    eps_b: float = 0.0
    probe_phases: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        values = (self.coupling, self.eps_a, self.eps_b, *self.probe_phases)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("SystemParams fields must be finite")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")

    @property
    def resonant(self) -> bool:
        return self.eps_a == self.eps_b


@dataclass(frozen=True)
class KickSchedule:
    """Ordered instantaneous probe kicks over a finite run.

    kicks: (time, strength in radians) pairs with strictly increasing times,
        all inside [0, total_time].  May be empty.
    sample_resolution: uniform trajectory samples per unit time; 0 keeps only
        the endpoints (plus the pre/post pair recorded at every kick).
    """

    kicks: tuple[tuple[float, float], ...]
    total_time: float
    sample_resolution: float = 1000.0

    def __post_init__(self) -> None:
        kicks = tuple((float(t), float(g)) for t, g in self.kicks)
        object.__setattr__(self, "kicks", kicks)
        if not math.isfinite(self.total_time) or self.total_time < 0:
            raise ValueError(f"total_time must be finite and >= 0, got {self.total_time}")
        if not math.isfinite(self.sample_resolution) or self.sample_resolution < 0:
            raise ValueError("sample_resolution must be finite and >= 0")
        previous = -math.inf
        for t, g in kicks:
            if not (math.isfinite(t) and math.isfinite(g)):
                raise ValueError("kick times and strengths must be finite")
            if not 0.0 <= t <= self.total_time:
                raise ValueError(f"kick time {t} outside [0, {self.total_time}]")
            if t <= previous:
                raise ValueError("kick times must be strictly increasing")
            previous = t

    def sample_grid(self) -> np.ndarray:
        """Uniform sample times covering [0, total_time], endpoints included."""
        if self.total_time == 0.0:
            return np.zeros(1)
        n = max(1, round(self.total_time * self.sample_resolution))
        return np.linspace(0.0, self.total_time, n + 1)


@dataclass(frozen=True)
class ReducedState:
    """Amplitudes on |1,0> and |0,1> plus accumulated vacuum population."""

    a: complex = 1.0 + 0.0j
    b: complex = 0.0j
    v: float = 0.0

    def __post_init__(self) -> None:
        if not (cmath.isfinite(self.a) and cmath.isfinite(self.b) and math.isfinite(self.v)):
            raise ValueError("ReducedState fields must be finite")
        if self.v < 0.0:
            raise ValueError(f"vacuum population must be >= 0, got {self.v}")

    @property
    def p10(self) -> float:
        return self.a.real**2 + self.a.imag**2

    @property
    def p01(self) -> float:
        return self.b.real**2 + self.b.imag**2

    @property
    def norm(self) -> float:
        return self.p10 + self.p01 + self.v


class TrajectorySample(NamedTuple):
    t: float
    p10: float
    p01: float
    pvac: float
    norm: float


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled populations; kick instants appear twice (pre/post record)."""

    t: np.ndarray
    p10: np.ndarray
    p01: np.ndarray
    pvac: np.ndarray
    norm: np.ndarray

    def __post_init__(self) -> None:
        arrays = (self.t, self.p10, self.p01, self.pvac, self.norm)
        n = len(self.t)
        if n == 0 or any(len(arr) != n for arr in arrays):
            raise ValueError("trajectory arrays must be non-empty and equally long")
        if np.any(np.diff(self.t) < 0):
            raise ValueError("sample times must be non-decreasing")
        for arr in (self.p10, self.p01, self.pvac):
            if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
                raise ValueError("populations must lie in [0, 1]")
        if np.max(np.abs(self.norm - 1.0)) > 1e-10:
            raise ValueError("total weight drifted from 1 by more than 1e-10")

    def __len__(self) -> int:
        return len(self.t)

    def sample(self, i: int) -> TrajectorySample:
        return TrajectorySample(
            float(self.t[i]), float(self.p10[i]), float(self.p01[i]),
            float(self.pvac[i]), float(self.norm[i]),
        )

    def final(self) -> TrajectorySample:
        return self.sample(len(self) - 1)


def single_excitation_block(dt: float, params: SystemParams) -> np.ndarray:
    """Exact exp(-i H dt) on the (|1,0>, |0,1>) block, H = [[eps_a, c], [c, eps_b]].

    Valid for any detuning; at eps_a == eps_b it reduces to the rotation
    [[cos(c dt), -i sin(c dt)], [-i sin(c dt), cos(c dt)]].
    """
    if not math.isfinite(dt) or dt < 0:
        raise ValueError(f"dt must be finite and >= 0, got {dt}")
    half_sum = 0.5 * (params.eps_a + params.eps_b)
    half_diff = 0.5 * (params.eps_a - params.eps_b)
    omega = math.hypot(half_diff, params.coupling)  # > 0 since coupling > 0
    c = math.cos(omega * dt)
    f = math.sin(omega * dt) / omega
    phase = cmath.exp(-1j * half_sum * dt)
    return phase * np.array(
        [
            [c - 1j * half_diff * f, -1j * params.coupling * f],
            [-1j * params.coupling * f, c + 1j * half_diff * f],
        ],
        dtype=np.complex128,
    )


def free_propagate(state: ReducedState, dt: float, params: SystemParams) -> ReducedState:
    """Evolve (a, b) by the closed-form block propagator; vacuum weight is frozen.

    |0,0> is an eigenstate of the pair Hamiltonian with eigenvalue 0, so the
    leaked branches pick up at most irrelevant probe phases and ``v`` is
    carried through unchanged.
    """
    u = single_excitation_block(dt, params)
    return ReducedState(
        complex(u[0, 0] * state.a + u[0, 1] * state.b),
        complex(u[1, 0] * state.a + u[1, 1] * state.b),
        state.v,
    )


def apply_kick(state: ReducedState, g: float) -> ReducedState:
    """Entangle b with a fresh probe: b -> b cos(g), leak |b|^2 sin^2(g) to vacuum.

    The survivor amplitude a commutes with the kick and is returned untouched,
    so P10 is continuous across kick instants.  Distinct probe flags are
    orthogonal and the vacuum does not evolve, which is why the leaked weight
    can be accumulated additively in the scalar ``v``.
    """
    if not math.isfinite(g):
        raise ValueError(f"kick strength must be finite, got {g}")
    cg = math.cos(g)
    sg = math.sin(g)
    leak = (state.b.real**2 + state.b.imag**2) * sg * sg
    return ReducedState(state.a, state.b * cg, state.v + leak)


def which_way_information(g: float) -> float:
    """Amount of which-way information a single kick of strength g records.

    Returns 1 - |cos g|: 0 when the probe stays uncorrelated (g = 0 or pi,
    no information about whether the transition happened), 1 for a complete
    measurement (g = pi/2, probe state fully resolves it).
    """
    if not math.isfinite(g):
        raise ValueError(f"kick strength must be finite, got {g}")
    return 1.0 - abs(math.cos(g))


def schedule_steps(schedule: KickSchedule) -> list[tuple]:
    """Flatten a schedule into ("advance", dt) / ("sample", t) / ("kick", k, g) steps.

    Sampling covers the uniform grid plus a pre- and a post-kick record at
    every kick time; a grid point that coincides with a kick is represented by
    that pre/post pair.  Every simulation path executes this same step list,
    which makes their trajectories comparable sample by sample.
    """
    grid = schedule.sample_grid()
    n_grid = len(grid)
    steps: list[tuple] = []
    now = 0.0
    gi = 0

    def advance_to(target: float) -> None:
        nonlocal now
        if target > now:
            steps.append(("advance", target - now))
            now = target

    for index, (t_kick, g) in enumerate(schedule.kicks):
        while gi < n_grid and grid[gi] < t_kick:
            advance_to(float(grid[gi]))
            steps.append(("sample", now))
            gi += 1
        advance_to(t_kick)
        steps.append(("sample", now))
        steps.append(("kick", index, g))
        steps.append(("sample", now))
        while gi < n_grid and grid[gi] <= t_kick:
            gi += 1
    while gi < n_grid:
        advance_to(float(grid[gi]))
        steps.append(("sample", now))
        gi += 1
    return steps
