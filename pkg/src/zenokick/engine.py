"""Reduced simulation path: O(kicks) per run, the workhorse for sweeps.

A run folds the closed-form free propagator and the kick update over a
``ReducedState``; leaked weight never re-enters the dynamics, so two complex
amplitudes and one real accumulator are the entire state.  Sweep rows are
independent pure computations and may be mapped in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

import numpy as np

from .core import (
    KickSchedule,
    ReducedState,
    SystemParams,
    Trajectory,
    apply_kick,
    free_propagate,
    schedule_steps,
)

__all__ = [
    "SweepRow",
    "SweepSpec",
    "run_schedule",
    "final_state",
    "equally_spaced_schedule",
    "run_equally_spaced",
    "sweep",
]

KickOp = Callable[[ReducedState, float], ReducedState]


def run_schedule(
    schedule: KickSchedule,
    params: SystemParams,
    kick_op: KickOp = apply_kick,
) -> Trajectory:
    """Run a kick schedule and sample populations along the way.

    Samples land on the uniform grid plus both one-sided records at each kick
    instant (P10 is continuous there, P01 generally is not), so consumers must
    not assume strictly increasing sample times.  ``kick_op`` is a
    verification hook; leave it at the default outside of mutation tests.
    """
    state = ReducedState()
    times: list[float] = []
    rows: list[tuple[float, float, float, float]] = []
    for step in schedule_steps(schedule):
        if step[0] == "advance":
            state = free_propagate(state, step[1], params)
        elif step[0] == "kick":
            state = kick_op(state, step[2])
        else:
            times.append(step[1])
            rows.append((state.p10, state.p01, state.v, state.norm))
    data = np.array(rows)
    return Trajectory(np.array(times), data[:, 0], data[:, 1], data[:, 2], data[:, 3])


def final_state(
    kicks: Iterable[tuple[float, float]],
    total_time: float,
    params: SystemParams,
    kick_op: KickOp = apply_kick,
) -> ReducedState:
    """Fold a kick sequence without sampling and return the state at total_time.

    Unlike ``KickSchedule`` this accepts non-decreasing (not necessarily
    strictly increasing) kick times: repeated times mean back-to-back kicks
    with no free evolution in between.
    """
    if not math.isfinite(total_time) or total_time < 0:
        raise ValueError(f"total_time must be finite and >= 0, got {total_time}")
    state = ReducedState()
    now = 0.0
    for t, g in kicks:
        if t < now or t > total_time:
            raise ValueError(f"kick time {t} outside [{now}, {total_time}]")
        if t > now:
            state = free_propagate(state, t - now, params)
            now = t
        state = kick_op(state, g)
    if total_time > now:
        state = free_propagate(state, total_time - now, params)
    return state


def equally_spaced_schedule(
    n: int,
    g: float,
    *,
    total_time: float | None = None,
    interval: float | None = None,
    sample_resolution: float = 0.0,
) -> KickSchedule:
    """Schedule of n kicks of strength g at k*tau, k = 1..n.

    Exactly one of ``total_time`` (tau = total_time / n) or ``interval``
    (total time = n * interval) must be given; the last kick always lands
    exactly on the final instant.
    """
    if (total_time is None) == (interval is None):
        raise ValueError("give exactly one of total_time or interval")
    if n < 0:
        raise ValueError(f"kick count must be >= 0, got {n}")
    if total_time is not None:
        span = float(total_time)
        times = np.linspace(0.0, span, n + 1)[1:]
    else:
        times = float(interval) * np.arange(1, n + 1)
        span = float(times[-1]) if n else 0.0
    kicks = tuple((float(t), float(g)) for t in times)
    return KickSchedule(kicks, span, sample_resolution)


def run_equally_spaced(
    n: int,
    g: float,
    *,
    total_time: float | None = None,
    interval: float | None = None,
    params: SystemParams | None = None,
) -> tuple[float, float, float]:
    """Final (p10, p01, pvac) after n equally spaced kicks of strength g."""
    schedule = equally_spaced_schedule(n, g, total_time=total_time, interval=interval)
    last = run_schedule(schedule, params or SystemParams()).final()
    return (last.p10, last.p01, last.pvac)


class SweepRow(NamedTuple):
    g: float
    n: int
    p10: float
    p01: float
    pvac: float


@dataclass(frozen=True)
class SweepSpec:
    """Grid of (kick strength, kick count) cells sharing one timing rule.

    mode "total" keeps the run length fixed at ``total_time`` (tau shrinks as
    n grows); mode "interval" keeps the spacing fixed at ``interval`` (the run
    length grows as n * interval).
    """

    g_values: tuple[float, ...]
    n_values: tuple[int, ...]
    mode: str = "total"
    total_time: float | None = None
    interval: float | None = None
    params: SystemParams = field(default_factory=SystemParams)

    def __post_init__(self) -> None:
        object.__setattr__(self, "g_values", tuple(float(g) for g in self.g_values))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.g_values or not self.n_values:
            raise ValueError("g_values and n_values must be non-empty")
        if any(not math.isfinite(g) for g in self.g_values):
            raise ValueError("kick strengths must be finite")
        if any(n < 0 for n in self.n_values):
            raise ValueError("kick counts must be >= 0")
        if self.mode not in ("total", "interval"):
            raise ValueError(f"mode must be 'total' or 'interval', got {self.mode!r}")
        duration = self.total_time if self.mode == "total" else self.interval
        if duration is None or not math.isfinite(duration) or duration <= 0:
            raise ValueError(f"mode {self.mode!r} needs a positive duration, got {duration}")

    def timing(self) -> dict[str, float]:
        if self.mode == "total":
            return {"total_time": float(self.total_time)}
        return {"interval": float(self.interval)}


def sweep(spec: SweepSpec, map_fn: Callable = map) -> list[SweepRow]:
    """One row per (g, n) cell, g outermost, in deterministic grid order.

    Cells are independent pure computations; pass an executor's ``map`` as
    ``map_fn`` to evaluate them in parallel.  The output order follows the
    input grid regardless of execution order.
    """
    timing = spec.timing()

    def row(cell: tuple[float, int]) -> SweepRow:
        g, n = cell
        p10, p01, pvac = run_equally_spaced(n, g, params=spec.params, **timing)
        return SweepRow(g, n, p10, p01, pvac)

    cells = [(g, n) for g in spec.g_values for n in spec.n_values]
    return list(map_fn(row, cells))
