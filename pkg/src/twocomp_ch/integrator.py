"""Fixed-step classical RK4 with CFL and blow-up guards."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .dynamics import assemble_terms
from .errors import BlowUpSuspected, CFLViolation, ConfigurationError, NumericalOverflowError
from .grid import FieldState, GridSpec
from .green import GreenKernel

__all__ = [
    "StepControl",
    "RunResult",
    "kernel_for",
    "cfl_limit",
    "step",
    "run",
    "COMPLETED",
    "BLOW_UP",
    "OVERFLOW",
]

log = logging.getLogger(__name__)

COMPLETED = "completed"
BLOW_UP = "blow-up-suspected"
OVERFLOW = "numerical-overflow"


@dataclass(frozen=True)
class StepControl:
    dt: float
    t_end: float = 1.0
    cfl_safety: float = 0.3
    max_gradient: float = 1e3
    snapshot_every: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ConfigurationError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety!r}")
        if self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be >= 1")


@lru_cache(maxsize=16)
def kernel_for(grid: GridSpec) -> GreenKernel:
    return GreenKernel(grid)


def cfl_limit(state: FieldState, cfl_safety: float) -> float:
    """Largest admissible dt: ``cfl_safety * dx / max(1, max|W/2|)``."""
    with np.errstate(over="ignore", invalid="ignore"):
        half_w = 0.5 * np.max(np.abs(state.u * state.v - state.u_x * state.v_x))
    return cfl_safety * state.grid.dx / max(1.0, float(half_w))


def _rk4(state, dt, kernel, tracker=None, y=None):
    """One RK4 step of (u, v), optionally carrying a tracker's ODE state ``y``.

    ``tracker.rate(stage_state, terms, y)`` must return dy/dt for the stage.
    """
    grid = state.grid
    u0, v0, t0 = state.u, state.v, state.t
    ku, kv, ky = [], [], []
    s = state
    yi = y
    for c, w in ((0.0, None), (0.5, 0), (0.5, 1), (1.0, 2)):
        if w is not None:
            s = FieldState(u0 + c * dt * ku[w], v0 + c * dt * kv[w], grid, t0 + c * dt)
            if tracker is not None:
                yi = y + c * dt * ky[w]
        terms = assemble_terms(s, kernel)
        ku.append(terms.u_t)
        kv.append(terms.v_t)
        if tracker is not None:
            ky.append(tracker.rate(s, terms, yi))
    u = u0 + dt / 6.0 * (ku[0] + 2.0 * ku[1] + 2.0 * ku[2] + ku[3])
    v = v0 + dt / 6.0 * (kv[0] + 2.0 * kv[1] + 2.0 * kv[2] + kv[3])
    y_new = None
    if tracker is not None:
        y_new = y + dt / 6.0 * (ky[0] + 2.0 * ky[1] + 2.0 * ky[2] + ky[3])
    return u, v, y_new


def _guarded_state(u, v, grid, t, control):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise BlowUpSuspected(t, "non_finite", float("nan"))
    new = FieldState(u, v, grid, t)
    grad = float(max(np.max(np.abs(new.u_x)), np.max(np.abs(new.v_x))))
    if grad > control.max_gradient:
        raise BlowUpSuspected(t, "max_gradient", grad)
    return new


def step(state: FieldState, control: StepControl, kernel: Optional[GreenKernel] = None, dt=None) -> FieldState:
    """Advance ``state`` by one RK4 step of size ``dt`` (default ``control.dt``)."""
    dt = control.dt if dt is None else dt
    kernel = kernel or kernel_for(state.grid)
    limit = cfl_limit(state, control.cfl_safety)
    if dt > limit:
        raise CFLViolation(dt, limit)
    u, v, _ = _rk4(state, dt, kernel)
    return _guarded_state(u, v, state.grid, state.t + dt, control)


def step_tracked(state, tracker, control, kernel=None, dt=None):
    """RK4 step of the PDE coupled with ``tracker``'s ODE; returns both."""
    dt = control.dt if dt is None else dt
    kernel = kernel or kernel_for(state.grid)
    limit = cfl_limit(state, control.cfl_safety)
    if dt > limit:
        raise CFLViolation(dt, limit)
    u, v, y = _rk4(state, dt, kernel, tracker, tracker.pack())
    new = _guarded_state(u, v, state.grid, state.t + dt, control)
    return new, tracker.unpack(y, new)


Observer = Callable[[FieldState, Any], Optional[dict]]


@dataclass
class RunResult:
    final_state: FieldState
    reason: str
    n_steps: int
    snapshot_steps: list = field(default_factory=list)
    snapshot_times: list = field(default_factory=list)
    records: list = field(default_factory=list)
    states: list = field(default_factory=list)
    trackers: list = field(default_factory=list)
    tracker: Any = None
    message: str = ""

    @property
    def completed(self) -> bool:
        return self.reason == COMPLETED


def run(
    initial: FieldState,
    control: StepControl,
    observers: Sequence[Observer] = (),
    tracker=None,
    keep_states: bool = False,
    kernel: Optional[GreenKernel] = None,
) -> RunResult:
    """Integrate from ``initial.t`` to ``control.t_end``.

    The step is shrunk uniformly so an integer number of steps lands on
    ``t_end`` exactly.  Observers are called as ``obs(state, tracker)`` at
    step 0, every ``snapshot_every`` steps and at the final step; their dict
    outputs are merged into one record per snapshot.  Step failures end the
    run with the matching termination reason instead of raising.
    """
    if control.t_end < initial.t:
        raise ConfigurationError("t_end precedes the initial time")
    kernel = kernel or kernel_for(initial.grid)
    span = control.t_end - initial.t
    n_steps = 0 if span == 0 else math.ceil(span / control.dt * (1 - 1e-12))
    dt = span / n_steps if n_steps else control.dt

    result = RunResult(final_state=initial, reason=COMPLETED, n_steps=0, tracker=tracker)

    def snapshot(i, state, trk):
        record = {"t": state.t, "step": i}
        for obs in observers:
            out = obs(state, trk)
            if out:
                record.update(out)
        result.snapshot_steps.append(i)
        result.snapshot_times.append(state.t)
        result.records.append(record)
        if keep_states:
            result.states.append(state)
            result.trackers.append(trk)

    state, trk = initial, tracker
    snapshot(0, state, trk)
    t0 = initial.t
    for i in range(1, n_steps + 1):
        h = (t0 + i * dt) - state.t
        try:
            if trk is None:
                state = step(state, control, kernel, dt=h)
            else:
                state, trk = step_tracked(state, trk, control, kernel, dt=h)
        except (BlowUpSuspected, CFLViolation) as exc:
            result.reason, result.message = BLOW_UP, str(exc)
            log.warning("run terminated: %s", exc)
            break
        except NumericalOverflowError as exc:
            result.reason, result.message = OVERFLOW, str(exc)
            log.warning("run terminated: %s", exc)
            break
        result.n_steps = i
        if i % control.snapshot_every == 0 or i == n_steps:
            snapshot(i, state, trk)
    result.final_state = state
    result.tracker = trk
    return result
