"""Flow map, Jacobian and momentum transport along characteristics.

Characteristics move with the transport speed W/2 = (uv - u_x v_x)/2 of the
velocity form.  Along them, with A = int M dt and B = int S dt::

    q_x       = exp(A/2)
    m(t,q) q_x = m0 exp(+B/2)
    n(t,q) q_x = n0 exp(-B/2)

The tail functionals E_+- and F_+- are exponentially weighted integrals of m
and n over the transported support [q(t,a), q(t,b)].
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import WindowEscapeError
from .grid import FieldState, GridSpec, trig_interpolate
from .green import GreenKernel
from .integrator import _rk4, kernel_for

__all__ = [
    "CharacteristicSet",
    "TailFunctionals",
    "seed_characteristics",
    "advance_characteristics",
    "transport_residual",
    "product_residual",
    "fd_jacobian",
    "tail_functionals",
    "sign_census",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CharacteristicSet:
    """Labelled characteristics ``q_j(t)`` started at ``x0_j``.

    ``escaped`` flags characteristics that left the trusted window; they are
    frozen at their last in-window values.
    """

    x0: np.ndarray
    q: np.ndarray
    A: np.ndarray
    B: np.ndarray
    m0: np.ndarray
    n0: np.ndarray
    escaped: np.ndarray
    grid: GridSpec
    t: float = 0.0

    @property
    def size(self) -> int:
        return len(self.x0)

    @property
    def qx(self) -> np.ndarray:
        return np.exp(0.5 * self.A)

    # tracker protocol used by integrator.run / step_tracked
    def pack(self) -> np.ndarray:
        return np.concatenate([self.q, self.A, self.B])

    def rate(self, state: FieldState, terms, y) -> np.ndarray:
        J = self.size
        W, M, S = trig_interpolate([terms.W, terms.M, terms.S], state.grid, y[:J])
        dy = np.concatenate([0.5 * W, M, S])
        if self.escaped.any():
            dy[np.tile(self.escaped, 3)] = 0.0
        return dy

    def unpack(self, y, state: FieldState) -> "CharacteristicSet":
        J = self.size
        q, A, B = y[:J].copy(), y[J : 2 * J].copy(), y[2 * J :].copy()
        lo, hi = self.grid.window
        out = (q < lo) | (q > hi)
        new_escapes = out & ~self.escaped
        if new_escapes.any():
            log.warning(
                "%s",
                WindowEscapeError(
                    f"characteristics {np.flatnonzero(new_escapes).tolist()} left the trusted "
                    f"window at t={state.t:.6g}; frozen"
                ),
            )
        keep = out | self.escaped
        q[keep], A[keep], B[keep] = self.q[keep], self.A[keep], self.B[keep]
        return replace(self, q=q, A=A, B=B, escaped=keep, t=state.t)


def seed_characteristics(state: FieldState, a: float, b: float, J: int = 32, extra=None) -> CharacteristicSet:
    """``J`` equally spaced labels strictly inside ``[a, b]`` plus both endpoints.

    Labels are sorted; ``extra`` labels (e.g. close pairs for finite
    difference Jacobians) are merged in.
    """
    labels = np.linspace(a, b, J + 2)
    if extra is not None:
        labels = np.union1d(labels, np.asarray(extra, dtype=float))
    return characteristics_at(state, labels)


def characteristics_at(state: FieldState, labels) -> CharacteristicSet:
    labels = np.sort(np.asarray(labels, dtype=float))
    lo, hi = state.grid.window
    if labels[0] < lo or labels[-1] > hi:
        raise WindowEscapeError("labels must lie inside the trusted window")
    m0, n0 = trig_interpolate([state.m, state.n], state.grid, labels)
    zeros = np.zeros_like(labels)
    return CharacteristicSet(
        x0=labels,
        q=labels.copy(),
        A=zeros.copy(),
        B=zeros.copy(),
        m0=m0,
        n0=n0,
        escaped=np.zeros(len(labels), dtype=bool),
        grid=state.grid,
        t=state.t,
    )


def advance_characteristics(
    chars: CharacteristicSet, state: FieldState, dt: float, kernel: Optional[GreenKernel] = None
) -> CharacteristicSet:
    """Advance positions and exponents by one RK4 step synchronised with the PDE.

    The PDE stages are recomputed from ``state`` so that the off-grid speed is
    taken from the proper intermediate fields.
    """
    kernel = kernel or kernel_for(state.grid)
    u, v, y = _rk4(state, dt, kernel, chars, chars.pack())
    return chars.unpack(y, FieldState(u, v, state.grid, state.t + dt))


def _momenta_at(chars, state):
    return trig_interpolate([state.m, state.n], state.grid, chars.q)


def _valid(m0, rel):
    return np.abs(m0) > rel * np.max(np.abs(m0))


def transport_residual(chars: CharacteristicSet, state: FieldState, rel_floor: float = 1e-6):
    """Relative residuals of the two transport identities per characteristic.

    Entries whose initial momentum is below ``rel_floor * max|m0|`` are NaN.
    """
    m, n = _momenta_at(chars, state)
    qx = chars.qx
    rm = np.full(chars.size, np.nan)
    rn = np.full(chars.size, np.nan)
    ok = _valid(chars.m0, rel_floor) & ~chars.escaped
    rm[ok] = m[ok] * qx[ok] * np.exp(-0.5 * chars.B[ok]) / chars.m0[ok] - 1.0
    ok = _valid(chars.n0, rel_floor) & ~chars.escaped
    rn[ok] = n[ok] * qx[ok] * np.exp(0.5 * chars.B[ok]) / chars.n0[ok] - 1.0
    return rm, rn


def product_residual(chars: CharacteristicSet, state: FieldState, rel_floor: float = 1e-6):
    """``m n q_x^2 / (m0 n0) - 1``, which does not involve ``B``."""
    m, n = _momenta_at(chars, state)
    out = np.full(chars.size, np.nan)
    ok = _valid(chars.m0, rel_floor) & _valid(chars.n0, rel_floor) & ~chars.escaped
    out[ok] = m[ok] * n[ok] * chars.qx[ok] ** 2 / (chars.m0[ok] * chars.n0[ok]) - 1.0
    return out


def fd_jacobian(chars: CharacteristicSet):
    """Centred differences of the flow map over neighbouring labels (interior only)."""
    return (chars.q[2:] - chars.q[:-2]) / (chars.x0[2:] - chars.x0[:-2])


@dataclass(frozen=True)
class TailFunctionals:
    t: float
    E_plus: float
    E_minus: float
    F_plus: float
    F_minus: float
    q_a: float
    q_b: float


def _segment_integral(x, f, a, b):
    """Trapezoid rule of samples ``f`` on uniform ``x`` over [a, b], with
    partial end cells from linear interpolation."""
    inside = (x > a) & (x < b)
    xi = np.concatenate([[a], x[inside], [b]])
    fi = np.concatenate([[np.interp(a, x, f)], f[inside], [np.interp(b, x, f)]])
    return float(np.trapezoid(fi, xi))


def tail_functionals(state: FieldState, q_a: float, q_b: float) -> TailFunctionals:
    lo, hi = state.grid.window
    if not (lo < q_a <= q_b < hi):
        raise WindowEscapeError(f"interval [{q_a}, {q_b}] is not inside the trusted window ({lo}, {hi})")
    x = state.x
    ep, em = np.exp(x), np.exp(-x)
    return TailFunctionals(
        t=state.t,
        E_plus=_segment_integral(x, ep * state.m, q_a, q_b),
        E_minus=_segment_integral(x, em * state.m, q_a, q_b),
        F_plus=_segment_integral(x, ep * state.n, q_a, q_b),
        F_minus=_segment_integral(x, em * state.n, q_a, q_b),
        q_a=float(q_a),
        q_b=float(q_b),
    )


def sign_census(state: FieldState):
    """Minima of ``m`` and ``n`` over the trusted window."""
    mask = state.grid.window_mask()
    return float(np.min(state.m[mask])), float(np.min(state.n[mask]))
