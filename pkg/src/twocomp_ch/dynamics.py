"""Right-hand sides of the dispersionless two-component system.

Velocity form (drives time stepping)::

    u_t = -W u_x / 2 + G*F1 + dG*F2
    v_t = -W v_x / 2 + G*H1 + dG*H2

with W = uv - u_x v_x, S = u v_x - u_x v, M = u_x n + v_x m = W_x and

    F1 = -(u M - S m)/2,  F2 = -u_x M / 2,
    H1 = -(v M + S n)/2,  H2 = -v_x M / 2.

Momentum form (cross-check)::

    m_t = -(m W)_x / 2 + m S / 2
    n_t = -(n W)_x / 2 - n S / 2
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalOverflowError
from .grid import FieldState, spectral_derivative
from .green import GreenKernel, green_convolve, green_convolve_dx

__all__ = ["RhsTerms", "assemble_terms", "momentum_rhs", "velocity_rhs"]


@dataclass(frozen=True, eq=False)
class RhsTerms:
    M: np.ndarray
    F1: np.ndarray
    F2: np.ndarray
    H1: np.ndarray
    H2: np.ndarray
    W: np.ndarray
    S: np.ndarray
    u_t: np.ndarray
    v_t: np.ndarray


def _finite(name, arr, t):
    if not np.all(np.isfinite(arr)):
        raise NumericalOverflowError(name, t)
    return arr


def assemble_terms(state: FieldState, kernel: GreenKernel) -> RhsTerms:
    """All intermediate terms and both time derivatives of the velocity form.

    Raises ``NumericalOverflowError`` naming the first non-finite term.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _assemble(state, kernel)


def _assemble(state, kernel):
    grid = state.grid
    t = state.t
    u, v, u_x, v_x, m, n = state.u, state.v, state.u_x, state.v_x, state.m, state.n

    W = _finite("W", grid.filter(u * v - u_x * v_x), t)
    S = _finite("S", grid.filter(u * v_x - u_x * v), t)
    M = _finite("M", grid.filter(u_x * n + v_x * m), t)
    F1 = _finite("F1", grid.filter(-0.5 * (u * M - S * m)), t)
    F2 = _finite("F2", grid.filter(-0.5 * (u_x * M)), t)
    H1 = _finite("H1", grid.filter(-0.5 * (v * M + S * n)), t)
    H2 = _finite("H2", grid.filter(-0.5 * (v_x * M)), t)

    if kernel.backend == "fourier":
        gu = kernel.apply(F1, F2)
        gv = kernel.apply(H1, H2)
    else:
        gu = green_convolve(F1, kernel) + green_convolve_dx(F2, kernel)
        gv = green_convolve(H1, kernel) + green_convolve_dx(H2, kernel)

    u_t = _finite("u_t", grid.filter(-0.5 * W * u_x) + gu, t)
    v_t = _finite("v_t", grid.filter(-0.5 * W * v_x) + gv, t)
    return RhsTerms(M=M, F1=F1, F2=F2, H1=H1, H2=H2, W=W, S=S, u_t=u_t, v_t=v_t)


def velocity_rhs(state: FieldState, kernel: GreenKernel):
    terms = assemble_terms(state, kernel)
    return terms.u_t, terms.v_t


def momentum_rhs(state: FieldState):
    """``(m_t, n_t)`` from the momentum (conservation) form."""
    grid = state.grid
    u, v, u_x, v_x, m, n = state.u, state.v, state.u_x, state.v_x, state.m, state.n
    W = u * v - u_x * v_x
    S = u * v_x - u_x * v
    m_t = -0.5 * spectral_derivative(grid.filter(m * W), grid) + 0.5 * grid.filter(m * S)
    n_t = -0.5 * spectral_derivative(grid.filter(n * W), grid) - 0.5 * grid.filter(n * S)
    return _finite("m_t", m_t, state.t), _finite("n_t", n_t, state.t)
