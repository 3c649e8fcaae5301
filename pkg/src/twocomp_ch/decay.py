"""Weighted norms, exponential decay indices and the H^3 solution bound."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientTailData, WeightOverflowError
from .grid import FieldState, GridSpec
from .green import capped_weight

__all__ = [
    "WeightSpec",
    "DecayFit",
    "weighted_sup_norm",
    "weighted_p_norm",
    "fit_decay_index",
    "solution_bound",
    "MIN_FIT_SAMPLES",
    "NOISE_FLOOR",
]

MIN_FIT_SAMPLES = 16
NOISE_FLOOR = 1e-13
_MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class WeightSpec:
    """Parameters of the capped weight ``exp(theta * min(|x|, N))`` and of
    the momentum weight ``exp((1 + lam) |x|)``.

    ``p_exponent`` is an even integer ``2q >= 2`` or ``inf``.
    """

    theta: float = 0.5
    N: int = 10
    lam: float = 0.0
    p_exponent: float = np.inf

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise DomainError(f"theta must lie in (0, 1), got {self.theta!r}")
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N!r}")
        if self.lam < 0:
            raise DomainError(f"lam must be >= 0, got {self.lam!r}")
        p = self.p_exponent
        if not (p == np.inf or (p >= 2 and float(p).is_integer() and int(p) % 2 == 0)):
            raise DomainError(f"p_exponent must be an even integer >= 2 or inf, got {p!r}")

    def phi(self, x) -> np.ndarray:
        return capped_weight(x, self.theta, self.N)


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    window: tuple
    side: str
    r_squared: float
    n_points_used: int


def weighted_sup_norm(f, w: WeightSpec, grid: GridSpec) -> float:
    """``max |f| phi_N`` over the trusted window."""
    f = grid.check(f)
    mask = grid.window_mask()
    return float(np.max(np.abs(f[mask]) * w.phi(grid.x[mask])))


def weighted_p_norm(f, p_exponent, lam: float, grid: GridSpec) -> float:
    """Discrete ``L^p`` norm of ``f exp((1 + lam) min(|x|, L/2))`` over the
    trusted window (trapezoid rule on the nodes)."""
    f = grid.check(f)
    if lam < 0:
        raise DomainError(f"lam must be >= 0, got {lam!r}")
    mask = grid.window_mask()
    x = grid.x[mask]
    half = 0.5 * grid.L
    if (1.0 + lam) * half > _MAX_EXPONENT:
        raise WeightOverflowError(
            f"weight exp({(1 + lam) * half:.1f}) overflows; use a smaller lam or window"
        )
    g = np.abs(f[mask]) * np.exp((1.0 + lam) * np.minimum(np.abs(x), half))
    if p_exponent == np.inf:
        return float(np.max(g))
    p = int(p_exponent)
    if p < 2 or p % 2:
        raise DomainError(f"exponent must be an even integer >= 2, got {p_exponent!r}")
    scale = np.max(g)
    if scale == 0:
        return 0.0
    return float(scale * np.trapezoid((g / scale) ** p, x) ** (1.0 / p))


def fit_decay_index(
    f, grid: GridSpec, window=(7.0, 25.0), side: str = "+", floor: float = NOISE_FLOOR
) -> DecayFit:
    """Least-squares line through ``(|x|, log|f|)`` on ``|x| in window``.

    ``side`` selects ``x > 0`` (``"+"``) or ``x < 0`` (``"-"``).  Samples at
    or below ``floor * max|f|`` are discarded.  ``slope`` is the decay
    index: positive for ``f ~ exp(-slope |x|)``.
    """
    f = grid.check(f)
    lo, hi = window
    wlo, whi = grid.window
    if lo < 0 or hi > whi or hi <= lo:
        raise DomainError(f"fit window {window} must satisfy 0 <= lo < hi <= {whi}")
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    x = grid.x
    sel = (x >= lo) & (x <= hi) if side == "+" else (x <= -lo) & (x >= -hi)
    fmax = np.max(np.abs(f))
    sel &= np.abs(f) > floor * fmax
    if np.count_nonzero(sel) < MIN_FIT_SAMPLES:
        raise InsufficientTailData(
            f"only {np.count_nonzero(sel)} samples above the noise floor in {window} ({side})"
        )
    r = np.abs(x[sel])
    y = np.log(np.abs(f[sel]))
    coef, res, *_ = np.polyfit(r, y, 1, full=True)
    sst = float(np.sum((y - y.mean()) ** 2))
    ssr = float(res[0]) if len(res) else 0.0
    r2 = 1.0 if sst == 0 else max(0.0, min(1.0, 1.0 - ssr / sst))
    return DecayFit(
        slope=float(-coef[0]),
        intercept=float(coef[1]),
        window=(float(lo), float(hi)),
        side=side,
        r_squared=r2,
        n_points_used=int(np.count_nonzero(sel)),
    )


def sobolev_norm(f, grid: GridSpec, s: float = 3.0) -> float:
    """``(2L sum_k (1 + k^2)^s |c_k|^2)^(1/2)`` with ``c_k`` the Fourier coefficients."""
    f = grid.check(f)
    c = np.abs(grid.rfft(f) / grid.n_points)
    scale = np.max(c)
    if scale == 0:
        return 0.0
    c = (c / scale) ** 2  # scaled so huge fields do not overflow
    c[1:-1] *= 2.0  # conjugate modes
    with np.errstate(over="ignore"):
        return float(scale * np.sqrt(2.0 * grid.L * np.sum((1.0 + grid.k**2) ** s * c)))


def solution_bound(state: FieldState, s: float = 3.0) -> float:
    """``||u||_{H^s} + ||v||_{H^s}``."""
    return sobolev_norm(state.u, state.grid, s) + sobolev_norm(state.v, state.grid, s)
