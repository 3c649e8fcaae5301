"""The nonlocal operator (1 - d^2/dx^2)^{-1} on the torus.

On the line its kernel is ``exp(-|x|)/2``; on the torus of half period ``L``
the exact inverse is the periodic kernel ``cosh(L - |x|) / (2 sinh L)``.
Two backends apply it: Fourier multipliers (default) and direct O(N^2)
quadrature against the sampled periodic kernel, kept as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionError, DomainError
from .grid import GridSpec

__all__ = [
    "GreenKernel",
    "periodic_kernel",
    "periodic_kernel_dx",
    "green_convolve",
    "green_convolve_dx",
    "second_derivative_identity",
    "capped_weight",
    "weighted_kernel_bound",
]


def periodic_kernel(z, L):
    """``cosh(L - |z|) / (2 sinh L)`` for z wrapped into [-L, L]."""
    z = np.abs(np.asarray(z, dtype=float))
    # stable form of cosh(L-z)/(2 sinh L) for large L
    return 0.5 * (np.exp(-z) + np.exp(z - 2.0 * L)) / (1.0 - np.exp(-2.0 * L))


def periodic_kernel_dx(z, L):
    z = np.asarray(z, dtype=float)
    a = np.abs(z)
    return -0.5 * np.sign(z) * (np.exp(-a) - np.exp(a - 2.0 * L)) / (1.0 - np.exp(-2.0 * L))


@dataclass(frozen=True, eq=False)
class GreenKernel:
    """Green's kernel of ``1 - d^2/dx^2`` bound to a grid.

    ``backend`` is ``"fourier"`` or ``"quadrature"``.
    """

    grid: GridSpec
    backend: str = "fourier"

    def __post_init__(self):
        if self.backend not in ("fourier", "quadrature"):
            raise ValueError(f"unknown backend {self.backend!r}")

    @cached_property
    def multiplier(self) -> np.ndarray:
        return 1.0 / (1.0 + self.grid.k**2)

    @cached_property
    def multiplier_dx(self) -> np.ndarray:
        return self.grid._ik * self.multiplier

    @cached_property
    def sampled(self) -> np.ndarray:
        """G_per at the node offsets ``x_i - x_0``, wrapped into [-L, L)."""
        return periodic_kernel(self._offsets, self.grid.L)

    @cached_property
    def sampled_dx(self) -> np.ndarray:
        return periodic_kernel_dx(self._offsets, self.grid.L)

    @cached_property
    def _offsets(self) -> np.ndarray:
        n = self.grid.n_points
        j = np.arange(n)
        return np.where(j <= n // 2, j, j - n) * self.grid.dx

    def check(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.grid.n_points,):
            raise DimensionError(f"array of shape {f.shape} is not on the kernel grid ({self.grid.n_points},)")
        return f

    def apply(self, f, g=None) -> np.ndarray:
        """``G * f + dG * g`` with one inverse transform."""
        grid = self.grid
        fh = grid.rfft(self.check(f)) * self.multiplier
        if g is not None:
            fh = fh + grid.rfft(self.check(g)) * self.multiplier_dx
        return grid.irfft(fh)


def _circulant_apply(kernel_row, f, dx, chunk=1024):
    n = len(f)
    out = np.empty(n)
    j = np.arange(n)
    for start in range(0, n, chunk):
        i = np.arange(start, min(start + chunk, n))
        out[i] = kernel_row[(i[:, None] - j[None, :]) % n] @ f
    return dx * out


def green_convolve(f, kernel: GreenKernel) -> np.ndarray:
    """``(1 - d^2/dx^2)^{-1} f``, i.e. ``G_per * f``."""
    f = kernel.check(f)
    if kernel.backend == "fourier":
        return kernel.apply(f)
    dx = kernel.grid.dx
    # trapezoid plus the Euler-Maclaurin term of the kernel's slope jump at y = x
    return _circulant_apply(kernel.sampled, f, dx) - dx**2 / 12.0 * f


def green_convolve_dx(f, kernel: GreenKernel) -> np.ndarray:
    """``d/dx (G_per * f)``."""
    f = kernel.check(f)
    if kernel.backend == "fourier":
        grid = kernel.grid
        return grid.irfft(grid.rfft(f) * kernel.multiplier_dx)
    # dG is odd with a unit jump at 0; the symmetric node value 0 is its mean
    row = kernel.sampled_dx.copy()
    row[0] = 0.0
    dx = kernel.grid.dx
    # slope jump of the integrand is f'(x); fourth-order differences supply it
    fp = (8.0 * (np.roll(f, -1) - np.roll(f, 1)) - (np.roll(f, -2) - np.roll(f, 2))) / (12.0 * dx)
    return _circulant_apply(row, f, dx) + dx**2 / 12.0 * fp


def second_derivative_identity(f, kernel: GreenKernel) -> np.ndarray:
    """``d^2/dx^2 (G * f)`` evaluated as ``G * f - f``."""
    f = kernel.check(f)
    return green_convolve(f, kernel) - f


def capped_weight(x, theta, N):
    """``exp(theta * min(|x|, N))``: bounded, even, and |w'| <= w."""
    return np.exp(theta * np.minimum(np.abs(x), N))


def weighted_kernel_bound(theta: float, N: int, grid: GridSpec) -> float:
    """max_x w(x) * sum_y exp(-|x - y|) / w(y) dy on the grid nodes.

    The line kernel (not its periodization) is used.  The double sum is
    split at y = x into two running sums, so the cost is O(n).
    """
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    x = grid.x
    inv_w = 1.0 / capped_weight(x, theta, N)
    # exponents are offset by the grid ends so e^{+-x} stays representable
    left = np.cumsum(np.exp(x - x[-1]) * inv_w)  # y <= x_i
    right = np.cumsum((np.exp(x[0] - x) * inv_w)[::-1])[::-1]  # y >= x_i
    total = np.exp(x[-1] - x) * left + np.exp(x - x[0]) * right - inv_w
    return float(np.max(capped_weight(x, theta, N) * total) * grid.dx)


def _weighted_kernel_bound_direct(theta, N, grid):
    x = grid.x
    w = capped_weight(x, theta, N)
    vals = np.exp(-np.abs(x[:, None] - x[None, :])) @ (1.0 / w)
    return float(np.max(w * vals) * grid.dx)
