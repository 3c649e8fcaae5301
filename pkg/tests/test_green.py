import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twocomp_ch import GreenKernel, make_grid, spectral_derivative
from twocomp_ch.errors import DimensionError, DomainError
from twocomp_ch.green import (
    _weighted_kernel_bound_direct,
    capped_weight,
    green_convolve,
    green_convolve_dx,
    periodic_kernel,
    second_derivative_identity,
    weighted_kernel_bound,
)


def test_periodic_kernel_closed_form():
    L = 3.0
    z = np.linspace(-L, L, 41)
    assert np.allclose(periodic_kernel(z, L), np.cosh(L - np.abs(z)) / (2 * np.sinh(L)), rtol=1e-14)


def test_periodic_kernel_is_the_periodized_line_kernel():
    L = 2.0
    z = np.linspace(-L, L, 17)
    images = sum(0.5 * np.exp(-np.abs(z + 2 * L * j)) for j in range(-40, 41))
    assert np.allclose(periodic_kernel(z, L), images, rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(j=st.integers(0, 256))
def test_fourier_modes_are_eigenfunctions(j):
    grid = make_grid(50.0, 512)
    k = np.pi * j / grid.L
    kern = GreenKernel(grid)
    for f in (np.cos(k * grid.x), np.sin(k * grid.x)):
        assert np.max(np.abs(green_convolve(f, kern) - f / (1 + k * k))) < 1e-13


def test_inverts_helmholtz(grid, smooth_pair):
    u, _ = smooth_pair
    m = u - spectral_derivative(u, grid, 2)
    kern = GreenKernel(grid)
    assert np.max(np.abs(green_convolve(m, kern) - u)) < 1e-12
    assert np.max(np.abs(green_convolve_dx(m, kern) - spectral_derivative(u, grid))) < 1e-12
    assert np.max(np.abs(second_derivative_identity(m, kern) - spectral_derivative(u, grid, 2))) < 1e-12


def test_apply_combines_both_kernels(grid, smooth_pair):
    f, g = smooth_pair
    kern = GreenKernel(grid)
    both = kern.apply(f, g)
    assert np.allclose(both, green_convolve(f, kern) + green_convolve_dx(g, kern), atol=1e-15)


def test_quadrature_backend_agrees_with_fourier():
    grid = make_grid(20.0, 2048)
    x = grid.x
    f = np.exp(-(x**2)) * np.cos(3 * x)
    four, quad = GreenKernel(grid), GreenKernel(grid, "quadrature")
    assert np.max(np.abs(green_convolve(f, four) - green_convolve(f, quad))) < 1e-6
    assert np.max(np.abs(green_convolve_dx(f, four) - green_convolve_dx(f, quad))) < 1e-6


def test_quadrature_error_is_second_order_free():
    # doubling n must shrink the quadrature error by much more than 4
    errs = []
    for n in (512, 1024):
        grid = make_grid(10.0, n)
        f = np.exp(-grid.x**2)
        errs.append(np.max(np.abs(green_convolve(f, GreenKernel(grid)) - green_convolve(f, GreenKernel(grid, "quadrature")))))
    assert errs[1] < errs[0] / 8


def test_wrong_shape_rejected(grid):
    with pytest.raises(DimensionError):
        green_convolve(np.ones(3), GreenKernel(grid))


def test_bad_backend():
    with pytest.raises(ValueError):
        GreenKernel(make_grid(1.0, 16), "direct")


def test_capped_weight_properties():
    x = np.linspace(-30, 30, 601)
    w = capped_weight(x, 0.5, 10)
    assert np.all(w >= 1.0) and w.max() == pytest.approx(np.exp(5.0))
    assert np.allclose(w, w[::-1], rtol=1e-14)


@pytest.mark.parametrize("theta", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("N", [1, 4, 12])
def test_kernel_bound_matches_direct_sum(theta, N):
    grid = make_grid(25.0, 1024)
    fast = weighted_kernel_bound(theta, N, grid)
    assert fast == pytest.approx(_weighted_kernel_bound_direct(theta, N, grid), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(theta=st.floats(0.01, 0.95), N=st.integers(1, 30))
def test_kernel_bound_below_constant(theta, N):
    grid = make_grid(50.0, 2048)
    val = weighted_kernel_bound(theta, N, grid)
    assert 1.0 < val <= 4.0 / (1.0 - theta)


def test_kernel_bound_small_theta_near_two():
    # with w ~ 1 the integral of exp(-|x - y|) is 2
    assert weighted_kernel_bound(1e-6, 5, make_grid(50.0, 8192)) == pytest.approx(2.0, rel=1e-4)


@pytest.mark.parametrize("theta, N", [(0.0, 5), (1.0, 5), (-0.2, 5), (0.5, 0)])
def test_kernel_bound_domain(theta, N):
    with pytest.raises(DomainError):
        weighted_kernel_bound(theta, N, make_grid(10.0, 64))
