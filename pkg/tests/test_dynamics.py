import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twocomp_ch import GreenKernel, make_grid, spectral_derivative, state_from_uv
from twocomp_ch.dynamics import assemble_terms, momentum_rhs, velocity_rhs
from twocomp_ch.errors import NumericalOverflowError
from twocomp_ch.oracles import ch_rhs

GRID = make_grid(20.0, 512)
KERNEL = GreenKernel(GRID)


def gaussians(params):
    x = GRID.x
    return sum(a * np.exp(-(((x - c) / w) ** 2)) for a, c, w in params)


bumps = st.lists(
    st.tuples(st.floats(-1.5, 1.5), st.floats(-4.0, 4.0), st.floats(0.7, 2.5)), min_size=1, max_size=3
)


def helmholtz(f):
    return f - spectral_derivative(f, GRID, 2)


def test_zero_state_is_stationary():
    z = np.zeros(GRID.n_points)
    u_t, v_t = velocity_rhs(state_from_uv(z, z, GRID), KERNEL)
    assert not u_t.any() and not v_t.any()


def test_W_derivative_is_M(smooth_pair):
    terms = assemble_terms(state_from_uv(*smooth_pair, GRID), KERNEL)
    assert np.max(np.abs(spectral_derivative(terms.W, GRID) - terms.M)) < 1e-12


@settings(max_examples=20, deadline=None)
@given(pu=bumps, pv=bumps)
def test_velocity_form_matches_momentum_form(pu, pv):
    s = state_from_uv(gaussians(pu), gaussians(pv), GRID)
    u_t, v_t = velocity_rhs(s, KERNEL)
    m_t, n_t = momentum_rhs(s)
    scale = 1.0 + np.max(np.abs(m_t)) + np.max(np.abs(n_t))
    assert np.max(np.abs(helmholtz(u_t) - m_t)) < 1e-10 * scale
    assert np.max(np.abs(helmholtz(v_t) - n_t)) < 1e-10 * scale


@settings(max_examples=20, deadline=None)
@given(pu=bumps, pv=bumps)
def test_swap_symmetry(pu, pv):
    s = state_from_uv(gaussians(pu), gaussians(pv), GRID)
    u_t, v_t = velocity_rhs(s, KERNEL)
    su_t, sv_t = velocity_rhs(s.swapped(), KERNEL)
    assert np.max(np.abs(su_t - v_t)) < 1e-13
    assert np.max(np.abs(sv_t - u_t)) < 1e-13


@settings(max_examples=15, deadline=None)
@given(pu=bumps, pv=bumps, shift=st.integers(-200, 200))
def test_translation_equivariance(pu, pv, shift):
    s = state_from_uv(gaussians(pu), gaussians(pv), GRID)
    u_t, v_t = velocity_rhs(s, KERNEL)
    su_t, sv_t = velocity_rhs(s.shifted(shift), KERNEL)
    assert np.max(np.abs(su_t - np.roll(u_t, shift))) < 1e-12
    assert np.max(np.abs(sv_t - np.roll(v_t, shift))) < 1e-12


@settings(max_examples=15, deadline=None)
@given(pu=bumps)
def test_ch_reduction_against_independent_solver(pu):
    u = gaussians(pu)
    u_t, v_t = velocity_rhs(state_from_uv(u, np.full_like(u, 2.0), GRID), KERNEL)
    assert np.max(np.abs(u_t - ch_rhs(u, GRID.L))) < 1e-12
    assert np.max(np.abs(v_t)) < 1e-14


@settings(max_examples=15, deadline=None)
@given(pu=bumps)
def test_equal_components_stay_equal_and_conserve_mass(pu):
    u = gaussians(pu)
    s = state_from_uv(u, u, GRID)
    u_t, v_t = velocity_rhs(s, KERNEL)
    assert np.array_equal(u_t, v_t)
    m_t, _ = momentum_rhs(s)
    assert abs(np.sum(m_t)) * GRID.dx < 1e-12 * (1 + np.max(np.abs(m_t)))


def test_quadrature_backend_rhs_agrees(smooth_pair):
    grid = make_grid(20.0, 1024)
    x = grid.x
    s = state_from_uv(np.exp(-(x**2)), 0.5 * np.exp(-((x - 1) ** 2)), grid)
    a = velocity_rhs(s, GreenKernel(grid))
    b = velocity_rhs(s, GreenKernel(grid, "quadrature"))
    assert np.max(np.abs(a[0] - b[0])) < 1e-5
    assert np.max(np.abs(a[1] - b[1])) < 1e-5


def test_overflow_names_the_term():
    x = GRID.x
    big = 1e120 * np.exp(-(x**2))
    with pytest.raises(NumericalOverflowError) as info:
        assemble_terms(state_from_uv(big, big, GRID), KERNEL)
    assert info.value.term in {"W", "S", "M", "F1", "F2", "H1", "H2"}


def test_dealiased_rhs_close_for_resolved_data(smooth_pair):
    g2 = make_grid(GRID.L, GRID.n_points, dealias=True)
    a = velocity_rhs(state_from_uv(*smooth_pair, GRID), KERNEL)
    b = velocity_rhs(state_from_uv(*smooth_pair, g2), GreenKernel(g2))
    assert np.max(np.abs(a[0] - b[0])) < 1e-12
