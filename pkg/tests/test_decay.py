import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twocomp_ch import make_grid, state_from_uv
from twocomp_ch.decay import (
    WeightSpec,
    fit_decay_index,
    sobolev_norm,
    solution_bound,
    weighted_p_norm,
    weighted_sup_norm,
)
from twocomp_ch.errors import DomainError, InsufficientTailData, WeightOverflowError

GRID = make_grid(50.0, 4096)


@pytest.mark.parametrize(
    "kw", [dict(theta=0.0), dict(theta=1.0), dict(N=0), dict(lam=-1.0), dict(p_exponent=3), dict(p_exponent=1)]
)
def test_weight_spec_validation(kw):
    with pytest.raises(DomainError):
        WeightSpec(**kw)


def test_weight_spec_accepts_even_and_inf():
    assert WeightSpec(p_exponent=4).p_exponent == 4
    assert WeightSpec().p_exponent == np.inf


def test_weighted_sup_norm_of_matching_tail():
    # exp(-theta|x|) * exp(theta min(|x|, N)) peaks at 1 wherever |x| <= N
    w = WeightSpec(theta=0.5, N=10)
    f = np.exp(-0.5 * np.abs(GRID.x))
    assert weighted_sup_norm(f, w, GRID) == pytest.approx(1.0, abs=1e-12)


def test_p_norm_closed_forms():
    f = np.exp(-2.0 * np.abs(GRID.x))
    half = 0.5 * GRID.L
    # lam = 0: |f e^{|x|}|^2 = e^{-2|x|}, integral over the window = 1 - e^{-L}
    assert weighted_p_norm(f, 2, 0.0, GRID) == pytest.approx(np.sqrt(1 - np.exp(-2 * half)), rel=1e-4)
    # lam = 1: the weight cancels the decay exactly, integrand is 1
    assert weighted_p_norm(f, 2, 1.0, GRID) == pytest.approx(np.sqrt(2 * half), rel=1e-12)
    assert weighted_p_norm(f, np.inf, 1.0, GRID) == pytest.approx(1.0)


def test_p_norm_errors():
    f = np.ones(GRID.n_points)
    with pytest.raises(DomainError):
        weighted_p_norm(f, 3, 0.0, GRID)
    with pytest.raises(DomainError):
        weighted_p_norm(f, 2, -0.5, GRID)
    with pytest.raises(WeightOverflowError):
        weighted_p_norm(np.ones(1024), 2, 1.0, make_grid(800.0, 1024))
    assert weighted_p_norm(np.zeros(GRID.n_points), 2, 0.0, GRID) == 0.0


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(0.1, 1.5), amp=st.floats(0.01, 100.0), side=st.sampled_from("+-"))
def test_fit_recovers_exponential_rate(theta, amp, side):
    f = amp * np.exp(-theta * np.sqrt(GRID.x**2 + 1.0))
    fit = fit_decay_index(f, GRID, (7.0, 25.0), side)
    assert fit.slope == pytest.approx(theta, abs=5e-3)
    assert fit.r_squared > 0.999
    assert fit.side == side and fit.window == (7.0, 25.0)


def test_fit_ignores_noise_floor():
    f = np.exp(-3.0 * np.abs(GRID.x))  # reaches 1e-13 near |x| = 10
    fit = fit_decay_index(f, GRID, (5.0, 25.0))
    assert fit.slope == pytest.approx(3.0, rel=1e-6)
    assert fit.n_points_used < np.count_nonzero((GRID.x >= 5) & (GRID.x <= 25))


def test_fit_insufficient_data():
    with pytest.raises(InsufficientTailData):
        fit_decay_index(np.exp(-40.0 * np.abs(GRID.x)), GRID, (7.0, 25.0))


@pytest.mark.parametrize("window", [(-1.0, 5.0), (7.0, 40.0), (10.0, 10.0)])
def test_fit_bad_window(window):
    with pytest.raises(DomainError):
        fit_decay_index(np.exp(-np.abs(GRID.x)), GRID, window)


def test_sobolev_norm_of_a_mode():
    g = make_grid(np.pi, 64)
    f = np.cos(3 * g.x)
    # ||cos 3x||_{L^2(-pi, pi)}^2 = pi
    assert sobolev_norm(f, g, 0) == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert sobolev_norm(f, g, 3) == pytest.approx(np.sqrt(np.pi * 10**3), rel=1e-12)
    assert sobolev_norm(np.ones(64), g, 3) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)


def test_solution_bound_sums_components():
    g = make_grid(np.pi, 64)
    s = state_from_uv(np.cos(g.x), 2 * np.cos(g.x), g)
    assert solution_bound(s) == pytest.approx(3 * sobolev_norm(np.cos(g.x), g), rel=1e-12)
