"""Numerical laboratory for the dispersionless two-component Camassa-Holm-type system

    m_t + [m (uv - u_x v_x)]_x / 2 - m (u v_x - u_x v) / 2 = 0
    n_t + [n (uv - u_x v_x)]_x / 2 + n (u v_x - u_x v) / 2 = 0
    m = u - u_xx,  n = v - v_xx

on a wide periodic domain, with diagnostics for decay persistence, flow-map
identities and exponential tails of compactly supported momenta.
"""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .grid import FieldState, GridSpec, make_grid, spectral_derivative, state_from_uv, trig_interpolate
from .green import (
    GreenKernel,
    green_convolve,
    green_convolve_dx,
    second_derivative_identity,
    weighted_kernel_bound,
)
from .dynamics import RhsTerms, assemble_terms, momentum_rhs
from .integrator import RunResult, StepControl, run, step
from .characteristics import (
    CharacteristicSet,
    TailFunctionals,
    advance_characteristics,
    seed_characteristics,
    sign_census,
    tail_functionals,
    transport_residual,
)
from .decay import DecayFit, WeightSpec, fit_decay_index, solution_bound, weighted_p_norm, weighted_sup_norm
from .scenarios import RunConfig, build_initial, run_experiment
