"""Faster-decaying momenta do not make faster-decaying velocities.

When m0, n0 decay like exp(-2|x|) the momenta keep that index, but u = G*m
is dominated by the kernel exp(-|x|)/2 and decays only with index 1.  The
momentum fit uses a short window: beyond |x| ~ 10 the momenta sit at the
roundoff floor of the second derivative.
"""
from twocomp_ch import StepControl, fit_decay_index, run
from twocomp_ch.scenarios import build_initial, scenario_config

cfg = scenario_config("thm31", n_points=4096, dt=5e-4)
final = run(build_initial(cfg), StepControl(cfg.dt, 1.0)).final_state
for name, window in (("m", (7, 10)), ("n", (7, 10)), ("u", (7, 25)), ("v", (7, 25))):
    for side in "+-":
        fit = fit_decay_index(getattr(final, name), final.grid, window, side)
        print(f"{name} ({side} tail, window {window}): index {fit.slope:.4f}  r^2 {fit.r_squared:.6f}")
