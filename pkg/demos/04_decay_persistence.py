"""Exponential decay rates persist.

Initial data decaying like exp(-theta |x|) with theta < 1 keep the same
decay index for u, v and their slopes at later times.  The index is read off
a log-linear fit on the tail window 7 <= |x| <= 25.
"""
from twocomp_ch import StepControl, fit_decay_index, run
from twocomp_ch.scenarios import build_initial, scenario_config

cfg = scenario_config("thm22", n_points=4096, dt=5e-4)
result = run(build_initial(cfg), StepControl(cfg.dt, 1.0, snapshot_every=500), keep_states=True)

print("   t      u       v      u_x     v_x   (right tail)")
for s in result.states:
    idx = [fit_decay_index(f, s.grid, (7, 25)).slope for f in (s.u, s.v, s.u_x, s.v_x)]
    print(f"{s.t:5.2f} " + " ".join(f"{i:7.4f}" for i in idx))
