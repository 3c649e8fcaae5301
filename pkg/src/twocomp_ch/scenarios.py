"""Scenario configuration, initial data, diagnostics records and file output.

Output layout of one run (under ``$TWOCOMP_CH_OUT``, default ``./out``)::

    <name>/manifest.json      config echo, version, platform, termination
    <name>/timeseries.csv     one row of scalar diagnostics per snapshot
    <name>/snapshots/snap_NNNN.csv   columns x,u,v,m,n
"""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import os
import platform
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .characteristics import (
    seed_characteristics,
    sign_census,
    tail_functionals,
    transport_residual,
    product_residual,
)
from .decay import WeightSpec, fit_decay_index, solution_bound, weighted_p_norm, weighted_sup_norm
from .errors import ConfigurationError, InsufficientTailData, TwoCompError
from .green import green_convolve
from .grid import FieldState, GridSpec, make_grid, state_from_uv
from .integrator import BLOW_UP, COMPLETED, OVERFLOW, StepControl, kernel_for, run

__all__ = [
    "RunConfig",
    "SnapshotRecord",
    "KINDS",
    "SCENARIOS",
    "OUTPUT_ENV",
    "build_initial",
    "compact_support",
    "config_from_dict",
    "load_config",
    "apply_overrides",
    "make_observer",
    "run_experiment",
    "read_snapshot",
    "write_snapshot",
    "EXIT_CODES",
]

log = logging.getLogger(__name__)

OUTPUT_ENV = "TWOCOMP_CH_OUT"
KINDS = ("gaussian", "exp_tail", "compact_bump", "ch_reduction", "forq_reduction", "from_file")
EXIT_CODES = {COMPLETED: 0, BLOW_UP: 2, OVERFLOW: 3}
EXIT_CONFIG = 1


@dataclass
class RunConfig:
    """Flat experiment configuration; every field is a config-file key.

    ``v_*`` parameters default to the matching ``u`` parameter.  For
    ``exp_tail``, ``lam = None`` puts the ``exp(-theta |x|)`` tail on u and v;
    a number puts an ``exp(-(1 + lam) |x|)`` tail on m and n instead.
    """

    name: str = "run"
    # grid
    L: float = 50.0
    n_points: int = 8192
    dealias: bool = True
    # initial condition
    kind: str = "gaussian"
    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    v_amplitude: Optional[float] = None
    v_center: Optional[float] = None
    v_width: Optional[float] = None
    theta: float = 0.5
    lam: Optional[float] = None
    file: Optional[str] = None
    perturbation: float = 0.0
    seed: int = 0
    # step control
    dt: float = 2e-4
    t_end: float = 1.0
    cfl_safety: float = 0.3
    max_gradient: float = 1e3
    snapshot_every: int = 1250
    # diagnostics
    weight_theta: float = 0.5
    weight_N: int = 10
    p_exponent: int = 2
    fit_lo: float = 7.0
    fit_hi: float = 25.0
    momentum_fit_hi: float = 25.0
    n_chars: int = 32
    # output
    output_dir: Optional[str] = None
    write_snapshots: bool = True
    decimate: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unsupported kind {self.kind!r}; choose from {KINDS}")
        for key in ("width", "v_width"):
            val = getattr(self, key)
            if val is not None and not val > 0:
                raise ConfigurationError(f"{key} must be positive, got {val!r}")
        if self.kind == "exp_tail" and self.lam is None and not 0.0 < self.theta < 1.0:
            raise ConfigurationError(f"theta must lie in (0, 1), got {self.theta!r}")
        if self.lam is not None and self.lam < 0:
            raise ConfigurationError(f"lam must be >= 0, got {self.lam!r}")
        if self.kind == "from_file" and not self.file:
            raise ConfigurationError("kind 'from_file' needs a 'file' path")
        if self.decimate < 1 or self.n_chars < 1:
            raise ConfigurationError("decimate and n_chars must be >= 1")
        if self.kind == "compact_bump":
            a, b = compact_support(self)
            if not (-self.L / 4 < a and b < self.L / 4):
                raise ConfigurationError(
                    f"compact support [{a}, {b}] must lie inside (-L/4, L/4) = ({-self.L / 4}, {self.L / 4})"
                )
        for hi in (self.fit_hi, self.momentum_fit_hi):
            if not 0.0 <= self.fit_lo < hi <= 0.5 * self.L:
                raise ConfigurationError(
                    f"fit window ({self.fit_lo}, {hi}) must satisfy 0 <= lo < hi <= L/2 = {0.5 * self.L}"
                )
        # grid and step parameters are checked by their own types
        make_grid(self.L, self.n_points)
        self.step_control()

    @property
    def va(self):
        return self.amplitude if self.v_amplitude is None else self.v_amplitude

    @property
    def vc(self):
        return self.center if self.v_center is None else self.v_center

    @property
    def vw(self):
        return self.width if self.v_width is None else self.v_width

    @property
    def is_compact(self) -> bool:
        return self.kind == "compact_bump"

    def grid(self) -> GridSpec:
        return make_grid(self.L, self.n_points, self.dealias)

    def step_control(self) -> StepControl:
        return StepControl(
            dt=self.dt,
            t_end=self.t_end,
            cfl_safety=self.cfl_safety,
            max_gradient=self.max_gradient,
            snapshot_every=self.snapshot_every,
        )

    def weight(self) -> WeightSpec:
        return WeightSpec(theta=self.weight_theta, N=self.weight_N, lam=self.lam or 0.0, p_exponent=self.p_exponent)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def config_from_dict(data: dict) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)


def load_config(path) -> RunConfig:
    with open(path) as fh:
        data = json.load(fh)
    if "config" in data and isinstance(data["config"], dict):  # a manifest
        data = data["config"]
    return config_from_dict(data)


def _coerce(name, text):
    ftype = {f.name: f.type for f in fields(RunConfig)}[name]
    if text in ("null", "None", ""):
        return None
    if "bool" in str(ftype):
        if text.lower() in ("1", "true", "yes"):
            return True
        if text.lower() in ("0", "false", "no"):
            return False
        raise ConfigurationError(f"{name} expects a boolean, got {text!r}")
    if "int" in str(ftype):
        return int(text)
    if "float" in str(ftype):
        return float(text)
    return text


def apply_overrides(config: RunConfig, overrides) -> RunConfig:
    """Apply ``key=value`` strings (or a dict of already typed values)."""
    data = config.to_dict()
    if isinstance(overrides, dict):
        items = overrides.items()
    else:
        items = []
        for item in overrides:
            if "=" not in item:
                raise ConfigurationError(f"override {item!r} is not key=value")
            key, text = item.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in data:
                raise ConfigurationError(f"unknown config key {key!r}")
            items.append((key, _coerce(key, text.strip())))
    for key, val in items:
        if key not in data:
            raise ConfigurationError(f"unknown config key {key!r}")
        data[key] = val
    return config_from_dict(data)


# ---------------------------------------------------------------- initial data


def bump(x, amplitude, center, width):
    """``A exp(-1 / (1 - r^2))`` for ``|r| < 1`` with ``r = (x - c)/w``; zero elsewhere."""
    r = (np.asarray(x) - center) / width
    out = np.zeros_like(r, dtype=float)
    inside = np.abs(r) < 1.0
    out[inside] = amplitude * np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


def compact_support(config: RunConfig):
    a = min(config.center - config.width, config.vc - config.vw)
    b = max(config.center + config.width, config.vc + config.vw)
    return a, b


def _perturbation(x, config):
    rng = np.random.default_rng(config.seed)
    amps = rng.standard_normal(8)
    centers = rng.uniform(-5.0, 5.0, 8)
    return config.perturbation * sum(a * np.exp(-((x - c) ** 2)) for a, c in zip(amps, centers))


def build_initial(config: RunConfig, grid: Optional[GridSpec] = None) -> FieldState:
    grid = grid or config.grid()
    x = grid.x
    kind = config.kind
    A, c, w = config.amplitude, config.center, config.width
    if kind == "gaussian":
        u = A * np.exp(-(((x - c) / w) ** 2))
        v = config.va * np.exp(-(((x - config.vc) / config.vw) ** 2))
    elif kind == "exp_tail":
        if config.lam is None:
            u = A * np.exp(-config.theta * np.sqrt((x - c) ** 2 + 1.0))
            v = config.va * np.exp(-config.theta * np.sqrt((x - config.vc) ** 2 + 1.0))
        else:
            rate = 1.0 + config.lam
            kernel = kernel_for(grid)
            u = green_convolve(A * np.exp(-rate * np.sqrt((x - c) ** 2 + 1.0)), kernel)
            v = green_convolve(config.va * np.exp(-rate * np.sqrt((x - config.vc) ** 2 + 1.0)), kernel)
    elif kind == "compact_bump":
        kernel = kernel_for(grid)
        u = green_convolve(bump(x, A, c, w), kernel)
        v = green_convolve(bump(x, config.va, config.vc, config.vw), kernel)
    elif kind == "ch_reduction":
        u = A * np.exp(-(((x - c) / w) ** 2))
        v = np.full_like(x, 2.0)
    elif kind == "forq_reduction":
        u = A * np.exp(-(((x - c) / w) ** 2))
        v = u.copy()
    elif kind == "from_file":
        snap = read_snapshot(config.file)
        if len(snap["x"]) != grid.n_points or not np.allclose(snap["x"], x, rtol=0, atol=1e-12 * grid.L):
            raise ConfigurationError(f"snapshot {config.file} does not live on the configured grid")
        u, v = snap["u"], snap["v"]
    else:  # pragma: no cover - validate() rejects this
        raise ConfigurationError(f"unsupported kind {kind!r}")
    if config.perturbation:
        p = _perturbation(x, config)
        u = u + p
        if kind == "forq_reduction":
            v = u.copy()
        elif kind != "ch_reduction":
            v = v + p
    return state_from_uv(u, v, grid, 0.0)


# ------------------------------------------------------------------ diagnostics


@dataclass
class SnapshotRecord:
    t: float
    scalars: dict
    x: Optional[np.ndarray] = None
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    m: Optional[np.ndarray] = None
    n: Optional[np.ndarray] = None


def _fit_columns(prefix, f, grid, window):
    try:
        fit = fit_decay_index(f, grid, window, "+")
        return {f"{prefix}_slope": fit.slope, f"{prefix}_r2": fit.r_squared}
    except InsufficientTailData:
        # no usable tail (e.g. zero data)
        return {f"{prefix}_slope": 0.0, f"{prefix}_r2": 0.0}


def make_observer(config: RunConfig):
    """Observer computing the scalar diagnostics of one snapshot."""
    weight = config.weight()
    lam = config.lam or 0.0
    window = (config.fit_lo, config.fit_hi)
    m_window = (config.fit_lo, config.momentum_fit_hi)

    def observe(state: FieldState, chars) -> dict:
        grid = state.grid
        out = {
            "sup_u": weighted_sup_norm(state.u, weight, grid),
            "sup_ux": weighted_sup_norm(state.u_x, weight, grid),
            "sup_v": weighted_sup_norm(state.v, weight, grid),
            "sup_vx": weighted_sup_norm(state.v_x, weight, grid),
            "pnorm_m": weighted_p_norm(state.m, config.p_exponent, lam, grid),
            "pnorm_n": weighted_p_norm(state.n, config.p_exponent, lam, grid),
        }
        out.update(_fit_columns("fit_u", state.u, grid, window))
        out.update(_fit_columns("fit_v", state.v, grid, window))
        out.update(_fit_columns("fit_m", state.m, grid, m_window))
        out.update(_fit_columns("fit_n", state.n, grid, m_window))
        min_m, min_n = sign_census(state)
        out.update(min_m=min_m, min_n=min_n, bound_H3=solution_bound(state))
        if chars is not None:
            tf = tail_functionals(state, chars.q[0], chars.q[-1])
            rm, rn = transport_residual(chars, state)
            pr = product_residual(chars, state)
            out.update(
                E_plus=tf.E_plus,
                E_minus=tf.E_minus,
                F_plus=tf.F_plus,
                F_minus=tf.F_minus,
                q_a=tf.q_a,
                q_b=tf.q_b,
                resid_m=_nanmax_abs(rm),
                resid_n=_nanmax_abs(rn),
                resid_prod=_nanmax_abs(pr),
            )
        return out

    return observe


def _nanmax_abs(a):
    a = np.abs(a[np.isfinite(a)])
    return float(a.max()) if a.size else 0.0


# ------------------------------------------------------------------------ files


def _fmt(val):
    if isinstance(val, (bool, np.bool_)):
        return str(int(val))
    if isinstance(val, (int, np.integer)):
        return str(int(val))
    return "%.17g" % float(val)


def write_snapshot(path, state: FieldState, decimate: int = 1):
    sl = slice(None, None, decimate)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "u", "v", "m", "n"])
        for row in zip(state.x[sl], state.u[sl], state.v[sl], state.m[sl], state.n[sl]):
            writer.writerow([_fmt(v) for v in row])


def read_snapshot(path) -> dict:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i].copy() for i, name in enumerate(["x", "u", "v", "m", "n"])}


def _write_timeseries(path, records):
    if not records:
        return
    columns = list(records[0])
    for rec in records[1:]:
        columns += [c for c in rec if c not in columns]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt(rec[c]) if c in rec else "nan" for c in columns])


def output_root(config: RunConfig) -> Path:
    if config.output_dir:
        return Path(config.output_dir)
    return Path(os.environ.get(OUTPUT_ENV, "./out")) / config.name


def manifest_dict(config: RunConfig, result=None, files=()) -> dict:
    return {
        "config": config.to_dict(),
        "code_version": __version__,
        "platform": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "machine": platform.machine(),
            "system": platform.system(),
        },
        "termination": None if result is None else result.reason,
        "message": "" if result is None else result.message,
        "n_steps": 0 if result is None else result.n_steps,
        "files": list(files),
    }


def simulate(config: RunConfig, keep_states=False):
    """Build the initial state and integrate; returns the ``RunResult``."""
    grid = config.grid()
    state = build_initial(config, grid)
    chars = None
    if config.is_compact:
        a, b = compact_support(config)
        chars = seed_characteristics(state, a, b, config.n_chars)
    return run(state, config.step_control(), [make_observer(config)], tracker=chars, keep_states=keep_states)


def run_experiment(config: RunConfig, out_dir=None) -> int:
    """Run ``config`` and write manifest, time series and snapshots.

    Returns the process exit status: 0 completed, 2 blow-up suspected,
    3 numerical overflow, 1 for configuration or I/O failures.
    """
    try:
        config.validate()
        root = Path(out_dir) if out_dir is not None else output_root(config)
        root.mkdir(parents=True, exist_ok=True)
        result = simulate(config, keep_states=config.write_snapshots)
    except (TwoCompError, OSError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}")
        return EXIT_CONFIG

    files = ["timeseries.csv"]
    try:
        _write_timeseries(root / "timeseries.csv", result.records)
        if config.write_snapshots:
            (root / "snapshots").mkdir(exist_ok=True)
            for i, state in enumerate(result.states):
                name = f"snapshots/snap_{i:04d}.csv"
                write_snapshot(root / name, state, config.decimate)
                files.append(name)
        with open(root / "manifest.json", "w") as fh:
            json.dump(manifest_dict(config, result, files), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(f"error: {exc}")
        return EXIT_CONFIG
    print(f"{config.name}: {result.reason} after {result.n_steps} steps -> {root}")
    return EXIT_CODES[result.reason]


# ------------------------------------------------------------------- library

SCENARIOS = {
    "zero": ("zero initial data", dict(kind="gaussian", amplitude=0.0, v_amplitude=0.0)),
    "gaussian": (
        "smooth Gaussian pair with sign-indefinite momenta",
        dict(kind="gaussian", amplitude=1.0, width=1.0, v_amplitude=0.5, v_center=1.0, v_width=1.5),
    ),
    "thm22": (
        "exp(-0.5|x|) tails on u0, v0: persistence of the decay index",
        dict(kind="exp_tail", theta=0.5, amplitude=1.0, v_amplitude=0.8, v_center=0.5, snapshot_every=1000),
    ),
    "thm31": (
        "exp(-2|x|) tails on m0, n0: momentum keeps index 2, velocity has index 1",
        dict(kind="exp_tail", lam=1.0, amplitude=1.0, v_amplitude=0.8, v_center=0.5, momentum_fit_hi=10.0),
    ),
    "thm41": (
        "compactly supported nonnegative momenta: exact exponential tails",
        dict(kind="compact_bump", amplitude=1.0, width=3.0, v_amplitude=0.8, v_center=0.5, v_width=2.25),
    ),
    "ch": ("v = 2: dispersionless Camassa-Holm reduction", dict(kind="ch_reduction", amplitude=0.5, width=1.0)),
    "forq": ("v = u: cubic (FORQ) reduction", dict(kind="forq_reduction", amplitude=0.5, width=1.0)),
}


def scenario_config(name: str, **overrides) -> RunConfig:
    if name not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    params = dict(SCENARIOS[name][1], name=name)
    params.update(overrides)
    return RunConfig(**params)
