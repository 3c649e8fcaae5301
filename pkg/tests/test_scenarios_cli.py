import dataclasses
import json

import numpy as np
import pytest

from twocomp_ch import cli
from twocomp_ch.errors import ConfigurationError
from twocomp_ch.scenarios import (
    SCENARIOS,
    RunConfig,
    apply_overrides,
    build_initial,
    config_from_dict,
    load_config,
    read_snapshot,
    run_experiment,
    scenario_config,
    write_snapshot,
)
from twocomp_ch.decay import fit_decay_index

SMALL = dict(L=50.0, n_points=512, dt=0.01, t_end=0.05, snapshot_every=2)


def write_config(path, **kw):
    path.write_text(json.dumps(dict(SMALL, **kw)))
    return path


def test_scenarios_list(capsys):
    assert cli.main(["scenarios", "list"]) == 0
    out = capsys.readouterr().out
    for name in SCENARIOS:
        assert name in out


def test_run_writes_outputs(tmp_path):
    cfg = write_config(tmp_path / "c.json", name="g")
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["termination"] == "completed" and manifest["n_steps"] == 5
    assert set(manifest["config"]) == {f.name for f in dataclasses.fields(RunConfig)}
    header = (out / "timeseries.csv").read_text().splitlines()[0].split(",")
    assert header[:2] == ["t", "step"] and "fit_u_slope" in header
    assert len((out / "timeseries.csv").read_text().splitlines()) == 1 + 4  # steps 0, 2, 4, 5
    assert sorted(p.name for p in (out / "snapshots").iterdir())[0] == "snap_0000.csv"


def test_output_root_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("TWOCOMP_CH_OUT", str(tmp_path / "root"))
    cfg = write_config(tmp_path / "c.json", name="envrun", write_snapshots=False)
    assert cli.main(["run", "--config", str(cfg)]) == 0
    assert (tmp_path / "root" / "envrun" / "manifest.json").exists()


def test_manifest_rerun_is_bitwise_identical(tmp_path):
    cfg = write_config(tmp_path / "c.json", kind="compact_bump", width=2.0, v_amplitude=0.5, n_chars=8)
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", "--config", str(cfg), "--out", str(a)]) == 0
    assert cli.main(["emit", "--manifest", str(a / "manifest.json"), "--out", str(b)]) == 0
    files = json.loads((a / "manifest.json").read_text())["files"]
    assert "E_plus" in (a / "timeseries.csv").read_text().splitlines()[0]
    for name in files + ["manifest.json"]:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_snapshot_round_trip(tmp_path):
    cfg = scenario_config("gaussian", **SMALL)
    s = build_initial(cfg)
    write_snapshot(tmp_path / "s.csv", s)
    snap = read_snapshot(tmp_path / "s.csv")
    assert np.array_equal(snap["u"], s.u) and np.array_equal(snap["m"], s.m)
    again = build_initial(apply_overrides(cfg, {"kind": "from_file", "file": str(tmp_path / "s.csv")}))
    assert np.array_equal(again.u, s.u) and np.array_equal(again.v, s.v)
    assert np.array_equal(again.n, s.n)


def test_from_file_on_wrong_grid(tmp_path):
    s = build_initial(scenario_config("gaussian", **SMALL))
    write_snapshot(tmp_path / "s.csv", s)
    with pytest.raises(ConfigurationError):
        build_initial(RunConfig(kind="from_file", file=str(tmp_path / "s.csv"), L=50.0, n_points=1024))


@pytest.mark.parametrize(
    "bad",
    [
        dict(kind="sawtooth"),
        dict(n_points=7),
        dict(dt=-1.0),
        dict(width=0.0),
        dict(colour="red"),
        dict(kind="from_file"),
        dict(kind="compact_bump", width=20.0),
        dict(fit_hi=40.0),
    ],
)
def test_config_errors_exit_1(tmp_path, bad):
    cfg = write_config(tmp_path / "c.json", **bad)
    assert cli.main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1


def test_missing_config_exits_1(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "nope.json")]) == 1
    assert cli.main(["emit", "--manifest", str(tmp_path / "nope.json")]) == 1


def test_overrides_and_flags(tmp_path):
    cfg = write_config(tmp_path / "c.json", name="o")
    out = tmp_path / "o"
    code = cli.main(
        ["run", "--config", str(cfg), "--out", str(out), "--override", "t_end=0.02", "--amplitude", "0.5", "--write-snapshots", "false"]
    )
    assert code == 0
    conf = json.loads((out / "manifest.json").read_text())["config"]
    assert conf["t_end"] == 0.02 and conf["amplitude"] == 0.5 and conf["write_snapshots"] is False
    assert cli.main(["run", "--config", str(cfg), "--override", "bogus=1"]) == 1
    assert cli.main(["run", "--config", str(cfg), "--override", "novalue"]) == 1


def test_blow_up_exit_code(tmp_path):
    cfg = write_config(tmp_path / "c.json", dt=0.5, t_end=1.0, write_snapshots=False)
    out = tmp_path / "o"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out)]) == 2
    assert json.loads((out / "manifest.json").read_text())["termination"] == "blow-up-suspected"


def test_overflow_exit_code(tmp_path):
    cfg = write_config(
        tmp_path / "c.json", amplitude=1e160, dt=1e-300, t_end=1e-299, cfl_safety=1.0, max_gradient=1e300,
        write_snapshots=False,
    )
    assert run_experiment(load_config(cfg), tmp_path / "o") == 3


def test_zero_scenario_stays_zero(tmp_path):
    cfg = scenario_config("zero", **SMALL, write_snapshots=False)
    assert run_experiment(cfg, tmp_path) == 0
    rows = (tmp_path / "timeseries.csv").read_text().splitlines()
    header = rows[0].split(",")
    last = dict(zip(header, rows[-1].split(",")))
    assert float(last["sup_u"]) == 0.0 and float(last["bound_H3"]) == 0.0


def test_exp_tail_with_lam_puts_tail_on_momentum():
    s = build_initial(scenario_config("thm31", n_points=2048))
    assert fit_decay_index(s.m, s.grid, (7.0, 10.0)).slope == pytest.approx(2.0, abs=0.02)
    assert fit_decay_index(s.u, s.grid, (7.0, 25.0)).slope == pytest.approx(1.0, abs=0.02)


def test_exp_tail_velocity():
    s = build_initial(scenario_config("thm22", n_points=2048))
    for f in (s.u, s.v, s.u_x, s.v_x):
        assert fit_decay_index(f, s.grid, (7.0, 25.0)).slope == pytest.approx(0.5, abs=0.01)


def test_manifest_config_round_trip():
    cfg = scenario_config("thm41")
    assert config_from_dict(cfg.to_dict()) == cfg


def test_unknown_scenario():
    with pytest.raises(ConfigurationError):
        scenario_config("nope")
