"""Running an experiment to disk and reproducing it from its manifest.

The same thing from the shell:

    twocomp-ch run --scenario gaussian --n-points 1024 --t-end 0.2 --out out/demo
    twocomp-ch emit --manifest out/demo/manifest.json --out out/demo-rerun
"""
import filecmp
import json
import tempfile
from pathlib import Path

from twocomp_ch.scenarios import load_config, run_experiment, scenario_config

with tempfile.TemporaryDirectory() as tmp:
    first, second = Path(tmp) / "first", Path(tmp) / "second"
    cfg = scenario_config("gaussian", n_points=1024, dt=2e-3, t_end=0.2, snapshot_every=50)
    print("exit status:", run_experiment(cfg, first))
    manifest = json.loads((first / "manifest.json").read_text())
    print("termination:", manifest["termination"], "| files:", manifest["files"])
    print((first / "timeseries.csv").read_text().splitlines()[0][:100], "...")

    run_experiment(load_config(first / "manifest.json"), second)
    same = all(filecmp.cmp(first / f, second / f, shallow=False) for f in manifest["files"] + ["manifest.json"])
    print("rerun byte-identical:", same)
