"""Batch verification through the same entry point the CLI uses.

Loads demos/configs/cubic.json, runs it twice into a temporary directory and
confirms the two machine-readable reports are byte-identical.
"""

import pathlib
import tempfile

from skgeom.app.suite import RunConfig, render_summary, run_suite

here = pathlib.Path(__file__).parent
with tempfile.TemporaryDirectory() as tmp:
    reports = []
    for k in range(2):
        cfg = RunConfig.from_file(here / "configs" / "cubic.json")
        cfg.out_dir = str(pathlib.Path(tmp) / f"run{k}")
        run, status = run_suite(cfg)
        reports.append((pathlib.Path(cfg.out_dir) / "report.json").read_bytes())
    print(render_summary(run))
    print("exit status", status, "| reports identical:", reports[0] == reports[1])
