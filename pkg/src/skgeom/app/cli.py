"""Command line entry point: ``skgeom list | check | run | bound``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..verify import max_principle_bound
from .catalog import CatalogError, NormalizationError, list_catalog, load_prepotential
from .scan import EmptySampleError, GridSpecError
from .suite import FORMATS, ConfigError, RunConfig, render_summary, run_suites, write_reports


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=None, help="jet order of u (default 6)")
    p.add_argument("--seed", type=int, default=None, help="seed for samples and directions")
    p.add_argument("--tol-identity", type=float, default=None, help="tolerance for identities (1e-8)")
    p.add_argument("--tol-ineq", type=float, default=None, help="slack for inequalities (1e-6)")
    p.add_argument("--out", default=None, help="output directory (default ./out)")
    p.add_argument("--format", choices=FORMATS, default=None, help="report format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skgeom",
        description="Numerical checks of curvature and Yukawa estimates on horizontal slices.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log rejected sample points")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="show the prepotential catalog")

    check = sub.add_parser("check", help="run every suite on a catalog entry")
    check.add_argument("entry", help="catalog name")
    check.add_argument("--n", type=int, default=None, help="dimension (quadratic, quartic-perturbed)")
    check.add_argument("--c", type=float, default=None, help="cubic coefficient")
    check.add_argument("--points", type=int, default=20, help="random sample count")
    _add_run_flags(check)

    run = sub.add_parser("run", help="run a JSON configuration")
    run.add_argument("config", help="path to the config file")
    _add_run_flags(run)

    bound = sub.add_parser("bound", help="max(1, ((c2+c3)/c1)^(1/alpha))")
    for name in ("c1", "c2", "c3", "alpha"):
        bound.add_argument(name, type=float)
    return parser


def _apply_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    for attr, flag in (
        ("order", "order"),
        ("seed", "seed"),
        ("tol_identity", "tol_identity"),
        ("tol_ineq", "tol_ineq"),
        ("out_dir", "out"),
        ("format", "format"),
    ):
        v = getattr(args, flag)
        if v is not None:
            setattr(cfg, attr, v)
    cfg.validate()
    return cfg


def _execute(cfg: RunConfig) -> int:
    run = run_suites(cfg)
    report, _ = write_reports(run)
    sys.stdout.write(render_summary(run))
    print(f"report written to {report}")
    return run.exit_status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "list":
            for name, text in list_catalog():
                print(f"{name:18s} {text}")
            return 0
        if args.command == "bound":
            print(repr(max_principle_bound(args.c1, args.c2, args.c3, args.alpha)))
            return 0
        if args.command == "check":
            source = {"name": args.entry}
            if args.n is not None:
                source["n"] = args.n
            if args.c is not None:
                source["c"] = args.c
            load_prepotential(source)  # fail early on a bad entry
            cfg = RunConfig(prepotential=source, sample={"kind": "random", "count": args.points})
            return _execute(_apply_flags(cfg, args))
        cfg = RunConfig.from_file(args.config)
        return _execute(_apply_flags(cfg, args))
    except (ConfigError, CatalogError, NormalizationError, GridSpecError, EmptySampleError, ValueError) as exc:
        print(f"skgeom: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
