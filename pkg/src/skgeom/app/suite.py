"""Run configuration, suite orchestration and report emission."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .. import verify
from ..jets import DEFAULT_ORDER
from ..verify import VerificationReport
from .catalog import CatalogEntry, load_prepotential
from .scan import ScanResult, domain_scan
from .siegel import SIEGEL_SIGN, SYMMETRY_TOL, lagrangian_basis, tau_from_basis

SCHEMA_VERSION = 1
SUITES = (
    "hodge-riemann",
    "horizontality",
    "theorem12",
    "yukawa-estimates",
    "ricci-crosscheck",
    "curvature-crossengine",
    "parallel-curvature",
    "siegel",
)
STRUCTURE_TOL = 1e-10  # flag relations, horizontality and tau symmetry
SIEGEL_RAY_RADII2 = (0.0, 0.5, 1.0, 1.5, 1.9)
FORMATS = ("json", "csv")


class ConfigError(ValueError):
    """Malformed run configuration; the message carries the location."""


def _locate(text: str | None, token: str) -> str:
    if not text:
        return ""
    pos = text.find(f'"{token}"')
    if pos < 0:
        return ""
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f" (line {line}, column {col})"


@dataclass
class RunConfig:
    prepotential: Any = "quadratic"
    sample: dict = field(default_factory=lambda: {"kind": "random", "count": 20})
    suites: list = field(default_factory=lambda: list(SUITES))
    seed: int = 0
    order: int = DEFAULT_ORDER
    tol_identity: float = verify.TOL_IDENTITY
    tol_ineq: float = verify.TOL_INEQUALITY
    out_dir: str = "out"
    format: str = "json"

    KEYS = ("schema_version", "prepotential", "sample", "suites", "seed", "order", "tolerances", "output")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], text: str | None = None) -> "RunConfig":
        if not isinstance(data, Mapping):
            raise ConfigError("configuration must be a JSON object")
        for key in data:
            if key not in cls.KEYS:
                raise ConfigError(f"unknown key {key!r}{_locate(text, key)}")
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r}{_locate(text, 'schema_version')}")
        cfg = cls()
        if "prepotential" in data:
            cfg.prepotential = data["prepotential"]
        if "sample" in data:
            if not isinstance(data["sample"], Mapping):
                raise ConfigError(f"'sample' must be an object{_locate(text, 'sample')}")
            cfg.sample = dict(data["sample"])
        if "suites" in data:
            suites = data["suites"]
            if suites == "all":
                suites = list(SUITES)
            if not isinstance(suites, list):
                raise ConfigError(f"'suites' must be a list or \"all\"{_locate(text, 'suites')}")
            for i, s in enumerate(suites):
                if s not in SUITES:
                    raise ConfigError(f"unknown suite {s!r} at suites[{i}]{_locate(text, str(s))}")
            cfg.suites = list(suites)
        for key in ("seed", "order"):
            if key in data:
                if not isinstance(data[key], int) or isinstance(data[key], bool) or data[key] < 0:
                    raise ConfigError(f"{key!r} must be a nonnegative integer{_locate(text, key)}")
                setattr(cfg, key, data[key])
        tols = data.get("tolerances", {})
        for key in tols:
            if key not in ("identity", "inequality"):
                raise ConfigError(f"unknown key 'tolerances.{key}'{_locate(text, key)}")
        cfg.tol_identity = float(tols.get("identity", cfg.tol_identity))
        cfg.tol_ineq = float(tols.get("inequality", cfg.tol_ineq))
        out = data.get("output", {})
        for key in out:
            if key not in ("dir", "format"):
                raise ConfigError(f"unknown key 'output.{key}'{_locate(text, key)}")
        cfg.out_dir = str(out.get("dir", cfg.out_dir))
        cfg.format = out.get("format", cfg.format)
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_mapping(data, text)

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            return cls.from_json(text)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from None

    def validate(self) -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.order < 3:
            raise ConfigError("jet order must be at least 3")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out_dir")  # where the report goes is not part of its content
        d["schema_version"] = SCHEMA_VERSION
        return _jsonable(d)


@dataclass
class SuiteResult:
    suite: str
    report: VerificationReport


@dataclass
class RunResult:
    config: RunConfig
    entry: CatalogEntry
    scan: ScanResult
    results: list[SuiteResult]

    @property
    def asserted_failures(self) -> list[SuiteResult]:
        return [r for r in self.results if r.report.asserted and not r.report.passed]

    @property
    def exit_status(self) -> int:
        return 0 if not self.asserted_failures else 1


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(float(x.real)), _jsonable(float(x.imag))]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def siegel_reports(entry: CatalogEntry, points: np.ndarray) -> list[VerificationReport]:
    """Symmetry and positivity of ``tau`` at the points, plus the ray degeneration."""
    sym, pos = [], []
    for z in points:
        tau = tau_from_basis(lagrangian_basis(z, entry))
        sym.append(-float(np.abs(tau - tau.T).max()))
        pos.append(float(np.linalg.eigvalsh((tau.imag + tau.imag.T) / 2).min()))
    ray = np.array([[math.sqrt(r2)] + [0.0] * (entry.n - 1) for r2 in SIEGEL_RAY_RADII2], dtype=complex)
    eigs = [float(np.linalg.eigvalsh(tau_from_basis(lagrangian_basis(z, entry)).imag).min()) for z in ray]
    drops = [a - b for a, b in zip(eigs, eigs[1:])]
    return [
        VerificationReport("siegel-symmetric", "tau = tau^T", points, np.array(sym), SYMMETRY_TOL),
        VerificationReport(
            "siegel-positive",
            "Im tau positive definite",
            points,
            np.array(pos),
            0.0,
            details={"sign": SIEGEL_SIGN},
        ),
        VerificationReport(
            "siegel-ray-degenerates",
            "min eig Im tau decreases toward |z|^2 = 2",
            ray[1:],
            np.array(drops),
            0.0,
            details={"radii_squared": list(SIEGEL_RAY_RADII2), "min_eig": eigs},
        ),
    ]


def run_suites(config: RunConfig, entry: CatalogEntry | None = None) -> RunResult:
    """Scan the domain and execute the configured suites (no file output)."""
    entry = entry or load_prepotential(config.prepotential)
    scan = domain_scan(entry, config.sample, seed=config.seed)
    pts, order = scan.accepted, config.order
    p = entry.prepotential
    out: list[SuiteResult] = []
    for suite in SUITES:
        if suite not in config.suites:
            continue
        if suite == "hodge-riemann":
            reps = list(verify.verify_hodge_riemann(p, pts, order, STRUCTURE_TOL).values())
        elif suite == "horizontality":
            reps = [verify.verify_horizontality(p, pts, order, STRUCTURE_TOL)]
        elif suite == "theorem12":
            reps = list(verify.verify_theorem12(p, pts, config.seed, order, config.tol_ineq).values())
        elif suite == "yukawa-estimates":
            reps = list(verify.verify_yukawa_estimates(p, pts, entry.complete, order, config.tol_ineq).values())
        elif suite == "ricci-crosscheck":
            reps = [verify.cross_check_ricci(p, pts, order, config.tol_identity)]
        elif suite == "curvature-crossengine":
            reps = [verify.verify_cross_engine(p, pts, order, config.tol_identity)]
        elif suite == "parallel-curvature":
            # parallel curvature is a property of the complex ball only
            asserted = entry.name == "quadratic"
            reps = [verify.verify_parallel_curvature(p, pts, order, config.tol_identity, asserted)]
        elif suite == "siegel":
            if entry.name != "quadratic":
                continue
            reps = siegel_reports(entry, pts)
        out += [SuiteResult(suite, r) for r in sorted(reps, key=lambda r: r.claim)]
    return RunResult(config, entry, scan, out)


def report_document(run: RunResult) -> dict:
    per_suite = []
    for r in run.results:
        rep = r.report
        per_suite.append(
            {
                "suite": r.suite,
                "claim": rep.claim,
                "paper_anchor": rep.anchor,
                "asserted": rep.asserted,
                "tolerance": rep.tolerance,
                "min_margin": rep.min_margin,
                "points": [
                    {"index": i, "z": _jsonable(z), "margin": _jsonable(m)}
                    for i, (z, m) in enumerate(zip(rep.points, rep.margins))
                ],
                "details": _jsonable(rep.details),
                "pass": rep.passed,
            }
        )
    summary = {
        "entry": run.entry.name,
        "n": run.entry.n,
        "complete": run.entry.complete,
        "seed": run.config.seed,
        "siegel_sign": SIEGEL_SIGN,
        "accepted_points": len(run.scan.accepted),
        "rejected_points": len(run.scan.rejected),
        "checks": len(run.results),
        "asserted_failures": [f"{r.suite}/{r.report.claim}" for r in run.asserted_failures],
        "pass": run.exit_status == 0,
    }
    return _jsonable(
        {
            "schema_version": SCHEMA_VERSION,
            "config_echo": run.config.echo(),
            "per_suite": per_suite,
            "summary": summary,
        }
    )


def render_json(run: RunResult) -> str:
    return json.dumps(report_document(run), indent=2, sort_keys=False) + "\n"


def render_csv(run: RunResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "claim", "asserted", "tolerance", "index", "z", "margin", "pass"])
    for r in run.results:
        rep = r.report
        for i, (z, m) in enumerate(zip(rep.points, rep.margins)):
            zs = " ".join(f"{float(c.real)!r}{float(c.imag):+}j" for c in np.atleast_1d(z))
            w.writerow([r.suite, rep.claim, rep.asserted, repr(rep.tolerance), i, zs, repr(float(m)), rep.passed])
    return buf.getvalue()


def render_summary(run: RunResult) -> str:
    rows = [("suite", "claim", "points", "min margin", "tol", "status")]
    for r in run.results:
        rep = r.report
        status = ("PASS" if rep.passed else "FAIL") if rep.asserted else "INFO"
        rows.append((r.suite, rep.claim, str(len(rep.margins)), f"{rep.min_margin:.3e}", f"{rep.tolerance:.0e}", status))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    head = (
        f"entry: {run.entry.describe()}  seed: {run.config.seed}  order: {run.config.order}\n"
        f"points: {len(run.scan.accepted)} accepted, {len(run.scan.rejected)} rejected\n\n"
    )
    verdict = "\nall asserted checks pass\n" if run.exit_status == 0 else (
        f"\n{len(run.asserted_failures)} asserted check(s) failed\n"
    )
    return head + "\n".join(lines) + "\n" + verdict


def write_reports(run: RunResult) -> tuple[Path, Path]:
    out = Path(run.config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = out / f"report.{run.config.format}"
    text = render_json(run) if run.config.format == "json" else render_csv(run)
    report.write_text(text)
    summary = out / "summary.txt"
    summary.write_text(render_summary(run))
    return report, summary


def run_suite(config: RunConfig) -> tuple[RunResult, int]:
    """Execute, write the report files and return the process exit status."""
    run = run_suites(config)
    write_reports(run)
    return run, run.exit_status
