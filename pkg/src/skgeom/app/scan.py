"""Sample generation and validity filtering."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..geometry import OutOfDomainError, SingularMetricError, kahler_potential_and_metric
from ..periods import build_period_frame, symplectic_pair
from .catalog import CatalogEntry

log = logging.getLogger(__name__)

EK_MIN = 1e-6
H_EIG_MIN = 1e-8
GRID_KINDS = ("grid", "random", "ray", "points")


class EmptySampleError(RuntimeError):
    """No sample point survived the domain scan."""


class GridSpecError(ValueError):
    pass


@dataclass
class ScanResult:
    accepted: np.ndarray
    rejected: list[tuple[np.ndarray, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.accepted)


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise GridSpecError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _vector(v, n: int) -> np.ndarray:
    if n == 1 and not (isinstance(v, (list, tuple)) and len(v) == 1):
        v = [v]
    out = np.array([_complex(x) for x in v])
    if out.shape != (n,):
        raise GridSpecError(f"point {v!r} does not have {n} coordinates")
    return out


def _linspace(spec, name: str) -> np.ndarray:
    try:
        lo, hi, num = spec
    except (TypeError, ValueError):
        raise GridSpecError(f"{name} must be [lo, hi, count], got {spec!r}") from None
    return np.linspace(float(lo), float(hi), int(num))


def sample_points(entry: CatalogEntry, spec: Mapping[str, Any], seed: int = 0) -> np.ndarray:
    """Candidate points, shape ``(count, n)``, in a deterministic order.

    Grid kinds
    ----------
    ``grid``
        ``re`` and ``im`` as ``[lo, hi, count]``; the product grid is taken
        in every coordinate.
    ``random``
        ``count`` points uniform in the ball of radius ``radius`` (default
        0.95 of the entry radius), drawn from ``seed``.
    ``ray``
        ``direction`` (complex vector) scaled by each value in ``radii``.
    ``points``
        Explicit list of complex vectors.
    """
    n = entry.n
    kind = spec.get("kind", "random")
    if kind == "grid":
        re = _linspace(spec.get("re", [-1, 1, 5]), "re")
        im = _linspace(spec.get("im", [-1, 1, 5]), "im")
        axis = (re[:, None] + 1j * im[None, :]).ravel()
        mesh = np.meshgrid(*([axis] * n), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)
    if kind == "random":
        count = int(spec.get("count", 20))
        radius = float(spec.get("radius", 0.95 * entry.radius))
        rng = np.random.default_rng(int(spec.get("seed", seed)))
        v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        r = radius * rng.random(count) ** (1.0 / (2 * n))
        return v * r[:, None]
    if kind == "ray":
        d = _vector(spec.get("direction", [1.0] + [0.0] * (n - 1)), n)
        radii = np.asarray(spec.get("radii", [0.0, 0.5, 1.0]), dtype=float)
        return radii[:, None] * (d / np.linalg.norm(d))[None, :]
    if kind == "points":
        pts = [_vector(p, n) for p in spec.get("points", [])]
        return np.array(pts).reshape(len(pts), n)
    raise GridSpecError(f"unknown grid kind {kind!r} (known: {', '.join(GRID_KINDS)})")


def point_status(entry: CatalogEntry, z) -> str | None:
    """``None`` for a valid point, otherwise the rejection reason."""
    frame = build_period_frame(entry.prepotential.jet(z, 3))
    omega = frame.value()
    ek = -symplectic_pair(omega, omega.conj()).real
    if ek <= 0:
        return f"e^{{-K}} <= 0 ({ek:.6g})"
    if ek <= EK_MIN:
        return f"e^{{-K}} = {ek:.3e} below {EK_MIN:g}"
    try:
        h = kahler_potential_and_metric(frame).h
    except (OutOfDomainError, SingularMetricError) as exc:
        return str(exc)
    lam = float(np.linalg.eigvalsh((h + h.conj().T) / 2).min())
    if lam <= H_EIG_MIN:
        return f"min eig h = {lam:.3e} below {H_EIG_MIN:g}"
    return None


def domain_scan(entry: CatalogEntry, spec: Mapping[str, Any] | np.ndarray, seed: int = 0) -> ScanResult:
    """Keep the points where ``e^{-K} > 1e-6`` and ``h`` is positive definite.

    Raises
    ------
    EmptySampleError
        When every point is rejected.
    """
    if isinstance(spec, Mapping):
        candidates = sample_points(entry, spec, seed)
    else:
        candidates = np.asarray(spec, dtype=complex).reshape(-1, entry.n)
    accepted, rejected = [], []
    for z in candidates:
        reason = point_status(entry, z)
        if reason is None:
            accepted.append(z)
        else:
            log.info("rejected %s: %s", np.round(z, 6), reason)
            rejected.append((z, reason))
    if not accepted:
        raise EmptySampleError(
            f"no valid sample points for {entry.name}: {len(rejected)} rejected"
            + (f", first reason: {rejected[0][1]}" if rejected else "")
        )
    return ScanResult(np.array(accepted).reshape(-1, entry.n), rejected)
