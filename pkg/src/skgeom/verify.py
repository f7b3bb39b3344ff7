"""Pointwise checks of the curvature and Yukawa inequalities over sample sweeps.

Every check produces a :class:`VerificationReport` holding one signed margin
per sample point (negative means violated). A report passes when its smallest
margin is at least ``-tolerance``. Informational reports (``asserted=False``)
are recorded but never fail a run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .curvature import (
    STANDARD,
    christoffel_jet,
    covariant_derivative_curvature,
    kahler_curvature_generic,
    random_directions,
    ricci_from_curvature,
    strominger_curvature,
)
from .geometry import (
    MetricBundle,
    complex_laplacian,
    covariant_derivative_yukawa,
    gradient_norm,
    metric_bundle,
)
from .jets import DEFAULT_ORDER, Prepotential
from .periods import PeriodFrame, build_filtration, build_period_frame, check_hodge_riemann, check_horizontality

TOL_IDENTITY = 1e-8
TOL_INEQUALITY = 1e-6
DIRECTIONS_PER_POINT = 64


@dataclass
class VerificationReport:
    claim: str
    anchor: str
    points: np.ndarray
    margins: np.ndarray
    tolerance: float
    asserted: bool = True
    seed: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if len(self.margins) else float("nan")

    @property
    def passed(self) -> bool:
        return bool(len(self.margins)) and bool(np.min(self.margins) >= -self.tolerance)


def _points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) == 0:
        raise ValueError("no valid sample points")
    return pts


def analyze_point(
    prepotential: Prepotential, z, order: int = DEFAULT_ORDER, scale: complex = 1.0
) -> tuple[PeriodFrame, MetricBundle]:
    """Period frame and full metric bundle of the slice at ``z``."""
    frame = build_period_frame(prepotential.jet(z, order))
    if scale != 1.0:
        frame = frame.scaled(scale)
    return frame, metric_bundle(frame)


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def hodge_alpha(n: int) -> float:
    """The constant ``1 / ((sqrt(n) + 1)^2 + 1)``."""
    return 1.0 / ((np.sqrt(n) + 1.0) ** 2 + 1.0)


def bisectional_table(R, h: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """``B(x_a, x_b)`` for all pairs of (unit) direction rows."""
    Rs = R.as_convention(STANDARD).R
    norms = np.einsum("ij,ai,aj->a", h, directions, directions.conj()).real
    t = np.einsum("ijkl,ai,aj->akl", Rs, directions, directions.conj())
    table = np.einsum("akl,bk,bl->ab", t, directions, directions.conj()).real
    return table / np.outer(norms, norms)


def verify_theorem12(
    prepotential: Prepotential,
    points,
    seed: int = 0,
    order: int = DEFAULT_ORDER,
    tol: float = TOL_INEQUALITY,
    scale: complex = 1.0,
) -> dict[str, VerificationReport]:
    """Hodge metric checks: positivity, bisectional sign, Ricci and sectional bounds.

    With ``alpha = 1/((sqrt(n)+1)^2+1)`` the margins are ``min eig hH``,
    ``-max B``, ``-max eig_hH(Ric_H + alpha hH)`` and ``-(max H + alpha)``.
    Curvatures use the generic engine on the jet of ``hH``; directions are
    the ``hH``-orthonormal frame plus 64 seeded random unit vectors per point.
    """
    pts = _points(points)
    n = pts.shape[1]
    alpha = hodge_alpha(n)
    m_pos, m_bis, m_ric, m_hol = [], [], [], []
    for idx, z in enumerate(pts):
        _, b = analyze_point(prepotential, z, order, scale)
        hH = b.hH
        m_pos.append(float(np.linalg.eigvalsh((hH + hH.conj().T) / 2).min()))
        RH = kahler_curvature_generic(b.jets.hH)
        dirs = random_directions(hH, DIRECTIONS_PER_POINT, _rng(seed, idx))
        table = bisectional_table(RH, hH, dirs)
        m_bis.append(-float(table.max()))
        m_hol.append(-(float(np.diag(table).max()) + alpha))
        hH_inv = np.linalg.inv(hH).T
        ric = ricci_from_curvature(RH, hH_inv).Ric
        A = ric + alpha * hH
        top = sla.eigh((A + A.conj().T) / 2, (hH + hH.conj().T) / 2, eigvals_only=True).max()
        m_ric.append(-float(top))
    mk = lambda claim, anchor, m, t: VerificationReport(claim, anchor, pts, np.array(m), t, True, seed)
    return {
        "hodge-metric-positive": mk(
            "hodge-metric-positive", "omega_H = 2 omega_WP + P is Kahler", m_pos, 0.0
        ),
        "hodge-bisectional-nonpositive": mk(
            "hodge-bisectional-nonpositive", "bisectional curvature of omega_H <= 0", m_bis, tol
        ),
        "hodge-ricci-bound": mk(
            "hodge-ricci-bound", "Ric(omega_H) <= -alpha omega_H", m_ric, tol
        ),
        "hodge-holomorphic-sectional-bound": mk(
            "hodge-holomorphic-sectional-bound",
            "holomorphic sectional curvature of omega_H <= -alpha",
            m_hol,
            tol,
        ),
    }


def yukawa_sup_bound(n: int) -> float:
    """``sqrt(n (n + 3) / 3)``."""
    return float(np.sqrt(n * (n + 3) / 3.0))


def verify_yukawa_estimates(
    prepotential: Prepotential,
    points,
    complete: bool = False,
    order: int = DEFAULT_ORDER,
    tol: float = TOL_INEQUALITY,
    scale: complex = 1.0,
) -> dict[str, VerificationReport]:
    """Differential inequality, gradient bound and sup bound for ``f = |F|^2``.

    Margins: ``Lap f - (3/n) f^2 + (n+3) f``; ``2 sqrt(f1 f) - |grad f|``;
    ``sqrt(n(n+3)/3) - f``. The last report is asserted only when the slice
    is declared complete.
    """
    pts = _points(points)
    n = pts.shape[1]
    bound = yukawa_sup_bound(n)
    lap_m, grad_m, sup_m, f0s, f1s = [], [], [], [], []
    for z in pts:
        _, b = analyze_point(prepotential, z, order, scale)
        y = covariant_derivative_yukawa(b)
        f0 = y.f0
        lap = complex_laplacian(y.f0_jet, b)
        lap_m.append(lap - (3.0 / n) * f0**2 + (n + 3) * f0)
        grad_m.append(2.0 * np.sqrt(max(y.f1, 0.0) * max(f0, 0.0)) - gradient_norm(y.f0_jet, b))
        sup_m.append(bound - f0)
        f0s.append(f0)
        f1s.append(y.f1)
    sup = VerificationReport(
        "yukawa-sup-bound",
        "f <= sqrt(n(n+3)/3) on complete slices",
        pts,
        np.array(sup_m),
        tol,
        asserted=complete,
        details={"bound": bound, "observed_sup": float(np.max(f0s))},
    )
    return {
        "yukawa-laplacian-inequality": VerificationReport(
            "yukawa-laplacian-inequality",
            "Lap f >= (3/n) f^2 - (n+3) f",
            pts,
            np.array(lap_m),
            tol,
        ),
        "yukawa-gradient-bound": VerificationReport(
            "yukawa-gradient-bound",
            "|grad f_m| <= 2 sqrt(f_{m+1} f_m), m = 0",
            pts,
            np.array(grad_m),
            tol,
            details={"f1_max": float(np.max(f1s))},
        ),
        "yukawa-sup-bound": sup,
    }


def max_principle_bound(c1: float, c2: float, c3: float, alpha: float) -> float:
    """``max(1, ((c2 + c3) / c1) ** (1 / alpha))``.

    Upper bound for a nonnegative ``phi`` with
    ``Lap phi >= c1 phi^alpha - c2 phi - c3`` on a complete manifold. The
    exponent ``1/alpha`` is kept as stated in the source of the estimate. A
    direct argument at an interior maximum gives ``1/(alpha-1)`` instead,
    which for ``alpha = 2`` is exponent 1 rather than 1/2; the square-root
    Yukawa bound depends on the printed form.
    """
    if not c1 > 0:
        raise ValueError("c1 must be positive")
    if c2 < 0 or c3 < 0:
        raise ValueError("c2 and c3 must be nonnegative")
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    return max(1.0, ((c2 + c3) / c1) ** (1.0 / alpha))


def ricci_rhs(bundle: MetricBundle, F: np.ndarray) -> np.ndarray:
    """``-(n+1) h + e^{2K} h^{p qbar} h^{r sbar} F_apr conj(F_iqs)`` from ``F`` directly."""
    n = bundle.n
    contraction = np.einsum("apr,iqs,pq,rs->ai", F, F.conj(), bundle.h_inv, bundle.h_inv)
    return -(n + 1) * bundle.h + bundle.e2K * contraction


def cross_check_ricci(
    prepotential: Prepotential,
    points,
    order: int = DEFAULT_ORDER,
    tol: float = TOL_IDENTITY,
    yukawa_perturbation: float = 0.0,
    scale: complex = 1.0,
) -> VerificationReport:
    """Compare the Weil-Petersson Ricci tensor with ``-(n+1) h + e^{2K} F Fbar``.

    The Ricci tensor is obtained twice, by contracting the generic-engine
    curvature of ``h`` and by contracting the closed curvature formula; the
    residual is the larger deviation from the right-hand side.
    ``yukawa_perturbation`` is added to ``F_000`` before it enters the closed
    formula and the right-hand side (negative control).
    """
    pts = _points(points)
    margins, generic_res, closed_res = [], [], []
    for z in pts:
        _, b = analyze_point(prepotential, z, order, scale)
        F = b.F.copy()
        F[(0, 0, 0)] += yukawa_perturbation
        rhs = ricci_rhs(b, F)
        Rg = kahler_curvature_generic(b.jets.h, b.jets.h_inv)
        ric_g = ricci_from_curvature(Rg, b.h_inv).Ric
        Rs = strominger_curvature(replace(b, F=F))
        ric_s = ricci_from_curvature(Rs, b.h_inv).Ric
        rg = float(np.abs(ric_g - rhs).max())
        rs = float(np.abs(ric_s - rhs).max())
        generic_res.append(rg)
        closed_res.append(rs)
        margins.append(-max(rg, rs))
    return VerificationReport(
        "ricci-identity",
        "R_{a ibar} = -(n+1) delta + e^{2K} F Fbar",
        pts,
        np.array(margins),
        tol,
        details={"generic_residual": float(max(generic_res)), "closed_residual": float(max(closed_res))},
    )


def verify_cross_engine(
    prepotential: Prepotential, points, order: int = DEFAULT_ORDER, tol: float = TOL_IDENTITY
) -> VerificationReport:
    """Generic curvature of ``h`` against the closed formula, plus Kähler symmetries."""
    pts = _points(points)
    margins = []
    sym = 0.0
    for z in pts:
        _, b = analyze_point(prepotential, z, order)
        Rg = kahler_curvature_generic(b.jets.h, b.jets.h_inv)
        Rs = strominger_curvature(b)
        sym = max(sym, Rg.symmetry_defect(), Rs.symmetry_defect())
        margins.append(-float(np.abs(Rg.R - Rs.R).max()))
    return VerificationReport(
        "curvature-cross-engine",
        "R = h h + h h - e^{2K} h^{-1} F Fbar",
        pts,
        np.array(margins),
        tol,
        details={"max_symmetry_defect": sym},
    )


def verify_parallel_curvature(
    prepotential: Prepotential,
    points,
    order: int = DEFAULT_ORDER,
    tol: float = TOL_IDENTITY,
    asserted: bool = True,
) -> VerificationReport:
    """Largest component of ``nabla R`` for the Weil-Petersson metric."""
    pts = _points(points)
    margins = []
    for z in pts:
        _, b = analyze_point(prepotential, z, order)
        R = kahler_curvature_generic(b.jets.h, b.jets.h_inv)
        _, norm = covariant_derivative_curvature(R, christoffel_jet(b.jets.h, b.jets.h_inv))
        margins.append(-norm)
    return VerificationReport(
        "curvature-parallel",
        "the curvature tensor is parallel",
        pts,
        np.array(margins),
        tol,
        asserted=asserted,
    )


def verify_hodge_riemann(
    prepotential: Prepotential, points, order: int = DEFAULT_ORDER, tol: float = 1e-10
) -> dict[str, VerificationReport]:
    """Isotropy relations and Weil positivity of the flag at each point."""
    pts = _points(points)
    iso, pos = [], []
    for z in pts:
        frame = build_period_frame(prepotential.jet(z, order))
        rep = check_hodge_riemann(build_filtration(frame), tol)
        iso.append(-max(rep.max_q_f3_f1, rep.max_q_f2_f2, rep.max_q_cross))
        ok_dims = rep.dims == (1, pts.shape[1], pts.shape[1], 1)
        pos.append(min(rep.weil_min.values()) if ok_dims else -np.inf)
    return {
        "hodge-riemann-isotropy": VerificationReport(
            "hodge-riemann-isotropy", "Q(F3, F1) = 0, Q(F2, F2) = 0", pts, np.array(iso), tol
        ),
        "hodge-riemann-positivity": VerificationReport(
            "hodge-riemann-positivity", "Q(C psi, conj psi) > 0", pts, np.array(pos), 0.0
        ),
    }


def verify_horizontality(
    prepotential: Prepotential, points, order: int = DEFAULT_ORDER, tol: float = 1e-10
) -> VerificationReport:
    pts = _points(points)
    margins = []
    for z in pts:
        frame = build_period_frame(prepotential.jet(z, order))
        _, worst = check_horizontality(frame)
        margins.append(-worst)
    return VerificationReport(
        "horizontality", "X F3 in F2, X F2 in F1", pts, np.array(margins), tol
    )
