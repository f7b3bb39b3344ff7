"""Curvature of Kähler metrics: a generic engine and the closed special-geometry formula.

Curvature tensors are stored with all indices lowered, ``R[i, j, k, l] = R_{i jbar k lbar}``.
The tag ``"special"`` marks the sign in which the Weil-Petersson curvature reads

    R_{i jbar k lbar} = h_{i jbar} h_{k lbar} + h_{i lbar} h_{k jbar}
                        - e^{2K} h^{p qbar} F_ikp conj(F_jlq)

and in which ``Ric_{a ibar} = -h^{k lbar} R_{k lbar a ibar}`` equals
``-(n+1) h + P``. It is the negative of the textbook convention
``R = -d dbar g + g^{-1} dg dbar g``; geometric quantities (sectional and
bisectional curvature) are reported with the usual sign, negative for the
complex ball.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    COND_LIMIT,
    MetricBundle,
    SingularMetricError,
    anti_vars,
    holo_vars,
    inverse_matrix_jet,
)
from .jets import InsufficientOrderError, Jet, jet_einsum

SPECIAL = "special"
STANDARD = "standard"
_SIGN = {SPECIAL: -1.0, STANDARD: 1.0}  # factor turning a tensor into the textbook sign


@dataclass(frozen=True)
class CurvatureTensor:
    R: np.ndarray
    convention: str = SPECIAL
    jet: Jet | None = None

    def as_convention(self, convention: str) -> "CurvatureTensor":
        if convention == self.convention:
            return self
        f = _SIGN[self.convention] * _SIGN[convention]
        return CurvatureTensor(f * self.R, convention, None if self.jet is None else self.jet * f)

    def symmetry_defect(self) -> float:
        """Largest violation of the Kähler symmetries of ``R``."""
        R = self.R
        d1 = np.abs(R - np.transpose(R, (2, 1, 0, 3))).max()  # i <-> k
        d2 = np.abs(R - np.transpose(R, (0, 3, 2, 1))).max()  # j <-> l
        d3 = np.abs(R - np.transpose(R, (1, 0, 3, 2)).conj()).max()  # reality
        return float(max(d1, d2, d3))


@dataclass(frozen=True)
class RicciTensor:
    Ric: np.ndarray
    convention: str = STANDARD

    def hermitian_defect(self) -> float:
        return float(np.abs(self.Ric - self.Ric.conj().T).max())


def _curvature_jet(g: Jet, g_inv: Jet) -> Jet:
    """Textbook-sign curvature jet ``-d_i dbar_j g_kl + g^{pq} d_i g_kq dbar_j g_pl``."""
    n = g.shape[0]
    d = g.gradient(holo_vars(n))  # [i, k, q]
    dbar = g.gradient(anti_vars(n))  # [j, p, l]
    ddbar = dbar.gradient(holo_vars(n))  # [i, j, k, l]
    quad = jet_einsum("pq,ikq,jpl->ijkl", g_inv, d, dbar)
    return quad - ddbar


def kahler_curvature_generic(g: Jet, g_inv: Jet | None = None) -> CurvatureTensor:
    """Curvature of a Kähler metric from its jet in ``(z, conj z)``.

    Parameters
    ----------
    g : Jet
        Matrix-valued jet ``g[k, l] = g_{k lbar}`` of order >= 2.
    g_inv : Jet, optional
        Jet of ``g^{p qbar}`` (index convention of :mod:`skgeom.geometry`);
        computed when omitted.

    Returns
    -------
    CurvatureTensor
        Tagged ``"special"``; ``jet`` holds the curvature as a jet of order
        ``order(g) - 2``.
    """
    if g.order < 2:
        raise InsufficientOrderError("curvature needs metric jets of order >= 2")
    g0 = np.asarray(g.value)
    cond = np.linalg.cond(g0)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMetricError(f"metric condition number {cond:.3e}")
    if g_inv is None:
        g_inv = inverse_matrix_jet(g).map_coeffs(lambda c: np.swapaxes(c, 0, 1))
    std = _curvature_jet(g, g_inv)
    special = -std
    return CurvatureTensor(np.asarray(special.value), SPECIAL, special)


def strominger_curvature(bundle: MetricBundle) -> CurvatureTensor:
    """Closed-form Weil-Petersson curvature from ``h``, ``K`` and ``F``."""
    if bundle.F is None:
        raise InsufficientOrderError("the closed formula needs the Yukawa coupling")
    h, F = bundle.h, bundle.F
    R = np.einsum("ij,kl->ijkl", h, h) + np.einsum("il,kj->ijkl", h, h)
    R = R - bundle.e2K * np.einsum("pq,ikp,jlq->ijkl", bundle.h_inv, F, F.conj())
    return CurvatureTensor(R, SPECIAL)


def ricci_from_curvature(R: CurvatureTensor, h_inv: np.ndarray) -> RicciTensor:
    """``Ric_{a ibar} = -h^{k lbar} R_{k lbar a ibar}`` in the special sign."""
    Rs = R.as_convention(SPECIAL).R
    return RicciTensor(-np.einsum("kl,klai->ai", h_inv, Rs), STANDARD)


def _hform(h: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    return float(np.einsum("ij,i,j->", h, x, y.conj()).real)


def sectional_evaluators(
    R: CurvatureTensor, h: np.ndarray, xi, eta=None
) -> dict[str, float]:
    """Holomorphic sectional ``H(xi)`` and bisectional ``B(xi, eta)`` curvature.

    Both use the geometric sign (negative on the complex ball):
    ``H(xi) = R(xi, xi*, xi, xi*) / |xi|^4`` and
    ``B(xi, eta) = R(xi, xi*, eta, eta*) / (|xi|^2 |eta|^2)`` with ``R`` in the
    textbook convention.
    """
    xi = np.asarray(xi, dtype=complex)
    eta = xi if eta is None else np.asarray(eta, dtype=complex)
    nx, ne = _hform(h, xi, xi), _hform(h, eta, eta)
    if nx <= 0 or ne <= 0:
        raise ValueError("directions must be nonzero")
    Rs = R.as_convention(STANDARD).R
    rxx = np.einsum("ijkl,i,j,k,l->", Rs, xi, xi.conj(), xi, xi.conj()).real
    rxe = np.einsum("ijkl,i,j,k,l->", Rs, xi, xi.conj(), eta, eta.conj()).real
    return {"holomorphic_sectional": float(rxx / nx**2), "bisectional": float(rxe / (nx * ne))}


def orthonormal_frame(h: np.ndarray) -> np.ndarray:
    """Columns ``e_a`` with ``h(e_a, e_b) = delta_ab``."""
    L = np.linalg.cholesky(h.T)  # h^T = L L^H so e = L^{-H}
    return np.linalg.inv(L).conj().T


def random_directions(h: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` random unit vectors for ``h``, plus the orthonormal frame itself.

    Rows of the result are directions.
    """
    n = h.shape[0]
    e = orthonormal_frame(h)
    v = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.vstack([e.T, (e @ v.T).T])


def curvature_in_frame(R: CurvatureTensor, h: np.ndarray) -> np.ndarray:
    """Components of ``R`` in an ``h``-orthonormal frame."""
    e = orthonormal_frame(h)
    return np.einsum("ijkl,ia,jb,kc,ld->abcd", R.R, e, e.conj(), e, e.conj())


def covariant_derivative_curvature(R: CurvatureTensor, gamma_jet: Jet) -> tuple[np.ndarray, float]:
    """``nabla_m R_{i jbar k lbar} = d_m R - Gamma^p_mi R_pjkl - Gamma^p_mk R_ijpl``.

    ``R.jet`` must have order >= 1; ``gamma_jet`` is the Christoffel jet
    ``Gamma[p, m, i]``. Returns the tensor ``[m, i, j, k, l]`` and its
    largest component magnitude.
    """
    if R.jet is None or R.jet.order < 1:
        raise InsufficientOrderError("nabla R needs the curvature as a jet of order >= 1")
    n = R.R.shape[0]
    dR = np.asarray(R.jet.gradient(holo_vars(n)).value)
    G = np.asarray(gamma_jet.value)
    Rv = R.R
    out = dR - np.einsum("pmi,pjkl->mijkl", G, Rv) - np.einsum("pmk,ijpl->mijkl", G, Rv)
    return out, float(np.abs(out).max())


def christoffel_jet(g: Jet, g_inv: Jet) -> Jet:
    """Jet of ``Gamma^p_{l i} = g^{p qbar} d_l g_{i qbar}``."""
    n = g.shape[0]
    return jet_einsum("pq,liq->pli", g_inv, g.gradient(holo_vars(n)))
