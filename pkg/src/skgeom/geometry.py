"""Weil-Petersson metric, Yukawa coupling, Hodge metric and related tensors.

All quantities are computed from jets in the ``2n`` variables
``(z_1..z_n, w_1..w_n)`` where ``w`` stands for ``conj(z)``; a real-analytic
function of ``z`` is a jet in these variables expanded at ``(z0, conj z0)``.
Holomorphic derivatives act on the first ``n`` variables, antiholomorphic
ones on the last ``n``.

Index conventions (all arrays are plain numpy):

* ``h[i, j] = h_{i jbar}``,
* ``h_inv[p, q] = h^{p qbar}`` so that ``sum_q h_inv[p, q] h[i, q] = delta_pi``,
* ``Gamma[p, l, i] = Gamma^p_{l i}``,
* ``F[i, j, k] = F_{ijk}``, ``P[i, j] = P_{i jbar}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .jets import InsufficientOrderError, Jet, JetSpace, jet_einsum, jet_exp, jet_log
from .periods import PeriodFrame, pair_jets

COND_LIMIT = 1e12


class OutOfDomainError(ValueError):
    """The pairing ``-Q(Omega, conj Omega)`` is not positive at the point."""


class SingularMetricError(ArithmeticError):
    """The metric is numerically singular."""


# ------------------------------------------------------ real-analytic jets
@lru_cache(maxsize=None)
def _embed_index(n: int, order: int, anti: bool) -> np.ndarray:
    small = JetSpace.get(n, order)
    big = JetSpace.get(2 * n, order)
    zero = (0,) * n
    out = []
    for m in small.monomials:
        m = tuple(int(e) for e in m)
        out.append(big.index[zero + m if anti else m + zero])
    return np.array(out)


@lru_cache(maxsize=None)
def _swap_index(n: int, order: int) -> np.ndarray:
    space = JetSpace.get(2 * n, order)
    return np.array(
        [space.index[tuple(int(e) for e in m[n:]) + tuple(int(e) for e in m[:n])] for m in space.monomials]
    )


def _real_base(j: Jet) -> np.ndarray:
    return np.concatenate([j.base_point, j.base_point.conj()])


def holomorphic_embed(j: Jet) -> Jet:
    """View a holomorphic jet in ``z`` as a jet in ``(z, conj z)``."""
    n = j.nvars
    size = JetSpace.get(2 * n, j.order).size
    c = np.zeros(j.shape + (size,), dtype=complex)
    c[..., _embed_index(n, j.order, False)] = j.array
    return Jet(c, _real_base(j), j.order)


def antiholomorphic_embed(j: Jet) -> Jet:
    """The jet of ``conj(f(z))`` for a holomorphic jet ``f``."""
    n = j.nvars
    size = JetSpace.get(2 * n, j.order).size
    c = np.zeros(j.shape + (size,), dtype=complex)
    c[..., _embed_index(n, j.order, True)] = j.array.conj()
    return Jet(c, _real_base(j), j.order)


def conj_swap(j: Jet) -> Jet:
    """Jet of the complex conjugate function, for jets in ``(z, conj z)``."""
    n = j.nvars // 2
    return j.map_coeffs(lambda c: c[..., _swap_index(n, j.order)].conj())


def real_part(j: Jet) -> Jet:
    return (j + conj_swap(j)) * 0.5


def holo_vars(n: int) -> range:
    return range(n)


def anti_vars(n: int) -> range:
    return range(n, 2 * n)


def mixed_hessian(f: Jet) -> Jet:
    """Jet of ``d_i dbar_j f`` with shape ``(n, n)`` (order drops by two)."""
    n = f.nvars // 2
    return f.gradient(anti_vars(n)).gradient(holo_vars(n))


def inverse_matrix_jet(m: Jet) -> Jet:
    """Jet of the matrix inverse of a square matrix-valued jet."""
    m0 = np.asarray(m.value)
    inv0 = np.linalg.inv(m0)
    e = m - m0
    inv0_j = _const_like(inv0, m)
    # X = inv0 - inv0 E X gains one order per sweep
    acc = inv0_j
    for _ in range(m.order):
        acc = inv0_j - jet_einsum("ab,bc,cd->ad", inv0_j, e, acc)
    return acc


def _const_like(value: np.ndarray, like: Jet) -> Jet:
    c = np.zeros(np.shape(value) + (like.space.size,), dtype=complex)
    c[..., 0] = value
    return Jet(c, like.base_point, like.order)


# ------------------------------------------------------------------ bundles
@dataclass(frozen=True)
class BundleJets:
    """Jets in ``(z, conj z)`` retained for derived quantities."""

    K: Jet
    e2K: Jet
    h: Jet
    h_inv: Jet
    F: Jet | None = None
    Fbar: Jet | None = None
    P: Jet | None = None
    hH: Jet | None = None


@dataclass(frozen=True)
class MetricBundle:
    """Pointwise Weil-Petersson data at ``point``."""

    point: np.ndarray
    n: int
    K: float
    h: np.ndarray
    h_inv: np.ndarray
    Gamma: np.ndarray
    jets: BundleJets
    F: np.ndarray | None = None
    P: np.ndarray | None = None
    hH: np.ndarray | None = None

    @property
    def e2K(self) -> float:
        return float(np.exp(2 * self.K))


def kahler_potential_and_metric(frame: PeriodFrame, point=None) -> MetricBundle:
    """Kähler potential ``K = -log(-Q(Omega, conj Omega))`` and its metric.

    Populates ``K``, ``h``, ``h_inv`` and ``Gamma`` (and ``F`` when the frame
    carries third derivatives).

    Raises
    ------
    OutOfDomainError
        If ``-Q(Omega, conj Omega) <= 0``.
    SingularMetricError
        If the condition number of ``h`` exceeds ``1e12``.
    """
    frame = frame.at(point)
    if frame.order < 2:
        raise InsufficientOrderError("the metric needs a frame of order >= 2")
    n = frame.n
    om = holomorphic_embed(frame.omega)
    omb = antiholomorphic_embed(frame.omega)
    ek = real_part(-pair_jets(om, omb))
    ek_val = ek.value.real
    if not ek_val > 0:
        raise OutOfDomainError(f"e^(-K) = {ek_val:.6g} is not positive")
    K = real_part(-jet_log(ek))
    hj = mixed_hessian(K)
    h = np.asarray(hj.value)
    cond = np.linalg.cond(h)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMetricError(f"metric condition number {cond:.3e} exceeds {COND_LIMIT:.0e}")
    hinv_j = inverse_matrix_jet(hj).map_coeffs(lambda c: np.swapaxes(c, 0, 1))
    h_inv = np.asarray(hinv_j.value)
    if hj.order >= 1:
        dh = np.asarray(hj.gradient(holo_vars(n)).value)
        gamma = np.einsum("pq,liq->pli", h_inv, dh)
    else:
        gamma = None
    e2K = jet_exp(K * 2.0)
    jets = BundleJets(K=K, e2K=e2K, h=hj, h_inv=hinv_j)
    F = None
    if frame.order >= 3:
        Fh = yukawa_jet(frame)
        F_j = holomorphic_embed(Fh)
        jets = replace(jets, F=F_j, Fbar=conj_swap(F_j))
        F = np.asarray(Fh.value)
    return MetricBundle(
        point=frame.base_point.copy(),
        n=n,
        K=float(K.value.real),
        h=h,
        h_inv=h_inv,
        Gamma=gamma,
        jets=jets,
        F=F,
    )


def yukawa_jet(frame: PeriodFrame) -> Jet:
    """Holomorphic jet of ``F_ijk = Q(d_i d_j d_k Omega, Omega)``."""
    if frame.order < 3:
        raise InsufficientOrderError("the Yukawa coupling needs a frame of order >= 3")
    d3 = frame.omega.gradient().gradient().gradient()
    F = pair_jets(d3, frame.omega)
    return F.map_coeffs(_symmetrize_last)


def _symmetrize_last(c: np.ndarray) -> np.ndarray:
    # copy each entry from its sorted index so symmetry is exact
    out = np.empty_like(c)
    n = c.shape[0]
    for idx in itertools.product(range(n), repeat=3):
        out[idx] = c[tuple(sorted(idx))]
    return out


def yukawa(frame: PeriodFrame, point=None) -> np.ndarray:
    """Totally symmetric Yukawa tensor ``F_ijk`` at ``point``."""
    F = np.asarray(yukawa_jet(frame.at(point)).value)
    for perm in itertools.permutations(range(3)):
        if not np.array_equal(F, np.transpose(F, perm)):
            raise AssertionError("Yukawa tensor is not totally symmetric")
    return F


def p_and_hodge_metric(bundle: MetricBundle) -> MetricBundle:
    """Add ``P_{i jbar} = e^{2K} h^{p qbar} h^{r sbar} F_ipr conj(F_jqs)`` and ``hH = 2h + P``."""
    j = bundle.jets
    if j.F is None:
        raise InsufficientOrderError("P needs the Yukawa coupling (frame order >= 3)")
    P_j = j.e2K * jet_einsum("ipr,jqs,pq,rs->ij", j.F, j.Fbar, j.h_inv, j.h_inv)
    hH_j = j.h * 2.0 + P_j
    P = np.asarray(P_j.value)
    return replace(
        bundle,
        P=P,
        hH=2.0 * bundle.h + P,
        jets=replace(j, P=P_j, hH=hH_j),
    )


def metric_bundle(frame: PeriodFrame, point=None) -> MetricBundle:
    """Full pointwise data: metric, Christoffels, Yukawa, ``P`` and ``hH``."""
    b = kahler_potential_and_metric(frame, point)
    return p_and_hodge_metric(b) if b.jets.F is not None else b


def trace_h(bundle: MetricBundle, m: np.ndarray) -> complex:
    """``h^{i jbar} M_{i jbar}``."""
    return complex(np.einsum("ij,ij->", bundle.h_inv, m))


# ------------------------------------------------------------ derivatives of F
@dataclass(frozen=True)
class YukawaJet:
    """Yukawa coupling with covariant derivatives and their weighted norms.

    ``nablaF[l, i, j, k] = nabla_l F_ijk``;
    ``nabla2F[m, l, i, j, k] = nabla_m nabla_l F_ijk``.
    """

    F: np.ndarray
    dF: np.ndarray
    dK: np.ndarray
    nablaF: np.ndarray
    nabla2F: np.ndarray | None
    f0: float
    f1: float
    f2: float | None
    f0_jet: Jet


def weighted_norm(t: np.ndarray, h_inv: np.ndarray, weight: float) -> float:
    """``weight * T_{a..} conj(T_{b..}) prod h^{a bbar}`` for covariant ``T``."""
    s = t.conj()
    for ax in range(t.ndim):
        s = np.moveaxis(np.tensordot(h_inv, s, axes=(1, ax)), 0, ax)
    val = weight * np.sum(t * s)
    return float(val.real)


def _nabla(dT: np.ndarray, T: np.ndarray, dK: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """One holomorphic covariant derivative of a covariant tensor of weight two.

    ``dT[l, ...]`` are the partials, ``T`` the tensor, ``dK[l]`` and
    ``gamma[p, l, i]`` the connection data.
    """
    out = dT + 2.0 * np.einsum("l,...->l...", dK, T)
    for ax in range(T.ndim):
        moved = np.moveaxis(T, ax, 0)  # p first
        corr = np.einsum("pla,p...->la...", gamma, moved)
        out = out - np.moveaxis(corr, 1, ax + 1)
    return out


def _nabla_jet(T: Jet, dK: Jet, gamma: Jet) -> Jet:
    n = dK.shape[0]
    letters = "abcdefg"[: len(T.shape)]
    dT = T.gradient(holo_vars(n))
    out = dT + jet_einsum(f"l,{letters}->l{letters}", dK, T) * 2.0
    for ax in range(len(T.shape)):
        src = letters[:ax] + "p" + letters[ax + 1 :]
        out = out - jet_einsum(f"pl{letters[ax]},{src}->l{letters}", gamma, T)
    return out


def covariant_derivative_yukawa(bundle: MetricBundle) -> YukawaJet:
    """Covariant derivatives of ``F`` on ``Sym^3 T* (x) (F^3)^2`` and the norms ``f_m``.

    ``nabla_l F_ijk = d_l F_ijk + 2 K_l F_ijk - Gamma^p_li F_pjk - Gamma^p_lj F_ipk
    - Gamma^p_lk F_ijp``; the second derivative iterates the same rule with
    the extra slot. ``f_m = e^{2K} |nabla^m F|^2`` with all indices contracted
    by ``h^{-1}``. ``nabla2F``/``f2`` are ``None`` when the jets are too short.
    """
    j = bundle.jets
    if j.F is None:
        raise InsufficientOrderError("covariant derivatives need the Yukawa coupling")
    n = bundle.n
    if j.F.order < 1:
        raise InsufficientOrderError("covariant derivative of F needs a frame of order >= 4")
    dK_j = j.K.gradient(holo_vars(n))
    dh_j = j.h.gradient(holo_vars(n))
    gamma_j = jet_einsum("pq,liq->pli", j.h_inv, dh_j)
    nF_j = _nabla_jet(j.F, dK_j, gamma_j)
    e2K = bundle.e2K
    F = np.asarray(j.F.value)
    dF = np.asarray(j.F.gradient(holo_vars(n)).value)
    dK = np.asarray(dK_j.value)
    nablaF = np.asarray(nF_j.value)
    nabla2F = f2 = None
    if nF_j.order >= 1:
        gamma = np.asarray(gamma_j.value)
        nabla2F = _nabla(np.asarray(nF_j.gradient(holo_vars(n)).value), nablaF, dK, gamma)
        f2 = weighted_norm(nabla2F, bundle.h_inv, e2K)
    f0_j = real_part(j.e2K * jet_einsum("ijk,abc,ia,jb,kc->", j.F, j.Fbar, j.h_inv, j.h_inv, j.h_inv))
    return YukawaJet(
        F=F,
        dF=dF,
        dK=dK,
        nablaF=nablaF,
        nabla2F=nabla2F,
        f0=weighted_norm(F, bundle.h_inv, e2K),
        f1=weighted_norm(nablaF, bundle.h_inv, e2K),
        f2=f2,
        f0_jet=f0_j,
    )


def complex_laplacian(f: Jet, bundle: MetricBundle) -> float:
    """``h^{i jbar} d_i dbar_j f`` at the bundle's point for a jet in ``(z, conj z)``."""
    if f.order < 2:
        raise InsufficientOrderError("the Laplacian needs a jet of order >= 2")
    hess = np.asarray(mixed_hessian(f).value)
    return float(np.einsum("ij,ij->", bundle.h_inv, hess).real)


def gradient_norm(f: Jet, bundle: MetricBundle) -> float:
    """Riemannian length of ``grad f`` for the metric ``2 Re(h_{i jbar} dz^i dzbar^j)``.

    For real ``f`` this equals ``sqrt(2 h^{i jbar} d_i f dbar_j f)``.
    """
    n = bundle.n
    g = np.asarray(f.gradient().value)
    d, dbar = g[:n], g[n:]
    sq = 2.0 * np.einsum("ij,i,j->", bundle.h_inv, d, dbar).real
    return float(np.sqrt(max(sq, 0.0)))
