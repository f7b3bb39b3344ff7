"""Period vectors of horizontal slices, the symplectic pairing and Hodge flags.

The ambient space is ``C^(2n+2)`` with coordinates split into two halves of
length ``n+1``. The pairing is

    Q(xi, eta) = i * sum_a (xi_a eta_{n+1+a} - xi_{n+1+a} eta_a)

so ``Q(xi, conj(xi))`` is real. The Weil operator weights below are taken
relative to the real skew form ``-i Q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .jets import InsufficientOrderError, Jet, constant_jet, jet_einsum, stack_jets, variable_jet

MEMBERSHIP_TOL = 1e-8
INTERSECTION_TOL = 1e-8


class DegenerateFiltrationError(ValueError):
    """The Hodge flag has the wrong rank at the requested point."""


# ------------------------------------------------------------------- pairing
@dataclass(frozen=True)
class SymplecticForm:
    """Skew pairing on ``C^(2n+2)`` with matrix ``i [[0, I], [-I, 0]]``."""

    n: int

    @property
    def dim(self) -> int:
        return 2 * self.n + 2

    @property
    def matrix(self) -> np.ndarray:
        m = self.n + 1
        eye = np.eye(m)
        return 1j * np.block([[np.zeros((m, m)), eye], [-eye, np.zeros((m, m))]])

    def pair(self, xi, eta) -> complex:
        return symplectic_pair(xi, eta)

    def gram(self, rows_a: np.ndarray, rows_b: np.ndarray) -> np.ndarray:
        """Matrix ``Q(a_r, b_s)`` for row bases ``a`` and ``b``."""
        rows_a = np.atleast_2d(rows_a)
        rows_b = np.atleast_2d(rows_b)
        return rows_a @ self.matrix @ rows_b.T


def symplectic_pair(xi, eta) -> complex:
    """Evaluate ``Q(xi, eta)``; skew in its arguments up to rounding."""
    xi = np.asarray(xi, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    if xi.shape != eta.shape or xi.ndim != 1 or len(xi) % 2:
        raise ValueError(f"cannot pair vectors of shapes {xi.shape} and {eta.shape}")
    m = len(xi) // 2
    first = np.sum(xi[:m] * eta[m:])
    second = np.sum(xi[m:] * eta[:m])
    return complex(1j * (first - second))


def pair_jets(xi: Jet, eta: Jet) -> Jet:
    """The pairing applied to vector-valued jets (last tensor axis)."""
    m = xi.shape[-1] // 2
    lead = "ijklmnopqr"[: len(xi.shape) - 1]
    first = jet_einsum(f"{lead}a,a->{lead}", _last(xi, slice(0, m)), eta[m:])
    second = jet_einsum(f"{lead}a,a->{lead}", _last(xi, slice(m, 2 * m)), eta[:m])
    return (first - second) * 1j


def _last(j: Jet, sl: slice) -> Jet:
    idx = (slice(None),) * (len(j.shape) - 1) + (sl,)
    return j[idx]


# -------------------------------------------------------------------- frames
@dataclass(frozen=True)
class PeriodFrame:
    """Period vector ``Omega(z)`` as a vector-valued holomorphic jet."""

    omega: Jet
    n: int

    @property
    def base_point(self) -> np.ndarray:
        return self.omega.base_point

    @property
    def order(self) -> int:
        return self.omega.order

    @property
    def components(self) -> list[Jet]:
        return [self.omega[a] for a in range(2 * self.n + 2)]

    def value(self) -> np.ndarray:
        return np.asarray(self.omega.value)

    def derivatives(self, k: int) -> np.ndarray:
        """Array of all ``k``-th partials of Omega at the base point.

        Shape ``(n,)*k + (2n+2,)``.
        """
        if k > self.order:
            raise InsufficientOrderError(f"frame of order {self.order} lacks {k}-th derivatives")
        j = self.omega
        for _ in range(k):
            j = j.gradient()
        return np.asarray(j.array[..., 0])

    def scaled(self, lam: complex) -> "PeriodFrame":
        return PeriodFrame(self.omega * lam, self.n)

    def at(self, point=None) -> "PeriodFrame":
        if point is None or np.array_equal(np.asarray(point, dtype=complex), self.base_point):
            return self
        return PeriodFrame(self.omega.recenter(point), self.n)


def build_period_frame(u: Jet, n: int | None = None) -> PeriodFrame:
    """Assemble the normal-form period vector from the prepotential jet ``u``.

    ``Omega = (1, z/sqrt2, u - 1/2 sum z_i u_i, u_z/sqrt2)``; every component
    is returned with order ``order(u) - 1``.
    """
    n = u.nvars if n is None else n
    if u.nvars != n or u.shape:
        raise ValueError("prepotential jet must be a scalar jet in n variables")
    if u.order < 1:
        raise InsufficientOrderError("prepotential jet must have order >= 1")
    base, m = u.base_point, u.order - 1
    grad = u.gradient()
    z = [variable_jet(i, base, m) for i in range(n)]
    r2 = np.sqrt(2.0)
    euler = sum((z[i] * grad[i] for i in range(1, n)), z[0] * grad[0])
    comps = [constant_jet(1.0, base, m)]
    comps += [zi / r2 for zi in z]
    comps.append(u.truncate(m) - euler * 0.5)
    comps += [grad[i] / r2 for i in range(n)]
    return PeriodFrame(stack_jets(comps), n)


# --------------------------------------------------------------- filtrations
@dataclass(frozen=True)
class Filtration:
    """Hodge flag ``F3 < F2 < F1`` at a point, stored as row bases."""

    point: np.ndarray
    n: int
    F3: np.ndarray
    F2: np.ndarray
    F1: np.ndarray

    @property
    def dims(self) -> tuple[int, int, int]:
        return (
            np.linalg.matrix_rank(self.F3),
            np.linalg.matrix_rank(self.F2),
            np.linalg.matrix_rank(self.F1),
        )

    def nested(self, tol: float = MEMBERSHIP_TOL) -> bool:
        return (
            max_residual(self.F3, self.F2) < tol and max_residual(self.F2, self.F1) < tol
        )


@dataclass(frozen=True)
class HodgeDecomposition:
    """Bases of ``H^{3,0}, H^{2,1}, H^{1,2}, H^{0,3}`` and Weil weights."""

    Hpq: dict[tuple[int, int], np.ndarray]
    weil_signs: dict[tuple[int, int], complex]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.Hpq[pq].shape[0] for pq in PQ)


PQ = ((3, 0), (2, 1), (1, 2), (0, 3))


def _orth(rows: np.ndarray) -> np.ndarray:
    """Orthonormal row basis of the row span."""
    return sla.orth(np.atleast_2d(rows).T).T


def max_residual(vectors: np.ndarray, basis: np.ndarray) -> float:
    """Largest relative distance of the rows of ``vectors`` from ``span(basis)``."""
    q = _orth(basis)
    worst = 0.0
    for v in np.atleast_2d(vectors):
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        r = v - (v @ q.conj().T) @ q
        worst = max(worst, float(np.linalg.norm(r) / nv))
    return worst


def intersect(a: np.ndarray, b: np.ndarray, tol: float = INTERSECTION_TOL) -> np.ndarray:
    """Row basis of ``span(a) & span(b)`` via principal angles."""
    qa, qb = _orth(a), _orth(b)
    u, s, _ = np.linalg.svd(qa.conj() @ qb.T, full_matrices=False)
    keep = s > 1.0 - tol
    return (u[:, keep].T @ qa) if np.any(keep) else np.zeros((0, qa.shape[1]), complex)


def build_filtration(frame: PeriodFrame, point=None) -> Filtration:
    """Flag at ``point``: ``F3 = <Omega>``, ``F2 = <Omega, dOmega>``, ``F1 = F3^Q``."""
    frame = frame.at(point)
    if frame.order < 1:
        raise InsufficientOrderError("filtration needs first derivatives of the frame")
    n = frame.n
    omega = frame.value()
    d1 = frame.derivatives(1)
    F3 = omega[None, :]
    F2 = np.vstack([omega, d1])
    s = np.linalg.svd(F2, compute_uv=False)
    if s[-1] <= MEMBERSHIP_TOL * s[0]:
        raise DegenerateFiltrationError(
            f"F2 has numerical rank < {n + 1} (smallest singular value {s[-1]:.3e})"
        )
    form = SymplecticForm(n)
    functional = omega @ form.matrix
    F1 = sla.null_space(functional[None, :]).T
    return Filtration(frame.base_point.copy(), n, F3, F2, F1)


# --------------------------------------------------------- Hodge-Riemann
def weil_weight(p: int, q: int) -> int:
    """Sign making ``weight * Q(psi, conj psi) > 0`` on ``H^{p,q}``.

    The Weil operator acts by ``i^(p-q)``; against the real skew form
    ``-i Q`` this gives ``i^(p-q-1)``, which is +-1 because ``p - q`` is odd.
    """
    return int(round((1j ** ((p - q - 1) % 4)).real))


def hodge_decomposition(fil: Filtration, tol: float = INTERSECTION_TOL) -> HodgeDecomposition:
    """Recover ``H^{p,q} = F^p & conj(F^q)`` from the flag."""
    dim = 2 * fil.n + 2
    flag = {0: np.eye(dim, dtype=complex), 1: fil.F1, 2: fil.F2, 3: fil.F3}
    hpq = {}
    for p, q in PQ:
        hpq[(p, q)] = intersect(flag[p], flag[q].conj(), tol)
    signs = {(p, q): 1j ** ((p - q) % 4) for p, q in PQ}
    return HodgeDecomposition(hpq, signs)


@dataclass
class HodgeRiemannReport:
    max_q_f3_f1: float
    max_q_f2_f2: float
    max_q_cross: float
    weil_min: dict[tuple[int, int], float]
    dims: tuple[int, ...]
    decomposition: HodgeDecomposition
    tol: float
    witness: np.ndarray | None = field(default=None, repr=False)

    @property
    def isotropy_ok(self) -> bool:
        return self.max_q_f3_f1 <= self.tol and self.max_q_f2_f2 <= self.tol

    @property
    def positivity_ok(self) -> bool:
        return min(self.weil_min.values()) > 0

    @property
    def dims_ok(self) -> bool:
        n = (self.dims[0] + self.dims[1] + self.dims[2] + self.dims[3] - 2) // 2
        return self.dims == (1, n, n, 1)

    @property
    def passed(self) -> bool:
        return self.isotropy_ok and self.positivity_ok and self.dims_ok


def check_hodge_riemann(fil: Filtration, tol: float = 1e-10) -> HodgeRiemannReport:
    """Evaluate the bilinear relations on a flag.

    Reports the largest ``|Q(F3, F1)|``, ``|Q(F2, F2)|`` and
    ``|Q(H^{p,q}, H^{p',q'})|`` for non-dual pairs, and for each ``H^{p,q}``
    the smallest eigenvalue of the Hermitian form ``w_pq Q(psi, conj psi)``
    on unit vectors. A nonpositive minimum is a failure of the positivity
    relation; the corresponding eigenvector is returned as ``witness``.
    """
    form = SymplecticForm(fil.n)
    f1 = _orth(fil.F1)
    f2 = _orth(fil.F2)
    f3 = fil.F3 / np.linalg.norm(fil.F3)
    q31 = float(np.max(np.abs(form.gram(f3, f1))))
    q22 = float(np.max(np.abs(form.gram(f2, f2))))
    dec = hodge_decomposition(fil)
    cross = 0.0
    for pq in PQ:
        for rs in PQ:
            if rs == (3 - pq[0], 3 - pq[1]):
                continue
            a, b = dec.Hpq[pq], dec.Hpq[rs]
            if a.size and b.size:
                cross = max(cross, float(np.max(np.abs(form.gram(a, b)))))
    weil, witness = {}, None
    for p, q in PQ:
        basis = dec.Hpq[(p, q)]
        if not basis.size:
            weil[(p, q)] = -np.inf
            continue
        herm = weil_weight(p, q) * form.gram(basis, basis.conj())
        herm = (herm + herm.conj().T) / 2
        vals, vecs = np.linalg.eigh(herm)
        weil[(p, q)] = float(vals[0])
        if vals[0] <= 0 and witness is None:
            witness = vecs[:, 0] @ basis
    return HodgeRiemannReport(q31, q22, cross, weil, dec.dims, dec, tol, witness)


def check_horizontality(frame: PeriodFrame, point=None) -> tuple[bool, float]:
    """Check ``dOmega in F2`` and ``d d Omega in F1`` by projection residuals.

    Returns ``(passed, max_residual)`` with the threshold
    :data:`MEMBERSHIP_TOL` relative to each vector's norm.
    """
    frame = frame.at(point)
    if frame.order < 2:
        raise InsufficientOrderError("horizontality needs second derivatives of the frame")
    n = frame.n
    omega = frame.value()
    d1 = frame.derivatives(1)
    d2 = frame.derivatives(2).reshape(n * n, 2 * n + 2)
    F2 = np.vstack([omega, d1])
    F1 = sla.null_space((omega @ SymplecticForm(n).matrix)[None, :]).T
    worst = max(max_residual(d1, F2), max_residual(d2, F1))
    return worst < MEMBERSHIP_TOL, worst
