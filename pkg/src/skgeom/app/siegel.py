"""Embedding of the quadratic slice into the Siegel upper half space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..jets import DEFAULT_ORDER
from ..periods import build_period_frame, symplectic_pair
from .catalog import CatalogEntry

# Orientation of tau = SIEGEL_SIGN * B A^{-1}, fixed once by Im tau > 0 at z = 0.
SIEGEL_SIGN = -1
SYMMETRY_TOL = 1e-10


class SiegelDomainError(ValueError):
    """The embedding left the Siegel space (singular block or Im tau not positive)."""


@dataclass(frozen=True)
class SiegelPoint:
    tau: np.ndarray

    @property
    def X(self) -> np.ndarray:
        return self.tau.real

    @property
    def Y(self) -> np.ndarray:
        return self.tau.imag

    @property
    def symmetry_defect(self) -> float:
        return float(np.abs(self.tau - self.tau.T).max())

    @property
    def min_eig_Y(self) -> float:
        Y = self.Y
        return float(np.linalg.eigvalsh((Y + Y.T) / 2).min())


def _frame_rows(point, entry: CatalogEntry, order: int):
    frame = build_period_frame(entry.prepotential.jet(point, order))
    return frame.value(), frame.derivatives(1)


def literal_embedding_matrix(point, entry: CatalogEntry, order: int = 2) -> np.ndarray:
    """Rows ``Omega`` and ``conj(d_k Omega)``, shape ``(n+1, 2n+2)``.

    This basis spans ``H^{3,0} + H^{1,2}`` only at ``z = 0``; elsewhere
    ``conj(d_k Omega)`` has a component along ``conj(Omega)``.
    """
    omega, d = _frame_rows(point, entry, order)
    return np.vstack([omega, d.conj()])


def lagrangian_basis(point, entry: CatalogEntry, order: int = 2) -> np.ndarray:
    """Rows ``Omega`` and ``conj(D_k Omega)`` with ``D_k`` the projection off ``Omega``.

    ``D_k Omega = d_k Omega - Q(d_k Omega, conj Omega) / Q(Omega, conj Omega) Omega``
    lies in ``H^{2,1}``, so the rows span the Lagrangian ``H^{3,0} + H^{1,2}``.
    """
    omega, d = _frame_rows(point, entry, order)
    norm = symplectic_pair(omega, omega.conj())
    rows = [omega]
    for k in range(entry.n):
        c = symplectic_pair(d[k], omega.conj()) / norm
        rows.append((d[k] - c * omega).conj())
    return np.vstack(rows)


def tau_from_basis(rows: np.ndarray, sign: int = SIEGEL_SIGN) -> np.ndarray:
    """``tau = sign * B A^{-1}`` for the row basis ``[A | B]``, transposed to columns."""
    m = rows.shape[1] // 2
    A, B = rows[:, :m].T, rows[:, m:].T
    if np.linalg.cond(A) > 1e12:
        raise SiegelDomainError("left block of the embedding matrix is singular")
    return sign * B @ np.linalg.inv(A)


def siegel_embed(point, entry: CatalogEntry, order: int = 2) -> SiegelPoint:
    """Image of ``point`` in the Siegel space of degree ``n + 1``.

    Raises
    ------
    SiegelDomainError
        If the block ``A`` is singular or ``Im tau`` is not positive definite.
    """
    if entry.name != "quadratic":
        raise ValueError("the Siegel embedding is defined for the quadratic entry")
    sp = SiegelPoint(tau_from_basis(lagrangian_basis(point, entry, order)))
    if not sp.min_eig_Y > 0:
        raise SiegelDomainError(f"Im tau not positive definite (min eigenvalue {sp.min_eig_Y:.3e})")
    return sp
