"""Built-in prepotentials and the normal-form check applied to every input."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..jets import Prepotential

NORMALIZATION_TOL = 1e-12
MAX_DIM = 3


class NormalizationError(ValueError):
    """The prepotential violates ``u(0) = -i``, ``grad u(0) = 0`` or ``Hess u(0) = i I``."""


class CatalogError(KeyError):
    """Unknown catalog name or malformed source."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0])


@dataclass(frozen=True)
class CatalogEntry:
    """A validated prepotential together with its sampling metadata.

    Samples are drawn from the ball ``|z| < radius`` and still filtered by
    the domain scan.
    ``complete`` is declared, never inferred.
    """

    name: str
    n: int
    prepotential: Prepotential
    complete: bool = False
    radius: float = 1.0
    params: dict = field(default_factory=dict)

    @property
    def monomials(self):
        return self.prepotential.monomials

    def describe(self) -> str:
        flag = "complete" if self.complete else "local"
        return f"{self.name} (n={self.n}, {flag}, |z| < {self.radius:g})"


def _quadratic_terms(n: int) -> dict[tuple[int, ...], complex]:
    terms = {(0,) * n: -1j}
    for i in range(n):
        e = [0] * n
        e[i] = 2
        terms[tuple(e)] = 0.5j
    return terms


def check_normalization(p: Prepotential, tol: float = NORMALIZATION_TOL) -> None:
    """Raise :class:`NormalizationError` naming the first failed condition."""
    n = p.n
    zero = np.zeros(n)
    err = abs(p(zero) + 1j)
    if err > tol:
        raise NormalizationError(f"u(0) = -i fails by {err:.3e}")
    grad = np.array([p.derivative(np.eye(n, dtype=int)[i], zero) for i in range(n)])
    err = float(np.abs(grad).max()) if n else 0.0
    if err > tol:
        raise NormalizationError(f"grad u(0) = 0 fails by {err:.3e}")
    hess = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            beta = [0] * n
            beta[i] += 1
            beta[j] += 1
            hess[i, j] = p.derivative(beta, zero)
    err = float(np.abs(hess - 1j * np.eye(n)).max())
    if err > tol:
        raise NormalizationError(f"Hess u(0) = i I fails by {err:.3e}")


def _parse_coefficient(c: Any) -> complex:
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise CatalogError(f"complex coefficient must be [re, im], got {c!r}")
        return complex(float(c[0]), float(c[1]))
    return complex(c)


def parse_monomials(n: int, items) -> dict[tuple[int, ...], complex]:
    """Monomials from ``[[exponents], coefficient]`` pairs or an exponent mapping.

    Coefficients are numbers or ``[re, im]`` pairs; repeated exponents add.
    """
    if isinstance(items, Mapping):
        items = list(items.items())
    terms: dict[tuple[int, ...], complex] = {}
    for item in items:
        try:
            exps, coef = item
        except (TypeError, ValueError):
            raise CatalogError(f"monomial must be [exponents, coefficient], got {item!r}") from None
        exps = tuple(int(e) for e in exps)
        if len(exps) != n:
            raise CatalogError(f"monomial {list(exps)} has length {len(exps)}, expected {n}")
        terms[exps] = terms.get(exps, 0j) + _parse_coefficient(coef)
    return terms


def quadratic(n: int = 1) -> CatalogEntry:
    p = Prepotential.from_mapping(n, _quadratic_terms(n))
    return CatalogEntry("quadratic", n, p, complete=True, radius=math.sqrt(2.0), params={"n": n})


def cubic(c: complex = 0.1) -> CatalogEntry:
    terms = _quadratic_terms(1)
    terms[(3,)] = complex(c)
    p = Prepotential.from_mapping(1, terms)
    return CatalogEntry("cubic", 1, p, complete=False, radius=1.0, params={"c": c})


def _default_perturbation(n: int) -> dict[tuple[int, ...], complex]:
    out = {}
    for i in range(n):
        e = [0] * n
        e[i] = 3
        out[tuple(e)] = 0.05
        e[i] = 4
        out[tuple(e)] = 0.02j
    if n > 1:
        e = [0] * n
        e[0], e[1] = 1, 2
        out[tuple(e)] = 0.03
    return out


def quartic_perturbed(n: int = 2, perturbation=None) -> CatalogEntry:
    """The quadratic prepotential plus cubic and quartic monomials."""
    if not 1 <= n <= MAX_DIM:
        raise CatalogError(f"quartic-perturbed supports 1 <= n <= {MAX_DIM}, got {n}")
    extra = _default_perturbation(n) if perturbation is None else parse_monomials(n, perturbation)
    for exps in extra:
        if sum(exps) not in (3, 4):
            raise CatalogError(f"perturbation monomial {list(exps)} must have degree 3 or 4")
    terms = _quadratic_terms(n)
    for k, v in extra.items():
        terms[k] = terms.get(k, 0j) + v
    p = Prepotential.from_mapping(n, terms)
    return CatalogEntry("quartic-perturbed", n, p, complete=False, radius=0.8, params={"n": n})


BUILTINS = {
    "quadratic": "u = -i + (i/2) sum z_i^2, any n; complete slice of the complex ball",
    "cubic": "u = -i + (i/2) z^2 + c z^3, n = 1, parameter c (default 0.1)",
    "quartic-perturbed": "quadratic plus cubic and quartic monomials, n <= 3",
}


def list_catalog() -> list[tuple[str, str]]:
    return sorted(BUILTINS.items())


def load_prepotential(source, **overrides) -> CatalogEntry:
    """Build and validate a catalog entry.

    Parameters
    ----------
    source : str or mapping
        A catalog name, or a mapping with either ``name`` (plus ``n``, ``c``,
        ``perturbation``, ``radius``) or inline ``monomials`` with ``n``.
    **overrides
        Merged into a mapping source (e.g. ``n=2``).

    Raises
    ------
    CatalogError
        Unknown name or malformed monomials.
    NormalizationError
        The prepotential is not in normal form.
    """
    spec = {"name": source} if isinstance(source, str) else dict(source)
    spec.update({k: v for k, v in overrides.items() if v is not None})
    radius = spec.get("radius")
    if "monomials" in spec:
        n = int(spec.get("n", 0))
        if n < 1:
            raise CatalogError("inline monomials need a positive dimension n")
        p = Prepotential.from_mapping(n, parse_monomials(n, spec["monomials"]))
        entry = CatalogEntry(
            spec.get("name", "inline"),
            n,
            p,
            complete=False,
            radius=float(radius or 1.0),
        )
    else:
        name = spec.get("name")
        if name == "quadratic":
            entry = quadratic(int(spec.get("n", 1)))
        elif name == "cubic":
            if int(spec.get("n", 1)) != 1:
                raise CatalogError("the cubic entry is one-dimensional")
            entry = cubic(_parse_coefficient(spec.get("c", 0.1)))
        elif name == "quartic-perturbed":
            entry = quartic_perturbed(int(spec.get("n", 2)), spec.get("perturbation"))
        else:
            known = ", ".join(sorted(BUILTINS))
            raise CatalogError(f"unknown catalog entry {name!r} (known: {known})")
        if radius is not None:
            entry = CatalogEntry(entry.name, entry.n, entry.prepotential, entry.complete, float(radius), entry.params)
    if entry.n < 1:
        raise CatalogError("dimension must be positive")
    check_normalization(entry.prepotential)
    return entry
