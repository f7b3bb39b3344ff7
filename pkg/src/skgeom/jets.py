"""Truncated multivariate power series ("jets") with complex coefficients.

A jet of order ``M`` in ``N`` variables stores the Taylor coefficients
``c_beta = d^beta f / beta!`` of a function at a base point for every
multi-index ``beta`` with ``|beta| <= M``. Coefficients live in a flat array
whose last axis runs over the monomials of a :class:`JetSpace`; leading axes
(if any) make the jet tensor valued. Monomials are ordered by total degree,
so the monomials of degree ``<= m`` form a prefix of the array and truncation
is a slice.

Everything downstream (period vectors, Kähler potentials, metrics, Yukawa
couplings, curvature) is assembled from exact arithmetic on these objects.
"""

from __future__ import annotations

import itertools
import math
import string
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

DEFAULT_ORDER = 6
DEFAULT_FD_STEP = 1e-3
MIN_SAFE_FD_STEP = 1e-5


class JetError(ValueError):
    """Incompatible jets or an undefined jet operation."""


class InsufficientOrderError(JetError):
    """A jet does not carry enough derivatives for the requested quantity."""


def _monomials(nvars: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for degree in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), degree):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            out.append(tuple(exps))
    return out


class JetSpace:
    """Monomial bookkeeping for jets in ``nvars`` variables up to ``order``.

    Use :func:`JetSpace.get` to obtain cached instances.
    """

    def __init__(self, nvars: int, order: int):
        if nvars < 1 or order < 0:
            raise JetError(f"invalid jet space ({nvars} variables, order {order})")
        self.nvars = nvars
        self.order = order
        mons = _monomials(nvars, order)
        self.monomials = np.array(mons, dtype=np.int64).reshape(len(mons), nvars)
        self.index = {m: k for k, m in enumerate(mons)}
        self.degrees = self.monomials.sum(axis=1)
        self.size = len(mons)
        self.factorials = np.array(
            [math.prod(math.factorial(e) for e in m) for m in mons], dtype=float
        )

    @staticmethod
    @lru_cache(maxsize=None)
    def get(nvars: int, order: int) -> "JetSpace":
        return JetSpace(nvars, order)

    def prefix(self, order: int) -> int:
        """Number of monomials of total degree ``<= order``."""
        return math.comb(self.nvars + order, order)

    @cached_property
    def _product(self) -> tuple[np.ndarray, np.ndarray, sp.csr_matrix]:
        left, right, target = [], [], []
        mons = [tuple(m) for m in self.monomials]
        for i, a in enumerate(mons):
            for j in range(self.prefix(self.order - int(self.degrees[i]))):
                b = mons[j]
                left.append(i)
                right.append(j)
                target.append(self.index[tuple(x + y for x, y in zip(a, b))])
        npairs = len(target)
        scatter = sp.csr_matrix(
            (np.ones(npairs), (np.arange(npairs), np.array(target))),
            shape=(npairs, self.size),
        )
        return np.array(left), np.array(right), scatter

    @cached_property
    def _derivative(self) -> tuple[np.ndarray, np.ndarray]:
        # source index and factor, per variable, into the space of order - 1
        lower = JetSpace.get(self.nvars, self.order - 1)
        src = np.empty((self.nvars, lower.size), dtype=np.int64)
        fac = np.empty((self.nvars, lower.size))
        for k, m in enumerate(lower.monomials):
            for v in range(self.nvars):
                up = list(m)
                up[v] += 1
                src[v, k] = self.index[tuple(up)]
                fac[v, k] = up[v]
        return src, fac

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Truncated Cauchy product along the last axis (broadcast elsewhere)."""
        left, right, scatter = self._product
        pairs = a[..., left] * b[..., right]
        shape = pairs.shape[:-1]
        flat = pairs.reshape(-1, pairs.shape[-1])
        return np.asarray(scatter.T @ flat.T).T.reshape(*shape, self.size)

    def contract(self, subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Two-operand einsum over tensor axes combined with a jet product."""
        left, right, scatter = self._product
        ins, out = subscripts.split("->")
        sa, sb = ins.split(",")
        spare = next(c for c in string.ascii_letters if c not in subscripts)
        pairs = np.einsum(
            f"{sa}{spare},{sb}{spare}->{out}{spare}", a[..., left], b[..., right]
        )
        shape = pairs.shape[:-1]
        flat = pairs.reshape(-1, pairs.shape[-1])
        return np.asarray(scatter.T @ flat.T).T.reshape(*shape, self.size)


def _as_point(point) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(point, dtype=complex))
    if arr.ndim != 1:
        raise JetError("base point must be a vector")
    return arr


class Jet:
    """Truncated power series at a base point, optionally tensor valued.

    Parameters
    ----------
    coeffs : array_like
        Coefficient array of shape ``(*shape, JetSpace.get(n, order).size)``.
    base_point : array_like
        Expansion point (length ``n``).
    order : int
        Truncation order ``M``.

    Notes
    -----
    Jets are immutable. Arithmetic between jets of different order truncates
    to the lower order; :func:`jet_mul` is the strict variant that rejects
    mismatched orders.
    """

    __slots__ = ("_c", "_base", "_order")
    __array_priority__ = 1000

    def __init__(self, coeffs, base_point, order: int):
        base = _as_point(base_point)
        space = JetSpace.get(len(base), int(order))
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 0 or c.shape[-1] != space.size:
            raise JetError(
                f"coefficient array has trailing size {c.shape[-1] if c.ndim else 0}, "
                f"expected {space.size}"
            )
        c.setflags(write=False)
        base.setflags(write=False)
        self._c = c
        self._base = base
        self._order = int(order)

    # ----------------------------------------------------------------- basics
    @property
    def array(self) -> np.ndarray:
        return self._c

    @property
    def base_point(self) -> np.ndarray:
        return self._base

    @property
    def order(self) -> int:
        return self._order

    @property
    def nvars(self) -> int:
        return len(self._base)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._c.shape[:-1]

    @property
    def space(self) -> JetSpace:
        return JetSpace.get(self.nvars, self._order)

    @property
    def value(self):
        """Value at the base point (scalar or array)."""
        v = self._c[..., 0]
        return v if v.ndim else complex(v)

    @property
    def coeffs(self) -> dict[tuple[int, ...], complex]:
        """Map from multi-index to coefficient (scalar jets only)."""
        if self.shape:
            raise JetError("coeffs map is only defined for scalar jets")
        return {
            tuple(int(e) for e in m): complex(c)
            for m, c in zip(self.space.monomials, self._c)
        }

    def coefficient(self, beta: Sequence[int]):
        beta = tuple(int(b) for b in beta)
        if len(beta) != self.nvars:
            raise JetError(f"multi-index {beta} has wrong length for {self.nvars} variables")
        if sum(beta) > self._order:
            raise InsufficientOrderError(f"multi-index {beta} exceeds jet order {self._order}")
        v = self._c[..., self.space.index[beta]]
        return v if v.ndim else complex(v)

    def partial(self, beta: Sequence[int]):
        """``d^beta f`` at the base point."""
        fact = math.prod(math.factorial(int(b)) for b in beta)
        return self.coefficient(beta) * fact

    def __repr__(self) -> str:
        return f"Jet(shape={self.shape}, nvars={self.nvars}, order={self._order})"

    def _new(self, c, order=None) -> "Jet":
        return Jet(c, self._base, self._order if order is None else order)

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        if len(idx) > len(self.shape) or any(i is Ellipsis for i in idx):
            raise JetError("indexing may only address the tensor axes of a jet")
        return self._new(self._c[idx])

    def __len__(self) -> int:
        if not self.shape:
            raise TypeError("scalar jet has no length")
        return self.shape[0]

    def truncate(self, order: int) -> "Jet":
        if order > self._order:
            raise InsufficientOrderError(f"cannot raise jet order {self._order} to {order}")
        if order < 0:
            raise InsufficientOrderError("jet order would become negative")
        return self._new(self._c[..., : self.space.prefix(order)], order)

    def diff(self, var: int) -> "Jet":
        """Partial derivative in variable ``var`` (order drops by one)."""
        if self._order < 1:
            raise InsufficientOrderError("cannot differentiate a jet of order 0")
        src, fac = self.space._derivative
        return self._new(self._c[..., src[var]] * fac[var], self._order - 1)

    def gradient(self, variables: Iterable[int] | None = None) -> "Jet":
        """Stack of partial derivatives; the new axis is placed first."""
        if self._order < 1:
            raise InsufficientOrderError("cannot differentiate a jet of order 0")
        variables = range(self.nvars) if variables is None else list(variables)
        src, fac = self.space._derivative
        parts = [self._c[..., src[v]] * fac[v] for v in variables]
        return self._new(np.stack(parts, axis=0), self._order - 1)

    def map_coeffs(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Jet":
        return self._new(fn(self._c))

    def recenter(self, point) -> "Jet":
        """Re-expand the truncated polynomial at another point.

        Exact when the jet carries the complete polynomial (e.g. a polynomial
        prepotential expanded to at least its degree).
        """
        point = _as_point(point)
        shift = point - self._base
        space = self.space
        out = np.zeros_like(self._c)
        mons = space.monomials
        for k, alpha in enumerate(mons):
            ck = self._c[..., k]
            if not np.any(ck):
                continue
            for j in range(space.prefix(int(space.degrees[k]))):
                beta = mons[j]
                if np.any(beta > alpha):
                    continue
                w = 1.0 + 0j
                for a, b, s in zip(alpha, beta, shift):
                    w *= math.comb(int(a), int(b)) * s ** int(a - b)
                out[..., j] += w * ck
        return Jet(out, point, self._order)

    # ------------------------------------------------------------ arithmetic
    def _align(self, other: "Jet") -> tuple[np.ndarray, np.ndarray, int]:
        if other.nvars != self.nvars or not np.array_equal(other._base, self._base):
            raise JetError("jets have different base points")
        m = min(self._order, other._order)
        n = self.space.prefix(m)
        return self._c[..., :n], other._c[..., :n], m

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b, m = self._align(other)
            return Jet(a + b, self._base, m)
        c = self._c.copy()
        c[..., 0] += np.asarray(other)
        return self._new(c)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self._c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b, m = self._align(other)
            return Jet(JetSpace.get(self.nvars, m).multiply(a, b), self._base, m)
        other = np.asarray(other)
        return self._new(self._c * other[..., None])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * reciprocal(other)
        other = np.asarray(other)
        return self._new(self._c / other[..., None])

    def __rtruediv__(self, other):
        return reciprocal(self) * other


# --------------------------------------------------------------- constructors
def constant_jet(value, base_point, order: int) -> Jet:
    base = _as_point(base_point)
    space = JetSpace.get(len(base), order)
    value = np.asarray(value, dtype=complex)
    c = np.zeros(value.shape + (space.size,), dtype=complex)
    c[..., 0] = value
    return Jet(c, base, order)


def variable_jet(var: int, base_point, order: int) -> Jet:
    """The coordinate function ``z_var`` expanded at ``base_point``."""
    base = _as_point(base_point)
    space = JetSpace.get(len(base), order)
    c = np.zeros(space.size, dtype=complex)
    c[0] = base[var]
    if order >= 1:
        e = [0] * len(base)
        e[var] = 1
        c[space.index[tuple(e)]] = 1.0
    return Jet(c, base, order)


def stack_jets(jets: Sequence[Jet]) -> Jet:
    """Stack jets with a common base point along a new leading axis."""
    m = min(j.order for j in jets)
    first = jets[0]
    for j in jets[1:]:
        if j.nvars != first.nvars or not np.array_equal(j.base_point, first.base_point):
            raise JetError("jets have different base points")
    n = JetSpace.get(first.nvars, m).size
    return Jet(np.stack([j.array[..., :n] for j in jets]), first.base_point, m)


# ------------------------------------------------------------------ operations
def _check_same(a: Jet, b: Jet) -> None:
    if a.nvars != b.nvars or not np.array_equal(a.base_point, b.base_point):
        raise JetError("jets have different base points")
    if a.order != b.order:
        raise JetError(f"jets have different orders ({a.order} vs {b.order})")


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Truncated Cauchy product of two jets with equal base point and order."""
    _check_same(a, b)
    return a * b


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_same(a, b)
    return a + b


def jet_sub(a: Jet, b: Jet) -> Jet:
    _check_same(a, b)
    return a - b


def jet_scale(a: Jet, s) -> Jet:
    return a * s


def _unit_split(a: Jet, what: str) -> tuple[np.ndarray, Jet]:
    a0 = np.asarray(a.array[..., 0])
    if np.any(a0 == 0):
        raise JetError(f"{what} of a jet with zero constant term")
    t = a / a0 - 1.0
    return a0, t


def reciprocal(a: Jet) -> Jet:
    """Formal inverse ``1/a``; requires a nonzero constant term."""
    a0, t = _unit_split(a, "reciprocal")
    acc = constant_jet(np.ones(a.shape), a.base_point, a.order)
    for _ in range(a.order):
        acc = 1.0 - t * acc
    return acc / a0


def jet_log(a: Jet) -> Jet:
    """Principal logarithm ``log a``; requires a nonzero constant term."""
    a0, t = _unit_split(a, "log")
    # Horner form of sum_{k>=1} (-1)^{k+1} t^k / k
    acc = constant_jet(np.zeros(a.shape), a.base_point, a.order)
    for k in range(a.order, 0, -1):
        acc = t * (acc + (-1) ** (k + 1) / k)
    return acc + np.log(a0)


def jet_exp(a: Jet) -> Jet:
    a0 = np.asarray(a.array[..., 0])
    t = a - a0
    acc = constant_jet(np.ones(a.shape), a.base_point, a.order)
    for k in range(a.order, 0, -1):
        acc = 1.0 + t * acc / k
    return acc * np.exp(a0)


def jet_einsum(subscripts: str, *operands: Jet) -> Jet:
    """Einstein summation over tensor axes of jets, multiplying the series.

    The subscripts describe only the tensor axes; the jet axis is implicit.
    Operands are contracted pairwise from the left.
    """
    ins, out = subscripts.replace(" ", "").split("->")
    terms = ins.split(",")
    if len(terms) != len(operands):
        raise JetError("number of subscripts does not match number of operands")
    for t, op in zip(terms, operands):
        if len(t) != len(op.shape):
            raise JetError(f"subscript {t!r} does not match jet shape {op.shape}")
    if len(operands) == 1:
        op = operands[0]
        return Jet(np.einsum(f"{terms[0]}...->{out}...", op.array), op.base_point, op.order)
    acc, acc_t = operands[0], terms[0]
    for k in range(1, len(operands)):
        nxt, nxt_t = operands[k], terms[k]
        later = set(out).union(*terms[k + 1 :])
        keep = "".join(dict.fromkeys(c for c in acc_t + nxt_t if c in later))
        a, b, m = acc._align(nxt)
        space = JetSpace.get(acc.nvars, m)
        acc = Jet(space.contract(f"{acc_t},{nxt_t}->{keep}", a, b), acc.base_point, m)
        acc_t = keep
    if acc_t != out:
        acc = Jet(np.einsum(f"{acc_t}...->{out}...", acc.array), acc.base_point, acc.order)
    return acc


# ---------------------------------------------------------------- prepotential
@dataclass(frozen=True)
class Prepotential:
    """Polynomial holomorphic function given by sparse monomials.

    ``monomials`` is a tuple of ``(exponents, coefficient)`` pairs.
    """

    n: int
    monomials: tuple[tuple[tuple[int, ...], complex], ...]

    def __post_init__(self):
        clean = []
        for exps, coef in self.monomials:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n or any(e < 0 for e in exps):
                raise JetError(f"monomial exponents {exps} invalid for dimension {self.n}")
            clean.append((exps, complex(coef)))
        object.__setattr__(self, "monomials", tuple(clean))

    @classmethod
    def from_mapping(cls, n: int, terms: Mapping[tuple[int, ...], complex]) -> "Prepotential":
        return cls(n, tuple(terms.items()))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.monomials), default=0)

    def derivative(self, beta: Sequence[int], z) -> complex:
        """Exact ``d^beta p`` at ``z`` by the power rule."""
        z = _as_point(z)
        if len(z) != self.n:
            raise JetError(f"point has length {len(z)}, prepotential dimension is {self.n}")
        total = 0j
        for exps, coef in self.monomials:
            term = coef
            for e, b, x in zip(exps, beta, z):
                if b > e:
                    term = 0
                    break
                term *= math.perm(e, b) * x ** (e - b)
            total += term
        return total

    def __call__(self, z) -> complex:
        return self.derivative((0,) * self.n, z)

    def jet(self, point, order: int = DEFAULT_ORDER) -> Jet:
        return jet_from_polynomial(self, point, order)


def jet_from_polynomial(p: Prepotential, point, order: int = DEFAULT_ORDER) -> Jet:
    """Taylor re-expansion of a polynomial prepotential at ``point``."""
    if order < 0:
        raise JetError("jet order must be nonnegative")
    point = _as_point(point)
    if len(point) != p.n:
        raise JetError(f"point has length {len(point)}, prepotential dimension is {p.n}")
    space = JetSpace.get(p.n, order)
    c = np.zeros(space.size, dtype=complex)
    for k, beta in enumerate(space.monomials):
        total = 0j
        for exps, coef in p.monomials:
            if any(b > e for b, e in zip(beta, exps)):
                continue
            w = coef
            for e, b, x in zip(exps, beta, point):
                w *= math.comb(e, int(b)) * x ** (e - int(b))
            total += w
        c[k] = total
    return Jet(c, point, order)


# ------------------------------------------------------------ finite differences
def _central_partials(
    func: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    directions: np.ndarray,
    betas: Sequence[tuple[int, ...]],
    step: float,
) -> dict[tuple[int, ...], np.ndarray]:
    """Mixed central differences along ``directions`` with one Richardson level.

    Each axis uses the symmetric stencil ``sum_j (-1)^j C(m, j) f(x + (m/2 - j) h)``
    whose error expands in even powers of ``h``.
    """
    cache: dict[tuple[int, ...], np.ndarray] = {}
    quarter = step / 4.0

    def at(offset: tuple[int, ...]) -> np.ndarray:
        if offset not in cache:
            x = x0 + quarter * (np.asarray(offset, dtype=float) @ directions)
            cache[offset] = np.asarray(func(x), dtype=complex)
        return cache[offset]

    def stencil(beta, scale: int) -> np.ndarray:
        # scale=2: spacing h; scale=1: spacing h/2 (offsets in units of h/4)
        total = 0
        for js in itertools.product(*(range(m + 1) for m in beta)):
            w = 1
            off = []
            for m, j in zip(beta, js):
                w *= (-1) ** j * math.comb(m, j)
                off.append(scale * (m - 2 * j))
            total = total + w * at(tuple(off))
        h = step if scale == 2 else step / 2
        return total / h ** sum(beta)

    out = {}
    for beta in betas:
        if sum(beta) == 0:
            out[beta] = at((0,) * len(beta))
            continue
        coarse = stencil(beta, 2)
        fine = stencil(beta, 1)
        out[beta] = (4.0 * fine - coarse) / 3.0
    return out


def finite_difference_jet(
    evaluator: Callable[[np.ndarray], complex],
    point,
    order: int,
    step: float = DEFAULT_FD_STEP,
) -> Jet:
    """Estimate the jet of a holomorphic function by central differences.

    Parameters
    ----------
    evaluator : callable
        Maps a complex vector to a complex scalar or array; must be holomorphic
        on a polydisc of radius ``order * step`` around ``point``.
    point : array_like
        Expansion point.
    order : int
        Highest derivative order to estimate.
    step : float
        Finite-difference step along each real coordinate direction.

    Returns
    -------
    Jet
        Coefficients ``d^beta f / beta!``. Intended as an independent oracle
        for analytically computed jets.
    """
    if step <= 0:
        raise JetError("finite-difference step must be positive")
    if step < MIN_SAFE_FD_STEP:
        warnings.warn(
            f"finite-difference step {step:g} is below {MIN_SAFE_FD_STEP:g}; "
            "expect cancellation error",
            RuntimeWarning,
            stacklevel=2,
        )
    point = _as_point(point)
    space = JetSpace.get(len(point), order)
    betas = [tuple(int(e) for e in m) for m in space.monomials]
    directions = np.eye(len(point), dtype=complex)
    parts = _central_partials(evaluator, point, directions, betas, step)
    c = np.stack([parts[b] / space.factorials[k] for k, b in enumerate(betas)], axis=-1)
    return Jet(c, point, order)


def finite_difference_wirtinger(
    evaluator: Callable[[np.ndarray], complex],
    point,
    step: float = 1e-2,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Wirtinger derivatives of a (not necessarily holomorphic) function.

    Returns ``(df, dbar_f, ddbar_f)`` with ``df[i] = d f / dz_i``,
    ``dbar_f[j] = d f / d conj(z_j)`` and ``ddbar_f[i, j] = d^2 f / dz_i d conj(z_j)``,
    obtained from real central differences in the ``2n`` real coordinates.
    """
    point = _as_point(point)
    n = len(point)
    directions = np.concatenate([np.eye(n), 1j * np.eye(n)]).astype(complex)
    betas = []
    for a in range(2 * n):
        e = [0] * (2 * n)
        e[a] = 1
        betas.append(tuple(e))
        for b in range(a, 2 * n):
            e2 = [0] * (2 * n)
            e2[a] += 1
            e2[b] += 1
            betas.append(tuple(e2))
    parts = _central_partials(evaluator, point, directions, betas, step)

    def d1(a):
        e = [0] * (2 * n)
        e[a] = 1
        return parts[tuple(e)]

    def d2(a, b):
        a, b = min(a, b), max(a, b)
        e = [0] * (2 * n)
        e[a] += 1
        e[b] += 1
        return parts[tuple(e)]

    df = np.array([(d1(i) - 1j * d1(n + i)) / 2 for i in range(n)])
    dbar = np.array([(d1(i) + 1j * d1(n + i)) / 2 for i in range(n)])
    ddbar = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            xx, yy = d2(i, j), d2(n + i, n + j)
            xy, yx = d2(i, n + j), d2(n + i, j)
            ddbar[i, j] = (xx + yy + 1j * (xy - yx)) / 4
    return df, dbar, ddbar
