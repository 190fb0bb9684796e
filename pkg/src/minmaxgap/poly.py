"""Complex polynomials, normalization classes and Chebyshev helpers.

Polynomials are stored in the monomial basis (coefficient ``t`` multiplies
``lam**t``). This is fine up to degree ~32 on sets of radius ~1; the extremal
solver uses an orthogonal basis on the mesh instead and only converts to
monomials for reporting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Polynomial",
    "NormalizationClass",
    "ChebyshevSpec",
    "poly_eval",
    "from_roots",
    "derivative",
    "cheb_roots",
    "cheb_eval",
    "cheb_at_zero_scsc",
    "log_cheb_at_zero_scsc",
]


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``sum_t coefficients[t] * lam**t`` with a nominal degree bound."""

    coefficients: tuple[complex, ...]
    degree_bound: int

    def __init__(self, coefficients: Iterable[complex], degree_bound: int | None = None):
        coefs = tuple(complex(c) for c in coefficients) or (0j,)
        if degree_bound is None:
            degree_bound = len(coefs) - 1
        if degree_bound < 0:
            raise ValueError("degree_bound must be nonnegative")
        if len(coefs) > degree_bound + 1:
            tail = coefs[degree_bound + 1:]
            if any(c != 0 for c in tail):
                raise ValueError(
                    f"{len(coefs)} coefficients exceed degree bound {degree_bound}"
                )
            coefs = coefs[: degree_bound + 1]
        object.__setattr__(self, "coefficients", coefs)
        object.__setattr__(self, "degree_bound", int(degree_bound))

    @classmethod
    def constant(cls, value: complex = 1.0, degree_bound: int = 0) -> "Polynomial":
        return cls([value], degree_bound)

    @property
    def coef(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    @property
    def degree(self) -> int:
        """Actual degree (index of the last nonzero coefficient, 0 for the zero polynomial)."""
        nz = np.flatnonzero(self.coef)
        return int(nz[-1]) if nz.size else 0

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coefficients)

    def __call__(self, lam):
        return poly_eval(self, lam)

    def _binary(self, other, op):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other)
        n = max(len(self.coefficients), len(other.coefficients))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self.coefficients)] = self.coef
        b[: len(other.coefficients)] = other.coef
        return Polynomial(op(a, b), max(self.degree_bound, other.degree_bound))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(-self.coef, self.degree_bound)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(
                np.convolve(self.coef, other.coef), self.degree_bound + other.degree_bound
            )
        return Polynomial(self.coef * complex(other), self.degree_bound)

    __rmul__ = __mul__

    def shift(self) -> "Polynomial":
        """Multiply by ``lam``."""
        return Polynomial((0j,) + self.coefficients, self.degree_bound + 1)

    def conj_reflect(self) -> "Polynomial":
        """``conj(p(conj(lam)))``: the polynomial with conjugated coefficients."""
        return Polynomial(np.conj(self.coef), self.degree_bound)

    def allclose(self, other: "Polynomial", atol: float = 1e-12) -> bool:
        diff = self - other
        return bool(np.all(np.abs(diff.coef) <= atol))


@dataclass(frozen=True)
class NormalizationClass:
    """``P(T)``: p(0) = 1, deg <= T.  ``Q(T+1)``: q(0) = 0, q'(0) = 1, deg <= T + 1.

    ``degree`` is always the nominal iteration count ``T``; the Q class
    therefore admits degree ``T + 1``.
    """

    kind: str
    degree: int
    real: bool = False

    def __post_init__(self):
        if self.kind not in ("P", "Q"):
            raise ValueError(f"unknown normalization kind {self.kind!r}")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")

    @classmethod
    def P(cls, T: int, real: bool = False) -> "NormalizationClass":
        return cls("P", T, real)

    @classmethod
    def Q(cls, T: int, real: bool = False) -> "NormalizationClass":
        return cls("Q", T, real)

    @property
    def max_degree(self) -> int:
        return self.degree if self.kind == "P" else self.degree + 1

    def contains(self, p: Polynomial, tol: float = 1e-12) -> bool:
        if p.degree > self.max_degree:
            return False
        if self.real and not p.is_real:
            return False
        c = p.coef
        if self.kind == "P":
            return abs(c[0] - 1) <= tol
        c1 = c[1] if c.size > 1 else 0.0
        return abs(c[0]) <= tol and abs(c1 - 1) <= tol


@dataclass(frozen=True)
class ChebyshevSpec:
    """Degree-``N`` Chebyshev polynomial of the first kind mapped to ``[a, b]``."""

    N: int
    a: float
    b: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("Chebyshev degree must be >= 1")
        if not self.a < self.b:
            raise ValueError("interval must satisfy a < b")

    def to_unit(self, x):
        return (2 * np.asarray(x) - self.a - self.b) / (self.b - self.a)


def poly_eval(p: Polynomial, lam):
    """Horner evaluation; accepts scalars or arrays."""
    lam = np.asarray(lam, dtype=complex)
    acc = np.zeros_like(lam)
    for c in reversed(p.coefficients):
        acc = acc * lam + c
    return acc[()] if acc.ndim == 0 else acc


def from_roots(roots: Sequence[complex], klass: NormalizationClass) -> Polynomial:
    """``prod_k (1 - lam/r_k)``, times ``lam`` for the Q class."""
    roots = [complex(r) for r in roots]
    if any(r == 0 for r in roots):
        raise ValueError("zero root is incompatible with the normalization p(0) = 1")
    if len(roots) > klass.degree:
        raise ValueError(f"{len(roots)} roots exceed degree budget {klass.degree}")
    coef = np.array([1.0 + 0j])
    for r in roots:
        coef = np.convolve(coef, [1.0, -1.0 / r])
    if klass.kind == "Q":
        coef = np.concatenate([[0j], coef])
    return Polynomial(coef, klass.max_degree)


def derivative(p: Polynomial) -> Polynomial:
    c = p.coef
    if c.size <= 1:
        return Polynomial([0j], max(p.degree_bound - 1, 0))
    return Polynomial(c[1:] * np.arange(1, c.size), max(p.degree_bound - 1, 0))


def cheb_roots(spec: ChebyshevSpec) -> np.ndarray:
    """Roots of the Chebyshev polynomial on ``[a, b]`` in descending order."""
    t = np.arange(spec.N)
    mid, half = (spec.a + spec.b) / 2, (spec.b - spec.a) / 2
    return mid + half * np.cos((2 * t + 1) * np.pi / (2 * spec.N))


def cheb_eval(spec: ChebyshevSpec, x):
    """Evaluate the mapped Chebyshev polynomial at real ``x``.

    Uses ``cos(N arccos u)`` on [-1, 1] and ``sign**N cosh(N arccosh|u|)``
    outside, never the monomial expansion.
    """
    u = np.asarray(spec.to_unit(np.asarray(x, dtype=float)), dtype=float)
    out = np.empty_like(u)
    inside = np.abs(u) <= 1
    out[inside] = np.cos(spec.N * np.arccos(u[inside]))
    ui = u[~inside]
    out[~inside] = np.sign(ui) ** spec.N * np.cosh(spec.N * np.arccosh(np.abs(ui)))
    return out[()] if out.ndim == 0 else out


def log_cheb_at_zero_scsc(N: int, mu: float, L: float) -> float:
    """Natural log of ``|T_N^{[mu^2, L^2]}(0)|``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 < mu <= L:
        raise ValueError("need 0 < mu <= L")
    kappa = L / mu
    if kappa == 1:
        return math.inf
    lp, lm = math.log(kappa + 1), math.log(kappa - 1)
    return float(np.logaddexp(2 * N * lp, 2 * N * lm) - math.log(2) - N * (lp + lm))


def cheb_at_zero_scsc(N: int, mu: float, L: float) -> float:
    """``|T_N^{[mu^2, L^2]}(0)|``.

    The signed value is ``(-1)**N`` times this magnitude, since 0 lies to the
    left of the interval. ``mu == L`` returns ``inf``: the polynomial
    ``1 - lam/L**2`` already vanishes on the whole (one-point) interval.
    """
    log_val = log_cheb_at_zero_scsc(N, mu, L)
    if log_val == math.inf or log_val > 709:
        return math.inf
    return math.exp(log_val)
