"""Exterior conformal map of the unit half-disc and the derived rate constants.

The unit half-disc is ``{|lam| <= 1, Re(lam) >= 0}``. Its exterior is mapped
onto the exterior of the unit disc by a Moebius transform followed by a
``2/3`` power. Under ``r = (lam - i)/(lam + i)`` the exterior lands in the
sector ``arg r in (-pi/2, pi]`` (the diameter itself, approached from the
left, sits on ``arg r = pi``), so the principal power with that one
boundary convention is analytic on the whole exterior.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "HalfDiscRegion",
    "DomainError",
    "phi_omega",
    "green_halfdisc",
    "green_normal_derivative_at_zero",
    "normal_derivative_estimate",
    "scsc_lower_rate",
    "log_scsc_lower_rate",
    "scsc_upper_rate",
    "log_scsc_upper_rate",
    "NORMAL_DERIVATIVE_CONSTANT",
]

NORMAL_DERIVATIVE_CONSTANT = 4 / (3 * math.sqrt(3))
_SQRT3 = math.sqrt(3)
_INTERIOR_TOL = 1e-12


class DomainError(ValueError):
    """Point lies strictly inside the set where the exterior map is undefined."""


@dataclass(frozen=True)
class HalfDiscRegion:
    """Half-disc with center ``mu`` (on its straight edge) and radius ``L - mu``."""

    mu: float = 0.0
    L: float = 1.0

    def __post_init__(self):
        if self.mu < 0 or not self.L > self.mu:
            raise ValueError("need 0 <= mu < L")

    @property
    def radius(self) -> float:
        return self.L - self.mu

    def to_unit(self, lam):
        return (np.asarray(lam, dtype=complex) - self.mu) / self.radius

    def contains(self, lam, tol: float = 0.0):
        u = self.to_unit(lam)
        return (np.abs(u) <= 1 + tol) & (u.real >= -tol)


def _strictly_inside(u):
    return (np.abs(u) < 1 - _INTERIOR_TOL) & (u.real > _INTERIOR_TOL)


def phi_omega(lam):
    """Exterior map of the unit half-disc; ``|phi| >= 1`` off the half-disc.

    Corners are handled by continuity: ``phi(i) = (-1 + sqrt(3) i)/2`` and
    ``phi(-i) = -(1 + sqrt(3) i)/2``. Raises :class:`DomainError` for points
    strictly inside.
    """
    lam = np.asarray(lam, dtype=complex)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    if np.any(_strictly_inside(lam)):
        raise DomainError("phi_omega is only defined outside the open unit half-disc")

    out = np.empty_like(lam)
    at_top = lam == 1j
    at_bottom = lam == -1j
    at_inf = np.isinf(lam)
    out[at_top] = (-1 + _SQRT3 * 1j) / 2
    out[at_bottom] = -(1 + _SQRT3 * 1j) / 2
    out[at_inf] = complex(np.inf, np.inf)
    rest = ~(at_top | at_bottom | at_inf)

    lr = lam[rest]
    r = (lr - 1j) / (lr + 1j)
    theta = np.angle(r)
    # -0.0 imaginary parts on the diameter, and tolerance-accepted points
    # just inside it, belong to the arg = pi side of the cut
    theta = np.where(theta < -0.75 * np.pi, theta + 2 * np.pi, theta)
    w = np.abs(r) ** (2 / 3) * np.exp(1j * (2 / 3) * theta)
    out[rest] = ((1 - w) - _SQRT3 * 1j * (1 + w)) / (2 * (w - 1))
    return out[0] if scalar else out


def green_halfdisc(lam, region: HalfDiscRegion = HalfDiscRegion()):
    """Green's function (pole at infinity) of a half-disc region."""
    u = region.to_unit(lam)
    g = np.log(np.abs(phi_omega(u)))
    return np.maximum(g, 0.0)


def normal_derivative_estimate(L: float = 1.0, h: float = 1e-4) -> float:
    """One-level Richardson estimate of the outward normal derivative at 0."""
    region = HalfDiscRegion(0.0, L)
    d_h = float(green_halfdisc(-h, region)) / h
    d_h2 = float(green_halfdisc(-h / 2, region)) / (h / 2)
    return 2 * d_h2 - d_h


def green_normal_derivative_at_zero(L: float = 1.0) -> float:
    """``4 / (3 sqrt(3) L)``, cross-checked against a finite difference."""
    if L <= 0:
        raise ValueError("L must be positive")
    exact = NORMAL_DERIVATIVE_CONSTANT / L
    estimate = normal_derivative_estimate(L)
    if abs(estimate - exact) > 1e-4 * exact:
        raise ArithmeticError(
            f"finite-difference normal derivative {estimate} disagrees with {exact}"
        )
    return exact


def log_scsc_lower_rate(kappa: float, T: int) -> float:
    if kappa <= 1:
        raise ValueError("kappa must exceed 1")
    if T < 0:
        raise ValueError("T must be nonnegative")
    g0 = float(green_halfdisc(-1.0 / (kappa - 1)))
    return -T * g0


def scsc_lower_rate(kappa: float, T: int) -> float:
    """``|phi_omega(-1/(kappa-1))|**(-T)``: the symmetric-algorithm floor."""
    return math.exp(log_scsc_lower_rate(kappa, T))


def log_scsc_upper_rate(kappa: float, T: int) -> float:
    if T < 0 or T % 2:
        raise ValueError("T must be a nonnegative even integer")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if T == 0:
        return 0.0
    if kappa == 1:
        return -math.inf
    lp, lm = math.log(kappa + 1), math.log(kappa - 1)
    return float(math.log(2) + (T / 2) * (lp + lm) - np.logaddexp(T * lp, T * lm))


def scsc_upper_rate(kappa: float, T: int) -> float:
    """Slingshot GDA contraction ``2(k+1)^{T/2}(k-1)^{T/2} / ((k+1)^T + (k-1)^T)``."""
    return math.exp(log_scsc_upper_rate(kappa, T))
