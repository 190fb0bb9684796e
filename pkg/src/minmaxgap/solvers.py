"""GDA with arbitrary stepsize schedules, slingshot schedules and symmetric baselines.

GDA here is ``x <- x - alpha * grad_x f``, ``y <- y + beta * grad_y f``.
Symmetric algorithms act through polynomials of ``JH``; slingshot GDA acts
through a polynomial of ``H`` (the even ``H**2`` form for the SCSC schedule).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import ChebyshevSpec, NormalizationClass, Polynomial, cheb_roots
from .problems import QuadraticSaddleProblem
from .validation import check_vector

__all__ = [
    "StepSchedule",
    "Trajectory",
    "slingshot_scsc_schedule",
    "slingshot_cc_schedule",
    "run_gda",
    "run_symmetric_baseline",
    "baseline_polynomial",
    "default_baseline_step",
    "apply_symmetric_polynomial",
    "apply_asymmetric_polynomial",
    "apply_asymmetric_roots",
    "BASELINES",
    "DIVERGENCE_THRESHOLD",
]

BASELINES = ("gda_const", "extragradient", "ogda")
DIVERGENCE_THRESHOLD = 1e12


@dataclass(frozen=True)
class StepSchedule:
    pairs: tuple[tuple[float, float], ...]

    def __init__(self, pairs: Sequence[tuple[float, float]]):
        object.__setattr__(self, "pairs", tuple((float(a), float(b)) for a, b in pairs))

    def __len__(self):
        return len(self.pairs)

    @property
    def alpha(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs])

    @property
    def beta(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs])

    @property
    def symmetric(self) -> bool:
        return all(a == b for a, b in self.pairs)

    @classmethod
    def constant(cls, step: float, T: int) -> "StepSchedule":
        return cls([(step, step)] * T)


@dataclass(frozen=True, eq=False)
class Trajectory:
    iterates: np.ndarray
    dist_to_opt: np.ndarray
    grad_norm: np.ndarray
    diverged: bool = False

    @property
    def T(self) -> int:
        return len(self.iterates) - 1

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "dist_to_opt", "grad_norm"])
        for t, (d, g) in enumerate(zip(self.dist_to_opt, self.grad_norm)):
            writer.writerow([t, f"{d:.12g}", f"{g:.12g}"])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def _alternate_extremes(values: np.ndarray) -> np.ndarray:
    """Largest first, then smallest, then second largest, ... toward the median."""
    v = np.sort(np.asarray(values))[::-1]
    out = []
    lo, hi = 0, len(v) - 1
    while lo <= hi:
        out.append(v[lo])
        if lo != hi:
            out.append(v[hi])
        lo, hi = lo + 1, hi - 1
    return np.array(out)


def slingshot_scsc_schedule(T: int, mu: float, L: float) -> StepSchedule:
    """Paired ``(h, -h), (-h, h)`` steps with ``h = r**-0.5`` over Chebyshev roots on ``[mu^2, L^2]``.

    Any ordering of the pairs gives the same final iterate in exact
    arithmetic; the magnitudes are interleaved from the extremes inward.
    """
    if T < 2 or T % 2:
        raise ValueError("T must be an even integer >= 2")
    if mu <= 0 or L < mu:
        raise ValueError("need 0 < mu <= L")
    N = T // 2
    if mu == L:
        roots = np.full(N, mu**2)
    else:
        roots = cheb_roots(ChebyshevSpec(N, mu**2, L**2))
    pairs = []
    for h in _alternate_extremes(roots ** -0.5):
        pairs += [(h, -h), (-h, h)]
    return StepSchedule(pairs)


def slingshot_cc_schedule(T: int, L: float) -> StepSchedule:
    """``alpha_t = -beta_t = 1/rho_t`` over the nonzero Chebyshev roots on ``[-L, L]`` (degree ``T+1``)."""
    if T < 0 or T % 2:
        raise ValueError("T must be a nonnegative even integer")
    if L <= 0:
        raise ValueError("L must be positive")
    if T == 0:
        return StepSchedule([])
    t = np.arange(T // 2)
    rho = L * np.cos((2 * t + 1) * np.pi / (2 * T + 2))
    pairs = []
    for h in _alternate_extremes(1 / rho):
        pairs += [(h, -h), (-h, h)]
    return StepSchedule(pairs)


def _record(problem, zs, diverged):
    zs = np.array(zs)
    dist = np.linalg.norm(zs - problem.z_star, axis=1)
    grads = (zs - problem.z_star) @ problem.H.T
    return Trajectory(zs, dist, np.linalg.norm(grads, axis=1), diverged)


def _blown_up(z) -> bool:
    return not np.all(np.isfinite(z)) or np.linalg.norm(z) > DIVERGENCE_THRESHOLD


def run_gda(problem: QuadraticSaddleProblem, schedule: StepSchedule, z0) -> Trajectory:
    """Simultaneous GDA; the trajectory is truncated at the first diverged iterate."""
    z = check_vector(z0, problem.dim, "z0")
    dx = problem.dx
    zs = [z.copy()]
    for alpha, beta in schedule.pairs:
        g = problem.gradient(z)
        z = z.copy()
        z[:dx] -= alpha * g[:dx]
        z[dx:] += beta * g[dx:]
        if _blown_up(z):
            return _record(problem, zs, True)
        zs.append(z)
    return _record(problem, zs, False)


def default_baseline_step(method: str, mu: float, L: float) -> float:
    """``mu/L^2`` for constant-step GDA (``1/(2L)`` when ``mu == 0``), ``1/(2L)`` otherwise."""
    if method not in BASELINES:
        raise ValueError(f"unknown baseline {method!r}")
    if method == "gda_const" and mu > 0:
        return mu / L**2
    return 1 / (2 * L)


def run_symmetric_baseline(method: str, problem: QuadraticSaddleProblem, step: float | None,
                           z0, T: int) -> Trajectory:
    """Run ``T`` iterations of a symmetric VI method on ``F = JH(z - z*)``.

    ``extragradient`` uses two operator calls per iteration, so its ``T``
    iterates correspond to a degree ``2T`` polynomial.
    """
    if method not in BASELINES:
        raise ValueError(f"unknown baseline {method!r}")
    if step is None:
        step = default_baseline_step(method, problem.mu, problem.L)
    if not step > 0:
        raise ValueError("step must be positive")
    F = problem.saddle_operator
    z = check_vector(z0, problem.dim, "z0")
    zs = [z.copy()]
    f_prev = F(z)
    for _ in range(T):
        fz = F(z)
        if method == "gda_const":
            z = z - step * fz
        elif method == "extragradient":
            z = z - step * F(z - step * fz)
        else:
            z = z - 2 * step * fz + step * f_prev
        f_prev = fz
        if _blown_up(z):
            return _record(problem, zs, True)
        zs.append(z)
    return _record(problem, zs, False)


def baseline_polynomial(method: str, step: float, T: int) -> Polynomial:
    """Residual polynomial ``p_T`` with ``z_T - z* = p_T(JH)(z_0 - z*)``."""
    lam = Polynomial([0, 1])
    if method == "gda_const":
        factor = 1 - step * lam
    elif method == "extragradient":
        factor = 1 - step * lam + step**2 * lam * lam
    elif method == "ogda":
        prev, cur = Polynomial.constant(1.0), Polynomial.constant(1.0)
        for _ in range(T):
            prev, cur = cur, cur - 2 * step * lam * cur + step * lam * prev
        return cur
    else:
        raise ValueError(f"unknown baseline {method!r}")
    p = Polynomial.constant(1.0)
    for _ in range(T):
        p = p * factor
    return p


def apply_symmetric_polynomial(p: Polynomial, problem: QuadraticSaddleProblem, z0):
    """``z* + p(JH)(z0 - z*)`` by Horner on matrix-vector products."""
    if abs(p.coefficients[0] - 1) > 1e-12:
        raise ValueError("symmetric polynomial must satisfy p(0) = 1")
    u = check_vector(z0, problem.dim, "z0") - problem.z_star
    JH = problem.JH
    coef = p.coef
    v = coef[-1] * u.astype(complex)
    for c in coef[-2::-1]:
        v = JH @ v + c * u
    if p.is_real:
        v = v.real
    return problem.z_star + v


def _pair_roots(roots, rtol: float = 1e-9):
    """Split roots into real roots and one representative per conjugate pair."""
    roots = [complex(r) for r in roots]
    real, pairs = [], []
    pending = list(roots)
    while pending:
        r = pending.pop(0)
        if r == 0:
            raise ValueError("roots must be nonzero")
        if abs(r.imag) <= rtol * abs(r):
            real.append(r.real)
            continue
        j = next(
            (k for k, s in enumerate(pending) if abs(s - r.conjugate()) <= 1e-7 * abs(r)), None
        )
        if j is None:
            raise ValueError(f"complex root {r} has no conjugate partner")
        pending.pop(j)
        pairs.append(r if r.imag > 0 else r.conjugate())
    return real, pairs


def apply_asymmetric_roots(roots: Sequence[complex], problem: QuadraticSaddleProblem, z0):
    """Realize ``prod_k (I - H/r_k)(z0 - z*)`` with gradient steps only.

    A real root is one step ``x -= g_x / r``, ``y -= g_y / r``. A conjugate
    pair is fused into the real factor ``I - a H + b H^2``, using
    ``H g = grad f(z + g) - grad f(z)``.
    """
    real, pairs = _pair_roots(roots)
    z = check_vector(z0, problem.dim, "z0")
    grad = problem.gradient
    for r in real:
        z = z - grad(z) / r
    for r in pairs:
        a = 2 * r.real / abs(r) ** 2
        b = 1 / abs(r) ** 2
        g = grad(z)
        Hg = grad(z + g) - g
        z = z - a * g + b * Hg
    return z


def apply_asymmetric_polynomial(p: Polynomial, problem: QuadraticSaddleProblem, z0):
    """``z* + p(H)(z0 - z*)`` through the GDA realization of ``p``'s roots."""
    if not NormalizationClass.P(p.degree).contains(p):
        raise ValueError("asymmetric polynomial must satisfy p(0) = 1")
    coef = p.coef[: p.degree + 1]
    if coef.size == 1:
        return check_vector(z0, problem.dim, "z0")
    if np.any(np.abs(coef.imag) > 1e-12 * np.abs(coef).max()):
        raise ValueError("polynomial must have real coefficients to keep iterates real")
    roots = np.roots(coef.real[::-1])
    return apply_asymmetric_roots(roots, problem, z0)
