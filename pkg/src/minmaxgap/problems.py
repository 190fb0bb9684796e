"""Quadratic saddle problems, spectral sets and spectral measures.

A problem is ``f(x, y) = 1/2 (z - z*)^T H (z - z*)`` with
``H = [[A, B], [B^T, -C]]``. The min-max gradient is ``H (z - z*)`` and the
VI saddle operator is ``J H (z - z*)`` with ``J = diag(I, -I)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .validation import as_matrix, check_vector

__all__ = [
    "QuadraticSaddleProblem",
    "SpectralSet",
    "SpectralMeasure",
    "make_problem",
    "saddle_gradient",
    "eigenvalues_saddle_operator",
    "random_instance",
    "hard_instance",
    "ConstructionError",
    "EIG_TOL",
]

EIG_TOL = 1e-8


class ConstructionError(RuntimeError):
    """Random instance generation could not satisfy the requested constants."""


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuadraticSaddleProblem:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    z_star: np.ndarray
    mu: float
    L: float

    @property
    def dx(self) -> int:
        return self.A.shape[0]

    @property
    def dy(self) -> int:
        return self.C.shape[0]

    @property
    def dim(self) -> int:
        return self.dx + self.dy

    @property
    def kappa(self) -> float:
        return self.L / self.mu if self.mu > 0 else np.inf

    @property
    def H(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.B.T, -self.C]])

    @property
    def J(self) -> np.ndarray:
        return np.diag(np.concatenate([np.ones(self.dx), -np.ones(self.dy)]))

    @property
    def JH(self) -> np.ndarray:
        return np.block([[self.A, self.B], [-self.B.T, self.C]])

    def gradient(self, z) -> np.ndarray:
        """``grad f(z) = H (z - z*)``."""
        z = check_vector(z, self.dim)
        return self.H @ (z - self.z_star)

    def saddle_operator(self, z) -> np.ndarray:
        """``F(z) = (grad_x f, -grad_y f) = J H (z - z*)``."""
        g = self.gradient(z)
        g[self.dx:] *= -1
        return g

    def split(self, z):
        z = np.asarray(z)
        return z[: self.dx], z[self.dx:]

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "z_star": self.z_star.tolist(),
            "mu": self.mu,
            "L": self.L,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "QuadraticSaddleProblem":
        dx, dy = len(d["A"]), len(d["C"])
        B = np.array(d["B"], dtype=float).reshape(dx, dy)
        return cls(
            _frozen(np.array(d["A"], dtype=float).reshape(dx, dx)),
            _frozen(B),
            _frozen(np.array(d["C"], dtype=float).reshape(dy, dy)),
            _frozen(d["z_star"]),
            float(d["mu"]),
            float(d["L"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "QuadraticSaddleProblem":
        return cls.from_dict(json.loads(text))


def make_problem(A, B, C, z_star=None) -> QuadraticSaddleProblem:
    """Symmetrize ``A``, ``C``, certify ``mu = min(lmin(A), lmin(C))`` and ``L = ||H||``."""
    A = as_matrix(A, "A")
    C = as_matrix(C, "C")
    if A.shape[0] != A.shape[1] or C.shape[0] != C.shape[1]:
        raise ValueError("A and C must be square")
    dx, dy = A.shape[0], C.shape[0]
    B = np.asarray(B, dtype=float).reshape(dx, dy)
    A = (A + A.T) / 2
    C = (C + C.T) / 2
    lmin_a = np.linalg.eigvalsh(A)[0]
    lmin_c = np.linalg.eigvalsh(C)[0]
    if lmin_a < -1e-12 or lmin_c < -1e-12:
        raise ValueError(
            f"objective is not convex-concave: lambda_min(A) = {lmin_a:.3g}, "
            f"lambda_min(C) = {lmin_c:.3g}"
        )
    mu = max(float(min(lmin_a, lmin_c)), 0.0)
    H = np.block([[A, B], [B.T, -C]])
    L = float(np.linalg.norm(H, 2))
    if z_star is None:
        z_star = np.zeros(dx + dy)
    z_star = check_vector(z_star, dx + dy, "z_star")
    return QuadraticSaddleProblem(_frozen(A), _frozen(B), _frozen(C), _frozen(z_star), mu, L)


def saddle_gradient(problem: QuadraticSaddleProblem, z):
    """Return ``(grad f(z), F(z))``."""
    return problem.gradient(z), problem.saddle_operator(z)


def eigenvalues_saddle_operator(problem: QuadraticSaddleProblem) -> np.ndarray:
    return np.linalg.eigvals(problem.JH)


@dataclass(frozen=True)
class SpectralSet:
    """``HalfDisc``: ``{|z| <= L, Re z >= mu}``; ``SymmetricIntervals``: ``[-L,-mu] U [mu,L]``."""

    kind: str
    mu: float
    L: float

    def __post_init__(self):
        if self.kind not in ("HalfDisc", "SymmetricIntervals"):
            raise ValueError(f"unknown spectral set kind {self.kind!r}")
        if self.mu < 0 or self.L <= 0 or self.mu > self.L:
            raise ValueError("need 0 <= mu <= L and L > 0")

    @classmethod
    def halfdisc(cls, mu: float, L: float) -> "SpectralSet":
        return cls("HalfDisc", mu, L)

    @classmethod
    def intervals(cls, mu: float, L: float) -> "SpectralSet":
        return cls("SymmetricIntervals", mu, L)

    @property
    def kappa(self) -> float:
        return self.L / self.mu if self.mu > 0 else np.inf

    @property
    def half_height(self) -> float:
        """Imaginary extent of the straight edge of the half-disc."""
        return float(np.sqrt(self.L**2 - self.mu**2))

    @property
    def diameter(self) -> float:
        if self.kind == "SymmetricIntervals":
            return 2 * self.L
        h = self.half_height
        return float(max(2 * h, np.hypot(self.L - self.mu, h)))

    def contains(self, lam, tol: float = EIG_TOL):
        lam = np.asarray(lam, dtype=complex)
        if self.kind == "HalfDisc":
            return (np.abs(lam) <= self.L + tol) & (lam.real >= self.mu - tol)
        a = np.abs(lam.real)
        return (np.abs(lam.imag) <= tol) & (a >= self.mu - tol) & (a <= self.L + tol)

    def contains_zero(self) -> bool:
        return bool(self.contains(0.0, tol=0.0))


@dataclass(frozen=True)
class SpectralMeasure:
    """Finitely supported, conjugation-invariant probability measure."""

    atoms: tuple[tuple[complex, float], ...]
    support_set: SpectralSet | None = field(default=None, compare=False)

    def __init__(self, atoms: Iterable[tuple[complex, float]], support_set: SpectralSet | None = None,
                 tol: float = 1e-12):
        atoms = tuple((complex(l), float(w)) for l, w in atoms)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "support_set", support_set)
        self.validate(tol)

    def validate(self, tol: float = 1e-12):
        if not self.atoms:
            raise ValueError("measure has no atoms")
        w = self.weights
        if np.any(w <= 0):
            raise ValueError("atom weights must be positive")
        if abs(w.sum() - 1) > tol:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        lookup = {}
        for lam, wt in self.atoms:
            lookup[lam] = lookup.get(lam, 0.0) + wt
        for lam, wt in lookup.items():
            if lam.imag != 0:
                partner = lookup.get(lam.conjugate())
                if partner is None or abs(partner - wt) > tol:
                    raise ValueError(f"measure is not conjugation-invariant at {lam}")
        if self.support_set is not None and not np.all(
            self.support_set.contains(self.points, tol=EIG_TOL)
        ):
            raise ValueError("atom outside the declared spectral set")

    @property
    def points(self) -> np.ndarray:
        return np.array([a[0] for a in self.atoms], dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a[1] for a in self.atoms], dtype=float)

    def expectation(self, values) -> float:
        return float(np.sum(self.weights * np.asarray(values)))

    def mean_square(self, p) -> float:
        """``E_nu |p(lam)|^2`` for a callable ``p``."""
        return self.expectation(np.abs(p(self.points)) ** 2)

    @classmethod
    def symmetrized(cls, points: Sequence[complex], weights: Sequence[float],
                    support_set: SpectralSet | None = None, prune: float = 0.0) -> "SpectralMeasure":
        """Average a weighting with its conjugate reflection and normalize.

        Atoms whose weight falls below ``prune`` times the largest weight are
        dropped before renormalizing.
        """
        pts = np.asarray(points, dtype=complex)
        w = np.clip(np.asarray(weights, dtype=float), 0, None)
        mass: dict[complex, float] = {}
        for lam, wt in zip(pts, w):
            lam = complex(lam)
            if lam.imag == 0:
                lam = complex(lam.real, 0.0)
                mass[lam] = mass.get(lam, 0.0) + wt
            else:
                mass[lam] = mass.get(lam, 0.0) + wt / 2
                mass[lam.conjugate()] = mass.get(lam.conjugate(), 0.0) + wt / 2
        top = max(mass.values())
        if top <= 0:
            raise ValueError("all weights vanish")
        keep = {l: m for l, m in mass.items() if m > prune * top}
        # the pair check must see identical weights after pruning
        keep = {l: m for l, m in keep.items() if l.imag == 0 or l.conjugate() in keep}
        total = sum(keep.values())
        ordered = sorted(keep.items(), key=lambda kv: (kv[0].real, kv[0].imag))
        atoms = [(l, m / total) for l, m in ordered]
        # normalization can leave pair weights unequal in the last ulp
        fixed = []
        for l, m in atoms:
            if l.imag != 0:
                m = (keep[l] + keep[l.conjugate()]) / (2 * total)
            fixed.append((l, m))
        return cls(fixed, support_set)


def _orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def _random_block(rng: np.random.Generator, mu: float, L: float):
    """One 2x2 block ``(a, b, c)`` of ``H = [[a, b], [b, -c]]`` with a, c in [mu, L], ||block|| <= L."""
    a, c = rng.uniform(mu, L, size=2)
    b = rng.uniform(-L, L)
    for _ in range(60):
        disc = np.hypot((a + c) / 2, b)
        if abs(a - c) / 2 + disc <= L:
            return a, b, c
        b *= 0.7
    return a, 0.0, c


def random_instance(mu: float, L: float, dx: int, dy: int, seed=None,
                    max_attempts: int = 100) -> QuadraticSaddleProblem:
    """Random problem with ``A, C >= mu I`` and ``||H|| <= L``.

    Built from 2x2 blocks ``[[a, b], [b, -c]]`` coupling ``x_j`` with ``y_j``
    (plus diagonal entries for unpaired coordinates), conjugated by a
    block-orthogonal ``diag(Qx, Qy)`` which preserves the saddle structure.
    The generator is seeded per call; the same seed gives bitwise-identical
    problems.
    """
    if not 0 <= mu <= L or L <= 0:
        raise ValueError("need 0 <= mu <= L, L > 0")
    if dx < 1 or dy < 1:
        raise ValueError("dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    m = min(dx, dy)
    for _ in range(max_attempts):
        A0 = np.zeros((dx, dx))
        C0 = np.zeros((dy, dy))
        B0 = np.zeros((dx, dy))
        for j in range(m):
            a, b, c = _random_block(rng, mu, L)
            A0[j, j], B0[j, j], C0[j, j] = a, b, c
        for j in range(m, dx):
            A0[j, j] = rng.uniform(mu, L)
        for j in range(m, dy):
            C0[j, j] = rng.uniform(mu, L)
        Qx, Qy = _orthogonal(rng, dx), _orthogonal(rng, dy)
        z_star = rng.normal(size=dx + dy)
        prob = make_problem(Qx @ A0 @ Qx.T, Qx @ B0 @ Qy.T, Qy @ C0 @ Qy.T, z_star)
        if prob.mu >= mu - 1e-10 and prob.L <= L + 1e-10:
            return prob
    raise ConstructionError(f"no valid instance after {max_attempts} attempts")


def hard_instance(measure: SpectralMeasure, seed=None):
    """Block-diagonal instance whose JH spectrum is the support of ``measure``.

    Returns ``(problem, z0)`` with ``z0 = 0`` and ``||z0 - z*|| = 1``; for any
    polynomial ``p``, ``||p(JH)(z0 - z*)||**2 = E_nu |p|**2``. With ``seed``,
    the instance is additionally conjugated by a random ``diag(Qx, Qy)``.
    """
    measure.validate()
    mass: dict[complex, float] = {}
    for lam, w in measure.atoms:
        mass[lam] = mass.get(lam, 0.0) + w
    upper = sorted((l for l in mass if l.imag >= 0), key=lambda l: (l.real, l.imag))
    m = len(upper)
    re = np.array([l.real for l in upper])
    im = np.array([l.imag for l in upper])
    coeff = np.array(
        [np.sqrt(mass[l] / 2) if l.imag == 0 else np.sqrt(mass[l]) for l in upper]
    )
    A = np.diag(re)
    B = np.diag(im)
    z0 = np.zeros(2 * m)
    z_star = z0 - np.concatenate([coeff, coeff])
    if seed is not None:
        rng = np.random.default_rng(seed)
        Qx, Qy = _orthogonal(rng, m), _orthogonal(rng, m)
        A, B, C = Qx @ A @ Qx.T, Qx @ B @ Qy.T, Qy @ A @ Qy.T
        Q = np.block([[Qx, np.zeros((m, m))], [np.zeros((m, m)), Qy]])
        z_star = Q @ z_star
    else:
        C = A.copy()
    problem = make_problem(A, B, C, z_star)
    return problem, z0
