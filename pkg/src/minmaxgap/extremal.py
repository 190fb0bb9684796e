"""Extremal polynomial problems on spectral sets.

Solves ``min max_{lam in S} |p(lam)|`` over ``P(T)`` (``p(0) = 1``) or
``Q(T+1)`` (``q(0) = 0, q'(0) = 1``) on a finite boundary mesh ``S``.

The solver works in an orthonormal polynomial basis on the mesh (Arnoldi on
the diagonal operator ``diag(S)``), runs Lawson's iteratively reweighted
least squares as a warm start, and then an exchange phase: a cutting-plane
LP over tangent cuts ``Re(exp(-i theta) e_j) <= t`` of the modulus. The LP
multipliers form a probability measure on the mesh whose weighted
least-squares value is a weak-duality lower bound, which is what certifies
convergence. On conjugation-closed meshes everything is done with real
coefficients on the upper half of the mesh.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .conformal import (
    NORMAL_DERIVATIVE_CONSTANT,
    HalfDiscRegion,
    green_halfdisc,
)
from .poly import Polynomial
from .problems import SpectralMeasure, SpectralSet
from .validation import check_points

__all__ = [
    "BoundaryMesh",
    "MeshTooLargeError",
    "MinimaxCertificate",
    "ArnoldiBasis",
    "ExtremalPolynomial",
    "green_function",
    "green_max_on_collar",
    "build_mesh",
    "minimax_P",
    "minimax_Q",
    "dual_measure",
    "min_mean_square",
    "moment_matrix",
    "symmetrize_polynomial",
    "bernstein_margin",
    "sampling_ratio",
    "is_conjugation_closed",
]


class MeshTooLargeError(RuntimeError):
    def __init__(self, required_delta: float, n_points: int, max_points: int):
        super().__init__(
            f"spacing {required_delta:.3e} needs ~{n_points} points (cap {max_points}); "
            "relax eps or pass an explicit delta"
        )
        self.required_delta = required_delta
        self.n_points = n_points


# --------------------------------------------------------------------------
# Green's functions and meshes
# --------------------------------------------------------------------------

def _interval_green(w, a: float, b: float):
    """Green's function of the real interval ``[a, b]``."""
    u = (2 * np.asarray(w, dtype=complex) - a - b) / (b - a)
    s = np.sqrt(u - 1) * np.sqrt(u + 1)
    return np.log(np.maximum(np.abs(u + s), np.abs(u - s)))


def green_function(spectral_set: SpectralSet, lam):
    """Green's function of the set, or an upper bound for it.

    For two symmetric intervals this is exact: the set is the preimage of
    ``[mu^2, L^2]`` under ``lam**2``, so ``g = g_{[mu^2, L^2]}(lam^2) / 2``.
    For ``HalfDisc(mu, L)`` the Green's function of the inscribed half-disc
    centered at ``mu`` with radius ``L - mu`` is returned; it dominates the
    true one (smaller set, larger Green's function) and coincides with it
    when ``mu = 0``.
    """
    lam = np.asarray(lam, dtype=complex)
    mu, L = spectral_set.mu, spectral_set.L
    if spectral_set.kind == "SymmetricIntervals":
        if mu == L:
            raise ValueError("degenerate interval set has no Green's function")
        g = 0.5 * _interval_green(lam**2, mu**2, L**2)
        return np.where(spectral_set.contains(lam, tol=0.0), 0.0, g)
    if mu == L:
        raise ValueError("degenerate half-disc has no Green's function")
    region = HalfDiscRegion(mu, L)
    out = np.zeros(lam.shape)
    outside = ~region.contains(lam)
    out[outside] = green_halfdisc(lam[outside], region)
    return out


def _boundary(spectral_set: SpectralSet, n: int) -> np.ndarray:
    """Roughly ``n`` boundary samples, conjugation-closed, used for collars."""
    return _mesh_points(spectral_set, spectral_set.diameter / max(n, 8))


def green_max_on_collar(spectral_set: SpectralSet, n_boundary: int = 200,
                        n_angles: int = 64) -> float:
    """Max of the Green's function over points within distance 1 of the set.

    Sampled on unit circles around boundary points: every sample lies in
    the collar, and the union of the circles covers its outer edge, where
    the maximum sits.
    """
    b = _boundary(spectral_set, n_boundary)
    ring = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    samples = (b[:, None] + ring[None, :]).ravel()
    return float(np.max(green_function(spectral_set, samples)))


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    points: np.ndarray
    delta: float
    parent: SpectralSet
    eps: float = 0.5
    guaranteed_delta: float = float("nan")

    def __len__(self):
        return len(self.points)


def _uniform(a: float, b: float, delta: float) -> np.ndarray:
    """Points from ``a`` to ``b`` (inclusive) with spacing at most ``delta``."""
    if b <= a:
        return np.array([a])
    n = max(int(math.ceil((b - a) / delta)), 1)
    return np.linspace(a, b, n + 1)


def _mesh_points(spectral_set: SpectralSet, delta: float) -> np.ndarray:
    mu, L = spectral_set.mu, spectral_set.L
    if spectral_set.kind == "SymmetricIntervals":
        if mu == L:
            return np.array([-L, L], dtype=complex)
        right = _uniform(mu, L, delta)
        left = -right[::-1]
        if mu == 0:
            left = left[:-1]
        return np.concatenate([left, right]).astype(complex)
    if mu == L:
        return np.array([L], dtype=complex)
    h = spectral_set.half_height
    # upper half: straight edge from mu to the corner, arc from the corner to L
    seg = mu + 1j * _uniform(0.0, h, delta)
    phi = math.atan2(h, mu)
    arc = L * np.exp(1j * _uniform(0.0, phi, delta / L))
    upper = np.concatenate([seg, arc[:-1]])
    lower = np.conj(upper[(upper.imag > 0)])
    return np.concatenate([upper, lower])


def build_mesh(spectral_set: SpectralSet, T: int, eps: float, delta: float | None = None,
               max_points: int = 200_000) -> BoundaryMesh:
    """Conjugation-closed ``delta``-net of the boundary of a spectral set.

    Without ``delta``, the spacing is ``eps * exp(-T * g_max)`` with
    ``g_max`` the Green's function maximum on the unit-width collar; this
    guarantees ``max_S |p| >= (1 - eps) max_set |p|`` for ``deg p <= T``
    but is exponentially small in ``T``, so large requests raise
    :class:`MeshTooLargeError` carrying the required spacing. An explicit
    ``delta`` overrides the formula (adequacy is then checked empirically,
    see :func:`sampling_ratio`). Spacing never exceeds ``diameter / 8``.
    Anchors (``mu``, the corners ``mu +- i h`` and ``L``; interval endpoints) are always
    included.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if T < 1:
        raise ValueError("T must be >= 1")
    degenerate = spectral_set.mu == spectral_set.L
    cap = spectral_set.diameter / 8 if spectral_set.diameter > 0 else 1.0
    guaranteed_delta = math.nan
    if not degenerate:
        guaranteed_delta = eps * math.exp(-T * green_max_on_collar(spectral_set))
    spacing = guaranteed_delta if delta is None else float(delta)
    if not degenerate:
        if not spacing > 0:
            raise ValueError("delta must be positive")
        spacing = min(spacing, cap)
        perimeter = (
            2 * (spectral_set.L - spectral_set.mu)
            if spectral_set.kind == "SymmetricIntervals"
            else 2 * spectral_set.half_height
            + 2 * spectral_set.L * math.atan2(spectral_set.half_height, spectral_set.mu)
        )
        estimate = int(perimeter / spacing) + 8
        if estimate > max_points:
            raise MeshTooLargeError(spacing, estimate, max_points)
    else:
        spacing = cap
    pts = _mesh_points(spectral_set, spacing)
    pts.setflags(write=False)
    return BoundaryMesh(pts, float(spacing), spectral_set, float(eps), guaranteed_delta)


def is_conjugation_closed(points, tol: float = 0.0) -> bool:
    pts = np.asarray(points, dtype=complex)
    key = lambda z: (np.round(z.real, 14), np.round(abs(z.imag), 14))
    a = sorted(key(z) for z in pts if z.imag > tol)
    b = sorted(key(z) for z in pts if z.imag < -tol)
    return a == b


def sampling_ratio(p, mesh_points, reference_points) -> float:
    """``max_mesh |p| / max_reference |p|`` (at least ``1 - eps`` on an adequate mesh)."""
    return float(np.max(np.abs(p(mesh_points))) / np.max(np.abs(p(reference_points))))


# --------------------------------------------------------------------------
# Orthonormal basis on the mesh
# --------------------------------------------------------------------------

class ArnoldiBasis:
    """Orthonormal basis of ``span{s(lam) lam^k : k < n}`` on a point set.

    ``s`` is ``lam`` for the P class (``p = 1 + lam * r``) and ``lam**2``
    for the Q class (``q = lam + lam**2 * r``). Stops early on breakdown
    (basis dimension cannot exceed the number of distinct points).
    """

    def __init__(self, points, offset: int, n: int, real: bool = False):
        self.points = np.asarray(points, dtype=complex)
        self.offset = offset
        self.real = real
        z = self.points
        start = z**offset
        beta = np.linalg.norm(start)
        cols = []
        H = np.zeros((n + 1, n), dtype=complex)
        if n > 0 and beta > 0:
            cols.append(start / beta)
            for k in range(n - 1):
                v = z * cols[k]
                Qk = np.column_stack(cols)
                for _ in range(2):
                    h = Qk.conj().T @ v
                    v = v - Qk @ h
                    H[: k + 1, k] += h
                nv = np.linalg.norm(v)
                scale = max(np.max(np.abs(z)), 1.0)
                if nv <= 1e-13 * scale:
                    break
                H[k + 1, k] = nv
                cols.append(v / nv)
        self.beta = beta
        self.dim = len(cols)
        self.H = H[: self.dim + 1, : self.dim]
        if real:
            self.H = self.H.real.astype(complex)
        self.Q = np.column_stack(cols) if cols else np.zeros((len(z), 0), complex)

    def evaluate(self, lam) -> np.ndarray:
        """Basis values at arbitrary points, by the Arnoldi recurrence."""
        lam = np.atleast_1d(np.asarray(lam, dtype=complex))
        out = np.zeros((lam.size, self.dim), dtype=complex)
        if self.dim == 0:
            return out
        out[:, 0] = lam**self.offset / self.beta
        for k in range(self.dim - 1):
            v = lam * out[:, k] - out[:, : k + 1] @ self.H[: k + 1, k]
            out[:, k + 1] = v / self.H[k + 1, k]
        return out

    def monomials(self) -> np.ndarray:
        """Matrix whose column ``k`` holds the monomial coefficients of basis polynomial ``k``."""
        size = self.offset + self.dim
        M = np.zeros((size, self.dim), dtype=complex)
        if self.dim == 0:
            return M
        M[self.offset, 0] = 1 / self.beta
        for k in range(self.dim - 1):
            v = np.zeros(size, dtype=complex)
            v[1:] = M[:-1, k]
            v -= M[:, : k + 1] @ self.H[: k + 1, k]
            M[:, k + 1] = v / self.H[k + 1, k]
        return M


# --------------------------------------------------------------------------
# Solver core
# --------------------------------------------------------------------------

@dataclass
class _Work:
    """Working problem ``e = b + G v`` over real ``v`` on the working points."""

    b: np.ndarray
    G: np.ndarray
    mult: np.ndarray  # how many mesh points each working point stands for
    index: np.ndarray  # positions of the working points in the full mesh


def _weighted_ls(work: _Work, w: np.ndarray):
    sw = np.sqrt(w)
    A = np.vstack([(sw[:, None] * work.G).real, (sw[:, None] * work.G).imag])
    rhs = -np.concatenate([(sw * work.b).real, (sw * work.b).imag])
    if work.G.shape[1] == 0:
        v = np.zeros(0)
    else:
        v = np.linalg.lstsq(A, rhs, rcond=None)[0]
    e = work.b + work.G @ v
    return v, e, float(np.sqrt(max(np.sum(w * np.abs(e) ** 2), 0.0)))


def _lp_round(work: _Work, cuts_j, cuts_theta, scale, v_center, radius):
    nv = work.G.shape[1]
    rot = np.exp(-1j * cuts_theta)
    rows = rot[:, None] * work.G[cuts_j]
    A = np.hstack([rows.real, -np.ones((len(cuts_j), 1))])
    rhs = -(rot * work.b[cuts_j]).real / scale
    A[:, :nv] /= scale
    cost = np.zeros(nv + 1)
    cost[-1] = 1.0
    bounds = [(c - radius, c + radius) for c in v_center] + [(None, None)]
    res = linprog(
        cost, A_ub=A, b_ub=rhs, bounds=bounds, method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0 or res.x is None:
        return None
    y = np.clip(-res.ineqlin.marginals, 0, None)
    return res.x[:nv], res.x[-1] * scale, y


def _solve(work: _Work, tol: float, max_iter: int, max_exchange: int, warm_iter: int = 60):
    m = len(work.b)
    w = work.mult / work.mult.sum()

    best = None
    lower, weights = 0.0, w
    n_iter = n_exchange = 0

    def consider(v, e):
        nonlocal best
        hi = float(np.max(np.abs(e)))
        if best is None or hi < best[1]:
            best = (v, hi, e)

    # Lawson warm start
    for n_iter in range(1, max_iter + 1):
        v, e, lo = _weighted_ls(work, w)
        consider(v, e)
        if lo > lower:
            lower, weights = lo, w
        # exact interpolation (e.g. fewer points than unknowns)
        if best[1] <= tol * max(1.0, float(np.max(np.abs(work.b)))) * 1e-3:
            return best, lower, weights, True, n_iter, n_exchange
        if best[1] - lower <= tol * best[1]:
            return best, lower, weights, True, n_iter, n_exchange
        if n_iter >= warm_iter and max_exchange > 0:
            break
        w = w * np.abs(e)
        w = w / w.sum()

    # exchange phase
    if max_exchange > 0 and work.G.shape[1] > 0:
        v0, hi0, e0 = best
        near = np.flatnonzero(np.abs(e0) >= 0.5 * hi0)
        offsets = np.array([0.0, -0.1, 0.1, -0.4, 0.4])
        cuts_j = np.repeat(near, offsets.size)
        cuts_theta = (np.angle(e0[near])[:, None] + offsets[None, :]).ravel()
        radius = 10.0 * max(1.0, float(np.max(np.abs(v0))))
        for n_exchange in range(1, max_exchange + 1):
            out = _lp_round(work, cuts_j, cuts_theta, hi0, v0, radius)
            if out is None:
                break
            v, t_lp, y = out
            e = work.b + work.G @ v
            consider(v, e)
            nu = np.bincount(cuts_j, weights=y, minlength=m)
            if nu.sum() > 0:
                nu = nu / nu.sum()
                _, _, lo = _weighted_ls(work, nu)
                if lo > lower:
                    lower, weights = lo, nu
            if best[1] - lower <= tol * best[1]:
                return best, lower, weights, True, n_iter, n_exchange
            a = np.abs(e)
            viol = np.flatnonzero(a > t_lp * (1 + tol / 4))
            viol = viol[np.argsort(-a[viol])][: 4 * max(work.G.shape[1], 1)]
            if viol.size == 0:
                break
            cuts_j = np.concatenate([cuts_j, viol])
            cuts_theta = np.concatenate([cuts_theta, np.angle(e[viol])])

    # fall back to more Lawson sweeps from the best weights
    w = weights
    for _ in range(max(max_iter - n_iter, 0)):
        n_iter += 1
        v, e, lo = _weighted_ls(work, w)
        consider(v, e)
        if lo > lower:
            lower, weights = lo, w
        if best[1] - lower <= tol * best[1]:
            return best, lower, weights, True, n_iter, n_exchange
        w = w * np.abs(e)
        w = w / w.sum()
    return best, lower, weights, False, n_iter, n_exchange


class ExtremalPolynomial(BaseEstimator):
    """Minimax polynomial on a finite point set.

    ``fit(X)`` takes the mesh points; ``predict(X)`` evaluates the fitted
    polynomial. ``normalization`` is ``"P"`` (``p(0) = 1``, degree
    ``degree``) or ``"Q"`` (``q(0) = 0``, ``q'(0) = 1``, degree
    ``degree + 1``).

    Attributes
    ----------
    value_ : max of ``|p|`` over the fitted points (an upper bound on the optimum).
    lower_bound_ : weak-duality lower bound ``sqrt(E_nu |p_nu|^2)``.
    gap_ : ``1 - lower_bound_ / value_``.
    weights_ : dual measure masses per fitted point.
    polynomial_ : the fitted :class:`Polynomial` in monomial form.
    converged_, n_iter_, n_exchange_
    """

    def __init__(self, normalization: str = "P", degree: int = 2, tol: float = 1e-6,
                 max_iter: int = 500, max_exchange: int = 200):
        self.normalization = normalization
        self.degree = degree
        self.tol = tol
        self.max_iter = max_iter
        self.max_exchange = max_exchange

    def _validate_params(self):
        if self.normalization not in ("P", "Q"):
            raise ValueError("normalization must be 'P' or 'Q'")
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be an integer >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def fit(self, X, y=None):
        self._validate_params()
        pts = check_points(X)
        T = int(self.degree)
        offset = 1 if self.normalization == "P" else 2
        real = is_conjugation_closed(pts)
        basis = ArnoldiBasis(pts, offset, T, real=real)
        b_full = np.ones(pts.size, complex) if offset == 1 else pts.copy()
        if real:
            # real coefficients: the lower half mirrors the upper half
            index = np.flatnonzero(pts.imag >= 0)
            G = basis.Q[index]
            mult = np.where(pts[index].imag > 0, 2.0, 1.0)
        else:
            index = np.arange(pts.size)
            G = np.hstack([basis.Q, 1j * basis.Q])
            mult = np.ones(pts.size)
        work = _Work(b_full[index], G, mult, index)
        (v, value, e), lower, weights, converged, n_iter, n_exch = _solve(
            work, self.tol, self.max_iter, self.max_exchange
        )
        coef_basis = v if real else v[: basis.dim] + 1j * v[basis.dim:]
        self.basis_ = basis
        self.basis_coef_ = coef_basis
        self.points_ = pts
        self.real_mode_ = real
        self.value_ = float(value)
        self.lower_bound_ = float(min(lower, value))
        self.gap_ = 0.0 if value == 0 else float(1 - self.lower_bound_ / value)
        full = np.zeros(pts.size)
        full[index] = weights
        self.weights_ = full
        self.converged_ = bool(converged)
        self.n_iter_ = n_iter
        self.n_exchange_ = n_exch
        mono = np.zeros(offset + basis.dim, dtype=complex)
        mono[offset - 1] = 1.0
        if basis.dim:
            mono += basis.monomials() @ coef_basis
        if real:
            mono = mono.real.astype(complex)
        self.polynomial_ = Polynomial(mono, T if offset == 1 else T + 1)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "basis_coef_")
        lam = np.atleast_1d(np.asarray(X, dtype=complex))
        base = np.ones_like(lam) if self.basis_.offset == 1 else lam
        return base + self.basis_.evaluate(lam) @ self.basis_coef_

    def measure(self, support_set: SpectralSet | None = None, prune: float = 1e-10) -> SpectralMeasure:
        """The dual measure as a conjugation-invariant :class:`SpectralMeasure`."""
        check_is_fitted(self, "weights_")
        return SpectralMeasure.symmetrized(self.points_, self.weights_, support_set, prune=prune)


# --------------------------------------------------------------------------
# Certificates
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MinimaxCertificate:
    value: float
    polynomial: Polynomial
    mesh: BoundaryMesh | None
    inner_tolerance: float
    lower_witness: float
    dual_bound: float
    gap: float
    converged: bool
    normalization: str
    degree: int
    witness_source: str
    estimator: ExtremalPolynomial | None = field(default=None, repr=False)

    @property
    def mesh_size(self) -> int:
        return 0 if self.mesh is None else len(self.mesh)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower_witness": self.lower_witness,
            "gap": self.gap,
            "degree": self.degree,
            "mesh_size": self.mesh_size,
            "coefficients": [[c.real, c.imag] for c in self.polynomial.coefficients],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _mesh_and_points(mesh):
    if isinstance(mesh, BoundaryMesh):
        return mesh, mesh.points
    return None, check_points(mesh, "mesh")


def _analytic_witness(spectral_set: SpectralSet, T: int) -> float | None:
    """Bernstein-Walsh bound ``exp(-T g(0))`` on the continuum P-class optimum."""
    if spectral_set.contains_zero():
        return 0.0
    if spectral_set.mu == spectral_set.L:
        return 0.0
    if spectral_set.kind == "SymmetricIntervals":
        k = spectral_set.kappa
        return ((k - 1) / (k + 1)) ** (T / 2)
    g0 = float(green_function(spectral_set, 0.0))
    return math.exp(-T * g0)


def _certificate(mesh, T: int, tol: float, normalization: str, **kw) -> MinimaxCertificate:
    parent, pts = _mesh_and_points(mesh)
    est = ExtremalPolynomial(normalization, T, tol, **kw).fit(pts)
    witness, source = est.lower_bound_, "dual"
    if normalization == "P" and parent is not None:
        witness = _analytic_witness(parent.parent, T)
        source = "bernstein_walsh"
    return MinimaxCertificate(
        value=est.value_,
        polynomial=est.polynomial_,
        mesh=parent,
        inner_tolerance=tol * est.value_,
        lower_witness=float(witness),
        dual_bound=est.lower_bound_,
        gap=est.gap_,
        converged=est.converged_,
        normalization=normalization,
        degree=T,
        witness_source=source,
        estimator=est,
    )


def minimax_P(mesh, T: int, tol: float = 1e-6, **kw) -> MinimaxCertificate:
    """``min_{p(0)=1, deg p <= T} max_mesh |p|``."""
    return _certificate(mesh, T, tol, "P", **kw)


def minimax_Q(mesh, T: int, tol: float = 1e-6, **kw) -> MinimaxCertificate:
    """``min_{q(0)=0, q'(0)=1, deg q <= T+1} max_mesh |q|``."""
    return _certificate(mesh, T, tol, "Q", **kw)


# --------------------------------------------------------------------------
# Dual measures
# --------------------------------------------------------------------------

def moment_matrix(measure: SpectralMeasure, T: int) -> np.ndarray:
    """``M[s, t] = E_nu Re(lam^s conj(lam)^t)`` for ``s, t <= T``."""
    lam = measure.points
    V = lam[:, None] ** np.arange(T + 1)[None, :]
    return np.real(np.einsum("j,js,jt->st", measure.weights, V, V.conj()))


def min_mean_square(measure: SpectralMeasure, T: int) -> float:
    """``min over real-coefficient p in P(T) of E_nu |p|^2``.

    Weighted Arnoldi on the atoms: the optimum is the residual of ``1``
    after projecting onto ``span{lam, ..., lam^T}`` in ``L^2(nu)``.
    """
    lam = measure.points
    w = measure.weights
    sw = np.sqrt(w)
    basis = ArnoldiBasis(lam, 1, T)
    # re-orthonormalize in the weighted inner product
    Qw = sw[:, None] * basis.Q
    if Qw.shape[1]:
        U, s, _ = np.linalg.svd(Qw, full_matrices=False)
        U = U[:, s > 1e-13 * max(s.max(), 1e-300)]
        r = sw - U @ (U.conj().T @ sw)
        r = r - U @ (U.conj().T @ r)
    else:
        r = sw.astype(complex)
    return float(np.sum(np.abs(r) ** 2))


def dual_measure(mesh, T: int, tol: float = 1e-6, prune: float = 1e-10, **kw):
    """Conjugation-invariant measure certifying the P-class minimax value.

    Returns ``(measure, gap)`` with
    ``gap = 1 - sqrt(min_p E_nu |p|^2) / minimax_value``.
    """
    parent, pts = _mesh_and_points(mesh)
    if not is_conjugation_closed(pts):
        raise ValueError("mesh must be closed under conjugation")
    est = ExtremalPolynomial("P", T, tol, **kw).fit(pts)
    support = parent.parent if parent is not None else None
    nu = est.measure(support, prune=prune)
    floor = math.sqrt(min_mean_square(nu, T))
    gap = 0.0 if est.value_ == 0 else 1 - floor / est.value_
    return nu, float(gap)


# --------------------------------------------------------------------------
# Polynomial helpers
# --------------------------------------------------------------------------

def symmetrize_polynomial(p: Polynomial) -> Polynomial:
    """``(p + conj(p(conj(lam)))) / 2``: keep the real parts of the coefficients."""
    return Polynomial(p.coef.real, p.degree_bound)


def _normal_derivative_at_zero(spectral_set: SpectralSet) -> float:
    if spectral_set.mu != 0:
        raise ValueError("0 is not a boundary point of the set")
    if spectral_set.kind == "HalfDisc":
        return NORMAL_DERIVATIVE_CONSTANT / spectral_set.L
    return 1.0 / spectral_set.L


def bernstein_margin(q: Polynomial, spectral_set: SpectralSet, fine_mesh) -> float:
    """``|q'(0)| / ((T/2) * dg/dn(0) * max_mesh |q|)`` with ``T = degree_bound - 1``."""
    if abs(q.coefficients[0]) > 1e-12:
        raise ValueError("q must vanish at 0")
    T = q.degree_bound - 1
    if T < 1:
        raise ValueError("need degree_bound >= 2 (T >= 1)")
    pts = fine_mesh.points if isinstance(fine_mesh, BoundaryMesh) else check_points(fine_mesh)
    dq0 = abs(q.coefficients[1]) if len(q.coefficients) > 1 else 0.0
    sup = float(np.max(np.abs(q(pts))))
    return dq0 / ((T / 2) * _normal_derivative_at_zero(spectral_set) * sup)
