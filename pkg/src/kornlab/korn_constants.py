"""Optimal Korn constants on discretized shells, scaling fits, extension and subdivision checks.

The p = 2 constant of the second inequality is a generalized eigenvalue of
two quadratic forms on a finite element space.  For other p only lower
bounds from explicit field families are reported.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_exponent, check_resolution
from .ansatz import default_grid, default_profile, make_ansatz, ratio_report
from .exceptions import (
    DegenerateFieldError,
    DomainError,
    EigenSolveError,
    EvaluationError,
    ResolutionError,
    ValidationError,
)
from .geometry import ThinDomain
from .shellfield import (
    QuadratureGrid,
    ShellField,
    _frame_gradient,
    field_gradient,
    lp_norm_of_samples,
    random_bump_field,
    rigid_field,
    strain,
)

__all__ = [
    "FieldSpace",
    "korn2_constant_p2",
    "Korn2ConstantEstimator",
    "interpolation_constant",
    "default_family",
    "ScalingFit",
    "fit_scaling",
    "PowerLawRegressor",
    "NestedBoxPair",
    "extension_check",
    "SubdivisionReport",
    "subdivision_run",
    "DEFAULT_LADDER",
]

DEFAULT_LADDER = (0.1, 0.05, 0.025, 0.0125)

# below this many unknowns the generalized problem is solved densely
_DENSE_LIMIT = 3000
_MIN_FULL_DIMENSION = 200

_GAUSS = np.array([-1.0, 1.0]) / math.sqrt(3.0)


# --------------------------------------------------------------------------
# finite element space


def _trilinear(xi):
    """Shape values and reference derivatives of the 8 trilinear functions at ``xi`` (3,)."""
    corners = np.array([(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
    r = (np.asarray(xi) + 1) / 2  # reference point in [0, 1]^3
    lin = np.where(corners == 1, r, 1 - r)  # (8, 3)
    dlin = np.where(corners == 1, 1.0, -1.0)
    N = np.prod(lin, axis=1)
    dN = np.empty((8, 3))
    for j in range(3):
        others = [k for k in range(3) if k != j]
        dN[:, j] = dlin[:, j] * lin[:, others[0]] * lin[:, others[1]]
    return N, dN, corners


class FieldSpace:
    """Trilinear nodal elements for ``(u_t, u_theta, u_z)`` on a thin domain.

    Nodes form a tensor grid uniform in ``(theta, sigma, s)`` (the mapped
    coordinates of :class:`~kornlab.shellfield.QuadratureGrid`); elements
    are isoparametric, integrated with 2x2x2 Gauss points.  A space can be
    restricted to the span of given nodal vectors with :meth:`restrict`.
    """

    def __init__(self, domain: ThinDomain, n_theta=60, n_z=4, n_t=1, basis=None):
        self.domain = domain
        self.n_theta = check_resolution(n_theta, "n_theta")
        self.n_z = check_resolution(n_z, "n_z")
        self.n_t = check_resolution(n_t, "n_t")
        s = domain.surface
        th = np.linspace(0.0, s.omega, n_theta + 1)
        sg = np.linspace(0.0, 1.0, n_z + 1)
        ss = np.linspace(0.0, 1.0, n_t + 1)
        TH, SG, SS = np.meshgrid(th, sg, ss, indexing="ij")
        z_lo, z_hi = s.z_lower(TH), s.z_upper(TH)
        Z = z_lo + SG * (z_hi - z_lo)
        g1, g2 = domain.g1(TH, Z), domain.g2(TH, Z)
        self.t = -g1 + SS * (g1 + g2)
        self.theta, self.z = TH, Z
        self.n_nodes = TH.size
        self.full_dimension = 3 * self.n_nodes
        self.basis = basis  # (full_dimension, k) or None for the full space
        self._forms = None

    @property
    def dimension(self):
        return self.full_dimension if self.basis is None else self.basis.shape[1]

    @property
    def restricted(self):
        return self.basis is not None

    def interpolate(self, f: ShellField) -> np.ndarray:
        """Nodal interpolant of ``f`` as a full-space coefficient vector."""
        values = np.asarray(f(self.t, self.theta, self.z), dtype=float)
        if not np.all(np.isfinite(values)):
            raise EvaluationError(f"field {f.name!r} is not finite at some node")
        return values.reshape(-1)

    def restrict(self, vectors) -> "FieldSpace":
        """Subspace spanned by the given fields or full-space vectors (orthonormalized)."""
        cols = [self.interpolate(v) if isinstance(v, ShellField) else np.asarray(v, float).ravel()
                for v in vectors]
        if not cols:
            raise ValueError("restrict needs at least one vector")
        Q, R = np.linalg.qr(np.column_stack(cols))
        keep = np.abs(np.diag(R)) > 1e-12 * max(1.0, float(np.max(np.abs(np.diag(R)))))
        if not keep.any():
            raise DegenerateFieldError("all spanning vectors vanish")
        sub = FieldSpace.__new__(FieldSpace)
        sub.__dict__.update(self.__dict__)
        sub.basis = Q[:, keep] if self.basis is None else self.basis @ Q[:, keep]
        sub._forms = self._forms
        return sub

    def projection_residual(self, vector) -> float:
        """Relative distance of a full-space vector from the span of the space."""
        v = self.interpolate(vector) if isinstance(vector, ShellField) else np.asarray(vector, float).ravel()
        nv = float(np.linalg.norm(v))
        if nv == 0 or self.basis is None:
            return 0.0
        Q, _ = np.linalg.qr(self.basis)
        return float(np.linalg.norm(v - Q @ (Q.T @ v)) / nv)

    # -- assembly ------------------------------------------------------------

    def _operators(self):
        """Sparse maps from nodal coefficients to values and frame gradients at Gauss points.

        Returns ``(V, G, weights)`` with ``V`` of shape ``(3 nq, n)``, ``G`` of
        shape ``(9 nq, n)`` (row-major 3x3 per point) and ``nq`` quadrature weights.
        """
        s = self.domain.surface
        shape = self.theta.shape
        node_id = np.arange(self.n_nodes).reshape(shape)
        ei, ej, ek = np.meshgrid(
            np.arange(self.n_theta), np.arange(self.n_z), np.arange(self.n_t), indexing="ij"
        )
        ei, ej, ek = ei.ravel(), ej.ravel(), ek.ravel()
        coords = np.stack([self.t, self.theta, self.z], axis=-1)

        V_rows, V_cols, V_vals = [], [], []
        G_rows, G_cols, G_vals = [], [], []
        weights = []
        n_el = ei.size
        q0 = 0
        for gx in _GAUSS:
            for gy in _GAUSS:
                for gz in _GAUSS:
                    N, dN, corners = _trilinear((gx, gy, gz))
                    nodes = node_id[ei[:, None] + corners[:, 0], ej[:, None] + corners[:, 1],
                                    ek[:, None] + corners[:, 2]]  # (n_el, 8)
                    X = coords.reshape(-1, 3)[nodes]  # (n_el, 8, 3) physical (t, theta, z)
                    point = np.einsum("a,eak->ek", N, X)
                    jac = np.einsum("eak,aj->ekj", X, dN)  # d(t,theta,z)/d(ref)
                    det = np.linalg.det(jac)
                    if np.any(det <= 0):
                        raise ValidationError("element map is degenerate; refine the space")
                    dN_phys = np.einsum("aj,ejk->eak", dN, np.linalg.inv(jac))  # (n_el, 8, 3)
                    t, theta, z = point[:, 0], point[:, 1], point[:, 2]
                    A_theta, A_z = s.metric(theta, z)
                    k_theta, k_z = s.curvatures(theta, z)
                    vol = A_theta * A_z * (1 + t * k_theta) * (1 + t * k_z)
                    weights.append(det * vol)  # reference Gauss weights are 1
                    # the frame gradient is linear in (u, du); probe it with unit inputs
                    coef_u = np.empty((n_el, 3, 3, 3))  # (el, input comp, out i, out j)
                    coef_du = np.empty((n_el, 3, 3, 3, 3))  # (el, comp, var, out i, out j)
                    zeros_u = np.zeros((n_el, 3))
                    zeros_du = np.zeros((n_el, 3, 3))
                    for c in range(3):
                        u = zeros_u.copy()
                        u[:, c] = 1.0
                        coef_u[:, c] = _frame_gradient(u, zeros_du, s, t, theta, z, False)
                        for v in range(3):
                            du = zeros_du.copy()
                            du[:, c, v] = 1.0
                            coef_du[:, c, v] = _frame_gradient(zeros_u, du, s, t, theta, z, False)
                    # contribution of node a, component c to gradient entry (i, j)
                    contrib = (
                        np.einsum("a,ecij->eacij", N, coef_u)
                        + np.einsum("eav,ecvij->eacij", dN_phys, coef_du)
                    )
                    q = q0 + np.arange(n_el)
                    dof = 3 * nodes[:, :, None] + np.arange(3)  # (el, 8, 3)
                    G_rows.append(np.broadcast_to((9 * q)[:, None, None, None] + np.arange(9),
                                                  (n_el, 8, 3, 9)).ravel())
                    G_cols.append(np.broadcast_to(dof[..., None], (n_el, 8, 3, 9)).ravel())
                    G_vals.append(contrib.reshape(n_el, 8, 3, 9).ravel())
                    V_rows.append(np.broadcast_to((3 * q)[:, None, None] + np.arange(3), (n_el, 8, 3)).ravel())
                    V_cols.append(dof.ravel())
                    V_vals.append(np.broadcast_to(N[None, :, None], (n_el, 8, 3)).ravel())
                    q0 += n_el
        n = self.full_dimension
        V = sp.csr_matrix((np.concatenate(V_vals), (np.concatenate(V_rows), np.concatenate(V_cols))),
                          shape=(3 * q0, n))
        G = sp.csr_matrix((np.concatenate(G_vals), (np.concatenate(G_rows), np.concatenate(G_cols))),
                          shape=(9 * q0, n))
        return V, G, np.concatenate(weights)

    def forms(self):
        """``(K, M, E)``: gradient, mass and strain Gram matrices on the full space."""
        if self._forms is None:
            V, G, w = self._operators()
            sym = np.zeros((9, 9))
            for i in range(3):
                for j in range(3):
                    sym[3 * i + j, 3 * i + j] += 0.5
                    sym[3 * i + j, 3 * j + i] += 0.5
            S = sp.kron(sp.identity(w.size), sp.csr_matrix(sym), format="csr")
            E_op = S @ G
            W3 = sp.diags(np.repeat(w, 3))
            W9 = sp.diags(np.repeat(w, 9))
            K = (G.T @ W9 @ G).tocsc()
            M = (V.T @ W3 @ V).tocsc()
            E = (E_op.T @ W9 @ E_op).tocsc()
            self._forms = (K, M, E)
        return self._forms

    def restricted_forms(self):
        K, M, E = self.forms()
        if self.basis is None:
            return K, M, E
        B = self.basis
        return tuple(np.asarray(B.T @ (X @ B)) for X in (K, M, E))

    def rayleigh(self, vector) -> float:
        """``|grad u|^2 / (|u|^2 + |e(u)|^2)`` of a full-space coefficient vector."""
        K, M, E = self.forms()
        v = np.asarray(vector, float).ravel()
        den = float(v @ (M @ v) + v @ (E @ v))
        if den == 0:
            raise DegenerateFieldError("the field vanishes")
        return float(v @ (K @ v)) / den


def _largest_eigenvalue(K, B):
    """Largest ``lam`` of ``K x = lam B x`` (``B`` positive definite)."""
    n = K.shape[0]
    if n <= _DENSE_LIMIT:
        K = K.toarray() if sp.issparse(K) else np.asarray(K)
        B = B.toarray() if sp.issparse(B) else np.asarray(B)
        K = 0.5 * (K + K.T)
        B = 0.5 * (B + B.T)
        try:
            lam = scipy.linalg.eigh(K, B, eigvals_only=True, subset_by_index=[n - 1, n - 1])
        except np.linalg.LinAlgError as exc:
            raise EigenSolveError(f"dense generalized eigensolve failed: {exc}") from None
        return float(lam[-1])
    # large spaces: Lanczos on the pair with relative tolerance 1e-6
    history = []
    try:
        lam = spla.eigsh(K, k=1, M=B, which="LA", tol=1e-6, maxiter=20 * n, return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        history = list(np.atleast_1d(exc.eigenvalues))
        raise EigenSolveError("Lanczos iteration did not converge", history) from None
    return float(lam[-1])


def korn2_constant_p2(d: ThinDomain, space: FieldSpace | None = None) -> float:
    """Optimal constant ``max |grad u|^2 / (|u|^2 + |e(u)|^2)`` over the discrete space (p = 2).

    The default space is 60 x 4 x 1 trilinear elements.  An unrestricted
    space must have at least 200 unknowns.
    """
    if space is None:
        space = FieldSpace(d)
    if space.domain is not d:
        raise ValueError("space was built on a different domain")
    if not space.restricted and space.dimension < _MIN_FULL_DIMENSION:
        raise ValidationError(
            f"space dimension {space.dimension} is below {_MIN_FULL_DIMENSION}; refine the space"
        )
    K, M, E = space.restricted_forms()
    K_norm = float(abs(K).max()) if K.size else 0.0
    if K_norm == 0.0:
        return 0.0
    return max(_largest_eigenvalue(K, M + E), 0.0)


class Korn2ConstantEstimator(BaseEstimator):
    """Estimator wrapper of :func:`korn2_constant_p2`; ``fit(domain)`` sets ``constant_``."""

    def __init__(self, n_theta=60, n_z=4, n_t=1):
        self.n_theta = n_theta
        self.n_z = n_z
        self.n_t = n_t

    def fit(self, X, y=None):
        space = FieldSpace(X, self.n_theta, self.n_z, self.n_t)
        self.constant_ = korn2_constant_p2(X, space)
        self.dimension_ = space.dimension
        self.h_ = X.h
        return self


# --------------------------------------------------------------------------
# lower bounds from explicit families


def default_family(d: ThinDomain, rng: np.random.Generator | None = None, n_random=3) -> list:
    """Ansatz (when it fits the patch), three rigid rotations and random bump fields."""
    rng = np.random.default_rng(0) if rng is None else rng
    family = []
    try:
        family.append(make_ansatz(default_profile(d.surface), d))
    except DomainError as exc:
        warnings.warn(f"Ansatz left out of the family: {exc}", stacklevel=2)
    center = d.surface.position(0.5 * d.surface.omega, 0.5 * float(d.surface.z_lower(0.0) + d.surface.z_upper(0.0)))
    for axis in np.eye(3):
        family.append(rigid_field(axis, center, d))
    family.extend(random_bump_field(d, rng) for _ in range(n_random))
    return family


def interpolation_constant(d: ThinDomain, p: float, family=None) -> float:
    """Certified lower bound for the optimal interpolation constant: the largest ratio over ``family``.

    Degenerate members are skipped with a warning.
    """
    p = check_exponent(p)
    if family is None:
        family = default_family(d)
    family = list(family)
    if not family:
        raise ValueError("the field family is empty")
    best = None
    for f in family:
        try:
            r = ratio_report(f, d, p, default_grid(f, d) if f.theta_support else None)
        except DegenerateFieldError as exc:
            warnings.warn(f"skipping field {f.name!r}: {exc}", stacklevel=2)
            continue
        best = r.interpolation_ratio if best is None else max(best, r.interpolation_ratio)
    if best is None:
        raise DegenerateFieldError("every field of the family is degenerate")
    return best


# --------------------------------------------------------------------------
# power-law fits


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit ``C = c h^-alpha`` in log-log coordinates."""

    samples: tuple
    c: float
    alpha: float
    residual: float

    def predict(self, h):
        return self.c * np.asarray(h, dtype=float) ** (-self.alpha)


class PowerLawRegressor(RegressorMixin, BaseEstimator):
    """Regressor ``C(h) = c h^-alpha`` fitted by least squares on ``(log h, log C)``.

    After ``fit`` the attributes ``c_``, ``alpha_`` and ``residual_`` (RMS log misfit) are set.
    """

    def fit(self, X, y):
        h = np.asarray(X, dtype=float).reshape(-1)
        C = np.asarray(y, dtype=float).reshape(-1)
        if h.size != C.size:
            raise ValueError(f"got {h.size} thickness values but {C.size} constants")
        if h.size < 3:
            raise ValueError("a scaling fit needs at least 3 samples")
        for i, (hi, ci) in enumerate(zip(h.tolist(), C.tolist())):
            if not (hi > 0 and math.isfinite(hi)):
                raise ValueError(f"sample {i}: h = {hi!r} must be positive")
            if not (ci > 0 and math.isfinite(ci)):
                raise ValueError(f"sample {i}: C = {ci!r} at h = {hi!r} must be positive")
        if np.unique(h).size != h.size:
            raise ValueError("thickness values must be distinct")
        A = np.column_stack([np.log(h), np.ones_like(h)])
        (slope, intercept), *_ = np.linalg.lstsq(A, np.log(C), rcond=None)
        misfit = np.log(C) - A @ np.array([slope, intercept])
        self.alpha_ = float(-slope)
        self.c_ = float(math.exp(intercept))
        self.residual_ = float(np.sqrt(np.mean(misfit**2)))
        return self

    def predict(self, X):
        check_is_fitted(self, "alpha_")
        return self.c_ * np.asarray(X, dtype=float).reshape(-1) ** (-self.alpha_)


def fit_scaling(samples) -> ScalingFit:
    """Fit ``C = c h^-alpha`` to ``(h, C)`` pairs."""
    samples = tuple((float(h), float(C)) for h, C in samples)
    if not samples:
        raise ValueError("a scaling fit needs at least 3 samples")
    h, C = zip(*samples)
    reg = PowerLawRegressor().fit(h, C)
    return ScalingFit(samples=samples, c=reg.c_, alpha=reg.alpha_, residual=reg.residual_)


# --------------------------------------------------------------------------
# extension estimate on nested boxes


def _gauss_nodes(lo, hi, breaks, cells, order=6):
    """Composite Gauss-Legendre nodes/weights on [lo, hi] aligned with ``breaks``."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    edges = sorted({lo, hi, *(b for b in breaks if lo < b < hi)})
    xs, ws = [], []
    for a, b in zip(edges, edges[1:]):
        n = max(1, math.ceil(cells * (b - a) / (hi - lo)))
        cuts = np.linspace(a, b, n + 1)
        for c0, c1 in zip(cuts, cuts[1:]):
            xs.append(0.5 * (c1 - c0) * x0 + 0.5 * (c0 + c1))
            ws.append(0.5 * (c1 - c0) * w0)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class NestedBoxPair:
    """Axis-aligned boxes ``inner`` inside ``outer``, each a tuple of ``(lo, hi)`` per axis."""

    inner: tuple
    outer: tuple

    def __post_init__(self):
        if len(self.inner) != len(self.outer) or len(self.inner) not in (2, 3):
            raise ValueError("boxes must both be 2D or both 3D")
        for (a, b), (c, e) in zip(self.inner, self.outer):
            if not (c <= a < b <= e):
                raise ValueError(f"inner box {self.inner} is not inside outer box {self.outer}")

    @property
    def dim(self):
        return len(self.outer)

    @property
    def volume_ratio(self):
        vol = lambda box: math.prod(b - a for a, b in box)  # noqa: E731
        return vol(self.outer) / vol(self.inner)

    def scaled(self, lam):
        """Both boxes under ``x -> lam x``."""
        return NestedBoxPair(
            tuple((lam * a, lam * b) for a, b in self.inner),
            tuple((lam * a, lam * b) for a, b in self.outer),
        )

    def quadrature(self, cells=16, order=6):
        """Points ``(n, dim)``, weights and an inner-box mask of a tensor Gauss rule on ``outer``."""
        axes = [_gauss_nodes(c, e, (a, b), cells, order) for (a, b), (c, e) in zip(self.inner, self.outer)]
        pts = np.stack(np.meshgrid(*(x for x, _ in axes), indexing="ij"), axis=-1).reshape(-1, self.dim)
        wts = np.prod(np.stack(np.meshgrid(*(w for _, w in axes), indexing="ij"), axis=-1), axis=-1).ravel()
        inside = np.all([(pts[:, k] > a) & (pts[:, k] < b) for k, (a, b) in enumerate(self.inner)], axis=0)
        return pts, wts, inside


def _fd_jacobian(field, x, step):
    cols = []
    for k in range(x.shape[-1]):
        e = np.zeros(x.shape[-1])
        e[k] = step
        cols.append((np.asarray(field(x + e), float) - np.asarray(field(x - e), float)) / (2 * step))
    return np.stack(cols, axis=-1)


def extension_check(pair: NestedBoxPair, field, p: float, gradient=None, cells=16):
    """Both sides of the extension estimate for a vector field ``U`` on ``pair.outer``.

    lhs = |grad U|_{L^p(outer)},   rhs = |grad U|_{L^p(inner)} + |e(U)|_{L^p(outer)}

    ``field`` maps points ``(n, dim)`` to values ``(n, dim)``; ``gradient``
    (same input, output ``(n, dim, dim)``) defaults to centered differences.
    """
    p = check_exponent(p)
    pts, wts, inside = pair.quadrature(cells)
    if gradient is not None:
        G = np.asarray(gradient(pts), dtype=float)
    else:
        scale = max(b - a for a, b in pair.outer)
        G = _fd_jacobian(field, pts, 1e-5 * scale)
    if not np.all(np.isfinite(G)):
        i = int(np.flatnonzero(~np.isfinite(G).all(axis=(-1, -2)))[0])
        raise EvaluationError(f"field is not finite on the outer box near x = {pts[i].tolist()}")
    E = strain(G)
    lhs = lp_norm_of_samples(G, wts, p)
    rhs = lp_norm_of_samples(G, wts * inside, p) + lp_norm_of_samples(E, wts, p)
    return lhs, rhs


# --------------------------------------------------------------------------
# subdivision of a thin domain into pieces of size h


@dataclass(frozen=True)
class SubdivisionReport:
    """Per-piece and aggregate norms of one field on a subdivided thin domain.

    Pieces are ``pieces x pieces`` boxes in ``(theta, sigma)``; the inner shell
    of each piece is ``|t| < h``.  ``aggregate_constant`` is
    ``|grad u|_Omega / (|grad u|_inner + |e(u)|_Omega)`` assembled from the
    per-piece p-th powers, ``direct_grad`` the whole-grid norm it must match.
    """

    h: float
    p: float
    pieces: int
    grad_outer: np.ndarray = field(repr=False)
    grad_inner: np.ndarray = field(repr=False)
    strain_outer: np.ndarray = field(repr=False)
    aggregate_lhs: float
    aggregate_rhs: float
    aggregate_constant: float
    max_piece_constant: float
    direct_grad: float
    additivity_error: float


def _piece_powers(values, weights, N, m, p):
    """``sum w |v|^p`` over each of the ``N x N`` blocks of ``m x m`` cells."""
    mag = np.abs(values) if values.ndim == 3 else np.sqrt(np.sum(values**2, axis=tuple(range(3, values.ndim))))
    integrand = weights * mag**p
    n_t = integrand.shape[2]
    return integrand.reshape(N, m, N, m, n_t).sum(axis=(1, 3, 4))


def subdivision_run(d: ThinDomain, field_: ShellField, p: float, cells_per_piece=3, n_t=None) -> SubdivisionReport:
    """Cut ``d`` into ``N x N`` pieces with ``N = floor(1/h) + 1`` and sum the per-piece estimates.

    One whole-domain grid is built with ``cells_per_piece`` cells per piece
    along theta and z and reshaped into pieces, so the pieces partition it.
    """
    p = check_exponent(p)
    h = d.h
    N = int(math.floor(1.0 / h)) + 1
    m = int(cells_per_piece)
    if m < 1:
        raise ResolutionError(f"cells_per_piece = {cells_per_piece} leaves the pieces without grid cells")
    n = N * m
    outer = QuadratureGrid.build(d, n, n, n_t)
    inner_thickness = (
        lambda th, z: np.minimum(d.g1(th, z), h),
        lambda th, z: np.minimum(d.g2(th, z), h),
    )
    inner = QuadratureGrid.build(d, n, n, n_t, thickness=inner_thickness)

    G_out = field_gradient(field_, d, outer)
    G_in = field_gradient(field_, d, inner)
    E_out = strain(G_out)
    for name, arr, grid in (("gradient", G_out, outer), ("gradient", G_in, inner)):
        bad = ~np.isfinite(arr).all(axis=(-1, -2))
        if bad.any():
            raise EvaluationError(f"non-finite {name} at {grid.locate(int(np.flatnonzero(bad)[0]))}")

    P_grad_out = _piece_powers(G_out, outer.weights, N, m, p)
    P_grad_in = _piece_powers(G_in, inner.weights, N, m, p)
    P_strain = _piece_powers(E_out, outer.weights, N, m, p)

    direct = lp_norm_of_samples(G_out, outer.weights, p)
    total = float(np.sum(P_grad_out))
    additivity = abs(total - direct**p) / direct**p if direct > 0 else abs(total)

    lhs = total ** (1 / p)
    rhs = float(np.sum(P_grad_in)) ** (1 / p) + float(np.sum(P_strain)) ** (1 / p)
    piece_lhs = P_grad_out ** (1 / p)
    piece_rhs = P_grad_in ** (1 / p) + P_strain ** (1 / p)
    active = piece_lhs > 1e-12 * max(float(np.max(piece_lhs)), 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        piece_c = np.where(active, piece_lhs / np.where(piece_rhs > 0, piece_rhs, np.inf), 0.0)
    return SubdivisionReport(
        h=h, p=p, pieces=N,
        grad_outer=piece_lhs, grad_inner=P_grad_in ** (1 / p), strain_outer=P_strain ** (1 / p),
        aggregate_lhs=lhs, aggregate_rhs=rhs,
        aggregate_constant=lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf),
        max_piece_constant=float(np.max(piece_c)) if piece_c.size else 0.0,
        direct_grad=direct, additivity_error=float(additivity),
    )
