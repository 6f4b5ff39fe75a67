"""Harmonic functions on planar thin domains and the 2D rigidity checks.

The domain is ``D = {(x, y): 0 < y < b, -phi1(y) < x < phi2(y)}``.  It is
discretized on the boundary-fitted grid

    x = -phi1(y) + s (phi1(y) + phi2(y)),   (s, y) in [0, 1] x [0, b],

where the Laplacian picks up metric terms of the map.  Derivatives of nodal
fields are fourth-order finite differences in ``(s, y)`` pushed through the
chain rule, and integrals use the trapezoid rule with area element
``(phi1 + phi2) ds dy``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
import scipy.integrate
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ._validation import check_exponent, check_positive, check_resolution
from .exceptions import DegenerateFieldError, EvaluationError, QuadratureError, ValidationError
from .shellfield import diff_axis

__all__ = [
    "Profile1D",
    "ThinDomain2D",
    "make_domain2d",
    "MappedGrid2D",
    "Harmonic2DSolution",
    "VectorField2D",
    "SkewChain",
    "solve_harmonic",
    "optimal_shift",
    "check_lemma41",
    "check_lemma42",
    "conjugate_field",
    "strip_chain",
    "distance_to_boundary",
    "check_lemma43",
    "check_lemma44",
    "harmonic_family",
    "random_harmonic",
]


@dataclass(frozen=True)
class Profile1D:
    """A lateral boundary curve ``phi(y)`` with its first two derivatives."""

    f: Callable
    df: Callable
    d2f: Callable

    def __call__(self, y):
        return self.f(y)


def _constant_profile(value):
    return Profile1D(
        lambda y: np.full(np.shape(y), value, dtype=float),
        lambda y: np.zeros(np.shape(y)),
        lambda y: np.zeros(np.shape(y)),
    )


def _sine_profile(h, b, phase):
    # h (1.25 + 0.25 sin(2 pi y / b + phase))
    k = 2 * np.pi / b
    return Profile1D(
        lambda y: h * (1.25 + 0.25 * np.sin(k * np.asarray(y, float) + phase)),
        lambda y: 0.25 * h * k * np.cos(k * np.asarray(y, float) + phase),
        lambda y: -0.25 * h * k * k * np.sin(k * np.asarray(y, float) + phase),
    )


@dataclass(frozen=True)
class ThinDomain2D:
    """Planar thin domain between ``x = -phi1(y)`` and ``x = phi2(y)``."""

    b: float
    h: float
    phi1: Profile1D = field(repr=False)
    phi2: Profile1D = field(repr=False)
    C1: float = 2.0
    C2: float = 2.0

    def width(self, y):
        return self.phi1(y) + self.phi2(y)


def make_domain2d(b=1.0, h=0.01, shape="constant", C1=2.0, C2=2.0) -> ThinDomain2D:
    """Build and validate a planar thin domain.

    ``shape="constant"`` uses ``phi1 = phi2 = h``; ``shape="wavy"`` uses
    ``phi_i = h (1.25 + 0.25 sin(2 pi y / b + phase_i))`` with phases 0 and pi/2.
    """
    b = check_positive(b, "b")
    h = check_positive(h, "h")
    if not h < b / 8:
        raise ValidationError(f"h = {h:g} must be below b/8 = {b / 8:g}")
    if shape == "constant":
        phi1 = phi2 = _constant_profile(h)
    elif shape == "wavy":
        phi1, phi2 = _sine_profile(h, b, 0.0), _sine_profile(h, b, np.pi / 2)
    else:
        raise ValidationError(f"unknown 2D domain shape {shape!r}; expected 'constant' or 'wavy'")
    d2 = ThinDomain2D(b=b, h=h, phi1=phi1, phi2=phi2, C1=C1, C2=C2)
    validate_domain2d(d2)
    return d2


def validate_domain2d(d2: ThinDomain2D, samples: int = 4001) -> None:
    y = np.linspace(0.0, d2.b, samples)
    problems = []
    for name, phi in (("phi1", d2.phi1), ("phi2", d2.phi2)):
        v, dv = phi(y), phi.df(y)
        if np.min(v) < d2.h * (1 - 1e-12):
            problems.append(f"{name} >= h fails (min {np.min(v):.6g})")
        if np.max(v) > d2.C1 * d2.h * (1 + 1e-12):
            problems.append(f"{name} <= C1 h fails (max {np.max(v):.6g})")
        if np.max(np.abs(dv)) > d2.C2 * d2.h * (1 + 1e-12):
            problems.append(f"|{name}'| <= C2 h fails (max {np.max(np.abs(dv)):.6g})")
    if problems:
        raise ValidationError("2D thin domain violates " + "; ".join(problems))


class MappedGrid2D:
    """Node grid of the boundary-fitted map; arrays are indexed ``[i_s, j_y]``."""

    def __init__(self, d2: ThinDomain2D, n_s: int, n_y: int):
        self.domain = d2
        self.n_s, self.n_y = n_s, n_y
        self.ds, self.dy = 1.0 / n_s, d2.b / n_y
        s1 = np.linspace(0.0, 1.0, n_s + 1)
        y1 = np.linspace(0.0, d2.b, n_y + 1)
        self.S, self.Y = np.meshgrid(s1, y1, indexing="ij")
        p1, p2 = d2.phi1, d2.phi2
        self.width = p1(self.Y) + p2(self.Y)
        self.width_dy = p1.df(self.Y) + p2.df(self.Y)
        self.X = -p1(self.Y) + self.S * self.width
        # ds/dx and ds/dy of the inverse map
        self.s_x = 1.0 / self.width
        self.s_y = (p1.df(self.Y) - self.S * self.width_dy) / self.width
        ws = np.full(n_s + 1, self.ds)
        ws[[0, -1]] *= 0.5
        wy = np.full(n_y + 1, self.dy)
        wy[[0, -1]] *= 0.5
        self.weights = np.outer(ws, wy) * self.width
        # discrete map derivatives, so that affine fields are differentiated exactly
        self._x_s_inv = 1.0 / diff_axis(self.X, self.ds, axis=0)
        self._x_y = diff_axis(self.X, self.dy, axis=1)

    @property
    def shape(self):
        return self.S.shape

    def gradient(self, F):
        """``(F_x, F_y)`` of a nodal field.

        Fourth-order differences along the grid axes, mapped through the
        inverse of the discrete Jacobian of ``(s, y) -> (x, y)``.
        """
        F_s = diff_axis(F, self.ds, axis=0)
        F_y = diff_axis(F, self.dy, axis=1)
        return F_s * self._x_s_inv, F_y - self._x_y * self._x_s_inv * F_s

    def norm(self, values, p, mask=None):
        """Trapezoid-rule L^p norm; vector/matrix values over trailing axes use Euclidean/Frobenius."""
        v = np.asarray(values, dtype=float)
        mag = np.abs(v) if v.ndim == 2 else np.sqrt(np.sum(v * v, axis=tuple(range(2, v.ndim))))
        w = self.weights if mask is None else self.weights * mask
        return float(np.sum(w * mag**p)) ** (1.0 / p)

    def boundary_mask(self):
        m = np.zeros(self.shape, dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m


@dataclass(frozen=True)
class Harmonic2DSolution:
    """Discrete harmonic function on a :class:`ThinDomain2D`."""

    domain: ThinDomain2D
    grid: MappedGrid2D = field(repr=False)
    w: np.ndarray = field(repr=False)
    residual: float

    def gradient(self):
        return self.grid.gradient(self.w)

    def norm(self, values, p):
        return self.grid.norm(values, p)


def _laplacian_matrix(grid: MappedGrid2D):
    """Nine-point discrete Laplacian on all nodes (rows of boundary nodes are left empty).

    The first-order coefficient is set so that the coordinate function x is
    discretely harmonic, which makes every affine function an exact solution.
    """
    d2 = grid.domain
    ds, dy = grid.ds, grid.dy
    n_s, n_y = grid.n_s, grid.n_y
    Yrow = grid.Y[0]
    p1, p2 = d2.phi1, d2.phi2
    # discrete derivatives of the map along y (centered)
    W = p1(Yrow) + p2(Yrow)
    Wp = (p1(Yrow + dy) + p2(Yrow + dy) - p1(Yrow - dy) - p2(Yrow - dy)) / (2 * dy)
    P1pp = (p1(Yrow + dy) - 2 * p1(Yrow) + p1(Yrow - dy)) / dy**2
    Wpp = (p1(Yrow + dy) + p2(Yrow + dy) - 2 * W + p1(Yrow - dy) + p2(Yrow - dy)) / dy**2

    S = grid.S
    a = grid.s_x**2 + grid.s_y**2  # coefficient of F_ss
    c = grid.s_y  # half the coefficient of F_sy
    # D_sy X = W', D_yy X = -phi1'' + s W'', D_s X = W, D_ss X = 0
    dcoef = -(2 * c * Wp[None, :] + (-P1pp[None, :] + S * Wpp[None, :])) / W[None, :]

    idx = np.arange((n_s + 1) * (n_y + 1)).reshape(n_s + 1, n_y + 1)
    I, J = np.meshgrid(np.arange(1, n_s), np.arange(1, n_y), indexing="ij")
    I, J = I.ravel(), J.ravel()
    aa, cc, dd = a[I, J], c[I, J], dcoef[I, J]
    rows, cols, vals = [], [], []

    def add(di, dj, coef):
        rows.append(idx[I, J])
        cols.append(idx[I + di, J + dj])
        vals.append(coef)

    add(0, 0, -2 * aa / ds**2 - 2 / dy**2)
    add(1, 0, aa / ds**2 + dd / (2 * ds))
    add(-1, 0, aa / ds**2 - dd / (2 * ds))
    add(0, 1, np.full_like(aa, 1 / dy**2))
    add(0, -1, np.full_like(aa, 1 / dy**2))
    cross = 2 * cc / (4 * ds * dy)
    add(1, 1, cross)
    add(-1, -1, cross)
    add(1, -1, -cross)
    add(-1, 1, -cross)
    n = idx.size
    L = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return L, idx


def solve_harmonic(d2: ThinDomain2D, boundary: Callable, resolution=(16, 256)) -> Harmonic2DSolution:
    """Solve the Dirichlet problem ``Laplace(w) = 0`` with ``w = boundary(x, y)`` on the boundary.

    Sparse direct factorization, then iterative refinement with the same
    factors if the scaled residual is above 1e-12.  The reported residual is
    ``|D^-1 (L w)|_2 / |w|_2`` over interior nodes, ``D`` the stencil diagonal.
    """
    n_s, n_y = resolution
    check_resolution(n_s, "n_s", minimum=8)
    check_resolution(n_y, "n_y", minimum=64)
    grid = MappedGrid2D(d2, n_s, n_y)
    L, idx = _laplacian_matrix(grid)
    on_bnd = grid.boundary_mask().ravel()
    w = np.zeros(idx.size)
    w[on_bnd] = np.asarray(boundary(grid.X.ravel()[on_bnd], grid.Y.ravel()[on_bnd]), dtype=float)
    if not np.all(np.isfinite(w[on_bnd])):
        raise EvaluationError("boundary data is not finite at some boundary node")
    interior = ~on_bnd
    A = L[interior][:, interior].tocsc()
    rhs = -(L[interior][:, on_bnd] @ w[on_bnd])
    diag = A.diagonal()
    lu = spla.splu(A)
    x = lu.solve(rhs)
    history = []
    for _ in range(5):
        r = rhs - A @ x
        scale = max(np.linalg.norm(np.concatenate([x, w[on_bnd]])), 1e-300)
        history.append(float(np.linalg.norm(r / diag) / scale))
        if history[-1] <= 1e-12:
            break
        x = x + lu.solve(r)
    if history[-1] > 1e-10:
        raise EvaluationError(f"Laplace solve did not converge; scaled residual history {history}")
    w[interior] = x
    return Harmonic2DSolution(domain=d2, grid=grid, w=w.reshape(grid.shape), residual=history[-1])


class ShiftResult(NamedTuple):
    a: float
    residual: float


def _bisect_increasing(deriv, lo, hi, tol, max_iter=60):
    """Root of a nondecreasing function on [lo, hi] by bisection."""
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if deriv(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def optimal_shift(values, p, weights=None) -> ShiftResult:
    """Constant ``a`` minimizing the weighted L^p distance ``|values - a|_p`` and that distance.

    For ``p = 2`` this is the weighted mean; otherwise bisection on the
    derivative of the convex objective (60 iterations at most, tolerance
    ``1e-10 * (max - min)``).
    """
    p = check_exponent(p)
    f = np.asarray(values, dtype=float).ravel()
    w = np.ones_like(f) if weights is None else np.asarray(weights, dtype=float).ravel()
    lo, hi = float(np.min(f)), float(np.max(f))
    if p == 2.0:
        a = float(np.sum(w * f) / np.sum(w))
    elif hi == lo:
        a = lo
    else:
        def deriv(a):
            r = a - f
            return float(np.sum(w * np.abs(r) ** (p - 1) * np.sign(r)))

        a = _bisect_increasing(deriv, lo, hi, 1e-10 * (hi - lo))
    residual = float(np.sum(w * np.abs(f - a) ** p)) ** (1.0 / p)
    return ShiftResult(a, residual)


class Lemma41Check(NamedTuple):
    """``lhs = inf_a |d_y w - a|_p`` and ``rhs_factor = (b/h) |d_x w|_p``."""

    lhs: float
    rhs_factor: float

    @property
    def exact_kernel(self):
        return self.rhs_factor == 0.0 and self.lhs <= 1e-12

    @property
    def ratio(self):
        """Observed constant ``lhs / rhs_factor``; 0 for the affine kernel (0/0)."""
        if self.exact_kernel:
            return 0.0
        if self.rhs_factor == 0.0:
            return math.inf
        return self.lhs / self.rhs_factor


def check_lemma41(sol: Harmonic2DSolution, p) -> Lemma41Check:
    p = check_exponent(p)
    w_x, w_y = sol.gradient()
    lhs = optimal_shift(w_y, p, sol.grid.weights).residual
    rhs = sol.domain.b / sol.domain.h * sol.norm(w_x, p)
    # derivatives of affine data are exact up to round-off
    scale = max(float(np.max(np.abs(w_y))), 1.0)
    if rhs <= 1e-13 * scale * sol.domain.b / sol.domain.h:
        rhs = 0.0
    if lhs <= 1e-13 * scale:
        lhs = 0.0
    return Lemma41Check(lhs, rhs)


def check_lemma42(sol: Harmonic2DSolution, p) -> float:
    """``|w_y|^2 / (|w| |w_x| / h + |w|^2 / b^2 + |w_x|^2)``, all L^p norms on D."""
    p = check_exponent(p)
    w_x, w_y = sol.gradient()
    n_w, n_x, n_y = sol.norm(sol.w, p), sol.norm(w_x, p), sol.norm(w_y, p)
    d2 = sol.domain
    denom = n_w * n_x / d2.h + n_w**2 / d2.b**2 + n_x**2
    if denom == 0:
        raise DegenerateFieldError("w vanishes identically; the ratio is undefined")
    return n_y**2 / denom


@dataclass(frozen=True)
class VectorField2D:
    """Nodal 2D vector field ``(u, v)`` on a mapped grid."""

    grid: MappedGrid2D = field(repr=False)
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)

    def gradient(self):
        """``(..., 2, 2)`` array ``[[u_x, u_y], [v_x, v_y]]``."""
        u_x, u_y = self.grid.gradient(self.u)
        v_x, v_y = self.grid.gradient(self.v)
        return np.stack([np.stack([u_x, u_y], -1), np.stack([v_x, v_y], -1)], -2)

    def strain(self):
        G = self.gradient()
        return 0.5 * (G + np.swapaxes(G, -1, -2))


def _cumtrapz(values, spacing, axis):
    out = np.zeros_like(values)
    v = np.moveaxis(values, axis, 0)
    o = np.moveaxis(out, axis, 0)
    o[1:] = np.cumsum(0.5 * (v[1:] + v[:-1]) * spacing, axis=0)
    return out


def conjugate_field(sol: Harmonic2DSolution) -> VectorField2D:
    """The field ``(w, v)`` with ``v(x,y) = -int_0^x w_y(t,y) dt + int_0^y w_x(0,z) dz``.

    Integrals are composite trapezoid rules along the grid rows (lines of
    constant y) and along the line x = 0, with linear interpolation to x = 0.
    """
    g = sol.grid
    w_x, w_y = sol.gradient()
    dx = g.width[0] * g.ds  # physical spacing along each row
    cum = _cumtrapz(w_y, dx[None, :], axis=0)  # int from left edge, per row
    s0 = g.domain.phi1(g.Y[0]) / g.width[0]  # s-coordinate of x = 0 per row
    k = np.clip(np.floor(s0 / g.ds).astype(int), 0, g.n_s - 1)
    frac = s0 / g.ds - k
    cols = np.arange(g.n_y + 1)
    gy0 = (1 - frac) * w_y[k, cols] + frac * w_y[k + 1, cols]
    cum_at_0 = cum[k, cols] + 0.5 * (frac * dx) * (w_y[k, cols] + gy0)
    wx0 = (1 - frac) * w_x[k, cols] + frac * w_x[k + 1, cols]
    along_y = _cumtrapz(wx0, g.dy, axis=0)
    v = -(cum - cum_at_0[None, :]) + along_y[None, :]
    return VectorField2D(g, sol.w.copy(), v)


@dataclass(frozen=True)
class SkewChain:
    """Per-strip optimal skew scalars and the chaining bound they satisfy."""

    a: np.ndarray
    strips: list
    strain_norms: np.ndarray
    strain_total: float
    deviation: float
    chain_ratio: float
    p: float

    @property
    def reference(self):
        return float(self.a[0])

    @property
    def strain_sum(self):
        return float(np.sum(self.strain_norms))


def _skew_scalar(G, weights, p):
    """Skew scalar ``a`` minimizing ``|G - [[0, a], [-a, 0]]|_p`` (Frobenius pointwise)."""
    m = 0.5 * (G[..., 0, 1] - G[..., 1, 0])
    rest = G[..., 0, 0] ** 2 + G[..., 1, 1] ** 2 + 0.5 * (G[..., 0, 1] + G[..., 1, 0]) ** 2
    if p == 2.0:
        return float(np.sum(weights * m) / np.sum(weights))
    lo, hi = float(np.min(m)), float(np.max(m))
    if hi == lo:
        return lo

    # |G - A|_F^2 = rest + 2 (a - m)^2
    def deriv(a):
        q = rest + 2 * (a - m) ** 2
        return float(np.sum(weights * q ** (p / 2 - 1) * (a - m)))

    return _bisect_increasing(deriv, lo, hi, 1e-10 * (hi - lo))


def strip_chain(field2d: VectorField2D, d2: ThinDomain2D, p) -> SkewChain:
    """Overlapping-strip localization of the skew part of ``grad W``.

    In unit-height coordinates (``y -> y / b``) the strips are
    ``(k-1)/N < y < (k+1)/N``, ``k = 1..N-1`` with ``N = floor(b/h) + 1``.
    ``chain_ratio`` is ``max_k |A_1 - A_k|_{L^p(D_k)} / |e(W)|_{L^p(D)}``.
    """
    p = check_exponent(p)
    g = field2d.grid
    G = field2d.gradient()
    E = 0.5 * (G + np.swapaxes(G, -1, -2))
    # rescaling to b = 1 leaves the gradient unchanged and scales areas by 1/b^2
    weights = g.weights / d2.b**2
    yy = g.Y / d2.b
    N = int(math.floor(d2.b / d2.h)) + 1
    if N < 3:
        strips = [(0.0, 1.0)]
    else:
        strips = [((k - 1) / N, (k + 1) / N) for k in range(1, N)]
    a, e_norms, areas = [], [], []
    for lo, hi in strips:
        mask = (yy >= lo - 1e-12) & (yy <= hi + 1e-12)
        wk = weights * mask
        a.append(_skew_scalar(G[mask], wk[mask], p))
        e_norms.append(g.norm(E, p, mask) / d2.b ** (2 / p))
        areas.append(float(np.sum(wk)))
    a = np.array(a)
    e_total = g.norm(E, p) / d2.b ** (2 / p)
    gaps = np.abs(a - a[0])
    deviation = float(np.max(gaps))
    chain = np.sqrt(2) * gaps * np.array(areas) ** (1 / p)
    # a strain at round-off level of the gradient counts as the exact kernel
    if e_total <= 1e-12 * g.norm(G, p) / d2.b ** (2 / p):
        e_total = 0.0
    if e_total > 0:
        ratio = float(np.max(chain) / e_total)
    else:
        ratio = 0.0 if deviation <= 1e-12 * max(1.0, float(np.max(np.abs(a)))) else math.inf
    return SkewChain(a=a, strips=strips, strain_norms=np.array(e_norms), strain_total=e_total,
                     deviation=deviation, chain_ratio=ratio, p=p)


def _lateral_distance(x0, y0, curve, b, sign, tol=1e-10, max_iter=50):
    """Distance from points to the curve ``x = sign * curve(Y)``, Y in [0, b], by Newton."""
    c = lambda Y: sign * curve(Y)  # noqa: E731
    dc = lambda Y: sign * curve.df(Y)  # noqa: E731
    d2c = lambda Y: sign * curve.d2f(Y)  # noqa: E731
    Y = np.array(y0, dtype=float)
    for _ in range(max_iter):
        r = x0 - c(Y)
        g = -r * dc(Y) - (y0 - Y)
        H = dc(Y) ** 2 - r * d2c(Y) + 1.0
        step = g / H
        Y = np.clip(Y - step, 0.0, b)
        if np.max(np.abs(step)) < tol:
            break
    return np.hypot(x0 - c(Y), y0 - Y)


def distance_to_boundary(d2: ThinDomain2D, x, y):
    """Distance to the boundary of D: vertical distance to the top/bottom, Newton on the sides."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    vertical = np.minimum(y, d2.b - y)
    left = _lateral_distance(x, y, d2.phi1, d2.b, -1.0)
    right = _lateral_distance(x, y, d2.phi2, d2.b, 1.0)
    return np.minimum(vertical, np.minimum(left, right))


def check_lemma43(sol: Harmonic2DSolution, p) -> float:
    """``int rho^p |grad w|^p / int |w|^p`` with ``rho`` the distance to the boundary."""
    p = check_exponent(p)
    g = sol.grid
    rho = distance_to_boundary(sol.domain, g.X, g.Y)
    w_x, w_y = sol.gradient()
    grad = np.hypot(w_x, w_y)
    num = float(np.sum(g.weights * (rho * grad) ** p))
    den = float(np.sum(g.weights * np.abs(sol.w) ** p))
    if den == 0:
        raise DegenerateFieldError("w vanishes identically; the ratio is undefined")
    return num / den


def _quad(fn, lo, hi):
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.integrate.IntegrationWarning)
        try:
            value, _ = scipy.integrate.quad(fn, lo, hi, epsabs=0.0, epsrel=1e-9, limit=500)
        except scipy.integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed on [{lo:.17g}, {hi:.17g}]: {exc}") from None
    return value


def check_lemma44(f, fprime, a, b, lam, p):
    """Both sides of the weighted 1D inequality for ``f`` on ``[a, b]``.

    lhs = int_{a + lam (b - a)}^b |f|^p
    rhs = (2 + lam)/lam int_a^{a + lam (b - a)} |f|^p + 2^p (p - 1)^(p - 1) int_a^b (b - t)^p |f'|^p
    """
    p = check_exponent(p)
    if not a < b:
        raise ValueError("need a < b")
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    m = a + lam * (b - a)
    fp = lambda t: abs(f(t)) ** p  # noqa: E731
    lhs = _quad(fp, m, b)
    head = _quad(fp, a, m)
    tail = _quad(lambda t: (b - t) ** p * abs(fprime(t)) ** p, a, b)
    rhs = (2 + lam) / lam * head + 2**p * (p - 1) ** (p - 1) * tail
    return lhs, rhs


# --------------------------------------------------------------------------
# boundary-data families


def _analytic_trace(F, b):
    """Boundary data ``Re F((y + i x) / b)``; harmonic in the plane for entire F."""

    def data(x, y):
        return np.real(F((np.asarray(y, float) + 1j * np.asarray(x, float)) / b))

    return data


def harmonic_family(b=1.0):
    """Six harmonic functions, real on the axis x = 0, used as Dirichlet data.

    Their x-derivative vanishes on x = 0, which is the regime where the 2D
    rigidity lemmas are sharp.
    """
    return [
        ("cos_pi", _analytic_trace(lambda z: np.cos(np.pi * z), b)),
        ("cos_2pi", _analytic_trace(lambda z: np.cos(2 * np.pi * z), b)),
        ("sin_pi", _analytic_trace(lambda z: np.sin(np.pi * z), b)),
        ("exp", _analytic_trace(np.exp, b)),
        ("cubic", _analytic_trace(lambda z: z**3, b)),
        ("cosh_2", _analytic_trace(lambda z: np.cosh(2 * z), b)),
    ]


def random_harmonic(rng: np.random.Generator, b=1.0, n_terms=3):
    """Random real trigonometric polynomial in ``(y + i x) / b`` (a harmonic function)."""
    ks = np.arange(1, n_terms + 1)
    ca = rng.normal(size=n_terms) / ks**2
    cb = rng.normal(size=n_terms) / ks**2

    def F(z):
        z = np.asarray(z)[..., None]
        return np.sum(ca * np.cos(ks * np.pi * z) + cb * np.sin(ks * np.pi * z), axis=-1)

    return _analytic_trace(F, b)
