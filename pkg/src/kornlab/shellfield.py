"""Displacement fields in the local shell frame, their gradients and L^p norms.

Fields are expressed by components ``(u_t, u_theta, u_z)`` in the orthonormal
frame ``(n, e_theta, e_z)`` and are functions of ``(t, theta, z)``.  Gradient
matrices use the same frame: row ``i`` is the component, column ``j`` the
direction of differentiation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import check_exponent, check_finite, check_resolution
from .exceptions import SingularityError
from .geometry import ThinDomain

__all__ = [
    "ShellField",
    "QuadratureGrid",
    "eval_gradient",
    "eval_simplified_gradient",
    "field_gradient",
    "strain",
    "lp_norm",
    "rigid_field",
    "random_bump_field",
    "dump_matrix_field",
]

# 1 + t kappa must stay above this for the frame gradient to be trusted
_MIN_JACOBIAN_FACTOR = 0.5


@dataclass(frozen=True)
class ShellField:
    """A displacement field ``(t, theta, z) -> (u_t, u_theta, u_z)``.

    ``values`` returns an array with a trailing axis of length 3.  When
    ``partials`` is given it returns the ``(..., 3, 3)`` array of
    ``d u_i / d (t, theta, z)_j``; otherwise derivatives come from centered
    differences (step ``fd_step`` pointwise, the grid spacing on a grid).
    """

    values: Callable = field(repr=False)
    partials: Callable | None = field(default=None, repr=False)
    fd_step: float = 1e-5
    name: str = "field"
    # theta-interval outside of which the field vanishes, if known
    theta_support: tuple | None = None

    def __call__(self, t, theta, z):
        return np.asarray(self.values(t, theta, z), dtype=float)

    @property
    def has_partials(self):
        return self.partials is not None

    def derivatives(self, t, theta, z):
        if self.partials is not None:
            return np.asarray(self.partials(t, theta, z), dtype=float)
        t, theta, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, theta, z)))
        step = self.fd_step
        coords = [t, theta, z]
        columns = []
        for j in range(3):
            plus = list(coords)
            minus = list(coords)
            plus[j] = coords[j] + step
            minus[j] = coords[j] - step
            columns.append((self.values(*plus) - self.values(*minus)) / (2 * step))
        return np.stack(columns, axis=-1)

    def scaled(self, factor):
        """The field ``factor * u`` (keeps analytic partials if present)."""
        values = lambda t, th, z: factor * self.values(t, th, z)  # noqa: E731
        partials = None
        if self.partials is not None:
            partials = lambda t, th, z: factor * self.partials(t, th, z)  # noqa: E731
        return ShellField(values, partials, self.fd_step, f"{factor:g}*{self.name}", self.theta_support)


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor midpoint rule on a thin domain.

    Cells are uniform in ``(theta, sigma, s)`` where ``z = z_lo + sigma (z_hi - z_lo)``
    and ``t = -g1 + s (g1 + g2)``.  Arrays have shape ``(n_theta, n_z, n_t)``;
    ``weights`` already include the volume element ``jacobian``.
    """

    t: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    z: np.ndarray = field(repr=False)
    jacobian: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    spacing: tuple = (1.0, 1.0, 1.0)

    @property
    def shape(self):
        return self.t.shape

    @classmethod
    def build(
        cls,
        domain: ThinDomain,
        n_theta: int = 64,
        n_z: int = 64,
        n_t: int | None = None,
        theta_range: tuple[float, float] | None = None,
        sigma_range: tuple[float, float] = (0.0, 1.0),
        thickness: tuple[Callable, Callable] | None = None,
    ) -> "QuadratureGrid":
        """Midpoint grid on ``domain`` (or on a theta / sigma sub-box of it).

        ``thickness`` overrides ``(g1, g2)``, e.g. to integrate over the inner
        shell ``|t| < h``.
        """
        if n_t is None:
            n_t = max(8, math.ceil(4 * domain.c1))
        check_resolution(n_theta, "n_theta")
        check_resolution(n_z, "n_z")
        check_resolution(n_t, "n_t", minimum=2)
        s = domain.surface
        th_lo, th_hi = theta_range if theta_range is not None else (0.0, s.omega)
        sg_lo, sg_hi = sigma_range
        d_theta = (th_hi - th_lo) / n_theta
        d_sigma = (sg_hi - sg_lo) / n_z
        d_s = 1.0 / n_t
        theta_1d = th_lo + (np.arange(n_theta) + 0.5) * d_theta
        sigma_1d = sg_lo + (np.arange(n_z) + 0.5) * d_sigma
        s_1d = (np.arange(n_t) + 0.5) * d_s
        theta, sigma, sv = np.meshgrid(theta_1d, sigma_1d, s_1d, indexing="ij")
        z_lo, z_hi = s.z_lower(theta), s.z_upper(theta)
        z = z_lo + sigma * (z_hi - z_lo)
        g1f, g2f = thickness if thickness is not None else (domain.g1, domain.g2)
        g1, g2 = g1f(theta, z), g2f(theta, z)
        t = -g1 + sv * (g1 + g2)
        jac = _volume_element(domain, t, theta, z)
        weights = jac * d_theta * (z_hi - z_lo) * d_sigma * (g1 + g2) * d_s
        return cls(t=t, theta=theta, z=z, jacobian=jac, weights=weights,
                   spacing=(d_theta, d_sigma, d_s))

    def subgrid(self, index):
        """Restrict to an index box (a tuple of slices over the three axes)."""
        return QuadratureGrid(
            t=self.t[index], theta=self.theta[index], z=self.z[index],
            jacobian=self.jacobian[index], weights=self.weights[index], spacing=self.spacing,
        )

    def locate(self, flat_index):
        i = np.unravel_index(flat_index % self.t.size, self.shape)
        return f"(t, theta, z) = ({self.t[i]:.6g}, {self.theta[i]:.6g}, {self.z[i]:.6g})"


def _volume_element(domain, t, theta, z):
    s = domain.surface
    A_theta, A_z = s.metric(theta, z)
    k_theta, k_z = s.curvatures(theta, z)
    f_theta, f_z = 1 + t * k_theta, 1 + t * k_z
    _check_factors(f_theta, f_z, t, theta, z)
    return A_theta * A_z * f_theta * f_z


def _check_factors(f_theta, f_z, t, theta, z):
    low = np.minimum(f_theta, f_z) < _MIN_JACOBIAN_FACTOR
    if np.any(low):
        idx = np.argwhere(low)[0] if np.ndim(low) else ()
        pt = tuple(float(np.broadcast_to(a, low.shape)[tuple(idx)]) for a in (t, theta, z))
        raise SingularityError(
            f"1 + t*kappa < {_MIN_JACOBIAN_FACTOR} at (t, theta, z) = {pt}; the domain is too thick"
        )


def _frame_gradient(u, du, surface, t, theta, z, simplified):
    """Assemble the 3x3 frame gradient from components and coordinate partials."""
    A_theta, A_z = surface.metric(theta, z)
    _, A_theta_z, A_z_theta, _ = surface.metric_derivatives(theta, z)
    k_theta, k_z = surface.curvatures(theta, z)
    f_theta, f_z = 1 + t * k_theta, 1 + t * k_z
    _check_factors(f_theta, f_z, t, theta, z)
    if simplified:
        f_theta = f_z = 1.0

    ut, uth, uz = u[..., 0], u[..., 1], u[..., 2]
    d = lambda i, j: du[..., i, j]  # noqa: E731  component i, variable j in (t, theta, z)
    AA = A_theta * A_z

    M = np.empty(np.shape(ut) + (3, 3))
    M[..., 0, 0] = d(0, 0)
    M[..., 0, 1] = (d(0, 1) - A_theta * k_theta * uth) / (A_theta * f_theta)
    M[..., 0, 2] = (d(0, 2) - A_z * k_z * uz) / (A_z * f_z)
    M[..., 1, 0] = d(1, 0)
    M[..., 1, 1] = (A_z * d(1, 1) + AA * k_theta * ut + A_theta_z * uz) / (AA * f_theta)
    M[..., 1, 2] = (A_theta * d(1, 2) - A_z_theta * uz) / (AA * f_z)
    M[..., 2, 0] = d(2, 0)
    M[..., 2, 1] = (A_z * d(2, 1) - A_theta_z * uth) / (AA * f_theta)
    M[..., 2, 2] = (A_theta * d(2, 2) + AA * k_z * ut + A_z_theta * uth) / (AA * f_z)
    return M


def _split_point(point):
    t, theta, z = point
    return np.broadcast_arrays(*(np.asarray(v, float) for v in (t, theta, z)))


def eval_gradient(f: ShellField, d: ThinDomain, point) -> np.ndarray:
    """Exact displacement gradient in the frame ``(n, e_theta, e_z)`` at ``point = (t, theta, z)``.

    Arrays in ``point`` broadcast; the result has shape ``(..., 3, 3)``.
    """
    t, theta, z = _split_point(point)
    return _frame_gradient(f(t, theta, z), f.derivatives(t, theta, z), d.surface, t, theta, z, False)


def eval_simplified_gradient(f: ShellField, d: ThinDomain, point) -> np.ndarray:
    """Gradient restricted to the mid-surface: same as :func:`eval_gradient` without ``1 + t kappa``."""
    t, theta, z = _split_point(point)
    return _frame_gradient(f(t, theta, z), f.derivatives(t, theta, z), d.surface, t, theta, z, True)


def diff_axis(values, spacing, axis):
    """Fourth-order finite difference of uniformly spaced samples along ``axis``.

    Centered 5-point stencil in the interior, one-sided 5-point stencils on the
    two outermost layers.  Needs at least 5 samples along the axis.
    """
    v = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    n = v.shape[0]
    if n < 5:
        raise ValueError(f"need at least 5 samples along axis {axis}, got {n}")
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / 12.0
    out[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / 12.0
    out[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / 12.0
    out[-1] = -(-25 * v[-1] + 48 * v[-2] - 36 * v[-3] + 16 * v[-4] - 3 * v[-5]) / 12.0
    out[-2] = -(-3 * v[-1] - 10 * v[-2] + 18 * v[-3] - 6 * v[-4] + v[-5]) / 12.0
    return np.moveaxis(out / spacing, 0, axis)


def _grid_partials(values, grid):
    """Differences of grid samples w.r.t. physical ``(t, theta, z)``.

    Derivatives are taken along the grid axes with :func:`diff_axis` and
    mapped through the inverse of the discrete coordinate Jacobian, which
    makes the result exact for fields affine in the physical coordinates.
    """
    coords = (grid.t, grid.theta, grid.z)
    # axis order of the grid is (theta, sigma, s)
    jac = np.empty(grid.shape + (3, 3))
    for a, X in enumerate(coords):
        for b, dq in enumerate(grid.spacing):
            jac[..., a, b] = diff_axis(X, dq, b)
    du_dq = np.empty(values.shape + (3,))
    for b, dq in enumerate(grid.spacing):
        du_dq[..., b] = diff_axis(values, dq, b)
    inv = np.linalg.inv(jac)
    # du/dX_a = sum_b du/dq_b * dq_b/dX_a
    return np.einsum("...ib,...ba->...ia", du_dq, inv)


def field_gradient(f: ShellField, d: ThinDomain, grid: QuadratureGrid, simplified=False):
    """Frame gradient of ``f`` at every grid point, shape ``grid.shape + (3, 3)``.

    Fields without analytic partials are sampled on the grid and differenced
    at the grid spacing (fourth order, see :func:`diff_axis`).
    """
    u = f(grid.t, grid.theta, grid.z)
    if f.has_partials:
        du = f.derivatives(grid.t, grid.theta, grid.z)
    else:
        du = _grid_partials(u, grid)
    return _frame_gradient(u, du, d.surface, grid.t, grid.theta, grid.z, simplified)


def strain(M: np.ndarray) -> np.ndarray:
    """Symmetric part ``(M + M^T) / 2`` over the last two axes."""
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def _pointwise_abs(values, grid_shape):
    extra = values.ndim - len(grid_shape)
    if extra == 0:
        return np.abs(values)
    axes = tuple(range(len(grid_shape), values.ndim))
    return np.sqrt(np.sum(values * values, axis=axes))


def lp_norm(f, d: ThinDomain, p: float, grid: QuadratureGrid | None = None) -> float:
    """L^p norm over the thin domain by midpoint quadrature.

    ``f`` is either an array of samples on ``grid`` (scalar, vector or
    matrix valued; vectors use the Euclidean and matrices the Frobenius
    absolute value) or a callable ``(t, theta, z) -> samples``.
    """
    p = check_exponent(p)
    if grid is None:
        grid = QuadratureGrid.build(d)
    values = f(grid.t, grid.theta, grid.z) if callable(f) else np.asarray(f, dtype=float)
    check_finite(values, "integrand", grid.locate)
    return lp_norm_of_samples(values, grid.weights, p)


def lp_norm_of_samples(values, weights, p):
    """``(sum w |v|^p)^(1/p)`` with the absolute value taken over trailing axes."""
    mag = _pointwise_abs(np.asarray(values, dtype=float), np.shape(weights))
    scale = float(np.max(mag)) if mag.size else 0.0
    if scale == 0.0:
        return 0.0
    # scaling avoids overflow / underflow of |v|^p for large p
    total = np.sum(weights * (mag / scale) ** p)
    return scale * float(total) ** (1.0 / p)


def rigid_field(axis, center, d: ThinDomain) -> ShellField:
    """Infinitesimal rigid motion ``x -> axis x (x - center)`` in the local frame.

    The field is evaluated in Cartesian coordinates and projected onto the
    frame; it carries no analytic partials, so gradients are differenced.
    """
    axis = np.asarray(axis, dtype=float).reshape(3)
    center = np.asarray(center, dtype=float).reshape(3)
    surface = d.surface

    def values(t, theta, z):
        t, theta, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, theta, z)))
        x = surface.embed(t, theta, z)
        u = np.cross(np.broadcast_to(axis, x.shape), x - center)
        n, e_theta, e_z = surface.frame(theta, z)
        return np.stack([np.sum(u * e, axis=-1) for e in (n, e_theta, e_z)], axis=-1)

    return ShellField(values, None, name="rigid")


def random_bump_field(d: ThinDomain, rng: np.random.Generator, n_bumps: int = 3) -> ShellField:
    """Sum of Gaussian bumps in (theta, z), affine in t, with analytic partials."""
    s = d.surface
    z_lo, z_hi = float(s.z_lower(0.0)), float(s.z_upper(0.0))
    centers_theta = rng.uniform(0.2, 0.8, n_bumps) * s.omega
    centers_z = z_lo + rng.uniform(0.2, 0.8, n_bumps) * (z_hi - z_lo)
    width = 0.2 * min(s.omega, z_hi - z_lo)
    amp = rng.normal(size=(n_bumps, 3))
    tilt = rng.normal(size=(n_bumps, 3)) / d.h

    def _parts(t, theta, z):
        t, theta, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, theta, z)))
        dth = theta[..., None] - centers_theta
        dz = z[..., None] - centers_z
        G = np.exp(-(dth**2 + dz**2) / (2 * width**2))
        return t, dth, dz, G

    def values(t, theta, z):
        t, _, _, G = _parts(t, theta, z)
        lin = 1 + t[..., None, None] * tilt  # (..., bump, comp)
        return np.sum(amp * lin * G[..., None], axis=-2)

    def partials(t, theta, z):
        t, dth, dz, G = _parts(t, theta, z)
        lin = 1 + t[..., None, None] * tilt
        base = amp * G[..., None]
        d_t = np.sum(base * tilt, axis=-2)
        d_theta = np.sum(base * lin * (-dth / width**2)[..., None], axis=-2)
        d_z = np.sum(base * lin * (-dz / width**2)[..., None], axis=-2)
        return np.stack([d_t, d_theta, d_z], axis=-1)

    return ShellField(values, partials, name="bumps")


def dump_matrix_field(path, grid: QuadratureGrid, M: np.ndarray) -> None:
    """Write ``t, theta, z`` and the nine matrix entries per grid point as CSV."""
    M = np.asarray(M, dtype=float).reshape(-1, 9)
    cols = [grid.t.ravel(), grid.theta.ravel(), grid.z.ravel()]
    header = ["t", "theta", "z"] + [f"m{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row_idx in range(M.shape[0]):
            row = [c[row_idx] for c in cols] + list(M[row_idx])
            writer.writerow([format(float(v), ".17g") for v in row])
