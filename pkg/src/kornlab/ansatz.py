"""The sharpness Ansatz and the two Korn ratios it realizes.

The Ansatz bends the shell with a profile ``W`` dilated by ``sqrt(h)`` in
theta and with the tangential components chosen to kill the transverse
shear.  It saturates both the interpolation inequality and the second
inequality, so both ratios stay in an h-independent band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._validation import check_exponent, check_ladder
from .exceptions import DegenerateFieldError, DomainError
from .geometry import ThinDomain, h_max
from .shellfield import QuadratureGrid, ShellField, field_gradient, lp_norm, strain

__all__ = [
    "AnsatzProfile",
    "bump_profile",
    "default_profile",
    "make_ansatz",
    "RatioReport",
    "ratio_report",
    "sharpness_sweep",
    "sweep_rows",
]


def _bump(x):
    """``exp(-1/(1-x^2))`` on (-1, 1) and its first two derivatives; zero outside."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1
    q = np.where(inside, 1 - x * x, 1.0)
    b = np.where(inside, np.exp(-1.0 / q), 0.0)
    b1 = b * (-2 * x / q**2)
    b2 = b * (6 * x**4 - 2) / q**4
    return b, np.where(inside, b1, 0.0), np.where(inside, b2, 0.0)


@dataclass(frozen=True)
class AnsatzProfile:
    """Compactly supported profile ``W(xi, eta)``.

    ``evaluate(xi, eta)`` returns ``(W, W_xi, W_eta, W_xixi, W_xieta, W_etaeta)``.
    ``support`` is ``((xi_lo, xi_hi), (eta_lo, eta_hi))``.
    """

    evaluate: Callable = field(repr=False)
    support: tuple

    def __call__(self, xi, eta):
        return self.evaluate(xi, eta)[0]


def bump_profile(xi_center=0.0, xi_half_width=1.0, eta_center=0.0, eta_half_width=1.0, amplitude=1.0):
    """Product bump ``B((xi - xc)/wx) B((eta - ec)/we)`` with ``B(x) = exp(-1/(1-x^2))``."""

    def evaluate(xi, eta):
        a, da, dda = _bump((np.asarray(xi, float) - xi_center) / xi_half_width)
        b, db, ddb = _bump((np.asarray(eta, float) - eta_center) / eta_half_width)
        wx, we = xi_half_width, eta_half_width
        return (
            amplitude * a * b,
            amplitude * da * b / wx,
            amplitude * a * db / we,
            amplitude * dda * b / wx**2,
            amplitude * da * db / (wx * we),
            amplitude * a * ddb / we**2,
        )

    support = (
        (xi_center - xi_half_width, xi_center + xi_half_width),
        (eta_center - eta_half_width, eta_center + eta_half_width),
    )
    return AnsatzProfile(evaluate, support)


def default_profile(surface) -> AnsatzProfile:
    """Canonical bump on ``(-1, 1)`` in xi, placed on the middle half of the z-range.

    xi is measured from the patch midpoint (see :func:`make_ansatz`), so the
    theta-support is ``omega/2 +- sqrt(h)`` and fits whenever ``h <= omega^2 / 4``.
    """
    z_lo, z_hi = float(surface.z_lower(0.0)), float(surface.z_upper(0.0))
    return bump_profile(0.0, 1.0, 0.5 * (z_lo + z_hi), (z_hi - z_lo) / 4)


def make_ansatz(profile: AnsatzProfile, d: ThinDomain, theta_center: float | None = None) -> ShellField:
    """The Ansatz field on ``d``::

        u_t     = W(xi, z)
        u_theta = -t W_xi(xi, z) / (A_theta sqrt(h))
        u_z     = -t W_eta(xi, z) / A_z

    with ``xi = (theta - theta_center) / sqrt(h)``; ``theta_center`` defaults
    to the patch midpoint.  Partials are analytic.
    """
    s = d.surface
    sq = math.sqrt(d.h)
    tc = 0.5 * s.omega if theta_center is None else float(theta_center)
    (xi_lo, xi_hi), (eta_lo, eta_hi) = profile.support
    th_lo, th_hi = tc + sq * xi_lo, tc + sq * xi_hi
    theta_nodes = np.linspace(0.0, s.omega, 257)
    z_min = float(np.max(s.z_lower(theta_nodes)))
    z_max = float(np.min(s.z_upper(theta_nodes)))
    if th_lo < 0 or th_hi > s.omega or eta_lo < z_min or eta_hi > z_max:
        raise DomainError(
            f"Ansatz support theta in [{th_lo:.4g}, {th_hi:.4g}], z in [{eta_lo:.4g}, {eta_hi:.4g}] "
            f"does not fit the patch theta in [0, {s.omega:.4g}], z in [{z_min:.4g}, {z_max:.4g}]; "
            f"the patch needs omega >= {max(th_hi, 2 * tc - th_lo):.4g} at h = {d.h:g}"
        )

    def _parts(t, theta, z):
        t, theta, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, theta, z)))
        W = profile.evaluate((theta - tc) / sq, z)
        A_theta, A_z = s.metric(theta, z)
        return t, theta, z, W, A_theta, A_z

    def values(t, theta, z):
        t, _, _, W, A_theta, A_z = _parts(t, theta, z)
        return np.stack([W[0], -t * W[1] / (A_theta * sq), -t * W[2] / A_z], axis=-1)

    def partials(t, theta, z):
        t, theta, z, (w, w_x, w_e, w_xx, w_xe, w_ee), A_theta, A_z = _parts(t, theta, z)
        A_th_th, A_th_z, A_z_th, A_z_z = s.metric_derivatives(theta, z)
        out = np.empty(t.shape + (3, 3))
        out[..., 0, 0] = 0.0
        out[..., 0, 1] = w_x / sq
        out[..., 0, 2] = w_e
        out[..., 1, 0] = -w_x / (A_theta * sq)
        out[..., 1, 1] = -t / sq * (w_xx / (sq * A_theta) - w_x * A_th_th / A_theta**2)
        out[..., 1, 2] = -t / sq * (w_xe / A_theta - w_x * A_th_z / A_theta**2)
        out[..., 2, 0] = -w_e / A_z
        out[..., 2, 1] = -t * (w_xe / (sq * A_z) - w_e * A_z_th / A_z**2)
        out[..., 2, 2] = -t * (w_ee / A_z - w_e * A_z_z / A_z**2)
        return out

    return ShellField(values, partials, name="ansatz", theta_support=(th_lo, th_hi))


@dataclass(frozen=True)
class RatioReport:
    """Norms of one field on one thin domain and the two Korn ratios."""

    h: float
    p: float
    norm_u: float
    norm_ut: float
    norm_grad: float
    norm_strain: float
    norm_simplified_grad: float
    norm_simplified_strain: float
    interpolation_ratio: float
    second_ratio: float


def default_grid(f: ShellField, d: ThinDomain, n_theta=None, n_z=64, n_t=None) -> QuadratureGrid:
    """Quadrature grid resolving the ``sqrt(h)`` scale, restricted to the field's theta support."""
    if n_theta is None:
        n_theta = max(64, math.ceil(16 / math.sqrt(d.h)))
    return QuadratureGrid.build(d, n_theta, n_z, n_t, theta_range=f.theta_support)


def ratio_report(f: ShellField, d: ThinDomain, p: float, grid: QuadratureGrid | None = None) -> RatioReport:
    """Evaluate the interpolation ratio and the second-inequality ratio of ``f``.

    interpolation_ratio = |grad u|^2 / (|u_t| |e(u)| / h + |u|^2 + |e(u)|^2)
    second_ratio        = |grad u|^2 / ((|u|^2 + |e(u)|^2) / h)

    with all norms L^p over the thin domain.
    """
    p = check_exponent(p)
    if grid is None:
        grid = default_grid(f, d)
    u = f(grid.t, grid.theta, grid.z)
    G = field_gradient(f, d, grid)
    F = field_gradient(f, d, grid, simplified=True)
    norm = lambda v: lp_norm(v, d, p, grid)  # noqa: E731
    n_u, n_ut, n_G, n_E = norm(u), norm(u[..., 0]), norm(G), norm(strain(G))
    n_F, n_Fs = norm(F), norm(strain(F))
    h = d.h
    denom_interp = n_ut * n_E / h + n_u**2 + n_E**2
    denom_second = (n_u**2 + n_E**2) / h
    if denom_interp == 0 or denom_second == 0:
        raise DegenerateFieldError(f"field {f.name!r} has |u| = |e(u)| = 0; ratios undefined")
    return RatioReport(
        h=h, p=p, norm_u=n_u, norm_ut=n_ut, norm_grad=n_G, norm_strain=n_E,
        norm_simplified_grad=n_F, norm_simplified_strain=n_Fs,
        interpolation_ratio=n_G**2 / denom_interp,
        second_ratio=n_G**2 / denom_second,
    )


def sharpness_sweep(profile, d: ThinDomain, p: float, h_ladder) -> list[RatioReport]:
    """Ratio reports of the Ansatz along a strictly decreasing thickness ladder.

    ``d`` fixes the surface and the thickness-profile family; it is rebuilt
    at every ``h`` of the ladder.  ``profile=None`` uses :func:`default_profile`.
    """
    p = check_exponent(p)
    ladder = check_ladder(h_ladder, h_max(d.surface, d.c1))
    if profile is None:
        profile = default_profile(d.surface)
    reports = []
    for h in ladder:
        dh = d if h == d.h else d.with_thickness(h)
        f = make_ansatz(profile, dh)
        reports.append(ratio_report(f, dh, p))
    return reports


SWEEP_COLUMNS = (
    "h", "p", "norm_u", "norm_ut", "norm_grad", "norm_strain",
    "norm_simplified_grad", "norm_simplified_strain", "interpolation_ratio", "second_ratio",
)


def sweep_rows(reports):
    """Rows (tuples in ``SWEEP_COLUMNS`` order) for CSV output."""
    return [tuple(getattr(r, c) for c in SWEEP_COLUMNS) for r in reports]
