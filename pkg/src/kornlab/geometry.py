"""Single-patch mid-surfaces in principal coordinates and thin domains around them.

A surface is parametrized as ``r(theta, z)`` with ``theta in [0, omega]`` and
``z in [z_lower(theta), z_upper(theta)]``.  Coordinate lines are lines of
curvature, so the local frame ``(n, e_theta, e_z)`` is orthonormal and

    dn/dtheta = kappa_theta * A_theta * e_theta,
    dn/dz     = kappa_z     * A_z     * e_z.

This sign convention is the one under which the volume element of
``x = r + t n`` reads ``A_theta A_z (1 + t kappa_theta)(1 + t kappa_z)``.  With
it, the cylinder and sphere use the *outward* normal and get positive
curvatures, and the catenoid has ``kappa_theta = -kappa_z = 1 / (c cosh^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from ._validation import check_positive, check_resolution
from .exceptions import GeometryError, ValidationError

__all__ = [
    "SURFACE_KINDS",
    "PROFILES",
    "MidSurface",
    "DomainParams",
    "ThinDomain",
    "make_surface",
    "domain_params",
    "make_thin_domain",
    "h_max",
]

SURFACE_KINDS = ("plate", "cylinder", "sphere_cap", "catenoid")
PROFILES = ("constant", "tilted", "wavy")

# Step used for finite-difference derivatives inside domain_params and the
# thickness-profile validation, as a fraction of the coordinate range.
_FD_FRACTION = 1e-4


# --------------------------------------------------------------------------
# per-kind analytic patches


class _Patch:
    """Analytic evaluators of one surface kind.  All methods broadcast."""

    omega: float
    z_range: tuple[float, float]

    def position(self, theta, z):
        raise NotImplementedError

    def frame(self, theta, z):
        """Return ``(n, e_theta, e_z)``, each with a trailing axis of length 3."""
        raise NotImplementedError

    def metric(self, theta, z):
        raise NotImplementedError

    def metric_derivatives(self, theta, z):
        """Return ``(A_theta_theta, A_theta_z, A_z_theta, A_z_z)``."""
        raise NotImplementedError

    def curvatures(self, theta, z):
        raise NotImplementedError


def _stack(*components):
    return np.stack(np.broadcast_arrays(*components), axis=-1)


class _Plate(_Patch):
    def __init__(self, Lx, Ly):
        self.omega = Lx
        self.z_range = (0.0, Ly)

    def position(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        return _stack(theta, z, np.zeros_like(theta))

    def frame(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        one, zero = np.ones(shape), np.zeros(shape)
        return _stack(zero, zero, one), _stack(one, zero, zero), _stack(zero, one, zero)

    def metric(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return np.ones(shape), np.ones(shape)

    def metric_derivatives(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return tuple(np.zeros(shape) for _ in range(4))

    def curvatures(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return np.zeros(shape), np.zeros(shape)


class _Cylinder(_Patch):
    def __init__(self, R, length, omega):
        self.R = R
        self.omega = omega
        self.z_range = (0.0, length)

    def position(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        return _stack(self.R * np.cos(theta), self.R * np.sin(theta), z)

    def frame(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        c, s = np.cos(theta), np.sin(theta)
        zero, one = np.zeros_like(theta), np.ones_like(theta)
        return _stack(c, s, zero), _stack(-s, c, zero), _stack(zero, zero, one)

    def metric(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return np.full(shape, self.R), np.ones(shape)

    def metric_derivatives(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return tuple(np.zeros(shape) for _ in range(4))

    def curvatures(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return np.full(shape, 1.0 / self.R), np.zeros(shape)


class _SphereCap(_Patch):
    # z is polar arc length, so polar angle = z / R
    def __init__(self, R, polar, omega):
        self.R = R
        self.omega = omega
        self.z_range = (R * polar[0], R * polar[1])

    def position(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        phi = z / self.R
        return self.R * _stack(np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi))

    def frame(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        phi = z / self.R
        ct, st, cp, sp = np.cos(theta), np.sin(theta), np.cos(phi), np.sin(phi)
        n = _stack(sp * ct, sp * st, cp)
        e_theta = _stack(-st, ct, np.zeros_like(theta))
        e_z = _stack(cp * ct, cp * st, -sp)
        return n, e_theta, e_z

    def metric(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        return self.R * np.sin(z / self.R), np.ones_like(z)

    def metric_derivatives(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        zero = np.zeros_like(z)
        return zero, np.cos(z / self.R), zero, zero.copy()

    def curvatures(self, theta, z):
        shape = np.broadcast(np.asarray(theta), np.asarray(z)).shape
        return np.full(shape, 1.0 / self.R), np.full(shape, 1.0 / self.R)


class _Catenoid(_Patch):
    def __init__(self, c, z_min, z_max, omega):
        self.c = c
        self.omega = omega
        self.z_range = (z_min, z_max)

    def position(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        rho = self.c * np.cosh(z / self.c)
        return _stack(rho * np.cos(theta), rho * np.sin(theta), z)

    def frame(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        u = z / self.c
        ch, sh = np.cosh(u), np.sinh(u)
        ct, st = np.cos(theta), np.sin(theta)
        n = _stack(ct / ch, st / ch, -sh / ch)
        e_theta = _stack(-st, ct, np.zeros_like(theta))
        e_z = _stack(sh * ct / ch, sh * st / ch, 1.0 / ch)
        return n, e_theta, e_z

    def metric(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        ch = np.cosh(z / self.c)
        return self.c * ch, ch

    def metric_derivatives(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        sh = np.sinh(z / self.c)
        zero = np.zeros_like(z)
        return zero, sh, zero.copy(), sh / self.c

    def curvatures(self, theta, z):
        theta, z = np.broadcast_arrays(np.asarray(theta, float), np.asarray(z, float))
        k = 1.0 / (self.c * np.cosh(z / self.c) ** 2)
        return k, -k


# name -> (required params, defaults)
_KIND_PARAMS = {
    "plate": (("Lx", "Ly"), {}),
    "cylinder": (("R", "length"), {"omega": 1.0}),
    "sphere_cap": (("R", "polar"), {"omega": 2.0}),
    "catenoid": ((), {"c": 1.0, "z_min": -0.5, "z_max": 0.5, "omega": 1.0}),
}


def _build_patch(kind, params):
    if kind == "plate":
        return _Plate(params["Lx"], params["Ly"])
    if kind == "cylinder":
        return _Cylinder(params["R"], params["length"], params["omega"])
    if kind == "sphere_cap":
        return _SphereCap(params["R"], params["polar"], params["omega"])
    return _Catenoid(params["c"], params["z_min"], params["z_max"], params["omega"])


# --------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class MidSurface:
    """A single principal-coordinate patch of a mid-surface.

    Use :func:`make_surface` to construct one.  Evaluators accept arrays and
    broadcast; vector-valued results carry a trailing axis of length 3.
    """

    kind: str
    params: Mapping[str, object]
    omega: float
    z_lower: Callable = field(repr=False)
    z_upper: Callable = field(repr=False)
    _patch: _Patch = field(repr=False, compare=False)

    @property
    def theta_range(self):
        return (0.0, self.omega)

    @property
    def z_bounds(self):
        return (self.z_lower, self.z_upper)

    def position(self, theta, z):
        return self._patch.position(theta, z)

    def frame(self, theta, z):
        return self._patch.frame(theta, z)

    def normal(self, theta, z):
        return self._patch.frame(theta, z)[0]

    def A_theta(self, theta, z):
        return self._patch.metric(theta, z)[0]

    def A_z(self, theta, z):
        return self._patch.metric(theta, z)[1]

    def metric(self, theta, z):
        return self._patch.metric(theta, z)

    def metric_derivatives(self, theta, z):
        """``(A_theta,theta, A_theta,z, A_z,theta, A_z,z)`` as arrays."""
        return self._patch.metric_derivatives(theta, z)

    def kappa_theta(self, theta, z):
        return self._patch.curvatures(theta, z)[0]

    def kappa_z(self, theta, z):
        return self._patch.curvatures(theta, z)[1]

    def curvatures(self, theta, z):
        return self._patch.curvatures(theta, z)

    def embed(self, t, theta, z):
        """Cartesian point ``r(theta, z) + t n(theta, z)``."""
        t = np.asarray(t, float)
        return self.position(theta, z) + t[..., None] * self.normal(theta, z)

    def grid(self, resolution):
        """Node grid ``(theta, z)`` of shape ``(resolution + 1, resolution + 1)``."""
        theta = np.linspace(0.0, self.omega, resolution + 1)
        sigma = np.linspace(0.0, 1.0, resolution + 1)
        th, sg = np.meshgrid(theta, sigma, indexing="ij")
        lo, hi = self.z_lower(th), self.z_upper(th)
        return th, lo + sg * (hi - lo)


@dataclass(frozen=True)
class DomainParams:
    """Mid-surface parameters: metric bounds a, A; curvature norm k; z-extent L, Z; omega; l."""

    a: float
    A: float
    k: float
    L: float
    Z: float
    omega: float
    l: float


@dataclass(frozen=True)
class ThinDomain:
    """Mid-surface plus thickness profiles: ``t in (-g1(theta, z), g2(theta, z))``."""

    surface: MidSurface
    h: float
    g1: Callable = field(repr=False)
    g2: Callable = field(repr=False)
    c1: float
    c2: float
    profile: str = "constant"
    slope: float = 0.5

    def thickness(self, theta, z):
        return self.g1(theta, z) + self.g2(theta, z)

    def with_thickness(self, h: float) -> "ThinDomain":
        """Same surface and profile family at another thickness scale."""
        return make_thin_domain(self.surface, h, self.profile, self.c1, self.c2, self.slope)


# --------------------------------------------------------------------------
# operations


def _constant(value):
    def bound(theta):
        return np.full(np.shape(theta), value, dtype=float)

    return bound


def make_surface(kind: str, params: Mapping[str, object] | None = None) -> MidSurface:
    """Build a mid-surface patch of the given kind.

    Parameters by kind (``omega`` is the theta-extent of the patch)::

        plate       Lx, Ly
        cylinder    R, length, omega=1
        sphere_cap  R, polar=(lo, hi) polar-angle range, omega=2
        catenoid    c=1, z_min=-0.5, z_max=0.5, omega=1
    """
    if kind not in _KIND_PARAMS:
        raise GeometryError(f"unknown surface kind {kind!r}; expected one of {SURFACE_KINDS}")
    params = dict(params or {})
    if params.get("patches", 1) != 1:
        raise GeometryError("only single-patch surfaces are supported (patches must be 1)")
    params.pop("patches", None)
    required, defaults = _KIND_PARAMS[kind]
    for name in required:
        if name not in params:
            raise GeometryError(f"{kind}: missing parameter {name!r}")
    unknown = set(params) - set(required) - set(defaults)
    if unknown:
        raise GeometryError(f"{kind}: unknown parameter(s) {sorted(unknown)}")
    resolved = {**defaults, **params}

    for name, value in resolved.items():
        if name == "polar":
            try:
                lo, hi = (float(v) for v in value)
            except (TypeError, ValueError):
                raise GeometryError(f"{kind}: parameter 'polar' must be a pair (lo, hi)") from None
            if not (0.0 < lo < hi < math.pi):
                raise GeometryError(f"{kind}: parameter 'polar' must satisfy 0 < lo < hi < pi")
            resolved[name] = (lo, hi)
            continue
        if name in ("z_min", "z_max"):
            try:
                resolved[name] = float(value)
            except (TypeError, ValueError):
                raise GeometryError(f"{kind}: parameter {name!r} must be a real number") from None
            if not math.isfinite(resolved[name]):
                raise GeometryError(f"{kind}: parameter {name!r} must be finite")
            continue
        try:
            resolved[name] = check_positive(value, name)
        except (TypeError, ValueError) as exc:
            raise GeometryError(f"{kind}: invalid parameter {name!r}: {exc}") from None
    if kind == "catenoid" and not resolved["z_min"] < resolved["z_max"]:
        raise GeometryError("catenoid: parameter 'z_max' must exceed 'z_min'")

    patch = _build_patch(kind, resolved)
    lo, hi = patch.z_range
    return MidSurface(
        kind=kind,
        params=MappingProxyType(resolved),
        omega=patch.omega,
        z_lower=_constant(lo),
        z_upper=_constant(hi),
        _patch=patch,
    )


def _fd_partials(f, theta, z, d_theta, d_z):
    """First and second central differences of ``f(theta, z)``."""
    f0 = f(theta, z)
    fp_t, fm_t = f(theta + d_theta, z), f(theta - d_theta, z)
    fp_z, fm_z = f(theta, z + d_z), f(theta, z - d_z)
    f_t = (fp_t - fm_t) / (2 * d_theta)
    f_z = (fp_z - fm_z) / (2 * d_z)
    f_tt = (fp_t - 2 * f0 + fm_t) / d_theta**2
    f_zz = (fp_z - 2 * f0 + fm_z) / d_z**2
    f_tz = (
        f(theta + d_theta, z + d_z)
        - f(theta + d_theta, z - d_z)
        - f(theta - d_theta, z + d_z)
        + f(theta - d_theta, z - d_z)
    ) / (4 * d_theta * d_z)
    return f0, (f_t, f_z), (f_tt, f_tz, f_zz)


def _sup(*arrays):
    return max(float(np.max(np.abs(a))) for a in arrays)


def domain_params(surface: MidSurface, grid_resolution: int = 64) -> DomainParams:
    """Grid estimate of the mid-surface parameters.

    Sobolev sup-norms are sums over derivative orders of grid maxima; the
    derivatives are central differences at a fixed small step so that the
    estimate is monotone when the node grid is refined by doubling.
    """
    check_resolution(grid_resolution, "grid_resolution", minimum=8)
    theta, z = surface.grid(grid_resolution)
    for name, values in (
        ("A_theta", surface.A_theta(theta, z)),
        ("A_z", surface.A_z(theta, z)),
        ("kappa_theta", surface.kappa_theta(theta, z)),
        ("kappa_z", surface.kappa_z(theta, z)),
    ):
        bad = ~np.isfinite(values)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise GeometryError(
                f"non-finite {name} at (theta, z) = ({theta[i, j]:.6g}, {z[i, j]:.6g})"
            )

    z_lo, z_hi = surface.z_lower(theta[:, 0]), surface.z_upper(theta[:, 0])
    z_span = float(np.max(z_hi - z_lo))
    d_theta = _FD_FRACTION * surface.omega
    d_z = _FD_FRACTION * z_span

    a = float(min(np.min(surface.A_theta(theta, z)), np.min(surface.A_z(theta, z))))

    A = 0.0
    for f in (surface.A_theta, surface.A_z):
        f0, first, second = _fd_partials(f, theta, z, d_theta, d_z)
        A += _sup(f0) + _sup(*first) + _sup(*second)
    k = 0.0
    for f in (surface.kappa_theta, surface.kappa_z):
        f0, first, _ = _fd_partials(f, theta, z, d_theta, d_z)
        k += _sup(f0) + _sup(*first)

    th = theta[:, 0]
    Z = 0.0
    for bound in surface.z_bounds:
        slope = (bound(th + d_theta) - bound(th - d_theta)) / (2 * d_theta)
        Z += _sup(bound(th)) + _sup(slope)

    gap = z_hi - z_lo
    return DomainParams(
        a=a, A=A, k=k, L=float(np.max(gap)), Z=Z, omega=float(surface.omega), l=float(np.min(gap))
    )


def h_max(surface: MidSurface, c1: float, params: DomainParams | None = None) -> float:
    """Largest admissible thickness scale, ``0.4 / (c1 k)`` (infinite when flat)."""
    params = params or domain_params(surface)
    if params.k == 0:
        return math.inf
    return 0.4 / (c1 * params.k)


def _profile_functions(surface, h, profile, c1, slope):
    omega = surface.omega
    if profile == "constant":
        g = lambda theta, z: np.full(np.broadcast(theta, z).shape, h)  # noqa: E731
        return g, g
    if profile == "tilted":
        g1 = lambda theta, z: np.full(np.broadcast(theta, z).shape, h)  # noqa: E731

        def g2(theta, z):
            theta, _ = np.broadcast_arrays(np.asarray(theta, float), z)
            return np.clip(h * (1.0 + 0.5 * theta / omega), h, c1 * h)

        return g1, g2
    # wavy: g1 = g2 = h (1 + beta (1 + sin(nu theta)) / 2).  The frequency is
    # chosen so |grad g1| + |grad g2| peaks at slope * h where A_theta is smallest.
    beta = min(0.5, 0.5 * (c1 - 1.0))
    if beta <= 0:
        raise ValidationError("wavy profile needs c1 > 1 to leave room for an oscillation")
    theta, z = surface.grid(64)
    a_theta = float(np.min(surface.A_theta(theta, z)))
    nu = slope * a_theta / beta

    def g(theta, z):
        theta, _ = np.broadcast_arrays(np.asarray(theta, float), z)
        return h * (1.0 + 0.5 * beta * (1.0 + np.sin(nu * theta)))

    return g, g


def _surface_gradient_norm(surface, g, theta, z, d_theta, d_z):
    g_t = (g(theta + d_theta, z) - g(theta - d_theta, z)) / (2 * d_theta)
    g_z = (g(theta, z + d_z) - g(theta, z - d_z)) / (2 * d_z)
    A_theta, A_z = surface.metric(theta, z)
    return np.hypot(g_t / A_theta, g_z / A_z)


def validate_thin_domain(domain: ThinDomain, resolution: int = 128) -> None:
    """Check the thickness bounds on a node grid; raise ``ValidationError`` listing violations."""
    s, h = domain.surface, domain.h
    theta, z = s.grid(resolution)
    g1, g2 = domain.g1(theta, z), domain.g2(theta, z)
    problems = []
    tol = 1e-12 * h
    if np.min(g1) < h - tol or np.min(g2) < h - tol:
        problems.append(f"lower bound h <= g: min(g1, g2) = {min(g1.min(), g2.min()):.6g} < h = {h:.6g}")
    if np.max(g1) > domain.c1 * h + tol or np.max(g2) > domain.c1 * h + tol:
        problems.append(
            f"upper bound g <= c1 h: max(g1, g2) = {max(g1.max(), g2.max()):.6g} > c1 h = {domain.c1 * h:.6g}"
        )
    z_span = float(np.max(s.z_upper(theta[:, 0]) - s.z_lower(theta[:, 0])))
    d_theta, d_z = _FD_FRACTION * s.omega, _FD_FRACTION * z_span
    slope = _surface_gradient_norm(s, domain.g1, theta, z, d_theta, d_z) + _surface_gradient_norm(
        s, domain.g2, theta, z, d_theta, d_z
    )
    # FD of a smooth profile is accurate to ~1e-8 relative; allow that much slack
    if np.max(slope) > domain.c2 * h * (1 + 1e-6):
        problems.append(
            f"slope bound |grad g1| + |grad g2| <= c2 h: measured {np.max(slope):.6g} > c2 h = {domain.c2 * h:.6g}"
        )
    if problems:
        raise ValidationError("thin domain violates " + "; ".join(problems))


def make_thin_domain(
    surface: MidSurface,
    h: float,
    profile: str = "constant",
    c1: float = 2.0,
    c2: float = 1.0,
    slope: float = 0.5,
) -> ThinDomain:
    """Attach thickness profiles to ``surface`` and validate them.

    ``constant`` sets ``g1 = g2 = h``.  ``tilted`` keeps ``g1 = h`` and ramps
    ``g2 = h (1 + theta / (2 omega))`` clipped to ``[h, c1 h]``.  ``wavy``
    oscillates both faces in theta with ``|grad g1| + |grad g2|`` peaking at
    ``slope * h``.
    """
    h = check_positive(h, "h")
    c1 = check_positive(c1, "c1")
    c2 = check_positive(c2, "c2")
    if c1 < 1:
        raise ValidationError(f"c1 must be >= 1 (g >= h and g <= c1 h), got {c1}")
    if profile not in PROFILES:
        raise ValidationError(f"unknown profile {profile!r}; expected one of {PROFILES}")
    limit = h_max(surface, c1)
    if not h < limit:
        raise ValidationError(f"h = {h:g} must be below h_max = {limit:g} for this surface and c1")
    g1, g2 = _profile_functions(surface, h, profile, c1, slope)
    domain = ThinDomain(
        surface=surface, h=h, g1=g1, g2=g2, c1=c1, c2=c2, profile=profile, slope=slope
    )
    validate_thin_domain(domain)
    return domain
