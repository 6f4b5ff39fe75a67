import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kornlab.ansatz import (
    SWEEP_COLUMNS,
    bump_profile,
    default_grid,
    default_profile,
    make_ansatz,
    ratio_report,
    sharpness_sweep,
    sweep_rows,
)
from kornlab.exceptions import DegenerateFieldError, DomainError
from kornlab.shellfield import QuadratureGrid, ShellField, eval_gradient, rigid_field

from conftest import build_surface, thin
from oracles import cartesian_gradient_oracle, random_points


class TestProfile:
    def test_partials_match_fd(self):
        W = bump_profile(0.1, 0.8, 0.5, 0.3, amplitude=2.0)
        xi = np.linspace(-0.6, 0.8, 15)
        eta = np.linspace(0.3, 0.7, 15)
        w, w_x, w_e, w_xx, w_xe, w_ee = W.evaluate(xi, eta)
        s = 1e-5
        ev = lambda k: (lambda a, b: W.evaluate(a, b)[k])  # noqa: E731
        np.testing.assert_allclose(w_x, (ev(0)(xi + s, eta) - ev(0)(xi - s, eta)) / (2 * s), atol=1e-8)
        np.testing.assert_allclose(w_e, (ev(0)(xi, eta + s) - ev(0)(xi, eta - s)) / (2 * s), atol=1e-8)
        np.testing.assert_allclose(w_xx, (ev(1)(xi + s, eta) - ev(1)(xi - s, eta)) / (2 * s), atol=1e-6)
        np.testing.assert_allclose(w_xe, (ev(1)(xi, eta + s) - ev(1)(xi, eta - s)) / (2 * s), atol=1e-6)
        np.testing.assert_allclose(w_ee, (ev(2)(xi, eta + s) - ev(2)(xi, eta - s)) / (2 * s), atol=1e-6)

    def test_vanishes_outside_support(self):
        W = bump_profile(0.0, 1.0, 0.5, 0.25)
        xi = np.array([-1.0, 1.0, 1.5, 0.0, 0.0])
        eta = np.array([0.5, 0.5, 0.5, 0.25, 0.8])
        for arr in W.evaluate(xi, eta):
            assert np.all(arr == 0)

    def test_peak_value(self):
        assert bump_profile()(0.0, 0.0) == pytest.approx(math.exp(-2))


class TestMakeAnsatz:
    def test_midsurface_values(self):
        d = thin("plate", 0.01)
        W = default_profile(d.surface)
        f = make_ansatz(W, d)
        th = np.linspace(0.4, 0.6, 9)
        z = np.full_like(th, 0.5)
        u = f(0.0, th, z)
        assert np.all(u[:, 1:] == 0)
        np.testing.assert_allclose(u[:, 0], W((th - 0.5) / 0.1, z), rtol=1e-15)

    def test_zero_profile_gives_zero_field(self):
        d = thin("plate", 0.01)
        f = make_ansatz(bump_profile(0, 1, 0.5, 0.25, amplitude=0.0), d)
        g = default_grid(f, d)
        assert np.all(f(g.t, g.theta, g.z) == 0)
        with pytest.raises(DegenerateFieldError):
            ratio_report(f, d, 2.0, g)

    def test_partials_match_fd(self, surface, rng):
        d = thin(surface.kind, 0.01)
        f = make_ansatz(default_profile(surface), d)
        lo, hi = f.theta_support
        pts = list(random_points(d, rng, 60))
        pts[1] = rng.uniform(lo, hi, 60)
        an = f.derivatives(*pts)
        fd = ShellField(f.values, None, fd_step=1e-6).derivatives(*pts)
        assert np.max(np.abs(fd - an)) <= 1e-5 * np.max(np.abs(an))

    def test_gradient_matches_cartesian_oracle(self, rng):
        d = thin("sphere_cap", 0.01)
        f = make_ansatz(default_profile(d.surface), d)
        lo, hi = f.theta_support
        t, _, z = random_points(d, rng, 50)
        th = rng.uniform(lo + 0.01, hi - 0.01, 50)
        G = eval_gradient(f, d, (t, th, z))
        ref = cartesian_gradient_oracle(f, d, t, th, z, step=1e-7)
        assert np.max(np.abs(G - ref)) <= 1e-5 * np.max(np.abs(ref))

    def test_component_scaling(self):
        # sup |u_t| = max W while sup |u_theta| ~ h^(1/2) max |W_xi|
        W = default_profile(build_surface("plate"))
        xi = np.linspace(-1, 1, 2001)
        max_wx = np.max(np.abs(W.evaluate(xi, np.full_like(xi, 0.5))[1]))
        for h in (0.04, 0.01):
            d = thin("plate", h)
            f = make_ansatz(W, d)
            g = QuadratureGrid.build(d, 400, 33, 8, theta_range=f.theta_support)
            u = f(g.t, g.theta, g.z)
            assert np.max(np.abs(u[..., 0])) == pytest.approx(W(0.0, 0.5), rel=1e-3)
            t_max = np.max(np.abs(g.t))
            assert np.max(np.abs(u[..., 1])) == pytest.approx(t_max * max_wx / math.sqrt(h), rel=2e-2)

    def test_support_overflow(self):
        d = thin("plate", 0.01)
        with pytest.raises(DomainError, match="omega"):
            make_ansatz(bump_profile(0.0, 6.0, 0.5, 0.25), d)


class TestRatios:
    def test_rigid_field_reduces_to_gradient_over_field(self):
        d = thin("cylinder", 0.02)
        f = rigid_field([0, 0, 1], [0.0, 0.0, 0.5], d)
        g = QuadratureGrid.build(d, 64, 64)
        r = ratio_report(f, d, 2.0, g)
        assert r.norm_strain < 1e-6 * r.norm_grad
        assert r.interpolation_ratio == pytest.approx(r.norm_grad**2 / r.norm_u**2, rel=1e-5)

    @settings(max_examples=10, deadline=None)
    @given(c=st.sampled_from([-3.0, 0.1, 10.0, 250.0]), p=st.sampled_from([1.5, 2.0, 3.0]))
    def test_zero_homogeneity(self, c, p):
        d = thin("plate", 0.02)
        f = make_ansatz(default_profile(d.surface), d)
        g = default_grid(f, d, 64, 16)
        a, b = ratio_report(f, d, p, g), ratio_report(f.scaled(c), d, p, g)
        assert b.interpolation_ratio == pytest.approx(a.interpolation_ratio, rel=1e-12)
        assert b.second_ratio == pytest.approx(a.second_ratio, rel=1e-12)

    def test_strain_bounded_by_gradient(self, surface):
        d = thin(surface.kind, 0.01)
        r = ratio_report(make_ansatz(default_profile(surface), d), d, 2.0)
        assert r.norm_strain <= r.norm_grad * (1 + 1e-10)
        assert all(math.isfinite(v) for v in (r.norm_u, r.norm_ut, r.norm_grad, r.norm_strain))

    def test_cylinder_band(self):
        d = thin("cylinder", 0.1)
        reps = sharpness_sweep(None, d, 2.0, [0.1, 0.03, 0.01])
        vals = [r.interpolation_ratio for r in reps]
        assert min(vals) > 0 and max(vals) <= 4 * min(vals)

    def test_plate_long_ladder_band(self):
        d = thin("plate", 0.1)
        reps = sharpness_sweep(None, d, 2.0, [0.1, 0.01, 0.001])
        for key in ("interpolation_ratio", "second_ratio"):
            vals = [getattr(r, key) for r in reps]
            assert min(vals) / max(vals) >= 0.25

    def test_sweep_preconditions(self):
        d = thin("cylinder", 0.02)
        assert sharpness_sweep(None, d, 2.0, []) == []
        with pytest.raises(ValueError, match="h=0.3"):
            sharpness_sweep(None, d, 2.0, [0.3, 0.1])
        with pytest.raises(ValueError, match="decreasing"):
            sharpness_sweep(None, d, 2.0, [0.01, 0.02])

    def test_sweep_rows(self):
        d = thin("plate", 0.05)
        reps = sharpness_sweep(None, d, 2.0, [0.05, 0.025])
        rows = sweep_rows(reps)
        assert len(rows) == 2 and len(rows[0]) == len(SWEEP_COLUMNS)
        assert rows[1][0] == 0.025
