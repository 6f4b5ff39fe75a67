import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kornlab.exceptions import DegenerateFieldError, QuadratureError, ValidationError
from kornlab.harmonic2d import (
    MappedGrid2D,
    VectorField2D,
    check_lemma41,
    check_lemma42,
    check_lemma43,
    check_lemma44,
    conjugate_field,
    distance_to_boundary,
    harmonic_family,
    make_domain2d,
    optimal_shift,
    random_harmonic,
    solve_harmonic,
    strip_chain,
)


@pytest.fixture(params=["constant", "wavy"])
def d2(request):
    return make_domain2d(1.0, 0.01, request.param)


class TestDomain:
    def test_wavy_bounds(self):
        d = make_domain2d(1.0, 0.02, "wavy")
        y = np.linspace(0, 1, 1001)
        for phi in (d.phi1, d.phi2):
            assert np.min(phi(y)) >= 0.02 * (1 - 1e-12)
            assert np.max(phi(y)) <= 2 * 0.02 * (1 + 1e-12)

    def test_thickness_precondition(self):
        with pytest.raises(ValidationError, match="b/8"):
            make_domain2d(1.0, 0.2)

    def test_unknown_shape(self):
        with pytest.raises(ValidationError):
            make_domain2d(1.0, 0.01, "zigzag")


class TestSolve:
    def test_linear_data_exact(self, d2):
        sol = solve_harmonic(d2, lambda x, y: x)
        np.testing.assert_allclose(sol.w, sol.grid.X, atol=1e-10)

    def test_affine_data_exact(self, d2):
        sol = solve_harmonic(d2, lambda x, y: 3 * x - 2 * y + 1)
        np.testing.assert_allclose(sol.w, 3 * sol.grid.X - 2 * sol.grid.Y + 1, atol=1e-10)

    def test_quadratic_harmonic_converges(self, d2):
        errs = []
        for res in [(8, 64), (16, 128)]:
            sol = solve_harmonic(d2, lambda x, y: x**2 - y**2, res)
            errs.append(np.max(np.abs(sol.w - (sol.grid.X**2 - sol.grid.Y**2))))
        assert errs[1] <= 1e-8 or errs[1] <= errs[0] / 3

    def test_random_data_against_exact_harmonic(self, d2, rng):
        data = random_harmonic(rng)
        errs = []
        for res in [(16, 128), (32, 256)]:
            sol = solve_harmonic(d2, data, res)
            assert sol.residual <= 1e-10
            errs.append(np.max(np.abs(sol.w - data(sol.grid.X, sol.grid.Y))))
        assert errs[1] < errs[0] / 3

    def test_boundary_values_exact(self, d2, rng):
        data = random_harmonic(rng)
        sol = solve_harmonic(d2, data)
        m = sol.grid.boundary_mask()
        assert np.all(sol.w[m] == data(sol.grid.X[m], sol.grid.Y[m]))

    def test_resolution_precondition(self, d2):
        with pytest.raises(ValueError):
            solve_harmonic(d2, lambda x, y: x, (4, 256))
        with pytest.raises(ValueError):
            solve_harmonic(d2, lambda x, y: x, (16, 32))


class TestOptimalShift:
    def test_constant(self):
        r = optimal_shift(np.full(10, 2.5), 3.0)
        assert r.a == 2.5 and r.residual == 0

    def test_p2_weighted_mean(self, rng):
        f, w = rng.normal(size=50), rng.uniform(0.1, 1, 50)
        assert optimal_shift(f, 2.0, w).a == pytest.approx(np.sum(w * f) / np.sum(w), rel=1e-14)

    def test_p4_on_rectangle_is_midheight(self):
        g = MappedGrid2D(make_domain2d(1.0, 0.01), 8, 64)
        assert optimal_shift(g.Y, 4.0, g.weights).a == pytest.approx(0.5, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(
        values=st.lists(st.floats(-100, 100), min_size=2, max_size=30),
        p=st.floats(1.1, 6),
    )
    def test_is_minimizer(self, values, p):
        f = np.array(values)
        r = optimal_shift(f, p)
        obj = lambda a: float(np.sum(np.abs(f - a) ** p)) ** (1 / p)  # noqa: E731
        span = max(np.ptp(f), 1e-9)
        for da in (1e-3 * span, -1e-3 * span):
            assert r.residual <= obj(r.a + da) * (1 + 1e-9)

    def test_subdomain_residual_smaller(self, rng):
        g = MappedGrid2D(make_domain2d(1.0, 0.01, "wavy"), 8, 64)
        f = np.sin(3 * g.Y) + g.X
        full = optimal_shift(f, 3.0, g.weights)
        sub = g.Y < 0.4
        sub_res = optimal_shift(f[sub], 3.0, g.weights[sub]).residual
        with_full_shift = float(np.sum(g.weights[sub] * np.abs(f[sub] - full.a) ** 3)) ** (1 / 3)
        assert sub_res <= with_full_shift <= full.residual


class TestLemmaChecks:
    def test_lemma41_kernel_cases(self, d2):
        c = check_lemma41(solve_harmonic(d2, lambda x, y: x), 2.0)
        assert c.lhs == 0
        c = check_lemma41(solve_harmonic(d2, lambda x, y: y), 2.0)
        assert c.lhs == 0 and c.rhs_factor == 0 and c.exact_kernel and c.ratio == 0.0

    def test_lemma42_trivial_cases(self, d2):
        assert check_lemma42(solve_harmonic(d2, lambda x, y: 2.0 + 0 * x), 2.0) == pytest.approx(0.0, abs=1e-20)
        assert check_lemma42(solve_harmonic(d2, lambda x, y: x), 2.0) == pytest.approx(0.0, abs=1e-20)
        with pytest.raises(DegenerateFieldError):
            check_lemma42(solve_harmonic(d2, lambda x, y: 0 * x), 2.0)

    def test_lemma41_random_stable_as_h_halves(self):
        ratios = []
        for h in (0.02, 0.01):
            d = make_domain2d(1.0, h, "wavy")
            ratios.append(check_lemma41(solve_harmonic(d, random_harmonic(np.random.default_rng(4))), 2.0).ratio)
        assert max(ratios) <= 2 * min(ratios)

    def test_lemma42_cos_family_uniform(self):
        vals = []
        for h in (0.01, 0.005, 0.002, 0.001):
            d = make_domain2d(1.0, h)
            vals.append(check_lemma42(solve_harmonic(d, harmonic_family()[0][1]), 2.0))
        assert max(vals) <= 2 * min(vals)

    def test_lemma43(self, d2):
        assert check_lemma43(solve_harmonic(d2, lambda x, y: 1.0 + 0 * x), 2.0) == pytest.approx(0.0, abs=1e-20)
        data = random_harmonic(np.random.default_rng(2))
        coarse = check_lemma43(solve_harmonic(d2, data, (16, 256)), 2.0)
        fine = check_lemma43(solve_harmonic(d2, data, (32, 512)), 2.0)
        assert abs(fine - coarse) <= 0.05 * fine

    def test_lemma43_linear_data_finite(self):
        d = make_domain2d(1.0, 0.1, "wavy")
        a = check_lemma43(solve_harmonic(d, lambda x, y: x + 0.2, (16, 128)), 2.0)
        b = check_lemma43(solve_harmonic(d, lambda x, y: x + 0.2, (32, 256)), 2.0)
        assert math.isfinite(a) and abs(a - b) <= 0.05 * b

    def test_distance_function(self):
        d = make_domain2d(1.0, 0.01)
        rho = distance_to_boundary(d, np.array([0.0, 0.0, 0.005]), np.array([0.5, 0.001, 0.5]))
        np.testing.assert_allclose(rho, [0.01, 0.001, 0.005], atol=1e-12)

    def test_distance_wavy_against_dense_sampling(self):
        d = make_domain2d(1.0, 0.05, "wavy")
        x, y = np.array([0.01, -0.02]), np.array([0.3, 0.7])
        Y = np.linspace(0, 1, 200001)
        dense = [
            min(np.min(np.hypot(xi - d.phi2(Y), yi - Y)), np.min(np.hypot(xi + d.phi1(Y), yi - Y)), yi, 1 - yi)
            for xi, yi in zip(x, y)
        ]
        np.testing.assert_allclose(distance_to_boundary(d, x, y), dense, atol=1e-8)


class TestConjugateField:
    def test_linear(self, d2):
        W = conjugate_field(solve_harmonic(d2, lambda x, y: x))
        np.testing.assert_allclose(W.v, W.grid.Y, atol=1e-12)
        E = W.strain()
        np.testing.assert_allclose(E, np.broadcast_to(np.eye(2), E.shape), atol=1e-9)

    def test_xy(self, d2):
        sol = solve_harmonic(d2, lambda x, y: x * y)
        W = conjugate_field(sol)
        g = W.grid
        # the wavy map adds truncation error on top of the discrete solve
        np.testing.assert_allclose(W.v, (g.Y**2 - g.X**2) / 2, atol=1e-7)
        E = W.strain()
        assert np.max(np.abs(E[..., 0, 1])) < 1e-6
        np.testing.assert_allclose(E[..., 0, 0], g.Y, atol=1e-6)
        np.testing.assert_allclose(E[..., 1, 1], g.Y, atol=1e-6)

    def test_constant(self, d2):
        W = conjugate_field(solve_harmonic(d2, lambda x, y: 4.0 + 0 * x))
        assert np.max(np.abs(W.v)) < 1e-11 and np.max(np.abs(W.strain())) < 1e-10

    def test_identity_converges(self, d2, rng):
        data = random_harmonic(rng)
        errs = []
        for res in [(16, 256), (32, 512)]:
            E = conjugate_field(solve_harmonic(d2, data, res)).strain()
            errs.append(max(np.max(np.abs(E[..., 0, 1])), np.max(np.abs(E[..., 0, 0] - E[..., 1, 1]))))
        assert errs[0] <= 1e-3 and errs[1] <= errs[0] / 3


class TestStripChain:
    def test_rigid(self, d2):
        g = MappedGrid2D(d2, 16, 256)
        ch = strip_chain(VectorField2D(g, 0.3 * g.Y + 1, -0.3 * g.X + 2), d2, 3.0)
        assert len(ch.strips) == 100
        np.testing.assert_allclose(ch.a, 0.3, atol=1e-10)
        assert ch.deviation < 1e-10 and ch.strain_total < 1e-10 and ch.chain_ratio == 0.0

    def test_symmetric_gradient(self, d2):
        g = MappedGrid2D(d2, 16, 256)
        ch = strip_chain(VectorField2D(g, 2 * g.X, 2 * g.Y), d2, 1.5)
        assert np.max(np.abs(ch.a)) < 1e-10

    def test_conjugate_of_linear(self, d2):
        W = conjugate_field(solve_harmonic(d2, lambda x, y: x))
        ch = strip_chain(W, d2, 2.0)
        assert ch.strain_total > 0 and math.isfinite(ch.deviation)
        assert np.all(np.isfinite(np.diff(ch.a)))

    def test_single_strip(self):
        d = make_domain2d(1.0, 0.1)
        g = MappedGrid2D(d, 8, 64)
        ch = strip_chain(VectorField2D(g, g.Y, -g.X), make_domain2d(1.0, 0.1), 2.0)
        # N = floor(1/h) + 1 endpoints give N - 1 overlapping strips
        assert len(ch.strips) == 10
        # N < 3 needs a domain thicker than the constructor allows
        thick = type(d)(b=1.0, h=0.6, phi1=d.phi1, phi2=d.phi2)
        assert strip_chain(VectorField2D(g, g.Y, -g.X), thick, 2.0).strips == [(0.0, 1.0)]


class TestLemma44:
    def test_constant(self):
        lhs, rhs = check_lemma44(lambda t: 3.0, lambda t: 0.0, 0.0, 2.0, 0.25, 2.5)
        assert lhs == pytest.approx(0.75 * 2 * 3**2.5, rel=1e-9)
        assert lhs <= (2 + 0.25) * 2 * 3**2.5 <= rhs * (1 + 1e-12)

    def test_closed_form(self):
        lhs, rhs = check_lemma44(lambda t: t, lambda t: 1.0, 0.0, 1.0, 0.5, 2.0)
        assert lhs == pytest.approx(7 / 24, rel=1e-12)
        assert rhs == pytest.approx(37 / 24, rel=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        coeffs=st.lists(st.floats(-3, 3), min_size=3, max_size=7),
        lam=st.floats(0.05, 0.95),
        p=st.floats(1.1, 5.0),
        a=st.floats(-2, 2),
        length=st.floats(0.2, 4),
    )
    def test_property_sweep(self, coeffs, lam, p, a, length):
        c = np.array(coeffs)
        k = np.arange(len(c))
        f = lambda t: float(np.sum(c * np.cos(k * t + k)))  # noqa: E731
        fp = lambda t: float(np.sum(-c * k * np.sin(k * t + k)))  # noqa: E731
        lhs, rhs = check_lemma44(f, fp, a, a + length, lam, p)
        assert lhs <= rhs * (1 + 1e-7)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            check_lemma44(lambda t: t, lambda t: 1.0, 1.0, 0.0, 0.5, 2.0)
        with pytest.raises(ValueError):
            check_lemma44(lambda t: t, lambda t: 1.0, 0.0, 1.0, 1.5, 2.0)
        with pytest.raises(ValueError, match="p must lie"):
            check_lemma44(lambda t: t, lambda t: 1.0, 0.0, 1.0, 0.5, 1.0)

    def test_quadrature_failure_reports_interval(self):
        with pytest.raises(QuadratureError, match=r"\["):
            check_lemma44(lambda t: abs(t - 0.3) ** -0.99, lambda t: 0.0, 0.0, 1.0, 0.5, 2.0)


def test_family_is_harmonic():
    # the discrete Laplacian of each member's exact values is at truncation level
    for name, F in harmonic_family():
        x, y = 0.01, 0.4
        s = 1e-3
        lap = (F(x + s, y) + F(x - s, y) + F(x, y + s) + F(x, y - s) - 4 * F(x, y)) / s**2
        assert abs(lap) < 1e-3, name
