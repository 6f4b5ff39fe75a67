import math
import warnings

import numpy as np
import pytest
from sklearn.base import clone

from kornlab.ansatz import default_profile, make_ansatz, ratio_report
from kornlab.exceptions import DegenerateFieldError, EvaluationError, ValidationError
from kornlab.korn_constants import (
    FieldSpace,
    Korn2ConstantEstimator,
    NestedBoxPair,
    PowerLawRegressor,
    default_family,
    extension_check,
    fit_scaling,
    interpolation_constant,
    korn2_constant_p2,
    subdivision_run,
)
from kornlab.shellfield import ShellField, random_bump_field, rigid_field

from conftest import thin


def constant_field(vec):
    vec = np.asarray(vec, float)
    return ShellField(lambda t, th, z: np.broadcast_to(vec, np.shape(t) + (3,)).copy(), name="const")


def plate_center(d):
    return d.surface.position(0.5, 0.5)


class TestFieldSpace:
    def test_dimension(self):
        d = thin("plate", 0.05)
        sp = FieldSpace(d, 10, 4, 1)
        assert sp.dimension == 3 * 11 * 5 * 2 and not sp.restricted

    def test_constants_give_zero(self):
        d = thin("plate", 0.05)
        sp = FieldSpace(d, 10, 4, 1).restrict([constant_field(e) for e in np.eye(3)])
        assert sp.dimension == 3
        assert korn2_constant_p2(d, sp) == 0.0

    def test_single_vector_equals_rayleigh(self, rng):
        d = thin("cylinder", 0.05)
        full = FieldSpace(d, 12, 4, 1)
        f = random_bump_field(d, rng)
        v = full.interpolate(f)
        one = full.restrict([v])
        assert korn2_constant_p2(d, one) == pytest.approx(full.rayleigh(v), rel=1e-10)

    @pytest.mark.parametrize("kind", ["plate", "cylinder", "sphere_cap", "catenoid"])
    def test_rigid_span_contains_rigid_fields(self, kind):
        d = thin(kind, 0.02)
        sp = FieldSpace(d, 8, 4, 1)
        c = d.surface.position(0.5 * d.surface.omega, 0.5 * float(d.surface.z_lower(0.0) + d.surface.z_upper(0.0)))
        rigid = [rigid_field(a, c, d) for a in np.eye(3)] + [constant_field(e) for e in np.eye(3)]
        sub = sp.restrict(rigid[:3])
        for f in rigid[:3]:
            assert sub.projection_residual(f) <= 1e-8

    def test_rigid_restricted_between_members_and_full(self):
        d = thin("plate", 0.05)
        sp = FieldSpace(d, 20, 4, 1)
        fields = [rigid_field(a, plate_center(d), d) for a in np.eye(3)]
        C_sub = korn2_constant_p2(d, sp.restrict(fields))
        members = max(sp.rayleigh(sp.interpolate(f)) for f in fields)
        assert members <= C_sub * (1 + 1e-10)
        assert C_sub <= korn2_constant_p2(d, sp) * (1 + 1e-10)

    def test_small_unrestricted_space_rejected(self):
        d = thin("plate", 0.05)
        with pytest.raises(ValidationError, match="200"):
            korn2_constant_p2(d, FieldSpace(d, 4, 2, 1))

    def test_space_on_other_domain(self):
        d, other = thin("plate", 0.05), thin("plate", 0.05)
        with pytest.raises(ValueError, match="different domain"):
            korn2_constant_p2(d, FieldSpace(other))

    def test_restrict_all_zero(self):
        d = thin("plate", 0.05)
        with pytest.raises(DegenerateFieldError):
            FieldSpace(d, 8, 4, 1).restrict([np.zeros(3 * 9 * 5 * 2)])


@pytest.fixture(scope="module")
def ladder():
    return [(h, korn2_constant_p2(thin("plate", h))) for h in (0.1, 0.05, 0.025)]


class TestKorn2:
    def test_positive_and_monotone(self, ladder):
        C = [c for _, c in ladder]
        assert all(c > 1 for c in C)
        assert C[0] < C[1] < C[2]

    def test_dominates_family(self):
        d = thin("plate", 0.05)
        sp = FieldSpace(d)
        C = korn2_constant_p2(d, sp)
        for f in default_family(d, np.random.default_rng(3)):
            assert sp.rayleigh(sp.interpolate(f)) <= C * (1 + 1e-9)

    def test_estimator(self):
        d = thin("plate", 0.05)
        est = Korn2ConstantEstimator().fit(d)
        assert est.constant_ == pytest.approx(korn2_constant_p2(d), rel=1e-12)
        assert est.dimension_ == 3 * 61 * 5 * 2 and est.h_ == 0.05
        assert clone(est).get_params() == {"n_theta": 60, "n_z": 4, "n_t": 1}


class TestScalingFit:
    def test_exact_power_law(self):
        fit = fit_scaling([(h, 5 / h) for h in (0.1, 0.05, 0.025, 0.0125)])
        assert fit.c == pytest.approx(5, rel=1e-12)
        assert fit.alpha == pytest.approx(1, rel=1e-12)
        assert fit.residual <= 1e-12

    def test_constant(self):
        fit = fit_scaling([(h, 2.0) for h in (0.1, 0.05, 0.02)])
        assert fit.alpha == pytest.approx(0, abs=1e-12)
        np.testing.assert_allclose(fit.predict([0.3, 0.001]), 2.0)

    def test_noisy(self, rng):
        hs = np.geomspace(0.1, 0.005, 8)
        fit = fit_scaling([(h, 3 / h * math.exp(rng.normal(0, 0.05))) for h in hs])
        assert 0.9 <= fit.alpha <= 1.1

    def test_nonpositive_names_sample(self):
        with pytest.raises(ValueError, match="sample 1.*h = 0.05"):
            fit_scaling([(0.1, 1.0), (0.05, 0.0), (0.02, 2.0)])

    def test_too_few(self):
        with pytest.raises(ValueError, match="at least 3"):
            fit_scaling([(0.1, 1.0), (0.05, 2.0)])
        with pytest.raises(ValueError, match="at least 3"):
            fit_scaling([])

    def test_duplicate_h(self):
        with pytest.raises(ValueError, match="distinct"):
            fit_scaling([(0.1, 1.0), (0.1, 2.0), (0.02, 2.0)])

    def test_regressor(self):
        h = np.array([0.2, 0.1, 0.05])
        reg = PowerLawRegressor().fit(h.reshape(-1, 1), 7 * h**-1.5)
        assert reg.alpha_ == pytest.approx(1.5) and reg.c_ == pytest.approx(7)
        np.testing.assert_allclose(reg.predict([[0.01]]), 7 * 0.01**-1.5, rtol=1e-10)
        assert reg.score(h.reshape(-1, 1), 7 * h**-1.5) == pytest.approx(1.0)


class TestInterpolationConstant:
    def test_rigid_only(self):
        d = thin("plate", 0.05)
        fam = [rigid_field(a, plate_center(d), d) for a in np.eye(3)]
        C = interpolation_constant(d, 2.0, fam)
        expected = max(ratio_report(f, d, 2.0).interpolation_ratio for f in fam)
        assert C == pytest.approx(expected, rel=1e-12)

    def test_empty_family(self):
        with pytest.raises(ValueError, match="empty"):
            interpolation_constant(thin("plate", 0.05), 2.0, [])

    def test_all_degenerate(self):
        zero = constant_field([0, 0, 0])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            with pytest.raises(DegenerateFieldError):
                interpolation_constant(thin("plate", 0.05), 2.0, [zero, zero])

    def test_degenerate_member_skipped(self):
        d = thin("plate", 0.05)
        good = rigid_field([0, 0, 1], plate_center(d), d)
        with pytest.warns(UserWarning, match="skipping"):
            C = interpolation_constant(d, 2.0, [constant_field([0, 0, 0]), good])
        assert C == pytest.approx(interpolation_constant(d, 2.0, [good]))

    def test_ansatz_ladder_bounded(self):
        vals = []
        for h in (0.1, 0.05, 0.025):
            d = thin("plate", h)
            vals.append(interpolation_constant(d, 2.0, [make_ansatz(default_profile(d.surface), d)]))
        assert all(math.isfinite(v) and v > 0 for v in vals)
        assert max(vals) <= 4 * min(vals)


class TestExtension:
    PAIR = NestedBoxPair(((0.25, 0.75), (0.25, 0.75), (0.25, 0.75)), ((0, 1), (0, 1), (0, 1)))

    def test_rigid_witness(self):
        A = np.array([[0, -1, 2], [1, 0, -3], [-2, 3, 0]], float)
        lhs, rhs = extension_check(self.PAIR, lambda x: x @ A.T, 2.0, lambda x: np.broadcast_to(A, x.shape + (3,)))
        assert lhs / rhs == pytest.approx(math.sqrt(self.PAIR.volume_ratio), rel=1e-12)

    def test_outer_only_field(self):
        # supported where the inner box has no mass: rhs is its strain alone
        def U(x):
            r = np.clip(x[:, 0] - 0.8, 0, None) ** 3
            return np.stack([r, 0 * r, 0 * r], axis=-1)

        lhs, rhs = extension_check(self.PAIR, U, 2.0)
        assert lhs > 0 and lhs <= rhs * (1 + 1e-6)

    def test_scale_invariance(self):
        def U(x):
            return np.stack([np.sin(3 * x[:, 1]), x[:, 0] * x[:, 2], np.cos(x[:, 0])], axis=-1)

        lhs, rhs = extension_check(self.PAIR, U, 3.0)
        lam = 2.0
        lhs2, rhs2 = extension_check(self.PAIR.scaled(lam), lambda x: U(x / lam), 3.0)
        assert lhs2 / rhs2 == pytest.approx(lhs / rhs, rel=1e-6)

    def test_2d(self):
        pair = NestedBoxPair(((0.4, 0.6), (0.4, 0.6)), ((0, 1), (0, 1)))
        lhs, rhs = extension_check(pair, lambda x: np.stack([-x[:, 1], x[:, 0]], axis=-1), 2.0)
        assert lhs / rhs == pytest.approx(5.0, rel=1e-8)

    def test_non_finite(self):
        with pytest.raises(EvaluationError, match="not finite"):
            with np.errstate(invalid="ignore"):
                extension_check(self.PAIR, lambda x: np.log(x - 0.5), 2.0)

    def test_bad_boxes(self):
        with pytest.raises(ValueError, match="not inside"):
            NestedBoxPair(((0, 2), (0, 1)), ((0, 1), (0, 1)))


class TestSubdivision:
    def test_rigid(self):
        d = thin("plate", 0.05)
        rep = subdivision_run(d, rigid_field([0, 0, 1], plate_center(d), d), 2.0)
        assert rep.pieces == 21
        assert rep.additivity_error <= 1e-12
        # the plate has thickness h on each side, so the inner shell is the whole
        # piece and a strain-free field gives exactly 1
        assert rep.aggregate_constant == pytest.approx(1.0, abs=1e-9)
        assert rep.max_piece_constant == pytest.approx(1.0, abs=1e-9)

    def test_ansatz_additivity(self):
        d = thin("plate", 0.05)
        rep = subdivision_run(d, make_ansatz(default_profile(d.surface), d), 2.0)
        assert rep.additivity_error <= 1e-10
        assert rep.aggregate_lhs == pytest.approx(rep.direct_grad, rel=1e-10)

    def test_bump_band(self):
        d = thin("cylinder", 0.05, "tilted")
        rep = subdivision_run(d, random_bump_field(d, np.random.default_rng(1)), 2.5)
        assert rep.aggregate_constant <= 2
        assert rep.max_piece_constant <= 2

    def test_bad_cells(self):
        d = thin("plate", 0.05)
        with pytest.raises(Exception, match="cells_per_piece"):
            subdivision_run(d, rigid_field([0, 0, 1], plate_center(d), d), 2.0, cells_per_piece=0)
