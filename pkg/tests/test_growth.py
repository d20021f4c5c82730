import math

import numpy as np
import pytest

from orliczhp.growth import (
    BracketingError,
    ComposedInverse,
    GrowthDomainError,
    LogGrid,
    Power,
    PowerLog,
    ReciprocalReflected,
    Tabulated,
    classify,
    conjugate,
    derived_pair,
    estimate_indices,
    nabla2_via_scaling,
    nominal_upper_type,
)

E = math.e


class TestEval:
    def test_power_monomial(self):
        assert Power(2)(3.0) == 9.0

    def test_zero_everywhere(self):
        for phi in (Power(2), PowerLog(2, 1, E), derived_pair(Power(2), Power(4))[0],
                    derived_pair(Power(2), Power(4))[1],
                    Tabulated((0.0, 1.0, 2.0), (0.0, 1.0, 4.0))):
            assert phi(0.0) == 0.0

    def test_powerlog_value(self):
        # direct formula t^2 ln(e + t) at t = 1
        assert PowerLog(2, 1, E)(1.0) == pytest.approx(math.log(E + 1.0), rel=1e-14)

    def test_vectorized_eval(self):
        t = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(Power(3)(t), t ** 3)

    def test_negative_argument_rejected(self):
        with pytest.raises(GrowthDomainError):
            Power(2)(-1.0)

    def test_tabulated_interpolation_and_span(self):
        tab = Tabulated((0.0, 1.0, 2.0), (0.0, 2.0, 8.0))
        assert tab(0.5) == pytest.approx(1.0)
        with pytest.raises(GrowthDomainError):
            tab(3.0)

    def test_invalid_constructions(self):
        with pytest.raises(ValueError):
            Power(-1)
        with pytest.raises(ValueError):
            PowerLog(0.5, 1, E)
        with pytest.raises(ValueError):
            PowerLog(2, 1, 0.9)
        with pytest.raises(ValueError):
            Tabulated((0.5, 1.0), (0.0, 1.0))


class TestInverse:
    def test_power_closed_form(self):
        assert Power(2).inverse(9.0) == pytest.approx(3.0, rel=1e-14)

    def test_inverse_at_zero(self):
        assert Power(2).inverse(0.0) == 0.0
        assert PowerLog(2, 1, E).inverse(0.0) == 0.0

    def test_powerlog_round_trip_of_eval_example(self):
        y = math.log(E + 1.0)
        assert PowerLog(2, 1, E).inverse(y, tol=1e-12) == pytest.approx(1.0, rel=1e-9)

    def test_round_trip_property(self):
        grid = np.geomspace(1e-5, 1e5, 41)
        functions = [
            Power(1.5),
            Power(3, scale=0.25),
            PowerLog(2, 1, E),
            ComposedInverse(outer=Power(4), inner=Power(2)),
            ReciprocalReflected(base=Power(2)),
        ]
        for phi in functions:
            y = np.asarray(phi(grid))
            t = phi.inverse(y, tol=1e-12)
            np.testing.assert_allclose(np.asarray(phi(t)), y, rtol=1e-9)

    def test_bracketing_failure_reported(self):
        tab = Tabulated((0.0, 1.0), (0.0, 1.0))
        with pytest.raises(BracketingError):
            tab.inverse(5.0)


class TestConjugate:
    def test_quadratic_self_dual(self):
        # classical pair: phi(t) = t^2/2 has conjugate s^2/2.
        # oracle: dense-grid supremum of s*t - t^2/2
        phi = Power(2, scale=0.5)
        for s in (0.5, 2.0, 7.0):
            ts = np.linspace(0, 4 * s, 400001)
            oracle = float(np.max(s * ts - 0.5 * ts ** 2))
            assert conjugate(phi, s) == pytest.approx(oracle, rel=1e-8)
            assert conjugate(phi, s) == pytest.approx(s * s / 2, rel=1e-8)

    def test_identity_small_slope(self):
        assert conjugate(Power(1), 0.5) == 0.0

    def test_identity_unbounded(self):
        assert conjugate(Power(1), 2.0) == math.inf

    def test_biconjugation_recovers_power(self):
        # Legendre biconjugation: conjugating the numeric conjugate comes
        # back to the original within 1% at interior grid points
        for p in (2.0, 3.0):
            phi = Power(p, scale=1.0 / p)
            q = p / (p - 1.0)
            ss = np.geomspace(1e-3, 1e3, 121)
            first = np.array([conjugate(phi, float(s)) for s in ss])
            np.testing.assert_allclose(first, ss ** q / q, rtol=1e-6)
            dual_tab = Tabulated((0.0, *ss), (0.0, *first))
            # keep the scan inside the tabulated span, past every maximizer
            inner_grid = LogGrid(1e-3, 9.9e2, 700)
            for t in np.geomspace(0.1, 10.0, 9):
                bidual = conjugate(dual_tab, float(t), inner_grid)
                assert bidual == pytest.approx(phi(float(t)), rel=1e-2)

    def test_convexity_scan_rejects_concave(self):
        with pytest.raises(ValueError):
            conjugate(Power(0.5), 1.0)


class TestIndices:
    def test_power_exponent_recovered(self):
        lo, hi = estimate_indices(Power(3))
        assert lo == pytest.approx(3.0, abs=1e-6)
        assert hi == pytest.approx(3.0, abs=1e-6)

    def test_identity(self):
        lo, hi = estimate_indices(Power(1))
        assert lo == pytest.approx(1.0, abs=1e-6)
        assert hi == pytest.approx(1.0, abs=1e-6)

    def test_powerlog_range(self):
        # symbolic ratio 2 + t/((e+t) ln(e+t)) scanned on the same grid
        grid = LogGrid(1e-3, 1e3, 512)
        ts = grid.values()
        sym = 2.0 + ts / ((E + ts) * np.log(E + ts))
        lo, hi = estimate_indices(PowerLog(2, 1, E), grid)
        assert lo == pytest.approx(float(np.min(sym)), rel=1e-6)
        assert hi == pytest.approx(float(np.max(sym)), rel=1e-6)
        assert 2.0 < lo < hi < 3.0
        assert lo < 2.01


class TestClassify:
    def test_power2_doubling_and_dini(self):
        cls = classify(Power(2))
        assert cls.doubling.passed and cls.doubling.constant == pytest.approx(4.0)
        # oracle: int_0^t s^2/s^2 ds = t, and t / (phi(t)/t) = 1 for phi = t^2
        assert cls.dini.passed
        assert cls.dini.constant == pytest.approx(1.0, rel=1e-6)

    def test_identity_dini_diverges(self):
        assert not classify(Power(1)).dini.passed

    def test_power3_submultiplicative_constants_one(self):
        cls = classify(Power(3))
        for verdict in cls.tilde_conditions.values():
            assert verdict.passed
            assert verdict.constant == pytest.approx(1.0, rel=1e-9)

    def test_index_order_invariant(self):
        for phi in (Power(1.5), Power(2), PowerLog(2, 1, E)):
            cls = classify(phi)
            assert cls.lower_index <= cls.upper_index + 1e-12

    def test_dini_pass_implies_lower_index_above_one(self):
        for phi in (Power(1.5), Power(2), Power(4), PowerLog(2, 1, E)):
            cls = classify(phi)
            if cls.nabla2_passed:
                assert cls.lower_index > 1.0

    def test_dini_verdict_matches_scaling_criterion(self):
        # the two characterizations must agree at the verdict level
        for p in (1.0, 1.5, 2.0, 4.0):
            dini = classify(Power(p)).dini.passed
            scaling = nabla2_via_scaling(Power(p)).passed
            assert dini == scaling, f"p={p}: dini {dini} vs scaling {scaling}"

    def test_upper_type_witness_finite(self):
        for phi in (Power(2), Power(4), PowerLog(2, 1, E)):
            cls = classify(phi)
            assert math.isfinite(cls.upper_type_constant)

    def test_powerlog_is_tilde_member(self):
        cls = classify(PowerLog(2, 1, E ** 2))
        assert cls.tilde_passed


class TestDerivedPair:
    def test_power_pair_composition(self):
        comp, refl = derived_pair(Power(2), Power(4))
        assert comp(3.0) == pytest.approx(9.0, rel=1e-12)
        assert refl(3.0) == pytest.approx(9.0, rel=1e-12)

    def test_powerlog_composition_value(self):
        comp, _ = derived_pair(Power(2), PowerLog(2, 1, E ** 2))
        # phi2(phi1^{-1}(t)) = t * ln(e^2 + sqrt(t)); at t = 1 this is ln(e^2 + 1)
        assert comp(1.0) == pytest.approx(math.log(E ** 2 + 1.0), rel=1e-12)

    def test_reflected_upper_type_inequality(self):
        # phi3(s t) <= s^q phi3(t) for s >= 1 with q the upper type of phi2
        comp, refl = derived_pair(Power(2), Power(4))
        q = nominal_upper_type(Power(4))
        s = np.geomspace(1.0, 1e4, 33)
        t = np.geomspace(1e-4, 1e4, 33)
        lhs = np.asarray(refl(s[:, None] * t[None, :]))
        rhs = s[:, None] ** q * np.asarray(refl(t))[None, :]
        assert np.all(lhs <= rhs * (1 + 1e-9))

    def test_reflected_upper_type_inequality_powerlog(self):
        # the composition inherits the upper type of the outer function,
        # so the scaling exponent here is the outer one
        comp, refl = derived_pair(Power(2), PowerLog(2, 1, E ** 2))
        q = nominal_upper_type(PowerLog(2, 1, E ** 2))
        s = np.geomspace(1.0, 1e3, 25)
        t = np.geomspace(1e-3, 1e3, 25)
        lhs = np.asarray(refl(s[:, None] * t[None, :]))
        rhs = s[:, None] ** q * np.asarray(refl(t))[None, :]
        assert np.all(lhs <= rhs * (1 + 1e-9))
