import math

import numpy as np
import pytest

from orliczhp.corpus import random_step_1d
from orliczhp.growth import Power, PowerLog, classify
from orliczhp.integrals import beta
from orliczhp.maximal import StepFunction1D, nontangential_maximal
from orliczhp.measure import AtomicMeasure, CarlesonBox, WeightedVolume
from orliczhp.spaces import (
    BergmanKernel,
    HardyKernel,
    IndicatorScaled,
    bergman_norm,
    hardy_norm,
    luxembourg,
    luxembourg_step_line,
    modular_halfplane,
    pointwise_bound_check,
    step_modular_line,
)

E = math.e


class TestModular:
    def test_step_indicator(self):
        f = StepFunction1D(np.array([-8.0, 0.0, 1.0, 8.0]), np.array([0.0, 1.0, 0.0]))
        assert step_modular_line(f, Power(2)) == pytest.approx(1.0)

    def test_scaled_box_indicator(self):
        ind = IndicatorScaled(2.0, CarlesonBox(0.5, 1.0))
        got = modular_halfplane(ind, Power(1), WeightedVolume(0.0))
        assert got == pytest.approx(2.0, rel=1e-12)

    def test_atomic_modular(self):
        hk = HardyKernel(1j, Power(2))
        mu = AtomicMeasure((0.0,), (1.0,), (3.0,))
        got = modular_halfplane(hk, Power(2), mu)
        assert got == pytest.approx(3.0 * (hk.amplitude / 4.0) ** 2, rel=1e-12)


class TestLuxembourg:
    def test_power_matches_lp_norm(self):
        f = StepFunction1D(np.array([-8.0, 0.0, 1.0, 8.0]), np.array([0.0, 1.0, 0.0]))
        assert luxembourg_step_line(f, Power(2)) == pytest.approx(1.0, rel=1e-9)

    def test_lp_scaling(self):
        f = StepFunction1D(np.array([-8.0, 0.0, 4.0, 8.0]), np.array([0.0, 2.0, 0.0]))
        assert luxembourg_step_line(f, Power(1)) == pytest.approx(8.0, rel=1e-9)

    def test_zero_function(self):
        z = StepFunction1D(np.array([-8.0, 8.0]), np.array([0.0]))
        assert luxembourg_step_line(z, Power(2)) == 0.0

    def test_bisection_agrees_with_fast_path(self):
        rng = np.random.default_rng(21)
        for _ in range(5):
            f = random_step_1d(rng)
            slow = luxembourg_step_line(f, Power(3), tol=1e-12)
            fast = luxembourg_step_line(f, Power(3), fast_power=True)
            assert slow == pytest.approx(fast, rel=1e-9)

    def test_powerlog_round_trip(self):
        # the norm leaves the modular at one by construction
        phi = PowerLog(2, 1, E)
        f = StepFunction1D(np.array([-8.0, 0.0, 2.0, 8.0]), np.array([0.0, 3.0, 0.0]))
        lam = luxembourg_step_line(f, phi, tol=1e-12)
        assert step_modular_line(f, phi, scale=lam) == pytest.approx(1.0, abs=1e-10)

    def test_homogeneity(self):
        rng = np.random.default_rng(22)
        for phi in (Power(1), Power(2), PowerLog(2, 1, E)):
            f = random_step_1d(rng)
            base = luxembourg_step_line(f, phi, tol=1e-13)
            for c in (0.5, 2.0, 10.0):
                scaled = luxembourg_step_line(f.scaled(c), phi, tol=1e-13)
                assert scaled == pytest.approx(c * base, rel=1e-9)

    def test_norm_modular_consistency(self):
        # modular <= C max(lux, lux^q) and lux <= C max(modular, modular^(1/q))
        rng = np.random.default_rng(23)
        for phi, q in ((Power(2), 2.0), (PowerLog(2, 1, E), classify(PowerLog(2, 1, E)).upper_type_estimate)):
            worst = 0.0
            for _ in range(10):
                f = random_step_1d(rng)
                if not np.any(f.values):
                    continue
                mod = step_modular_line(f, phi)
                lux = luxembourg_step_line(f, phi, tol=1e-12)
                worst = max(worst, mod / max(lux, lux ** q))
                worst = max(worst, lux / max(mod, mod ** (1.0 / q)))
            assert worst <= 10.0


class TestKernelBounds:
    def test_hardy_kernel_magnitude_at_base(self):
        hk = HardyKernel(1j, Power(2))
        assert float(hk.abs_value(0.0, 1.0)) == pytest.approx(hk.amplitude / 4.0)

    @pytest.mark.parametrize("z0", [0.5j, 1j, 1 + 2j])
    def test_hardy_kernel_line_bound(self, z0):
        hn = hardy_norm(HardyKernel(z0, Power(2)), Power(2))
        assert hn.modular_sup <= math.pi + 1e-3

    def test_hardy_kernel_line_closed_form(self):
        # for phi = t^2 the line modular at height v is (pi/2) y0^3/(y0+v)^3
        hk = HardyKernel(1j, Power(2))
        hn = hardy_norm(hk, Power(2))
        want = (math.pi / 2) / (1 + min(hn.heights)) ** 3
        assert hn.modular_sup == pytest.approx(want, rel=1e-6)

    def test_simple_pole_profile(self):
        # f(w) = 1/(w + i): line integral of |f|^2 at height v is pi/(1+v)
        f = lambda x, y: (x ** 2 + (np.asarray(y) + 1.0) ** 2) ** -0.5
        hn = hardy_norm(f, Power(2))
        assert hn.modular_sup == pytest.approx(math.pi / (1 + min(hn.heights)), rel=1e-6)

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    def test_bergman_kernel_bound(self, alpha):
        bound = beta(0.5, (3 + 2 * alpha) / 2) * beta(1 + alpha, 2 + alpha)
        for z0 in (0.5j, 1j, 1 + 2j):
            bn = bergman_norm(BergmanKernel(z0, Power(2), alpha), Power(2), alpha)
            assert bn.modular <= bound + 1e-3

    def test_bergman_bound_alpha0_value(self):
        # bound B(1/2,3/2) B(1,2) = pi/4
        bound = beta(0.5, 1.5) * beta(1, 2)
        assert bound == pytest.approx(math.pi / 4, rel=1e-13)

    def test_zero_function_norms(self):
        zero = lambda x, y: np.zeros(np.broadcast(x, y).shape)
        assert hardy_norm(zero, Power(2)).modular_sup == 0.0
        assert bergman_norm(zero, Power(2), 0.0).luxembourg == 0.0


class TestNontangentialEquivalence:
    def test_hardy_kernels_bracket(self):
        # Luxembourg Hardy norm vs line Luxembourg norm of the
        # nontangential maximal function, over the kernel family
        phi = Power(2)
        edges = np.linspace(-64.0, 64.0, 2049)
        centers = 0.5 * (edges[:-1] + edges[1:])
        ratios = []
        for z0 in (0.5j, 1j, 2j, 1 + 1j):
            f = HardyKernel(z0, phi)
            lhs = hardy_norm(f, phi).luxembourg_sup
            star = nontangential_maximal(f.abs_value, centers)
            rhs = luxembourg_step_line(StepFunction1D(edges, star), phi, fast_power=True)
            ratios.append(lhs / rhs)
        c = max(max(ratios), 1.0 / min(ratios))
        assert c <= 10.0
        # the maximal function dominates every horizontal slice
        assert all(r <= 1.0 + 1e-6 for r in ratios)


class TestPointwiseBound:
    def test_bergman_kernel_probes(self):
        phi = Power(2)
        f = BergmanKernel(1j, phi, 0.0)
        lux = bergman_norm(f, phi, 0.0).luxembourg
        rep = pointwise_bound_check(
            f.abs_value, phi, 0.0, [(0.0, 0.1), (0.0, 1.0), (0.0, 10.0)], lux
        )
        assert all(math.isfinite(r) for r in rep.ratios)
        assert rep.max_ratio > 0

    def test_zero_function_vacuous(self):
        zero = lambda x, y: np.zeros(np.broadcast(x, y).shape)
        rep = pointwise_bound_check(zero, Power(2), 0.0, [(0.0, 1.0)], lux_norm=1.0)
        assert rep.max_ratio == 0.0

    def test_requires_positive_norm(self):
        zero = lambda x, y: np.zeros(np.broadcast(x, y).shape)
        with pytest.raises(ValueError):
            pointwise_bound_check(zero, Power(2), 0.0, [(0.0, 1.0)], lux_norm=0.0)
