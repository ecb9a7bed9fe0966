import numpy as np
import pytest

from zpfsim import GaussianMode, arcsine_cdf, ks_critical, ks_test, moments
from zpfsim.stats import empirical_generating, histogram


def normal_samples(n, seed):
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return gen.standard_normal(n)


def arcsine_samples(n, amplitude, seed):
    # independent construction: fixed-amplitude sinusoid with uniform phase
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    return amplitude * np.cos(2 * np.pi * gen.random(n))


class TestMoments:
    def test_two_point(self):
        rep = moments([-1.0, 1.0])
        assert rep.mean == 0.0
        assert rep.variance == pytest.approx(2.0)
        assert rep.count == 2

    def test_gaussian_kurtosis(self):
        rep = moments(normal_samples(1_000_000, 10))
        assert abs(rep.excess_kurtosis) < 0.02  # SE = sqrt(24/n) ~ 0.005

    def test_arcsine_moments(self):
        # E[X^4] = (3/8) A^4 for the arcsine law, so excess kurtosis = -1.5
        rep = moments(arcsine_samples(1_000_000, np.sqrt(2.0), 11))
        assert rep.variance == pytest.approx(1.0, rel=0.01)
        assert rep.excess_kurtosis == pytest.approx(-1.5, abs=0.02)

    def test_permutation_invariant(self):
        # to round-off: reversal changes the summation order
        x = normal_samples(500, 3)
        a = moments(x)
        b = moments(x[::-1])
        assert a.count == b.count
        for field in ("mean", "variance", "skewness", "excess_kurtosis"):
            assert getattr(a, field) == pytest.approx(getattr(b, field),
                                                      rel=1e-12, abs=1e-12)

    def test_scale_equivariant(self):
        x = normal_samples(500, 4)
        assert moments(3.0 * x).variance == pytest.approx(9.0 * moments(x).variance, rel=1e-12)

    def test_standard_errors_positive(self):
        rep = moments(normal_samples(100, 5))
        assert rep.se_mean > 0 and rep.se_variance > 0

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            moments([1.0, np.nan])

    def test_rejects_single_sample(self):
        with pytest.raises(ValueError):
            moments([1.0])


class TestKS:
    def test_critical_constants(self):
        assert ks_critical(0.01, 1) == pytest.approx(1.628, abs=5e-4)
        assert ks_critical(0.05, 1) == pytest.approx(1.358, abs=5e-4)

    def test_null_passes(self):
        res = ks_test(normal_samples(10_000, 21), GaussianMode(1.0).cdf, alpha=0.01)
        assert res.passed
        assert 0.0 <= res.statistic <= 1.0

    def test_arcsine_vs_gaussian_rejected(self):
        # analytic sup-distance between the two cdfs is ~0.097
        x = np.linspace(-2.0, 2.0, 200_001)
        sup = np.max(np.abs(arcsine_cdf(x, np.sqrt(2.0)) - GaussianMode(1.0).cdf(x)))
        assert 0.05 < sup < 0.12
        res = ks_test(arcsine_samples(10_000, np.sqrt(2.0), 22), GaussianMode(1.0).cdf)
        assert not res.passed
        assert res.statistic == pytest.approx(sup, abs=0.02)

    def test_small_sample_rejected(self):
        with pytest.raises(ValueError):
            ks_test(np.arange(5, dtype=float), GaussianMode(1.0).cdf)

    def test_non_monotone_cdf_detected(self):
        with pytest.raises(ValueError, match="monotone"):
            ks_test(np.linspace(0, 6, 100), lambda x: 0.5 + 0.4 * np.sin(x))

    def test_null_calibration(self):
        # rejection rate at alpha = 0.05 over 200 seeded repetitions
        rejections = 0
        for seed in range(200):
            res = ks_test(normal_samples(2000, 1000 + seed), GaussianMode(1.0).cdf,
                          alpha=0.05)
            rejections += not res.passed
        assert 0.01 <= rejections / 200 <= 0.10


class TestHistogram:
    def test_single_sample_single_bin(self):
        edges, dens = histogram([0.5], bins=1, value_range=(0.0, 2.0))
        assert dens[0] == pytest.approx(1.0 / 2.0)

    def test_uniform_density(self):
        gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(31)))
        x = gen.random(200_000)
        edges, dens = histogram(x, bins=20, value_range=(0.0, 1.0))
        # multinomial SE per bin ~ sqrt(p(1-p)/n)/width with p = 1/20
        se = np.sqrt(0.05 * 0.95 / x.size) / 0.05
        assert np.all(np.abs(dens - 1.0) < 5 * se)

    def test_out_of_range_all_zero(self):
        edges, dens = histogram([5.0, 6.0], bins=4, value_range=(0.0, 1.0))
        assert np.all(dens == 0.0)

    def test_mass_conservation(self):
        gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(32)))
        x = gen.normal(size=10_000)
        edges, dens = histogram(x, bins=17, value_range=(-1.0, 2.0))
        in_range = np.mean((x >= -1.0) & (x <= 2.0))
        assert abs(np.sum(dens * np.diff(edges)) - in_range) < 1e-12

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            histogram([1.0], bins=0, value_range=(0, 1))
        with pytest.raises(ValueError):
            histogram([1.0], bins=2, value_range=(1, 1))


class TestEmpiricalGenerating:
    def test_gaussian_cf(self):
        x = normal_samples(200_000, 40)
        s = np.array([0.5, 1.0, 2.0])
        g, se = empirical_generating(x, s)
        expected = np.exp(-(s**2) / 2)
        assert np.all(np.abs(g.real - expected) < 4 * se)
        assert np.all(np.abs(g.imag) < 4 / np.sqrt(x.size))
