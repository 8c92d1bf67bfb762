import numpy as np
import pytest

import shiftrules as sr
from shiftrules.errors import SpectrumError
from shiftrules.measures import AtomicMeasure, FoldingMap


def make_oracle(model, seed):
    return sr.ShotOracle(model, sr.Rng(seed))


class TestShotOracle:
    def test_requires_pm_one_observable(self, cos_instance):
        bad = sr.ModelInstance(
            a=cos_instance.a, b=cos_instance.b, rho=cos_instance.rho, m=np.diag([2.0, -1.0])
        )
        with pytest.raises(SpectrumError):
            sr.ShotOracle(bad, sr.Rng(0))

    def test_certain_outcome_at_maximum(self, cos_instance):
        oracle = make_oracle(cos_instance, 1)
        assert all(oracle.shot(0.0) == 1 for _ in range(50))  # f(0) = 1

    def test_mean_zero_point_binomial_ci(self, cos_instance):
        oracle = make_oracle(cos_instance, 2)
        draws = oracle.draws_at_value(sr.expectation(cos_instance, 0.125), 10**5)
        assert abs(draws.mean()) <= 0.02  # f(1/8) = cos(pi/2) = 0

    def test_deterministic_sequence(self, cos_instance):
        seq1 = [make_oracle(cos_instance, 3).shot(0.2) for _ in range(1)]
        a = make_oracle(cos_instance, 3)
        b = make_oracle(cos_instance, 3)
        assert [a.shot(0.2) for _ in range(20)] == [b.shot(0.2) for _ in range(20)]
        assert seq1[0] in (-1, 1)


class TestObviousEstimate:
    def test_single_atom_degenerate_sampling(self, cos_instance):
        w = 0.7
        m = AtomicMeasure.from_atoms([(0.0, w)])
        oracle = make_oracle(cos_instance, 11)
        rep = sr.obvious_estimate(oracle, m, 0.1, 4000)
        # per-trial values are +-w, mean estimates w*f(0.1)
        assert abs(rep.mean) <= w + 1e-12
        assert abs(rep.mean - w * sr.expectation(cos_instance, 0.1)) <= 5 * w / np.sqrt(4000)
        single = sr.obvious_estimate(make_oracle(cos_instance, 12), m, 0.1, 1)
        assert abs(single.mean) == pytest.approx(w)

    def test_unbiased_against_convolution(self, random_4x4):
        m = sr.nyquist(2.0, 64)
        x = 0.0
        target = m.convolve(lambda t: sr.expectation(random_4x4, t), x)
        rep = sr.obvious_estimate(make_oracle(random_4x4, 21), m, x, 10**6)
        se = np.sqrt((m.norm() ** 2 - target**2) / 10**6)
        assert abs(rep.mean - target) <= 5 * se

    def test_truncation_unbiased_at_symmetric_point(self, cos_instance):
        # f even and atoms antisymmetric: the truncated convolution vanishes at 0
        m = sr.nyquist(2.0, 64)
        assert abs(m.convolve(lambda t: sr.expectation(cos_instance, t), 0.0)) <= 1e-12
        rep = sr.obvious_estimate(make_oracle(cos_instance, 31), m, 0.0, 10**6)
        assert abs(rep.mean) <= 5 * m.norm() / np.sqrt(10**6)

    def test_variance_formula(self, random_4x4):
        m = sr.nyquist(2.0, 64)
        x = 0.3
        target = m.convolve(lambda t: sr.expectation(random_4x4, t), x)
        rep = sr.obvious_estimate(make_oracle(random_4x4, 41), m, x, 10**6)
        theory = m.norm() ** 2 - target**2
        assert abs(rep.empirical_variance - theory) / theory <= 0.02

    def test_per_trial_second_moment_is_norm_squared(self, random_4x4):
        m = sr.nyquist(2.0, 8)
        rep = sr.obvious_estimate(make_oracle(random_4x4, 51), m, 0.2, 5000)
        n = rep.shots
        second_moment = rep.empirical_variance * (n - 1) / n + rep.mean**2
        assert second_moment == pytest.approx(m.norm() ** 2, rel=1e-12)

    def test_seed_determinism(self, random_4x4):
        m = sr.nyquist(2.0, 32)
        a = sr.obvious_estimate(make_oracle(random_4x4, 61), m, 0.4, 10**4)
        b = sr.obvious_estimate(make_oracle(random_4x4, 61), m, 0.4, 10**4)
        assert a == b

    def test_rejects_zero_shots(self, random_4x4):
        with pytest.raises(ValueError):
            sr.obvious_estimate(make_oracle(random_4x4, 1), sr.nyquist(2.0, 4), 0.0, 0)


class TestFoldingEstimate:
    def test_identity_region_coincides_with_obvious(self, random_4x4):
        m = sr.nyquist(2.0, 64)  # largest shift 63.5/4 < 16
        fold = FoldingMap.tau(0.5, 16.0)
        a = sr.obvious_estimate(make_oracle(random_4x4, 71), m, 0.2, 5000)
        b = sr.folding_estimate(make_oracle(random_4x4, 71), m, fold, 0.2, 5000)
        assert a == b

    def test_max_queried_magnitude_below_wrap_edge(self, random_4x4):
        p, c = 0.5, 4.0
        m = sr.nyquist(2.0, 10**4)
        fold = FoldingMap.tau(p, c)
        rep = sr.folding_estimate(make_oracle(random_4x4, 81), m, fold, 0.25, 10**4)
        assert rep.max_mopv < c + p

    def test_mean_queried_magnitude_bound(self, random_4x4):
        p, c, k = 0.5, 4.0, 2.0
        m = sr.nyquist(k, 10**5)
        fold = FoldingMap.tau(p, c)
        for x in (-0.5, 0.1, 0.5):
            rep = sr.folding_estimate(make_oracle(random_4x4, 91), m, fold, x, 10**5)
            bound = abs(x) + (np.log(k * (c + 2 * p)) + 6 + np.log(2)) / (np.pi**2 * k)
            assert rep.mean_mopv <= bound

    def test_unbiased_against_folded_convolution(self, random_4x4):
        p, c = 0.5, 2.0
        m = sr.nyquist(2.0, 128)
        fold = FoldingMap.tau(p, c)
        x = 0.3
        target = m.convolve_folded(fold, lambda t: sr.expectation(random_4x4, t), x)
        rep = sr.folding_estimate(make_oracle(random_4x4, 101), m, fold, x, 10**6)
        se = np.sqrt(max(m.norm() ** 2 - target**2, 1e-12) / 10**6)
        assert abs(rep.mean - target) <= 5 * se
