import numpy as np
import pytest

import shiftrules as sr

from conftest import PAULI_X, PAULI_Z, central_diff, taylor_expm


def band_mass_outside(model, span=256.0, n=4096, guard_bins=3):
    """Fraction of windowed-periodogram power at frequencies beyond the band
    limit (plus a guard of a few frequency bins for the window's blur)."""
    dx = span / n
    xs = -span / 2 + dx * np.arange(n)
    f = sr.expectation_batch(model, xs)
    power = np.abs(np.fft.fft(f * np.hanning(n))) ** 2
    freq = np.fft.fftfreq(n, d=dx)
    return power[np.abs(freq) > model.k + guard_bins / span].sum() / power.sum()


class TestModelInstance:
    def test_validates_rho(self):
        a, b, m = PAULI_Z, np.zeros((2, 2)), PAULI_X
        with pytest.raises(ValueError, match="positive semidefinite"):
            sr.ModelInstance(a=a, b=b, rho=np.diag([1.5, -0.5]), m=m)
        with pytest.raises(ValueError, match="unit trace"):
            sr.ModelInstance(a=a, b=b, rho=np.diag([0.5, 0.4]), m=m)

    def test_rejects_scalar_a(self):
        with pytest.raises(ValueError, match="scalar multiple"):
            sr.ModelInstance(a=np.eye(2), b=np.zeros((2, 2)), rho=np.eye(2) / 2, m=PAULI_X)

    def test_band_limit_field(self, random_4x4):
        assert abs(random_4x4.k - 2.0) <= 1e-12


class TestExpectation:
    def test_cos_closed_form_on_grid(self, cos_instance):
        xs = np.linspace(-2, 2, 100)
        vals = np.array([sr.expectation(cos_instance, float(x)) for x in xs])
        assert np.max(np.abs(vals - np.cos(4 * np.pi * xs))) <= 1e-12

    def test_x_zero_is_conjugation_by_exp_b(self, random_4x4):
        m = random_4x4
        u0 = taylor_expm(2j * np.pi * m.b)  # independent oracle
        oracle = np.trace(m.m @ u0 @ m.rho @ u0.conj().T).real
        assert abs(sr.expectation(m, 0.0) - oracle) <= 1e-10

    def test_maximally_mixed_identity_observable(self):
        dim = 3
        a = np.diag([1.0, 0.0, -1.0])
        b = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) * 0.3
        inst = sr.ModelInstance(a=a, b=b, rho=np.eye(dim) / dim, m=np.eye(dim))
        for x in np.linspace(-3, 3, 7):
            assert abs(sr.expectation(inst, float(x)) - 1.0) <= 1e-12

    def test_bounded_by_observable_norm(self, random_4x4):
        xs = np.linspace(-20, 20, 400)
        assert np.max(np.abs(sr.expectation_batch(random_4x4, xs))) <= 1.0 + 1e-10

    def test_batch_matches_scalar(self, random_4x4):
        xs = np.linspace(-3, 3, 41)
        batch = sr.expectation_batch(random_4x4, xs)
        scalar = np.array([sr.expectation(random_4x4, float(x)) for x in xs])
        assert np.max(np.abs(batch - scalar)) <= 1e-13


class TestDerivative:
    def test_cos_closed_form(self, cos_instance):
        for x in (-0.6, 0.0, 0.21):
            assert abs(sr.derivative(cos_instance, x) - (-4 * np.pi * np.sin(4 * np.pi * x))) <= 1e-10

    def test_zero_at_even_critical_point(self, cos_instance):
        assert abs(sr.derivative(cos_instance, 0.0)) <= 1e-10

    def test_random_instance_matches_fd(self, random_4x4):
        fd = central_diff(lambda t: sr.expectation(random_4x4, t), 0.37)
        assert abs(sr.derivative(random_4x4, 0.37) - fd) <= 1e-6

    def test_fd_agreement_over_100_points(self):
        rng = sr.Rng(404)
        for child in rng.split(4):
            inst = sr.random_instance(4, child)
            for x in child.generator.uniform(-3, 3, size=25):
                fd = central_diff(lambda t: sr.expectation(inst, t), float(x))
                assert abs(sr.derivative(inst, float(x)) - fd) <= 1e-6

    def test_batch_matches_scalar(self, random_4x4):
        xs = np.linspace(-2, 2, 31)
        batch = sr.derivative_batch(random_4x4, xs)
        scalar = np.array([sr.derivative(random_4x4, float(x)) for x in xs])
        assert np.max(np.abs(batch - scalar)) <= 1e-12


class TestGamma:
    def test_pauli_pair(self):
        inst = sr.ModelInstance(a=PAULI_Z, b=PAULI_X, rho=np.diag([1.0, 0.0]), m=PAULI_X)
        res = sr.gamma(inst)
        assert res.exact and abs(res.value - 1.0) <= 1e-12

    def test_commuting_nondegenerate_is_zero(self):
        inst = sr.ModelInstance(
            a=PAULI_Z, b=np.diag([0.4, -0.1]), rho=np.diag([1.0, 0.0]), m=PAULI_X
        )
        res = sr.gamma(inst)
        assert res.exact and res.value <= 1e-12

    def test_tensor_pair_is_one(self):
        a = np.kron(PAULI_Z, np.eye(2))
        b = np.kron(PAULI_X, PAULI_X)
        rho = np.zeros((4, 4)); rho[0, 0] = 1.0
        inst = sr.ModelInstance(a=a, b=b, rho=rho, m=np.kron(PAULI_X, np.eye(2)))
        res = sr.gamma(inst)
        assert not res.exact  # degenerate spectrum: reported as a lower bound
        assert abs(res.value - 1.0) <= 1e-9


class TestDecompose:
    def test_commuting_nondegenerate_leaves_no_remainder(self):
        inst = sr.ModelInstance(
            a=PAULI_Z, b=np.diag([0.4, -0.1]), rho=np.diag([0.3, 0.7]), m=PAULI_X
        )
        dec = sr.decompose(inst)
        xs = np.linspace(-5, 5, 101)
        assert np.max(np.abs(dec.f0(xs))) <= 1e-9

    def test_remainder_decays(self, random_4x4):
        dec = sr.decompose(random_4x4)
        probes = {}
        for mag in (10.0, 20.0, 40.0, 80.0):
            grid = mag + np.linspace(0, 1, 16)
            xs = np.concatenate([grid, -grid])
            probes[mag] = np.max(np.abs(xs * dec.f0(xs)))
        assert probes[80.0] <= 1.5 * max(probes[10.0], probes[20.0], probes[40.0])

    def test_unitary_distance_bounded_by_gamma(self, random_4x4):
        dec = sr.decompose(random_4x4)
        bound = 2 * np.pi * dec.gamma
        for x in np.linspace(-10, 10, 50):
            u = sr.exp_i_hermitian(x * random_4x4.a + random_4x4.b, 2 * np.pi)
            dist = np.linalg.norm(u - dec.u_tilde(float(x)), ord=2)
            assert dist <= bound + 1e-9

    def test_f1_is_three_frequency_trig_polynomial(self, random_4x4):
        dec = sr.decompose(random_4x4)
        freqs = dec.frequencies()
        assert np.max(np.abs(freqs - np.array([-2.0, 0.0, 2.0]))) <= 1e-9
        xs = np.linspace(0, 1, 64, endpoint=False)
        design = np.column_stack([
            np.ones_like(xs),
            np.cos(4 * np.pi * xs), np.sin(4 * np.pi * xs),
        ])
        vals = dec.f1(xs)
        coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
        assert np.max(np.abs(design @ coef - vals)) <= 1e-8

    def test_f1_plus_f0_is_f(self, random_4x4):
        dec = sr.decompose(random_4x4)
        xs = np.linspace(-4, 4, 33)
        total = dec.f1(xs) + dec.f0(xs)
        assert np.max(np.abs(total - sr.expectation_batch(random_4x4, xs))) <= 1e-12

    def test_decay_constant_probe(self, random_4x4):
        dec = sr.decompose(random_4x4)
        const = dec.decay_constant(2.0)
        assert const > 0
        # the probed max should dominate |x*f0(x)| at other points of the region
        xs = sr.Rng(6).generator.uniform(2.0, 62.0, size=500)
        assert np.max(np.abs(xs * dec.f0(xs))) <= 1.05 * const


class TestBandLimit:
    def test_periodogram_mass_confined(self, random_4x4):
        assert band_mass_outside(random_4x4) <= 1e-6

    def test_periodogram_mass_confined_dim8(self):
        inst = sr.random_instance(8, sr.Rng(777))
        assert band_mass_outside(inst) <= 1e-6
