import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from cellmgf import fading
from cellmgf.fading import eta_mu, kappa_mu, nakagami, rayleigh, rice, shadowed_kappa_mu
from cellmgf.interference import (LaplaceEvaluator, NetworkConfig, coefficient_lattice,
                                  coefficient_numeric, interference_coefficient, laplace_em,
                                  laplace_km, laplace_nak, laplace_numeric, laplace_skm,
                                  radial_average, radial_factor)


def net(alpha, lam=1e-4, noise=0.0):
    return NetworkConfig(lam, alpha, 1.0, noise)


class TestExamples:
    # frozen from 30-digit quadrature of the defining integral with an
    # independently coded gain MGF
    def test_skm_point(self):
        assert_allclose(laplace_skm(shadowed_kappa_mu(1, 2, 1, 2), net(3), 1.0, 10.0),
                        0.948213763708986272, rtol=1e-12)

    def test_km_point(self):
        assert_allclose(laplace_km(kappa_mu(1, 1.5, 2), net(3), 2.0, 20.0),
                        0.671452078598922935, rtol=1e-12)

    def test_em_point(self):
        assert_allclose(laplace_em(eta_mu(1, 0.5, 1), net(4), 1.0, 15.0),
                        0.943962852821948150, rtol=1e-12)

    def test_rayleigh_point(self):
        assert_allclose(laplace_nak(1, 1, net(4), 1.0, 10.0), 0.975627904156740204, rtol=1e-13)

    @pytest.mark.parametrize("fn,model", [
        (laplace_skm, shadowed_kappa_mu(1, 2, 1, 2)), (laplace_km, kappa_mu(1, 1.5, 2)),
        (laplace_em, eta_mu(1, 0.5, 1)), (laplace_numeric, rice(2.0))])
    def test_zero_argument(self, fn, model):
        assert fn(model, net(3.5), 0.0, 12.0) == 1.0

    def test_nakagami_zero_argument(self):
        assert laplace_nak(2.5, 1.0, net(3), 0.0, 5.0) == 1.0

    def test_skm_unit_shapes_without_los_is_rayleigh(self):
        a = laplace_skm(shadowed_kappa_mu(1, 0, 1, 1), net(3), 1.3, 30.0)
        assert_allclose(a, laplace_nak(1, 1, net(3), 1.3, 30.0), rtol=1e-12)

    def test_km_tiny_kappa_is_rayleigh(self):
        a = laplace_km(kappa_mu(1, 1e-6, 1), net(3), 2.0, 20.0)
        assert abs(a - laplace_nak(1, 1, net(3), 2.0, 20.0)) < 1e-4

    def test_em_unit_eta_is_nakagami_two(self):
        # eta = 1 balances both components: Nakagami with m = 2 mu
        a = laplace_em(eta_mu(1, 1.0, 1), net(4), 1.0, 15.0)
        assert_allclose(a, laplace_nak(2, 1, net(4), 1.0, 15.0), rtol=1e-12)

    def test_em_one_sided_limit_is_rayleigh(self):
        # eta -> 0 leaves a single component: Nakagami-mu, Rayleigh for mu = 1
        a = laplace_em(eta_mu(1, 1e-9, 1), net(4), 1.0, 15.0)
        assert abs(a - laplace_nak(1, 1, net(4), 1.0, 15.0)) < 1e-8

    def test_nakagami_large_m_is_deterministic_gain(self):
        # m -> infinity: 1 - M(s) -> 1 - exp(-s omega)
        d = 2.0 / 3.0
        v, _ = integrate.quad(lambda x: x ** (-d - 1) * -math.expm1(-x), 0, 1,
                              epsabs=0, epsrel=1e-12, limit=200)
        ref = math.exp(-math.pi * 1e-4 * 100.0 * d * v)
        assert abs(laplace_nak(1e6, 1.0, net(3), 1.0, 10.0) - ref) < 1e-6

    def test_coefficient_is_gauss_minus_one(self):
        from scipy import special
        m, om, alpha, xi = 2.5, 1.5, 3.5, 0.8
        ref = special.hyp2f1(-2 / alpha, m, 1 - 2 / alpha, -om * xi / m) - 1
        assert_allclose(interference_coefficient(nakagami(m, om), alpha, xi), ref, rtol=1e-13)


CLOSED = [
    (laplace_skm, shadowed_kappa_mu(1, 2, 1, 2)),
    (laplace_skm, shadowed_kappa_mu(1.5, 4, 3, 1)),
    (laplace_skm, shadowed_kappa_mu(0.5, 0.7, 2, 2)),
    (laplace_km, kappa_mu(1, 1.5, 2)),
    (laplace_km, rice(6.0)),
    (laplace_em, eta_mu(1, 0.5, 1)),
    (laplace_em, eta_mu(2, 3.0, 2)),
]


class TestClosedVersusQuadrature:
    @pytest.mark.parametrize("fn,model", CLOSED, ids=lambda v: str(v) if not callable(v) else v.__name__)
    @pytest.mark.parametrize("alpha,xi,r", [(2.5, 0.3, 30.0), (3.0, 2.0, 20.0), (4.0, 15.0, 60.0)])
    def test_agreement(self, fn, model, alpha, xi, r):
        assert_allclose(fn(model, net(alpha), xi, r), laplace_numeric(model, net(alpha), xi, r),
                        rtol=1e-8)

    @pytest.mark.parametrize("m", [0.6, 1.0, 2.5, 7.0])
    @pytest.mark.parametrize("alpha,xi", [(2.7, 0.5), (4.0, 40.0)])
    def test_nakagami_agreement(self, m, alpha, xi):
        a = laplace_nak(m, 1.2, net(alpha), xi, 25.0)
        assert_allclose(a, laplace_numeric(nakagami(m, 1.2), net(alpha), xi, 25.0), rtol=1e-8)

    @pytest.mark.parametrize("model", [shadowed_kappa_mu(1, 2, 1.5, 2.5), eta_mu(1, 0.4, 1.5)], ids=str)
    def test_non_integer_shapes_use_quadrature(self, model):
        ev = LaplaceEvaluator(model, net(3))
        assert_allclose(ev.coefficient(2.0), coefficient_numeric(model, 3.0, 2.0), rtol=1e-14)
        with pytest.raises(ValueError):
            (laplace_skm if isinstance(model, fading.ShadowedKappaMuParams) else laplace_em)(
                model, net(3), 1.0, 10.0)


class TestProperties:
    @settings(max_examples=40, deadline=None)
    @given(eta=st.floats(0.05, 20.0), mu=st.integers(1, 3), alpha=st.floats(2.2, 5.0),
           xi=st.floats(1e-3, 50.0), r=st.floats(1.0, 100.0))
    def test_eta_mu_substitution(self, eta, mu, alpha, xi, r):
        e = min(eta, 1 / eta)
        skm = shadowed_kappa_mu(1.0, (1 - e) / (2 * e), 2 * mu, mu)
        assert_allclose(laplace_em(eta_mu(1.0, eta, mu), net(alpha), xi, r),
                        laplace_skm(skm, net(alpha), xi, r), rtol=1e-8)

    @settings(max_examples=40, deadline=None)
    @given(kappa=st.floats(0.0, 10.0), mu=st.integers(1, 4), m=st.integers(1, 4),
           alpha=st.floats(2.2, 5.0), xi=st.floats(1e-3, 50.0), dx=st.floats(1e-3, 10.0))
    def test_bounded_and_monotone_in_xi(self, kappa, mu, m, alpha, xi, dx):
        p = shadowed_kappa_mu(1.0, kappa, mu, m)
        a = laplace_skm(p, net(alpha), xi, 40.0)
        b = laplace_skm(p, net(alpha), xi + dx, 40.0)
        assert 0 < b <= a <= 1

    @settings(max_examples=40, deadline=None)
    @given(m=st.floats(0.3, 10.0), alpha=st.floats(2.2, 5.0), da=st.floats(0.05, 2.0),
           xi=st.floats(1e-2, 50.0))
    def test_monotone_in_alpha(self, m, alpha, da, xi):
        a = laplace_nak(m, 1.0, net(alpha), xi, 30.0)
        b = laplace_nak(m, 1.0, net(alpha + da), xi, 30.0)
        assert b >= a

    @pytest.mark.parametrize("model", [shadowed_kappa_mu(1, 3, 2, 1), kappa_mu(1, 2, 2),
                                       eta_mu(1, 0.3, 2), nakagami(1.5, 1)], ids=str)
    @pytest.mark.parametrize("xi", [0.01, 1.0, 30.0])
    def test_coefficient_consistency(self, model, xi):
        ev = LaplaceEvaluator(model, net(3.5))
        c = ev.coefficient(xi)
        assert c >= 0
        r = 1.0
        assert_allclose(math.exp(-math.pi * 1e-4 * r * r * c), ev(xi, r), rtol=1e-10)
        assert_allclose(-math.log(ev(xi, 25.0)) / (math.pi * 1e-4 * 625.0), c, rtol=1e-10)

    def test_evaluator_methods(self):
        p = kappa_mu(1, 1.5, 2)
        a = LaplaceEvaluator(p, net(3), "closed_form")(2.0, 20.0)
        b = LaplaceEvaluator(p, net(3), "numeric_oracle")(2.0, 20.0)
        assert_allclose(a, b, rtol=1e-8)
        with pytest.raises(ValueError):
            LaplaceEvaluator(p, net(3), "series")


class TestRadialAverage:
    def test_constant(self):
        assert_allclose(radial_average(lambda r: 3.0 * np.ones_like(r), 1e-4), 3.0, rtol=1e-14)

    @pytest.mark.parametrize("A", [0.0, 0.3, 2.0, 10.0])
    def test_exponential_closed_form(self, A):
        lam = 2e-3
        g = lambda r: np.exp(-math.pi * lam * r * r * A)
        assert_allclose(radial_average(g, lam), 1 / (1 + A), rtol=1e-13)

    def test_rayleigh_noise_point(self):
        # 25-digit quadrature of the same expectation, alpha = 4
        lam, N, xi = 1e-4, 1e-8, 1.0
        A = interference_coefficient(rayleigh(), 4.0, xi)
        g = lambda r: np.exp(-xi * r ** 4 * N - math.pi * lam * r * r * A)
        assert_allclose(radial_average(g, lam, nodes=128), 0.52975284634112311137, rtol=1e-8)

    def test_radial_factor_matches_average(self):
        lam, N, alpha = 1e-3, 1e-6, 3.3
        model = kappa_mu(1, 1.5, 2)
        for xi in (0.05, 1.0, 20.0):
            A = interference_coefficient(model, alpha, xi)
            f = lambda r: math.exp(-xi * r ** alpha * N - math.pi * lam * r * r * A)
            ref, _ = integrate.quad(lambda r: f(r) * 2 * math.pi * lam * r * math.exp(-math.pi * lam * r * r),
                                    0, np.inf, epsabs=0, epsrel=1e-12, limit=200)
            assert_allclose(radial_factor(A, xi, N, lam, alpha), ref, rtol=1e-9)

    def test_radial_factor_no_noise(self):
        A = np.array([0.0, 0.5, 3.0])
        assert_allclose(radial_factor(A, np.ones(3), 0.0, 1e-4, 4.0), 1 / (1 + A), rtol=1e-15)

    def test_rejects_bad_density(self):
        with pytest.raises(ValueError):
            radial_average(lambda r: r, 0.0)


class TestLattice:
    @pytest.mark.parametrize("model", [shadowed_kappa_mu(1, 2, 1.5, 2), kappa_mu(1, 1.5, 2),
                                       nakagami(0.7, 2.0)], ids=str)
    def test_real_lattice(self, model):
        h = 1 / 16
        A = coefficient_lattice(model, 3.0, -4.0, h, 129)
        for j in (0, 40, 64, 128):
            xi = math.exp(-4.0 + j * h)
            assert_allclose(A[j].real, coefficient_numeric(model, 3.0, xi), rtol=1e-9)

    @pytest.mark.parametrize("phi", [-1.2, 0.4])
    def test_complex_lattice(self, phi):
        model = kappa_mu(1, 1.5, 2)
        d = 2.0 / 3.0
        A = coefficient_lattice(model, 3.0, 0.0, 0.25, 5, phi)
        z = cmath.exp(1j * phi)
        for j in (0, 4):
            zz = z * math.exp(j * 0.25)
            g = lambda x, part: part(x ** (-d - 1) * complex(fading.one_minus_gain_mgf(model, zz * x)))
            re, _ = integrate.quad(g, 0, 1, args=(np.real,), epsabs=0, epsrel=1e-12, limit=200)
            im, _ = integrate.quad(g, 0, 1, args=(np.imag,), epsabs=0, epsrel=1e-12, limit=200)
            assert abs(A[j] - d * (re + 1j * im)) < 1e-9 * abs(A[j])

    def test_rejects_wide_angle(self):
        with pytest.raises(ValueError):
            coefficient_lattice(rayleigh(), 3.0, 0.0, 0.1, 4, 1.6)


class TestErrors:
    @pytest.mark.parametrize("kw", [dict(lambda_bs=0.0, alpha=3.0), dict(lambda_bs=1e-4, alpha=2.0),
                                    dict(lambda_bs=1e-4, alpha=3.0, power=0.0),
                                    dict(lambda_bs=1e-4, alpha=3.0, noise=-1.0)])
    def test_network_invariants(self, kw):
        with pytest.raises(ValueError):
            NetworkConfig(**kw)

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            laplace_nak(1, 1, net(3), -1.0, 10.0)
        with pytest.raises(ValueError):
            laplace_numeric(rayleigh(), net(3), 1.0, 0.0)
