import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import integrate, special

from cellmgf.hyperfun import (ConvergenceError, SeriesControl, appell_f1, appell_f2, bessel_i,
                              bessel_j1, binom, gauss_2f1, gaussian_q, humbert_psi1,
                              humbert_psi2, hyp1f1_ladder, kummer_1f1, tricomi_u)

mp.mp.dps = 30


def rel(got, ref):
    ref = complex(ref)
    return abs(complex(got) - ref) / max(abs(ref), 1e-300)


def mp_psi1(a, b, c, cp, x, y):
    # y-series of 2F1 terms, summed at 30 digits
    return mp.nsum(lambda n: mp.rf(a, n) * mp.mpf(y) ** n / (mp.rf(cp, n) * mp.factorial(n))
                   * mp.hyp2f1(a + n, b, c, x), [0, mp.inf])


def mp_psi2(a, c, cp, x, y):
    return mp.nsum(lambda n: mp.rf(a, n) * mp.mpf(y) ** n / (mp.rf(cp, n) * mp.factorial(n))
                   * mp.hyp1f1(a + n, c, x), [0, mp.inf])


class TestSeriesControl:
    def test_defaults(self):
        c = SeriesControl()
        assert (c.max_terms, c.abs_tol, c.rel_tol) == (10_000, 1e-12, 1e-10)

    @pytest.mark.parametrize("kw", [dict(max_terms=0), dict(abs_tol=0.0), dict(rel_tol=-1.0)])
    def test_rejects_bad_policy(self, kw):
        with pytest.raises(ValueError):
            SeriesControl(**kw)

    def test_exhausted_terms_raise(self):
        with pytest.raises(ConvergenceError):
            kummer_1f1(50, 1.5, 30.0, SeriesControl(max_terms=3))


class TestExamples:
    def test_gauss_trivial(self):
        assert_allclose(gauss_2f1(1, 3, 3, 0.5).value, 2.0, rtol=1e-10)
        assert gauss_2f1(-0.5, 2, 1.5, 0).value == 1.0

    def test_gauss_euler_integral_value(self):
        # frozen from the Euler integral / mpmath at 40 digits
        assert_allclose(gauss_2f1(-2 / 3, 1, 1 / 3, -4.0).value, 6.180736695318642792, rtol=1e-10)

    def test_kummer(self):
        assert_allclose(kummer_1f1(2, 2, 1).value, math.e, rtol=1e-14)
        assert kummer_1f1(3.5, 1.5, 0).value == 1.0
        assert_allclose(kummer_1f1(3.5, 1.5, -2.0).value, -0.081201169941967615, rtol=1e-11)

    def test_psi1(self):
        assert_allclose(humbert_psi1(1, 1, 2, 1.5, 0.5, 0).value, 2 * math.log(2), rtol=1e-12)
        assert_allclose(humbert_psi1(1.5, 2, 2, 1.5, 0, 0.4).value, math.exp(0.4), rtol=1e-12)
        assert_allclose(humbert_psi1(1.5, 2, 2, 1.5, -3.0, 0.4).value, 0.13814636475945595,
                        rtol=1e-10)

    def test_psi2(self):
        assert_allclose(humbert_psi2(2, 2, 1, 1, 0).value, math.e, rtol=1e-12)
        assert_allclose(humbert_psi2(2, 2, 1, 0, 0.7).value, float(mp.hyp1f1(2, 1, 0.7)),
                        rtol=1e-12)
        assert_allclose(humbert_psi2(2.5, 2, 1.5, -4.0, 3.0).value, 0.11102325923551144,
                        rtol=1e-9)

    def test_f1(self):
        assert_allclose(appell_f1(0.5, 2, 3, 1.5, 0.3, 0).value,
                        float(mp.hyp2f1(0.5, 2, 1.5, 0.3)), rtol=1e-12)
        assert appell_f1(0.5, 2, 3, 1.5, 0, 0).value == 1.0
        assert_allclose(appell_f1(1 / 3, 1, 2, 4 / 3, -0.8, -0.4).value, 0.75182257715938714,
                        rtol=1e-10)

    def test_f2(self):
        assert_allclose(appell_f2(2, 1, 1, 3, 2, 0.2, 0).value, float(mp.hyp2f1(2, 1, 3, 0.2)),
                        rtol=1e-12)
        assert_allclose(appell_f2(2.5, 1.5, 1, 2, 1.5, 0.3, 0.4).value, 7.4580836564731212,
                        rtol=1e-9)

    def test_f2_equal_shape_reduction(self):
        # m = mu = 2, kappa = 1, Omega = 1, xi = 3
        m = mu = 2
        kappa, omega, xi = 1.0, 1.0, 3.0
        got = appell_f2(mu + 1, m, 1, 2, mu, mu * kappa / (mu * kappa + m),
                        -xi * omega / (mu * (1 + kappa))).value
        ref = (kappa + 1) ** (m + 1) / (omega * xi) * (1 - (1 + xi * omega / m) ** (-m))
        assert_allclose(got, ref, rtol=1e-8)

    def test_tricomi(self):
        assert_allclose(tricomi_u(1, 2, 5.0).value, 0.2, rtol=1e-12)
        assert_allclose(tricomi_u(1, 1, 1e4).value * 1e4, 1.0, rtol=1e-3)
        assert_allclose(tricomi_u(1.5, 0.5, 2.0).value, 0.15110326938313497, rtol=1e-10)

    def test_bessel(self):
        assert_allclose(bessel_i(0.5, 1).value, math.sqrt(2 / math.pi) * math.sinh(1), rtol=1e-13)
        assert bessel_j1(0).value == 0
        assert_allclose(bessel_i(0, 1).value, 1.2660658777520083, rtol=1e-14)

    def test_gaussian_q(self):
        assert gaussian_q(0) == 0.5
        assert gaussian_q(math.inf) == 0
        assert_allclose(gaussian_q(1), 0.15865525393145705, rtol=1e-14)

    def test_binom(self):
        assert binom(4, 2) == 6
        assert binom(7, 0) == 1
        assert binom(10, 3) == 120
        with pytest.raises(ValueError):
            binom(2, 3)


class TestAgainstMpmath:
    @pytest.mark.parametrize("a,b,c,z", [
        (-2 / 3, 1, 1 / 3, -4.0), (-0.5, 2.3, 0.5, -1e6), (0.3, 1.7, 2.5, 0.85),
        (-0.5, 2.3, 0.5, -40 + 30j), (2.0, 0.5, 1.5, -0.5 + 0.5j), (-1 / 3, 3, 2 / 3, -1e3 - 2e3j),
    ])
    def test_gauss(self, a, b, c, z):
        assert rel(gauss_2f1(a, b, c, z).value, mp.hyp2f1(a, b, c, z)) < 1e-10

    @pytest.mark.parametrize("a,c,z", [
        (3.5, 1.5, -2.0), (120, 2, -1.0), (2.5, 2, -30.0), (2.5, 2, 80.0), (1.5, 2, -3 + 4j),
        (3, 2, -100 + 50j), (0.3, 1.5, -200.0), (40.5, 1.5, -25.0), (23, 2, -9.5 - 84.6j),
    ])
    def test_kummer(self, a, c, z):
        assert rel(kummer_1f1(a, c, z).value, mp.hyp1f1(a, c, z)) < 1e-9

    @pytest.mark.parametrize("a,b,c,cp,x,y", [
        (1.5, 2, 2, 1.5, -3.0, 0.4), (3, 2, 2, 1, -50.0, 0.6), (2, 1, 2, 2, -2 + 3j, 0.3),
        (1.5, 2, 2, 1.5, 0.7, -0.5),
    ])
    def test_psi1(self, a, b, c, cp, x, y):
        assert rel(humbert_psi1(a, b, c, cp, x, y).value, mp_psi1(a, b, c, cp, x, y)) < 1e-9

    @pytest.mark.parametrize("a,c,cp,x,y", [
        (2.5, 2, 1.5, -4.0, 3.0), (1, 2, 1, -10.0, 0.5), (3, 2, 3, -1 - 2j, 0.8),
    ])
    def test_psi2(self, a, c, cp, x, y):
        assert rel(humbert_psi2(a, c, cp, x, y).value, mp_psi2(a, c, cp, x, y)) < 1e-9

    @pytest.mark.parametrize("args", [
        (1 / 3, 1, 2, 4 / 3, -0.8, -0.4), (0.5, 1.5, 2, 1.5, -50.0, -300.0),
        (2 / 3, 2, 1, 5 / 3, -5.0, 0.5), (1.0, 0.5, 0.5, 2.0, 0.3, 0.2),
    ])
    def test_f1(self, args):
        a, b, bp, c, x, y = args
        if max(abs(x), abs(y)) < 1:
            ref = mp.appellf1(*args)
        else:  # Euler integral at 30 digits
            ref = mp.gamma(c) / (mp.gamma(a) * mp.gamma(c - a)) * mp.quad(
                lambda t: t ** (a - 1) * (1 - t) ** (c - a - 1) * (1 - x * t) ** (-b)
                * (1 - y * t) ** (-bp), [0, 1e-4, 1e-2, 1])
        assert rel(appell_f1(*args).value, ref) < 1e-8

    @pytest.mark.parametrize("args", [(2.5, 1.5, 1, 2, 1.5, 0.3, 0.4), (3, 2, 1, 2, 2, 0.2, 0.5),
                                      (1.5, 1, 2, 2, 3, 0.1, 0.6)])
    def test_f2(self, args):
        assert rel(appell_f2(*args).value, mp.appellf2(*args)) < 1e-8

    @pytest.mark.parametrize("a,b,z", [(1.5, 0.5, 2.0), (3.3, 0.5, 1000.0), (2.2, 1, 3.0),
                                       (60.5, 0.5, 3.0), (2, 0.5, 0.01), (0.7, 2, 4.0)])
    def test_tricomi(self, a, b, z):
        assert rel(tricomi_u(a, b, z).value, mp.hyperu(a, b, z)) < 1e-8

    @pytest.mark.parametrize("nu,z", [(0, 1), (2.5, 300), (1, 0.01), (3.5, 45.0), (0.5, 12.0)])
    def test_bessel_i(self, nu, z):
        assert rel(bessel_i(nu, z).value, mp.besseli(nu, z)) < 1e-10

    @pytest.mark.parametrize("z", [0.5, 5.0, 30.0, 300.0, 3e4, 1e6])
    def test_bessel_j1(self, z):
        assert abs(bessel_j1(z).value - float(mp.besselj(1, z))) < 1e-12

    @pytest.mark.parametrize("a0,b,x", [(1.0, 2.0, [0.1, 5.0, 40.0, 1e3]),
                                        (1.5, 1.5, [0.01, 3.0, 20.0, 1e5])])
    def test_ladder(self, a0, b, x):
        tab = hyp1f1_ladder(a0, b, np.array(x), 30)
        for k in (0, 7, 29):
            for j, xv in enumerate(x):
                assert rel(tab[k, j], mp.hyp1f1(a0 + k, b, -xv)) < 1e-9


class TestIdentities:
    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(0.1, 8), c=st.floats(0.2, 8), z=st.floats(-50, 50))
    def test_kummer_transformation(self, a, c, z):
        lhs = kummer_1f1(a, c, z).value
        rhs = math.exp(z) * kummer_1f1(c - a, c, -z).value
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs)) + 1e-13

    @settings(max_examples=60, deadline=None)
    @given(a=st.floats(-3, 3), b=st.floats(0.1, 5), z=st.floats(-9.99, 0.9))
    def test_2f1_with_equal_parameters(self, a, b, z):
        assert_allclose(gauss_2f1(a, b, b, z).value, (1 - z) ** (-a), rtol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(a=st.floats(0.5, 4), b=st.floats(0.5, 4), c=st.floats(0.5, 4), cp=st.floats(0.5, 4),
           x=st.floats(-20, 0.8), y=st.floats(-5, 5))
    def test_reduction_lattice(self, a, b, c, cp, x, y):
        assert rel(humbert_psi1(a, b, c, cp, x, 0).value, gauss_2f1(a, b, c, x).value) < 1e-8
        assert rel(humbert_psi1(a, b, c, cp, 0, y).value, kummer_1f1(a, cp, y).value) < 1e-8
        assert rel(humbert_psi2(a, c, cp, y, 0).value, kummer_1f1(a, c, y).value) < 1e-8
        assert rel(appell_f1(a, b, cp, c, x, 0).value, gauss_2f1(a, b, c, x).value) < 1e-8
        if abs(x) < 1:
            assert rel(appell_f2(a, b, cp, c, cp, x, 0).value, gauss_2f1(a, b, c, x).value) < 1e-8

    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    @pytest.mark.parametrize("kappa", [0.5, 2.0, 6.0])
    @pytest.mark.parametrize("x", [-0.3, -4.0, -25.0])
    def test_equal_shape_psi1_collapse(self, m, kappa, x):
        # with c' = b the bounded-variable sum is a binomial series:
        # Psi1(m+1, m; m, 2; y, x) = (1-y)^{-m-1} 1F1(m+1; 2; x/(1-y))
        y = m * kappa / (m * kappa + m)
        res = humbert_psi1(m + 1, m, m, 2, y, x)
        ref = (1 - y) ** (-m - 1) * kummer_1f1(m + 1, 2, x / (1 - y)).value
        # For large negative x the double series cancels down to a value far
        # below its terms; there only the reported error bound can be checked.
        assert abs(res.value - ref) <= max(res.error_estimate, 1e-8 * abs(ref))
        if res.error_estimate <= 1e-10 * abs(res.value):
            assert rel(res.value, ref) < 1e-8

    def test_psi1_terminating_transform(self):
        # c - b = -1: two-term sum after the x -> x/(x-1) map; mpmath double series
        assert_allclose(humbert_psi1(3, 3, 2, 1.5, 0.4, -3.0).value,
                        0.035951362620082347547, rtol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(beta=st.floats(0.3, 6), z=st.floats(0.01, 60))
    def test_1f1_bessel_reduction(self, beta, z):
        lhs = kummer_1f1(beta, 2 * beta, z).value
        rhs = (2 ** (2 * beta - 1) * math.gamma(beta + 0.5) * z ** (0.5 - beta)
               * math.exp(z / 2) * bessel_i(beta - 0.5, z / 2).value)
        assert rel(lhs, rhs) < 1e-8

    @settings(max_examples=40, deadline=None)
    @given(a=st.floats(0.2, 6), b=st.floats(0.1, 1.9).filter(lambda v: abs(v - 1) > 1e-3),
           z=st.floats(0.05, 30))
    def test_tricomi_kummer_symmetry(self, a, b, z):
        # U(a, b, z) = z^{1-b} U(a-b+1, 2-b, z)
        lhs = tricomi_u(a, b, z).value
        rhs = z ** (1 - b) * tricomi_u(a - b + 1, 2 - b, z).value
        assert rel(lhs, rhs) < 1e-8

    @settings(max_examples=40, deadline=None)
    @given(x=st.floats(-8, 8), y=st.floats(-8, 8))
    def test_gaussian_q_monotone(self, x, y):
        if x < y:
            assert gaussian_q(x) >= gaussian_q(y)
        assert gaussian_q(x) + gaussian_q(-x) == pytest.approx(1.0, abs=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(0, 60), k=st.integers(0, 60))
    def test_binom_pascal(self, n, k):
        if k > n or k == 0:
            return
        assert_allclose(binom(n + 1, k), binom(n, k) + binom(n, k - 1), rtol=4e-16)


class TestErrors:
    def test_psi1_outside_region(self):
        with pytest.raises(ValueError):
            humbert_psi1(1.5, 2, 2, 1.5, 3.0, 1.4)

    def test_pole_of_c(self):
        with pytest.raises(ValueError):
            gauss_2f1(1, 1, -2, 0.3)
        with pytest.raises(ValueError):
            kummer_1f1(1, 0, 0.3)

    def test_tricomi_domain(self):
        with pytest.raises(ValueError):
            tricomi_u(1, 1, -1.0)

    def test_error_estimate_nonnegative(self):
        for r in (gauss_2f1(0.5, 1.5, 2.5, -3.0), kummer_1f1(2.5, 1.5, -7.0),
                  appell_f1(1 / 3, 1, 2, 4 / 3, -0.8, -0.4), tricomi_u(1.5, 0.5, 2.0)):
            assert r.error_estimate >= 0


def _euler(weight_a, weight_b, f):
    """int_0^1 t^{weight_a-1} (1-t)^{weight_b-1} f(t) dt / B(weight_a, weight_b)."""
    v, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(weight_a - 1, weight_b - 1),
                          epsabs=0, epsrel=1e-13, limit=400)
    return v / special.beta(weight_a, weight_b)


def _laplace(a, f, rate=1.0):
    """int_0^inf e^{-t} t^{a-1} f(t) dt / Gamma(a); ``rate`` bounds the net decay of the
    integrand so the range can be truncated where it is below 1e-30."""
    g = lambda t: math.exp(-t + (a - 1) * math.log(t) - special.gammaln(a)) * f(t) if t > 0 else 0.0
    top = (70.0 + 2 * a) / rate
    v, _ = integrate.quad(g, 0, top, points=[top / 20, top / 5], epsabs=0, epsrel=1e-13, limit=400)
    return v


class TestIntegralOracles:
    """Each evaluator against a one-dimensional integral representation."""

    @pytest.mark.parametrize("a,b,c,z", [(-2 / 3, 1, 4 / 3, -4.0), (0.5, 1.5, 2.5, -3.0),
                                         (2, 0.7, 3.2, 0.6), (1.3, 2, 4, -20.0), (3, 1, 2.5, -0.95)])
    def test_gauss_euler(self, a, b, c, z):
        ref = _euler(b, c - b, lambda t: (1 - z * t) ** (-a))
        assert rel(gauss_2f1(a, b, c, z).value, ref) < 1e-8

    @pytest.mark.parametrize("a,c,z", [(0.5, 1.5, -7.0), (2.5, 4, 12.0), (1.2, 3.7, -40.0),
                                       (3, 5.5, 0.3)])
    def test_kummer_euler(self, a, c, z):
        ref = _euler(a, c - a, lambda t: math.exp(z * t))
        assert rel(kummer_1f1(a, c, z).value, ref) < 1e-8

    @pytest.mark.parametrize("a,b,c,cp,x,y", [(1.5, 2, 3, 1.5, -3.0, 0.4), (2, 1, 2.5, 2, 0.5, -2.0),
                                              (3, 2, 4, 1, -10.0, 0.7), (1, 0.5, 1.5, 3, 0.3, -6.0)])
    def test_psi1_euler(self, a, b, c, cp, x, y):
        # Psi1 = int t^{b-1}(1-t)^{c-b-1} (1-xt)^{-a} 1F1(a; c'; y/(1-xt)) dt / B(b, c-b)
        ref = _euler(b, c - b, lambda t: (1 - x * t) ** (-a) * special.hyp1f1(a, cp, y / (1 - x * t)))
        assert rel(humbert_psi1(a, b, c, cp, x, y).value, ref) < 1e-8

    @pytest.mark.parametrize("a,c,cp,x,y", [(1.5, 2, 1.5, -3.0, 0.4), (3, 2, 3, -8.0, -0.5),
                                            (2.5, 1.5, 4, 0.8, -4.0)])
    def test_psi2_laplace(self, a, c, cp, x, y):
        ref = _laplace(a, lambda t: special.hyp0f1(c, x * t) * special.hyp0f1(cp, y * t))
        assert rel(humbert_psi2(a, c, cp, x, y).value, ref) < 1e-8

    @pytest.mark.parametrize("a,b,bp,c,x,y", [(1 / 3, 1, 2, 4 / 3, -0.8, -0.4),
                                              (1.5, 2, 1, 3.5, -6.0, -2.0), (0.5, 1, 1, 2.5, 0.4, -9.0)])
    def test_f1_euler(self, a, b, bp, c, x, y):
        ref = _euler(a, c - a, lambda t: (1 - x * t) ** (-b) * (1 - y * t) ** (-bp))
        assert rel(appell_f1(a, b, bp, c, x, y).value, ref) < 1e-8

    @pytest.mark.parametrize("a,b,bp,c,cp,x,y", [(2, 1, 1.5, 2, 3, -0.3, 0.2),
                                                  (1.5, 2, 1, 3, 2, -2.0, 0.3)])
    def test_f2_laplace(self, a, b, bp, c, cp, x, y):
        ref = _laplace(a, lambda t: special.hyp1f1(b, c, x * t) * special.hyp1f1(bp, cp, y * t),
                       rate=1 - max(x, 0) - max(y, 0))
        assert rel(appell_f2(a, b, bp, c, cp, x, y).value, ref) < 1e-8

    @pytest.mark.parametrize("nu,z", [(0, 0.5), (1.5, 3.0), (4, 12.0)])
    def test_bessel_i_integral(self, nu, z):
        # I_nu(z) = (z/2)^nu / (sqrt(pi) Gamma(nu+1/2)) int_{-1}^{1} (1-t^2)^{nu-1/2} e^{zt} dt
        v, _ = integrate.quad(lambda t: math.exp(z * t), -1, 1, weight="alg",
                              wvar=(nu - 0.5, nu - 0.5), epsabs=0, epsrel=1e-13)
        ref = (z / 2) ** nu / (math.sqrt(math.pi) * special.gamma(nu + 0.5)) * v
        assert rel(bessel_i(nu, z).value, ref) < 1e-8
