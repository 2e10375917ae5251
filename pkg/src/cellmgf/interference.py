"""Laplace transform of the aggregate interference in a downlink PPP network.

With the user at the origin served by the nearest base station at distance r,
the interferers form a PPP of density lambda outside the disc of radius r and

    L_I(xi r^alpha) = exp(-pi lambda r^2 A(xi)),
    A(xi) = (2/alpha) int_0^1 x^{-2/alpha-1} (1 - M_h(xi x)) dx,

where M_h is the interferer gain MGF.  ``A`` does not depend on r or lambda,
which is what makes the interference-limited metrics density-free.

Two families of evaluators live here:

* scalar closed forms (binomial/Appell sums for shadowed kappa-mu and eta-mu,
  a Poisson mixture of Gauss functions for kappa-mu, the single Gauss
  function for Nakagami-m) and a quadrature oracle;
* lattice routines that return A on a whole geometric grid of (possibly
  complex) arguments, and the radial factor R(xi) = E_r[exp(-xi r^alpha N)
  L_I(xi r^alpha)] built from it.  The metric integrals use these.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import fading
from .fading import (
    EtaMuParams,
    FadingModel,
    KappaMuParams,
    NakagamiParams,
    ShadowedKappaMuParams,
)
from .hyperfun import DEFAULT_CONTROL, SeriesControl, appell_f1, binom

__all__ = [
    "NetworkConfig",
    "LaplaceEvaluator",
    "laplace_skm",
    "laplace_km",
    "laplace_em",
    "laplace_nak",
    "laplace_numeric",
    "radial_average",
    "interference_coefficient",
    "coefficient_numeric",
    "coefficient_lattice",
    "radial_factor",
]


@dataclass(frozen=True)
class NetworkConfig:
    """BS density (per unit area), path-loss exponent, transmit and noise power."""

    lambda_bs: float
    alpha: float
    power: float = 1.0
    noise: float = 0.0

    def __post_init__(self):
        if not self.lambda_bs > 0:
            raise ValueError("lambda_bs must be > 0")
        if not self.alpha > 2:
            raise ValueError("alpha must be > 2 for finite interference")
        if not self.power > 0:
            raise ValueError("power must be > 0")
        if not self.noise >= 0:
            raise ValueError("noise must be >= 0")

    @property
    def delta(self) -> float:
        return 2.0 / self.alpha

    @property
    def noise_ratio(self) -> float:
        """sigma^2 / P."""
        return self.noise / self.power


def _is_int(x) -> bool:
    return float(x) == int(x) and x >= 1


def _check_xi(xi):
    if not xi >= 0:
        raise ValueError("xi must be >= 0")


# ---------------------------------------------------------------------------
# closed-form exponent coefficients A(xi)
# ---------------------------------------------------------------------------

def _gauss_minus_one(q, x, d):
    """2F1(-d, q; 1-d; -x) - 1 for arrays q, x >= 0 without cancellation at small x."""
    q, x = np.broadcast_arrays(np.asarray(q, float), np.asarray(x, float))
    out = np.empty(q.shape)
    small = q * x < 0.5
    if np.any(small):
        qs, xs = q[small], x[small]
        term = np.ones_like(qs)
        acc = np.zeros_like(qs)
        for j in range(1, 80):
            term = term * (-d + j - 1) * (qs + j - 1) / ((1 - d + j - 1) * j) * (-xs)
            acc += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
                break
        out[small] = acc
    big = ~small
    if np.any(big):
        out[big] = special.hyp2f1(-d, q[big], 1 - d, -x[big]) - 1.0
    flat, qf, xf = out.reshape(-1), q.reshape(-1), x.reshape(-1)
    for i in np.flatnonzero(~np.isfinite(flat)):
        flat[i] = _gauss_minus_one_quad(float(qf[i]), float(xf[i]), d)
    return flat.reshape(out.shape)


def _gauss_minus_one_quad(q, x, d):
    """d int_0^1 t^{-d-1} (1 - (1 + x t)^{-q}) dt, the same quantity by quadrature.

    scipy's 2F1 returns nan once q x is large (large Nakagami m); the
    integrand here is smooth apart from the t^{-d} factor at the origin.
    """
    f = lambda t: -math.expm1(-q * math.log1p(x * t)) / t if t > 0 else q * x
    t0 = min(1.0, 1.0 / (q * x))
    v0, _ = integrate.quad(f, 0.0, t0, weight="alg", wvar=(-d, 0.0),
                           epsabs=0.0, epsrel=1e-13, limit=200)
    v1 = 0.0
    if t0 < 1.0:
        v1, _ = integrate.quad(lambda u: math.exp(-d * u) * -math.expm1(-q * math.log1p(x * math.exp(u))),
                               math.log(t0), 0.0, epsabs=0.0, epsrel=1e-13, limit=200)
    return d * (v0 + v1)


def _coef_nak(m, omega, alpha, xi):
    return float(_gauss_minus_one(m, omega * xi / m, 2.0 / alpha))


# beyond this shape the binomial sums overflow and cancel; quadrature is used instead
_SKM_CLOSED_MAX = 60


def _skm_closed_ok(p: ShadowedKappaMuParams) -> bool:
    return _is_int(p.mu) and _is_int(p.m) and max(p.mu, p.m) <= _SKM_CLOSED_MAX


def _coef_skm_closed(p: ShadowedKappaMuParams, alpha, xi, ctl):
    if not _skm_closed_ok(p):
        return coefficient_numeric(p, alpha, xi)
    mu, m = int(p.mu), int(p.m)
    d = 2.0 / alpha
    theta, big_xi = fading._skm_scales(p)
    if xi == 0:
        return 0.0
    if p.kappa == 0 or mu == m:
        # no dominant-component term, or shadowing exactly cancels: Nakagami-mu
        return _coef_nak(p.mu, p.omega, alpha, xi)
    total = 0.0
    if mu <= m:
        # 1 - M = [(1+Xi s)^m - (1+Theta s)^(m-mu)] / (1+Xi s)^m
        for n in range(1, m + 1):
            c = binom(m, n) * big_xi ** n
            if n <= m - mu:
                c -= binom(m - mu, n) * theta ** n
            if c == 0:
                continue
            g = _hyp2f1_b1(m, n - d, -big_xi * xi)
            total += c * xi ** n / (n - d) * g
    else:
        # 1 - M = [(1+Theta s)^(mu-m)(1+Xi s)^m - 1] / ((1+Theta s)^(mu-m)(1+Xi s)^m)
        for k in range(0, mu - m + 1):
            for n in range(0, m + 1):
                if k + n == 0:
                    continue
                c = binom(mu - m, k) * binom(m, n) * theta ** k * big_xi ** n
                a = k + n - d
                f1 = appell_f1(a, mu - m, m, a + 1, -theta * xi, -big_xi * xi, ctl).real
                total += c * xi ** (k + n) / a * f1
    return d * total


def _hyp2f1_b1(a, b, z):
    """2F1(a, b; b+1; z) = b int_0^1 t^{b-1} (1 - z t)^{-a} dt, z <= 0."""
    return float(special.hyp2f1(a, b, b + 1, z))


def _km_poisson_weights(p: KappaMuParams, ctl: SeriesControl, max_terms=500):
    lam = p.mu * p.kappa
    k = np.arange(max_terms)
    logw = -lam + k * math.log(lam) - special.gammaln(k + 1) if lam > 0 else np.where(k == 0, 0.0, -np.inf)
    w = np.exp(logw)
    tail = np.cumsum(w[::-1])[::-1]
    ok = np.nonzero(tail < ctl.rel_tol * 1e-3)[0]
    if ok.size == 0:
        return None
    n = max(int(ok[0]), 1)
    return w[:n]


def _coef_km_closed(p: KappaMuParams, alpha, xi, ctl):
    """Poisson(mu kappa) mixture of Nakagami(mu + k) coefficients."""
    if xi == 0:
        return 0.0, "closed_form"
    w = _km_poisson_weights(p, ctl)
    if w is None:
        return coefficient_numeric(p, alpha, xi), "numeric_fallback"
    theta = p.omega / (p.mu * (1 + p.kappa))
    q = p.mu + np.arange(w.size)
    terms = _gauss_minus_one(q, theta * xi * np.ones_like(q), 2.0 / alpha)
    return float(np.dot(w, terms)), "closed_form"


def coefficient_numeric(model_I: FadingModel, alpha: float, xi: float) -> float:
    """A(xi) by adaptive quadrature.

    On x in (0, 1] the integrand x^{-d-1}(1 - M(xi x)) behaves like x^{-d}
    near the origin.  Below a split point x0 = min(1e-3, 1/(xi E[h])) the
    factor (1 - M(xi x))/x is smooth and the x^{-d} singularity goes into
    an algebraic weight; above it the integrand is regular, and it is
    integrated in log x so that the decay scale 1/(xi E[h]) is resolved.
    """
    _check_xi(xi)
    if xi == 0:
        return 0.0
    d = 2.0 / alpha
    scale = xi * model_I.omega
    x0 = min(1e-3, 1.0 / scale)

    def near(x):
        if x == 0:
            return xi * model_I.omega
        return fading.one_minus_gain_mgf(model_I, xi * x) / x

    lo, _ = integrate.quad(near, 0.0, x0, weight="alg", wvar=(-d, 0.0),
                           epsabs=0.0, epsrel=1e-12, limit=200)

    def far(v):
        x = math.exp(v)
        return x ** (-d) * fading.one_minus_gain_mgf(model_I, xi * x)

    v0 = math.log(x0)
    pts = [v for v in (-math.log(scale) + s for s in (-2.0, 0.0, 2.0)) if v0 < v < 0]
    hi, _ = integrate.quad(far, v0, 0.0, points=pts or None,
                           epsabs=0.0, epsrel=1e-12, limit=200)
    return d * (lo + hi)


def interference_coefficient(model_I: FadingModel, net: NetworkConfig | float, xi,
                             method: str = "closed_form",
                             ctl: SeriesControl | None = None):
    """A(xi) such that L_I(xi r^alpha) = exp(-pi lambda r^2 A(xi)).

    ``net`` may be a NetworkConfig or just the path-loss exponent.  Arrays of
    xi are evaluated pointwise.  Models whose shape parameters have no
    closed form (non-integer or very large shadowed kappa-mu / eta-mu shapes)
    use quadrature.
    """
    alpha = net.alpha if isinstance(net, NetworkConfig) else float(net)
    if np.ndim(xi) > 0:
        return np.array([interference_coefficient(model_I, alpha, float(v), method, ctl)
                         for v in np.ravel(xi)]).reshape(np.shape(xi))
    xi = float(xi)
    _check_xi(xi)
    ctl = ctl or DEFAULT_CONTROL
    if method == "numeric_oracle" or xi == 0:
        return coefficient_numeric(model_I, alpha, xi)
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    if isinstance(model_I, NakagamiParams):
        return _coef_nak(model_I.m, model_I.omega, alpha, xi)
    if isinstance(model_I, EtaMuParams):
        model_I = fading._eta_mu_as_skm(model_I)
    if isinstance(model_I, ShadowedKappaMuParams):
        return _coef_skm_closed(model_I, alpha, xi, ctl)
    if isinstance(model_I, KappaMuParams):
        return _coef_km_closed(model_I, alpha, xi, ctl)[0]
    raise TypeError(f"unsupported fading model {model_I!r}")


# ---------------------------------------------------------------------------
# Laplace transforms
# ---------------------------------------------------------------------------

def _laplace(net: NetworkConfig, r, coef):
    if not r > 0:
        raise ValueError("r must be > 0")
    return math.exp(-math.pi * net.lambda_bs * r * r * coef)


def laplace_skm(params_I: ShadowedKappaMuParams, net: NetworkConfig, xi: float, r: float,
                ctl: SeriesControl | None = None) -> float:
    """L_I(xi r^alpha) for shadowed kappa-mu interferers with integer mu_I, m_I.

    Shapes above 60 are evaluated by quadrature."""
    if not (_is_int(params_I.mu) and _is_int(params_I.m)):
        raise ValueError("closed form needs integer mu_I and m_I; use laplace_numeric")
    _check_xi(xi)
    return _laplace(net, r, _coef_skm_closed(params_I, net.alpha, float(xi), ctl or DEFAULT_CONTROL))


def laplace_km(params_I: KappaMuParams, net: NetworkConfig, xi: float, r: float,
               ctl: SeriesControl | None = None) -> float:
    """L_I(xi r^alpha) for kappa-mu interferers.

    The Poisson mixture over the dominant-component index is truncated
    once the neglected weight is below ``ctl.rel_tol * 1e-3``; beyond 500
    terms the quadrature oracle is used instead.
    """
    _check_xi(xi)
    coef, _ = _coef_km_closed(params_I, net.alpha, float(xi), ctl or DEFAULT_CONTROL)
    return _laplace(net, r, coef)


def laplace_em(params_I: EtaMuParams, net: NetworkConfig, xi: float, r: float,
               ctl: SeriesControl | None = None) -> float:
    """L_I(xi r^alpha) for eta-mu interferers with integer mu_I."""
    if not _is_int(params_I.mu):
        raise ValueError("closed form needs integer mu_I; use laplace_numeric")
    return laplace_skm(fading._eta_mu_as_skm(params_I), net, xi, r, ctl)


def laplace_nak(m_I: float, omega_I: float, net: NetworkConfig, xi: float, r: float) -> float:
    """exp(-pi lambda r^2 (2F1(-2/alpha, m_I; 1-2/alpha; -omega_I xi/m_I) - 1))."""
    if not (m_I > 0 and omega_I > 0):
        raise ValueError("m_I and omega_I must be > 0")
    _check_xi(xi)
    return _laplace(net, r, _coef_nak(m_I, omega_I, net.alpha, float(xi)))


def laplace_numeric(model_I: FadingModel, net: NetworkConfig, xi: float, r: float) -> float:
    """Quadrature oracle for L_I(xi r^alpha), valid for any gain model."""
    return _laplace(net, r, coefficient_numeric(model_I, net.alpha, float(xi)))


@dataclass(frozen=True)
class LaplaceEvaluator:
    """Bound interferer model and network; call with (xi, r)."""

    interferer_model: FadingModel
    network: NetworkConfig
    method: str = "closed_form"
    ctl: SeriesControl = DEFAULT_CONTROL

    def __post_init__(self):
        if self.method not in ("closed_form", "numeric_oracle"):
            raise ValueError(f"unknown method {self.method!r}")

    def coefficient(self, xi: float) -> float:
        return interference_coefficient(self.interferer_model, self.network, xi,
                                         self.method, self.ctl)

    def __call__(self, xi: float, r: float) -> float:
        return _laplace(self.network, r, self.coefficient(xi))


# ---------------------------------------------------------------------------
# serving-distance average
# ---------------------------------------------------------------------------

_LAGUERRE = {}


def _laguerre(n):
    if n not in _LAGUERRE:
        _LAGUERRE[n] = special.roots_laguerre(n)
    return _LAGUERRE[n]


def radial_average(g: Callable[[float], float], lambda_bs: float, nodes: int = 64,
                   rtol: float = 1e-11, max_nodes: int = 256) -> float:
    """E_r[g(r)] for the nearest-BS distance, f_r(x) = 2 pi lambda x exp(-pi lambda x^2).

    With u = pi lambda r^2 this is int_0^inf g(sqrt(u/(pi lambda))) e^{-u} du,
    done by Gauss-Laguerre quadrature.  ``g`` is called on an array of radii.
    The node count is doubled from ``nodes`` until two successive rules
    agree to ``rtol``; integrands that decay much faster than e^{-u} need
    the larger rules.
    """
    if not lambda_bs > 0:
        raise ValueError("lambda_bs must be > 0")

    def rule(n):
        u, w = _laguerre(n)
        r = np.sqrt(u / (math.pi * lambda_bs))
        return float(np.dot(w, np.asarray(g(r), dtype=float)))

    prev = rule(nodes)
    n = nodes
    while n < max_nodes:
        n *= 2
        cur = rule(n)
        if abs(cur - prev) <= rtol * abs(cur):
            return cur
        prev = cur
    return prev


# ---------------------------------------------------------------------------
# lattice evaluation for the metric integrals
# ---------------------------------------------------------------------------

_GL8 = np.polynomial.legendre.leggauss(8)


def coefficient_lattice(model_I: FadingModel, alpha: float, u0: float, h: float, n: int,
                        phi: float = 0.0) -> np.ndarray:
    """A(exp(u_j + i phi)) on u_j = u0 + j h, j = 0..n-1.

    Writes A(xi) = d |xi|^d F(ln|xi|) with

        F(U) = int_{-inf}^U e^{-d v} (1 - M_h(e^{v + i phi})) dv,

    accumulates F panel by panel (8-point Gauss-Legendre per lattice step)
    and starts from the two-term small-argument expansion of 1 - M_h.
    ``phi`` must lie in (-pi/2, pi/2).
    """
    if abs(phi) >= math.pi / 2:
        raise ValueError("phi must lie in (-pi/2, pi/2)")
    d = 2.0 / alpha
    om = model_I.omega
    m2 = fading.second_moment(model_I)
    # start where E[h]|xi| <= 1e-6 so the two-term expansion is exact to rounding
    v_start = math.log(1e-6 / om)
    pad = max(0, int(math.ceil((u0 - v_start) / h)))
    vs = u0 - pad * h
    total = pad + n
    e = np.exp(1j * phi)
    # analytic lower tail: 1 - M ~ om s - m2 s^2 / 2
    ev = math.exp(vs)
    tail = (om * e * math.exp((1 - d) * vs) / (1 - d)
            - 0.5 * m2 * e * e * ev * math.exp((1 - d) * vs) / (2 - d))
    x, w = _GL8
    left = vs + h * np.arange(total - 1)
    nodes = left[:, None] + 0.5 * h * (x[None, :] + 1)
    vals = np.exp(-d * nodes) * fading.one_minus_gain_mgf(model_I, np.exp(nodes) * e)
    panels = 0.5 * h * vals @ w
    F = np.empty(total, dtype=complex)
    F[0] = tail
    F[1:] = tail + np.cumsum(panels)
    u = vs + h * np.arange(total)
    A = d * np.exp(d * u) * F
    return A[pad:]


_R_GRID = {}


def _rgrid(step, lo=-38.0, hi=6.0):
    key = (step, lo, hi)
    if key not in _R_GRID:
        _R_GRID[key] = np.arange(lo, hi + step / 2, step)
    return _R_GRID[key]


def radial_factor(A, xi, noise_ratio: float, lambda_bs: float, alpha: float,
                  chunk: int = 256) -> np.ndarray:
    """R(xi) = E_r[exp(-xi r^alpha N) exp(-pi lambda r^2 A(xi))] on arrays.

    Without noise R = 1/(1 + A).  With noise, substituting t = pi lambda r^2
    gives R = int_0^inf exp(-t(1 + A) - c t^{alpha/2}) dt,
    c = xi N / (pi lambda)^{alpha/2}.  For complex xi the t-contour is rotated
    by theta = -2 arg(xi)/alpha so that the noise term becomes real, and the
    rotated integral is done by the trapezoid rule in log t.
    """
    A = np.asarray(A)
    xi = np.asarray(xi)
    A, xi = np.broadcast_arrays(A, xi)
    if noise_ratio == 0:
        return 1.0 / (1.0 + A)
    shape = A.shape
    A = A.ravel()
    xi = xi.ravel().astype(complex)
    c = xi * noise_ratio / (math.pi * lambda_bs) ** (alpha / 2)
    theta = -2.0 * np.angle(xi) / alpha
    rot = np.exp(1j * theta)
    B = rot * (1.0 + A)
    bmod = np.abs(B)
    beta = np.angle(B)
    cabs = np.abs(c) / bmod ** (alpha / 2)
    # analyticity margin of the integrand in log t sets the trapezoid step
    margin = min(float(np.min(math.pi / 2 - np.abs(beta))), math.pi / alpha)
    margin = max(margin, 1e-3)
    step = float(np.clip(2 * math.pi * margin / 30.0, 0.01, 0.1))
    step = 2.0 ** math.floor(math.log2(step))
    grid = _rgrid(step)
    # centre the grid on the smaller of the two decay scales
    centre = np.minimum(0.0, -np.log(np.maximum(cabs, 1e-300)) / (alpha / 2))
    out = np.empty(A.size, dtype=complex)
    for i in range(0, A.size, chunk):
        sl = slice(i, i + chunk)
        s = centre[sl, None] + grid[None, :]
        w = np.exp(s)
        expo = s - w * np.exp(1j * beta[sl, None]) - cabs[sl, None] * np.exp(s * (alpha / 2))
        out[sl] = step * np.exp(expo).sum(axis=1)
    out = out * rot / bmod
    out = out.reshape(shape)
    if not np.iscomplexobj(A) and np.all(np.angle(xi) == 0):
        return out.real
    return out
