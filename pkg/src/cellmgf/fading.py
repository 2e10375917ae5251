"""Fading-gain models: shadowed kappa-mu, kappa-mu, eta-mu and Nakagami-m.

Rice and Rayleigh are not separate classes: ``rice(K, omega)`` builds a
kappa-mu model with mu = 1 and ``rayleigh(omega)`` a Nakagami model with
m = 1.

Every model here is a Poisson or negative-binomial mixture of scaled Gamma
variates, h = theta * Gamma(mu + K).  :func:`gamma_mixture` exposes that
structure.  The metric integrals and the sampler are both built on it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special, stats

__all__ = [
    "ShadowedKappaMuParams",
    "KappaMuParams",
    "EtaMuParams",
    "NakagamiParams",
    "FadingModel",
    "GammaMixture",
    "shadowed_kappa_mu",
    "kappa_mu",
    "eta_mu",
    "nakagami",
    "rayleigh",
    "rice",
    "pdf",
    "cdf",
    "gain_mgf",
    "log_gain_mgf",
    "one_minus_gain_mgf",
    "gamma_mixture",
    "sample",
    "sample_array",
    "mean_power",
    "second_moment",
]


def _check(cond, msg):
    if not cond:
        raise ValueError(msg)


@dataclass(frozen=True)
class ShadowedKappaMuParams:
    """Shadowed kappa-mu gain: mu clusters, LOS ratio kappa, Nakagami-m shadowing of the LOS part."""

    omega: float
    kappa: float
    mu: float
    m: float
    kind = "shadowed_kappa_mu"

    def __post_init__(self):
        _check(self.omega > 0, "omega must be positive")
        _check(self.kappa >= 0, "kappa must be nonnegative")
        _check(self.mu > 0, "mu must be positive")
        _check(self.m > 0, "m must be positive")


@dataclass(frozen=True)
class KappaMuParams:
    """kappa-mu gain.  kappa = 0 is rejected; use Nakagami for that case."""

    omega: float
    kappa: float
    mu: float
    kind = "kappa_mu"

    def __post_init__(self):
        _check(self.omega > 0, "omega must be positive")
        _check(self.kappa > 0, "kappa must be positive (use nakagami for kappa = 0)")
        _check(self.mu > 0, "mu must be positive")


@dataclass(frozen=True)
class EtaMuParams:
    """eta-mu gain (in-phase/quadrature power ratio eta, format 1)."""

    omega: float
    eta: float
    mu: float
    kind = "eta_mu"

    def __post_init__(self):
        _check(self.omega > 0, "omega must be positive")
        _check(self.eta > 0, "eta must be positive")
        _check(self.mu > 0, "mu must be positive")


@dataclass(frozen=True)
class NakagamiParams:
    """Nakagami-m gain (Gamma distributed power with shape m and mean omega)."""

    m: float
    omega: float
    kind = "nakagami"

    def __post_init__(self):
        _check(self.omega > 0, "omega must be positive")
        _check(self.m > 0, "m must be positive")


FadingModel = Union[ShadowedKappaMuParams, KappaMuParams, EtaMuParams, NakagamiParams]


def shadowed_kappa_mu(omega=1.0, kappa=1.0, mu=1.0, m=1.0) -> ShadowedKappaMuParams:
    return ShadowedKappaMuParams(float(omega), float(kappa), float(mu), float(m))


def kappa_mu(omega=1.0, kappa=1.0, mu=1.0) -> KappaMuParams:
    return KappaMuParams(float(omega), float(kappa), float(mu))


def eta_mu(omega=1.0, eta=1.0, mu=1.0) -> EtaMuParams:
    return EtaMuParams(float(omega), float(eta), float(mu))


def nakagami(m=1.0, omega=1.0) -> NakagamiParams:
    return NakagamiParams(float(m), float(omega))


def rayleigh(omega=1.0) -> NakagamiParams:
    """Rayleigh fading, stored as Nakagami with m = 1."""
    return NakagamiParams(1.0, float(omega))


def rice(K=1.0, omega=1.0) -> KappaMuParams:
    """Rice fading with factor K, stored as kappa-mu with mu = 1."""
    return KappaMuParams(float(omega), float(K), 1.0)


def _eta_mu_as_skm(p: EtaMuParams) -> ShadowedKappaMuParams:
    # eta and 1/eta describe the same distribution; fold onto eta <= 1 so kappa >= 0
    eta = min(p.eta, 1.0 / p.eta)
    return ShadowedKappaMuParams(p.omega, (1.0 - eta) / (2.0 * eta), 2.0 * p.mu, p.mu)


def _skm_scales(p: ShadowedKappaMuParams):
    theta = p.omega / (p.mu * (1.0 + p.kappa))
    xi = (p.mu * p.kappa + p.m) * p.omega / (p.m * p.mu * (1.0 + p.kappa))
    return theta, xi


def mean_power(model: FadingModel) -> float:
    return model.omega


def second_moment(model: FadingModel) -> float:
    """E[h^2], from the Gamma-mixture representation."""
    mix = gamma_mixture(model)
    q = mix.shapes
    return float(np.sum(mix.weights * q * (q + 1)) * mix.theta ** 2)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def _log_hyp1f1_pos(a, b, x):
    """log 1F1(a; b; x) for a, b > 0 and x >= 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= 500.0
    out[small] = np.log(special.hyp1f1(a, b, x[small]))
    if np.any(~small):
        xb = x[~small]
        # e^x x^{a-b} Gamma(b)/Gamma(a) sum_k (b-a)_k (1-a)_k / k! x^{-k}
        s = np.ones_like(xb)
        t = np.ones_like(xb)
        for k in range(30):
            t = t * (b - a + k) * (1 - a + k) / ((k + 1) * xb)
            s += t
            if np.all(np.abs(t) < 1e-17 * np.abs(s)):
                break
        out[~small] = xb + (a - b) * np.log(xb) + special.gammaln(b) - special.gammaln(a) + np.log(s)
    return out


def _log_bessel_i(nu, z):
    z = np.asarray(z, dtype=float)
    big = z > 1e8  # scipy's ive gives nan beyond about 1e9
    out = np.log(special.ive(nu, np.where(big, 1.0, z))) + z
    if np.any(big):
        zb = z[big]
        mu4 = 4.0 * nu * nu
        corr = 1.0 - (mu4 - 1) / (8 * zb) + (mu4 - 1) * (mu4 - 9) / (128 * zb * zb)
        out[big] = zb - 0.5 * np.log(2 * math.pi * zb) + np.log(corr)
    return out


def _logpdf(model: FadingModel, y):
    y = np.asarray(y, dtype=float)
    if isinstance(model, NakagamiParams):
        m, w = model.m, model.omega
        return m * np.log(m / w) - special.gammaln(m) + (m - 1) * np.log(y) - m * y / w
    if isinstance(model, ShadowedKappaMuParams):
        om, k, mu, m = model.omega, model.kappa, model.mu, model.m
        if k == 0:
            return _logpdf(NakagamiParams(mu, om), y)
        c0 = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(k) - special.gammaln(mu)
              - m * math.log(mu * k + m) - mu * math.log(om))
        arg = mu * mu * k * (1 + k) * y / (om * (mu * k + m))
        return c0 + (mu - 1) * np.log(y) - mu * (1 + k) * y / om + _log_hyp1f1_pos(m, mu, arg)
    if isinstance(model, KappaMuParams):
        om, k, mu = model.omega, model.kappa, model.mu
        c0 = (math.log(mu) + 0.5 * (mu + 1) * math.log1p(k) - 0.5 * (mu - 1) * math.log(k)
              - k * mu - 0.5 * (mu + 1) * math.log(om))
        arg = 2 * mu * np.sqrt(k * (1 + k) * y / om)
        return c0 + 0.5 * (mu - 1) * np.log(y) - mu * (1 + k) * y / om + _log_bessel_i(mu - 1, arg)
    if isinstance(model, EtaMuParams):
        om, eta, mu = model.omega, model.eta, model.mu
        h = (2 + 1 / eta + eta) / 4
        big_h = abs(1 / eta - eta) / 4
        if big_h == 0:
            return _logpdf(NakagamiParams(2 * mu, om), y)
        c0 = (0.5 * math.log(4 * math.pi) + (mu + 0.5) * math.log(mu) + mu * math.log(h)
              - special.gammaln(mu) - (mu - 0.5) * math.log(big_h) - (mu + 0.5) * math.log(om))
        return (c0 + (mu - 0.5) * np.log(y) - 2 * mu * h * y / om
                + _log_bessel_i(mu - 0.5, 2 * mu * big_h * y / om))
    raise TypeError(f"unsupported fading model {model!r}")


def pdf(model: FadingModel, y):
    """Probability density of the fading power gain at y > 0 (vectorised)."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0):
        raise ValueError("pdf is defined for y > 0")
    out = np.exp(_logpdf(model, y_arr))
    return float(out) if np.ndim(y) == 0 else out


def cdf(model: FadingModel, y):
    """Distribution function P(h <= y), summed over the Gamma mixture."""
    mix = gamma_mixture(model)
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    vals = special.gammainc(mix.shapes[:, None], np.maximum(y_arr, 0)[None, :] / mix.theta)
    out = mix.weights @ vals
    return float(out[0]) if np.ndim(y) == 0 else out


def gain_mgf(model: FadingModel, s):
    """E[exp(-s h)] for Re(s) >= 0; accepts real or complex arrays."""
    s = np.asarray(s)
    if isinstance(model, NakagamiParams):
        out = (1 + s * model.omega / model.m) ** (-model.m)
    elif isinstance(model, ShadowedKappaMuParams):
        theta, xi = _skm_scales(model)
        out = (1 + theta * s) ** (model.m - model.mu) * (1 + xi * s) ** (-model.m)
    elif isinstance(model, KappaMuParams):
        theta = model.omega / (model.mu * (1 + model.kappa))
        u = 1 + theta * s
        out = u ** (-model.mu) * np.exp(-model.mu * model.kappa * theta * s / u)
    elif isinstance(model, EtaMuParams):
        t1 = model.omega * model.eta / (model.mu * (1 + model.eta))
        t2 = model.omega / (model.mu * (1 + model.eta))
        out = ((1 + t1 * s) * (1 + t2 * s)) ** (-model.mu)
    else:
        raise TypeError(f"unsupported fading model {model!r}")
    return out[()] if out.ndim == 0 else out


def _log1p(z):
    """log(1 + z) accurate for small complex z (numpy's complex log1p is not)."""
    if not np.iscomplexobj(z):
        return np.log1p(z)
    w = 1.0 + z
    d = w - 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(d == 0, z, np.log(w) * (z / np.where(d == 0, 1.0, d)))
    return out


def log_gain_mgf(model: FadingModel, s):
    """log E[exp(-s h)], built from log1p so small |s| keeps full precision."""
    s = np.asarray(s)
    if isinstance(model, NakagamiParams):
        out = -model.m * _log1p(s * model.omega / model.m)
    elif isinstance(model, ShadowedKappaMuParams):
        theta, xi = _skm_scales(model)
        out = (model.m - model.mu) * _log1p(theta * s) - model.m * _log1p(xi * s)
    elif isinstance(model, KappaMuParams):
        theta = model.omega / (model.mu * (1 + model.kappa))
        ts = theta * s
        out = -model.mu * _log1p(ts) - model.mu * model.kappa * ts / (1 + ts)
    elif isinstance(model, EtaMuParams):
        t1 = model.omega * model.eta / (model.mu * (1 + model.eta))
        t2 = model.omega / (model.mu * (1 + model.eta))
        out = -model.mu * (_log1p(t1 * s) + _log1p(t2 * s))
    else:
        raise TypeError(f"unsupported fading model {model!r}")
    return out[()] if out.ndim == 0 else out


def one_minus_gain_mgf(model: FadingModel, s):
    """1 - E[exp(-s h)] without cancellation at small |s|."""
    return -np.expm1(log_gain_mgf(model, s))


# ---------------------------------------------------------------------------
# Gamma-mixture structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaMixture:
    """h = theta * G with G ~ Gamma(shapes[n]) chosen with probability weights[n].

    ``shapes`` is always base + 0, 1, 2, ..., so contiguous-parameter
    recurrences can be run along the mixture index.
    """

    theta: float
    base: float
    weights: np.ndarray

    @property
    def shapes(self) -> np.ndarray:
        return self.base + np.arange(self.weights.size)

    def __len__(self):
        return self.weights.size


_MAX_MIXTURE = 20_000


def gamma_mixture(model: FadingModel, tail: float = 1e-17) -> GammaMixture:
    """Gamma-mixture representation truncated where the neglected mass < ``tail``.

    The neglected mass is folded into the last kept component so the weights
    still sum to one.
    """
    if isinstance(model, NakagamiParams):
        return GammaMixture(model.omega / model.m, model.m, np.array([1.0]))
    if isinstance(model, EtaMuParams):
        return gamma_mixture(_eta_mu_as_skm(model), tail)
    if isinstance(model, ShadowedKappaMuParams):
        theta, _ = _skm_scales(model)
        if model.kappa == 0:
            return GammaMixture(theta, model.mu, np.array([1.0]))
        y0 = model.mu * model.kappa / (model.mu * model.kappa + model.m)
        dist = stats.nbinom(model.m, 1 - y0)
    elif isinstance(model, KappaMuParams):
        theta = model.omega / (model.mu * (1 + model.kappa))
        dist = stats.poisson(model.mu * model.kappa)
    else:
        raise TypeError(f"unsupported fading model {model!r}")
    mean, var = dist.stats()
    n_max = int(mean + 60.0 * math.sqrt(var) + 100)
    while dist.logsf(n_max) > math.log(tail) - 5:
        n_max *= 2
    if n_max > 4 * _MAX_MIXTURE:
        raise ValueError("mixture too long; LOS/shadowing parameters are too extreme")
    w = dist.pmf(np.arange(n_max + 1))
    beyond = np.cumsum(w[::-1])[::-1]  # mass at index >= n
    keep = int(np.argmax(beyond < tail)) if np.any(beyond < tail) else n_max + 1
    n_hi = max(keep, 1)
    if n_hi > _MAX_MIXTURE:
        raise ValueError("mixture too long; LOS/shadowing parameters are too extreme")
    w = w[:n_hi].copy()
    w[-1] += max(0.0, 1.0 - w.sum())
    base = model.mu
    return GammaMixture(theta, base, w)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_array(model: FadingModel, rng: np.random.Generator, size) -> np.ndarray:
    """Independent gain draws.

    Shadowed kappa-mu: shadow power zeta ~ Gamma(m, mean 1), cluster count
    K ~ Poisson(mu kappa zeta), h = theta * Gamma(mu + K).  kappa-mu drops
    the shadowing; eta-mu goes through its shadowed kappa-mu equivalent.
    """
    if isinstance(model, NakagamiParams):
        return rng.gamma(model.m, model.omega / model.m, size)
    if isinstance(model, EtaMuParams):
        return sample_array(_eta_mu_as_skm(model), rng, size)
    if isinstance(model, ShadowedKappaMuParams):
        theta, _ = _skm_scales(model)
        if model.kappa == 0:
            return theta * rng.gamma(model.mu, 1.0, size)
        zeta = rng.gamma(model.m, 1.0 / model.m, size)
        k = rng.poisson(model.mu * model.kappa * zeta)
        return theta * rng.gamma(model.mu + k, 1.0)
    if isinstance(model, KappaMuParams):
        theta = model.omega / (model.mu * (1 + model.kappa))
        k = rng.poisson(model.mu * model.kappa, size)
        return theta * rng.gamma(model.mu + k, 1.0)
    raise TypeError(f"unsupported fading model {model!r}")


def sample(model: FadingModel, rng: np.random.Generator) -> float:
    """A single gain draw."""
    return float(sample_array(model, rng, 1)[0])
