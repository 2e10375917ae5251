"""Ergodic rate, coverage probability and average bit error probability.

Every metric is an integral over xi of a desired-link weight times the
radial factor R(xi) = E[exp(-xi W)], W = r^alpha (N + I):

    rate      C = int (1 - M_h(xi)) / xi  R(xi) d xi
    BEP       B = beta sum_p int g_p(xi) (1 - R(xi)) d xi
    coverage  inverse Laplace transform of (1 - M(z)) / z

where M is the SINR MGF of :mod:`cellmgf.sinrmgf`.  The xi integrals are
trapezoid rules in u = ln(xi), whose error decays like exp(-pi^2/h) because
the integrands are analytic in a strip of half-width pi/2; both ends are
closed with an exponential-tail estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate, special

from . import fading
from .fading import FadingModel, NakagamiParams, gamma_mixture
from .hyperfun import tricomi_u
from .interference import (coefficient_lattice, interference_coefficient,
                           radial_factor)
from .sinrmgf import (DEFAULT_QUADRATURE, LinkSpec, MgfQuadrature, mixture_confluent,
                      mgf_sinr_many, w_scale)

__all__ = [
    "ModulationScheme",
    "modulation_constants",
    "AbateWhittParams",
    "MetricResult",
    "InversionError",
    "XiQuadrature",
    "ergodic_rate",
    "ergodic_rate_nonoise",
    "ergodic_rate_mgf_oracle",
    "coverage",
    "coverage_direct",
    "bep",
    "bep_high_sir",
]


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModulationScheme:
    """B = beta sum_{p=1}^{tau} E[Q(a_p sqrt(SINR))]."""

    name: str
    beta: float
    tau: int
    a: tuple

    def __post_init__(self):
        if self.tau != len(self.a):
            raise ValueError("tau must equal the number of a_p")
        if not all(v > 0 for v in self.a):
            raise ValueError("all a_p must be positive")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @property
    def max_bep(self) -> float:
        return 0.5 * self.beta * self.tau


def modulation_constants(name: str, M: int | None = None) -> ModulationScheme:
    """Nearest-neighbour constants for Gray-mapped BPSK, QPSK, M-PSK and square M-QAM.

    M-PSK: a_p = sqrt2 sin((2p-1) pi / M), tau = max(M/4, 1),
    beta = 2 / max(log2 M, 2).  Square M-QAM: a_p = (2p-1) sqrt(3/(M-1)),
    tau = sqrt(M)/2, beta = (4/log2 M)(1 - 1/sqrt M).
    """
    key = name.upper().replace("-", "")
    if key == "BPSK":
        return ModulationScheme("BPSK", 1.0, 1, (math.sqrt(2.0),))
    if key == "QPSK":
        return replace(modulation_constants("MPSK", 4), name="QPSK")
    if M is None or int(M) != M or M < 2 or (int(M) & (int(M) - 1)):
        raise ValueError(f"unsupported constellation size {M!r}")
    M = int(M)
    k = int(math.log2(M))
    if key == "MPSK":
        tau = max(M // 4, 1)
        a = tuple(math.sqrt(2.0) * math.sin((2 * p - 1) * math.pi / M) for p in range(1, tau + 1))
        return ModulationScheme(f"{M}-PSK", 2.0 / max(k, 2), tau, a)
    if key == "MQAM":
        if k % 2 or M < 4:
            raise ValueError(f"only square QAM is supported, got M={M}")
        root = math.isqrt(M)
        tau = root // 2
        a = tuple((2 * p - 1) * math.sqrt(3.0 / (M - 1)) for p in range(1, tau + 1))
        return ModulationScheme(f"{M}-QAM", 4.0 / k * (1 - 1.0 / root), tau, a)
    raise ValueError(f"unsupported modulation {name!r}")


@dataclass(frozen=True)
class AbateWhittParams:
    """Euler-summation Laplace inversion constants (A, m, n); b is unused by the
    Abate-Whitt route and, when given, is the Bromwich abscissa times T for
    :func:`coverage_direct`."""

    A: float = 18.4
    m: int = 11
    n: int = 15
    b: float | None = None

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("A must be positive")
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")
        if self.b is not None and not self.b > 0:
            raise ValueError("b must be positive")


@dataclass(frozen=True)
class MetricResult:
    value: float
    error_estimate: float
    method: str

    def __float__(self):
        return float(self.value)


class InversionError(ArithmeticError):
    """Laplace inversion produced a value outside [0, 1] beyond rounding noise."""

    def __init__(self, raw: float, msg: str):
        super().__init__(f"{msg} (raw value {raw!r})")
        self.raw = raw


@dataclass(frozen=True)
class XiQuadrature:
    """Trapezoid rule in ln(xi) for the metric integrals.

    step: finest step; the estimate at twice the step gives the error.
    decay: e-folds of decay required at each end before the tail estimate.
    """

    step: float = 1.0 / 16
    decay: float = 36.0

    def __post_init__(self):
        if not 0 < self.step <= 0.5:
            raise ValueError("step must lie in (0, 0.5]")
        if not self.decay >= 10:
            raise ValueError("decay must be >= 10")


DEFAULT_XI = XiQuadrature()


# ---------------------------------------------------------------------------
# xi integrals
# ---------------------------------------------------------------------------

def _exp_tail(f_end: float, f_prev: float, h: float) -> float:
    """int of a locally exponential tail starting at f_end, one step past f_prev."""
    if f_end == 0 or f_prev == 0 or np.sign(f_end) != np.sign(f_prev):
        return 0.0
    g = math.log(f_prev / f_end) / h
    return f_end / g if g > 0 else 0.0


def _trapezoid_log(f: np.ndarray, h: float):
    """Trapezoid sum on a uniform grid with exponential tails at both ends;
    returns (value, |value - value at twice the step|)."""

    def rule(vals, step):
        s = step * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
        return s + _exp_tail(vals[0], vals[1], step) + _exp_tail(vals[-1], vals[-2], step)

    fine = rule(f, h)
    coarse = rule(f[::2] if f.size % 2 else f[:-1:2], 2 * h)
    return fine, abs(fine - coarse)


def _xi_lattice(link: LinkSpec, lo_rate: float, hi_rate: float, xq: XiQuadrature,
                extra_hi: float = 0.0):
    """Lattice (u0, h, n) covering the desired-link and interference scales."""
    c_k = -math.log(link.desired.omega)
    c_r = -math.log(w_scale(link))
    lo = min(c_k, c_r) - xq.decay / lo_rate
    hi = max(c_k + extra_hi, c_r) + xq.decay / hi_rate
    h = xq.step
    n = int(math.ceil((hi - lo) / h)) + 1
    n += (n + 1) % 2  # odd so the coarse rule uses the same end points
    return lo, h, n


def _radial(link: LinkSpec, u0: float, h: float, n: int, complement: bool):
    net = link.network
    A = coefficient_lattice(link.interferer, net.alpha, u0, h, n).real
    xi = np.exp(u0 + h * np.arange(n))
    if net.noise_ratio == 0:
        return A / (1 + A) if complement else 1 / (1 + A)
    R = radial_factor(A, xi, net.noise_ratio, net.lambda_bs, net.alpha)
    return 1 - R if complement else R


def _mixture_spread(model: FadingModel) -> float:
    mix = gamma_mixture(model)
    return 2.0 * math.log1p(mix.base + len(mix))


# ---------------------------------------------------------------------------
# ergodic rate
# ---------------------------------------------------------------------------

def _rate_lattice(link: LinkSpec, xq: XiQuadrature, coefficient: str = "lattice"):
    net = link.network
    hi_rate = net.delta if net.noise_ratio == 0 else min(1.0, 4 * net.delta)
    u0, h, n = _xi_lattice(link, 1.0, hi_rate, xq)
    xi = np.exp(u0 + h * np.arange(n))
    front = fading.one_minus_gain_mgf(link.desired, xi)
    if coefficient == "lattice":
        R = _radial(link, u0, h, n, complement=False)
    elif coefficient == "closed_form":
        A = interference_coefficient(link.interferer, net, xi)
        R = radial_factor(A, xi, net.noise_ratio, net.lambda_bs, net.alpha)
    else:
        raise ValueError(f"unknown coefficient route {coefficient!r}")
    return _trapezoid_log(front * R, h)


def ergodic_rate(link: LinkSpec, xq: XiQuadrature = DEFAULT_XI) -> MetricResult:
    """E[ln(1 + SINR)] in nats per channel use."""
    val, err = _rate_lattice(link, xq)
    return MetricResult(max(float(val), 0.0), float(err), "quadrature")


def ergodic_rate_nonoise(link: LinkSpec, coefficient: str = "lattice",
                         xq: XiQuadrature = DEFAULT_XI) -> MetricResult:
    """Interference-limited rate: int (1 - M_h(xi))/(xi (1 + A(xi))) d xi.

    The noise of ``link`` is ignored; the result does not depend on the BS
    density.  ``coefficient="closed_form"`` evaluates A(xi) pointwise from the
    hypergeometric closed forms instead of the lattice accumulation.
    """
    quiet = replace(link, network=replace(link.network, noise=0.0))
    val, err = _rate_lattice(quiet, xq, coefficient)
    method = "closed_form" if coefficient == "closed_form" else "quadrature"
    return MetricResult(max(float(val), 0.0), float(err), method)


def ergodic_rate_mgf_oracle(link: LinkSpec, step: float = 0.25,
                            q: MgfQuadrature = DEFAULT_QUADRATURE) -> MetricResult:
    """C = int_0^inf exp(-s) (1 - M(s)) / s ds from the SINR MGF alone.

    Trapezoid in ln(s) from where 1 - M(s) ~ s^delta has decayed (tail
    estimate below) up to s = 50, where exp(-s) ends the integrand.
    """
    net = link.network
    rate = net.delta if net.noise_ratio == 0 else 1.0
    lo = -36.0 / rate
    hi = math.log(50.0)
    n = int(math.ceil((hi - lo) / step)) + 1
    n += (n + 1) % 2
    u = hi - step * np.arange(n)[::-1]
    s = np.exp(u)
    one_minus, _ = mgf_sinr_many(link, s, q, complement=True)
    val, err = _trapezoid_log(np.exp(-s) * one_minus, step)
    return MetricResult(max(float(val), 0.0), float(err), "quadrature")


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------

_CLAMP = 1e-6


def _clamp(raw: float, err: float, method: str) -> MetricResult:
    if -_CLAMP <= raw <= 1 + _CLAMP:
        return MetricResult(min(max(raw, 0.0), 1.0), err, method)
    raise InversionError(raw, "coverage outside [0, 1]")


def coverage(link: LinkSpec, T: float, aw: AbateWhittParams = AbateWhittParams(),
             q: MgfQuadrature = DEFAULT_QUADRATURE) -> MetricResult:
    """P(SINR > T) by Abate-Whitt inversion of (1 - M(z)) / z.

    s_k = e^{A/2}/T [Re L(A/2T)/2 + sum_{l=1}^k (-1)^l Re L((A + 2 pi i l)/2T)]
    averaged over k = n..n+m with binomial(m, .) 2^{-m} weights.  The error
    estimate is the spread between the averages at n and n-1 plus the
    discretisation bound e^{-A}.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    N = aw.n + aw.m
    l = np.arange(N + 1)
    z = (aw.A + 2j * math.pi * l) / (2 * T)
    one_minus, _ = mgf_sinr_many(link, z, q, complement=True)
    terms = ((-1.0) ** l) * (one_minus / z).real
    terms[0] *= 0.5
    partial = math.exp(aw.A / 2) / T * np.cumsum(terms)
    w = special.comb(aw.m, np.arange(aw.m + 1)) / 2.0 ** aw.m
    raw = float(w @ partial[aw.n:aw.n + aw.m + 1])
    err = math.exp(-aw.A)
    if aw.n >= 1:
        prev = float(w @ partial[aw.n - 1:aw.n + aw.m])
        err += abs(raw - prev)
    return _clamp(raw, err, "inversion")


_GL16 = np.polynomial.legendre.leggauss(16)


def _wynn(seq):
    """Wynn epsilon table; returns the last even-column estimate and its change."""
    eps_prev = [0.0] * (len(seq) + 1)
    eps = list(seq)
    best = [seq[-1]]
    k = 0
    while len(eps) > 1:
        nxt = []
        for i in range(len(eps) - 1):
            d = eps[i + 1] - eps[i]
            nxt.append(eps_prev[i + 1] + (1.0 / d if d != 0 else 1e300))
        eps_prev, eps = eps, nxt
        k += 1
        if k % 2 == 0:
            best.append(eps[-1])
    if len(best) >= 2:
        return best[-1], abs(best[-1] - best[-2])
    return best[-1], math.inf


def coverage_direct(link: LinkSpec, T: float, b: float | None = None,
                    q: MgfQuadrature = DEFAULT_QUADRATURE, tol: float = 1e-7,
                    max_panels: int = 400) -> MetricResult:
    """P = 1 - (2 e^{bT}/pi) int_0^inf Re[M(b + iu)/(b + iu)] cos(uT) du.

    The u integral is split into half periods of cos(uT), each done with
    16-point Gauss-Legendre, and the alternating panel sums are accelerated
    with the Wynn epsilon algorithm.  ``b`` defaults to 0.5/T.  Exponential
    desired fading (Nakagami m = 1) reduces exactly to R(T/Omega).
    """
    if not T > 0:
        raise ValueError("T must be positive")
    net = link.network
    des = link.desired
    if isinstance(des, NakagamiParams) and des.m == 1:
        xi = T / des.omega
        A = interference_coefficient(link.interferer, net, xi)
        val = float(np.real(radial_factor(np.array([A]), np.array([xi]), net.noise_ratio,
                                          net.lambda_bs, net.alpha))[0])
        return _clamp(val, 1e-12, "closed_form")
    b = 0.5 / T if b is None else b
    x, w = _GL16
    half = math.pi / T
    pref = 2.0 * math.exp(b * T) / math.pi
    sums = []
    total = 0.0
    batch = 8
    est, change = math.nan, math.inf
    k = 0
    while k < max_panels:
        u = (k + np.arange(batch)[:, None] + 0.5 * (x[None, :] + 1)) * half
        z = b + 1j * u
        M, _ = mgf_sinr_many(link, z.ravel(), q)
        f = (M.reshape(u.shape) / z).real * np.cos(u * T)
        for panel in 0.5 * half * (f @ w):
            total += panel
            sums.append(total)
        k += batch
        if len(sums) >= 16:
            est, change = _wynn(sums[-24:])
            if change < tol:
                break
    raw = 1.0 - pref * est
    return _clamp(raw, pref * change, "quadrature")


# ---------------------------------------------------------------------------
# bit error probability
# ---------------------------------------------------------------------------

def _bep_front(model: FadingModel, a: float, xi: np.ndarray) -> np.ndarray:
    """xi g(xi), where g is the weight making

    E[Q(a sqrt(h/W))] = int g(xi) (1 - R(xi)) d xi  for every law of W:

    g = a sqrt(theta) / (sqrt2 pi) xi^{-1/2}
        sum_n w_n Gamma(q_n + 1/2)/Gamma(q_n) 1F1(q_n + 1/2; 3/2; -a^2 theta xi / 2).
    """
    mix = gamma_mixture(model)
    w = mix.weights
    q = mix.shapes
    coeffs = w * np.exp(special.gammaln(q + 0.5) - special.gammaln(q))
    keep = coeffs > 1e-300 * coeffs.max()
    last = int(np.nonzero(keep)[0][-1]) + 1
    x = 0.5 * a * a * mix.theta * xi
    s = mixture_confluent(mix, 0.5, 1.5, x, coeffs[:last])
    return a * math.sqrt(mix.theta / 2) / math.pi * np.sqrt(xi) * s


def bep(link: LinkSpec, mod: ModulationScheme, xq: XiQuadrature = DEFAULT_XI) -> MetricResult:
    """Average BEP beta sum_p E[Q(a_p sqrt(SINR))].

    Uses E[Q(a sqrt(h/W))] = int g(xi) (1 - R(xi)) d xi, which keeps full
    relative precision at high SIR where the BEP is tiny.
    """
    mix = gamma_mixture(link.desired)
    lo_rate = 1.5
    hi_rate = min(mix.base, 1.0)
    spread = _mixture_spread(link.desired)
    u0, h, n = _xi_lattice(link, lo_rate, hi_rate, xq, extra_hi=spread)
    # the BEP weight sits near xi ~ 1/(a^2 theta); reach below it too
    shift = max(0.0, math.log(max(mod.a) ** 2 * mix.theta / link.desired.omega))
    extra = 2 * int(math.ceil(shift / (2 * h)))  # even keeps n odd
    u0 -= extra * h
    n += extra
    xi = np.exp(u0 + h * np.arange(n))
    omr = _radial(link, u0, h, n, complement=True)
    total, err = 0.0, 0.0
    for a in mod.a:
        v, e = _trapezoid_log(_bep_front(link.desired, a, xi) * omr, h)
        total += v
        err += e
    val = mod.beta * total
    val = min(max(val, 0.0), mod.max_bep)
    return MetricResult(float(val), mod.beta * err, "quadrature")


def bep_high_sir(desired: FadingModel, interferer_nakagami_m: float, alpha: float,
                 sir: float, mod: ModulationScheme) -> MetricResult:
    """Interference-limited BEP for large SIR = Omega/Omega_I.

    At high SIR only small xi matter, where A(xi) ~ 2 Omega_I xi/(alpha - 2),
    i.e. W is replaced by an exponential variable of the same mean.  Then

        B = beta sum_n w_n Gamma(q_n + 1/2)/(2 sqrt pi)
            sum_p U(q_n, 1/2, a_p^2 theta_n (alpha - 2) / (4 Omega_I)),

    which for Nakagami-m is beta Gamma(m + 1/2)/(2 sqrt pi)
    sum_p U(m, 1/2, a_p^2 delta/(4m)), delta = (alpha - 2) SIR.  The
    interferer's m_I does not enter.
    """
    if not interferer_nakagami_m > 0:
        raise ValueError("interferer m must be positive")
    if not alpha > 2:
        raise ValueError("alpha must exceed 2")
    if not sir > 0:
        raise ValueError("sir must be positive")
    mix = gamma_mixture(desired)
    theta = mix.theta * sir / desired.omega  # Omega_I = 1, Omega = sir
    total = 0.0
    for w, qn in zip(mix.weights, mix.shapes):
        if w < 1e-300:
            continue
        for a in mod.a:
            z = a * a * theta * (alpha - 2) / 4.0
            total += w * _gamma_tricomi_half(qn, z)
    return MetricResult(float(mod.beta * total / (2 * math.sqrt(math.pi))), 0.0, "closed_form")


def _gamma_tricomi_half(q: float, z: float) -> float:
    """Gamma(q + 1/2) U(q, 1/2, z)."""
    if q < 100:
        val = special.hyperu(q, 0.5, z)
        if np.isfinite(val) and val > 0:
            return float(math.gamma(q + 0.5) * val)
        return float(math.gamma(q + 0.5) * tricomi_u(q, 0.5, z).value)
    # Gamma(q+1/2)/Gamma(q) int_0^inf e^{-zt} (t/(1+t))^{q-1} (1+t)^{-3/2} dt
    ratio = math.exp(special.gammaln(q + 0.5) - special.gammaln(q))
    f = lambda v: math.exp(v - z * math.exp(v) + (q - 1) * (v - math.log1p(math.exp(v)))
                           - 1.5 * math.log1p(math.exp(v)))
    top = math.log(60.0 / z + 1.0)
    v, _ = integrate.quad(f, -60.0, top, limit=200)
    return ratio * v
