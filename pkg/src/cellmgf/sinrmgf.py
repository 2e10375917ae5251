"""MGF of the downlink SINR.

Write SINR = h / W with W = r^alpha (N + I) and R(xi) = E[exp(-xi W)].  For a
gain h that is a mixture of Gamma(q_n, theta) laws,

    1 - M(s) = int_0^inf k(eta) R(eta / s) d eta,
    k(eta)   = E_h[sqrt(h/eta) J_1(2 sqrt(h eta))]
             = theta sum_n w_n q_n 1F1(q_n + 1; 2; -theta eta).

The kernel k is real and depends only on the desired-link model; all of the
dependence on s sits in R, whose argument eta/s is complex for complex s.
R is evaluated on a geometric lattice from the interference coefficient
lattice (see :mod:`cellmgf.interference`), so the outer integral is a
trapezoid rule in u = ln(eta) whose step is refined until successive
refinements agree.

The same outer integral with the kernel evaluated at complex argument and R
kept real (``method="front_factor"``) and a fully model-agnostic version
with the kernel obtained by quadrature against the gain density
(:func:`mgf_sinr_generic`) serve as independent checks.
"""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import fading
from .fading import FadingModel, GammaMixture, gamma_mixture
from .hyperfun import EvalResult, SeriesControl, hyp1f1_ladder, kummer_1f1
from .interference import NetworkConfig, coefficient_lattice, radial_factor

__all__ = [
    "LinkSpec",
    "MgfQuadrature",
    "mgf_sinr",
    "mgf_sinr_result",
    "mgf_sinr_many",
    "mgf_sinr_generic",
    "radial_on_lattice",
    "mixture_confluent",
    "w_scale",
    "lattice_step",
]


@dataclass(frozen=True)
class LinkSpec:
    """Desired-link model, interferer model and network; the two models are independent."""

    desired: FadingModel
    interferer: FadingModel
    network: NetworkConfig


@dataclass(frozen=True)
class MgfQuadrature:
    """Outer-integral controls.

    outer_nodes: lattice size at the finest refinement level.
    outer_cutoff: how many e-folds the lattice extends beyond the natural
        scales of the kernel and of R on each side.
    adaptive_tol: stop refining when two successive levels differ by less.
    """

    outer_nodes: int = 4097
    outer_cutoff: float = 40.0
    adaptive_tol: float = 1e-10
    max_stride: int = 16

    def __post_init__(self):
        if self.outer_nodes < 64:
            raise ValueError("outer_nodes must be >= 64")
        if not self.outer_cutoff > 10:
            raise ValueError("outer_cutoff must be > 10")
        if not self.adaptive_tol > 0:
            raise ValueError("adaptive_tol must be > 0")
        if self.max_stride < 1 or self.max_stride & (self.max_stride - 1):
            raise ValueError("max_stride must be a power of two")


DEFAULT_QUADRATURE = MgfQuadrature()


def w_scale(link: LinkSpec) -> float:
    """Typical size of W = r^alpha (N + I), used to place quadrature windows."""
    net = link.network
    noise = net.noise_ratio / (math.pi * net.lambda_bs) ** (net.alpha / 2)
    return 2.0 * link.interferer.omega / (net.alpha - 2) + noise


def radial_on_lattice(link: LinkSpec, u0: float, h: float, n: int, phi: float = 0.0,
                      index=None) -> np.ndarray:
    """R(exp(u_j + i phi)) on u_j = u0 + j h (optionally only at ``index``)."""
    net = link.network
    A = coefficient_lattice(link.interferer, net.alpha, u0, h, n, phi)
    u = u0 + h * np.arange(n)
    if index is not None:
        A, u = A[index], u[index]
    if phi == 0.0:
        return radial_factor(A.real, np.exp(u), net.noise_ratio, net.lambda_bs, net.alpha)
    xi = np.exp(u + 1j * phi)
    return radial_factor(A, xi, net.noise_ratio, net.lambda_bs, net.alpha)


def mixture_confluent(mix: GammaMixture, shift: float, b: float, x, coeffs,
                      max_cells: int = 4_000_000) -> np.ndarray:
    """sum_n coeffs[n] 1F1(q_n + shift; b; -x) over an array x >= 0.

    The family in n is produced by recurrence from a first parameter in
    [1, 2), which keeps every table entry accurate.
    """
    x = np.asarray(x, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    a_first = mix.base + shift
    k0 = max(int(math.floor(a_first)) - 1, 0)
    a0 = a_first - k0
    rows = k0 + coeffs.size
    out = np.empty(x.size)
    flat = x.ravel()
    step = max(1, max_cells // rows)
    for i in range(0, flat.size, step):
        table = hyp1f1_ladder(a0, b, flat[i:i + step], rows)
        out[i:i + step] = coeffs @ table[k0:]
    return out.reshape(x.shape)


def _significant(mix: GammaMixture, floor: float = 1e-300):
    # trailing weights that underflow contribute nothing
    w = mix.weights
    keep = np.nonzero(w > floor)[0]
    last = int(keep[-1]) + 1 if keep.size else 1
    return w[:last]


def _mgf_kernel(mix: GammaMixture, eta: np.ndarray) -> np.ndarray:
    w = _significant(mix)
    q = mix.base + np.arange(w.size)
    return mixture_confluent(mix, 1.0, 2.0, mix.theta * eta, w * q * mix.theta)


class _KernelStore:
    """k(e^u) e^u on the global lattice u_j = j h, grown on demand."""

    def __init__(self, model: FadingModel, h: float):
        self.model = model
        self.mix = gamma_mixture(model)
        self.h = h
        self.j0 = 0
        self.vals = np.empty(0)
        self.lock = threading.Lock()

    def get(self, j0: int, j1: int) -> np.ndarray:
        """Values for j0 <= j < j1."""
        with self.lock:
            return self._get(j0, j1)

    def _get(self, j0: int, j1: int) -> np.ndarray:
        if self.vals.size == 0:
            self.j0, self.vals = j0, self._compute(j0, j1)
        if j0 < self.j0:
            self.vals = np.concatenate([self._compute(j0, self.j0), self.vals])
            self.j0 = j0
        top = self.j0 + self.vals.size
        if j1 > top:
            self.vals = np.concatenate([self.vals, self._compute(top, j1)])
        return self.vals[j0 - self.j0:j1 - self.j0]

    def _compute(self, j0, j1):
        eta = np.exp(self.h * np.arange(j0, j1))
        return _mgf_kernel(self.mix, eta) * eta


_KERNELS: dict = {}


_KERNELS_LOCK = threading.Lock()


def _kernel_store(model: FadingModel, h: float) -> _KernelStore:
    key = (model, h)
    with _KERNELS_LOCK:
        if key not in _KERNELS:
            if len(_KERNELS) > 64:
                _KERNELS.clear()
            _KERNELS[key] = _KernelStore(model, h)
        return _KERNELS[key]


_BLOCK = 256


def lattice_step(q: MgfQuadrature) -> float:
    """Finest step of the outer lattice in u = ln(eta)."""
    return (2.0 * q.outer_cutoff + 16.0) / (q.outer_nodes - 1)


def _window(link: LinkSpec, log_mod: float, q: MgfQuadrature):
    """Index range [j0, j1) of the global lattice covering one argument."""
    mix = gamma_mixture(link.desired)
    c_k = -math.log(link.desired.omega)
    c_r = -math.log(w_scale(link))
    # near-deterministic gains keep the kernel oscillating out to eta ~ q/theta
    spread = 2.0 * math.log1p(mix.base + len(mix))
    lo = min(c_k, c_r + log_mod) - q.outer_cutoff
    hi = max(c_k + spread, c_r + log_mod) + q.outer_cutoff
    h = lattice_step(q)
    j0 = int(math.floor(lo / h / _BLOCK)) * _BLOCK
    j1 = int(math.ceil(hi / h / _BLOCK)) * _BLOCK + 1
    return j0, j1


def _refine(integrand_at, n: int, h: float, q: MgfQuadrature):
    """Trapezoid sums at strides max_stride, ..., 1 until two agree."""
    stride = q.max_stride
    prev = None
    total = None
    err = math.inf
    while stride >= 1:
        idx = np.arange(0, n, stride)
        total = h * stride * np.sum(integrand_at(idx))
        if prev is not None:
            err = abs(total - prev)
            if err < q.adaptive_tol:
                break
        prev = total
        stride //= 2
    return total, err


def mgf_sinr_many(link: LinkSpec, zs, q: MgfQuadrature = DEFAULT_QUADRATURE,
                  complement: bool = False):
    """M(z) for an array of z with Re z > 0 (or z = 0).

    Returns (values, error_estimates).  With ``complement=True`` the values
    are 1 - M(z), computed directly so they keep full relative precision
    for small |z|.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    if np.any(zs.real < 0) or np.any((zs.real == 0) & (zs.imag != 0)):
        raise ValueError("mgf_sinr needs Re(s) > 0 (or s = 0)")
    out = np.zeros(zs.size, dtype=complex)
    err = np.zeros(zs.size)
    h = lattice_step(q)
    store = _kernel_store(link.desired, h)
    noisy = link.network.noise_ratio > 0
    for i in np.nonzero(zs != 0)[0]:
        z = zs[i]
        phi = -cmath.phase(z)
        phi = 0.0 if phi == 0.0 else phi
        lz = math.log(abs(z))
        j0, j1 = _window(link, lz, q)
        n = j1 - j0
        kern = store.get(j0, j1)
        u0 = j0 * h - lz
        if noisy:
            cache = np.full(n, np.nan, dtype=complex)

            def integrand_at(idx, u0=u0, phi=phi, cache=cache, kern=kern, n=n):
                need = idx[np.isnan(cache[idx])]
                if need.size:
                    cache[need] = radial_on_lattice(link, u0, h, n, phi, need)
                return kern[idx] * cache[idx]
        else:
            # R is cheap without noise: evaluate once on the full lattice
            full = kern * radial_on_lattice(link, u0, h, n, phi)

            def integrand_at(idx, full=full):
                return full[idx]

        total, e = _refine(integrand_at, n, h, q)
        out[i] = total
        err[i] = e
    if not complement:
        out = 1.0 - out
    if np.all(zs.imag == 0):
        out = out.real
    return out, err


def mgf_sinr_result(link: LinkSpec, s, q: MgfQuadrature = DEFAULT_QUADRATURE,
                    method: str = "rotation") -> EvalResult:
    """M(s) with an error estimate (difference of the last two refinements)."""
    if method == "front_factor":
        return _mgf_front_factor(link, complex(s), q)
    if method != "rotation":
        raise ValueError(f"unknown method {method!r}")
    vals, errs = mgf_sinr_many(link, [s], q)
    return EvalResult(vals[0], float(errs[0]), 1)


def mgf_sinr(link: LinkSpec, s, q: MgfQuadrature = DEFAULT_QUADRATURE,
             method: str = "rotation"):
    """E[exp(-s SINR)] for Re(s) >= 0; real for real s."""
    return mgf_sinr_result(link, s, q, method).value


# ---------------------------------------------------------------------------
# cross-check: complex argument in the kernel, real R
# ---------------------------------------------------------------------------

_FRONT_CTL = SeriesControl(max_terms=20000, abs_tol=1e-300, rel_tol=1e-7)


def _mgf_front_factor(link: LinkSpec, s: complex, q: MgfQuadrature) -> EvalResult:
    """1 - s int_0^inf k(s xi) R(xi) d xi with k from complex-argument 1F1.

    Only practical for short mixtures (at most 64 significant terms), since
    every kernel value is a scalar confluent evaluation, and for
    |arg s| <= pi/3.  The confluent
    function at complex argument of modulus ~20 is only good to about 1e-8,
    so this route runs at a relaxed series tolerance.
    """
    if s == 0:
        return EvalResult(1.0, 0.0, 0)
    if abs(cmath.phase(s)) > math.pi / 3:
        # the kernel oscillates too fast along the real xi axis to be resolved
        raise ValueError("front-factor route needs |arg s| <= pi/3")
    mix = gamma_mixture(link.desired)
    w = mix.weights[mix.weights > 1e-17]
    if w.size > 64:
        raise ValueError("front-factor route supports at most 64 mixture terms")
    qn = mix.base + np.arange(w.size)
    c_r = -math.log(w_scale(link))
    c_k = -math.log(abs(s) * link.desired.omega)
    spread = 2.0 * math.log1p(mix.base + w.size)
    lo = min(c_r, c_k) - q.outer_cutoff
    hi = max(c_r, c_k + spread) + q.outer_cutoff
    margin = math.pi / 2 - abs(cmath.phase(s))
    h = min(0.1, 2 * math.pi * margin / 30.0)
    n = int(math.ceil((hi - lo) / h)) + 1
    u = lo + h * np.arange(n)
    R = radial_on_lattice(link, lo, h, n)
    xi = np.exp(u)
    kern = np.zeros(n, dtype=complex)
    for wn, qv in zip(w, qn):
        vals = np.array([kummer_1f1(qv + 1, 2.0, -mix.theta * s * x, _FRONT_CTL).value
                         for x in xi])
        kern += wn * qv * mix.theta * vals
    f = s * kern * R * xi
    total = h * f.sum()
    half = 2 * h * f[::2].sum()
    val = 1.0 - total
    if s.imag == 0:
        val = val.real
    return EvalResult(val, float(abs(total - half)), n)


# ---------------------------------------------------------------------------
# model-agnostic oracle
# ---------------------------------------------------------------------------

_GL20 = np.polynomial.legendre.leggauss(20)


def _gain_quantile(model: FadingModel, tail: float = 1e-14) -> float:
    hi = model.omega
    while 1.0 - fading.cdf(model, hi) > tail:
        hi *= 2.0
    return hi


def _generic_kernel(model: FadingModel, eta: float, h_max: float) -> float:
    """E_h[sqrt(h/eta) J1(2 sqrt(h eta))] by quadrature against the density.

    Substituting y = 2 sqrt(h eta) gives int pdf(y^2/(4 eta)) y^2 J1(y)/(4 eta^2) dy,
    integrated with 20-point Gauss-Legendre panels no wider than pi/2.
    """
    y_max = 2.0 * math.sqrt(h_max * eta)
    panels = max(40, int(math.ceil(y_max / (math.pi / 2))))
    x, w = _GL20
    edges = np.linspace(0.0, y_max, panels + 1)
    half = 0.5 * np.diff(edges)
    y = (edges[:-1, None] + half[:, None] * (x[None, :] + 1)).ravel()
    wy = (half[:, None] * w[None, :]).ravel()
    g = fading.pdf(model, y * y / (4 * eta)) * y * y * special.j1(y) / (4 * eta * eta)
    return float(np.dot(wy, g))


def mgf_sinr_generic(link: LinkSpec, s: float, q: MgfQuadrature = DEFAULT_QUADRATURE,
                     step: float = 0.05, eta_cap_factor: float = 1e5) -> EvalResult:
    """M(s) for real s from the gain density alone.

    The kernel k(eta) is computed by oscillatory quadrature against pdf(h)
    for eta up to eta_cap_factor / E[h]; the truncated upper tail is
    reported in the error estimate.  Slow, and meant only as an oracle.
    """
    s = float(s)
    if s < 0:
        raise ValueError("s must be >= 0")
    if s == 0:
        return EvalResult(1.0, 0.0, 0)
    model = link.desired
    h_max = _gain_quantile(model)
    c_r = -math.log(w_scale(link)) + math.log(s)
    lo = min(-math.log(model.omega), c_r) - 30.0
    cap = math.log(eta_cap_factor / model.omega)
    hi = min(max(-math.log(model.omega), c_r) + q.outer_cutoff, cap)
    n = int(math.ceil((hi - lo) / step)) + 1
    u = lo + step * np.arange(n)
    eta = np.exp(u)
    kern = np.array([_generic_kernel(model, e, h_max) for e in eta])
    R = radial_on_lattice(link, lo - math.log(s), step, n)
    f = kern * R * eta
    total = step * (f.sum() - 0.5 * f[0] - 0.5 * f[-1])
    tail = abs(f[-1]) * 10.0
    return EvalResult(1.0 - total, tail, n)
