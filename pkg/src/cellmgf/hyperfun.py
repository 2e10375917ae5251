"""Hypergeometric, Bessel and Gaussian-tail functions.

Scalar evaluators return an :class:`EvalResult` carrying the value, an error
estimate and the number of terms used.  They either meet the requested
tolerance or raise :class:`ConvergenceError`.

The vectorised helpers at the bottom (``hyp1f1_ladder``, ``hyp2f1_array``)
serve the metric integrals, which need whole families of confluent functions
on a quadrature lattice.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

__all__ = [
    "SeriesControl",
    "EvalResult",
    "ConvergenceError",
    "gauss_2f1",
    "kummer_1f1",
    "humbert_psi1",
    "humbert_psi2",
    "appell_f1",
    "appell_f2",
    "tricomi_u",
    "bessel_i",
    "bessel_j1",
    "gaussian_q",
    "binom",
    "hyp1f1_ladder",
    "hyp2f1_array",
]

_EPS = np.finfo(float).eps


class ConvergenceError(ArithmeticError):
    """Raised when a series or quadrature misses its tolerance."""


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by all series evaluators."""

    max_terms: int = 10_000
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self):
        if int(self.max_terms) < 1:
            raise ValueError("max_terms must be >= 1")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")

    def tol(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class EvalResult:
    """Function value with the error actually observed while computing it."""

    value: complex
    error_estimate: float
    terms_used: int

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    def __float__(self) -> float:
        return self.real

    def __complex__(self) -> complex:
        return complex(self.value)


def _is_nonpos_int(x) -> bool:
    return float(x) <= 0 and float(x) == math.floor(float(x))


def _ctl(ctl):
    return DEFAULT_CONTROL if ctl is None else ctl


def _as_number(z):
    z = complex(z)
    return z.real if z.imag == 0 else z


def _sum_series(ratio, ctl, first=1.0, track_abs=False):
    """Sum ``first * prod ratio(k)`` until two successive terms fall below tolerance.

    ``ratio(k)`` is the quotient term[k+1]/term[k].  Returns (sum, last term
    magnitude, terms used, sum of magnitudes).
    """
    term = first
    total = first
    mag = abs(first)
    small = 0
    for k in range(ctl.max_terms):
        term = term * ratio(k)
        total += term
        mag += abs(term)
        if term == 0:
            return total, 0.0, k + 2, mag
        if abs(term) <= ctl.tol(total) * 1e-2:
            small += 1
            if small >= 2:
                return total, abs(term), k + 2, mag
        else:
            small = 0
    raise ConvergenceError(f"series did not converge within {ctl.max_terms} terms")


# ---------------------------------------------------------------------------
# Gauss 2F1
# ---------------------------------------------------------------------------

def _2f1_series(a, b, c, z, ctl):
    def ratio(k):
        return (a + k) * (b + k) / ((c + k) * (k + 1)) * z

    return _sum_series(ratio, ctl)


def gauss_2f1(a, b, c, z, ctl: SeriesControl | None = None) -> EvalResult:
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Uses the power series when |z| is small, the Pfaff map z -> z/(z-1) for
    negative or large arguments, and scipy's connection formulas only when
    neither series converges quickly (|z/(z-1)| > 0.9).
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c) and not (_is_nonpos_int(a) and a > c) and not (_is_nonpos_int(b) and b > c):
        raise ValueError(f"2F1 has a pole at c = {c}")
    z = _as_number(z)
    if z == 0:
        return EvalResult(1.0, 0.0, 1)
    if isinstance(z, float) and z >= 1.0 and not (_is_nonpos_int(a) or _is_nonpos_int(b)):
        raise ValueError("2F1 is multivalued for real z >= 1")
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        n = int(-min(a if _is_nonpos_int(a) else 1, b if _is_nonpos_int(b) else 1))
        s, last, used, _ = _sum_series(lambda k: (a + k) * (b + k) / ((c + k) * (k + 1)) * z,
                                       SeriesControl(max(n + 2, 2), ctl.abs_tol, ctl.rel_tol)) \
            if n > 0 else (1.0, 0.0, 1, 1.0)
        return EvalResult(s, last, used)
    if abs(z) < 0.9 and (z.real if isinstance(z, complex) else z) >= 0:
        s, last, used, _ = _2f1_series(a, b, c, z, ctl)
        return EvalResult(s, last, used)
    w = z / (z - 1)
    if abs(w) <= 0.9:
        pre = (1 - z) ** (-b) if isinstance(z, complex) else (1 - z) ** (-b)
        s, last, used, _ = _2f1_series(c - a, b, c, w, ctl)
        return EvalResult(pre * s, abs(pre) * last, used)
    if abs(z) < 0.9:
        s, last, used, _ = _2f1_series(a, b, c, z, ctl)
        return EvalResult(s, last, used)
    val = special.hyp2f1(a, b, c, z)
    if not np.isfinite(val):
        raise ConvergenceError("2F1 connection formula failed")
    return EvalResult(_as_number(val), 1e-14 * abs(val), 0)


# ---------------------------------------------------------------------------
# Confluent 1F1
# ---------------------------------------------------------------------------

def _1f1_series(a, c, z, ctl):
    return _sum_series(lambda k: (a + k) / ((c + k) * (k + 1)) * z, ctl)


def _safe_cexp(w: complex) -> complex:
    return 0j if w.real < -745.0 else cmath.exp(w)


def _1f1_asymptotic(a, c, z, ctl, shift=0j):
    """Large-|z| expansion of exp(shift) 1F1(a; c; z), valid for Re z > 0.

    Both the exponential and the algebraic parts are kept; prefactors are
    formed in log space so that exp(shift) can cancel exp(z).
    """
    z = complex(z)
    lg_c = special.loggamma(complex(c))
    lz = cmath.log(z)
    out = 0j
    err = 0.0
    used = 0
    parts = []
    if not _is_nonpos_int(a):
        lp = (z + shift) + lg_c - special.loggamma(complex(a)) + (a - c) * lz
        parts.append((_safe_cexp(lp), c - a, 1 - a, 1 / z))
    if not _is_nonpos_int(c - a):
        phase = 1j * math.pi * a if z.imag >= 0 else -1j * math.pi * a
        lp = phase + lg_c - special.loggamma(complex(c - a)) - a * lz + shift
        parts.append((_safe_cexp(lp), a, a - c + 1, -1 / z))
    for pref, p, q, w in parts:
        term = 1.0 + 0j
        s = term
        best = abs(term)
        for k in range(ctl.max_terms):
            nxt = term * (p + k) * (q + k) / (k + 1) * w
            if abs(nxt) > best and k > 2:
                break
            term = nxt
            s += term
            best = abs(term)
            used = max(used, k + 2)
            if best < _EPS * abs(s) * 1e-2:
                break
        out += pref * s
        err += abs(pref) * best
    if z.imag == 0:
        out = out.real
    return out, err, used


def kummer_1f1(a, c, z, ctl: SeriesControl | None = None) -> EvalResult:
    """Confluent hypergeometric function 1F1(a; c; z).

    For Re z < 0 the Kummer transformation 1F1(a;c;z) = e^z 1F1(c-a;c;-z) is
    tried alongside the direct series and the better conditioned of the two
    kept.  Large |z| uses the asymptotic expansion, and real negative z with
    a large first parameter falls back to the recurrence in ``a``.
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c) and not (_is_nonpos_int(a) and a > c):
        raise ValueError(f"1F1 has a pole at c = {c}")
    z = _as_number(z)
    if z == 0:
        return EvalResult(1.0, 0.0, 1)
    if a == c:
        return EvalResult(cmath.exp(z) if isinstance(z, complex) else math.exp(z), 0.0, 1)
    if _is_nonpos_int(a):
        n = int(-a)
        s, last, used, mag = _sum_series(lambda k: (a + k) / ((c + k) * (k + 1)) * z,
                                         SeriesControl(n + 2, ctl.abs_tol, ctl.rel_tol)) \
            if n > 0 else (1.0, 0.0, 1, 1.0)
        return EvalResult(s, mag * _EPS, used)

    if _is_nonpos_int(c - a):
        # Kummer transformation turns this into a polynomial
        try:
            r = kummer_1f1(c - a, c, -z, ctl)
            pre = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
        except (ConvergenceError, OverflowError):
            r = None
        if r is not None and np.isfinite(r.value) and r.error_estimate <= ctl.tol(r.value):
            return EvalResult(pre * r.value, abs(pre) * r.error_estimate, r.terms_used)
    re = z.real if isinstance(z, complex) else z
    candidates = []
    if abs(z) <= 60 + abs(a) + abs(c):
        try:
            s, last, used, mag = _1f1_series(a, c, z, ctl)
            candidates.append((s, last + mag * _EPS, used))
        except ConvergenceError:
            pass
        if re < 0:
            try:
                s, last, used, mag = _1f1_series(c - a, c, -z, ctl)
                pre = cmath.exp(z) if isinstance(z, complex) else math.exp(z)
                candidates.append((pre * s, abs(pre) * (last + mag * _EPS), used))
            except ConvergenceError:
                pass
    if candidates:
        best = min(candidates, key=lambda t: t[1] / max(abs(t[0]), 1e-300))
        if best[1] <= ctl.tol(best[0]):
            return EvalResult(best[0], best[1], best[2])
    if abs(z) > 2 * (abs(a) + abs(c)) + 10:
        if re >= 0:
            v, e, used = _1f1_asymptotic(a, c, z, ctl)
        else:
            v, e, used = _1f1_asymptotic(c - a, c, -z, ctl, shift=complex(z))
            if not isinstance(z, complex):
                v = v.real
        if e <= ctl.tol(v):
            return EvalResult(v, e, used)
    if isinstance(z, float) and z < 0 and a > 0 and c > 0:
        k = max(int(math.floor(a)) - 1, 0)
        v = float(hyp1f1_ladder(a - k, c, np.array([-z]), k + 1)[k, 0])
        return EvalResult(v, 64 * _EPS * max(1.0, abs(v)), 0)
    raise ConvergenceError(f"1F1({a}; {c}; {z}) did not reach tolerance")


# ---------------------------------------------------------------------------
# Humbert and Appell functions
# ---------------------------------------------------------------------------

def _outer_series(coef_ratio, inner, ctl):
    """Sum_n c_n * inner(n), with c_{n+1}/c_n = coef_ratio(n), c_0 = 1."""
    total = 0.0
    coef = 1.0
    small = 0
    err = 0.0
    for n in range(ctl.max_terms):
        res = inner(n)
        term = coef * res.value
        total += term
        err += abs(coef) * res.error_estimate
        if abs(term) <= ctl.tol(total) * 1e-2 and n > 0:
            small += 1
            if small >= 2:
                return EvalResult(_as_number(total), err + abs(term), n + 1)
        else:
            small = 0
        coef = coef * coef_ratio(n)
        if coef == 0:
            return EvalResult(_as_number(total), err, n + 1)
    raise ConvergenceError("double series did not converge")


def humbert_psi1(a, b, c, cp, x, y, ctl: SeriesControl | None = None) -> EvalResult:
    """Humbert function Psi1(a, b; c, c'; x, y).

    Psi1 = sum_{i,j} (a)_{i+j} (b)_i / ((c)_i (c')_j i! j!) x^i y^j.  For |y| < 1
    the series in y with a 2F1(a+n, b; c; x) per term is used, so x may be
    unbounded (and complex).  When |y| >= 1 but |x| < 1 the series in x with
    a 1F1(a+n; c'; y) per term is used instead.  When c - b is a nonpositive
    integer the Euler-type transformation in x leaves a terminating sum.
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c) or _is_nonpos_int(cp):
        raise ValueError("c and c' must not be nonpositive integers")
    if y == 0:
        return gauss_2f1(a, b, c, x, ctl)
    if _is_nonpos_int(c - b) and x != 1 and not (np.isreal(x) and np.real(x) > 1):
        # Psi1(a,b;c,c';x,y) = (1-x)^{-a} Psi1(a, c-b; c, c'; x/(x-1), y/(1-x));
        # the outer series in x/(x-1) terminates after b - c + 1 terms.
        w, yy = x / (x - 1), y / (1 - x)
        pre = (1 - x) ** (-a)
        n_max = int(round(b - c))
        total, err, coef = 0.0, 0.0, 1.0
        for n in range(n_max + 1):
            r = kummer_1f1(a + n, cp, yy, ctl)
            total += coef * r.value
            err += abs(coef) * (r.error_estimate + _EPS * abs(r.value))
            coef *= (a + n) * (c - b + n) / ((c + n) * (n + 1)) * w
        return EvalResult(pre * total, abs(pre) * err, n_max + 1)
    if abs(y) < 1:
        return _outer_series(lambda n: (a + n) / ((cp + n) * (n + 1)) * y,
                             lambda n: gauss_2f1(a + n, b, c, x, ctl), ctl)
    if abs(x) < 1:
        return _outer_series(lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)) * x,
                             lambda n: kummer_1f1(a + n, cp, y, ctl), ctl)
    raise ValueError("Psi1 series needs |y| < 1 (or |x| < 1)")


def humbert_psi2(a, c, cp, x, y, ctl: SeriesControl | None = None) -> EvalResult:
    """Humbert function Psi2(a; c, c'; x, y) = sum (a)_{i+j} x^i y^j / ((c)_i (c')_j i! j!).

    Summed as a series in y with a 1F1(a+n; c; x) per term; the roles are
    swapped when |x| < |y| so that the outer variable is the smaller one.
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c) or _is_nonpos_int(cp):
        raise ValueError("c and c' must not be nonpositive integers")
    if y == 0:
        return kummer_1f1(a, c, x, ctl)
    if x == 0:
        return kummer_1f1(a, cp, y, ctl)
    if abs(y) <= abs(x) or not np.isreal(y):
        return _outer_series(lambda n: (a + n) / ((cp + n) * (n + 1)) * y,
                             lambda n: kummer_1f1(a + n, c, x, ctl), ctl)
    return _outer_series(lambda n: (a + n) / ((c + n) * (n + 1)) * x,
                         lambda n: kummer_1f1(a + n, cp, y, ctl), ctl)


def _euler_integral(f, alpha, beta, scale):
    """int_0^1 t^alpha (1-t)^beta f(t) dt with a sharp feature near t ~ 1/scale."""
    edges = [0.0]
    t = min(0.25, 1.0 / max(scale, 1.0))
    while t < 0.25:
        edges.append(t)
        t *= 8
    edges += [0.25, 0.75, 1.0]
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        kw = {}
        if lo == 0.0:
            kw = dict(weight="alg", wvar=(alpha, 0.0))
            g = lambda s: f(s) * (1 - s) ** beta
        elif hi == 1.0:
            kw = dict(weight="alg", wvar=(0.0, beta))
            g = lambda s: f(s) * s ** alpha
        else:
            g = lambda s: f(s) * s ** alpha * (1 - s) ** beta
        v, e = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200, **kw)
        total += v
        err += e
    return total, err


def appell_f1(a, b, bp, c, x, y, ctl: SeriesControl | None = None) -> EvalResult:
    """Appell F1(a; b, b'; c; x, y).

    Double series (as a series in x of 2F1 terms) inside the unit bidisk;
    otherwise the Euler integral Gamma(c)/(Gamma(a)Gamma(c-a)) int t^{a-1}
    (1-t)^{c-a-1} (1-xt)^{-b} (1-yt)^{-b'} dt, which needs c > a > 0 and
    x, y < 1.
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c):
        raise ValueError("c must not be a nonpositive integer")
    if x == 0 and y == 0:
        return EvalResult(1.0, 0.0, 1)
    if y == 0:
        return gauss_2f1(a, b, c, x, ctl)
    if x == 0:
        return gauss_2f1(a, bp, c, y, ctl)
    if max(abs(x), abs(y)) < 0.9:
        if abs(y) > abs(x):
            x, y, b, bp = y, x, bp, b
        return _outer_series(lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)) * x,
                             lambda n: gauss_2f1(a + n, bp, c + n, y, ctl), ctl)
    if not (c > a > 0) or x >= 1 or y >= 1:
        raise ValueError("F1 outside the double-series disk needs c > a > 0 and x, y < 1")
    f = lambda t: (1 - x * t) ** (-b) * (1 - y * t) ** (-bp)
    v, e = _euler_integral(f, a - 1, c - a - 1, max(abs(x), abs(y)))
    pre = math.exp(special.gammaln(c) - special.gammaln(a) - special.gammaln(c - a))
    if e * pre > ctl.tol(v * pre):
        raise ConvergenceError("F1 Euler integral missed tolerance")
    return EvalResult(v * pre, e * pre, 0)


def appell_f2(a, b, bp, c, cp, x, y, ctl: SeriesControl | None = None) -> EvalResult:
    """Appell F2(a; b, b'; c, c'; x, y).

    Summed as a series in the bounded variable with a 2F1 per term (|x| < 1
    lets y be unbounded and vice versa).  Otherwise the Laplace-type integral
    Gamma(a)^{-1} int t^{a-1} e^{-t} 1F1(b;c;xt) 1F1(b';c';yt) dt is used.
    """
    ctl = _ctl(ctl)
    if _is_nonpos_int(c) or _is_nonpos_int(cp):
        raise ValueError("c and c' must not be nonpositive integers")
    if y == 0:
        return gauss_2f1(a, b, c, x, ctl)
    if x == 0:
        return gauss_2f1(a, bp, cp, y, ctl)
    if abs(x) < 1 and (abs(x) <= abs(y) or abs(y) >= 1):
        return _outer_series(lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)) * x,
                             lambda n: gauss_2f1(a + n, bp, cp, y, ctl), ctl)
    if abs(y) < 1:
        return _outer_series(lambda n: (a + n) * (bp + n) / ((cp + n) * (n + 1)) * y,
                             lambda n: gauss_2f1(a + n, b, c, x, ctl), ctl)
    if x + y >= 1:
        raise ValueError("F2 integral representation needs x + y < 1")
    lg = special.gammaln(a)
    f = lambda t: math.exp((a - 1) * math.log(t) - t - lg) * \
        kummer_1f1(b, c, x * t, ctl).real * kummer_1f1(bp, cp, y * t, ctl).real if t > 0 else 0.0
    v, e = integrate.quad(f, 0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    return EvalResult(v, e, 0)


# ---------------------------------------------------------------------------
# Tricomi U, Bessel functions, Gaussian Q, binomial
# ---------------------------------------------------------------------------

def _tricomi_integral(a, b, z):
    """U(a,b,z) = Gamma(a)^{-1} int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, a > 0."""
    lg = special.gammaln(a)
    p = b - a - 1.0
    # peak of the whole integrand: -z + (a-1)/t + p/(1+t) = 0
    qa, qb, qc = z, z - (a - 1) - p, -(a - 1)
    disc = qb * qb - 4 * qa * qc
    tpk = (-qb + math.sqrt(disc)) / (2 * qa) if disc >= 0 else 0.0
    t1 = max(tpk, 1.0 / z)

    def logs(t):  # smooth part, the t^{a-1} factor excluded
        return -z * t + p * math.log1p(t) - lg

    shift = logs(t1) + (a - 1) * math.log(t1)
    if a < 1:
        # integrable singularity at 0 handled by the algebraic weight
        v, e = integrate.quad(lambda t: math.exp(logs(t) - shift), 0, t1, weight="alg",
                              wvar=(a - 1, 0.0), epsabs=0, epsrel=1e-13, limit=200)
    else:
        v, e = integrate.quad(lambda t: math.exp(logs(t) + (a - 1) * math.log(t) - shift)
                              if t > 0 else 0.0, 0, t1, epsabs=0, epsrel=1e-13, limit=200)
    total, err = v, e
    width = max(t1, 1.0 / z) * 0.5
    lo = t1
    while True:
        hi = lo + width
        v, e = integrate.quad(lambda t: math.exp(logs(t) + (a - 1) * math.log(t) - shift),
                              lo, hi, epsabs=0, epsrel=1e-13, limit=200)
        total += v
        err += e
        if abs(v) <= 1e-17 * abs(total):
            break
        lo = hi
        width *= 1.5
    return total * math.exp(shift), (err + 1e-15 * abs(total)) * math.exp(shift)


def tricomi_u(a, b, z, ctl: SeriesControl | None = None) -> EvalResult:
    """Tricomi confluent hypergeometric function U(a, b, z) for z > 0.

    Non-integer b and moderate z use the combination
    U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1,2-b,z).
    Integer b (the limit case) and large z use the Laplace integral, or the
    asymptotic series z^{-a} sum (a)_k (a-b+1)_k / k! (-z)^{-k} when it
    converges to tolerance.
    """
    ctl = _ctl(ctl)
    if not z > 0:
        raise ValueError("tricomi_u needs z > 0")
    if _is_nonpos_int(a):
        # polynomial case: U(-n, b, z) = (-1)^n (b)_n M(-n, b, z)
        n = int(-a)
        poch = math.prod(b + k for k in range(n))
        m = kummer_1f1(a, b, z, ctl)
        return EvalResult((-1) ** n * poch * m.value, abs(poch) * m.error_estimate, m.terms_used)
    # asymptotic series
    term, s, best = 1.0, 1.0, 1.0
    for k in range(min(ctl.max_terms, 400)):
        nxt = term * (a + k) * (a - b + 1 + k) / (k + 1) * (-1.0 / z)
        if abs(nxt) >= best:
            break
        term = nxt
        s += term
        best = abs(term)
        if best < _EPS * abs(s):
            break
    if best <= ctl.rel_tol * 1e-2 * abs(s):
        v = z ** (-a) * s
        return EvalResult(v, abs(z ** (-a)) * best, k + 1)
    if b != math.floor(b) and z < 8:
        m1 = kummer_1f1(a, b, z, ctl)
        m2 = kummer_1f1(a - b + 1, 2 - b, z, ctl)
        g1 = special.gamma(1 - b) * special.rgamma(a - b + 1)
        g2 = special.gamma(b - 1) * special.rgamma(a) * z ** (1 - b)
        v = g1 * m1.real + g2 * m2.real
        err = abs(g1) * m1.error_estimate + abs(g2) * m2.error_estimate
        cond = abs(g1 * m1.real) + abs(g2 * m2.real)
        err += cond * _EPS * 4
        if err <= ctl.rel_tol * abs(v):
            return EvalResult(v, err, m1.terms_used + m2.terms_used)
    if a <= 0:
        if a - b + 1 > 0:
            r = tricomi_u(a - b + 1, 2 - b, z, ctl)
            f = z ** (1 - b)
            return EvalResult(f * r.value, f * r.error_estimate, r.terms_used)
        raise ConvergenceError("tricomi_u integral needs a > 0 or a - b + 1 > 0")
    v, e = _tricomi_integral(a, b, z)
    return EvalResult(v, e, 0)


def bessel_i(nu, z, ctl: SeriesControl | None = None) -> EvalResult:
    """Modified Bessel function I_nu(z), z >= 0.

    Ascending series (all terms positive) for moderate z, Hankel asymptotic
    expansion for large z.
    """
    ctl = _ctl(ctl)
    if z < 0:
        raise ValueError("bessel_i needs z >= 0")
    if z == 0:
        return EvalResult(1.0 if nu == 0 else 0.0, 0.0, 1)
    if z > 40 + nu * nu:
        mu4 = 4 * nu * nu
        term, s, best = 1.0, 1.0, 1.0
        for k in range(1, 200):
            nxt = -term * (mu4 - (2 * k - 1) ** 2) / (k * 8 * z)
            if abs(nxt) >= best:
                break
            term = nxt
            s += term
            best = abs(term)
            if best < _EPS * abs(s):
                break
        pre = math.exp(z) / math.sqrt(2 * math.pi * z)
        if best <= ctl.rel_tol * 1e-2:
            return EvalResult(pre * s, pre * best, k)
    logfirst = nu * math.log(z / 2) - special.gammaln(nu + 1)
    q = z * z / 4
    s, last, used, _ = _sum_series(lambda k: q / ((k + 1) * (nu + k + 1)), ctl)
    pre = math.exp(logfirst)
    return EvalResult(pre * s, pre * last, used)


def bessel_j1(z, ctl: SeriesControl | None = None) -> EvalResult:
    """Bessel function J_1(z), z >= 0.

    Ascending series for z <= 8, the periodic integral (1/pi) int_0^pi
    cos(t - z sin t) dt by the trapezoid rule (exponentially convergent) for
    intermediate z, and the Hankel expansion for very large z.
    """
    ctl = _ctl(ctl)
    if z < 0:
        raise ValueError("bessel_j1 needs z >= 0")
    if z == 0:
        return EvalResult(0.0, 0.0, 1)
    if z <= 8:
        q = -z * z / 4
        s, last, used, mag = _sum_series(lambda k: q / ((k + 1) * (k + 2)), ctl)
        return EvalResult(z / 2 * s, z / 2 * (last + mag * _EPS), used)
    if z <= 1e4:
        n = int(z) + 60
        t = np.pi * (np.arange(n) + 0.5) / n
        v = float(np.mean(np.cos(t - z * np.sin(t))))
        return EvalResult(v, 1e-15 * (1 + z ** 0.5), n)
    # Hankel expansion with P, Q series for nu = 1
    mu = 4.0
    p, q = 1.0, 0.0
    tk = 1.0
    for k in range(1, 30):
        tk = tk * (mu - (2 * k - 1) ** 2) / (k * 8 * z)
        if k % 2 == 1:
            q += tk * (-1) ** ((k - 1) // 2)
        else:
            p += tk * (-1) ** (k // 2)
        if abs(tk) < _EPS:
            break
    chi = z - 0.75 * math.pi
    v = math.sqrt(2 / (math.pi * z)) * (p * math.cos(chi) - q * math.sin(chi))
    return EvalResult(v, abs(tk), k)


def gaussian_q(x: float) -> float:
    """Upper tail of the standard normal distribution, Q(x) = erfc(x/sqrt2)/2."""
    if x == math.inf:
        return 0.0
    if x == -math.inf:
        return 1.0
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def binom(n: int, k: int) -> float:
    """Standard binomial coefficient n! / (k! (n-k)!)."""
    n, k = int(n), int(k)
    if n < 0 or k < 0:
        raise ValueError("binom needs nonnegative integers")
    if k > n:
        raise ValueError("binom needs k <= n")
    return float(math.comb(n, k))


# ---------------------------------------------------------------------------
# Vectorised families
# ---------------------------------------------------------------------------

def hyp2f1_array(a, b, c, z):
    """Elementwise 2F1(a, b; c; z) for real or complex arrays, via scipy."""
    return special.hyp2f1(a, b, c, z)


def _hyp1f1_negx(a: float, b: float, x: np.ndarray) -> np.ndarray:
    """1F1(a; b; -x) for real x >= 0.

    Large x uses the two asymptotic series (algebraic and exponentially
    small parts); scipy's evaluator becomes very slow there.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x > 2.0 * (a * a + b * b) + 60.0
    if np.any(~big):
        out[~big] = special.hyp1f1(a, b, -x[~big])
    if np.any(big):
        xb = x[big]
        n = b - a
        if n <= 0 and n == int(n):
            # algebraic part vanishes; only the exponentially small part is left
            sign = (-1.0) ** int(-n)
            lg = special.gammaln(b) - special.gammaln(a)
            out[big] = (sign * np.exp(lg - xb + (a - b) * np.log(xb))
                        * _asym_sum(b - a, 1 - a, -xb))
        else:
            lg = special.gammaln(b) - special.gammaln(b - a) - a * np.log(xb)
            sign = special.gammasgn(b) * special.gammasgn(b - a)
            out[big] = sign * np.exp(lg) * _asym_sum(a, a - b + 1, xb)
    return out


def _asym_sum(p, q, x, terms=80):
    """sum_k (p)_k (q)_k / k! x^{-k}, truncated at the smallest term."""
    acc = np.ones_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    done = np.zeros(x.shape, dtype=bool)
    for k in range(terms):
        term = term * (p + k) * (q + k) / ((k + 1) * x)
        mag = np.abs(term)
        done |= (mag >= prev) | (mag < 1e-17 * np.abs(acc))
        acc = np.where(done, acc, acc + term)
        prev = mag
        if np.all(done):
            break
    return acc


def hyp1f1_ladder(a0: float, b: float, x, n: int) -> np.ndarray:
    """Table F[k, j] = 1F1(a0 + k; b; -x[j]) for k = 0..n-1.

    The family is produced by the three-term recurrence in the first
    parameter,

        (b - a) M(a-1) + (2a - b - x) M(a) - a M(a+1) = 0,   (argument -x)

    run forward for x <= 10, where it is stable, and solved as a two-point
    boundary-value problem (Olver's method) for larger x, with the end values
    taken from direct evaluation.  Direct evaluation is accurate at small a
    for every x and at every a once x >= 5, while neither the plain series
    nor the Kummer form is usable when a is large and x is small.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise ValueError("hyp1f1_ladder expects x >= 0 (argument -x)")
    out = np.empty((n, x.size))
    if n == 0:
        return out
    out[0] = _hyp1f1_negx(a0, b, x)
    if n == 1:
        return out
    small = x <= 10.0
    if np.any(small):
        xs = x[small]
        m_prev = out[0, small]
        m_cur = _hyp1f1_negx(a0 + 1, b, xs)
        out[1, small] = m_cur
        for k in range(1, n - 1):
            ak = a0 + k
            m_next = ((b - ak) * m_prev + (2 * ak - b - xs) * m_cur) / ak
            out[k + 1, small] = m_next
            m_prev, m_cur = m_cur, m_next
    big = ~small
    if np.any(big):
        xb = x[big]
        top = _hyp1f1_negx(a0 + n - 1, b, xb)
        out[n - 1, big] = top
        if n > 2:
            # unknowns k = 1..n-2; row k: lo*M[k-1] + di*M[k] + up*M[k+1] = 0
            ks = np.arange(1, n - 1, dtype=float)[:, None]
            ak = a0 + ks
            lo = (b - ak) * np.ones_like(xb)
            di = 2 * ak - b - xb
            up = -ak * np.ones_like(xb)
            rhs = np.zeros_like(di)
            rhs[0] -= lo[0] * out[0, big]
            rhs[-1] -= up[-1] * top
            # Thomas algorithm, vectorised over columns
            m = n - 2
            cp = np.empty_like(di)
            dp = np.empty_like(di)
            cp[0] = up[0] / di[0]
            dp[0] = rhs[0] / di[0]
            for i in range(1, m):
                den = di[i] - lo[i] * cp[i - 1]
                cp[i] = up[i] / den
                dp[i] = (rhs[i] - lo[i] * dp[i - 1]) / den
            sol = np.empty_like(di)
            sol[-1] = dp[-1]
            for i in range(m - 2, -1, -1):
                sol[i] = dp[i] - cp[i] * sol[i + 1]
            out[1:n - 1, big] = sol
    return out
