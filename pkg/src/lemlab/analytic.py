"""Closed forms and quadratures behind the lemniscate asymptotics.

Central objects: the dilogarithm; the moments of log|r - X| for X
uniform on the unit disc; the Gaussian-plus-skewness prediction for the
expected area of the disc left uncovered by the lemniscate; and the
limiting component-count constant sqrt((zeta(2) - 1)/pi).

The moments u(r), sigma(r), gamma3(r) of log|r - X| come from the polar
quadrature

    (1/pi) int_0^1 int_0^{2pi} g(log|r - rho e^{i theta}|) rho dtheta drho,

which is the authoritative definition here.  The second moment is
additionally validated, on every evaluation, against the independent
form

    int_0^1 2 rho [ (log max(r, rho))^2 + Li2((min/max)^2)/2 ] drho,

obtained by expanding log|1 - m e^{i theta}| in its cosine series and
integrating term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import _NODES16, _WEIGHTS16, adaptive_gauss

ZETA2 = math.pi * math.pi / 6.0

#: absolute accuracy demanded of the polar second-moment quadrature
SIGMA_TOL = 5e-10
#: absolute accuracy demanded of the polar third-moment quadrature
GAMMA3_TOL = 1e-8
#: required agreement between the polar and cosine-series second moments
CROSS_CHECK_TOL = 1e-6


class MomentMismatchError(RuntimeError):
    """Polar and cosine-series second moments disagree beyond tolerance."""


@dataclass(frozen=True)
class MomentTable:
    """Moments of log|r - X|: mean u, std dev sigma, third central gamma3."""

    r: float
    u: float
    sigma: float
    gamma3: float


def dilog(x):
    """Li2(x) = sum x^n / n^2 on [0, 1], to absolute accuracy 1e-12.

    For x > 1/2 the reflection Li2(x) + Li2(1-x) = pi^2/6 - ln x ln(1-x)
    maps the argument back to the fast-converging half of the range.
    """
    scalar = np.isscalar(x)
    x = np.asarray(x, dtype=np.float64)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("dilog requires 0 <= x <= 1")
    out = np.zeros_like(x)
    hi = x > 0.5
    lo = ~hi
    out[lo] = _dilog_series(x[lo])
    if hi.any():
        xh = x[hi]
        with np.errstate(divide="ignore", invalid="ignore"):
            cross = np.where(xh == 1.0, 0.0, np.log(xh) * np.log1p(-xh))
        out[hi] = ZETA2 - cross - _dilog_series(1.0 - xh)
    return float(out) if scalar else out


def _dilog_series(x):
    # |x| <= 1/2: 0.5^52/52^2 < 1e-19, so 52 terms are ample
    out = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 53):
        term = term * x
        out += term / (k * k)
    return out


def var_log_one_minus_x():
    """Var(log|1 - X|) = (zeta(2) - 1)/2 = (pi^2 - 6)/12, by quadrature.

    Evaluates int_0^1 Li2(rho^2) rho drho (the angular average of
    (log|1 - rho e^{i theta}|)^2) and asserts agreement with the closed
    form to 1e-9 before returning the quadrature value.  The mean of
    log|1 - X| is zero, so this second moment is the variance.
    """
    value, _ = adaptive_gauss(lambda rho: dilog(rho * rho) * rho, 0.0, 1.0, 1e-12)
    closed = (math.pi * math.pi - 6.0) / 12.0
    if abs(value - closed) > 1e-9:
        raise MomentMismatchError(
            "dilog quadrature %r vs closed form %r" % (value, closed)
        )
    return value


def mean_log_dist(r):
    """u(r) = E[log|r - X|] = (r^2 - 1)/2 for 0 <= r <= 1."""
    return (r * r - 1.0) / 2.0


_THETA_DEPTH = 48
_theta_rule_cache = None


def _theta_rule():
    # composite GL-16 on [0, pi], panels graded geometrically toward the
    # (potential) logarithmic peak at theta = 0; fixed depth so the rule,
    # viewed as a function of rho, is perfectly smooth
    global _theta_rule_cache
    if _theta_rule_cache is None:
        edges = np.pi * 2.0 ** (-np.arange(_THETA_DEPTH + 1, dtype=np.float64))
        los = np.concatenate(([0.0], edges[::-1][:-1]))
        his = edges[::-1]
        mids = 0.5 * (los + his)
        halfs = 0.5 * (his - los)
        nodes = (mids[:, None] + halfs[:, None] * _NODES16).ravel()
        weights = (halfs[:, None] * _WEIGHTS16).ravel()
        sin2half = np.sin(0.5 * nodes) ** 2
        _theta_rule_cache = (sin2half, weights)
    return _theta_rule_cache


def _theta_moments(r, rho, u):
    """int_0^pi (t - u)^p dtheta for p = 2, 3, t = log|r - rho e^{i theta}|.

    Uses |r - rho e^{i theta}|^2 = (r - rho)^2 + 4 r rho sin^2(theta/2),
    which stays accurate to the last ulp even when theta is tiny and
    rho is within roundoff of r.
    """
    sin2half, weights = _theta_rule()
    g = (r - rho) ** 2 + (4.0 * r * rho) * sin2half
    t = 0.5 * np.log(np.maximum(g, 1e-300)) - u
    t2 = t * t
    return float(weights @ t2), float(weights @ (t2 * t))


def _polar_central_moments(r):
    """(second, third) central moments of log|r - X| by polar quadrature."""
    u = mean_log_dist(r)

    def outer(rho_nodes):
        out = np.empty((2, rho_nodes.size))
        for i, rho in enumerate(rho_nodes):
            m2, m3 = _theta_moments(r, float(rho), u)
            scale = 2.0 * float(rho) / math.pi
            out[0, i] = scale * m2
            out[1, i] = scale * m3
        return out

    tol = np.array([SIGMA_TOL, GAMMA3_TOL])
    if 0.0 < r < 1.0:
        va, _ = adaptive_gauss(outer, 0.0, r, 0.5 * tol)
        vb, _ = adaptive_gauss(outer, r, 1.0, 0.5 * tol)
        vals = np.asarray(va) + np.asarray(vb)
    else:
        vals, _ = adaptive_gauss(outer, 0.0, 1.0, tol)
        vals = np.asarray(vals)
    return float(vals[0]), float(vals[1])


def _cosine_series_second_raw(r):
    """E[(log|r - X|)^2] from the term-by-term cosine-series form."""

    def f(rho):
        mx = np.maximum(r, rho)
        mn = np.minimum(r, rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            lm = np.where(mx > 0, np.log(np.where(mx > 0, mx, 1.0)), 0.0)
            ratio = np.where(mx > 0, mn / np.where(mx > 0, mx, 1.0), 0.0)
        return 2.0 * rho * (lm * lm + 0.5 * dilog(ratio * ratio))

    if 0.0 < r < 1.0:
        va, _ = adaptive_gauss(f, 0.0, r, 5e-10)
        vb, _ = adaptive_gauss(f, r, 1.0, 5e-10)
        return va + vb
    value, _ = adaptive_gauss(f, 0.0, 1.0, 1e-9)
    return value


@lru_cache(maxsize=200_000)
def _moment_triple(r):
    u = mean_log_dist(r)
    m2c, m3c = _polar_central_moments(r)
    raw2_polar = m2c + u * u
    raw2_series = _cosine_series_second_raw(r)
    if abs(raw2_polar - raw2_series) > CROSS_CHECK_TOL:
        raise MomentMismatchError(
            "second moment of log|%g - X|: polar %r vs series %r"
            % (r, raw2_polar, raw2_series)
        )
    return u, math.sqrt(m2c), m3c


def moments_log_dist(r):
    """MomentTable for log|r - X|, 0 <= r <= 1 (see module docstring)."""
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    u, sigma, gamma3 = _moment_triple(r)
    return MomentTable(r=r, u=u, sigma=sigma, gamma3=gamma3)


def phi(x):
    """Standard normal CDF (scipy's ndtr: |error| well below 1e-12).

    scipy is imported lazily so that the closed-form constants stay
    importable in well under a second.
    """
    from scipy.special import ndtr

    out = ndtr(x)
    return float(out) if np.isscalar(x) else out


# -------------------------------------------------- moment interpolant
#
# sigma(r) and gamma3(r) are analytic on [0, 1], so a Chebyshev
# interpolant built once from moments_log_dist values reproduces them to
# ~1e-12 while costing microseconds per lookup.  The area-prediction
# quadrature consumes hundreds of (sigma, gamma3) values per call; this
# is the warm-up cache that makes that affordable.

_CHEB_N = 64
_cheb_table = None


def _chebyshev_table():
    global _cheb_table
    if _cheb_table is None:
        j = np.arange(_CHEB_N + 1)
        nodes = 0.5 * (1.0 + np.cos(np.pi * j / _CHEB_N))
        weights = np.where(j % 2 == 0, 1.0, -1.0)
        weights[0] *= 0.5
        weights[-1] *= 0.5
        sig = np.empty(nodes.size)
        gam = np.empty(nodes.size)
        for i, r in enumerate(nodes):
            _, sig[i], gam[i] = _moment_triple(float(r))
        _cheb_table = (nodes, weights, sig, gam)
    return _cheb_table


def _sigma_gamma_interp(r):
    nodes, weights, sig, gam = _chebyshev_table()
    d = r - nodes
    hit = np.abs(d) < 1e-14
    if hit.any():
        i = int(np.argmax(hit))
        return sig[i], gam[i]
    q = weights / d
    denom = q.sum()
    return float(q @ sig) / denom, float(q @ gam) / denom


def skew_correction(x, sigma, gamma3):
    """Edgeworth first correction: -gamma3/(6 sqrt(2 pi) sigma^3) (x^2-1) e^{-x^2/2}."""
    return (
        -gamma3
        / (6.0 * math.sqrt(2.0 * math.pi) * sigma**3)
        * (x * x - 1.0)
        * np.exp(-0.5 * x * x)
    )


def edgeworth_area(n, kappa, c_n=0.0, include_q1=False, tol=1e-8,
                   interpolant=True):
    """Predicted P-weighted area 2 pi int (1 - Phi(C_r) [+ Q1/sqrt n]) r dr.

    The integral runs over the annulus radii [1 - kappa sqrt(log n / n), 1]
    with the standardized threshold C_r = (n c_n - n u(r)) / (sqrt n
    sigma(r)).  With c_n = 0 this is the prediction for the expected area
    of the unit disc not covered by the lemniscate, accurate to O(1/n).
    The caller keeps sqrt(n) * c_n small; that is the regime where the
    expansion is valid.

    With interpolant=True (default) sigma and gamma3 come from the warmed
    Chebyshev cache of moments_log_dist values; interpolant=False calls
    the polar quadrature at every node (identical values, much slower).
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    if kappa <= 0:
        raise ValueError("kappa > 0 required")
    if c_n < 0:
        raise ValueError("c_n >= 0 required")
    sqrt_n = math.sqrt(n)
    lo = max(0.0, 1.0 - kappa * math.sqrt(math.log(n) / n))

    def integrand(r_nodes):
        out = np.empty_like(r_nodes)
        for i, r in enumerate(r_nodes):
            r = min(float(r), 1.0)
            u = mean_log_dist(r)
            if interpolant:
                sigma, gamma3 = _sigma_gamma_interp(r)
            else:
                tab = moments_log_dist(r)
                sigma, gamma3 = tab.sigma, tab.gamma3
            c_r = sqrt_n * (c_n - u) / sigma
            val = 1.0 - phi(c_r)
            if include_q1:
                val += skew_correction(c_r, sigma, gamma3) / sqrt_n
            out[i] = val * r
        return out

    value, _ = adaptive_gauss(integrand, lo, 1.0, tol)
    return 2.0 * math.pi * value


def limit_constant():
    """sqrt((zeta(2) - 1)/pi): the n -> infinity limit of E[components]/sqrt(n).

    Equals sqrt(2/pi * Var(log|1 - X|)) since Var(log|1 - X|) =
    (zeta(2) - 1)/2.
    """
    return math.sqrt((ZETA2 - 1.0) / math.pi)


def area_limit_constant():
    """sqrt(pi (zeta(2) - 1)): the limit of sqrt(n) * edgeworth_area(n, ...)."""
    return math.sqrt(math.pi * (ZETA2 - 1.0))
