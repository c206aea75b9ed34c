"""Shared test oracles, independent of the library's evaluation paths.

The coefficient oracle expands the polynomial from its roots by repeated
convolution and evaluates by Horner's rule; it is only trustworthy for
small degrees, which is exactly where it is used.  The winding oracle
counts zeros inside a rectangle with the argument principle on a dense
boundary walk.
"""

import numpy as np


def coeffs_from_roots(roots):
    """Monic coefficients, highest power first."""
    c = np.array([1.0 + 0.0j])
    for r in roots:
        c = np.convolve(c, np.array([1.0, -r]))
    return c


def polyval_coeffs(c, z):
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for a in c:
        out = out * z + a
    return out


def polyder_coeffs(c):
    n = len(c) - 1
    return np.array([c[k] * (n - k) for k in range(n)])


def winding_zero_count(coeffs, rect, points_per_side=6000):
    """Zeros (with multiplicity) of the polynomial inside a rectangle.

    Counts the winding of the boundary image; accurate when no zero sits
    within ~1/points_per_side of the boundary.
    """
    x0, x1, y0, y1 = rect
    t = np.linspace(0.0, 1.0, points_per_side, endpoint=False)
    bottom = x0 + (x1 - x0) * t + 1j * y0
    right = x1 + 1j * (y0 + (y1 - y0) * t)
    top = x1 - (x1 - x0) * t + 1j * y1
    left = x0 + 1j * (y1 - (y1 - y0) * t)
    path = np.concatenate([bottom, right, top, left])
    vals = polyval_coeffs(coeffs, path)
    args = np.angle(vals)
    d = np.diff(np.concatenate([args, args[:1]]))
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return int(round(d.sum() / (2.0 * np.pi)))


def disc_points(rng, count):
    """Uniform disc points from a plain numpy Generator (not the package RNG)."""
    return np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))


# --------------------------------------------------------------------------
# Exact distribution of the heavy-tailed walk, independent of Monte Carlo.
# The increment Y(r) = r - Re(1/(r - X)) has sublevel sets that are discs,
# so its full CDF is an intersection-of-circles area; the walk's law then
# follows by characteristic-function convolution on a periodic grid.


def _lens_area(d, r1, r2):
    import math

    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        rr = min(r1, r2)
        return math.pi * rr * rr
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2))
    return r1 * r1 * (a1 - math.sin(2 * a1) / 2) + r2 * r2 * (
        a2 - math.sin(2 * a2) / 2
    )


def exact_increment_cdf(r, t):
    """P(Y(r) <= t) for every t, via circle-intersection areas."""
    import math

    if t == r:
        t = r - 1e-12
    c = r - 1.0 / (2.0 * (r - t))
    rad = 1.0 / (2.0 * abs(r - t))
    if t < r:
        return _lens_area(abs(c), rad, 1.0) / math.pi
    return 1.0 - _lens_area(abs(c), rad, 1.0) / math.pi


def exact_walk_interval_prob(r, n, a, b, half_range=2.0**15, points=2**21):
    """P(W_n(r) in [a, b]) by n-fold convolution of the exact increment law."""
    L = float(half_range)
    M = int(points)
    h = 2.0 * L / M
    edges = -L + h * np.arange(M + 1) - h / 2.0
    cdf = np.array([exact_increment_cdf(r, t) for t in edges])
    pmf = np.diff(cdf)
    pmf[pmf < 0] = 0.0
    pmf[0] += cdf[0]
    pmf[-1] += 1.0 - cdf[-1]
    phi = np.fft.rfft(pmf)
    conv = np.fft.irfft(phi**n, M)
    vals = (-n * L + h * np.arange(M)) % (2.0 * L)
    sel = (vals >= a) & (vals <= b)
    return float(conv[sel].sum())
