"""Root-based evaluation of P(z) = prod (z - x_k) and its derived sums.

The polynomial is always represented by its roots; coefficients never
appear outside the small-degree test oracles.  Everything needed by the
lemniscate experiments is a root sum:

    log|P(z)|      = sum_k log|z - x_k|
    P'(z)/P(z)     = sum_k 1/(z - x_k)
    (P'^2 - P P'')(z) / P(z)^2 = sum_k 1/(z - x_k)^2

Sums run in root-index order (numpy's fixed pairwise reduction), chosen
for reproducibility over the last bits of accuracy.
"""

from __future__ import annotations

import numpy as np

#: below this distance a query point is treated as sitting on a root
COINCIDENCE_TOL = 1e-300

#: construction-time minimum allowed distance between two roots
DISTINCT_TOL = 1e-15


class RootedPolynomial:
    """Monic polynomial held as an ordered array of complex roots.

    Roots must lie in the closed unit disc and be pairwise distinct
    (within DISTINCT_TOL).  Immutable after construction; safe to share
    across threads.
    """

    __slots__ = ("roots",)

    def __init__(self, roots):
        roots = np.asarray(roots, dtype=np.complex128)
        if roots.ndim != 1 or roots.size < 1:
            raise ValueError("need a 1-D, non-empty root array")
        if not np.all(np.isfinite(roots)):
            raise ValueError("roots must be finite")
        if np.abs(roots).max() > 1.0 + 1e-12:
            raise ValueError("roots must lie in the closed unit disc")
        _check_distinct(roots)
        roots.setflags(write=False)
        self.roots = roots

    @property
    def n(self):
        return self.roots.size

    def __repr__(self):
        return "RootedPolynomial(n=%d)" % self.n


def _check_distinct(roots):
    # sort by real part; points closer than DISTINCT_TOL in the plane are
    # necessarily that close in real part, so scanning a tiny window of
    # the sorted order suffices (near-linear instead of O(n^2)).
    order = np.argsort(roots.real, kind="stable")
    sr = roots[order]
    n = sr.size
    for i in range(n - 1):
        j = i + 1
        while j < n and sr[j].real - sr[i].real <= DISTINCT_TOL:
            if abs(sr[j] - sr[i]) <= DISTINCT_TOL:
                raise ValueError(
                    "roots %d and %d coincide within %g"
                    % (order[i], order[j], DISTINCT_TOL)
                )
            j += 1


def _keep_indices(n, skip):
    if not skip:
        return None
    skip = set(int(k) for k in skip)
    for k in skip:
        if k < 0 or k >= n:
            raise IndexError("skip index %d out of range for n=%d" % (k, n))
    return np.array([k for k in range(n) if k not in skip], dtype=np.intp)


def log_abs_p(poly, z):
    """log|P(z)| as a root sum; -inf if z sits on a root.

    `z` may be a complex scalar or ndarray; the return matches.
    """
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - poly.roots
    sq = diff.real**2 + diff.imag**2
    hit = sq < COINCIDENCE_TOL**2
    with np.errstate(divide="ignore"):
        out = 0.5 * np.sum(np.log(sq), axis=-1)
    if hit.any():
        out = np.where(hit.any(axis=-1), -np.inf, out)
    return out if out.ndim else float(out)


def log_abs_q(poly, z, skip_index):
    """log|P(z)/(z - x_skip)|: the log modulus with one root skipped."""
    n = poly.n
    if not (0 <= skip_index < n):
        raise IndexError("skip_index out of range")
    keep = _keep_indices(n, {skip_index})
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - poly.roots[keep]
    sq = diff.real**2 + diff.imag**2
    hit = sq < COINCIDENCE_TOL**2
    with np.errstate(divide="ignore"):
        out = 0.5 * np.sum(np.log(sq), axis=-1)
    if hit.any():
        out = np.where(hit.any(axis=-1), -np.inf, out)
    return out if out.ndim else float(out)


def s_sum(poly, z, skip=None):
    """sum over non-skipped roots of 1/(z - x_k).

    Raises ValueError if z coincides (within COINCIDENCE_TOL) with a
    non-skipped root.
    """
    keep = _keep_indices(poly.n, skip)
    roots = poly.roots if keep is None else poly.roots[keep]
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - roots
    if np.abs(diff).min(initial=np.inf) < COINCIDENCE_TOL:
        raise ValueError("z coincides with a non-skipped root")
    out = np.sum(1.0 / diff, axis=-1)
    return out if out.ndim else complex(out)


def r_sum(poly, z, skip=None):
    """sum over non-skipped roots of 1/(z - x_k)^2."""
    keep = _keep_indices(poly.n, skip)
    roots = poly.roots if keep is None else poly.roots[keep]
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - roots
    if np.abs(diff).min(initial=np.inf) < COINCIDENCE_TOL:
        raise ValueError("z coincides with a non-skipped root")
    inv = 1.0 / diff
    out = np.sum(inv * inv, axis=-1)
    return out if out.ndim else complex(out)


def full_sums(poly, z):
    """(S, R) = (sum 1/(z-x_k), sum 1/(z-x_k)^2) over all roots, vectorized.

    No coincidence guard: intended for hot paths on points known to avoid
    the roots (division by zero yields inf, which downstream comparisons
    treat correctly).
    """
    z = np.asarray(z, dtype=np.complex128)
    diff = z[..., None] - poly.roots
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / diff
        return np.sum(inv, axis=-1), np.sum(inv * inv, axis=-1)


def roots_to_csv(poly, path):
    """Write the root set as one "re,im" line per root."""
    with open(path, "w") as fh:
        for x in poly.roots:
            fh.write("%r,%r\n" % (float(x.real), float(x.imag)))


def roots_from_csv(path):
    """Read a root set written by roots_to_csv."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            re_s, im_s = line.split(",")
            rows.append(complex(float(re_s), float(im_s)))
    return RootedPolynomial(rows)
