"""Minimal-singularity envelopes for radial differences of quasi-psh functions.

Given phi = u+ - u- (radial, sampled in t = log r), the envelope is the
largest u <= 0 such that both u and u + phi are (c * omega)-quasi-psh, with
omega = dd^c |z|^2.  In t-coordinates that means u + c e^{2t} and
u + phi + c e^{2t} are convex and nondecreasing.

With v = u + c e^{2t} the two conditions merge into one: second differences
of v at least a = max(0, -D2 phi) and first differences at least
b = max(0, -D phi), below the obstacle c e^{2t}.  Subtracting a fixed g with
D2 g = a leaves a convex s whose slopes must dominate c = b - D g; for convex
s that is the same as dominating the running maximum C of c.  The largest
such s is the lower convex hull of the obstacle after pushing it down from
the right so that no step rises by less than C.  The construction is exact,
no iteration involved.
"""

from __future__ import annotations

import numpy as np

from .grids import CONVEXITY_TOL, RadialProfile, qpsh_violation


class InfeasibleEnvelope(ValueError):
    """No finite envelope exists on the grid for the given data."""


def _lower_hull(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Largest convex sequence on the nodes t lying below y."""
    hull: list[int] = []
    for i in range(len(t)):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 when it lies on or above the chord from i0 to i
            if (y[i1] - y[i0]) * (t[i] - t[i0]) >= (y[i] - y[i0]) * (t[i1] - t[i0]):
                hull.pop()
            else:
                break
        hull.append(i)
    return np.interp(t, t[hull], y[hull])


def _slope_limited_min(y: np.ndarray, rises: np.ndarray) -> np.ndarray:
    """Largest z <= y with z[k+1] - z[k] >= rises[k] for every k."""
    z = y.copy()
    for k in range(len(y) - 2, -1, -1):
        z[k] = min(z[k], z[k + 1] - rises[k])
    return z


def convex_nondecreasing_minorant(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Largest convex nondecreasing sequence (on the nodes t) lying below y."""
    return _lower_hull(t, _slope_limited_min(np.asarray(y, dtype=float), np.zeros(len(y) - 1)))


def minimal_pair_envelope(phi: RadialProfile, n_omega: float) -> RadialProfile:
    """Largest u <= 0 with u and u + phi both (n_omega * omega)-quasi-psh."""
    if n_omega < 0:
        raise ValueError("n_omega must be nonnegative")
    t = phi.t
    p = phi.values
    if not np.all(np.isfinite(p)):
        raise InfeasibleEnvelope("phi must be finite on the grid nodes")
    w = n_omega * np.exp(2 * t)
    a = np.maximum(0.0, -np.diff(p, 2))
    b = np.maximum(0.0, -np.diff(p))
    g = np.zeros_like(t)
    for i in range(1, t.size - 1):
        g[i + 1] = 2 * g[i] - g[i - 1] + a[i - 1]
    rises = np.maximum.accumulate(b - np.diff(g))
    s = _lower_hull(t, _slope_limited_min(w - g, rises))
    u = np.minimum(s + g - w, 0.0)  # clip rounding above the cap
    return RadialProfile(t, u, psh=False, metadata={"n_omega": n_omega})


def envelope_violation(u: RadialProfile, phi: RadialProfile, n_omega: float) -> float:
    """Largest constraint violation of u as a member of the feasible set."""
    return max(
        qpsh_violation(u.t, u.values, n_omega),
        qpsh_violation(u.t, u.values + phi.values, n_omega),
        float(max(u.values.max(), 0.0)),
    )


def is_feasible(u: RadialProfile, phi: RadialProfile, n_omega: float, tol: float = CONVEXITY_TOL) -> bool:
    return envelope_violation(u, phi, n_omega) <= tol
