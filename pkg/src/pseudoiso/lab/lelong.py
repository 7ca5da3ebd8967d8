"""Lelong numbers, max-regularisation and the closed-form least-negative intersections."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .grids import GridFunction, RadialProfile

FIT_RADII = 3


def lelong_estimate(u: RadialProfile | GridFunction, x: Sequence[float] | None = None) -> float:
    """Slope of circle averages of u against log r over the three smallest resolvable radii.

    For a radial profile the samples already are circle averages and the fit
    uses the three smallest t-nodes.  On a grid the circle of radius k*h about
    x is replaced by the ring of nodes at distance round(d/h) = k (k = 1, 2, 3),
    and the slope is taken of the ring mean of u against the ring mean of
    log d, which is exact for c*log|z - x|.  Rings touching a singular node
    are skipped in favour of the next radius.
    """
    if isinstance(u, RadialProfile):
        if x is not None and any(float(c) != 0.0 for c in np.atleast_1d(x)):
            raise ValueError("radial profiles are centred at the origin")
        logr = u.t[:FIT_RADII]
        vals = u.values[:FIT_RADII]
    else:
        logr, vals = _ring_means(u, (0.0, 0.0) if x is None else x)
    if not np.all(np.isfinite(vals)):
        raise ValueError("singular samples inside the fitting window")
    slope = np.polyfit(logr, vals, 1)[0]
    return float(max(slope, 0.0))


def _ring_means(u: GridFunction, x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    if x.shape != (2,):
        raise ValueError("grid points are given as real coordinates (x, y)")
    h = u.step
    if np.any(np.abs(x) > u.extent - (FIT_RADII + 3) * h):
        raise ValueError(f"point {tuple(x)} is outside the usable grid")
    gx, gy = u.mesh()
    d = np.hypot(gx - x[0], gy - x[1])
    ring = np.rint(d / h).astype(int)
    logr, vals = [], []
    k = 1
    while len(logr) < FIT_RADII and k < FIT_RADII + 6:
        sel = (ring == k) & (d > 0)
        if sel.any() and np.all(np.isfinite(u.values[sel])):
            logr.append(float(np.mean(np.log(d[sel]))))
            vals.append(float(np.mean(u.values[sel])))
        k += 1
    if len(logr) < FIT_RADII:
        raise ValueError("not enough finite rings around the point")
    return np.array(logr), np.array(vals)


def max_regularize(u: RadialProfile, n: float) -> RadialProfile:
    """max(u, -n): bounded, psh when u is, and decreasing to u as n grows."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return u.with_values(np.maximum(u.values, -float(n)))


def least_negative_example(kind: str, phi_samples: Sequence[float]) -> float:
    """Value of the least-negative self-intersection on a test function sampled along the curve.

    ``line``: a line in P^2 (self-intersection +1) gives sup phi.
    ``exceptional``: the exceptional curve of a point blowup (self-intersection -1) gives sup(-phi).
    """
    samples = np.asarray(phi_samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("no samples")
    if kind == "line":
        return float(samples.max())
    if kind == "exceptional":
        return float((-samples).max())
    raise ValueError(f"kind must be 'line' or 'exceptional', not {kind!r}")
