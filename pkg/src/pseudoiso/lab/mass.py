"""dd^c masses on discs and balls, and Bedford-Taylor monotone convergence at grid scale.

Normalisation: dd^c = (i/pi) d dbar, so dd^c log|z| is the unit point mass
in C and (dd^c log|z|)^2 is the unit point mass at 0 in C^2.

In C the mass of a disc is (1/2pi) * sum of the 5-point Laplacian times h^2.
Nodes within two cells of a singular node are cut out; the mass they carry
is recovered as the discrete flux out of that core, which is exactly the
residual total - smooth part of the telescoping stencil sum.

In C^2 (torus-invariant functions) the smooth part integrates the complex
Hessian determinant; the total uses the boundary form of the same integral,
2 * \\oint g1 dg2 over the quarter circle of radius R with g_k = x_k dU/dx_k,
which is insensitive to whatever happens at the centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .grids import ApproxPair, GridFunction, core_mask, is_decreasing, toric_hessian
from .oracles import model_mass_oracle

ARC_POINTS = 4096
_SHIFTS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class MassSplit:
    total: float
    smooth: float
    core: float


def _check_region(u: GridFunction, radius: float) -> None:
    if radius <= 0:
        raise ValueError("region radius must be positive")
    if radius + 2 * u.step > u.extent:
        raise ValueError(f"disc of radius {radius} does not fit in the grid of extent {u.extent}")


def _neighbour(a: np.ndarray, di: int, dj: int, fill) -> np.ndarray:
    out = np.full_like(a, fill)
    n = a.shape[0]
    src_i = slice(max(di, 0), n + min(di, 0))
    dst_i = slice(max(-di, 0), n + min(-di, 0))
    src_j = slice(max(dj, 0), n + min(dj, 0))
    dst_j = slice(max(-dj, 0), n + min(-dj, 0))
    out[dst_i, dst_j] = a[src_i, src_j]
    return out


def _flux_out(u: np.ndarray, region: np.ndarray) -> float:
    """Sum of u(q) - u(p) over grid edges from p in region to q outside it."""
    total = 0.0
    for di, dj in _SHIFTS:
        outside = ~_neighbour(region, di, dj, False)
        nb = _neighbour(u, di, dj, np.nan)
        sel = region & outside
        total += float(np.sum(nb[sel] - u[sel]))
    return total


def mass_split(u: GridFunction, region_radius: float) -> MassSplit:
    _check_region(u, region_radius)
    if u.dims == 1:
        return _split_1d(u, region_radius)
    return _split_2d(u, region_radius)


def ddc_mass(u: GridFunction, region_radius: float) -> float:
    """Mass of dd^c u (C) or (dd^c u)^2 (C^2) on the disc/ball of the given radius about 0."""
    return mass_split(u, region_radius).total


def _split_1d(u: GridFunction, radius: float) -> MassSplit:
    x, y = u.mesh()
    disc = x**2 + y**2 < radius**2
    core = core_mask(u) & disc
    smooth_nodes = disc & ~core
    v = u.values
    smooth = 0.0
    for di, dj in _SHIFTS:
        nb = _neighbour(v, di, dj, np.nan)
        smooth += float(np.sum(nb[smooth_nodes] - v[smooth_nodes]))
    core_part = _flux_out(v, core) if core.any() else 0.0
    if not np.isfinite(smooth) or not np.isfinite(core_part):
        raise ValueError("singular core is too close to the disc boundary")
    scale = 1 / (2 * np.pi)
    return MassSplit((smooth + core_part) * scale, smooth * scale, core_part * scale)


def _split_2d(u: GridFunction, radius: float) -> MassSplit:
    h = u.step
    x1, x2 = u.mesh()
    ball = x1**2 + x2**2 < radius**2
    keep = ball & ~core_mask(u, cells=3)
    h11, h22, h12 = toric_hessian(u)
    det = h11 * h22 - h12**2
    # (dd^c u)^2 = (8/pi^2) det dV and each torus orbit has volume pi^2 |x1 x2| per slice area
    smooth = float(np.sum((8 * det * np.abs(x1 * x2))[keep]) * h * h)

    with np.errstate(invalid="ignore"):
        g1, g2 = np.gradient(u.values, h)
    ax = u.axis
    interp1 = RegularGridInterpolator((ax, ax), g1)
    interp2 = RegularGridInterpolator((ax, ax), g2)
    theta = np.linspace(0.0, np.pi / 2, ARC_POINTS)
    pts = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=-1)
    a = pts[:, 0] * interp1(pts)
    b = pts[:, 1] * interp2(pts)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite gradient on the boundary sphere")
    total = float(2 * np.sum(0.5 * (a[1:] + a[:-1]) * np.diff(b)))
    if not np.isfinite(smooth):
        smooth = float("nan")
    return MassSplit(total, smooth, total - smooth)


# --- model families and the convergence report --------------------------------


def default_epsilons(n_min: int = 1, n_max: int = 8, base: float = 2.0) -> list[float]:
    return [base**-n for n in range(n_min, n_max + 1)]


def model_family(epsilons: Sequence[float], dims: int = 1, extent: float = 1.0,
                 resolution: int | None = None) -> list[GridFunction]:
    """u_n = 1/2 log(|z|^2 + eps_n^2), decreasing to log|z| as eps_n decreases to 0."""
    if resolution is None:
        resolution = 256 if dims == 1 else 128
    return [
        GridFunction.from_function(lambda x, y, e=e: 0.5 * np.log(x**2 + y**2 + e**2), dims, extent, resolution)
        for e in epsilons
    ]


@dataclass(frozen=True)
class ConvergenceReport:
    entries: tuple[dict, ...]
    limit: float

    @property
    def masses(self) -> list[float]:
        return [e["mass"] for e in self.entries]

    def is_monotone(self, slack: float = 0.0, increasing: bool = True) -> bool:
        m = self.masses
        sign = 1 if increasing else -1
        return all(sign * (b - a) >= -slack for a, b in zip(m, m[1:]))


def _aitken(m: Sequence[float]) -> float:
    if len(m) < 3:
        return m[-1]
    a, b, c = m[-3:]
    den = c - 2 * b + a
    if abs(den) < 1e-15:
        return c
    return c - (c - b) ** 2 / den


def monotone_convergence_report(family, radius: float, epsilons: Sequence[float] | None = None,
                                oracle=None) -> ConvergenceReport:
    """Masses of a decreasing family on the disc/ball of given radius, with an extrapolated limit.

    ``family`` is a list of GridFunction, an ApproxPair (mass of u+_n - u-_n), or
    a list of epsilons, which selects the 1-d model family.  ``oracle`` maps
    (n, epsilon) to the expected mass when known; for the model family it
    defaults to the closed form.
    """
    if isinstance(family, ApproxPair):
        seq = [p - m for p, m in zip(family.plus, family.minus)]
    elif family and all(isinstance(e, (int, float)) for e in family):
        epsilons = list(family)
        seq = model_family(epsilons)
        if oracle is None:
            oracle = lambda n, e: model_mass_oracle(e, radius, 1)  # noqa: E731
    else:
        seq = list(family)
        if not is_decreasing(seq):
            raise ValueError("family is not pointwise nonincreasing")
    if not seq:
        raise ValueError("empty family")
    entries = []
    for n, u in enumerate(seq, start=1):
        eps = None if epsilons is None else float(epsilons[n - 1])
        mass = ddc_mass(u, radius)
        expected = None if oracle is None else float(oracle(n, eps))
        entries.append({
            "n": n,
            "epsilon": eps,
            "mass": mass,
            "oracle": expected,
            "abs_err": None if expected is None else abs(mass - expected),
        })
    return ConvergenceReport(tuple(entries), _aitken([e["mass"] for e in entries]))
