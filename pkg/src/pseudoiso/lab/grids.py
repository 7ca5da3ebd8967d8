"""Sampled potentials: radial profiles in log-radius and uniform grids.

A ``RadialProfile`` stores u(e^t) on a uniform t-grid.  Radial u is psh
exactly when it is convex and nondecreasing in t, and (c*omega)-quasi-psh
for the reference form omega = dd^c |z|^2 when u + c e^{2t} is.

A ``GridFunction`` samples u on the square [-extent, extent]^2.  With
``dims == 1`` that square is the complex line C.  With ``dims == 2`` it is
the real slice (x1, x2) of C^2 and the samples stand for a function that is
invariant under (z1, z2) -> (e^{i s} z1, e^{i t} z2); its full complex
Hessian is recovered from the slice.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

MIN_RADIAL_NODES = 16
MIN_GRID_RESOLUTION = 32
DECREASING_TOL = 1e-12
CONVEXITY_TOL = 1e-9


def qpsh_violation(t: np.ndarray, values: np.ndarray, scale: float = 0.0) -> float:
    """Largest violation of convexity/monotonicity of values + scale * e^{2t} (0 if none)."""
    w = np.asarray(values, dtype=float) + scale * np.exp(2 * np.asarray(t, dtype=float))
    d1 = np.diff(w)
    d2 = np.diff(w, 2)
    worst = 0.0
    if d1.size:
        worst = max(worst, float(-d1.min()))
    if d2.size:
        worst = max(worst, float(-d2.min()))
    return max(worst, 0.0)


def is_qpsh(t, values, scale: float = 0.0, tol: float = CONVEXITY_TOL) -> bool:
    return qpsh_violation(t, values, scale) <= tol


@dataclass(frozen=True, eq=False)
class RadialProfile:
    t: np.ndarray
    values: np.ndarray
    psh: bool = False
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("t and values must be 1-d arrays of equal length")
        if t.size < MIN_RADIAL_NODES:
            raise ValueError(f"radial profiles need at least {MIN_RADIAL_NODES} nodes")
        steps = np.diff(t)
        if np.any(steps <= 0):
            raise ValueError("t-grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("t-grid must be uniform")
        if np.any(np.isnan(v)):
            raise ValueError("profile contains NaN samples")
        if self.psh and not is_qpsh(t, v):
            raise ValueError("profile flagged psh is not convex nondecreasing in log r")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], t_min: float = -12.0,
                      t_max: float = 0.0, nodes: int = 256, psh: bool = False) -> "RadialProfile":
        t = np.linspace(t_min, t_max, nodes)
        return cls(t, np.asarray(func(t), dtype=float), psh)

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    def with_values(self, values, psh: bool | None = None) -> "RadialProfile":
        return RadialProfile(self.t, values, self.psh if psh is None else psh, dict(self.metadata))


@dataclass(frozen=True, eq=False)
class GridFunction:
    dims: int
    extent: float
    values: np.ndarray
    singular: frozenset = frozenset()

    def __post_init__(self):
        if self.dims not in (1, 2):
            raise ValueError("dims must be 1 or 2 complex dimensions")
        if self.extent <= 0:
            raise ValueError("extent must be positive")
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("grid values must be a square 2-d array")
        if v.shape[0] < MIN_GRID_RESOLUTION:
            raise ValueError(f"resolution must be at least {MIN_GRID_RESOLUTION} per axis")
        if np.any(np.isnan(v)):
            raise ValueError("grid contains NaN samples")
        sing = frozenset(tuple(int(i) for i in s) for s in self.singular)
        bad = {tuple(int(i) for i in idx) for idx in np.argwhere(~np.isfinite(v))}
        if not bad <= sing:
            raise ValueError(f"non-finite samples at undeclared nodes {sorted(bad - sing)[:4]}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "singular", sing)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray, np.ndarray], np.ndarray], dims: int = 1,
                      extent: float = 1.0, resolution: int = 256) -> "GridFunction":
        """Sample ``func(x, y)`` on the grid; non-finite samples become declared singular nodes."""
        ax = np.linspace(-extent, extent, resolution)
        x, y = np.meshgrid(ax, ax, indexing="ij")
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.asarray(func(x, y), dtype=float)
        v = np.broadcast_to(v, x.shape).copy()
        v[np.isnan(v)] = -np.inf
        sing = frozenset(tuple(int(i) for i in idx) for idx in np.argwhere(~np.isfinite(v)))
        return cls(dims, extent, v, sing)

    @property
    def resolution(self) -> int:
        return self.values.shape[0]

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.resolution)

    @property
    def step(self) -> float:
        return 2 * self.extent / (self.resolution - 1)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def same_grid(self, other: "GridFunction") -> bool:
        return (self.dims, self.extent, self.resolution) == (other.dims, other.extent, other.resolution)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if not self.same_grid(other):
            raise ValueError("grids differ")
        with np.errstate(invalid="ignore"):
            v = self.values - other.values
        v[np.isnan(v)] = -np.inf
        return GridFunction(self.dims, self.extent, v, self.singular | other.singular)


def is_decreasing(seq: Sequence, tol: float = DECREASING_TOL) -> bool:
    """Nodewise u_{n+1} <= u_n + tol along the sequence (-inf allowed anywhere)."""
    for prev, nxt in zip(seq, seq[1:]):
        a, b = prev.values, nxt.values
        if a.shape != b.shape:
            return False
        with np.errstate(invalid="ignore"):
            ok = (b <= a + tol) | np.isneginf(b)
        if not np.all(ok):
            return False
    return True


def laplacian_5pt(u: np.ndarray, h: float) -> np.ndarray:
    """5-point Laplacian at interior nodes (NaN on the border)."""
    out = np.full(u.shape, np.nan)
    with np.errstate(invalid="ignore"):
        out[1:-1, 1:-1] = (u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2] - 4 * u[1:-1, 1:-1]) / h**2
    return out


def toric_hessian(g: GridFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Complex Hessian entries (h11, h22, h12) of a torus-invariant function on C^2 from its slice.

    At the real point (x1, x2): u_{1 1bar} = (U_11 + U_1/x1)/4, u_{2 2bar} likewise,
    u_{1 2bar} = U_12/4.  On the axes U_k/x_k is replaced by its limit U_kk.
    """
    h = g.step
    u = g.values
    with np.errstate(invalid="ignore"):
        u1, u2 = np.gradient(u, h)
        u11 = np.gradient(u1, h, axis=0)
        u22 = np.gradient(u2, h, axis=1)
        u12 = np.gradient(u1, h, axis=1)
    x1, x2 = g.mesh()
    near1 = np.abs(x1) < h / 2
    near2 = np.abs(x2) < h / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(near1, u11, u1 / np.where(near1, 1.0, x1))
        r2 = np.where(near2, u22, u2 / np.where(near2, 1.0, x2))
    return (u11 + r1) / 4, (u22 + r2) / 4, u12 / 4


def core_mask(g: GridFunction, cells: int = 2) -> np.ndarray:
    """Nodes within ``cells`` grid cells (Chebyshev distance) of a singular node."""
    mask = np.zeros(g.values.shape, dtype=bool)
    n = g.resolution
    for i, j in g.singular:
        mask[max(i - cells, 0):min(i + cells + 1, n), max(j - cells, 0):min(j + cells + 1, n)] = True
    return mask


def positivity_violation(g: GridFunction, omega_scale: float = 0.0) -> float:
    """Worst negativity of omega_scale * dd^c|z|^2 + dd^c u at interior nodes away from singular cores.

    In C this is the discrete Laplacian (plus 4 * omega_scale); in C^2 the
    smallest eigenvalue of the complex Hessian (plus omega_scale).
    """
    keep = ~core_mask(g)
    keep[[0, -1], :] = False
    keep[:, [0, -1]] = False
    if g.dims == 1:
        lap = laplacian_5pt(g.values, g.step) + 4 * omega_scale
        vals = lap[keep]
    else:
        h11, h22, h12 = toric_hessian(g)
        keep[[1, -2], :] = False
        keep[:, [1, -2]] = False
        tr = h11 + h22
        disc = np.sqrt(np.maximum((h11 - h22) ** 2 + 4 * h12**2, 0.0))
        vals = ((tr - disc) / 2 + omega_scale)[keep]
    vals = vals[np.isfinite(vals)]
    return float(max(0.0, -vals.min())) if vals.size else 0.0


@dataclass(frozen=True, eq=False)
class ApproxPair:
    """Decreasing sequences (u+_n), (u-_n) with omega + dd^c u±_n >= 0 for every n."""

    plus: tuple
    minus: tuple
    omega_scale: float
    tol: float = 1e-6

    def __post_init__(self):
        plus, minus = tuple(self.plus), tuple(self.minus)
        if len(plus) != len(minus) or not plus:
            raise ValueError("plus and minus sequences must be nonempty and of equal length")
        if self.omega_scale <= 0:
            raise ValueError("omega_scale must be positive")
        for name, seq in (("plus", plus), ("minus", minus)):
            if not is_decreasing(seq):
                raise ValueError(f"{name} sequence is not pointwise nonincreasing")
            for k, u in enumerate(seq):
                if isinstance(u, RadialProfile):
                    bad = qpsh_violation(u.t, u.values, self.omega_scale) > CONVEXITY_TOL
                else:
                    bad = positivity_violation(u, self.omega_scale) > self.tol
                if bad:
                    raise ValueError(f"{name}[{k}] fails omega + dd^c u >= 0")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)


# --- CSV ---------------------------------------------------------------------


def _header(meta: dict) -> list[str]:
    return [f"{k}={v}" for k, v in meta.items()]


def _parse_header(row: list[str]) -> dict:
    meta = {}
    for cell in row:
        key, sep, value = cell.partition("=")
        if not sep:
            raise ValueError(f"header cell {cell!r} is not key=value")
        meta[key.strip()] = value.strip()
    if meta.get("format") != "1":
        raise ValueError("unsupported or missing format version (expected format=1)")
    return meta


def _fmt(x: float) -> str:
    return repr(float(x))


def dumps_csv(obj: RadialProfile | GridFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, RadialProfile):
        w.writerow(_header({"format": 1, "kind": "radial", "t_min": _fmt(obj.t[0]),
                            "t_max": _fmt(obj.t[-1]), "nodes": obj.t.size, "psh": str(obj.psh).lower()}))
        for i, v in enumerate(obj.values):
            w.writerow([i, _fmt(v)])
    else:
        w.writerow(_header({"format": 1, "kind": "grid", "dims": obj.dims, "extent": _fmt(obj.extent),
                            "resolution": obj.resolution}))
        for i, v in enumerate(obj.values.ravel()):
            w.writerow([i, _fmt(v)])
    return buf.getvalue()


def loads_csv(text: str) -> RadialProfile | GridFunction:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ValueError("empty CSV document")
    meta = _parse_header(rows[0])
    body = rows[1:]
    values = np.empty(len(body))
    for line, row in enumerate(body, start=2):
        if len(row) != 2:
            raise ValueError(f"line {line}: expected 'node,value'")
        node, value = int(row[0]), float(row[1])
        if node != line - 2:
            raise ValueError(f"line {line}: nodes must be listed in order")
        values[node] = value
    kind = meta.get("kind")
    if kind == "radial":
        n = int(meta["nodes"])
        if n != values.size:
            raise ValueError(f"header declares {n} nodes, found {values.size}")
        t = np.linspace(float(meta["t_min"]), float(meta["t_max"]), n)
        return RadialProfile(t, values, meta.get("psh", "false") == "true")
    if kind == "grid":
        res = int(meta["resolution"])
        if res * res != values.size:
            raise ValueError(f"header declares {res}^2 nodes, found {values.size}")
        v = values.reshape(res, res)
        sing = frozenset(tuple(int(i) for i in idx) for idx in np.argwhere(~np.isfinite(v)))
        return GridFunction(int(meta["dims"]), float(meta["extent"]), v, sing)
    raise ValueError(f"unknown kind {kind!r}")


def load_csv(path: str | Path) -> RadialProfile | GridFunction:
    return loads_csv(Path(path).read_text())


def save_csv(obj: RadialProfile | GridFunction, path: str | Path) -> None:
    Path(path).write_text(dumps_csv(obj))
