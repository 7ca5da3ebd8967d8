"""How singular J^* dd^c u is near the lines {x_j = x_k = 0}.

In the affine chart x0 = 1 the Cremona map is J(x) = (1/x1, 1/x2, 1/x3).  For
a smooth u the pulled-back form dd^c(u o J) has coefficients

    d_j dbar_k (u o J)(x) = u_{j kbar}(J x) / (x_j^2 conj(x_k)^2),

so with |x_j| = |x_k| = delta the mixed coefficient grows like delta^-4
whenever u_{j kbar} stays bounded away from 0 along the image.  The probe
measures that growth by finite differences and fits the exponent.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

DEFAULT_DELTAS = tuple(np.geomspace(1e-1, 1e-3, 9))
DEFAULT_BASE = (0.7 + 0.3j, -0.4 + 0.9j, 0.5 - 0.6j)
_ANGLES = (0.3, 1.1)
_REL_STEP = 1e-3


class DegenerateProbe(ValueError):
    """The probed coefficient vanishes identically along the approach."""


def cremona(x: np.ndarray) -> np.ndarray:
    return 1.0 / x


def _wirtinger_hessian(f: Callable[[np.ndarray], float], x: np.ndarray, step: float) -> np.ndarray:
    """3x3 complex Hessian [d_a dbar_b f] by central differences in the real coordinates."""
    n = x.size
    dirs = []
    for a in range(n):
        e = np.zeros(n, dtype=complex)
        e[a] = 1.0
        dirs.append(e)          # real direction p_a
        dirs.append(1j * e)     # imaginary direction q_a
    m = len(dirs)
    second = np.empty((m, m))
    for r in range(m):
        for s in range(r, m):
            dr, ds = dirs[r] * step, dirs[s] * step
            val = (f(x + dr + ds) - f(x + dr - ds) - f(x - dr + ds) + f(x - dr - ds)) / (4 * step * step)
            second[r, s] = second[s, r] = val
    hess = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            pp, qq = second[2 * a, 2 * b], second[2 * a + 1, 2 * b + 1]
            pq, qp = second[2 * a, 2 * b + 1], second[2 * a + 1, 2 * b]
            hess[a, b] = 0.25 * ((pp + qq) + 1j * (pq - qp))
    return hess


def pulled_back_hessian(u: Callable[[np.ndarray], float], x: Sequence[complex], step: float) -> np.ndarray:
    """Complex Hessian of u o J at x (chart coordinates, x0 = 1)."""
    x = np.asarray(x, dtype=complex)
    return _wirtinger_hessian(lambda y: float(u(cremona(y))), x, step)


def probe_point(delta: float, pair: tuple[int, int], base: Sequence[complex] = DEFAULT_BASE) -> np.ndarray:
    j, k = pair
    x = np.array(base, dtype=complex)
    x[j - 1] = delta * np.exp(1j * _ANGLES[0])
    x[k - 1] = delta * np.exp(1j * _ANGLES[1])
    return x


def jstar_singularity_probe(u: Callable[[np.ndarray], float], pair: tuple[int, int] = (1, 2),
                            deltas: Sequence[float] = DEFAULT_DELTAS, component: str = "mixed",
                            base: Sequence[complex] = DEFAULT_BASE) -> float:
    """Fitted exponent s in |coefficient| ~ delta^s as (x_j, x_k) -> 0 with |x_j| = |x_k| = delta.

    ``u`` takes a complex vector (w1, w2, w3) of chart coordinates.  ``pair``
    holds 1-based chart indices j != k.  ``component`` is ``"mixed"`` for the
    d_j dbar_k coefficient or ``"full"`` for the Frobenius norm of the whole
    pulled-back Hessian.
    """
    j, k = pair
    if j == k or not {j, k} <= {1, 2, 3}:
        raise ValueError("pair must hold two distinct chart indices from 1..3")
    if component not in ("mixed", "full"):
        raise ValueError("component must be 'mixed' or 'full'")
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size < 3 or np.any(deltas <= 0):
        raise ValueError("need at least three positive deltas")
    mags, scales = [], []
    for d in deltas:
        hess = pulled_back_hessian(u, probe_point(d, pair, base), _REL_STEP * d)
        diag = max(abs(hess[j - 1, j - 1]), abs(hess[k - 1, k - 1]))
        mag = abs(hess[j - 1, k - 1]) if component == "mixed" else float(np.linalg.norm(hess))
        mags.append(mag)
        scales.append(max(diag, float(np.linalg.norm(hess))))
    mags = np.array(mags)
    # finite-difference noise on an identically vanishing coefficient sits far below the diagonal
    if np.all(mags <= 1e-6 * np.array(scales)) or np.any(mags == 0.0):
        raise DegenerateProbe("probed coefficient vanishes along the approach")
    return float(np.polyfit(np.log(deltas), np.log(mags), 1)[0])
