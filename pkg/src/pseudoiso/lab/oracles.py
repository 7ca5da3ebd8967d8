"""Independent reference computations used to check the lab routines.

Nothing here shares code with the routines being checked: the envelope
oracle is a linear program solved by HiGHS, the masses are closed forms.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .grids import RadialProfile


def _constraint_rows(t: np.ndarray, base: np.ndarray) -> tuple[list, list]:
    """Rows of A u <= b encoding that u + base is nondecreasing and convex on the nodes."""
    n = t.size
    rows, rhs = [], []
    for i in range(n - 1):
        r = np.zeros(n)
        r[i], r[i + 1] = 1.0, -1.0
        rows.append(r)
        rhs.append(base[i + 1] - base[i])
    for i in range(1, n - 1):
        r = np.zeros(n)
        r[i - 1], r[i], r[i + 1] = -1.0, 2.0, -1.0
        rows.append(r)
        rhs.append(base[i + 1] - 2 * base[i] + base[i - 1])
    return rows, rhs


def envelope_lp(phi: RadialProfile, n_omega: float, objective: np.ndarray | None = None,
                floor: float = -1e3) -> np.ndarray:
    """Maximise objective . u over the discrete feasible set (default objective: all ones).

    With a positive objective the maximiser is the largest feasible element.
    Other objectives give other feasible points, used as random candidates.
    """
    t = phi.t
    w = n_omega * np.exp(2 * t)
    r1, b1 = _constraint_rows(t, w)
    r2, b2 = _constraint_rows(t, w + phi.values)
    c = -(np.ones(t.size) if objective is None else np.asarray(objective, dtype=float))
    res = linprog(
        c,
        A_ub=np.array(r1 + r2),
        b_ub=np.array(b1 + b2),
        bounds=[(floor, 0.0)] * t.size,
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    return res.x


def model_mass_oracle(epsilon: float, radius: float, dims: int = 1) -> float:
    return (radius**2 / (radius**2 + epsilon**2)) ** dims
