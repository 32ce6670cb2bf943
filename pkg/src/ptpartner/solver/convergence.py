"""Grid-refinement studies for the finite-difference spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..potential import Hamiltonian
from .contour import Contour
from .spectrum import solve_fd


@dataclass
class ConvergenceResult:
    order: float
    degenerate: bool
    level: int
    n_points: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    values: list = field(default_factory=list)

    def errors(self):
        """Successive-difference error proxy |lambda_i - lambda_{i+1}| per grid."""
        v = np.asarray(self.values)
        return list(np.abs(np.diff(v)))


def observed_order(steps, values, floor=1e-13):
    """Slope of log|lambda_{i+1} - lambda_i| against log h_i.

    Returns ``(order, degenerate)``. When any difference is at round-off level
    (relative to ``floor``) the fit is meaningless and NaN is returned with
    ``degenerate=True``.
    """
    h = np.asarray(steps, dtype=float)
    v = np.asarray(values, dtype=complex)
    if h.size < 3:
        raise ValueError("need at least three grids")
    diffs = np.abs(np.diff(v))
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.any(diffs <= floor * scale):
        return math.nan, True
    slope, _ = np.polyfit(np.log(h[:-1]), np.log(diffs), 1)
    return float(slope), False


def convergence_study(h: Hamiltonian, c: Contour, n_list, level: int, method="auto") -> ConvergenceResult:
    """Observed order of the FD eigenvalue ``level`` over the grids in ``n_list``."""
    n_list = [int(n) for n in n_list]
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing with at least 3 entries")
    steps, values = [], []
    for n in n_list:
        grid = c.with_points(n)
        spec = solve_fd(h, grid, level + 1, method=method)
        steps.append(grid.step)
        values.append(complex(spec.eigenvalues[level]))
    order, degenerate = observed_order(steps, values)
    return ConvergenceResult(order, degenerate, level, n_list, steps, values)
