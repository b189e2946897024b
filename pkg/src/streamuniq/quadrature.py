"""Product integration of the logarithmic Volterra kernel on a radial grid.

For samples v_j of a function v on grid nodes, the operator value

    K(r_i) = int_{r0}^{r_i} tau * ln(r_i / tau) * v(tau) dtau

is computed for the piecewise-linear interpolant of v.  The kernel is split
as ln(r_i/tau) = ln(r_i/r0) - ln(tau/r0), which turns the whole family
{K(r_i)} into two prefix sums (see ``_kernels.prefix_moments``) and keeps the
cost at O(n) for all nodes together.  Second order in the mesh size holds for
smooth v; grading the grid toward r0 recovers it for the square-root-type
integrands this package feeds in.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DomainError
from .grids import RadialGrid


def _as_grid_arrays(grid, values):
    if isinstance(grid, RadialGrid):
        nodes = grid.nodes
        lw = grid.log_weights
    else:
        nodes = np.asarray(grid, dtype=np.float64)
        if nodes.ndim != 1 or nodes.size < 2 or not np.all(np.diff(nodes) > 0.0):
            raise DomainError("grid must be a strictly increasing 1-d array")
        lw = np.log1p((nodes - nodes[0]) / nodes[0])
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.shape != nodes.shape:
        raise DomainError("values must match the grid nodes")
    if not np.all(np.isfinite(values)):
        raise DomainError("values must be finite")
    return nodes, lw, values


def kernel_prefix(grid, values):
    """Prefix moments (A, B) with K_i = log_weights_i * A_i - B_i."""
    nodes, lw, values = _as_grid_arrays(grid, values)
    return _kernels.prefix_moments(nodes, lw, values)


def kernel_integral_all(grid, values) -> np.ndarray:
    """K(r_i) for every node at once; K[0] = 0."""
    nodes, lw, values = _as_grid_arrays(grid, values)
    A, B = _kernels.prefix_moments(nodes, lw, values)
    return lw * A - B


def kernel_integral(grid, values, r_index: int) -> float:
    """K at a single node index."""
    nodes, lw, values = _as_grid_arrays(grid, values)
    n = nodes.size
    if not (-n <= r_index < n):
        raise DomainError(f"node index {r_index} out of range for {n} nodes")
    r_index %= n
    stop = r_index + 1
    A, B = _kernels.prefix_moments(nodes[:stop], lw[:stop], values[:stop])
    return float(lw[r_index] * A[-1] - B[-1])
