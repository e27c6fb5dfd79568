"""Quadrature grids: spatial boxes for L^p norms, log-uniform time grids.

Spatial integration uses composite Gauss-Legendre panels on [-L, L]^n
rather than Gauss-Hermite, because integrands such as |f|^p carry no
Gaussian weight; panel rules give uniform accuracy across all p.

Time grids discretize (0, infty)^n with the multiplicative Haar weight
dt_1...dt_n/(t_1...t_n): nodes are log-uniform and each node carries the
local Delta(log t) as its weight (midpoint rule in log coordinates).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, DimensionMismatchError, ValidationError
from .hermite import hermite_matrix
from .spaces import ValueSpace

__all__ = ["SpatialGrid", "TimeGrid", "default_grid", "composite_gauss_legendre", "lp_norm"]

MAX_DIM = 3
MAX_TOTAL_NODES = 2 ** 24  # tensor-grid memory budget

_PANEL_POINTS = 16


def composite_gauss_legendre(a: float, b: float, nodes: int, panel_points: int = _PANEL_POINTS):
    """Composite Gauss-Legendre rule with ``nodes`` total points on [a, b].

    The interval is split into equal panels of ``panel_points``-point rules;
    a leftover panel absorbs the remainder so the total is exact.
    """
    if nodes < 2 * panel_points:
        panel_points = max(4, nodes // 2)
    npanels, rem = divmod(nodes, panel_points)
    sizes = [panel_points] * npanels
    if rem >= 4:
        sizes.append(rem)
    elif rem:
        sizes[-1] += rem
    edges = np.linspace(a, b, len(sizes) + 1)
    xs, ws = [], []
    for (lo, hi), q in zip(zip(edges[:-1], edges[1:]), sizes):
        x0, w0 = np.polynomial.legendre.leggauss(q)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xs.append(mid + half * x0)
        ws.append(half * w0)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass
class SpatialGrid:
    """Tensor quadrature grid on the box [-L, L]^n.

    axes[j] / axis_weights[j] are the per-axis nodes and positive weights.
    The grid is treated as immutable; Hermite evaluations are cached on it.
    """

    dim: int
    halfwidth: float
    axes: list[np.ndarray]
    axis_weights: list[np.ndarray]
    design_cap: int = 0
    _vandermonde: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for x, w in zip(self.axes, self.axis_weights):
            if np.any(np.diff(x) <= 0):
                raise ValidationError("grid nodes must be strictly increasing")
            if np.any(w <= 0):
                raise ValidationError("grid weights must be positive")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.axes)

    @property
    def size(self) -> int:
        out = 1
        for n in self.shape:
            out *= n
        return out

    def mesh(self) -> list[np.ndarray]:
        """Coordinate arrays of shape ``self.shape`` (ij indexing)."""
        return list(np.meshgrid(*self.axes, indexing="ij"))

    def weight_mesh(self) -> np.ndarray:
        w = self.axis_weights[0]
        for wj in self.axis_weights[1:]:
            w = np.multiply.outer(w, wj)
        return w

    def hermite_values(self, cap: int, axis: int = 0) -> np.ndarray:
        """Cached matrix h_m(x_i) for m <= cap on one axis."""
        key = (cap, axis)
        if key not in self._vandermonde:
            self._vandermonde[key] = hermite_matrix(cap, self.axes[axis])
        return self._vandermonde[key]

    def points(self):
        """Iterate over grid points as tuples (row-major)."""
        return itertools.product(*self.axes)


def default_grid(n: int, cap: int, nodes_per_axis: int) -> SpatialGrid:
    """Standard box grid for expansions of per-axis degree <= cap.

    The halfwidth L = sqrt(2*cap + 1) + 4 covers the oscillatory support of
    degree-<=cap Hermite functions plus a Gaussian-tail margin.
    """
    if not 1 <= n <= MAX_DIM:
        raise BudgetError(f"dimension {n} outside supported range 1..{MAX_DIM}")
    if nodes_per_axis < 64:
        raise ValidationError("nodes_per_axis must be >= 64")
    if nodes_per_axis ** n > MAX_TOTAL_NODES:
        raise BudgetError(
            f"{nodes_per_axis}^{n} nodes exceed the {MAX_TOTAL_NODES}-node budget"
        )
    L = np.sqrt(2.0 * cap + 1.0) + 4.0
    x, w = composite_gauss_legendre(-L, L, nodes_per_axis)
    grid = SpatialGrid(
        dim=n,
        halfwidth=L,
        axes=[x.copy() for _ in range(n)],
        axis_weights=[w.copy() for _ in range(n)],
        design_cap=cap,
    )
    h0sq = float(np.sum(w * hermite_matrix(0, x)[0] ** 2)) ** n
    if abs(h0sq - 1.0) > 1e-10:
        raise ValidationError(f"grid failed normalization check: integral of h_0^2 = {h0sq}")
    return grid


@dataclass
class TimeGrid:
    """Log-uniform discretization of (0, infty)^n with dt/t weights.

    Per axis: nodes t_i = exp(log t_min + (i + 1/2) * step) and constant
    weight step = log(t_max/t_min)/nodes, so the weights sum exactly to
    log(t_max/t_min).
    """

    dim: int
    axes: list[np.ndarray]
    axis_weights: list[np.ndarray]
    t_min: float
    t_max: float

    @staticmethod
    def log_uniform(n: int, t_min: float = 1e-4, t_max: float = 40.0, nodes: int = 200) -> "TimeGrid":
        if t_min <= 0 or t_max <= t_min:
            raise ValidationError("need 0 < t_min < t_max")
        if not 1 <= n <= MAX_DIM:
            raise BudgetError(f"dimension {n} outside supported range 1..{MAX_DIM}")
        step = np.log(t_max / t_min) / nodes
        t = np.exp(np.log(t_min) + (np.arange(nodes) + 0.5) * step)
        w = np.full(nodes, step)
        return TimeGrid(
            dim=n,
            axes=[t.copy() for _ in range(n)],
            axis_weights=[w.copy() for _ in range(n)],
            t_min=t_min,
            t_max=t_max,
        )

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.axes)

    @property
    def size(self) -> int:
        out = 1
        for n in self.shape:
            out *= n
        return out

    def weight_mesh(self) -> np.ndarray:
        w = self.axis_weights[0]
        for wj in self.axis_weights[1:]:
            w = np.multiply.outer(w, wj)
        return w

    def mesh(self) -> list[np.ndarray]:
        return list(np.meshgrid(*self.axes, indexing="ij"))


def lp_norm(f, p: float, grid: SpatialGrid, space: ValueSpace | None = None) -> float:
    """L^p norm over the box: (sum_nodes w * ||f(x)||^p)^(1/p).

    ``f`` is either a HermiteExpansion or a sample array of shape
    ``grid.shape`` (scalar values) / ``grid.shape + (d,)`` (l^q_d values).
    """
    if not p > 1:
        raise ValidationError(f"p must be > 1, got {p}")
    from .expansion import HermiteExpansion, synthesize_on_grid  # cycle guard

    if isinstance(f, HermiteExpansion):
        if f.dim != grid.dim:
            raise DimensionMismatchError("expansion and grid dimensions differ")
        space = f.space
        samples = synthesize_on_grid(f, grid)
    else:
        samples = np.asarray(f)
        if space is None:
            space = ValueSpace.complex() if np.iscomplexobj(samples) else ValueSpace.real()
    if not np.all(np.isfinite(samples)):
        raise ValidationError("non-finite sample values")
    mags = space.norm_array(samples)
    if mags.shape != grid.shape:
        raise DimensionMismatchError(f"samples of shape {mags.shape} on grid {grid.shape}")
    return float(np.sum(grid.weight_mesh() * mags ** p) ** (1.0 / p))
