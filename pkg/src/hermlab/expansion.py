"""Hermite expansions: sparse coefficient tables over multi-indices.

A HermiteExpansion stores c_k for multi-indices k in N^n with per-axis
degree <= cap; absent indices mean zero.  Values live in a ValueSpace
(scalar real/complex or l^q_d, stored as a length-d array).  Spectral
analysis computes c_k(f) = integral of h_k(x) f(x) dx by grid quadrature;
synthesis sums the series pointwise.

Multi-indices are plain tuples of non-negative ints of length n.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .grids import SpatialGrid
from .hermite import eval_hermite_multi
from .spaces import ValueSpace

__all__ = [
    "HermiteExpansion",
    "analyze",
    "synthesize",
    "synthesize_on_grid",
    "random_expansion",
]

PRUNE_TOL = 1e-14


def as_multi_index(k, dim: int) -> tuple[int, ...]:
    k = tuple(int(v) for v in np.atleast_1d(k))
    if len(k) != dim:
        raise DimensionMismatchError(f"multi-index {k} has wrong length for dimension {dim}")
    if any(v < 0 for v in k):
        raise ValidationError(f"multi-index entries must be >= 0, got {k}")
    return k


@dataclass
class HermiteExpansion:
    """Finite Hermite coefficient table.

    coeffs maps multi-index tuples to values; ``cap`` bounds every per-axis
    degree.  All operations return new expansions (instances are treated
    as immutable), so they are safe to share across workers.
    """

    dim: int
    cap: int
    space: ValueSpace = field(default_factory=ValueSpace.real)
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        for k in self.coeffs:
            if len(k) != self.dim:
                raise DimensionMismatchError(f"index {k} in dimension-{self.dim} expansion")
            if max(k, default=0) > self.cap:
                raise ValidationError(f"index {k} exceeds cap {self.cap}")

    def __len__(self) -> int:
        return len(self.coeffs)

    def coefficient(self, k):
        return self.coeffs.get(as_multi_index(k, self.dim), self.space.zero())

    def map_multiplier(self, factor, promote: bool | None = None) -> "HermiteExpansion":
        """Apply a diagonal spectral multiplier: c_k -> factor(k) * c_k.

        ``factor`` takes a multi-index tuple and returns a scalar.  The value
        space is promoted to complex when any factor is complex.
        """
        new = {}
        is_complex = False
        for k, c in self.coeffs.items():
            m = factor(k)
            if not np.isfinite(m):
                raise ValidationError(f"multiplier is non-finite at lattice index {k}")
            is_complex = is_complex or isinstance(m, complex) or np.iscomplexobj(m)
            v = m * np.asarray(c) if self.space.kind == "lq" else m * c
            new[k] = v
        space = self.space
        if promote or (promote is None and is_complex):
            space = space.promote_complex()
        return HermiteExpansion(self.dim, self.cap, space, new)

    def scaled(self, a) -> "HermiteExpansion":
        return self.map_multiplier(lambda k: a)

    def __add__(self, other: "HermiteExpansion") -> "HermiteExpansion":
        if self.dim != other.dim:
            raise DimensionMismatchError("cannot add expansions of different dimension")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        space = self.space if self.space.kind != "real" else other.space
        return HermiteExpansion(self.dim, max(self.cap, other.cap), space, out)

    def l2_norm(self) -> float:
        """sqrt of sum ||c_k||_2^2 (Parseval value for Hilbert value spaces)."""
        total = 0.0
        for c in self.coeffs.values():
            total += float(np.sum(np.abs(np.asarray(c)) ** 2))
        return float(np.sqrt(total))

    def pruned(self, tol: float = PRUNE_TOL) -> "HermiteExpansion":
        kept = {
            k: c
            for k, c in self.coeffs.items()
            if np.max(np.abs(np.asarray(c))) >= tol
        }
        return replace(self, coeffs=kept)

    def to_dense(self) -> np.ndarray:
        """Dense coefficient tensor of shape (cap+1,)*dim (+ (d,) for lq)."""
        shape = (self.cap + 1,) * self.dim
        if self.space.kind == "lq":
            shape = shape + (self.space.d,)
        dtype = complex if self._any_complex() else float
        dense = np.zeros(shape, dtype=dtype)
        for k, c in self.coeffs.items():
            dense[k] = c
        return dense

    def _any_complex(self) -> bool:
        if self.space.kind == "complex":
            return True
        return any(np.iscomplexobj(np.asarray(c)) for c in self.coeffs.values())

    def allclose(self, other: "HermiteExpansion", tol: float = 1e-12) -> bool:
        keys = set(self.coeffs) | set(other.coeffs)
        for k in keys:
            a = np.asarray(self.coeffs.get(k, self.space.zero()))
            b = np.asarray(other.coeffs.get(k, other.space.zero()))
            if np.max(np.abs(a - b)) > tol:
                return False
        return True


def analyze(f, n: int, cap: int, grid: SpatialGrid, space: ValueSpace | None = None) -> HermiteExpansion:
    """Spectral analysis: coefficient table of ``f`` by grid quadrature.

    ``f`` is a callable on mesh coordinate arrays (vectorized; a scalar
    fallback loop is used if that fails) or a sample array of shape
    ``grid.shape`` (+ ``(d,)`` for vector values).  Vector-valued input is
    analyzed componentwise.
    """
    if grid.dim != n:
        raise DimensionMismatchError(f"grid dimension {grid.dim} != {n}")
    if cap > grid.design_cap:
        raise ValidationError(f"cap {cap} exceeds grid design cap {grid.design_cap}")
    if callable(f):
        mesh = grid.mesh()
        try:
            samples = np.asarray(f(*mesh))
        except Exception:
            samples = np.array([f(*pt) for pt in grid.points()]).reshape(grid.shape + (-1,))
            if samples.shape[-1] == 1:
                samples = samples[..., 0]
        if samples.shape[: len(grid.shape)] != grid.shape:
            raise ValidationError(f"callable returned shape {samples.shape} on grid {grid.shape}")
    else:
        samples = np.asarray(f)
    if not np.all(np.isfinite(samples)):
        raise ValidationError("non-finite sample values")

    vector_valued = samples.ndim == len(grid.shape) + 1
    if space is None:
        if vector_valued:
            space = ValueSpace.lq(2.0, samples.shape[-1])
        else:
            space = ValueSpace.complex() if np.iscomplexobj(samples) else ValueSpace.real()

    # Contract each spatial axis with weighted Hermite values.
    dense = samples
    for axis in range(n):
        VW = grid.hermite_values(cap, axis) * grid.axis_weights[axis]
        dense = np.moveaxis(np.tensordot(VW, dense, axes=(1, axis)), 0, axis)

    coeffs = {}
    for k in np.ndindex(*(cap + 1,) * n):
        c = dense[k]
        if vector_valued:
            if np.max(np.abs(c)) >= PRUNE_TOL:
                coeffs[k] = np.array(c)
        else:
            c = complex(c) if np.iscomplexobj(dense) else float(c)
            if abs(c) >= PRUNE_TOL:
                coeffs[k] = c
    return HermiteExpansion(n, cap, space, coeffs)


def synthesize(e: HermiteExpansion, x):
    """Pointwise synthesis sum_k c_k h_k(x)."""
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    if xx.size != e.dim:
        raise DimensionMismatchError(f"point has dimension {xx.size}, expansion {e.dim}")
    total = e.space.zero()
    for k, c in e.coeffs.items():
        total = total + c * eval_hermite_multi(k, xx)
    return total


def synthesize_on_grid(e: HermiteExpansion, grid: SpatialGrid) -> np.ndarray:
    """Synthesis on every grid node, vectorized through per-axis tables.

    Returns shape ``grid.shape`` (scalar) or ``grid.shape + (d,)`` (lq).
    """
    if grid.dim != e.dim:
        raise DimensionMismatchError("expansion and grid dimensions differ")
    dense = e.to_dense()
    for axis in range(e.dim):
        V = grid.hermite_values(e.cap, axis)
        dense = np.moveaxis(np.tensordot(V, dense, axes=(0, axis)), 0, axis)
    return dense


def random_expansion(
    n: int,
    cap: int,
    space: ValueSpace,
    rng: np.random.Generator,
) -> HermiteExpansion:
    """Expansion with independent standard-normal coefficients on the full lattice."""
    coeffs = {}
    for k in np.ndindex(*(cap + 1,) * n):
        if space.kind == "real":
            coeffs[k] = float(rng.standard_normal())
        elif space.kind == "complex":
            coeffs[k] = complex(rng.standard_normal(), rng.standard_normal())
        else:
            coeffs[k] = rng.standard_normal(space.d)
    return HermiteExpansion(n, cap, space, coeffs)
