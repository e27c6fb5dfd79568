"""Multivariate square functions and gamma-radonifying norm estimation.

The order-k square-function field of an expansion is

    G_k(f)(t, x) = sum_l c_l prod_j t_j^{k_j} (-sqrt(2 l_j + 1))^{k_j}
                             e^{-t_j sqrt(2 l_j + 1)} h_{l_j}(x_j),

i.e. each axis carries the time derivative of its own univariate Poisson
semigroup (per-coordinate eigenvalues 2 l_j + 1).  Time lives on a
TimeGrid discretizing (0, infty)^n with dt/t weights; the weighted node
indicators, normalized, form the orthonormal basis used for the
gamma-radonifying norm

    ||T||_gamma = ( E || sum_j g_j T(phi_j) ||^2 )^(1/2),

estimated by Monte Carlo over standard Gaussian draws, with the exact
Hilbert-Schmidt shortcut whenever the value space is scalar or l^2_d.

Everything that feeds a norm is evaluated through per-axis Gram matrices
(time profiles and spatial Hermite values), which is the same tensor-grid
quadrature sum reorganized so the full (x, t) field never needs to be
materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import BudgetError, DimensionMismatchError, ValidationError
from .expansion import HermiteExpansion
from .grids import SpatialGrid, TimeGrid, lp_norm
from .spaces import ValueSpace

__all__ = [
    "GFieldSample",
    "g_field",
    "hn_norm",
    "gamma_norm",
    "gamma_norm_exact",
    "gamma_norm_operator",
    "g_norm_profile",
    "g_norm_field",
    "polarization_check",
    "equivalence_experiment",
]

DEGENERATE_NORM = 1e-12


def _orders(k, dim: int) -> tuple[int, ...]:
    k = tuple(int(v) for v in np.atleast_1d(k))
    if len(k) == 1 and dim > 1:
        k = k * dim
    if len(k) != dim:
        raise DimensionMismatchError(f"order multi-index {k} for dimension {dim}")
    if any(v < 1 for v in k):
        raise ValidationError(f"derivative orders must be >= 1, got {k}")
    return k


def _time_profiles(cap: int, order: int, taxis: np.ndarray) -> np.ndarray:
    """Matrix Phi[l, it] = t^order (-mu_l)^order e^{-t mu_l}, mu_l = sqrt(2l+1)."""
    mu = np.sqrt(2.0 * np.arange(cap + 1) + 1.0)
    tt = taxis[None, :]
    return (tt * -mu[:, None]) ** order * np.exp(-tt * mu[:, None])


@dataclass
class GFieldSample:
    """Square-function field sampled on (spatial grid) x (time grid).

    values has shape sgrid.shape + tgrid.shape, plus a trailing (d,) axis
    for l^q_d value spaces.
    """

    values: np.ndarray
    sgrid: SpatialGrid
    tgrid: TimeGrid
    space: ValueSpace
    order: tuple[int, ...]


def g_field(e: HermiteExpansion, k, tgrid: TimeGrid, sgrid: SpatialGrid) -> GFieldSample:
    """Materialize the order-k square-function field of ``e``.

    Memory grows like sgrid.size * tgrid.size; use g_norm_field for norms,
    which never builds the full field.
    """
    n = e.dim
    if tgrid.dim != n or sgrid.dim != n:
        raise DimensionMismatchError("expansion, time grid and spatial grid dimensions differ")
    orders = _orders(k, n)
    if sgrid.size * tgrid.size * e.space.components > 2 ** 27:
        raise BudgetError("field too large to materialize; use g_norm_field")
    work = e.to_dense()  # (l_1..l_n[, d])
    for axis in range(n):
        V = sgrid.hermite_values(e.cap, axis)  # (cap+1, nx)
        Phi = _time_profiles(e.cap, orders[axis], tgrid.axes[axis])  # (cap+1, nt)
        U = V[:, :, None] * Phi[:, None, :]  # (cap+1, nx, nt)
        # the leading axis of work is always the next unconsumed degree axis;
        # each contraction appends this coordinate's (x, t) pair at the end
        work = np.tensordot(work, U, axes=(0, 0))
    # layout now ([d,] x_1, t_1, ..., x_n, t_n); regroup to (x..., t...[, d])
    lead = work.ndim - 2 * n  # 0 or 1 (the d axis)
    perm = [lead + 2 * j for j in range(n)] + [lead + 2 * j + 1 for j in range(n)]
    if lead:
        perm = perm + [0]
    values = np.transpose(work, perm)
    return GFieldSample(values=values, sgrid=sgrid, tgrid=tgrid, space=e.space, order=orders)


def hn_norm(v, tgrid: TimeGrid) -> float:
    """Norm in the discretized L^2((0,infty)^n, dt/t): (sum w |v|^2)^(1/2)."""
    vv = np.asarray(v)
    if vv.shape != tgrid.shape:
        raise DimensionMismatchError(f"vector of shape {vv.shape} on time grid {tgrid.shape}")
    return float(np.sqrt(np.sum(tgrid.weight_mesh() * np.abs(vv) ** 2)))


def _as_operator_vectors(field: np.ndarray, tgrid: TimeGrid, space: ValueSpace) -> np.ndarray:
    """Rows T(phi_j) = sqrt(w_j) f(t_j) of the discretized operator, shape (J, d)."""
    f = np.asarray(field)
    want = tgrid.shape if space.is_scalar else tgrid.shape + (space.components,)
    if f.shape != want:
        raise DimensionMismatchError(f"field of shape {f.shape}, expected {want}")
    if not np.all(np.isfinite(f)):
        raise ValidationError("non-finite field values")
    flat = f.reshape(tgrid.size, space.components) if not space.is_scalar else f.reshape(tgrid.size, 1)
    w = tgrid.weight_mesh().reshape(tgrid.size)
    return np.sqrt(w)[:, None] * flat


def gamma_norm_operator(
    vectors: np.ndarray, space: ValueSpace, draws: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo gamma norm of a finite-rank operator given by its rows.

    ``vectors[j]`` is the image of the j-th orthonormal basis vector.
    Returns (estimate, standard error); the standard error is the delta-
    method error of sqrt(mean ||sum_j g_j vectors[j]||^2).
    """
    if draws < 100:
        raise ValidationError("at least 100 draws required")
    vectors = np.atleast_2d(np.asarray(vectors))
    G = rng.standard_normal((draws, vectors.shape[0]))
    sums = G @ vectors  # (draws, d)
    y2 = space.norm_array(sums) ** 2
    mean = float(np.mean(y2))
    est = math.sqrt(mean)
    if est == 0.0:
        return 0.0, 0.0
    se_mean = float(np.std(y2, ddof=1)) / math.sqrt(draws)
    return est, se_mean / (2.0 * est)


def gamma_norm(
    field,
    tgrid: TimeGrid,
    space: ValueSpace,
    draws: int = 2000,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Gamma-radonifying norm of a time-grid field, by Gaussian Monte Carlo.

    The discretized field acts as a finite-rank operator from the weighted
    time-grid Hilbert space into the value space; the orthonormal basis is
    the family of normalized node indicators.
    """
    if rng is None:
        rng = np.random.default_rng(np.random.Philox(key=0 if seed is None else int(seed)))
    vectors = _as_operator_vectors(field, tgrid, space)
    return gamma_norm_operator(vectors, space, draws, rng)


def gamma_norm_exact(field, tgrid: TimeGrid, space: ValueSpace) -> float:
    """Closed-form gamma norm for Hilbert value spaces (scalar or q = 2).

    Equals the Hilbert-Schmidt norm (sum_j ||T phi_j||_2^2)^(1/2); for other
    exponents the gamma norm is not Hilbert-Schmidt and must be sampled.
    """
    if not space.is_hilbert:
        raise ValidationError("exact gamma norm requires a scalar or q = 2 value space")
    vectors = _as_operator_vectors(field, tgrid, space)
    return float(np.linalg.norm(vectors.ravel()))


def _spatial_gram(sgrid: SpatialGrid, cap: int, axis: int) -> np.ndarray:
    V = sgrid.hermite_values(cap, axis)
    return (V * sgrid.axis_weights[axis]) @ V.T


def _time_gram(tgrid: TimeGrid, cap: int, order: int, axis: int) -> np.ndarray:
    Phi = _time_profiles(cap, order, tgrid.axes[axis])
    return (Phi * tgrid.axis_weights[axis]) @ Phi.T


def g_norm_profile(
    e: HermiteExpansion,
    k,
    tgrid: TimeGrid,
    sgrid: SpatialGrid,
    draws: int = 2000,
    seed: int = 0,
) -> np.ndarray:
    """Spatial profile x -> gamma norm of the square-function field at x.

    Hilbert value spaces (scalar, q = 2) use the exact factored quadratic
    form; other l^q spaces are estimated by Monte Carlo with Gaussian draws
    shared across spatial nodes (supported for n = 1).
    """
    n = e.dim
    orders = _orders(k, n)
    dense = e.to_dense()
    caps = e.cap

    if e.space.is_hilbert:
        # hn^2(x) = sum_{l,l'} <c_l, c_l'> prod_j T_j[l_j,l_j'] h_{l_j}(x_j) h_{l_j'}(x_j)
        if n > 2:
            raise BudgetError("exact profile supports n <= 2")
        if e.space.is_scalar:
            C = np.multiply.outer(np.conj(dense), dense)  # (l..., l'...)
        else:
            C = np.tensordot(np.conj(dense), dense, axes=([-1], [-1]))
        # C axes: l_1..l_n, l'_1..l'_n
        if n == 1:
            T = _time_gram(tgrid, caps, orders[0], 0)
            V = sgrid.hermite_values(caps, 0)
            prof2 = np.einsum("ab,ab,ax,bx->x", C, T, V, V)
        else:
            T1 = _time_gram(tgrid, caps, orders[0], 0)
            T2 = _time_gram(tgrid, caps, orders[1], 1)
            V1 = sgrid.hermite_values(caps, 0)
            V2 = sgrid.hermite_values(caps, 1)
            prof2 = np.einsum(
                "abAB,aA,bB,ax,Ax,by,By->xy", C, T1, T2, V1, V1, V2, V2, optimize=True
            )
        return np.sqrt(np.clip(prof2.real, 0.0, None))

    if n != 1:
        raise BudgetError("Monte Carlo gamma profiles support n = 1")
    Phi = _time_profiles(caps, orders[0], tgrid.axes[0])  # (cap+1, nt)
    V = sgrid.hermite_values(caps, 0)  # (cap+1, nx)
    # field F[x, t, i] = sum_a dense[a, i] Phi[a, t] V[a, x]
    F = np.einsum("ai,at,ax->xti", dense, Phi, V)
    sw = np.sqrt(tgrid.axis_weights[0])
    rng = np.random.default_rng(np.random.Philox(key=seed))
    if draws < 100:
        raise ValidationError("at least 100 draws required")
    G = rng.standard_normal((draws, Phi.shape[1])) * sw  # (draws, nt)
    S = np.einsum("dt,xti->xdi", G, F)
    y2 = e.space.norm_array(S) ** 2  # (nx, draws)
    return np.sqrt(np.mean(y2, axis=1))


def g_norm_field(
    e: HermiteExpansion,
    k,
    p: float,
    tgrid: TimeGrid,
    sgrid: SpatialGrid,
    draws: int = 2000,
    seed: int = 0,
) -> float:
    """L^p-over-x norm of the gamma norm of the order-k field of ``e``."""
    prof = g_norm_profile(e, k, tgrid, sgrid, draws=draws, seed=seed)
    return lp_norm(prof, p, sgrid, space=ValueSpace.real())


def _pair_spaces_ok(f: HermiteExpansion, g: HermiteExpansion) -> None:
    sf, sg = f.space, g.space
    if sf.is_scalar and sg.is_scalar:
        return
    if sf.kind == "lq" and sg.kind == "lq" and sf.d == sg.d:
        if abs(1.0 / sf.q + 1.0 / sg.q - 1.0) < 1e-9 or sf.q == sg.q == 2.0:
            return
    raise ValidationError(
        "polarization needs scalar expansions or dual l^q/l^q' partners of equal dimension"
    )


def polarization_check(
    f: HermiteExpansion,
    g: HermiteExpansion,
    alpha,
    tgrid: TimeGrid,
    sgrid: SpatialGrid,
) -> tuple[float, float, float]:
    """Check the square-function polarization identity.

    lhs: double grid integral of <G_alpha(g), G_alpha(f)> over dt/t and dx
    (bilinear pairing, no conjugation).  rhs: prod_j Gamma(2 alpha_j) 4^{-alpha_j}
    times the grid integral of <g, f>.  Returns (lhs, rhs, residual) with
    residual = |lhs - rhs| / (|rhs| + 1e-30).
    """
    n = f.dim
    if g.dim != n:
        raise DimensionMismatchError("expansions live in different dimensions")
    _pair_spaces_ok(f, g)
    orders = _orders(alpha, n)
    cap = max(f.cap, g.cap)
    A = _dense_with_cap(f, cap)
    B = _dense_with_cap(g, cap)
    vector = f.space.kind == "lq"

    # bilinear coefficient pairing tensor P[l', l] = <B[l'], A[l]>
    if vector:
        P = np.tensordot(B, A, axes=([-1], [-1]))
    else:
        P = np.multiply.outer(B, A)

    lhs_t = P
    rhs_t = P
    for axis in range(n):
        S = _spatial_gram(sgrid, cap, axis)
        T = _time_gram(tgrid, cap, orders[axis], axis)
        lhs_t = np.moveaxis(np.tensordot(T * S, lhs_t, axes=(0, axis)), 0, axis)
        rhs_t = np.moveaxis(np.tensordot(S, rhs_t, axes=(0, axis)), 0, axis)
    # both tensors now have axes (a_1..a_n, l_1..l_n): sum the diagonal pairing
    lhs = _trace_pairing(lhs_t, n)
    inner = _trace_pairing(rhs_t, n)
    const = 1.0
    for a in orders:
        const *= float(gamma_fn(2.0 * a)) / 4.0 ** a
    rhs = const * inner
    residual = abs(lhs - rhs) / (abs(rhs) + 1e-30)
    return _maybe_real(lhs), _maybe_real(rhs), float(residual)


def _dense_with_cap(e: HermiteExpansion, cap: int) -> np.ndarray:
    if e.cap == cap:
        return e.to_dense()
    widened = HermiteExpansion(e.dim, cap, e.space, dict(e.coeffs))
    return widened.to_dense()


def _trace_pairing(t: np.ndarray, n: int):
    # sum over l of tensor[l, l] where the first n axes are primed indices
    letters = "abcdefgh"[:n]
    value = np.einsum(letters + letters + "->", t)
    return complex(value) if np.iscomplexobj(t) else float(value)


def _maybe_real(z):
    z = complex(z)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)):
        return z.real
    return z


def equivalence_experiment(
    corpus: dict[str, HermiteExpansion],
    k,
    p_values,
    tgrid: TimeGrid,
    sgrid: SpatialGrid,
    draws: int = 2000,
    seed: int = 0,
) -> dict:
    """Ratio experiment rho(f) = ||G_k f||_{L^p(gamma)} / ||f||_{L^p} over a corpus.

    Returns a payload with one record per (item, p) and summary brackets
    (1/min, max) plus quantiles.  Degenerate members are rejected.
    """
    if not corpus:
        raise ValidationError("corpus must be nonempty")
    items = []
    ratios = []
    for item_id in sorted(corpus):
        e = corpus[item_id]
        prof = None
        for p in p_values:
            denom = lp_norm(e, float(p), sgrid)
            if denom < DEGENERATE_NORM:
                raise ValidationError(f"corpus member {item_id} has degenerate norm {denom}")
            if prof is None:
                prof = g_norm_profile(
                    e, k, tgrid, sgrid, draws=draws, seed=_item_seed(seed, item_id)
                )
            num = lp_norm(prof, float(p), sgrid, space=ValueSpace.real())
            ratio = num / denom
            ratios.append(ratio)
            items.append(
                {
                    "item": item_id,
                    "p": float(p),
                    "ratio": ratio,
                    "g_norm": num,
                    "lp_norm": denom,
                }
            )
    arr = np.array(ratios)
    summary = {
        "count": len(items),
        "min": float(arr.min()),
        "max": float(arr.max()),
        "q10": float(np.quantile(arr, 0.10)),
        "median": float(np.quantile(arr, 0.50)),
        "q90": float(np.quantile(arr, 0.90)),
        "constant_lower": float(1.0 / arr.min()),
        "constant_upper": float(arr.max()),
    }
    return {"items": items, "summary": summary}


def _item_seed(seed: int, item_id: str) -> int:
    import zlib

    return (int(seed) << 32) ^ zlib.crc32(item_id.encode())
