"""Spectral multipliers on the Hermite eigenvalue lattice.

A bounded symbol m on (0, infty)^n acts diagonally: the coefficient at
multi-index k is multiplied by m(2 k_1 + 1, ..., 2 k_n + 1).  Imaginary
powers are the unimodular special case m(lambda) = prod lambda_j^{i b_j}.

The Mellin-type transform behind the multiplier theorem is, per symbol
and integer orders alpha_j >= 1,

    Mel_alpha(t, u) = integral over (0,infty)^n of
        prod_j lambda_j^{-i u_j - 1} (t_j lambda_j)^{alpha_j}
               e^{-t_j lambda_j / 2} * m(lambda_1^2, ..., lambda_n^2) dlambda.

The lambda integral is computed on a log grid; when the symbol is
holomorphic on a sector, the contour is rotated toward the imaginary
axis (lambda = rho e^{i theta}, theta up to the sector half-angle),
which removes the catastrophic cancellation that otherwise makes the
exponentially small large-|u| values unreachable in double precision.

The integrability check multiplies sup_t |Mel| by a configured growth
model for the imaginary-power operator norms and integrates over a
cutoff box, extrapolating the tail from the fitted exponential decay;
the reference envelope is prod_j (1 + |u_j|) |Gamma(alpha_j - i u_j)|
up to a calibrated constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import BudgetError, NonConvergenceError, ValidationError
from .expansion import HermiteExpansion
from .grids import composite_gauss_legendre
from .hermite import hermite_matrix

__all__ = [
    "MultiplierSymbol",
    "apply_multiplier",
    "imaginary_power",
    "MellinSample",
    "mellin_transform",
    "gamma_envelope",
    "GrowthModel",
    "MedaResult",
    "meda_condition",
    "identity_4_1_check",
    "identity_symbol",
    "imaginary_power_symbol",
    "half_ratio_symbol",
    "riesz_multiplier_symbol",
    "tau_inverse_symbol",
    "SYMBOL_CATALOG",
    "build_symbol",
]

LATTICE_SAMPLE_CAP = 40
ROTATION_MARGIN = 0.12


@dataclass
class MultiplierSymbol:
    """Evaluator of a spectral symbol m: (0, infty)^n -> C.

    evaluator takes n arrays (broadcastable) and returns an array; it must
    be pure (safe for concurrent calls) and accept complex input when a
    sector is declared.  ``sector`` is the half-angle psi of a C^n sector
    on which m is asserted bounded holomorphic.  ``factors`` optionally
    lists univariate callables with m(z) = prod_j factors[j](z_j); fully
    separable symbols let transforms factor per axis.
    """

    dim: int
    evaluator: object
    bound: float = 0.0
    sector: float | None = None
    factors: list | None = None
    name: str = ""

    def __post_init__(self):
        if self.sector is not None and not 0.0 < self.sector <= math.pi:
            raise ValidationError("sector half-angle must lie in (0, pi]")
        if self.bound == 0.0:
            self.bound = self.sampled_bound()

    def __call__(self, *args):
        return self.evaluator(*args)

    def sampled_bound(self, cap: int = LATTICE_SAMPLE_CAP) -> float:
        lam = 2.0 * np.arange(cap + 1) + 1.0
        if self.dim == 1:
            vals = np.asarray(self.evaluator(lam))
        else:
            mesh = np.meshgrid(*([lam] * self.dim), indexing="ij")
            vals = np.asarray(self.evaluator(*mesh))
        if not np.all(np.isfinite(vals)):
            raise ValidationError(f"symbol {self.name or '<anonymous>'} non-finite on the lattice")
        return float(np.max(np.abs(vals)))

    def axis_factor(self, axis: int):
        """Univariate factor for one axis; requires separability for n > 1."""
        if self.dim == 1:
            return self.evaluator
        if self.factors is None:
            raise ValidationError(
                f"symbol {self.name or '<anonymous>'} is not separable; per-axis transform unavailable"
            )
        return self.factors[axis]


def apply_multiplier(e: HermiteExpansion, sym: MultiplierSymbol) -> HermiteExpansion:
    """Diagonal action c_k -> m(2k_1+1, ..., 2k_n+1) c_k."""
    if sym.dim != e.dim:
        raise ValidationError(f"symbol dimension {sym.dim} != expansion dimension {e.dim}")

    def factor(k):
        lam = tuple(2.0 * kj + 1.0 for kj in k)
        val = complex(np.asarray(sym.evaluator(*(np.array([l]) for l in lam))).ravel()[0])
        return val.real if val.imag == 0.0 else val

    return e.map_multiplier(factor)


def imaginary_power(e: HermiteExpansion, beta) -> HermiteExpansion:
    """Unimodular multiplier c_k -> prod_j (2k_j+1)^{i beta_j}."""
    b = np.atleast_1d(np.asarray(beta, dtype=float))
    if b.size == 1 and e.dim > 1:
        b = np.repeat(b, e.dim)
    if b.size != e.dim:
        raise ValidationError(f"beta has {b.size} entries for dimension {e.dim}")

    def factor(k):
        phase = sum(bj * math.log(2.0 * kj + 1.0) for kj, bj in zip(k, b))
        return complex(math.cos(phase), math.sin(phase))

    return e.map_multiplier(factor)


# ---------------------------------------------------------------------------
# Mellin transform
# ---------------------------------------------------------------------------

def _rotation_angle(sector: float | None) -> float:
    if sector is None:
        return 0.0
    return max(0.0, min(sector / 2.0, math.pi / 2.0) - ROTATION_MARGIN)


def _log_contour(theta: float, u_max: float) -> tuple[np.ndarray, np.ndarray]:
    # fixed grid in v = log(t lambda / 2); panel width resolves e^{-i u v}
    v_lo = math.log(1e-9)
    v_hi = math.log(1e3 / max(math.cos(theta), 0.05))
    width = min(0.35, 4.5 / max(1.0, u_max))
    nodes = 16 * max(24, int(math.ceil((v_hi - v_lo) / width)))
    return composite_gauss_legendre(v_lo, v_hi, nodes, panel_points=16)


def _mellin_axis(
    factor_fn,
    alpha_j: int,
    t_vals: np.ndarray,
    u_vals: np.ndarray,
    sector: float | None,
) -> np.ndarray:
    """Univariate transform table of shape (len(t), len(u))."""
    t_vals = np.asarray(t_vals, dtype=float)
    u_vals = np.asarray(u_vals, dtype=float)
    theta0 = _rotation_angle(sector)
    out = np.empty((t_vals.size, u_vals.size), dtype=complex)
    u_max = float(np.max(np.abs(u_vals))) if u_vals.size else 1.0
    for sign, pick in ((1.0, u_vals >= 0.0), (-1.0, u_vals < 0.0)):
        if not np.any(pick):
            continue
        u = u_vals[pick]
        theta = -sign * theta0
        v, wv = _log_contour(theta0, u_max)
        zeta = np.exp(v + 1j * theta)  # = t*lambda/2 on the rotated ray
        lam_over = 2.0 * zeta[None, :] / t_vals[:, None]  # lambda per (t, node)
        base = (wv * np.exp(alpha_j * (v + 1j * theta)) * np.exp(-zeta))[None, :] * np.asarray(
            factor_fn(lam_over ** 2)
        )
        phase = np.exp(-1j * np.outer(u, v))  # (nu, K)
        core = base @ phase.T  # (nt, nu)
        scale = np.exp(u * theta)[None, :] * np.exp(
            -1j * np.outer(np.log(2.0 / t_vals), u)
        )
        out[:, pick] = 2.0 ** alpha_j * scale * core
    return out


@dataclass
class MellinSample:
    """Sampled Mellin table of a symbol for integer orders alpha.

    For separable symbols (and always for n = 1) the per-axis tables
    multiply to the full transform; ``table`` holds the materialized
    tensor when it was computed directly (non-separable n = 2).
    """

    alpha: tuple[int, ...]
    t_nodes: list[np.ndarray]
    u_nodes: list[np.ndarray]
    axis_tables: list[np.ndarray] | None = None
    table: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.t_nodes)

    def full(self) -> np.ndarray:
        """Full tensor over (t_1..t_n, u_1..u_n)."""
        if self.table is not None:
            return self.table
        out = self.axis_tables[0]
        for axis_table in self.axis_tables[1:]:
            out = np.multiply.outer(out, axis_table)
        if self.dim == 2:
            out = np.transpose(out, (0, 2, 1, 3))
        return out

    def sup_over_t(self) -> np.ndarray:
        """sup over the t-ladder of |Mel|, per u node (tensor for n >= 2)."""
        if self.axis_tables is not None:
            out = np.max(np.abs(self.axis_tables[0]), axis=0)
            for axis_table in self.axis_tables[1:]:
                out = np.multiply.outer(out, np.max(np.abs(axis_table), axis=0))
            return out
        mags = np.abs(self.table)
        return mags.max(axis=tuple(range(self.dim)))


def mellin_transform(
    sym: MultiplierSymbol,
    alpha,
    t_nodes,
    u_nodes,
) -> MellinSample:
    """Sample the Mellin-type transform on (t, u) node sets.

    ``t_nodes``/``u_nodes`` are arrays shared by every axis or lists of
    per-axis arrays.  Separable symbols factor per axis; non-separable
    symbols are supported for n <= 2 by direct tensor quadrature (coarse
    node budgets apply).
    """
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    n = sym.dim
    if len(alpha) == 1 and n > 1:
        alpha = alpha * n
    if len(alpha) != n:
        raise ValidationError(f"alpha {alpha} for dimension {n}")
    if any(a < 1 for a in alpha):
        raise ValidationError("mellin orders alpha_j must be >= 1")
    t_list = [np.asarray(t, dtype=float) for t in (t_nodes if isinstance(t_nodes, (list, tuple)) else [t_nodes] * n)]
    u_list = [np.asarray(u, dtype=float) for u in (u_nodes if isinstance(u_nodes, (list, tuple)) else [u_nodes] * n)]
    if len(t_list) != n or len(u_list) != n:
        raise ValidationError("node lists must have one entry per axis")

    if n == 1 or sym.factors is not None:
        tables = [
            _mellin_axis(sym.axis_factor(j), alpha[j], t_list[j], u_list[j], sym.sector)
            for j in range(n)
        ]
        return MellinSample(alpha=alpha, t_nodes=t_list, u_nodes=u_list, axis_tables=tables)

    if n != 2:
        raise BudgetError("non-separable Mellin transforms support n <= 2")
    return _mellin_full_2d(sym, alpha, t_list, u_list)


def _mellin_full_2d(sym, alpha, t_list, u_list) -> MellinSample:
    theta0 = _rotation_angle(sym.sector)
    u_max = max(float(np.max(np.abs(u))) if u.size else 1.0 for u in u_list)
    if any(t.size > 24 for t in t_list) or any(u.size > 64 for u in u_list):
        raise BudgetError("non-separable 2-d Mellin restricted to <=24 t and <=64 u nodes per axis")
    table = np.empty(
        (t_list[0].size, t_list[1].size, u_list[0].size, u_list[1].size), dtype=complex
    )
    for i1, t1 in enumerate(t_list[0]):
        for i2, t2 in enumerate(t_list[1]):
            for s1 in (1.0, -1.0):
                pick1 = u_list[0] >= 0 if s1 > 0 else u_list[0] < 0
                if not np.any(pick1):
                    continue
                th1 = -s1 * theta0
                v1, w1 = _log_contour(theta0, u_max)
                z1 = np.exp(v1 + 1j * th1)
                lam1 = 2.0 * z1 / t1
                for s2 in (1.0, -1.0):
                    pick2 = u_list[1] >= 0 if s2 > 0 else u_list[1] < 0
                    if not np.any(pick2):
                        continue
                    th2 = -s2 * theta0
                    v2, w2 = _log_contour(theta0, u_max)
                    z2 = np.exp(v2 + 1j * th2)
                    lam2 = 2.0 * z2 / t2
                    M = np.asarray(sym.evaluator(lam1[:, None] ** 2, lam2[None, :] ** 2))
                    W = (
                        (w1 * np.exp(alpha[0] * (v1 + 1j * th1)) * np.exp(-z1))[:, None]
                        * (w2 * np.exp(alpha[1] * (v2 + 1j * th2)) * np.exp(-z2))[None, :]
                        * M
                    )
                    ua, ub = u_list[0][pick1], u_list[1][pick2]
                    E1 = np.exp(-1j * np.outer(ua, v1))
                    E2 = np.exp(-1j * np.outer(ub, v2))
                    block = E1 @ W @ E2.T
                    scale = (
                        2.0 ** (alpha[0] + alpha[1])
                        * np.exp(ua * th1)[:, None]
                        * np.exp(ub * th2)[None, :]
                        * np.exp(-1j * math.log(2.0 / t1) * ua)[:, None]
                        * np.exp(-1j * math.log(2.0 / t2) * ub)[None, :]
                    )
                    table[i1, i2][np.ix_(np.where(pick1)[0], np.where(pick2)[0])] = (
                        scale * block
                    )
    return MellinSample(alpha=alpha, t_nodes=t_list, u_nodes=u_list, table=table)


def gamma_envelope(alpha, u, scale: float = 1.0) -> np.ndarray:
    """Reference decay envelope prod_j (1+|u_j|) |Gamma(alpha_j - i u_j)|.

    The envelope dominates sup_t |Mel_alpha| up to a constant; ``scale``
    carries that calibration.
    """
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    us = [np.asarray(x, dtype=float) for x in (u if isinstance(u, (list, tuple)) else [u])]
    if len(us) == 1 and len(alpha) > 1:
        us = us * len(alpha)
    out = None
    for a, uu in zip(alpha, us):
        env = (1.0 + np.abs(uu)) * np.abs(gamma_fn(a - 1j * uu))
        out = env if out is None else np.multiply.outer(out, env)
    return scale * out


# ---------------------------------------------------------------------------
# integrability of the multiplier condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthModel:
    """Model for the operator-norm growth of imaginary powers in |u|.

    kind "exponential": factor exp(omega * sum |u_j|); the honest omega for
    a given value space is analytically out of reach, so it is caller
    configuration.  kind "polynomial": factor prod (1 + |u_j|)^degree
    (scalar-case growth).
    """

    kind: str = "exponential"
    omega: float = 1.0
    degree: float = 2.0

    def __post_init__(self):
        if self.kind not in ("exponential", "polynomial"):
            raise ValidationError(f"unknown growth model {self.kind!r}")
        if self.kind == "exponential" and self.omega < 0:
            raise ValidationError("omega must be >= 0")

    def factor_1d(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "exponential":
            return np.exp(self.omega * np.abs(u))
        return (1.0 + np.abs(u)) ** self.degree


@dataclass
class MedaResult:
    finite: bool
    value: float
    truncated_integral: float
    tail_estimate: float
    u_cutoff: float
    decay_rates: list[float]
    envelope_scale: float
    refinements: int
    per_axis: list[dict] = field(default_factory=list)


def _t_ladder(count: int) -> np.ndarray:
    return np.geomspace(1e-3, 1e2, count)


def meda_condition(
    sym: MultiplierSymbol,
    alpha,
    growth: GrowthModel,
    u_cutoff: float = 40.0,
    sup_rtol: float = 0.01,
    max_refinements: int = 4,
) -> MedaResult:
    """Estimate integral of sup_t |Mel_alpha(t, u)| * growth(u) du.

    The sup over t is taken on a log ladder refined x2 until it moves less
    than ``sup_rtol``; the verdict comes from the fitted exponential decay
    rate of the integrand on the outer part of the cutoff box, and the tail
    beyond the cutoff is extrapolated from that fit.  Separable symbols
    factor per axis (required for n > 1).
    """
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    n = sym.dim
    if len(alpha) == 1 and n > 1:
        alpha = alpha * n
    u_nodes, u_weights = composite_gauss_legendre(0.0, u_cutoff, 16 * 28, panel_points=16)
    axis_data = []
    refinements = 0
    for j in range(n):
        factor_fn = sym.axis_factor(j)
        prev_sup = None
        ladder = 60
        for r in range(max_refinements + 1):
            # modulus is even in u for the two-sided sup when combined with
            # the opposite-sign table; compute both signs and take the max
            tab_p = _mellin_axis(factor_fn, alpha[j], _t_ladder(ladder), u_nodes, sym.sector)
            tab_m = _mellin_axis(factor_fn, alpha[j], _t_ladder(ladder), -u_nodes, sym.sector)
            sup = np.maximum(np.max(np.abs(tab_p), axis=0), np.max(np.abs(tab_m), axis=0))
            if prev_sup is not None:
                move = np.max(np.abs(sup - prev_sup) / (np.abs(prev_sup) + 1e-300))
                if move < sup_rtol:
                    break
            prev_sup = sup
            ladder *= 2
            refinements = max(refinements, r + 1)
        else:
            raise NonConvergenceError(
                f"sup over t did not stabilize within {max_refinements} refinements",
                residual=float(move),
            )
        axis_data.append(sup)

    # integrand per axis (two-sided integral = 2x one-sided by even modulus
    # of the combined sup), decay rate from the outer 40% of the window
    total = 1.0
    tail_total = 0.0
    rates = []
    per_axis = []
    for j, sup in enumerate(axis_data):
        integrand = sup * growth.factor_1d(u_nodes)
        part = 2.0 * float(np.sum(u_weights * integrand))
        outer = u_nodes >= 0.6 * u_cutoff
        logs = np.log(integrand[outer] + 1e-300)
        slope = float(np.polyfit(u_nodes[outer], logs, 1)[0])
        rates.append(slope)
        if slope < -1e-3:
            tail = 2.0 * float(integrand[-1] / -slope)
        else:
            tail = math.inf
        per_axis.append(
            {
                "axis": j,
                "truncated": part,
                "slope": slope,
                "tail": tail,
                "sup_at_cutoff": float(sup[-1]),
            }
        )
        total *= part
        tail_total = max(tail_total, 0.0 if math.isinf(tail) else tail)

    finite = all(r < -1e-3 for r in rates)
    envelope_scale = 0.0
    env = gamma_envelope(alpha, [u_nodes] * n)
    if n == 1:
        envelope_scale = float(np.max(axis_data[0] / np.maximum(env, 1e-300)))
    if not finite:
        return MedaResult(
            finite=False,
            value=math.inf,
            truncated_integral=total,
            tail_estimate=math.inf,
            u_cutoff=u_cutoff,
            decay_rates=rates,
            envelope_scale=envelope_scale,
            refinements=refinements,
            per_axis=per_axis,
        )
    # for n = 1 the tail adds; for products the dominant-axis tail bounds the rest
    value = total + (tail_total if n == 1 else tail_total * total)
    return MedaResult(
        finite=True,
        value=value,
        truncated_integral=total,
        tail_estimate=tail_total,
        u_cutoff=u_cutoff,
        decay_rates=rates,
        envelope_scale=envelope_scale,
        refinements=refinements,
        per_axis=per_axis,
    )


# ---------------------------------------------------------------------------
# transference identity between multiplier and square-function fields
# ---------------------------------------------------------------------------

def identity_4_1_check(
    e: HermiteExpansion,
    sym: MultiplierSymbol,
    alpha,
    t_probes=None,
    x_probes=None,
    u_cutoff: float = 30.0,
) -> float:
    """Residual of the Mellin-inversion identity for the multiplier field.

    Left side: square-function field of order alpha+1 applied to T_m f,
    spectrally.  Right side: (2 pi)^{-n} integral over u of Mel_alpha(t, u)
    times the order-1 half-time field of L^{i u/2} f, with the phase
    (-1)^{|alpha|} restored so the identity holds for every integer order
    (the raw display is exact only for even |alpha|; moduli agree always).
    Returns max |lhs - rhs| / max |lhs| over the probe set.
    """
    n = e.dim
    if n > 2:
        raise BudgetError("identity check supports n <= 2")
    if e.cap > 6:
        raise BudgetError("identity check supports degree cap <= 6")
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    if len(alpha) == 1 and n > 1:
        alpha = alpha * n
    if any(a < 1 for a in alpha):
        raise ValidationError("orders alpha_j must be >= 1")
    if t_probes is None:
        t_probes = np.geomspace(0.1, 5.0, 20)
    t_probes = np.asarray(t_probes, dtype=float)
    if x_probes is None:
        x_probes = np.linspace(-3.0, 3.0, 20)
    x_probes = np.asarray(x_probes, dtype=float)

    if len(e.coeffs) == 0:
        return 0.0

    mu = np.sqrt(2.0 * np.arange(e.cap + 1) + 1.0)
    V = hermite_matrix(e.cap, x_probes)  # (cap+1, nx)

    # u quadrature nodes; tail beyond cutoff decays like e^{-pi |u| / 2}
    u_nodes, u_weights = composite_gauss_legendre(-u_cutoff, u_cutoff, 16 * 60, panel_points=16)

    # per-axis inversion integrals J[a, t] = (2 pi)^-1 int Mel(t,u) mu_a^{iu} du
    J = []
    for j in range(n):
        tab = _mellin_axis(sym.axis_factor(j), alpha[j], t_probes, u_nodes, sym.sector)
        phases = np.exp(1j * np.outer(np.log(mu), u_nodes))  # (cap+1, nu)
        J.append((tab * u_weights) @ phases.T / (2.0 * math.pi))  # (nt, cap+1)

    dense = e.to_dense()
    sign = (-1.0) ** sum(alpha)
    if n == 1:
        lamv = mu ** 2
        mvals = np.asarray(sym.evaluator(lamv))
        lhs_fac = (
            mvals[:, None]
            * (np.outer(-mu, t_probes)) ** (alpha[0] + 1)
            * np.exp(-np.outer(mu, t_probes))
        )  # (cap+1, nt)
        rhs_fac = (-np.outer(mu, t_probes)) * np.exp(-np.outer(mu, t_probes) / 2.0) * J[0].T
        lhs = np.einsum("a,at,ax->tx", dense, lhs_fac, V)
        rhs = sign * np.einsum("a,at,ax->tx", dense.astype(complex), rhs_fac, V)
    else:
        mvals = np.asarray(
            sym.evaluator(*np.meshgrid(mu ** 2, mu ** 2, indexing="ij"))
        )  # (cap+1, cap+1)
        lhs_ax = []
        rhs_ax = []
        for j in range(n):
            lhs_ax.append(
                (np.outer(-mu, t_probes)) ** (alpha[j] + 1) * np.exp(-np.outer(mu, t_probes))
            )
            rhs_ax.append(
                (-np.outer(mu, t_probes)) * np.exp(-np.outer(mu, t_probes) / 2.0) * J[j].T
            )
        lhs = np.einsum(
            "ab,ab,at,bs,ax,by->tsxy", dense, mvals, lhs_ax[0], lhs_ax[1], V, V, optimize=True
        )
        rhs = sign * np.einsum(
            "ab,at,bs,ax,by->tsxy", dense.astype(complex), rhs_ax[0], rhs_ax[1], V, V,
            optimize=True,
        )
    scale = float(np.max(np.abs(lhs)))
    if scale == 0.0:
        return float(np.max(np.abs(rhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale)


# ---------------------------------------------------------------------------
# built-in symbol catalog
# ---------------------------------------------------------------------------

def identity_symbol(n: int = 1) -> MultiplierSymbol:
    def one(*z):
        return np.ones(np.broadcast(*z).shape) if len(z) > 1 else np.ones_like(np.asarray(z[0]), dtype=float)

    return MultiplierSymbol(
        dim=n,
        evaluator=one,
        sector=math.pi,
        factors=[lambda z: np.ones_like(np.asarray(z, dtype=complex).real)] * n if n > 1 else None,
        name="identity",
    )


def imaginary_power_symbol(beta, n: int = 1) -> MultiplierSymbol:
    b = np.atleast_1d(np.asarray(beta, dtype=float))
    if b.size == 1 and n > 1:
        b = np.repeat(b, n)

    def make_axis(bj):
        return lambda z: np.asarray(z, dtype=complex) ** (1j * bj)

    factors = [make_axis(bj) for bj in b]

    def ev(*z):
        out = factors[0](z[0])
        for f, zz in zip(factors[1:], z[1:]):
            out = out * f(zz)
        return out

    return MultiplierSymbol(
        dim=n, evaluator=ev, sector=math.pi / 2.0, factors=factors if n > 1 else None,
        name=f"imaginary-power{tuple(b)}",
    )


def half_ratio_symbol(n: int = 1) -> MultiplierSymbol:
    """The sector-rational symbol sqrt(z/(z+1)) per axis."""

    def axis(z):
        z = np.asarray(z, dtype=complex)
        return np.sqrt(z / (z + 1.0))

    def ev(*zs):
        out = axis(zs[0])
        for zz in zs[1:]:
            out = out * axis(zz)
        return out

    return MultiplierSymbol(
        dim=n, evaluator=ev, sector=math.pi / 2.0, factors=[axis] * n if n > 1 else None,
        name="half-ratio",
    )


def riesz_multiplier_symbol(m_idx, j_split: int, n: int = 1) -> MultiplierSymbol:
    """Symbol realizing the Riesz transform through shifts.

    For axes up to j_split (the lowered block) the numerator carries
    sqrt(z_l + 2(m_l - s) - 1), s = 0..m_l-1; for the raised block
    sqrt(z_l + 2s - 1), s = 1..m_l; the denominator is
    (sum z + 2 sum_{l<=j} m_l)^{|m|/2}.
    """
    m_idx = tuple(int(v) for v in np.atleast_1d(m_idx))
    if len(m_idx) == 1 and n > 1:
        m_idx = m_idx * n
    if len(m_idx) != n:
        raise ValidationError(f"order multi-index {m_idx} for dimension {n}")
    if not 0 <= j_split <= n:
        raise ValidationError(f"split index must lie in 0..{n}")
    total = sum(m_idx)
    shift = 2.0 * sum(m_idx[:j_split])

    def ev(*zs):
        zs = [np.asarray(z, dtype=complex) for z in zs]
        num = 1.0
        for ell, z in enumerate(zs):
            if ell < j_split:
                for s in range(m_idx[ell]):
                    num = num * np.sqrt(z + 2.0 * (m_idx[ell] - s) - 1.0)
            else:
                for s in range(1, m_idx[ell] + 1):
                    num = num * np.sqrt(z + 2.0 * s - 1.0)
        den = (sum(zs) + shift) ** (total / 2.0)
        return num / den

    return MultiplierSymbol(
        dim=n, evaluator=ev, sector=math.pi / 2.0, name=f"riesz{m_idx}-split{j_split}"
    )


def tau_inverse_symbol(ell: int, n: int = 1) -> MultiplierSymbol:
    """Symbol whose multiplier composes with tau_ell to 2^ell times identity."""
    if ell < 1:
        raise ValidationError("ell must be >= 1")

    def ev(*zs):
        zs = [np.asarray(z, dtype=complex) for z in zs]
        s = sum(zs)
        den = 0.0
        for z in zs:
            term = 1.0
            for m in range(1, ell + 1):
                term = term * (z / 2.0 + m - 0.5)
            den = den + term
        return (s + 2.0) ** (ell / 2.0) * s ** (ell / 2.0) / den

    return MultiplierSymbol(dim=n, evaluator=ev, sector=math.pi / 2.0, name=f"tau-inverse-{ell}")


SYMBOL_CATALOG = {
    "identity": identity_symbol,
    "imaginary-power": imaginary_power_symbol,
    "half-ratio": half_ratio_symbol,
    "riesz": riesz_multiplier_symbol,
    "tau-inverse": tau_inverse_symbol,
}


def build_symbol(name: str, n: int = 1, **params) -> MultiplierSymbol:
    """Instantiate a catalog symbol by name."""
    if name not in SYMBOL_CATALOG:
        raise ValidationError(f"unknown symbol {name!r}; catalog: {sorted(SYMBOL_CATALOG)}")
    builder = SYMBOL_CATALOG[name]
    if name == "identity" or name == "half-ratio":
        return builder(n)
    if name == "imaginary-power":
        return builder(params.get("beta", 1.0), n)
    if name == "riesz":
        return builder(params.get("m", (1,)), params.get("j", 0), n)
    return builder(params.get("ell", 1), n)
