"""Experiment orchestration: dispatch, corpora, fan-out, reports.

Every experiment draws its random inputs from counter-based generators
keyed by (seed, item id), so reports are bit-identical across runs and
across worker counts; Monte Carlo numbers are identical given the seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import ExperimentConfig, item_rng
from .errors import ValidationError
from .expansion import HermiteExpansion, analyze, random_expansion, synthesize_on_grid
from .gfunction import equivalence_experiment, polarization_check
from .grids import TimeGrid, default_grid, lp_norm
from .hermite import hermite_matrix
from .multiplier import (
    GrowthModel,
    half_ratio_symbol,
    identity_4_1_check,
    identity_symbol,
    imaginary_power_symbol,
    meda_condition,
    riesz_multiplier_symbol,
    tau_inverse_symbol,
)
from .report import ExperimentReport, export
from .semigroup import (
    SubordinationQuadrature,
    kernel_decay_check,
    mehler_kernel_1d,
    poisson_apply_subordination,
)
from .sobolev import potential_norm, sobolev_equivalence_experiment, triebel_norm
from .spaces import ValueSpace
from .symbols import parse_symbol

__all__ = ["run", "resolve_symbol"]


def resolve_symbol(name: str, n: int, sector: float | None = None):
    """Catalog lookup by name, else the expression grammar."""
    if name == "identity":
        return identity_symbol(n)
    if name == "half-ratio":
        return half_ratio_symbol(n)
    if name.startswith("imaginary-power:"):
        return imaginary_power_symbol(float(name.split(":", 1)[1]), n)
    if name.startswith("tau-inverse:"):
        return tau_inverse_symbol(int(name.split(":", 1)[1]), n)
    if name.startswith("riesz:"):
        # riesz:m1,m2@j
        body = name.split(":", 1)[1]
        m_part, _, j_part = body.partition("@")
        m_idx = tuple(int(s) for s in m_part.split(","))
        return riesz_multiplier_symbol(m_idx, int(j_part or 0), n)
    return parse_symbol(name, n, sector=sector)


def _corpus(cfg: ExperimentConfig, space: ValueSpace, cap: int) -> dict[str, HermiteExpansion]:
    out = {}
    for i in range(cfg.corpus):
        item_id = f"item-{i:04d}"
        out[item_id] = random_expansion(cfg.n, cap, space, item_rng(cfg.seed, item_id))
    return out


def _map_items(cfg: ExperimentConfig, ids, fn):
    """Order-independent fan-out; results assembled keyed by id."""
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = dict(zip(ids, pool.map(fn, ids)))
    else:
        results = {i: fn(i) for i in ids}
    return [results[i] for i in ids]


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def _exp_basis(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    grid = default_grid(cfg.n, cfg.cap, cfg.spatial_nodes)
    items = []
    ortho_cap = min(cfg.cap, 32)
    V = grid.hermite_values(ortho_cap, 0)
    G = (V * grid.axis_weights[0]) @ V.T
    ortho_err = float(np.max(np.abs(G - np.eye(ortho_cap + 1))))
    items.append({"item": "orthonormality", "value": ortho_err})
    space = cfg.space()
    worst_parseval = 0.0
    worst_roundtrip = 0.0
    for rec in _map_items(cfg, [f"item-{i:04d}" for i in range(cfg.corpus)],
                          lambda item_id: _basis_item(cfg, grid, space, item_id)):
        items.append(rec)
        worst_parseval = max(worst_parseval, rec["parseval_residual"])
        worst_roundtrip = max(worst_roundtrip, rec["roundtrip_residual"])
    summary = {
        "orthonormality_max_error": ortho_err,
        "max_parseval_residual": worst_parseval,
        "max_roundtrip_residual": worst_roundtrip,
    }
    return items, summary, {}


def _basis_item(cfg, grid, space, item_id):
    e = random_expansion(cfg.n, cfg.cap, space, item_rng(cfg.seed, item_id))
    samples = synthesize_on_grid(e, grid)
    parseval = abs(lp_norm(samples, 2.0, grid, space=space) ** 2 - e.l2_norm() ** 2)
    back = analyze(samples, cfg.n, cfg.cap, grid, space=space)
    worst = 0.0
    for k in set(e.coeffs) | set(back.coeffs):
        a = np.asarray(e.coeffs.get(k, space.zero()))
        b = np.asarray(back.coeffs.get(k, space.zero()))
        worst = max(worst, float(np.max(np.abs(a - b))))
    return {"item": item_id, "parseval_residual": parseval, "roundtrip_residual": worst}


def _exp_kernel(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    if cfg.n != 1:
        raise ValidationError("kernel identity suite runs in dimension 1")
    grid = default_grid(1, max(cfg.cap, 8), cfg.spatial_nodes)
    x, w = grid.axes[0], grid.axis_weights[0]
    items = []
    V = grid.hermite_values(60, 0)
    for t in (0.5, 1.0, 2.0):
        K = mehler_kernel_1d(t, x[:, None], x[None, :])
        S = (V.T * np.exp(-(2.0 * np.arange(61) + 1.0) * t)) @ V
        items.append({"item": f"spectral-consistency-t{t}", "value": float(np.max(np.abs(K - S)))})
        worst = 0.0
        for k in range(9):
            act = K @ (w * V[k])
            worst = max(worst, float(np.max(np.abs(act - math.exp(-(2 * k + 1) * t) * V[k]))))
        items.append({"item": f"eigen-action-t{t}", "value": worst})
    K8 = mehler_kernel_1d(8.0, x[:, None], x[None, :])
    items.append({
        "item": "long-time-limit",
        "value": float(np.max(np.abs(math.exp(8.0) * K8 - np.outer(V[0], V[0])))),
    })
    quad = SubordinationQuadrature.default()
    items.append({"item": "subordination-identity", "value": quad.check_identity()})
    e0 = HermiteExpansion(1, 0, ValueSpace.real(), {(0,): 1.0})
    worst = 0.0
    for t in (0.1, 1.0, 5.0):
        got = poisson_apply_subordination(e0, t, quad).coeffs[(0,)]
        worst = max(worst, abs(got - math.exp(-t)))
    items.append({"item": "poisson-subordination-h0", "value": worst})
    for order in (1, 2):
        rep = kernel_decay_check(order, quad=quad)
        items.append({"item": f"decay-constant-l{order}", "value": rep.constant})
    summary = {"max_identity_error": max(r["value"] for r in items if "decay" not in r["item"])}
    return items, summary, {}


def _exp_polarization(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    sgrid = default_grid(cfg.n, cfg.cap, cfg.spatial_nodes)
    tgrid = TimeGrid.log_uniform(cfg.n, cfg.t_min, cfg.t_max, cfg.time_nodes)
    space = cfg.space()
    ids = [f"pair-{i:04d}" for i in range(cfg.corpus)]

    def one(item_id):
        rng = item_rng(cfg.seed, item_id)
        f = random_expansion(cfg.n, cfg.cap, space, rng)
        g = random_expansion(cfg.n, cfg.cap, space, rng)
        lhs, rhs, residual = polarization_check(f, g, cfg.alpha, tgrid, sgrid)
        return {"item": item_id, "lhs": float(np.real(lhs)), "rhs": float(np.real(rhs)),
                "residual": residual}

    items = _map_items(cfg, ids, one)
    residuals = [r["residual"] for r in items]
    summary = {"max_residual": max(residuals), "mean_residual": float(np.mean(residuals))}
    series = {"residual": [(i, r) for i, r in enumerate(residuals)]}
    return items, summary, series


def _exp_equivalence(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    space = cfg.space()
    sgrid = default_grid(cfg.n, cfg.cap, cfg.spatial_nodes)
    tgrid = TimeGrid.log_uniform(cfg.n, cfg.t_min, cfg.t_max, cfg.time_nodes)
    sgrid.hermite_values(cfg.cap, 0)  # prewarm shared cache before fan-out
    corpus = _corpus(cfg, space, cfg.cap)

    def one(item_id):
        payload = equivalence_experiment(
            {item_id: corpus[item_id]}, cfg.order, cfg.p, tgrid, sgrid,
            draws=cfg.draws, seed=cfg.seed,
        )
        return payload["items"]

    rows = [r for chunk in _map_items(cfg, sorted(corpus), one) for r in chunk]
    ratios = np.array([r["ratio"] for r in rows])
    summary = {
        "count": len(rows),
        "min": float(ratios.min()),
        "max": float(ratios.max()),
        "q10": float(np.quantile(ratios, 0.10)),
        "median": float(np.quantile(ratios, 0.50)),
        "q90": float(np.quantile(ratios, 0.90)),
        "constant_lower": float(1.0 / ratios.min()),
        "constant_upper": float(ratios.max()),
    }
    series = {"ratio": [(i, float(r)) for i, r in enumerate(ratios)]}
    return rows, summary, series


def _exp_meda(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    sym = resolve_symbol(cfg.symbol, cfg.n, cfg.sector)
    growth = GrowthModel(cfg.growth, omega=cfg.omega)
    res = meda_condition(sym, cfg.alpha, growth, u_cutoff=cfg.u_cutoff)
    items = [dict(row) for row in res.per_axis]
    for row in items:
        row["item"] = f"axis-{row.pop('axis')}"
    summary = {
        "finite": res.finite,
        "value": res.value if math.isfinite(res.value) else math.inf,
        "truncated_integral": res.truncated_integral,
        "tail_estimate": res.tail_estimate if math.isfinite(res.tail_estimate) else math.inf,
        "decay_rates": list(res.decay_rates),
        "envelope_scale": res.envelope_scale,
        "refinements": res.refinements,
    }
    return items, summary, {}


def _exp_identity41(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    cap = min(cfg.cap, 6)
    sym = resolve_symbol(cfg.symbol, cfg.n, cfg.sector)
    ids = [f"item-{i:04d}" for i in range(cfg.corpus)]

    def one(item_id):
        e = random_expansion(cfg.n, cap, ValueSpace.real(), item_rng(cfg.seed, item_id))
        res = identity_4_1_check(e, sym, cfg.alpha, u_cutoff=min(cfg.u_cutoff, 30.0))
        return {"item": item_id, "residual": res}

    items = _map_items(cfg, ids, one)
    summary = {"max_residual": max(r["residual"] for r in items)}
    return items, summary, {"residual": [(i, r["residual"]) for i, r in enumerate(items)]}


def _exp_sobolev(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    space = cfg.space()
    grid = default_grid(cfg.n, cfg.cap + cfg.ell, cfg.spatial_nodes)
    corpus = _corpus(cfg, space, cfg.cap)
    payload = sobolev_equivalence_experiment(corpus, cfg.ell, cfg.p, grid, beta=cfg.beta)
    rows = payload["items"]
    series = {
        "wtilde_over_pot": [
            (i, row["sobolev_tilde"] / row["potential"]) for i, row in enumerate(rows)
        ]
    }
    return rows, payload["summary"], series


def _exp_fspace(cfg: ExperimentConfig) -> tuple[list, dict, dict]:
    space = cfg.space()
    beta = cfg.beta if cfg.beta is not None else 1.0
    if not cfg.k_order > beta:
        raise ValidationError("fspace experiment needs k_order > beta")
    sgrid = default_grid(cfg.n, cfg.cap, cfg.spatial_nodes)
    tgrid = TimeGrid.log_uniform(1, cfg.t_min, cfg.t_max, cfg.time_nodes)
    corpus = _corpus(cfg, space, cfg.cap)

    def one(item_id):
        e = corpus[item_id]
        rows = []
        for p in cfg.p:
            tn = triebel_norm(e, beta, cfg.k_order, float(p), tgrid, sgrid)
            pot = lp_norm(e, float(p), sgrid) + potential_norm(e, beta / 2.0, float(p), sgrid)
            rows.append({"item": item_id, "p": float(p), "triebel": tn, "potential": pot,
                         "ratio": tn / pot})
        return rows

    rows = [r for chunk in _map_items(cfg, sorted(corpus), one) for r in chunk]
    ratios = np.array([r["ratio"] for r in rows])
    summary = {
        "count": len(rows),
        "beta": beta,
        "k": cfg.k_order,
        "min": float(ratios.min()),
        "max": float(ratios.max()),
        "median": float(np.median(ratios)),
    }
    return rows, summary, {"ratio": [(i, float(r)) for i, r in enumerate(ratios)]}


_DISPATCH = {
    "basis-identities": _exp_basis,
    "kernel-identities": _exp_kernel,
    "polarization": _exp_polarization,
    "equivalence": _exp_equivalence,
    "meda-condition": _exp_meda,
    "identity-4.1": _exp_identity41,
    "sobolev-equivalence": _exp_sobolev,
    "fspace-equivalence": _exp_fspace,
}


def run(cfg: ExperimentConfig) -> ExperimentReport:
    """Run the configured experiment; write outputs when cfg.out is set."""
    try:
        fn = _DISPATCH[cfg.experiment]
    except KeyError:
        raise ValidationError(f"unknown experiment {cfg.experiment!r}") from None
    items, summary, series = fn(cfg)
    report = ExperimentReport(
        experiment=cfg.experiment,
        config=cfg.echo(),
        items=items,
        summary=summary,
        series=series,
    )
    if cfg.out:
        export(report, cfg.format, cfg.out)
    return report
