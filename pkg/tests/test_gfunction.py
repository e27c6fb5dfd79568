import math

import numpy as np
import pytest

from hermlab import (
    HermiteExpansion,
    TimeGrid,
    ValueSpace,
    equivalence_experiment,
    g_field,
    g_norm_field,
    gamma_norm,
    gamma_norm_exact,
    gamma_norm_operator,
    hn_norm,
    lp_norm,
    polarization_check,
    random_expansion,
)
from hermlab.errors import ValidationError


def scalar(coeffs, n=1, cap=None):
    cap = cap if cap is not None else max(max(k) for k in coeffs)
    return HermiteExpansion(n, cap, ValueSpace.real(), coeffs)


def test_time_grid_weight_sum():
    tg = TimeGrid.log_uniform(2, 1e-4, 40.0, 160)
    for w in tg.axis_weights:
        assert float(np.sum(w)) == pytest.approx(math.log(40.0 / 1e-4), abs=1e-12)
    assert np.all(np.diff(tg.axes[0]) > 0)


def test_hn_norm_exponential_profile(tgrid1d):
    v = tgrid1d.axes[0] * np.exp(-tgrid1d.axes[0])
    assert hn_norm(v, tgrid1d) == pytest.approx(0.5, abs=1e-6)
    assert hn_norm(np.zeros_like(v), tgrid1d) == 0.0
    assert hn_norm(3.0 * v, tgrid1d) == pytest.approx(3.0 * hn_norm(v, tgrid1d), rel=1e-14)


def test_g_field_ground_state(tgrid1d, grid1d):
    e0 = scalar({(0,): 1.0})
    fld = g_field(e0, 1, tgrid1d, grid1d)
    t = tgrid1d.axes[0]
    h0 = grid1d.hermite_values(0)[0]
    expected = -t[None, :] * np.exp(-t)[None, :] * h0[:, None]
    assert np.max(np.abs(fld.values - expected)) < 1e-14


def test_g_field_linearity(tgrid1d, grid1d, rng):
    a = random_expansion(1, 4, ValueSpace.real(), rng)
    b = random_expansion(1, 4, ValueSpace.real(), rng)
    lhs = g_field(a + b, 1, tgrid1d, grid1d).values
    rhs = g_field(a, 1, tgrid1d, grid1d).values + g_field(b, 1, tgrid1d, grid1d).values
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_g_field_tensor_product():
    tg = TimeGrid.log_uniform(2, nodes=40)
    from hermlab import default_grid

    sg = default_grid(2, 2, 96)
    e = HermiteExpansion(2, 0, ValueSpace.real(), {(0, 0): 1.0})
    fld = g_field(e, (1, 1), tg, sg)
    h0 = np.pi ** -0.25 * np.exp(-0.5 * sg.axes[0] ** 2)
    pro = tg.axes[0] * np.exp(-tg.axes[0])
    expected = (
        h0[:, None, None, None]
        * h0[None, :, None, None]
        * pro[None, None, :, None]
        * pro[None, None, None, :]
    )
    assert np.max(np.abs(fld.values - expected)) < 1e-13


def test_g_field_rejects_zero_order(tgrid1d, grid1d):
    with pytest.raises(ValidationError):
        g_field(scalar({(0,): 1.0}), 0, tgrid1d, grid1d)


def test_gamma_norm_scalar_matches_hn(tgrid1d):
    v = tgrid1d.axes[0] * np.exp(-tgrid1d.axes[0])
    space = ValueSpace.real()
    exact = gamma_norm_exact(v, tgrid1d, space)
    assert exact == pytest.approx(hn_norm(v, tgrid1d), abs=1e-10)
    est, se = gamma_norm(v, tgrid1d, space, draws=2000, seed=5)
    assert abs(est - exact) <= 3 * se


def test_gamma_norm_zero_field(tgrid1d):
    est, se = gamma_norm(np.zeros(tgrid1d.shape), tgrid1d, ValueSpace.real(), draws=200, seed=0)
    assert est == 0.0 and se == 0.0


def test_gamma_norm_requires_draws(tgrid1d):
    with pytest.raises(ValidationError):
        gamma_norm(np.ones(tgrid1d.shape), tgrid1d, ValueSpace.real(), draws=10, seed=0)


def test_gamma_norm_hilbert_shortcut(tgrid1d):
    v = tgrid1d.axes[0] * np.exp(-tgrid1d.axes[0])
    d = 3
    field = np.repeat(v[:, None], d, axis=1)
    hs = gamma_norm_exact(field, tgrid1d, ValueSpace.lq(2.0, d))
    assert hs == pytest.approx(math.sqrt(d) * hn_norm(v, tgrid1d), rel=1e-12)
    est, se = gamma_norm(field, tgrid1d, ValueSpace.lq(2.0, d), draws=2000, seed=9)
    assert abs(est - hs) <= 3 * se
    with pytest.raises(ValidationError):
        gamma_norm_exact(field, tgrid1d, ValueSpace.lq(4.0, d))


def test_gamma_norm_basis_rotation_invariance(tgrid1d, rng):
    nt = tgrid1d.shape[0]
    v = np.sin(np.log(tgrid1d.axes[0])) * np.exp(-tgrid1d.axes[0] / 4.0) * tgrid1d.axes[0] ** 0.5
    field = np.stack([v, 0.5 * v], axis=1)
    space = ValueSpace.lq(2.0, 2)
    w = tgrid1d.weight_mesh().ravel()
    vectors = np.sqrt(w)[:, None] * field
    Q, _ = np.linalg.qr(rng.standard_normal((nt, nt)))
    base = float(np.linalg.norm(vectors.ravel()))
    rotated = float(np.linalg.norm((Q @ vectors).ravel()))
    assert abs(base - rotated) < 1e-10
    # general exponent: rotation invariance within Monte Carlo 3 sigma
    space4 = ValueSpace.lq(4.0, 2)
    rng1, rng2 = np.random.default_rng(1), np.random.default_rng(2)
    e1, s1 = gamma_norm_operator(vectors, space4, 2000, rng1)
    e2, s2 = gamma_norm_operator(Q @ vectors, space4, 2000, rng2)
    assert abs(e1 - e2) <= 3 * math.hypot(s1, s2)


def test_g_norm_field_ground_state(tgrid1d, grid1d):
    e0 = scalar({(0,): 1.0})
    base = g_norm_field(e0, 1, 2.0, tgrid1d, grid1d)
    assert base == pytest.approx(0.5, abs=1e-5)
    assert g_norm_field(e0.scaled(4.0), 1, 2.0, tgrid1d, grid1d) == pytest.approx(
        4 * base, rel=1e-10
    )


def test_g_norm_field_duplicated_components(tgrid1d, grid1d):
    d = 4
    e = HermiteExpansion(1, 0, ValueSpace.lq(2.0, d), {(0,): np.ones(d)})
    assert g_norm_field(e, 1, 2.0, tgrid1d, grid1d) == pytest.approx(
        math.sqrt(d) * 0.5, abs=1e-5
    )


def test_polarization_ground_state(tgrid1d, grid1d):
    e0 = scalar({(0,): 1.0})
    lhs, rhs, res = polarization_check(e0, e0, 1, tgrid1d, grid1d)
    assert rhs == pytest.approx(0.25, abs=1e-12)
    assert res < 1e-6


def test_polarization_orthogonal_pair(tgrid1d, grid1d):
    e0, e1 = scalar({(0,): 1.0}), scalar({(1,): 1.0})
    lhs, rhs, _ = polarization_check(e0, e1, 1, tgrid1d, grid1d)
    assert abs(lhs) < 1e-12 and abs(rhs) < 1e-12


def test_polarization_random_2d(tgrid2d, grid2d, rng):
    f = random_expansion(2, 8, ValueSpace.real(), rng)
    g = random_expansion(2, 8, ValueSpace.real(), rng)
    _, _, res = polarization_check(f, g, (2, 1), tgrid2d, grid2d)
    assert res < 1e-5


def test_polarization_dual_pairing_spaces(tgrid1d, grid1d, rng):
    f = random_expansion(1, 4, ValueSpace.lq(4.0, 2), rng)
    g = random_expansion(1, 4, ValueSpace.lq(4.0 / 3.0, 2), rng)
    _, _, res = polarization_check(f, g, 1, tgrid1d, grid1d)
    assert res < 1e-5
    with pytest.raises(ValidationError):
        polarization_check(f, random_expansion(1, 4, ValueSpace.lq(3.0, 2), rng), 1, tgrid1d, grid1d)


def test_ratio_degeneracy_all_orders(tgrid1d, grid1d, rng):
    # at p = 2 the scalar ratio is sqrt(Gamma(2k)) / 2^k for every expansion
    e = random_expansion(1, 10, ValueSpace.real(), rng)
    denom = lp_norm(e, 2.0, grid1d)
    for k, expected in ((1, 0.5), (2, math.sqrt(6.0) / 4.0)):
        ratio = g_norm_field(e, k, 2.0, tgrid1d, grid1d) / denom
        assert ratio == pytest.approx(expected, abs=1e-5)


def test_equivalence_experiment_ground_state(tgrid1d, grid1d):
    payload = equivalence_experiment({"h0": scalar({(0,): 1.0})}, 1, [2.0], tgrid1d, grid1d, seed=0)
    assert payload["items"][0]["ratio"] == pytest.approx(0.5, abs=1e-5)


def test_equivalence_experiment_scale_invariance(tgrid1d, grid1d, rng):
    e = random_expansion(1, 6, ValueSpace.real(), rng)
    a = equivalence_experiment({"x": e}, 1, [1.5, 3.0], tgrid1d, grid1d, seed=4)
    b = equivalence_experiment({"x": e.scaled(10.0)}, 1, [1.5, 3.0], tgrid1d, grid1d, seed=4)
    for ra, rb in zip(a["items"], b["items"]):
        assert ra["ratio"] == pytest.approx(rb["ratio"], abs=1e-10)


def test_equivalence_experiment_rejects_degenerate(tgrid1d, grid1d):
    zero = HermiteExpansion(1, 2, ValueSpace.real(), {(0,): 1e-15})
    with pytest.raises(ValidationError):
        equivalence_experiment({"zero": zero}, 1, [2.0], tgrid1d, grid1d, seed=0)


def test_equivalence_experiment_seed_reproducible(tgrid1d, grid1d, rng):
    corpus = {f"i{j}": random_expansion(1, 4, ValueSpace.lq(4.0, 2), rng) for j in range(3)}
    a = equivalence_experiment(corpus, 1, [2.0], tgrid1d, grid1d, draws=400, seed=7)
    b = equivalence_experiment(corpus, 1, [2.0], tgrid1d, grid1d, draws=400, seed=7)
    assert a == b
