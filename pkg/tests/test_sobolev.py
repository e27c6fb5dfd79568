import cmath
import math

import numpy as np
import pytest

from hermlab import (
    HermiteExpansion,
    TimeGrid,
    ValueSpace,
    apply_multiplier,
    default_grid,
    fractional_derivative_scalar,
    ladder_apply,
    lp_norm,
    negative_power,
    potential_norm,
    random_expansion,
    riesz_multiplier_symbol,
    riesz_transform,
    shift,
    sobolev_equivalence_experiment,
    sobolev_norm,
    tau_inverse_symbol,
    tau_operator,
    tau_operator_via_riesz,
    triebel_norm,
    triebel_profile,
)
from hermlab.errors import ValidationError
from hermlab.sobolev import apply_ladder_word, enumerate_ladder_words


def basis(k, n=1):
    k = tuple(np.atleast_1d(k))
    return HermiteExpansion(n, max(k), ValueSpace.real(), {k: 1.0})


def coeff_gap(a, b):
    keys = set(a.coeffs) | set(b.coeffs)
    return max(
        float(np.max(np.abs(np.asarray(a.coeffs.get(k, 0.0)) - np.asarray(b.coeffs.get(k, 0.0)))))
        for k in keys
    ) if keys else 0.0


def test_lowering_kills_ground_state():
    assert ladder_apply(basis(0), 1).coeffs == {}


def test_ladder_factorization_is_eigenvalue(rng):
    e = random_expansion(2, 4, ValueSpace.real(), rng)
    acc = HermiteExpansion(2, e.cap, e.space, {})
    for j in (1, 2):
        acc = acc + ladder_apply(ladder_apply(e, -j), j).scaled(0.5)
        acc = acc + ladder_apply(ladder_apply(e, j), -j).scaled(0.5)
    want = e.map_multiplier(lambda k: 2.0 * sum(k) + 2.0)
    assert coeff_gap(acc, want) < 1e-12


def test_ladder_matches_finite_differences(grid1d, rng):
    from hermlab import synthesize

    e = random_expansion(1, 6, ValueSpace.real(), rng)
    raised = ladder_apply(e, -1)
    h = 1e-5
    for x in (-0.8, 0.3, 1.7):
        df = (synthesize(e, x + h) - synthesize(e, x - h)) / (2 * h)
        want = -df + x * synthesize(e, x)
        assert synthesize(raised, x) == pytest.approx(want, rel=1e-6, abs=1e-8)


def test_raising_grows_cap():
    e = basis(3)
    assert ladder_apply(e, -1).cap == 4


def test_riesz_first_order_coefficients():
    for k in range(0, 6):
        r = riesz_transform(basis(k, 1), 1, 0)
        expected = math.sqrt(2.0 * (k + 1)) / math.sqrt(2.0 * k + 1.0)
        assert r.coeffs[(k + 1,)] == pytest.approx(expected, rel=1e-14)
    # same operator as raising after H^{-1/2}
    e = basis(2)
    alt = ladder_apply(negative_power(e, 0.5), -1)
    assert coeff_gap(riesz_transform(e, 1, 0), alt) < 1e-14


def test_riesz_zero_order_is_identity(rng):
    e = random_expansion(2, 4, ValueSpace.real(), rng)
    assert coeff_gap(riesz_transform(e, (0, 0), 1), e) == 0.0


def test_riesz_factorizes_through_shifts(rng):
    cases = [
        (1, (1,), 0),
        (1, (1,), 1),
        (1, (2,), 1),
        (1, (3,), 0),
        (2, (1, 2), 1),
        (2, (2, 1), 2),
    ]
    for n, m_idx, j in cases:
        e = random_expansion(n, 10 if n == 1 else 6, ValueSpace.real(), rng)
        direct = riesz_transform(e, m_idx, j)
        lower = tuple(m_idx[i] if i < j else 0 for i in range(n))
        raise_ = tuple(0 if i < j else m_idx[i] for i in range(n))
        sym = riesz_multiplier_symbol(m_idx, j, n)
        composed = shift(apply_multiplier(shift(e, lower, j), sym), raise_, j)
        assert coeff_gap(direct, composed) < 1e-12, (n, m_idx, j)


def test_shift_examples(rng):
    e = random_expansion(1, 5, ValueSpace.real(), rng)
    assert coeff_gap(shift(e, 0, 1), e) == 0.0
    fwd = shift(basis(2), 1, 0)
    assert fwd.coeffs == {(3,): 1.0}
    assert shift(basis(0), 1, 1).coeffs == {}


def test_tau_operator_display():
    t = tau_operator(basis(0), 1)
    assert t.coeffs[(0,)] == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-14)


@pytest.mark.parametrize("n,ell", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_tau_composition_identity(n, ell, rng):
    e = random_expansion(n, 10 if n == 1 else 6, ValueSpace.real(), rng)
    res = apply_multiplier(tau_operator(e, ell), tau_inverse_symbol(ell, n))
    assert coeff_gap(res, e.scaled(2.0 ** ell)) < 1e-12


def test_tau_assembly_first_order(rng):
    e = random_expansion(2, 5, ValueSpace.real(), rng)
    assert coeff_gap(tau_operator_via_riesz(e, 1), tau_operator(e, 1)) < 1e-12


def test_tau_assembly_second_order_ratio(rng):
    # direct composition carries (2|l|+n+4)^{1/2}... vs the closed display's
    # (2|l|+n+2)^{1/2}...; the coefficientwise ratio is pinned here
    n, ell = 1, 2
    e = random_expansion(n, 5, ValueSpace.real(), rng)
    via = tau_operator_via_riesz(e, ell)
    disp = tau_operator(e, ell)
    for k, v in via.coeffs.items():
        lam = 2.0 * sum(k) + n
        ratio = ((lam + 2.0) / (lam + 2.0 * ell)) ** (ell / 2.0)
        assert v == pytest.approx(disp.coeffs[k] * ratio, rel=1e-12)


def test_adjointness_of_ladders(rng):
    f = random_expansion(1, 6, ValueSpace.real(), rng)
    g = random_expansion(1, 7, ValueSpace.real(), rng)

    def dot(a, b):
        keys = set(a.coeffs) & set(b.coeffs)
        return sum(a.coeffs[k] * b.coeffs[k] for k in keys)

    assert dot(ladder_apply(f, -1), g) == pytest.approx(dot(f, ladder_apply(g, 1)), rel=1e-13)


def test_riesz_l2_contraction(rng):
    e = random_expansion(2, 8, ValueSpace.real(), rng)
    for m_idx, j in [((1, 0), 1), ((1, 1), 1), ((2, 1), 2), ((0, 3), 0), ((1, 2), 0)]:
        out = riesz_transform(e, m_idx, j)
        assert out.l2_norm() <= e.l2_norm() * (1.0 + 1e-12), (m_idx, j)


def test_word_enumeration_dedup():
    # ladders on different axes commute: cross-axis orders collapse
    words = enumerate_ladder_words(2, 2, "W")
    assert len(words) == 16
    assert len(enumerate_ladder_words(1, 2, "Wtilde")) == 2
    with pytest.raises(ValidationError):
        enumerate_ladder_words(1, 1, "w")


def test_word_application_order():
    # word (1, -1) means A_1 A_{-1}: raising acts first
    e = basis(0)
    out = apply_ladder_word(e, (1, -1))
    assert out.coeffs[(0,)] == pytest.approx(2.0)


def test_sobolev_norm_ground_state(grid1d):
    e0 = basis(0)
    p = 2.0
    w = sobolev_norm(e0, 1, p, "W", grid1d)
    expected = lp_norm(e0, p, grid1d) + math.sqrt(2.0) * lp_norm(basis(1), p, grid1d)
    assert w == pytest.approx(expected, rel=1e-12)
    wt = sobolev_norm(e0, 1, p, "Wtilde", grid1d)
    assert wt <= w + 1e-15
    zero = HermiteExpansion(1, 2, ValueSpace.real(), {})
    assert sobolev_norm(zero, 1, p, "W", grid1d) == 0.0


def test_potential_norm_examples(grid1d, rng):
    p = 2.0
    assert potential_norm(basis(0), 0.5, p, grid1d) == pytest.approx(
        lp_norm(basis(0), p, grid1d), rel=1e-12
    )
    assert potential_norm(basis(2), 1.0, p, grid1d) == pytest.approx(
        5.0 * lp_norm(basis(2), p, grid1d), rel=1e-12
    )
    e = random_expansion(1, 5, ValueSpace.real(), rng)
    assert potential_norm(negative_power(e, 0.7), 0.7, p, grid1d) == pytest.approx(
        lp_norm(e, p, grid1d), rel=1e-12
    )


def test_triebel_norm_ground_state(grid1d, tgrid1d):
    e0 = basis(0)
    p = 2.0
    got = triebel_norm(e0, 1.0, 2, p, tgrid1d, grid1d)
    base = lp_norm(e0, p, grid1d)
    assert got == pytest.approx(base * 1.5, abs=1e-6)
    with pytest.raises(ValidationError):
        triebel_norm(e0, 2.0, 2, p, tgrid1d, grid1d)
    zero = HermiteExpansion(1, 2, ValueSpace.real(), {})
    assert triebel_norm(zero, 1.0, 2, p, tgrid1d, grid1d) == 0.0


def test_triebel_modulus_identity():
    # per eigencoefficient, |t^{k-b} d_t^{k-b} P_t f| = |t^{k-b} d_t^k P_t H^{-b/2} f|
    # with unimodular phase e^{-i pi b}
    beta, k = 0.6, 2
    for lam in (1.0, 5.0, 9.0):
        mu = math.sqrt(lam)
        for t in (0.4, 1.3):
            frac = t ** (k - beta) * fractional_derivative_scalar(mu, k - beta, t)
            classical = t ** (k - beta) * (-mu) ** k * math.exp(-t * mu) * lam ** (-beta / 2.0)
            assert abs(frac) == pytest.approx(abs(classical), rel=1e-8)
            phase = frac / classical
            assert phase == pytest.approx(cmath.exp(-1j * math.pi * beta), rel=1e-8)


def test_triebel_profile_multivariate(tgrid1d, grid2d):
    # full-dimension eigenvalue: h_(0,0) has mu = sqrt(2), profile t e^{-sqrt2 t} scaled
    e = HermiteExpansion(2, 0, ValueSpace.real(), {(0, 0): 1.0})
    prof = triebel_profile(e, 1.0, 2, tgrid1d, grid2d)
    t, w = tgrid1d.axes[0], tgrid1d.axis_weights[0]
    mu = math.sqrt(2.0)
    hn = math.sqrt(float(np.sum(w * (t * mu ** 2 * np.exp(-t * mu)) ** 2)))
    h0 = grid2d.hermite_values(0, 0)[0]
    expected = hn * np.outer(h0, h0)
    assert np.max(np.abs(prof - expected)) < 1e-10


def test_sobolev_equivalence_experiment(grid1d, rng):
    corpus = {f"m{i}": random_expansion(1, 6, ValueSpace.real(), rng) for i in range(4)}
    grid = default_grid(1, 7, 400)
    payload = sobolev_equivalence_experiment(corpus, 1, [1.5, 2.0], grid)
    assert payload["summary"]["beta"] == 0.5
    for row in payload["items"]:
        assert row["sobolev_tilde"] <= row["sobolev_full"] + 1e-12
        assert row["potential"] > 0
    # scaling invariance of the ratios
    one = {"x": random_expansion(1, 5, ValueSpace.real(), rng)}
    ten = {"x": one["x"].scaled(10.0)}
    a = sobolev_equivalence_experiment(one, 1, [2.0], grid)["items"][0]
    b = sobolev_equivalence_experiment(ten, 1, [2.0], grid)["items"][0]
    assert a["sobolev_full"] / a["potential"] == pytest.approx(
        b["sobolev_full"] / b["potential"], abs=1e-10
    )
