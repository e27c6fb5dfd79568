import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermlab import (
    HermiteExpansion,
    ValueSpace,
    analyze,
    default_grid,
    eval_hermite,
    lp_norm,
    random_expansion,
    synthesize,
    synthesize_on_grid,
)
from hermlab.errors import BudgetError, ValidationError


def test_default_grid_halfwidth_formula():
    g = default_grid(1, 0, 64)
    assert g.halfwidth == pytest.approx(5.0)
    g32 = default_grid(1, 32, 400)
    assert g32.halfwidth == pytest.approx(math.sqrt(65) + 4)


def test_default_grid_normalization(grid1d, grid2d):
    for g in (grid1d, grid2d):
        w = g.axis_weights[0]
        h0 = np.pi ** -0.25 * np.exp(-0.5 * g.axes[0] ** 2)
        assert abs(float(np.sum(w * h0 ** 2)) ** g.dim - 1.0) < 1e-10


def test_default_grid_budgets():
    with pytest.raises(ValidationError):
        default_grid(1, 8, 32)
    with pytest.raises(BudgetError):
        default_grid(3, 8, 600)


def test_orthonormality(grid1d):
    V = grid1d.hermite_values(32)
    G = (V * grid1d.axis_weights[0]) @ V.T
    assert np.max(np.abs(G - np.eye(33))) < 1e-10


def test_analyze_picks_out_basis_function(grid1d):
    e = analyze(lambda x: eval_hermite(3, x), 1, 8, grid1d)
    assert e.coeffs[(3,)] == pytest.approx(1.0, abs=1e-12)
    assert all(abs(v) < 1e-9 for k, v in e.coeffs.items() if k != (3,))


def test_analyze_gaussian_moment(grid1d):
    e = analyze(lambda u: u * np.exp(-u * u / 2.0), 1, 8, grid1d)
    assert set(e.coeffs) == {(1,)}
    assert e.coeffs[(1,)] == pytest.approx(math.sqrt(math.sqrt(math.pi) / 2.0), rel=1e-12)


def test_analyze_zero_function(grid1d):
    e = analyze(lambda x: np.zeros_like(x), 1, 8, grid1d)
    assert len(e) == 0


def test_analyze_rejects_nonfinite(grid1d):
    with pytest.raises(ValidationError):
        analyze(lambda x: np.where(x > 0, np.inf, 1.0), 1, 4, grid1d)


def test_synthesize_single_coefficient():
    e = HermiteExpansion(1, 0, ValueSpace.real(), {(0,): 1.0})
    assert synthesize(e, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)
    empty = HermiteExpansion(1, 4, ValueSpace.real(), {})
    assert synthesize(empty, 1.3) == 0.0


def test_round_trip_random_expansions(grid1d, rng):
    for _ in range(3):
        e = random_expansion(1, 8, ValueSpace.real(), rng)
        back = analyze(synthesize_on_grid(e, grid1d), 1, 8, grid1d)
        assert e.allclose(back, 1e-9)


def test_round_trip_vector_valued(grid1d, rng):
    space = ValueSpace.lq(4.0, 3)
    e = random_expansion(1, 6, space, rng)
    back = analyze(synthesize_on_grid(e, grid1d), 1, 6, grid1d, space=space)
    assert e.allclose(back, 1e-9)


def test_componentwise_linearity(grid1d, rng):
    space = ValueSpace.lq(3.0, 2)
    a = random_expansion(1, 5, space, rng)
    b = random_expansion(1, 5, space, rng)
    lhs = synthesize_on_grid(a + b, grid1d)
    rhs = synthesize_on_grid(a, grid1d) + synthesize_on_grid(b, grid1d)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_lp_norm_normalization_and_oracle(grid1d):
    e0 = HermiteExpansion(1, 0, ValueSpace.real(), {(0,): 1.0})
    assert lp_norm(e0, 2.0, grid1d) == pytest.approx(1.0, abs=1e-10)
    # p = 4 Gaussian oracle: (1/pi * int e^{-2u^2} du)^{1/4} = (2 pi)^{-1/8}
    assert lp_norm(e0, 4.0, grid1d) == pytest.approx((2 * math.pi) ** -0.125, rel=1e-10)
    assert lp_norm(e0.scaled(2.0), 4.0, grid1d) == pytest.approx(
        2 * lp_norm(e0, 4.0, grid1d), rel=1e-12
    )


def test_lp_norm_invalid_p(grid1d):
    e0 = HermiteExpansion(1, 0, ValueSpace.real(), {(0,): 1.0})
    with pytest.raises(ValidationError):
        lp_norm(e0, 1.0, grid1d)


def test_parseval(grid1d, rng):
    for _ in range(3):
        e = random_expansion(1, 16, ValueSpace.real(), rng)
        n2 = lp_norm(e, 2.0, grid1d) ** 2
        assert abs(n2 - e.l2_norm() ** 2) < 1e-8


def test_two_dimensional_analysis(grid2d):
    e = analyze(
        lambda x, y: np.asarray(eval_hermite(2, x)) * np.asarray(eval_hermite(3, y)),
        2,
        8,
        grid2d,
    )
    assert e.coeffs[(2, 3)] == pytest.approx(1.0, abs=1e-10)
    assert len(e) == 1


@settings(max_examples=20, deadline=None)
@given(
    q=st.floats(1.0, 8.0),
    d=st.integers(1, 5),
    scale=st.floats(-3.0, 3.0),
)
def test_value_space_norm_homogeneity_and_triangle(q, d, scale):
    space = ValueSpace.lq(q, d)
    base = np.linspace(-1.0, 1.0, d)
    other = np.linspace(0.5, -0.7, d)
    assert space.norm(scale * base) == pytest.approx(abs(scale) * space.norm(base), rel=1e-12)
    assert space.norm(base + other) <= space.norm(base) + space.norm(other) + 1e-12


def test_value_space_q2_is_euclidean():
    space = ValueSpace.lq(2.0, 4)
    v = np.array([1.0, -2.0, 3.0, 0.5])
    assert space.norm(v) == pytest.approx(float(np.linalg.norm(v)), rel=1e-15)
