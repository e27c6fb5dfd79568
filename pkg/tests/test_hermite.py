import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermlab import eval_hermite, eval_hermite_multi, hermite_matrix
from hermlab.errors import DimensionMismatchError


def hermite_polynomial_value(m, x):
    """Brute-force oracle: physicists' polynomial by exact integer recurrence."""
    coeffs = {0: [1], 1: [0, 2]}
    for j in range(1, m):
        a = [0] + coeffs[j]
        a = [2 * v for v in a]
        b = coeffs[j - 1] + [0, 0]
        coeffs[j + 1] = [av - 2 * j * bv for av, bv in zip(a, b)]
    return sum(c * x ** i for i, c in enumerate(coeffs[m]))


def test_ground_state_value():
    assert eval_hermite(0, 0.0) == pytest.approx(math.pi ** -0.25, abs=1e-15)


def test_first_function_is_odd():
    assert eval_hermite(1, 0.0) == 0.0
    assert eval_hermite(1, 0.7) == pytest.approx(-eval_hermite(1, -0.7), abs=1e-15)


def test_degree_five_against_polynomial_oracle():
    # h_5(2) = (2^5 5! sqrt(pi))^{-1/2} P_5(2) e^{-2}
    p5 = hermite_polynomial_value(5, 2.0)
    expected = (2 ** 5 * math.factorial(5) * math.sqrt(math.pi)) ** -0.5 * p5 * math.exp(-2.0)
    assert eval_hermite(5, 2.0) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("m", [3, 10, 27])
def test_matrix_row_matches_scalar_eval(m):
    u = np.linspace(-5, 5, 11)
    V = hermite_matrix(30, u)
    assert np.allclose(V[m], [eval_hermite(m, x) for x in u], atol=1e-14)


def test_recurrence_stability_bound():
    # normalized Hermite functions stay uniformly bounded through degree 256
    L = math.sqrt(2 * 256 + 1) + 4
    u = np.linspace(-L, L, 801)
    V = hermite_matrix(256, u)
    assert np.all(np.isfinite(V))
    assert np.max(np.abs(V)) <= 1.1


@settings(max_examples=40, deadline=None)
@given(m=st.integers(min_value=0, max_value=256), u=st.floats(-26.0, 26.0))
def test_recurrence_stability_pointwise(m, u):
    v = eval_hermite(m, u)
    assert math.isfinite(v)
    assert abs(v) <= 1.1


def test_no_overflow_far_degree_and_argument():
    assert math.isfinite(eval_hermite(512, 40.0))


def test_multi_product_structure():
    assert eval_hermite_multi((0, 0), (0.0, 0.0)) == pytest.approx(math.pi ** -0.5, abs=1e-15)
    assert eval_hermite_multi((1, 0), (0.0, 1.3)) == 0.0
    expected = eval_hermite(2, 1.0) * eval_hermite(3, -1.0)
    assert eval_hermite_multi((2, 3), (1.0, -1.0)) == pytest.approx(expected, abs=1e-15)


def test_multi_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        eval_hermite_multi((1, 2), (0.0,))


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        eval_hermite(-1, 0.0)
