import numpy as np
import pytest

from hermlab import half_ratio_symbol, parse_symbol
from hermlab.symbols import SymbolParseError


def test_constant_symbol():
    s = parse_symbol("1", 1)
    assert np.all(s.evaluator(np.array([1.0, 5.0, 9.0])) == 1.0)
    assert s.bound == 1.0


def test_rational_symbol_matches_catalog():
    s = parse_symbol("sqrt(z1/(z1+1))", 1)
    lam = 2.0 * np.arange(20) + 1.0
    assert np.allclose(s.evaluator(lam), half_ratio_symbol(1).evaluator(lam), atol=1e-15)


def test_syntax_error_position():
    with pytest.raises(SymbolParseError) as err:
        parse_symbol("z1^", 1)
    assert err.value.position == 3
    with pytest.raises(SymbolParseError):
        parse_symbol("(z1+1", 1)
    with pytest.raises(SymbolParseError):
        parse_symbol("z1 $ 2", 1)


def test_precedence_and_unary_minus():
    s = parse_symbol("-z1^2 + 2*3", 1)
    assert s.evaluator(np.array([3.0]))[0] == pytest.approx(-3.0)
    s2 = parse_symbol("2^3^1", 1)  # right associative
    assert s2.evaluator(np.array([1.0]))[0] == pytest.approx(8.0)
    s3 = parse_symbol("exp(-z1)", 1)
    assert s3.evaluator(np.array([0.0]))[0] == pytest.approx(1.0)


def test_multivariate_variables():
    s = parse_symbol("z1*z2 - z2/2", 2)
    assert s.evaluator(np.array([3.0]), np.array([2.0]))[0] == pytest.approx(5.0)
    with pytest.raises(SymbolParseError):
        parse_symbol("z3", 2)
    with pytest.raises(SymbolParseError):
        parse_symbol("foo(z1)", 1)


def test_domain_error_at_lattice_point():
    with pytest.raises(Exception, match="domain error"):
        parse_symbol("1/(z1-3)", 1)


def test_rationals_via_division():
    s = parse_symbol("1/2 + z1*0", 1)
    assert s.evaluator(np.array([7.0]))[0] == pytest.approx(0.5)
