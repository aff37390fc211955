import pytest

from glaplace.ratfield import (
    FIELD, ZERO, ONE, X, Y, rf, rf_inv, rf_derive, rf_partial, rf_swap, rf_to_str, rf_parse,
    rf_integrate_x, rf_integrate_y, depends_on, is_constant, constant_value, poly_gcd,
    nullspace, rank, solve,
    )
from glaplace.errors import PDESyntaxError, UnknownSymbol

from conftest import property_cases, random_rf


def test_field_axioms(rng):
    for _ in range(property_cases()):
        a, b, c = random_rf(rng), random_rf(rng), random_rf(rng)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ZERO
        if a:
            assert a * rf_inv(a) == ONE


def test_derivative_rules(rng):
    for _ in range(property_cases()):
        a, b = random_rf(rng), random_rf(rng)
        assert rf_derive(a * b, 'x') == rf_derive(a, 'x') * b + a * rf_derive(b, 'x')
        assert rf_partial(a, 1, 1) == rf_derive(rf_derive(a, 'y'), 'x')


def test_integrate_derive_round_trip(rng):
    for _ in range(property_cases()):
        a = random_rf(rng)
        res = rf_integrate_x(a)
        total = rf_derive(res.rational_part, 'x')
        for c, p in res.log_terms:
            assert not depends_on(c, 'x')
            total += c * FIELD(p).diff(X) / FIELD(p)
        if res.residual is not None:
            total += res.residual
        assert total == a


def test_integrate_logarithm():
    res = rf_integrate_x(1 / X)
    assert res.rational_part == ZERO
    assert len(res.log_terms) == 1
    c, p = res.log_terms[0]
    assert c == ONE and FIELD(p) == X
    assert res.residual is None


def test_integrate_polynomial_and_y():
    assert rf_integrate_x(3 * X**2 * Y).rational_part == X**3 * Y
    res = rf_integrate_y(X / Y)
    assert res.rational_part == ZERO
    (c, p), = res.log_terms
    assert c == X and FIELD(p) == Y


def test_integrate_without_closed_form_keeps_residual():
    res = rf_integrate_x(1 / (X**2 + Y))
    assert res.residual is not None


def test_swap_and_dependence():
    assert rf_swap(X**2 * Y) == X * Y**2
    assert rf_swap(rf_swap((X + 1) / Y)) == (X + 1) / Y
    assert not depends_on(X + 1, 'y')
    assert depends_on(X / Y, 'y')
    assert is_constant(FIELD(3))
    assert constant_value(FIELD(3) / 4) == constant_value(rf(3) / 4)


def test_gcd_is_monic():
    g = poly_gcd((2 * X + 2).numer, (X**2 - 1).numer)
    assert FIELD(g) == X + 1


def test_rendering():
    assert rf_to_str((X + 1) / Y) == '(x + 1)/y'
    assert rf_to_str(X * Y) == 'x*y'
    assert rf_to_str(-X) == '-x'
    assert rf_to_str(ZERO) == '0'


def test_parse_expressions():
    assert rf_parse('(3*x + 6)/x^2') == (3 * X + 6) / X**2
    assert rf_parse('-x^2*y') == -X**2 * Y
    assert rf_parse('2 - 3*(x - y)') == 2 - 3 * (X - Y)


def test_parse_round_trip(rng):
    for _ in range(property_cases(20)):
        a = random_rf(rng)
        assert rf_parse(rf_to_str(a)) == a


@pytest.mark.parametrize('text', ['x +', '(x', 'x ^ y', '1/0', 'x $ 2'])
def test_parse_errors(text):
    with pytest.raises(PDESyntaxError):
        rf_parse(text)


def test_parse_unknown_symbol_reports_column():
    with pytest.raises(UnknownSymbol) as err:
        rf_parse('x + z', line=4)
    assert err.value.line == 4
    assert err.value.column == 5


def test_linear_algebra():
    (v,) = nullspace([[ONE, ONE]], 2)
    assert v[0] + v[1] == ZERO and v[0]
    assert len(nullspace([], 3)) == 3
    assert rank([[X, Y], [X**2, X * Y]]) == 1
    assert solve([[ONE, ZERO], [ZERO, X]], [FIELD(2), Y], 2) == [FIELD(2), Y / X]
    assert solve([[ONE], [ONE]], [ONE, FIELD(2)], 1) is None


def test_hermite_reduction_and_residues():
    res = rf_integrate_x(1 / X**2)
    assert res.rational_part == -1 / X
    assert res.log_terms == () and res.residual is None

    res = rf_integrate_x(2 * X / (X**2 + Y) + Y / (X - 1)**2)
    assert res.rational_part == -Y / (X - 1)
    (c, p), = res.log_terms
    assert c == ONE and FIELD(p) == X**2 + Y
    assert res.residual is None


def test_arctangent_stays_a_quadrature():
    res = rf_integrate_x(1 / (X**2 + 1))
    assert res.rational_part == ZERO
    assert res.log_terms == ()
    assert res.residual == 1 / (X**2 + 1)
