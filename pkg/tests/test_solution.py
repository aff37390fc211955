import pytest

from glaplace.ratfield import ZERO, ONE, X, Y
from glaplace.solution import (
    Scalar, SolutionExpr, FunctionDerivative, Constant, exp_solution, make_exp, normalize_solution,
    )
from glaplace.laplace1 import integrate_y
from glaplace.errors import ApplyToResidual, QuadratureResidual


@pytest.mark.parametrize('a', [1 / X, Y, 2 * X, (X + Y) / X])
def test_exp_solution_solves_x_equation(a):
    e = exp_solution(a)
    assert e.derive('x') == e.scale(-a)


def test_exp_solution_with_y_equation():
    # E = exp(-x*y)
    e = exp_solution(Y, X)
    assert e.derive('x') == e.scale(-Y)
    assert e.derive('y') == e.scale(-X)


def test_exp_solution_incompatible_pair():
    with pytest.raises(QuadratureResidual):
        exp_solution(Y, ZERO)


def test_integer_powers_are_folded_into_the_multiplier():
    mult, factor = make_exp(powers=[(X.numer, 2)])
    assert mult == X**2
    assert factor.is_trivial
    assert exp_solution(1 / X) == Scalar.rational(1 / X)


@pytest.mark.parametrize('c', [1 / X + 2 * X, 1 / (X**2 + Y), Y / (X + 1)])
def test_integrate_then_derive(c):
    s = Scalar.rational(c)
    assert s.integrate('x').derive('x') == s


def test_quadrature_in_the_other_variable():
    s = Scalar.rational(1 / (X**2 + Y)).integrate('x')
    assert s.has_quadrature
    with pytest.raises(ApplyToResidual):
        s.derive('y')


def test_function_derivatives():
    f = SolutionExpr.function()
    assert f.derive('y') == SolutionExpr.function(order=1)
    assert not f.derive('x')
    u = SolutionExpr.function(Scalar.rational(X), 2) + SolutionExpr.constant(1, Scalar.rational(Y))
    assert u.q == 2
    assert u.constants == (1,)
    assert u.partial(1, 1) == SolutionExpr.function(order=3)


def test_integrate_y_by_parts():
    # (y f')' = y f'' + f'
    h = SolutionExpr.function(Scalar.rational(Y), 2) + SolutionExpr.function(order=1)
    assert integrate_y(h) == SolutionExpr.function(Scalar.rational(Y), 1)
    c = SolutionExpr.constant(1, Scalar.rational(2 * Y))
    assert integrate_y(c) == SolutionExpr.constant(1, Scalar.rational(Y**2))


def test_integrate_y_without_closed_form():
    with pytest.raises(QuadratureResidual):
        integrate_y(SolutionExpr.function())
    with pytest.raises(QuadratureResidual):
        integrate_y(SolutionExpr.function(Scalar.rational(X), 1))


def test_normalize_solution():
    raw = SolutionExpr({FunctionDerivative(0): -2 * X, Constant(3): 4 * Y})
    assert normalize_solution(raw) == SolutionExpr({FunctionDerivative(0): X, Constant(1): Y})


def test_rendering():
    u = SolutionExpr({
        FunctionDerivative(2): X**3, FunctionDerivative(1): -6 * X**2,
        FunctionDerivative(0): 6 * X, Constant(1): Y,
        })
    assert u.render() == "x^3*f''(y) - 6*x^2*f'(y) + 6*x*f(y) + y*C1"


def test_constant_and_derivative_with_equal_index_stay_apart():
    assert FunctionDerivative(1) != Constant(1)
    assert hash(FunctionDerivative(1)) != hash(Constant(1))
    u = SolutionExpr({FunctionDerivative(1): -Y, FunctionDerivative(0): X + 1, Constant(1): ONE})
    assert u.q == 1
    assert u.constants == (1,)
    assert u.render() == "-y*f'(y) + (x + 1)*f(y) + C1"


def test_fixed_multiples_of_f_have_no_constants():
    u = SolutionExpr.function(Scalar.rational(X))
    assert u.constants == ()
