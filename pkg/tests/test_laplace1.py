import pytest

from glaplace.ratfield import ZERO, ONE, X, Y
from glaplace.diffop import DiffOp, conjugate
from glaplace.formal import PDESystem
from glaplace.solution import SolutionExpr, FunctionDerivative, Constant
from glaplace.laplace1 import (
    DIFFERENTIAL, FROBENIUS, INTEGRAL, FINITE_TYPE, GaugeChoice, Integrator, normalize_generators,
    basic_gauge, laplace_step, inverse_operator, inverse_unique_check, inverse_contracts, integrate,
    complexity_trace, verify_solution, relative_invariants, _check_arrow,
    )
from glaplace.errors import (
    CharNotStraightened, ComplexityNotDecreasing, InvalidArrow, NotClassOne, SolutionShapeMismatch,
    TrivialIdeal, ZeroGauge,
    )

Dx, Dy = DiffOp.dx(), DiffOp.dy()


def test_example1_solution(example1):
    result = Integrator(example1, verbose=0).run()
    expected = SolutionExpr({
        FunctionDerivative(3): 9 * Y**3, FunctionDerivative(2): 27 * X * Y**2,
        FunctionDerivative(1): 36 * X**2 * Y, FunctionDerivative(0): 16 * X**3,
        })
    assert verify_solution(example1, result.solution)
    assert result.solution == expected
    assert result.kappa == 3
    assert result.shape_ok


def test_example1_route(example1):
    trace = complexity_trace(example1)
    assert [(t.source_type, t.source_kappa) for t in trace] == [('3E3', 3), ('E2+E3', 2), ('2E2', 1)]
    assert (trace[-1].target_type, trace[-1].target_kappa) == ('E1', 0)
    assert trace[0].branch in ('Upsilon_333^a', 'Upsilon_333^b')
    assert trace[1].branch == 'Upsilon_23^1a'
    assert trace[2].branch == 'Upsilon_22^a'
    assert all(t.kind == DIFFERENTIAL for t in trace)


def test_example2_solution(example2):
    result = Integrator(example2, verbose=0).run()
    expected = SolutionExpr({
        FunctionDerivative(2): X**3, FunctionDerivative(1): -6 * X**2,
        FunctionDerivative(0): 6 * X, Constant(1): Y,
        })
    assert verify_solution(example2, result.solution)
    assert result.solution == expected
    assert result.solution.q == 2
    assert result.solution.constants == (1,)
    assert result.shape_ok


def test_example2_route(example2):
    trace = complexity_trace(example2)
    assert trace[0].source_type == '3E3'
    assert [t.source_type for t in trace] == ['3E3', 'E2+E3', '2E2']
    assert trace[1].branch == 'Upsilon_23^1a'
    assert trace[1].kind == DIFFERENTIAL
    assert trace[2].branch == 'Upsilon_22^b'
    assert trace[-1].kind == INTEGRAL
    assert trace[-1].target_type == FINITE_TYPE


def test_example2_e2e3_table_reads_the_skewed_symbol(example2):
    # the E2+E3 system reached from 3E3 has G1 = YX + b1 X^2 + ...
    route = Integrator(example2, verbose=0).reduce()
    report = relative_invariants(route.steps[0].transformed)
    assert (report.type, report.symbol_class) == ('E2+E3', 1)
    assert report.branch == 'Upsilon_23^1a'
    assert report.invariants['e1']
    assert (report.predicted_type, report.predicted_kind) == ('2E2', 'differential')


def test_example3_step(example3):
    gauge, gauged = basic_gauge(normalize_generators(example3))
    assert gauge.a == ZERO
    step = laplace_step(gauged)
    assert step.transformed.generators == (Dx,)
    assert step.inverse_kind == FROBENIUS
    assert step.inverse_order == 0
    (X_op, one), (_, M) = step.inverse_system
    assert X_op == gauged.frame.X and one == DiffOp.scalar(ONE)
    assert M == DiffOp({(0, 1): X, (0, 2): -Y})


def test_example3_solution(example3):
    u = integrate(example3)
    expected = SolutionExpr({FunctionDerivative(0): X + 1, FunctionDerivative(1): -Y, Constant(1): ONE})
    assert u == expected
    assert u.render() == "-y*f'(y) + (x + 1)*f(y) + C1"
    assert verify_solution(example3, u)
    (entry,) = complexity_trace(example3)
    assert (entry.source_type, entry.source_kappa, entry.target_type, entry.target_kappa) == ('E2+E3', 2, 'E1', 0)
    assert entry.kind == FROBENIUS
    assert entry.branch == 'Upsilon_23^2a'


def test_differential_inverses_are_two_sided(example1):
    route = Integrator(example1, verbose=0).reduce()
    differential = [s for s in route.steps if s.inverse_kind == DIFFERENTIAL]
    assert differential
    for step in differential:
        assert inverse_contracts(step) == (True, True)
        L = inverse_operator(step.source, step.transformed)
        assert L is not None
        assert inverse_unique_check(L, step.inverse_op, step.source, step.transformed)
        other = step.inverse_op + step.transformed.generators[0]
        assert inverse_unique_check(other, step.inverse_op, step.source, step.transformed)


@pytest.mark.parametrize('name', ['example1', 'example2', 'example3'])
def test_complexity_decreases(name, request):
    for entry in complexity_trace(request.getfixturevalue(name)):
        if entry.target_type != FINITE_TYPE:
            assert entry.target_kappa < entry.source_kappa


def test_wrong_class_is_rejected():
    with pytest.raises(NotClassOne):
        integrate(PDESystem([Dx * Dy - 1]))
    with pytest.raises(CharNotStraightened):
        normalize_generators(PDESystem([Dy * Dy, Dx * Dy]))
    with pytest.raises(TrivialIdeal):
        integrate(PDESystem([Dx * Dx, Dx * Dy - 1]))


def test_first_order_equation_is_terminal():
    # u_x + y u = 0
    u = integrate(PDESystem([Dx + Y]))
    assert verify_solution(PDESystem([Dx + Y]), u)
    assert u.q == 0 and not u.constants


def test_gauge_choice():
    g = GaugeChoice(X)
    assert g.sigma == ONE
    assert g.frame.X == Dx + X
    with pytest.raises(ZeroGauge):
        GaugeChoice(X, ZERO)


def test_step_postcondition_accepts_the_example_arrows():
    assert _check_arrow(('3E3', 3, 1, (3, 3, 3)), ('E2+E3', 2, 1, (2, 3))) is None
    assert _check_arrow(('2E2', 1, 1, (2, 2)), ('E1', 0, 1, (1,))) is None
    assert _check_arrow(('2E2', 1, 1, (2, 2)), (FINITE_TYPE, 1, 0, (1, 1))) is None


@pytest.mark.parametrize('source, target', [
    (('E2+E3', 2, 1, (2, 3)), ('3E3', 3, 1, (3, 3, 3))),
    (('2E2', 1, 1, (2, 2)), ('2E2', 1, 1, (2, 2))),
    (('2E2', 1, 1, (2, 2)), (FINITE_TYPE, 2, 0, (1, 1))),
    ])
def test_step_without_complexity_drop_is_an_error(source, target):
    with pytest.raises(ComplexityNotDecreasing):
        _check_arrow(source, target)


def test_step_outside_the_zoo_is_an_error(monkeypatch, example3):
    monkeypatch.setattr('glaplace.zoo.valid_arrow', lambda source, target: False)
    with pytest.raises(InvalidArrow):
        _check_arrow(('3E3', 3, 1, (3, 3, 3)), ('E2+E3', 2, 1, (2, 3)))
    with pytest.raises(InvalidArrow):
        complexity_trace(example3)


def test_solution_shape_mismatch_is_an_error():
    integrator = Integrator(PDESystem([Dx + Y]), verbose=0)
    integrator.route = integrator.reduce()._replace(kappa=1)
    with pytest.raises(SolutionShapeMismatch) as err:
        integrator.run()
    assert err.value.solution.q == 0
    assert not err.value.solution.constants


CONJUGATIONS = [X + 1, Y, X * Y + 1, X**2 + Y, 1 / (X + Y), (X + 1) / (Y + 2), 2 * X - Y + 3]


@pytest.mark.parametrize('sigma', CONJUGATIONS)
@pytest.mark.parametrize('name', ['example1', 'example2', 'example3'])
def test_complexity_drops_by_one_on_generic_routes(name, sigma, request):
    # u = sigma w keeps the route and the complexities of every step
    system = request.getfixturevalue(name)
    conjugated = PDESystem([conjugate(g, sigma) for g in system.generators])
    trace = complexity_trace(conjugated)
    reference = complexity_trace(system)
    assert [(t.source_type, t.source_kappa, t.target_type, t.target_kappa) for t in trace] == \
        [(t.source_type, t.source_kappa, t.target_type, t.target_kappa) for t in reference]
    class_one = [t for t in trace if t.target_type != FINITE_TYPE]
    assert class_one
    for entry in class_one:
        assert entry.target_kappa == entry.source_kappa - 1
