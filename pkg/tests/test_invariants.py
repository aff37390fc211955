import pytest

from glaplace.ratfield import ZERO, ONE, Y
from glaplace.diffop import DiffOp
from glaplace.formal import PDESystem
from glaplace.invariants import identify_type, relative_invariants, report_to_dict
from glaplace.errors import NotClassOne, UnsupportedType

Dx, Dy = DiffOp.dx(), DiffOp.dy()


def test_example3_branch(example3):
    report = relative_invariants(example3)
    assert (report.type, report.symbol_class) == ('E2+E3', 2)
    assert report.gauge.a == ZERO
    assert report.invariants == {'d2': 1 / Y}
    assert report.branch == 'Upsilon_23^2a'
    assert (report.predicted_type, report.predicted_kind) == ('E1', 'frobenius')
    assert all(holds for _, holds in report.ties)
    value, condition, applies = report.conditional['e2']
    assert condition == 'd2 = 0' and not applies


def test_example1_branch(example1):
    report = relative_invariants(example1)
    assert report.type == '3E3'
    assert report.predicted_type == 'E2+E3'
    assert set(report.invariants) == {'e3', 'b1', 'f1'}


def test_2e2_without_zeroth_order_term():
    report = relative_invariants(PDESystem([Dx * Dx, Dx * Dy]))
    assert report.type == '2E2'
    assert report.branch == 'Upsilon_22^b'
    assert (report.predicted_type, report.predicted_kind) == ('Frobenius', 'integral')


def test_report_to_dict(example3):
    d = report_to_dict(relative_invariants(example3))
    assert d['branch'] == 'Upsilon_23^2a'
    assert d['gauge'] == '0'
    assert d['invariants'] == {'d2': '1/y'}
    assert d['predicted'] == {'type': 'E1', 'inverse': 'frobenius'}
    assert d['conditional']['e2']['when'] == 'd2 = 0'


def test_identify_type():
    assert identify_type([Dx * Dx, Dx * Dy]) == ('2E2', None)
    assert identify_type([Dx * Dx, Dx * Dy * Dy]) == ('E2+E3', 2)
    with pytest.raises(UnsupportedType):
        identify_type([Dx * Dx * Dx * Dx, Dx * Dy])


def test_class_two_has_no_table():
    with pytest.raises(NotClassOne):
        relative_invariants(PDESystem([Dx * Dy - 1]))


def test_e2e3_with_skewed_second_order_symbol():
    # symbol xi*(eta + xi): G1 = YX + X^2
    report = relative_invariants(PDESystem([Dx * Dy + Dx * Dx, Dx * Dx * Dx]))
    assert (report.type, report.symbol_class) == ('E2+E3', 1)
    assert report.invariants == {'e1': ZERO, 'b1': ONE}
    assert report.branch == 'Upsilon_23^1b'
    assert (report.predicted_type, report.predicted_kind) == ('Frobenius', 'integral')
    assert report.ties == [('d1 = 0', True)]
