import pytest

from glaplace.ratfield import FIELD, ZERO, ONE, X, Y, rf_derive
from glaplace.diffop import (
    DiffOp, Frame, BinaryForm, op_mul, op_apply, op_to_str, op_from_str, conjugate, left_shift,
    rewrite_in_frame, from_frame, framed_to_str, principal_symbol, term_key,
    )
from glaplace.errors import ZeroGauge, ZeroOperator

from conftest import property_cases, random_op, random_rf

Dx, Dy = DiffOp.dx(), DiffOp.dy()


def test_leibniz_rule():
    # Dx o x = x Dx + 1
    assert op_mul(Dx, DiffOp.scalar(X)) == DiffOp({(1, 0): X, (0, 0): ONE})
    # Dy^2 o y^2 = y^2 Dy^2 + 4 y Dy + 2
    assert op_mul(Dy * Dy, DiffOp.scalar(Y**2)) == DiffOp({(0, 2): Y**2, (0, 1): 4 * Y, (0, 0): 2})


def test_composition_is_associative(rng):
    for _ in range(property_cases()):
        a, b, c = random_op(rng), random_op(rng), random_op(rng, order=1)
        assert op_mul(op_mul(a, b), c) == op_mul(a, op_mul(b, c))


def test_application_is_a_module_action(rng):
    for _ in range(property_cases(20)):
        a, b = random_op(rng), random_op(rng, order=1)
        f = random_rf(rng)
        assert op_apply(op_mul(a, b), f) == op_apply(a, op_apply(b, f))


def test_symbol_is_multiplicative(rng):
    for _ in range(property_cases()):
        a, b = random_op(rng), random_op(rng)
        if not a or not b:
            continue
        assert principal_symbol(op_mul(a, b)) == principal_symbol(a) * principal_symbol(b)


def test_conjugation_is_a_homomorphism(rng):
    for _ in range(property_cases()):
        a, b = random_op(rng), random_op(rng, order=1)
        sigma = random_rf(rng, degree=1)
        if not sigma:
            continue
        assert conjugate(op_mul(a, b), sigma) == op_mul(conjugate(a, sigma), conjugate(b, sigma))


def test_conjugation_by_zero():
    with pytest.raises(ZeroGauge):
        conjugate(Dx, ZERO)


def test_leading_monomial_order():
    op = DiffOp({(2, 0): ONE, (1, 1): X, (0, 2): Y, (1, 0): ONE})
    # graded, then Dy-major
    assert op.leading_monomial == (0, 2)
    assert sorted([(2, 0), (1, 1), (0, 2)], key=term_key)[-1] == (0, 2)
    assert op.order == 2
    assert list(op) == [(0, 2), (1, 1), (2, 0), (1, 0)]
    with pytest.raises(ZeroOperator):
        DiffOp().leading_monomial


def test_left_shift_and_apply():
    g = DiffOp({(1, 0): ONE, (0, 0): X})
    assert left_shift(0, 1, g) == DiffOp({(1, 1): ONE, (0, 1): X})
    assert op_apply(g, X**2) == 2 * X + X**3


def test_frame_round_trip(rng):
    frame = Frame(1 / X, Y)
    for _ in range(property_cases(20)):
        a = random_op(rng, order=3)
        assert from_frame(rewrite_in_frame(a, frame), frame) == a


def test_rewrite_in_frame_example():
    frame = Frame(X)
    # Dx^2 = X^2 - 2x X + x^2 - 1
    framed = rewrite_in_frame(Dx * Dx, frame)
    assert framed == {(0, 2): ONE, (0, 1): -2 * X, (0, 0): X**2 - 1}
    assert framed_to_str(framed) == 'X^2 - 2*x*X + (x^2 - 1)'


def test_frame_operators():
    frame = Frame(X)
    assert frame.X == DiffOp({(1, 0): ONE, (0, 0): X})
    assert frame.Y == Dy
    assert Frame() == Frame(ZERO, ZERO)


def test_binary_forms():
    f = BinaryForm(1, [ONE, ONE])   # xi + eta
    g = BinaryForm.monomial(1, 0)   # xi
    assert (f * g).coeffs == (ZERO, ONE, ONE)
    assert g.shift(0, 2) == BinaryForm(3, [ZERO, ONE, ZERO, ZERO])
    with pytest.raises(ValueError):
        BinaryForm(2, [ONE])


def test_rendering():
    op = DiffOp({(2, 0): ONE, (0, 1): -Y, (0, 0): FIELD(3)})
    assert op_to_str(op) == 'Dx^2 - y*Dy + 3'
    assert op_to_str(op, 'u') == 'u_xx - y*u_y + 3*u'


def test_operator_parser():
    assert op_from_str('Dx^2 + y*Dy') == DiffOp({(2, 0): ONE, (0, 1): Y})
    assert op_from_str('Dx*x') == DiffOp({(1, 0): X, (0, 0): ONE})
    assert op_from_str('(Dx + 1/x)*Dy') == DiffOp({(1, 1): ONE, (0, 1): 1 / X})


def test_derivative_of_coefficient_matches_apply(rng):
    for _ in range(property_cases(20)):
        f = random_rf(rng)
        assert op_apply(Dx, f) == rf_derive(f, 'x')
