import pytest

from glaplace.ratfield import ZERO, ONE, X, Y, rf_swap
from glaplace.diffop import DiffOp, op_mul
from glaplace.formal import divisor_to_str
from glaplace.classical import (
    HIT_ZERO, DEPTH_REACHED, HyperbolicE2, invariant_k0, invariant_h0, laplace_transform_y,
    laplace_transform_x, invariant_sequence, intermediate_integral, darboux_status, status_to_dict,
    )
from glaplace.errors import GlaplaceError, UnsupportedType, ZeroInvariant

from conftest import property_cases, random_rf

Dx, Dy = DiffOp.dx(), DiffOp.dy()


def _random_equation(rng):
    return HyperbolicE2(random_rf(rng, 1), random_rf(rng, 1), random_rf(rng, 1))


def test_invariants_of_simple_equations():
    e = HyperbolicE2(c=-ONE)
    assert invariant_k0(e) == ONE and invariant_h0(e) == ONE
    e = HyperbolicE2(a=X, b=Y)
    assert invariant_k0(e) == 1 + X * Y
    assert invariant_h0(e) == 1 + X * Y


def test_factorization_identities(rng):
    for _ in range(property_cases(20)):
        e = _random_equation(rng)
        op = e.to_operator()
        dy_a = DiffOp({(0, 1): ONE, (0, 0): e.a})
        dx_b = DiffOp({(1, 0): ONE, (0, 0): e.b})
        assert op_mul(dy_a, dx_b) - invariant_k0(e) == op
        assert op_mul(dx_b, dy_a) - invariant_h0(e) == op


def test_swap_is_an_involution(rng):
    for _ in range(property_cases(20)):
        e = _random_equation(rng)
        assert e.swapped().swapped() == e
        assert invariant_k0(e.swapped()) == rf_swap(invariant_h0(e))


def test_klein_gordon_is_a_fixed_point():
    e = HyperbolicE2(c=-ONE)
    assert laplace_transform_y(e) == e
    assert laplace_transform_x(e) == e


def test_transform_moves_k_to_h(rng):
    for _ in range(property_cases(20)):
        e = _random_equation(rng)
        if not invariant_k0(e):
            continue
        assert invariant_h0(laplace_transform_y(e)) == invariant_k0(e)


def test_zero_invariant_stops_the_transform():
    e = HyperbolicE2(a=Y)
    with pytest.raises(ZeroInvariant):
        laplace_transform_y(e)
    with pytest.raises(ZeroInvariant):
        laplace_transform_x(e)


def test_from_operator():
    op = DiffOp({(1, 1): 2 * X, (1, 0): 2 * X * Y, (0, 0): ONE})
    assert HyperbolicE2.from_operator(op) == HyperbolicE2(Y, ZERO, 1 / (2 * X))
    with pytest.raises(UnsupportedType):
        HyperbolicE2.from_operator(Dx * Dx + Dy)
    with pytest.raises(UnsupportedType):
        HyperbolicE2.from_operator(Dx + Dy)


def test_sequence_without_zero():
    seq = invariant_sequence(HyperbolicE2(c=-ONE), depth=5)
    assert seq.k == (ONE,) * 5 and seq.h == (ONE,) * 5
    assert seq.k_reason == DEPTH_REACHED and seq.h_reason == DEPTH_REACHED
    status = darboux_status(seq)
    assert status.verdict == 'inconclusive'
    assert not status.integrals
    with pytest.raises(GlaplaceError):
        intermediate_integral(seq, 'k')
    with pytest.raises(ValueError):
        invariant_sequence(HyperbolicE2(), depth=0)


def test_factored_equation_is_integrable_on_both_sides():
    # (Dy + y) Dx u = 0
    seq = invariant_sequence(HyperbolicE2(a=Y))
    assert seq.k == (ZERO,) and seq.k_reason == HIT_ZERO
    assert seq.h == (ZERO,) and seq.h_reason == HIT_ZERO
    status = darboux_status(seq)
    assert status.verdict == 'integrable_both_sides'
    k_side, h_side = status.integrals
    assert k_side.operator == Dx and k_side.order == 1
    assert h_side.operator == Dy + Y
    assert k_side.omega == 1 and divisor_to_str(k_side.char_divisor) == '{xi}'
    assert h_side.omega == 1 and divisor_to_str(h_side.char_divisor) == '{eta}'


def test_semi_integrable_equation():
    # k0 = 0 but h0 = 1
    e = HyperbolicE2(a=X, b=ZERO, c=ZERO)
    assert invariant_k0(e) == ZERO and invariant_h0(e) == ONE
    seq = invariant_sequence(e, depth=3)
    status = darboux_status(seq)
    assert status.verdict == 'semi_integrable'
    assert (status.side, status.order) == ('k', 1)
    d = status_to_dict(seq, status)
    assert d['verdict'] == 'semi_integrable'
    assert d['k'] == ['0']
    assert d['integrals'][0]['operator'] == 'u_x'
