'''
The classical Laplace method for one hyperbolic equation

    u_xy + a u_x + b u_y + c u = 0

in characteristic coordinates. The invariants k = b_y + ab - c and
h = a_x + ab - c measure how far the operator is from the factorizations
(Dy + a)(Dx + b) and (Dx + b)(Dy + a). When an invariant of the Laplace chain
vanishes the equation has an intermediate integral and, together with it,
forms a compatible class one system.
'''
import logging
from collections import namedtuple

from glaplace.ratfield import ZERO, ONE, rf, rf_derive, rf_inv, rf_swap, rf_to_str
from glaplace.diffop import DiffOp, op_mul, op_to_str
from glaplace.formal import PDESystem, analyze, divisor_to_str
from glaplace.errors import GlaplaceError, UnsupportedType, ZeroInvariant
from glaplace.utilities import cfg

logger = logging.getLogger(__name__)

HIT_ZERO = 'hit_zero'
DEPTH_REACHED = 'depth_reached'

_SUPPORT = {(1, 1), (1, 0), (0, 1), (0, 0)}


class HyperbolicE2(namedtuple('HyperbolicE2', ['a', 'b', 'c'])):
    '''
    Coefficients of u_xy + a u_x + b u_y + c u = 0.
    '''

    def __new__(cls, a=ZERO, b=ZERO, c=ZERO):
        return super().__new__(cls, rf(a), rf(b), rf(c))

    @classmethod
    def from_operator(cls, op):
        '''
        Read a, b, c from an operator, dividing by its Dx Dy coefficient.

        Raises
        ------
        UnsupportedType
            If the operator has terms outside Dx Dy, Dx, Dy, 1 or no Dx Dy
            term.

        '''
        extra = set(op) - _SUPPORT
        if extra or not op[(1, 1)]:
            raise UnsupportedType('%s is not of the form u_xy + a u_x + b u_y + c u'
                                  % op_to_str(op, 'u'))
        inv = rf_inv(op[(1, 1)])
        return cls(op[(1, 0)] * inv, op[(0, 1)] * inv, op[(0, 0)] * inv)

    def to_operator(self):
        return DiffOp({(1, 1): ONE, (1, 0): self.a, (0, 1): self.b, (0, 0): self.c})

    def swapped(self):
        '''
        The same equation after exchanging x and y.
        '''
        return HyperbolicE2(rf_swap(self.b), rf_swap(self.a), rf_swap(self.c))

    def __str__(self):
        return op_to_str(self.to_operator(), 'u') + ' = 0'


LaplaceSeq = namedtuple('LaplaceSeq', [
    'k', 'h', 'depth', 'k_reason', 'h_reason',
    'k_chain', 'h_chain', # equations whose invariants are listed in k and h
    ])

IntermediateIntegral = namedtuple('IntermediateIntegral', [
    'side', 'level', 'order', 'operator', 'system', 'omega', 'char_divisor',
    ])

DarbouxStatus = namedtuple('DarbouxStatus', ['verdict', 'side', 'order', 'depth', 'integrals'])

#%% Invariants

def invariant_k0(e):
    return rf_derive(e.b, 'y') + e.a * e.b - e.c


def invariant_h0(e):
    return rf_derive(e.a, 'x') + e.a * e.b - e.c


def _dx_plus(b):
    return DiffOp({(1, 0): ONE, (0, 0): b})


def _dy_plus(a):
    return DiffOp({(0, 1): ONE, (0, 0): a})


def laplace_transform_y(e):
    '''
    Equation for v = u_x + b u.

    With k = k0(e) nonzero, (Dy + a) v = k u, so u = k^-1 (Dy + a) v and
    (Dx + b) u = v gives (Dx + b) k^-1 (Dy + a) v - v = 0.

    Raises
    ------
    ZeroInvariant
        If k0 = 0; then v = u_x + b u is an intermediate integral,
        (Dy + a) v = 0.

    Returns
    -------
    HyperbolicE2

    '''
    k = invariant_k0(e)
    if not k:
        raise ZeroInvariant('k0 = 0: u_x + b u is an intermediate integral')
    delta = op_mul(_dx_plus(e.b), _dy_plus(e.a).scale(rf_inv(k))) - 1
    return HyperbolicE2.from_operator(delta)


def laplace_transform_x(e):
    '''
    Equation for v = u_y + a u, obtained from laplace_transform_y by
    exchanging x and y.

    Raises
    ------
    ZeroInvariant
        If h0 = 0.

    '''
    try:
        return laplace_transform_y(e.swapped()).swapped()
    except ZeroInvariant:
        raise ZeroInvariant('h0 = 0: u_y + a u is an intermediate integral')

#%% Sequences

def _side(e, depth, invariant, transform):
    values, chain = [], []
    for level in range(depth):
        value = invariant(e)
        values.append(value)
        chain.append(e)
        if not value:
            return tuple(values), HIT_ZERO, tuple(chain)
        if level < depth - 1:
            e = transform(e)
    return tuple(values), DEPTH_REACHED, tuple(chain)


def invariant_sequence(e, depth=None):
    '''
    k0, k1, ... along the chain of laplace_transform_y and h0, h1, ... along
    the chain of laplace_transform_x, each up to the first zero or depth
    values.

    Parameters
    ----------
    e : HyperbolicE2
    depth : int or None, optional
        If None, cfg.classic_depth is used. The default is None.

    Returns
    -------
    LaplaceSeq

    '''
    depth = cfg.classic_depth if depth is None else depth
    if depth < 1:
        raise ValueError('depth must be at least 1')
    k, k_reason, k_chain = _side(e, depth, invariant_k0, laplace_transform_y)
    h, h_reason, h_chain = _side(e, depth, invariant_h0, laplace_transform_x)
    return LaplaceSeq(k, h, depth, k_reason, h_reason, k_chain, h_chain)

#%% Darboux integrability

def intermediate_integral(seq, side):
    '''
    The intermediate integral of a side that hit zero at level n.

    On the k side I = (Dx + b_n) ... (Dx + b_0) with b_m taken from the
    chain, and (Dy + a_n) I = 0 modulo the equation. The pair {equation, I}
    is a compatible system of class one; its class and characteristic
    divisor are computed as a cross-check.

    Returns
    -------
    IntermediateIntegral

    '''
    reason, chain = (seq.k_reason, seq.k_chain) if side == 'k' else (seq.h_reason, seq.h_chain)
    if reason != HIT_ZERO:
        raise GlaplaceError('the %s side of the sequence does not vanish' % side)
    factor = _dx_plus if side == 'k' else _dy_plus
    I = DiffOp.scalar(ONE)
    for e in chain:
        I = op_mul(factor(e.b if side == 'k' else e.a), I)
    system = PDESystem([chain[0].to_operator(), I])
    analysis = analyze(system)
    if not analysis.verdict.compatible:
        logger.error('equation and intermediate integral are not compatible')
    omega = analysis.profile.omega if analysis.profile else None
    divisor = analysis.profile.char_divisor if analysis.profile else ()
    level = len(chain) - 1
    return IntermediateIntegral(side, level, level + 1, I, system, omega, divisor)


def darboux_status(seq):
    '''
    Integrability verdict of a Laplace sequence.

    Returns
    -------
    DarbouxStatus
        verdict is 'integrable_both_sides', 'semi_integrable' or
        'inconclusive'. For a semi-integrable equation side and order name
        the vanishing side and the order of its intermediate integral.

    '''
    sides = [s for s, reason in (('k', seq.k_reason), ('h', seq.h_reason)) if reason == HIT_ZERO]
    integrals = tuple(intermediate_integral(seq, s) for s in sides)
    if len(sides) == 2:
        return DarbouxStatus('integrable_both_sides', None, None, seq.depth, integrals)
    if sides:
        return DarbouxStatus('semi_integrable', sides[0], integrals[0].order, seq.depth, integrals)
    return DarbouxStatus('inconclusive', None, None, seq.depth, integrals)


def status_to_dict(seq, status):
    '''
    JSON-ready view of a sequence and its verdict.
    '''
    return {
        'k': [rf_to_str(v) for v in seq.k],
        'h': [rf_to_str(v) for v in seq.h],
        'depth': seq.depth,
        'k_reason': seq.k_reason,
        'h_reason': seq.h_reason,
        'verdict': status.verdict,
        'side': status.side,
        'order': status.order,
        'integrals': [{
            'side': i.side,
            'level': i.level,
            'order': i.order,
            'operator': op_to_str(i.operator, 'u'),
            'omega': i.omega,
            'char_divisor': divisor_to_str(i.char_divisor),
            } for i in status.integrals],
        }
