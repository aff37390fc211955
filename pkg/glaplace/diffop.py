'''
Linear differential operators in Dx, Dy with coefficients in Q(x, y).

A DiffOp is an immutable mapping (i, j) -> coefficient standing for
sum(c * Dx^i Dy^j), coefficients written to the left of the derivatives.
Composition expands coefficients past derivatives by the Leibniz rule.
'''
import logging
from math import comb
from functools import lru_cache
from collections.abc import Mapping

from glaplace.ratfield import (
    ZERO, ONE, rf, rf_partial, rf_inv, linear_combination_to_str,
    )
from glaplace.errors import ZeroGauge, ZeroOperator

logger = logging.getLogger(__name__)

ZERO_ORDER = -1 # order of the zero operator


def term_key(monom):
    '''
    Sort key of the term order: total degree, then Dy degree, then Dx degree.
    '''
    i, j = monom
    return (i + j, j, i)


class DiffOp(Mapping):
    '''
    Immutable linear differential operator.

    Parameters
    ----------
    terms : dict, optional
        Map from (i, j) to coefficients coercible to FIELD. Zero coefficients
        are dropped. The default is None (zero operator).

    '''
    __slots__ = ('_terms', '_hash')

    def __init__(self, terms=None):
        clean = {}
        for monom, c in (terms or {}).items():
            c = rf(c)
            if c:
                clean[tuple(monom)] = c
        self._terms = clean
        self._hash = None

    #%% Constructors

    @classmethod
    def scalar(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i, j, c=ONE):
        return cls({(i, j): c})

    @classmethod
    def dx(cls):
        return cls({(1, 0): ONE})

    @classmethod
    def dy(cls):
        return cls({(0, 1): ONE})

    #%% Mapping protocol

    def __getitem__(self, monom):
        return self._terms.get(tuple(monom), ZERO)

    def __iter__(self):
        return iter(sorted(self._terms, key=term_key, reverse=True))

    def __len__(self):
        return len(self._terms)

    def __contains__(self, monom):
        return tuple(monom) in self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            return self._terms == other._terms
        if not self._terms and other == 0:
            return True
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    #%% Properties

    @property
    def order(self):
        if not self._terms:
            return ZERO_ORDER
        return max(i + j for i, j in self._terms)

    @property
    def leading_monomial(self):
        if not self._terms:
            raise ZeroOperator('the zero operator has no leading monomial')
        return max(self._terms, key=term_key)

    @property
    def leading_coefficient(self):
        return self._terms[self.leading_monomial]

    def monic(self):
        return self.scale(rf_inv(self.leading_coefficient))

    def coefficients(self):
        return [self._terms[m] for m in self]

    #%% Arithmetic

    def __add__(self, other):
        other = as_diffop(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, ZERO) + c
        return DiffOp(terms)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_diffop(other))

    def __rsub__(self, other):
        return as_diffop(other) - self

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return op_mul(self, other)
        return op_mul(self, DiffOp.scalar(other))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        '''
        Left multiplication by the function c.
        '''
        c = rf(c)
        return DiffOp({m: c * v for m, v in self._terms.items()})

    def __repr__(self):
        return 'DiffOp(%s)' % op_to_str(self)

    def __str__(self):
        return op_to_str(self)


def as_diffop(value):
    if isinstance(value, DiffOp):
        return value
    return DiffOp.scalar(value)


def op_to_str(a, unknown=None):
    '''
    Render an operator with Dx, Dy tokens, or as derivatives u_xxy of the
    unknown when its name is given.
    '''
    items = []
    for i, j in a:
        if unknown is None:
            atom = '*'.join(t if e == 1 else '%s^%d' % (t, e)
                            for t, e in (('Dx', i), ('Dy', j)) if e)
        else:
            atom = unknown + ('_' + 'x' * i + 'y' * j if i + j else '')
        items.append((a[(i, j)], atom))
    return linear_combination_to_str(items)

#%% Composition

def op_mul(a, b):
    '''
    Composition a o b expanded by the Leibniz rule.

    Parameters
    ----------
    a : DiffOp
    b : DiffOp

    Returns
    -------
    DiffOp

    '''
    terms = {}
    for (i, j), ca in a._terms.items():
        for (p, q), cb in b._terms.items():
            for k in range(i + 1):
                for l in range(j + 1):
                    d = rf_partial(cb, k, l)
                    if not d:
                        continue
                    coeff = comb(i, k) * comb(j, l) * ca * d
                    m = (i - k + p, j - l + q)
                    terms[m] = terms.get(m, ZERO) + coeff
    return DiffOp(terms)


def left_shift(i, j, b):
    '''
    Dx^i Dy^j o b.
    '''
    return op_mul(DiffOp.monomial(i, j), b)


def conjugate(a, sigma):
    '''
    The operator sigma^-1 o a o sigma.

    Raises
    ------
    ZeroGauge
        If sigma is zero.

    '''
    sigma = rf(sigma)
    if not sigma:
        raise ZeroGauge('conjugation by the zero function')
    if sigma == ONE:
        return a
    return op_mul(a, DiffOp.scalar(sigma)).scale(rf_inv(sigma))


def op_apply(a, e):
    '''
    Apply a to a rational function or to a solution expression.

    Solution expressions provide partial(i, j), scale(c) and addition.
    '''
    if isinstance(e, DiffOp):
        raise TypeError('op_apply expects a function, not an operator')
    if not hasattr(e, 'partial'):
        e = rf(e)
        return sum((c * rf_partial(e, i, j) for (i, j), c in a.items()), ZERO)
    result = e.zero_like()
    for (i, j), c in a.items():
        result = result + e.partial(i, j).scale(c)
    return result

#%% Frames

class Frame:
    '''
    Frame X = Dx + a, Y = Dy + b with zeroth order parts a and b.
    '''
    __slots__ = ('a', 'b')

    def __init__(self, a=ZERO, b=ZERO):
        self.a = rf(a)
        self.b = rf(b)

    @property
    def X(self):
        return DiffOp({(1, 0): ONE, (0, 0): self.a})

    @property
    def Y(self):
        return DiffOp({(0, 1): ONE, (0, 0): self.b})

    def __eq__(self, other):
        return isinstance(other, Frame) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return 'Frame(X=%s, Y=%s)' % (self.X, self.Y)


STANDARD_FRAME = Frame()


@lru_cache(maxsize=4096)
def frame_monomial(frame, j, i):
    '''
    Y^j X^i expanded in Dx, Dy.
    '''
    if i > 0:
        return op_mul(frame_monomial(frame, j, i - 1), frame.X)
    if j > 0:
        return op_mul(frame.Y, frame_monomial(frame, j - 1, 0))
    return DiffOp.scalar(ONE)


def rewrite_in_frame(a, frame=STANDARD_FRAME):
    '''
    Expand a in the ordered monomials Y^j X^i of a frame.

    Parameters
    ----------
    a : DiffOp
    frame : Frame, optional
        The default is the coordinate frame Dx, Dy.

    Returns
    -------
    dict
        Map (j, i) -> coefficient with a == sum(c * Y^j X^i).

    '''
    framed = {}
    rest = a
    while rest:
        i, j = rest.leading_monomial
        c = rest[(i, j)]
        framed[(j, i)] = framed.get((j, i), ZERO) + c
        rest = rest - frame_monomial(frame, j, i).scale(c)
    return {m: c for m, c in framed.items() if c}


def from_frame(framed, frame=STANDARD_FRAME):
    '''
    Inverse of rewrite_in_frame.
    '''
    total = DiffOp()
    for (j, i), c in framed.items():
        total = total + frame_monomial(frame, j, i).scale(c)
    return total


def framed_to_str(framed):
    '''
    Render a framed expansion with X, Y tokens, highest monomials first.
    '''
    def atom(j, i):
        parts = []
        for t, e in (('Y', j), ('X', i)):
            if e == 1:
                parts.append(t)
            elif e > 1:
                parts.append('%s^%d' % (t, e))
        return '*'.join(parts)

    keys = sorted(framed, key=lambda m: (m[0] + m[1], m[0], m[1]), reverse=True)
    return linear_combination_to_str([(framed[k], atom(*k)) for k in keys])

#%% Principal symbols

class BinaryForm:
    '''
    Homogeneous form sum(coeffs[i] * xi^i * eta^(degree - i)).

    Parameters
    ----------
    degree : int
    coeffs : sequence of FracElement
        Length degree + 1, indexed by the power of xi.

    '''
    __slots__ = ('degree', 'coeffs')

    def __init__(self, degree, coeffs):
        if len(coeffs) != degree + 1:
            raise ValueError('a form of degree %d needs %d coefficients' % (degree, degree + 1))
        self.degree = degree
        self.coeffs = tuple(rf(c) for c in coeffs)

    @classmethod
    def monomial(cls, p, q):
        '''
        xi^p eta^q
        '''
        coeffs = [ZERO] * (p + q + 1)
        coeffs[p] = ONE
        return cls(p + q, coeffs)

    @property
    def is_zero(self):
        return not any(self.coeffs)

    def __mul__(self, other):
        coeffs = [ZERO] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for k, b in enumerate(other.coeffs):
                coeffs[i + k] += a * b
        return BinaryForm(self.degree + other.degree, coeffs)

    def shift(self, p, q):
        '''
        Multiply by xi^p eta^q.
        '''
        return BinaryForm(self.degree + p + q, [ZERO] * p + list(self.coeffs) + [ZERO] * q)

    def __eq__(self, other):
        return isinstance(other, BinaryForm) and (self.degree, self.coeffs) == (other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.coeffs))

    def __repr__(self):
        return 'BinaryForm(%s)' % self

    def __str__(self):
        def atom(i):
            k = self.degree - i
            parts = [t if e == 1 else '%s^%d' % (t, e) for t, e in (('xi', i), ('eta', k)) if e]
            return '*'.join(parts)
        return linear_combination_to_str(
            [(c, atom(i)) for i, c in reversed(list(enumerate(self.coeffs)))])


def principal_symbol(a):
    '''
    Highest order part of a as a binary form in xi (for Dx) and eta (for Dy).

    Raises
    ------
    ZeroOperator
        If a is the zero operator.

    '''
    if not a:
        raise ZeroOperator('the zero operator has no principal symbol')
    d = a.order
    return BinaryForm(d, [a[(i, d - i)] for i in range(d + 1)])


def op_from_str(text):
    '''
    Parse an operator written with Dx, Dy tokens, e.g. 'Dx^2 + y*Dy'.
    '''
    from glaplace.cli import OperatorParser
    return OperatorParser(text).parse()

