'''
Exact coefficient field Q(x, y) and the helpers built on it.

All coefficients handled by glaplace are elements of the sympy rational
function field FIELD = QQ(x, y). Elements are immutable and canonical
(coprime integer numerator and denominator, positive denominator leading
coefficient), so structural equality is value equality.

This module also holds the rational integration backend used by the
Frobenius and integral inverses, the expression parser shared with the
command-line interface, and exact linear algebra over FIELD.
'''
import re
import logging
from functools import lru_cache
from collections import namedtuple

from sympy import QQ, grlex
from sympy.polys.rings import ring, PolyElement
from sympy.polys.fields import field
from sympy.polys.matrices import DomainMatrix

from glaplace.errors import DivisionByZero, PDESyntaxError, UnknownSymbol

logger = logging.getLogger(__name__)

FIELD, X, Y = field('x,y', QQ, grlex)
RING = FIELD.ring
DOMAIN = FIELD.to_domain()
XSYM, YSYM = FIELD.symbols
ZERO = FIELD.zero
ONE = FIELD.one

VARIABLES = ('x', 'y')

IntegralX = namedtuple('IntegralX', ['rational_part', 'log_terms', 'residual'])
IntegralX.__doc__ = '''
Antiderivative in x of a rational function.

rational_part : FracElement
log_terms : tuple of (FracElement, PolyElement)
    (coefficient depending on y only, log argument)
residual : FracElement or None
    Part of the integrand that needs an algebraic extension of Q(y)
'''

#%% Construction and arithmetic

def rf(value):
    '''
    Coerce an int, Fraction, PolyElement, FracElement or sympy expression
    to an element of FIELD.
    '''
    if isinstance(value, type(ONE)) and value.field == FIELD:
        return value
    if isinstance(value, int):
        return FIELD(value)
    try:
        return FIELD(value)
    except Exception:
        return FIELD.from_expr(value)


def rf_arith(op, a, b):
    '''
    Exact field arithmetic.

    Parameters
    ----------
    op : str
        One of 'add', 'sub', 'mul', 'div'.
    a : FracElement
    b : FracElement

    Raises
    ------
    DivisionByZero
        If op is 'div' and b is zero.

    Returns
    -------
    FracElement

    '''
    a, b = rf(a), rf(b)
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        if not b:
            raise DivisionByZero('division by the zero rational function')
        return a / b
    raise ValueError('unknown operation %r' % (op,))


def rf_inv(a):
    return rf_arith('div', ONE, a)


def rf_derive(a, var):
    '''
    Partial derivative of a in var ('x' or 'y').
    '''
    return rf(a).diff(_gen(var))


@lru_cache(maxsize=65536)
def rf_partial(a, i, j):
    '''
    Mixed derivative d^i/dx^i d^j/dy^j of a, memoized.
    '''
    if i == 0 and j == 0:
        return a
    if i > 0:
        return rf_partial(a, i - 1, j).diff(X)
    return rf_partial(a, i, j - 1).diff(Y)


def _gen(var):
    if var == 'x':
        return X
    if var == 'y':
        return Y
    raise ValueError('unknown variable %r' % (var,))


def depends_on(a, var):
    '''
    True if the rational function a involves the variable var.
    '''
    a = rf(a)
    index = VARIABLES.index(var)
    return any(monom[index] for poly in (a.numer, a.denom)
               for monom in poly.itermonoms())


def rf_swap(a):
    '''
    Exchange x and y in a.
    '''
    a = rf(a)
    return FIELD.new(_poly_swap(a.numer), _poly_swap(a.denom))


def _poly_swap(p):
    return RING.from_dict({(j, i): c for (i, j), c in p.items()})


def is_constant(a):
    a = rf(a)
    return a.numer.is_ground and a.denom.is_ground


def constant_value(a):
    '''
    Rational number of a constant element of FIELD.
    '''
    a = rf(a)
    if not is_constant(a):
        raise ValueError('%s is not constant' % rf_to_str(a))
    return a.numer.LC / a.denom.LC if a else QQ(0)

#%% Polynomials

def poly_gcd(a, b):
    '''
    Greatest common divisor of two polynomials of RING, monic in grlex.

    gcd(0, b) is b made monic; gcd(0, 0) is 0.
    '''
    g = RING(a).gcd(RING(b))
    if not g:
        return g
    return g.monic()


def poly_content_in_x(p):
    '''
    Content of p as a polynomial in x over Q[y], monic.
    '''
    coeffs = {}
    for (i, j), c in p.items():
        coeffs.setdefault(i, RING.zero)
        coeffs[i] += RING({(0, j): c})
    g = RING.zero
    for c in coeffs.values():
        g = poly_gcd(g, c)
    return g


def poly_x_primitive(p):
    '''
    Primitive part of p with respect to x, monic. Returns 1 for x-free p.
    '''
    p = RING(p)
    if not p:
        return p
    content = poly_content_in_x(p)
    return p.exquo(content).monic() if content else p.monic()


def normalized(a):
    '''
    Numerator and denominator of a with a monic denominator.

    Returns
    -------
    (PolyElement, PolyElement)

    '''
    a = rf(a)
    lc = a.denom.LC
    return a.numer.quo_ground(lc), a.denom.quo_ground(lc)

#%% Rendering

def _term_to_str(monom, names):
    factors = []
    for name, e in zip(names, monom):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append('%s^%d' % (name, e))
    return '*'.join(factors)


def poly_to_str(p, names=VARIABLES):
    '''
    Render a polynomial with terms in graded-lexicographic order.

    Elements of other polynomial rings (e.g. the symbol ring in x, y, xi,
    eta) are rendered in their own ring; names must match its generators.
    '''
    if not isinstance(p, PolyElement):
        p = RING(p)
    if not p:
        return '0'
    parts = []
    for monom, c in p.terms(order=grlex):
        body = _term_to_str(monom, names)
        mag = abs(c)
        if body and mag == 1:
            text = body
        elif body:
            text = '%s*%s' % (mag, body)
        else:
            text = str(mag)
        if not parts:
            parts.append('-' + text if c < 0 else text)
        else:
            parts.append(('- ' if c < 0 else '+ ') + text)
    return ' '.join(parts)


def _needs_parens(text):
    body = text[1:] if text.startswith('-') else text
    return ' ' in body


def rf_to_str(a):
    '''
    Render an element of FIELD, for example '(x + 1)/y'.
    '''
    num, den = normalized(a)
    num_s = poly_to_str(num)
    if den == 1:
        return num_s
    den_s = poly_to_str(den)
    if _needs_parens(num_s):
        num_s = '(%s)' % num_s
    if _needs_parens(den_s) or '*' in den_s:
        den_s = '(%s)' % den_s
    return '%s/%s' % (num_s, den_s)

#%% Rational integration

# Q(y)[x], where integration in x runs over the coefficient field Q(y)
YFIELD, YV = field('y', QQ)
XRING, XV = ring('x', YFIELD.to_domain())
RX, RY = RING.gens


def _to_x_poly(p):
    coeffs = {}
    for (i, j), c in p.items():
        coeffs[(i,)] = coeffs.get((i,), YFIELD.zero) + YV**j * c
    return XRING.from_dict(coeffs)


def _y_to_ring(p):
    return RING.from_dict({(0, j): c for (j,), c in p.items()})


def _from_y(c):
    return FIELD.new(_y_to_ring(c.numer), _y_to_ring(c.denom))


def _from_x_poly(p):
    out = ZERO
    for (i,), c in p.items():
        out += _from_y(c) * X**i
    return out


def _gcdex(f, g):
    '''
    s, t, h with s*f + t*g = h = gcd(f, g), h monic.
    '''
    r0, r1 = f, g
    s0, s1 = XRING.one, XRING.zero
    t0, t1 = XRING.zero, XRING.one
    while r1:
        q, r = r0.div(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return s0, t0, r0
    lc = r0.LC
    return s0.quo_ground(lc), t0.quo_ground(lc), r0.quo_ground(lc)


def _solve_coprime(a, b, c):
    # s*a + t*b = c with deg s < deg b, for coprime a and b
    s, t, _ = _gcdex(a, b)
    s, t = s * c, t * c
    q, r = s.div(b)
    return r, t + q * a


def _hermite_reduce(a, d):
    '''
    g and a_s with a/d = g' + a_s/d_s, d_s the square-free part of d.

    Linear Hermite reduction; deg a < deg d.
    '''
    g = ZERO
    dm = d.gcd(d.diff(XV))
    ds = d.exquo(dm)
    while dm.degree() > 0:
        dm2 = dm.gcd(dm.diff(XV))
        dms = dm.exquo(dm2)
        b, c = _solve_coprime(-(ds * dm.diff(XV)).exquo(dm), dms, a)
        a = c - b.diff(XV) * ds.exquo(dms)
        g += _from_x_poly(b) / _from_x_poly(dm)
        dm = dm2
    return g, a


def _integrate_poly(p):
    return XRING.from_dict({(i + 1,): c * QQ(1, i + 1) for (i,), c in p.items()})


def rf_integrate_x(a):
    '''
    Antiderivative of a rational function in x.

    The rational part comes from Hermite reduction over Q(y). Each
    irreducible factor of the remaining square-free denominator gives a
    logarithm when its residue lies in Q(y); everything else is returned as
    the residual.

    Parameters
    ----------
    a : FracElement
        Integrand.

    Returns
    -------
    IntegralX
        Satisfies d/dx(rational_part + sum(c*log(p))) + residual == a.

    '''
    a = rf(a)
    if not a:
        return IntegralX(ZERO, (), None)

    num, den = _to_x_poly(a.numer), _to_x_poly(a.denom)
    poly, num = num.div(den)
    rational_part = _from_x_poly(_integrate_poly(poly))
    if num:
        g, _ = _hermite_reduce(num, den)
        rational_part += g

    rest = a - rational_part.diff(X)
    log_terms = _log_terms(rest) if rest else []
    residual = rest
    for c, arg in log_terms:
        residual -= c * FIELD(arg).diff(X) / FIELD(arg)
    return IntegralX(rational_part, tuple(log_terms), residual if residual else None)


def _log_terms(rest):
    # rest has a denominator square-free in x; residues are read off factor by factor
    num = _to_x_poly(rest.numer)
    dden = _to_x_poly(rest.denom.diff(RX))
    terms = []
    _, factors = rest.denom.factor_list()
    for factor, _ in factors:
        if factor.degree(RX) < 1:
            continue
        fp = _to_x_poly(factor)
        inv, _, h = _gcdex(dden.rem(fp), fp)
        if h.degree() != 0:
            logger.debug('no inverse of the derivative modulo %s', factor)
            continue
        residue = (num * inv).rem(fp)
        if residue.degree() > 0:
            continue
        c = _from_y(residue.get((0,), YFIELD.zero))
        if c:
            terms.append((c, factor.monic()))
    return terms


def rf_integrate_y(a):
    '''
    Antiderivative of a rational function in y, as an IntegralX whose log
    coefficients depend on x only.
    '''
    res = rf_integrate_x(rf_swap(a))
    return IntegralX(
        rf_swap(res.rational_part),
        tuple((rf_swap(c), _poly_swap(p)) for c, p in res.log_terms),
        rf_swap(res.residual) if res.residual is not None else None,
        )

#%% Expression parser

Token = namedtuple('Token', ['kind', 'value', 'column'])

_OPS = {'+': 'add', '-': 'sub', '*': 'mul', '/': 'div'}

_TOKEN = re.compile(r'\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))')


class ExpressionParser:
    '''
    Top-down operator precedence parser for coefficient expressions.

    Grammar: integers, names, + - * / ^ and parentheses; ^ takes a
    nonnegative integer literal. The value semantics are supplied by the
    hook methods (number, name, binary, negate, power), so subclasses can
    parse into other value types.

    Parameters
    ----------
    text : str
        Expression source.
    line : int or None, optional
        Line number used in error messages. The default is None.
    offset : int, optional
        Column of text[0] in its line, 1-based. The default is 1.

    '''
    bp = {'+': 10, '-': 10, '*': 20, '/': 20, '^': 30}
    prefix_bp = 25

    def __init__(self, text, line=None, offset=1):
        self.text = text
        self.line = line
        self.offset = offset
        self.tokens = list(self.tokenize(text))
        self.pos = 0

    def error(self, message, column, cls=PDESyntaxError):
        return cls(message, self.line if self.line is not None else 1, column)

    def tokenize(self, text):
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip():
                    col = pos + len(rest) - len(rest.lstrip()) + self.offset
                    raise self.error('unexpected character %r' % rest.strip()[0], col)
                break
            kind = m.lastgroup
            yield Token(kind, m.group(kind), m.start(kind) + self.offset)
            pos = m.end()
        yield Token('end', None, len(text) + self.offset)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        if token.kind != 'end':
            self.pos += 1
        return token

    def lbp(self, token):
        if token.kind == 'op':
            return self.bp.get(token.value, 0)
        return 0

    def parse(self):
        if self.peek().kind == 'end':
            raise self.error('empty expression', self.peek().column)
        value = self.expression(0)
        token = self.peek()
        if token.kind != 'end':
            raise self.error('unexpected %r' % token.value, token.column)
        return value

    def expression(self, rbp):
        token = self.advance()
        left = self.nud(token)
        while rbp < self.lbp(self.peek()):
            token = self.advance()
            left = self.led(token, left)
        return left

    def nud(self, token):
        if token.kind == 'number':
            return self.number(int(token.value), token)
        if token.kind == 'name':
            return self.name(token.value, token)
        if token.value == '(':
            value = self.expression(0)
            closing = self.advance()
            if closing.value != ')':
                raise self.error("expected ')'", closing.column)
            return value
        if token.value == '-':
            return self.negate(self.expression(self.prefix_bp), token)
        if token.value == '+':
            return self.expression(self.prefix_bp)
        if token.kind == 'end':
            raise self.error('unexpected end of expression', token.column)
        raise self.error('unexpected %r' % token.value, token.column)

    def led(self, token, left):
        if token.value == '^':
            exponent = self.advance()
            if exponent.kind != 'number':
                raise self.error("'^' needs a nonnegative integer exponent", exponent.column)
            if self.peek().value == '^':
                raise self.error("chained '^' is ambiguous, use parentheses", self.peek().column)
            return self.power(left, int(exponent.value), token)
        right = self.expression(self.bp[token.value])
        return self.binary(token.value, left, right, token)

    #%% Value hooks

    def number(self, value, token):
        return FIELD(value)

    def name(self, name, token):
        if name == 'x':
            return X
        if name == 'y':
            return Y
        raise self.error('unknown symbol %r' % name, token.column, UnknownSymbol)

    def negate(self, value, token):
        return -value

    def binary(self, op, left, right, token):
        if op == '/' and not right:
            raise self.error('division by zero', token.column)
        return rf_arith(_OPS[op], left, right)

    def power(self, base, exponent, token):
        return base ** exponent


def rf_parse(text, line=None):
    '''
    Parse a coefficient expression in x and y into FIELD.
    '''
    return ExpressionParser(text, line).parse()

#%% Linear algebra over FIELD

def matrix(rows, ncols=None):
    '''
    DomainMatrix over FIELD from a list of rows.
    '''
    rows = [[rf(v) for v in row] for row in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), DOMAIN)


def rank(rows, ncols=None):
    '''
    Exact rank of a list of rows over FIELD.
    '''
    if not rows:
        return 0
    return matrix(rows, ncols).rank()


def nullspace(rows, ncols):
    '''
    Basis of {v : M v = 0} for the matrix with the given rows.

    Returns
    -------
    list of list of FracElement

    '''
    if not rows:
        return [[ONE if i == j else ZERO for j in range(ncols)] for i in range(ncols)]
    null = matrix(rows, ncols).nullspace()
    return [list(row) for row in null.to_list()]


def row_reduce(rows, ncols):
    '''
    Reduced row echelon form, without zero rows.

    Returns
    -------
    (list of list of FracElement, tuple of int)
        The nonzero rows and their pivot columns.

    '''
    if not rows:
        return [], ()
    reduced, pivots = matrix(rows, ncols).rref()
    out = reduced.to_list()[:len(pivots)]
    return out, tuple(pivots)


def solve(rows, rhs, ncols):
    '''
    One solution of M v = rhs, or None if the system is inconsistent.
    '''
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = row_reduce(augmented, ncols + 1)
    if ncols in pivots:
        return None
    sol = [ZERO] * ncols
    for row, col in zip(reduced, pivots):
        sol[col] = row[ncols]
    return sol


def _coefficient_text(c):
    # sign pulled out of the numerator, and the text of the remaining factor
    num, den = normalized(c)
    negative = num.LC < 0
    if negative:
        num = -num
    num_s = poly_to_str(num)
    if ' ' in num_s:
        num_s = '(%s)' % num_s
    if den == 1:
        return negative, ('' if num == 1 else num_s)
    den_s = poly_to_str(den)
    if ' ' in den_s or '*' in den_s:
        den_s = '(%s)' % den_s
    return negative, '%s/%s' % (num_s, den_s)


def linear_combination_to_str(items):
    '''
    Render sum(c*atom) for (FracElement c, str atom) pairs, skipping zeros.

    An empty atom stands for 1.
    '''
    parts = []
    for c, atom in items:
        c = rf(c)
        if not c:
            continue
        negative, coeff = _coefficient_text(c)
        if not atom:
            text = coeff or '1'
        elif not coeff:
            text = atom
        else:
            text = '%s*%s' % (coeff, atom)
        if not parts:
            parts.append('-' + text if negative else text)
        else:
            parts.append(('- ' if negative else '+ ') + text)
    return ' '.join(parts) if parts else '0'
