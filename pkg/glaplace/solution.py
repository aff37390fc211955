'''
Closed-form general solutions.

A SolutionExpr is a finite linear combination

    u = sum_j S_j * f^(j)(y) + sum_k T_k * C_k

of derivatives of one arbitrary function f(y) and free constants C_k, with
closed-form scalar coefficients. A Scalar is a finite sum of terms

    c * exp(R + integrals) * prod(p^e) * prod(log(q)^n) * [Int(...)]

with c, R in Q(x, y). Everything is immutable and hashable.
'''
import logging
from math import floor, gcd
from collections import namedtuple

from sympy import QQ

from glaplace.ratfield import (
    FIELD, ZERO, ONE, X, Y, rf, rf_inv, rf_integrate_x, rf_integrate_y,
    rf_to_str, poly_to_str, is_constant, constant_value, depends_on,
    linear_combination_to_str,
    )
from glaplace.errors import ApplyToResidual, QuadratureResidual
from glaplace.utilities import cfg

logger = logging.getLogger(__name__)


def _poly_key(p):
    return poly_to_str(p)


def _factor(p):
    # log and power bases are stored monic
    return FIELD.ring(p).monic()

#%% Basis elements

class _Basis:
    # f^(1) and C1 are both 1-tuples; equality and hashing also compare the class
    __slots__ = ()

    def __eq__(self, other):
        return type(self) is type(other) and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((type(self).__name__,) + tuple(self))


class FunctionDerivative(_Basis, namedtuple('FunctionDerivative', ['order'])):
    '''
    f^(order)(y)
    '''
    __slots__ = ()
    sort_key = property(lambda self: (0, -self.order))

    def render(self, name=None):
        name = name or cfg.function_name
        if self.order <= 3:
            return '%s%s(y)' % (name, "'" * self.order)
        return '%s^(%d)(y)' % (name, self.order)


class Constant(_Basis, namedtuple('Constant', ['index'])):
    '''
    Free constant C_index.
    '''
    __slots__ = ()
    sort_key = property(lambda self: (1, self.index))

    def render(self, prefix=None):
        return '%s%d' % (prefix or cfg.constant_prefix, self.index)

#%% Scalar factors

class ExpFactor(namedtuple('ExpFactor', ['exponent', 'powers', 'integrals'])):
    '''
    exp(exponent + sum of integrals) * prod(p ** e for p, e in powers)

    powers holds monic polynomials with exponents that are not integer
    constants (integer parts are folded into the coefficient by make_exp).
    integrals holds (var, integrand) pairs standing for exp(Int(integrand, var)).
    '''

    @property
    def is_trivial(self):
        return not self.exponent and not self.powers and not self.integrals

    def render(self):
        parts = []
        if self.exponent:
            parts.append('exp(%s)' % rf_to_str(self.exponent))
        for var, g in self.integrals:
            parts.append('exp(Int(%s, %s))' % (rf_to_str(g), var))
        for p, e in self.powers:
            base = poly_to_str(p)
            base = '(%s)' % base if ' ' in base or '*' in base or '^' in base else base
            parts.append('%s^(%s)' % (base, rf_to_str(e)))
        return '*'.join(parts)


TRIVIAL_EXP = ExpFactor(ZERO, (), ())
NO_LOG = ()


def make_exp(exponent=ZERO, powers=(), integrals=()):
    '''
    Canonical exponential factor.

    Returns
    -------
    (FracElement, ExpFactor)
        A rational multiplier and the factor; their product is the requested
        expression.

    '''
    merged = {}
    for p, e in powers:
        p = _factor(p)
        if p == 1:
            continue
        merged[p] = merged.get(p, ZERO) + rf(e)
    multiplier = ONE
    kept = []
    for p, e in merged.items():
        if is_constant(e):
            v = constant_value(e)
            n = int(floor(v))
            if n:
                multiplier *= FIELD(p) ** n
                e = e - n
        if e:
            kept.append((p, e))
    ints = {}
    for var, g in integrals:
        ints[var] = ints.get(var, ZERO) + rf(g)
    ints = tuple(sorted((v, g) for v, g in ints.items() if g))
    kept = tuple(sorted(kept, key=lambda pe: _poly_key(pe[0])))
    return multiplier, ExpFactor(rf(exponent), kept, ints)


def exp_product(a, b):
    return make_exp(a.exponent + b.exponent, a.powers + b.powers, a.integrals + b.integrals)


def exp_inverse(a):
    return make_exp(-a.exponent, tuple((p, -e) for p, e in a.powers),
                    tuple((v, -g) for v, g in a.integrals))


def log_product(a, b):
    merged = dict(a)
    for p, n in b:
        merged[p] = merged.get(p, 0) + n
    return tuple(sorted(((p, n) for p, n in merged.items() if n), key=lambda pn: _poly_key(pn[0])))


def log_render(logs):
    return '*'.join('log(%s)' % poly_to_str(p) if n == 1 else 'log(%s)^%d' % (poly_to_str(p), n)
                    for p, n in logs)


class Quadrature(namedtuple('Quadrature', ['var', 'integrand'])):
    '''
    Unevaluated antiderivative Int(integrand, var) of a Scalar.
    '''

    def render(self):
        return 'Int(%s, %s)' % (self.integrand.render(), self.var)

#%% Scalars

class Scalar:
    '''
    Finite sum of closed-form terms.

    Parameters
    ----------
    terms : dict, optional
        Map (ExpFactor, logs, Quadrature or None) -> FracElement.

    '''
    __slots__ = ('_terms', '_hash')

    def __init__(self, terms=None):
        self._terms = {k: rf(c) for k, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def rational(cls, c):
        return cls({(TRIVIAL_EXP, NO_LOG, None): c})

    @classmethod
    def exponential(cls, multiplier, factor):
        return cls({(factor, NO_LOG, None): multiplier})

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, Scalar) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @property
    def is_rational(self):
        return all(k == (TRIVIAL_EXP, NO_LOG, None) for k in self._terms)

    @property
    def rational_part(self):
        return self._terms.get((TRIVIAL_EXP, NO_LOG, None), ZERO)

    @property
    def has_quadrature(self):
        return any(q is not None for _, _, q in self._terms)

    def __add__(self, other):
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, ZERO) + c
        return Scalar(terms)

    def __neg__(self):
        return Scalar({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = rf(c)
        return Scalar({k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return self.scale(other)
        terms = {}
        for (e1, l1, q1), c1 in self._terms.items():
            for (e2, l2, q2), c2 in other._terms.items():
                if q1 is not None and q2 is not None:
                    raise ApplyToResidual('product of two unevaluated quadratures')
                mult, e = exp_product(e1, e2)
                key = (e, log_product(l1, l2), q1 if q1 is not None else q2)
                terms[key] = terms.get(key, ZERO) + c1 * c2 * mult
        return Scalar(terms)

    def inverse(self):
        '''
        Inverse of a single exponential term.
        '''
        if len(self._terms) != 1:
            raise ValueError('only a single term can be inverted')
        (e, logs, q), c = next(iter(self._terms.items()))
        if logs or q is not None:
            raise ValueError('cannot invert a logarithm or a quadrature')
        mult, inv = exp_inverse(e)
        return Scalar({(inv, NO_LOG, None): mult * rf_inv(c)})

    #%% Calculus

    def derive(self, var):
        '''
        Partial derivative in var ('x' or 'y').

        Raises
        ------
        ApplyToResidual
            If an unevaluated integral in the other variable is differentiated.

        '''
        gen = X if var == 'x' else Y
        total = Scalar()
        for (e, logs, q), c in self._terms.items():
            total = total + Scalar({(e, logs, q): c.diff(gen)})
            # exponential factor
            factor = e.exponent.diff(gen)
            for p, k in e.powers:
                factor += k * FIELD(p).diff(gen) / FIELD(p)
            for v, g in e.integrals:
                if v != var:
                    raise ApplyToResidual('exp(Int(%s, %s)) differentiated in %s' % (rf_to_str(g), v, var))
                factor += g
            total = total + Scalar({(e, logs, q): c * factor})
            for p, k in e.powers:
                dk = k.diff(gen)
                if dk:
                    total = total + Scalar({(e, log_product(logs, ((p, 1),)), q): c * dk})
            # logarithms
            for p, n in logs:
                lower = log_product(logs, ((p, -1),))
                dp = FIELD(p).diff(gen) / FIELD(p)
                if dp:
                    total = total + Scalar({(e, lower, q): c * n * dp})
            # quadrature
            if q is not None:
                if q.var != var:
                    raise ApplyToResidual('Int(..., %s) differentiated in %s' % (q.var, var))
                total = total + Scalar({(e, logs, None): c}) * q.integrand
        return total

    def partial(self, i, j):
        out = self
        for _ in range(i):
            out = out.derive('x')
        for _ in range(j):
            out = out.derive('y')
        return out

    def integrate(self, var):
        '''
        Antiderivative in var, term by term.

        Purely rational terms are integrated in closed form; any other term,
        and any residual of rational integration, becomes a Quadrature.
        '''
        integrate = rf_integrate_x if var == 'x' else rf_integrate_y
        total = Scalar()
        for key, c in self._terms.items():
            if key != (TRIVIAL_EXP, NO_LOG, None):
                total = total + Scalar({(TRIVIAL_EXP, NO_LOG, Quadrature(var, Scalar({key: c}))): ONE})
                continue
            res = integrate(c)
            total = total + Scalar.rational(res.rational_part)
            for coeff, p in res.log_terms:
                total = total + Scalar({(TRIVIAL_EXP, ((_factor(p), 1),), None): coeff})
            if res.residual is not None:
                total = total + Scalar({(TRIVIAL_EXP, NO_LOG, Quadrature(var, Scalar.rational(res.residual))): ONE})
        return total

    def depends_on(self, var):
        for (e, logs, q), c in self._terms.items():
            if depends_on(c, var) or depends_on(e.exponent, var) or q is not None:
                return True
            if any(depends_on(FIELD(p), var) or depends_on(k, var) for p, k in e.powers):
                return True
            if any(depends_on(FIELD(p), var) for p, _ in logs) or e.integrals:
                return True
        return False

    #%% Rendering

    def _term_atoms(self):
        items = []
        for (e, logs, q), c in sorted(self._terms.items(), key=lambda kv: repr_key(kv[0])):
            parts = [s for s in (e.render(), log_render(logs), q.render() if q else '') if s]
            items.append((c, '*'.join(parts)))
        return items

    def render(self):
        return linear_combination_to_str(self._term_atoms())

    def __repr__(self):
        return 'Scalar(%s)' % self.render()


def repr_key(key):
    e, logs, q = key
    return (not e.is_trivial, len(logs), q is not None, e.render(), log_render(logs), q.render() if q else '')

#%% Solution expressions

class SolutionExpr:
    '''
    Linear combination of f^(j)(y) and constants C_k with Scalar coefficients.

    Parameters
    ----------
    terms : dict, optional
        Map from FunctionDerivative or Constant to Scalar (or a value
        coercible to a rational Scalar).

    '''
    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        clean = {}
        for basis, s in (terms or {}).items():
            if not isinstance(s, Scalar):
                s = Scalar.rational(s)
            if s:
                clean[basis] = s
        self._terms = clean

    @classmethod
    def function(cls, scalar=None, order=0):
        '''
        scalar * f^(order)(y)
        '''
        return cls({FunctionDerivative(order): scalar if scalar is not None else Scalar.rational(ONE)})

    @classmethod
    def constant(cls, index, scalar=None):
        return cls({Constant(index): scalar if scalar is not None else Scalar.rational(ONE)})

    def zero_like(self):
        return SolutionExpr()

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key)

    def __getitem__(self, basis):
        return self._terms.get(basis, Scalar())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        return isinstance(other, SolutionExpr) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        terms = dict(self._terms)
        for b, s in other._terms.items():
            terms[b] = terms.get(b, Scalar()) + s
        return SolutionExpr(terms)

    def __neg__(self):
        return SolutionExpr({b: -s for b, s in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        '''
        Multiply by a rational function or a Scalar.
        '''
        if isinstance(c, Scalar):
            return SolutionExpr({b: s * c for b, s in self._terms.items()})
        return SolutionExpr({b: s.scale(c) for b, s in self._terms.items()})

    #%% Properties

    @property
    def q(self):
        '''
        Highest derivative of f present, or -1 without f.
        '''
        orders = [b.order for b in self._terms if isinstance(b, FunctionDerivative)]
        return max(orders) if orders else -1

    @property
    def constants(self):
        return tuple(sorted(b.index for b in self._terms if isinstance(b, Constant)))

    @property
    def has_quadrature(self):
        return any(s.has_quadrature for s in self._terms.values())

    def function_part(self):
        return SolutionExpr({b: s for b, s in self._terms.items() if isinstance(b, FunctionDerivative)})

    def constant_part(self):
        return SolutionExpr({b: s for b, s in self._terms.items() if isinstance(b, Constant)})

    #%% Calculus

    def derive(self, var):
        out = SolutionExpr()
        for b, s in self._terms.items():
            out = out + SolutionExpr({b: s.derive(var)})
            if var == 'y' and isinstance(b, FunctionDerivative):
                out = out + SolutionExpr({FunctionDerivative(b.order + 1): s})
        return out

    def partial(self, i, j):
        out = self
        for _ in range(i):
            out = out.derive('x')
        for _ in range(j):
            out = out.derive('y')
        return out

    def integrate_x(self):
        '''
        Antiderivative in x, coefficient by coefficient (f depends on y only).
        '''
        return SolutionExpr({b: s.integrate('x') for b, s in self._terms.items()})

    #%% Constants

    def renumber_constants(self, start=1):
        '''
        Rename constants C_k to consecutive indices from start, in order.
        '''
        mapping = {k: n for n, k in enumerate(self.constants, start)}
        return SolutionExpr({Constant(mapping[b.index]) if isinstance(b, Constant) else b: s
                             for b, s in self._terms.items()})

    #%% Rendering

    def render(self, function_name=None, constant_prefix=None):
        items = []
        for b, s in self.items():
            atom = b.render(function_name if isinstance(b, FunctionDerivative) else constant_prefix)
            atoms = s._term_atoms()
            if len(atoms) == 1:
                c, factor = atoms[0]
                items.append((c, '*'.join(t for t in (factor, atom) if t)))
            else:
                items.append((ONE, '(%s)*%s' % (s.render(), atom)))
        return linear_combination_to_str(items)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return 'SolutionExpr(%s)' % self.render()

#%% Exponentials of integrals

def exp_solution(a, c=None):
    '''
    Scalar E with E_x = -a E and, when c is given, E_y = -c E.

    With c given, a_y = c_x is required.

    Returns
    -------
    Scalar

    Raises
    ------
    QuadratureResidual
        If the y-part of E is inconsistent with the rational x-integration.

    '''
    a = rf(a)
    ix = rf_integrate_x(a)
    exponent = -ix.rational_part
    powers = [(p, -k) for k, p in ix.log_terms]
    integrals = [('x', -ix.residual)] if ix.residual is not None else []
    if c is not None:
        c = rf(c)
        if integrals:
            raise QuadratureResidual('exp(-Int(a, x)) is not closed form; cannot match its y-derivative')
        if any(not is_constant(k) for k, _ in ix.log_terms):
            raise QuadratureResidual('log coefficients of Int(a, x) depend on y')
        # e'(y)/e(y) for the y-dependent factor
        d = -c - exponent.diff(Y)
        for p, k in powers:
            d -= k * FIELD(p).diff(Y) / FIELD(p)
        if depends_on(d, 'x'):
            raise QuadratureResidual('the gauge equations E_x = -aE, E_y = -cE are not compatible')
        iy = rf_integrate_y(d)
        exponent = exponent + iy.rational_part
        powers += [(p, k) for k, p in iy.log_terms]
        if iy.residual is not None:
            integrals.append(('y', iy.residual))
    mult, factor = make_exp(exponent, powers, integrals)
    return Scalar.exponential(mult, factor)

#%% Final normalization

def _int_content(poly):
    # coefficients of numerators and denominators of FIELD elements are integers
    g = 0
    for c in poly.coeffs():
        g = gcd(g, int(c.numerator))
    return g


def _content(coefficients):
    num, den = 0, 1
    for c in coefficients:
        num = gcd(num, _int_content(c.numer))
        d = _int_content(c.denom)
        den = den * d // gcd(den, d)
    return QQ(num, den)


def _basis_rank(b):
    return b.order if isinstance(b, FunctionDerivative) else b.index


def normalize_part(part):
    '''
    Scale a linear combination by a rational number so that its
    coefficients are primitive and the lowest basis element present has a
    numerator with positive leading coefficient.
    '''
    coeffs = [c for _, s in part.items() for _, c in s.items()]
    if not coeffs:
        return part
    content = _content(coeffs)
    lowest = min(part._terms, key=_basis_rank)
    _, lead = min(part[lowest].items(), key=lambda kv: repr_key(kv[0]))
    sign = -1 if lead.numer.LC < 0 else 1
    return part.scale(FIELD(QQ(sign) / content))


def normalize_solution(expr):
    '''
    Normalize the f-part and each constant's coefficient separately and
    renumber the constants C1, C2, ...

    Only rescalings by rational numbers are applied; f and the constants are
    arbitrary, so the solution set is unchanged.
    '''
    out = normalize_part(expr.function_part())
    for k in expr.constants:
        out = out + normalize_part(SolutionExpr({Constant(k): expr[Constant(k)]}))
    return out.renumber_constants()
