'''
Formal theory of linear systems in one unknown on the plane.

Completion to a left Groebner basis in the operator algebra over Q(x, y),
symbol spaces and their dimensions, the characteristic divisor and the
class omega, complexity kappa, Spencer counts and the compatibility test.

The term order is graded, Dy-degree major (see diffop.term_key), so the
principal symbols of a Groebner basis generate the symbol ideal and
dim g_k counts the standard monomials of degree k.
'''
import logging
from functools import lru_cache
from collections import Counter, namedtuple

import numpy as np
from sympy import QQ
from sympy.polys.rings import ring
from sympy.polys.matrices import DomainMatrix

from glaplace.ratfield import RING, ONE, rank, poly_to_str, is_constant, constant_value
from glaplace.diffop import (
    DiffOp, STANDARD_FRAME, term_key, left_shift, principal_symbol, as_diffop,
    )
from glaplace.errors import GlaplaceError, NonDiscreteCharVariety, TrivialIdeal, ZeroOperator
from glaplace.utilities import cfg

logger = logging.getLogger(__name__)

SYMBOL_RING, _SX, _SY, XI, ETA = ring('x,y,xi,eta', QQ)

Reduction = namedtuple('Reduction', ['pair', 'lcm', 'remainder'])
SymbolProfile = namedtuple('SymbolProfile', ['gdims', 'k_stab', 'char_divisor', 'omega', 'kappa'])
SpencerData = namedtuple('SpencerData', ['m', 's', 'h1', 'h2', 'type_sig'])
Verdict = namedtuple('Verdict', ['compatible', 'order', 'witness'])
Verdict.__new__.__defaults__ = (None, None)

#%% Monomials

def divides(a, b):
    return a[0] <= b[0] and a[1] <= b[1]


def lcm(a, b):
    return (max(a[0], b[0]), max(a[1], b[1]))


@lru_cache(maxsize=16384)
def shifted(g, i, j):
    '''
    Dx^i Dy^j o g, memoized on the operator.
    '''
    if i == 0 and j == 0:
        return g
    return left_shift(i, j, g)

#%% Reduction

def reduce(p, basis):
    '''
    Normal form of p modulo a list of monic operators.

    Every term of the result has a monomial not divisible by any leading
    monomial of the basis.

    Parameters
    ----------
    p : DiffOp
    basis : sequence of DiffOp
        Monic operators.

    Returns
    -------
    DiffOp

    '''
    lms = [(g.leading_monomial, g) for g in basis]
    standard = {}
    rest = as_diffop(p)
    while rest:
        m = rest.leading_monomial
        c = rest[m]
        for lm, g in lms:
            if divides(lm, m):
                rest = rest - shifted(g, m[0] - lm[0], m[1] - lm[1]).scale(c)
                break
        else:
            standard[m] = c
            rest = rest - DiffOp.monomial(m[0], m[1], c)
    return DiffOp(standard)


def s_polynomial(f, g):
    '''
    S-polynomial of two monic operators at the lcm of their leading monomials.
    '''
    a, b = f.leading_monomial, g.leading_monomial
    m = lcm(a, b)
    return shifted(f, m[0] - a[0], m[1] - a[1]) - shifted(g, m[0] - b[0], m[1] - b[1])


def autoreduce(ops):
    '''
    Make operators monic and remove leading-monomial divisibilities by
    reducing each operator modulo the others, keeping the ideal.
    '''
    ops = [g.monic() for g in ops if g]
    changed = True
    while changed:
        changed = False
        for k, g in enumerate(ops):
            others = ops[:k] + ops[k + 1:]
            if any(divides(h.leading_monomial, g.leading_monomial) for h in others):
                r = reduce(g, others)
                ops = others if not r else others[:k] + [r.monic()] + others[k:]
                changed = True
                break
    return ops

#%% Systems and completion

class PDESystem:
    '''
    Finite system of linear equations P u = 0 with a frame.

    Parameters
    ----------
    generators : sequence of DiffOp
        Nonzero operators. They are stored monic and with no leading monomial
        dividing another.
    frame : Frame, optional
        The default is the coordinate frame.
    unknown : str, optional
        Name of the unknown function. The default is 'u'.
    ideal : CompletedIdeal, optional
        Completion of the same generators, when already known.

    '''

    def __init__(self, generators, frame=STANDARD_FRAME, unknown='u', ideal=None):
        ops = [as_diffop(g) for g in generators]
        if not any(ops):
            raise ZeroOperator('a system needs at least one nonzero generator')
        self.generators = tuple(autoreduce(ops))
        self.frame = frame
        self.unknown = unknown
        self._ideal = ideal

    @property
    def ideal(self):
        if self._ideal is None:
            self._ideal = complete(self)
        return self._ideal

    @property
    def orders(self):
        return tuple(sorted(g.order for g in self.generators))

    def with_frame(self, frame):
        return PDESystem(self.generators, frame, self.unknown, self._ideal)

    def __eq__(self, other):
        return isinstance(other, PDESystem) and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash(frozenset(self.generators))

    def __repr__(self):
        return 'PDESystem(%s)' % ', '.join(str(g) for g in self.generators)


class CompletedIdeal:
    '''
    Reduced left Groebner basis together with the log of its S-pair reductions.

    Attributes
    ----------
    basis : tuple of DiffOp
        Monic, inter-reduced, sorted by increasing leading monomial.
    witness : tuple of Reduction
        Every S-pair reduction in completion order.
    trivial : bool
        True if 1 is in the ideal; basis is then (1,).

    '''

    def __init__(self, basis, witness, trivial=False):
        self.basis = tuple(sorted(basis, key=lambda g: term_key(g.leading_monomial)))
        self.witness = tuple(witness)
        self.trivial = trivial

    @property
    def leading_monomials(self):
        return tuple(g.leading_monomial for g in self.basis)

    @property
    def max_order(self):
        return max(g.order for g in self.basis)

    def reduce(self, p):
        return reduce(p, self.basis)

    def contains(self, p):
        return not self.reduce(p)

    def is_standard(self, monom):
        return not any(divides(lm, monom) for lm in self.leading_monomials)

    def __repr__(self):
        return 'CompletedIdeal(%s)' % ', '.join(str(g) for g in self.basis)


def complete(sys):
    '''
    Left Groebner basis of the ideal generated by the equations of sys.

    Buchberger's algorithm with the normal selection strategy and the chain
    criterion. The product criterion does not hold for operators and is not
    used.

    Parameters
    ----------
    sys : PDESystem or sequence of DiffOp

    Returns
    -------
    CompletedIdeal
        With trivial=True if a nonzero function lies in the ideal.

    '''
    generators = sys.generators if isinstance(sys, PDESystem) else sys
    basis = [g.monic() for g in generators if g]
    if not basis:
        raise ZeroOperator('cannot complete the zero ideal')
    witness = []
    if any(g.order == 0 for g in basis):
        return CompletedIdeal([DiffOp.scalar(ONE)], witness, trivial=True)

    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    done = set()
    while pending:
        pair = min(pending, key=lambda p: (term_key(lcm(basis[p[0]].leading_monomial,
                                                        basis[p[1]].leading_monomial)), p))
        pending.discard(pair)
        done.add(pair)
        i, j = pair
        m = lcm(basis[i].leading_monomial, basis[j].leading_monomial)
        if _chain_criterion(i, j, m, basis, done):
            continue
        r = reduce(s_polynomial(basis[i], basis[j]), basis)
        witness.append(Reduction(pair, m, r))
        if not r:
            continue
        logger.debug('new basis element of order %d: %s', r.order, r)
        if r.order == 0:
            return CompletedIdeal([DiffOp.scalar(ONE)], witness, trivial=True)
        basis.append(r.monic())
        n = len(basis) - 1
        pending.update((k, n) for k in range(n))

    return CompletedIdeal(interreduce(basis), witness)


def _chain_criterion(i, j, m, basis, done):
    # skip (i, j) if some k has LM(k) | lcm(i, j) and both (i, k), (j, k) were treated
    for k in range(len(basis)):
        if k in (i, j) or not divides(basis[k].leading_monomial, m):
            continue
        if tuple(sorted((i, k))) in done and tuple(sorted((j, k))) in done:
            return True
    return False


def interreduce(basis):
    '''
    Reduced Groebner basis from a Groebner basis.
    '''
    minimal = []
    for k, g in enumerate(basis):
        lm = g.leading_monomial
        if any(divides(h.leading_monomial, lm) and (h.leading_monomial != lm or l < k)
               for l, h in enumerate(basis) if l != k):
            continue
        minimal.append(g)
    return [reduce(g, [h for h in minimal if h is not g]).monic() for g in minimal]

#%% Symbols

def staircase_counts(lms, upto):
    '''
    Number of standard monomials of each degree 0..upto.

    Returns
    -------
    1D numpy array of int

    '''
    grid = np.zeros((upto + 1, upto + 1), dtype=bool)
    for a, b in lms:
        if a <= upto and b <= upto:
            grid[a:, b:] = True
    ks = np.arange(upto + 1)
    return np.array([k + 1 - grid[ks[:k + 1], k - ks[:k + 1]].sum() for k in ks], dtype=int)


def gdims(ci):
    '''
    dim g_k for k = 0..k_stab+1 and the stabilization order k_stab.

    Raises
    ------
    TrivialIdeal
        If the ideal contains 1.
    NonDiscreteCharVariety
        If the dimensions do not stabilize below cfg.max_order.

    '''
    if ci.trivial:
        raise TrivialIdeal('the ideal contains 1; the only solution is u = 0')
    lms = ci.leading_monomials
    bound = max(a for a, _ in lms) + max(b for _, b in lms) + cfg.stabilization_guard + 1
    if bound > cfg.max_order:
        raise NonDiscreteCharVariety(
            'symbol dimensions not stable below order %d' % cfg.max_order)
    counts = staircase_counts(lms, bound)
    tail = counts[-1]
    k_stab = len(counts) - 1
    while k_stab > 0 and counts[k_stab - 1] == tail:
        k_stab -= 1
    return tuple(int(v) for v in counts[:k_stab + 2]), k_stab


def symbol_space(ci, k):
    '''
    Basis of the degree-k part J_k of the symbol ideal.

    One form per leading-ideal monomial mu of degree k: (mu / LM(G)) times the
    principal symbol of a basis element G with LM(G) | mu. Their leading
    monomials are distinct, so they are independent.

    Returns
    -------
    list of BinaryForm

    '''
    forms = []
    for i in range(k + 1):
        mu = (i, k - i)
        for g in ci.basis:
            lm = g.leading_monomial
            if divides(lm, mu):
                forms.append(principal_symbol(g).shift(mu[0] - lm[0], mu[1] - lm[1]))
                break
    return forms


def form_rank(forms, degree):
    return rank([list(f.coeffs) for f in forms], degree + 1)


def prolonged_forms(symbols, k):
    '''
    All xi^p eta^q * s with p + q + deg(s) = k, for s in symbols.
    '''
    out = []
    for s in symbols:
        d = k - s.degree
        if d < 0:
            continue
        out.extend(s.shift(p, d - p) for p in range(d + 1))
    return out

#%% Characteristic divisor

def _form_to_poly(form):
    # clear denominators and move to Q[x, y, xi, eta]
    den = RING.one
    for c in form.coeffs:
        if c:
            den = den.lcm(c.denom)
    poly = SYMBOL_RING.zero
    for i, c in enumerate(form.coeffs):
        if not c:
            continue
        num = c.numer * den.exquo(c.denom)
        for (a, b), v in num.items():
            poly += SYMBOL_RING({(a, b, i, form.degree - i): v})
    return poly


def _remove_function_content(poly):
    # divide by the gcd of the coefficients of the xi, eta monomials
    coeffs = {}
    for (a, b, p, q), v in poly.items():
        coeffs.setdefault((p, q), SYMBOL_RING.zero)
        coeffs[(p, q)] += SYMBOL_RING({(a, b, 0, 0): v})
    content = SYMBOL_RING.zero
    for c in coeffs.values():
        content = content.gcd(c)
    return poly.exquo(content)


def form_degree(poly):
    return max(p + q for _, _, p, q in poly.itermonoms())


def char_divisor(ci):
    '''
    Characteristic divisor and class of an ideal.

    The gcd of a basis of J_k, square-free factorized. k is the stabilization
    order, raised to the highest basis order when J_k would miss a generator.

    Returns
    -------
    (tuple of (PolyElement, int), int)
        Factors in Q[x, y, xi, eta] with multiplicities, and omega.

    '''
    _, k_stab = gdims(ci)
    forms = symbol_space(ci, max(k_stab, ci.max_order))
    g = SYMBOL_RING.zero
    for f in forms:
        g = g.gcd(_form_to_poly(f))
    if not g or g.is_ground:
        return (), 0
    g = _remove_function_content(g)
    if g.is_ground:
        return (), 0
    _, factors = g.sqf_list()
    divisor = tuple((f.monic(), k) for f, k in factors if not f.is_ground)
    omega = sum(form_degree(f) * k for f, k in divisor)
    return divisor, omega


def divisor_to_str(divisor):
    names = ('x', 'y', 'xi', 'eta')
    return ' '.join('{%s}^%d' % (poly_to_str(f, names), k) if k > 1 else '{%s}' % poly_to_str(f, names)
                    for f, k in divisor) or '{}'


def is_straightened(divisor):
    '''
    True for the divisor {xi}: the characteristic is Dx.
    '''
    return len(divisor) == 1 and divisor[0] == (XI, 1)


def complexity(gdims_, omega):
    '''
    sum over i >= omega of (dim g_i - omega).
    '''
    return int(sum(g - omega for i, g in enumerate(gdims_) if i >= omega))


def symbol_profile(ci):
    '''
    Symbol dimensions, characteristic divisor, class and complexity.

    Returns
    -------
    SymbolProfile

    '''
    dims, k_stab = gdims(ci)
    divisor, omega = char_divisor(ci)
    if dims[k_stab] != omega:
        logger.warning('stable symbol dimension %d differs from class %d', dims[k_stab], omega)
    return SymbolProfile(dims, k_stab, divisor, omega, complexity(dims, omega))

#%% Spencer counts

def spencer_numbers(sys, ci=None):
    '''
    New-equation counts m_k, syzygy counts s_k and h1, h2.

    m_k is the number of minimal generators of the symbol ideal in degree k,
    the rank of J_k modulo xi J_(k-1) + eta J_(k-1). With a two-variable
    symbol ring the Hilbert series numerator is 1 - sum t^m + sum t^s, which
    gives s_k = g_k - 2 g_(k-1) + g_(k-2) + m_k.

    Raises
    ------
    GlaplaceError
        If the counts fail spencer_identities.

    Returns
    -------
    SpencerData

    '''
    ci = ci if ci is not None else sys.ideal
    dims, k_stab = gdims(ci)
    top = k_stab + 2
    g = [_g(dims, k) for k in range(top + 1)]
    m, s = {}, {}
    previous = []
    for k in range(1, top + 1):
        current = symbol_space(ci, k)
        lifted = prolonged_forms(previous, k) if previous else []
        new = len(current) - (form_rank(lifted, k) if lifted else 0)
        if new:
            m[k] = new
        n_k = g[k] - 2 * g[k - 1] + (g[k - 2] if k >= 2 else 0)
        if n_k + new:
            s[k] = n_k + new
        previous = current
    h1 = sum(m.values())
    h2 = sum(s.values())
    type_sig = tuple(sorted(Counter(m).elements()))
    data = SpencerData(m, s, h1, h2, type_sig)
    failed = [text for text, holds in spencer_identities(data, _g(dims, top)) if not holds]
    if failed:
        raise GlaplaceError('Spencer counts m=%s s=%s violate %s' % (m, s, ', '.join(failed)))
    return data


def spencer_identities(data, omega):
    '''
    Identities of the Hilbert series numerator 1 - sum t^m + sum t^s.

    The numerator vanishes at t = 1 (h0 - h1 + h2 = 0 with h0 = 1, that is
    h2 = h1 - 1) and its derivative there is -omega.

    Returns
    -------
    list of (str, bool)

    '''
    weighted = sum(k * n for k, n in data.m.items()) - sum(k * n for k, n in data.s.items())
    return [('h2 = h1 - 1', data.h2 == data.h1 - 1),
            ('sum k m_k - sum k s_k = omega', weighted == omega)]


def _g(dims, k):
    return dims[k] if k < len(dims) else dims[-1]


def type_label(type_sig):
    '''
    Type written as a sum of mE_k, e.g. 'E2+E3' or '3E3'.
    '''
    counts = Counter(type_sig)
    return '+'.join('%sE%d' % (counts[k] if counts[k] > 1 else '', k) for k in sorted(counts)) or '0'

#%% Compatibility

def is_compatible(sys, ci=None):
    '''
    Compare the symbol ideal of the completion with the one predicted by
    prolonging the input symbols.

    Returns
    -------
    Verdict
        compatible, and for incompatible systems the order and the operator
        of the first completion remainder whose symbol escapes the prediction.

    '''
    ci = ci if ci is not None else sys.ideal
    symbols = [principal_symbol(g) for g in sys.generators]

    def predicted(k):
        return prolonged_forms(symbols, k)

    for red in ci.witness:
        r = red.remainder
        if not r:
            continue
        k = r.order
        rows = predicted(k)
        sigma = principal_symbol(r)
        if not rows or form_rank(rows + [sigma], k) > form_rank(rows, k):
            return Verdict(False, k, r)

    if ci.trivial:
        return Verdict(False, 0, DiffOp.scalar(ONE))
    _, k_stab = gdims(ci)
    for k in range(max(k_stab, max(sys.orders)) + 2):
        actual = len(symbol_space(ci, k))
        rows = predicted(k)
        expected = form_rank(rows, k) if rows else 0
        if actual != expected:
            return Verdict(False, k, None)
    return Verdict(True)

#%% Jet-space counting

def jet_gdims(generators, upto, depth=None):
    '''
    dim g_k for k = 0..upto by counting formal power series solutions.

    Only for constant-coefficient operators: the Taylor coefficients of a
    solution at the origin satisfy the prolonged equations, and dim g_k is the
    growth of the projection of the solution jets to order k.

    Parameters
    ----------
    generators : sequence of DiffOp
        Constant-coefficient operators.
    upto : int
    depth : int or None, optional
        Jet order used for the truncation. The default is upto plus twice the
        highest order plus 2.

    Returns
    -------
    tuple of int

    '''
    ops = [as_diffop(g) for g in generators]
    for g in ops:
        if not all(is_constant(c) for c in g.values()):
            raise ValueError('jet counting needs constant coefficients')
    order = max(g.order for g in ops)
    depth = depth if depth is not None else upto + 2 * order + 2
    monomials = [(i, k - i) for k in range(depth + 1) for i in range(k + 1)]
    index = {m: n for n, m in enumerate(monomials)}

    rows = []
    for g in ops:
        for k in range(depth - g.order + 1):
            for p in range(k + 1):
                row = [QQ(0)] * len(monomials)
                for (i, j), c in g.items():
                    row[index[(i + p, j + k - p)]] += constant_value(c)
                rows.append(row)
    if rows:
        null = DomainMatrix(rows, (len(rows), len(monomials)), QQ).nullspace().to_list()
    else:
        null = [[QQ(int(a == b)) for b in range(len(monomials))] for a in range(len(monomials))]

    def projected(k):
        cols = [index[m] for m in monomials if sum(m) <= k]
        if not null or not cols:
            return 0
        sub = [[row[c] for c in cols] for row in null]
        return DomainMatrix(sub, (len(sub), len(cols)), QQ).rank()

    dims = [projected(k) for k in range(upto + 1)]
    return tuple(b - a for a, b in zip([0] + dims[:-1], dims))

#%% Analysis record

Analysis = namedtuple('Analysis', ['system', 'ideal', 'verdict', 'profile', 'spencer'])


def analyze(sys):
    '''
    Complete a system and compute its verdict, symbol profile and Spencer data.

    Profile and Spencer data are None for a trivial ideal; Spencer data is
    None for an incompatible system.
    '''
    ci = sys.ideal
    verdict = is_compatible(sys, ci)
    profile = spencer = None
    if not ci.trivial:
        profile = symbol_profile(ci)
        if verdict.compatible:
            spencer = spencer_numbers(sys, ci)
    return Analysis(sys, ci, verdict, profile, spencer)
