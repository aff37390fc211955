'''
The zoo of class one types.

A class one system with characteristic Dx has symbol ideal xi*J with J an
ideal of finite colength in Q[xi, eta]. Its symbol dimensions are
dim g_i = 1 + H(i - 1), where H is the Hilbert function of Q[xi, eta]/J, and
the orders of its equations are the degrees of the minimal generators of J
plus one. Types of complexity n are enumerated from the admissible Hilbert
functions with sum n and the possible graded Betti numbers, and each
candidate is confirmed by a random instance of its Hilbert-Burch matrix.
'''
import logging
from itertools import combinations_with_replacement
from collections import Counter, namedtuple

import numpy as np
from sympy import QQ
from sympy.polys.rings import ring
from sympy.polys.matrices import DomainMatrix

from glaplace.formal import complexity, type_label
from glaplace.utilities import cfg, Verbose

logger = logging.getLogger(__name__)

SYMBOLS, XI, ETA = ring('xi,eta', QQ)

ZooType = namedtuple('ZooType', ['orders', 'stratum', 'profile'])
Bound = namedtuple('Bound', ['bound', 'equality', 'exact'])

# routes of the zoo given as examples, each arrow lowering the complexity
SAMPLE_ROUTES = (
    ((3, 3, 4), (3, 3, 3), (2, 3), (2, 2), (1,)),
    ((4, 4, 4, 4), (3, 4, 4)),
    )

#%% Profiles and bounds

def _trim(profile):
    d = list(profile)
    while len(d) > 1 and d[-1] == 0:
        d.pop()
    return tuple(d)


def kappa_of_profile(profile):
    '''
    Complexity sum(d_i) of a profile d_i = dim g_i - 1.

    Raises
    ------
    ValueError
        If d_0 is not 0, some d_(i+1) exceeds d_i + 1, or a zero sits between
        nonzero entries.

    '''
    d = _trim(profile)
    if not d or d[0] != 0:
        raise ValueError('a profile starts with d_0 = 0')
    if any(b > a + 1 for a, b in zip(d, d[1:])):
        raise ValueError('profile %s grows by more than one' % (d,))
    if 0 in d[1:]:
        raise ValueError('profile %s has an intermediate zero' % (d,))
    return int(sum(d))


def complexity_bound(orders):
    '''
    Upper bound sum(k_i - i) + (k_1 - r)(k_r - r) of the complexity of a type.

    The bound is attained for r = 2 and for r = k_min; in the latter case the
    complexity is sum(k_j) - r(r + 1)/2.

    Parameters
    ----------
    orders : sequence of int
        Orders k_1 <= ... <= k_r of the equations.

    Returns
    -------
    Bound

    '''
    k = sorted(orders)
    r = len(k)
    if not r or r > k[0]:
        raise ValueError('type %s needs 1 <= r <= k_min' % (tuple(k),))
    bound = sum(ki - i for i, ki in enumerate(k, 1)) + (k[0] - r) * (k[-1] - r)
    if r == k[0]:
        exact = sum(k) - r * (r + 1) // 2
        if exact != bound:
            logger.error('bound %d and exact complexity %d of %s differ', bound, exact, k)
        return Bound(bound, True, exact)
    if r == 2:
        return Bound(bound, True, bound)
    return Bound(bound, False, None)


def generalized_kappa(gdims, omega):
    '''
    sum over i >= omega of (dim g_i - omega), the complexity of a system of
    any class.
    '''
    return complexity(gdims, omega)


def _hilbert_functions(n):
    # 1, 2, ..., t followed by a non-increasing tail bounded by t
    def tails(total, largest):
        if total == 0:
            yield ()
            return
        for part in range(min(total, largest), 0, -1):
            for rest in tails(total - part, part):
                yield (part,) + rest

    t = 1
    while t * (t + 1) // 2 <= n:
        head = tuple(range(1, t + 1))
        for tail in tails(n - t * (t + 1) // 2, t):
            yield head + tail
        t += 1


def admissible_profiles(n):
    '''
    Profiles (0, H(0), H(1), ...) of complexity n.
    '''
    if n == 0:
        return [(0,)]
    return [(0,) + h for h in _hilbert_functions(n)]


def _numerator(h):
    # coefficients of (1 - t)^2 * sum(H(k) t^k)
    padded = np.array(list(h) + [0, 0], dtype=int)
    shifted1 = np.concatenate(([0], padded[:-1]))
    shifted2 = np.concatenate(([0, 0], padded[:-2]))
    return padded - 2 * shifted1 + shifted2


def hilbert_burch(gens, syz):
    '''
    True if a minimal free resolution with generator degrees gens and
    syzygy degrees syz can exist: sum(syz) = sum(gens) and, both sorted
    ascending, syz_i > gens_(i+1).
    '''
    a, b = sorted(gens), sorted(syz)
    if len(b) != len(a) - 1 or sum(a) != sum(b):
        return False
    return all(bi > ai for bi, ai in zip(b, a[1:]))


def betti_candidates(h):
    '''
    Generator and syzygy degrees compatible with the Hilbert function h.

    The minimal counts come from the numerator of the Hilbert series;
    cancelling pairs of a generator and a syzygy in the same degree are
    added up to cfg.zoo_max_cancellations in total.
    '''
    c = _numerator(h)
    gens = [k for k in range(1, len(c)) for _ in range(max(0, -c[k]))]
    syz = [k for k in range(1, len(c)) for _ in range(max(0, c[k]))]
    if not gens or not syz:
        return []
    degrees = range(min(gens) + 1, max(syz))
    out = []
    for m in range(cfg.zoo_max_cancellations + 1):
        for more in combinations_with_replacement(degrees, m):
            a, b = sorted(gens + list(more)), sorted(syz + list(more))
            if hilbert_burch(a, b):
                out.append((tuple(a), tuple(b)))
    return out

#%% Realizability oracle

def _random_form(rng, degree):
    if degree < 0:
        return SYMBOLS.zero
    span = cfg.oracle_coeff_range
    coeffs = rng.integers(-span, span + 1, size=degree + 1)
    return sum((int(c) * XI**p * ETA**(degree - p) for p, c in enumerate(coeffs)), SYMBOLS.zero)


def _minors(matrix):
    r = len(matrix)
    domain = SYMBOLS.to_domain()
    out = []
    for i in range(r):
        rows = [row for k, row in enumerate(matrix) if k != i]
        det = DomainMatrix(rows, (r - 1, r - 1), domain).det() if rows else SYMBOLS.one
        out.append(det if i % 2 == 0 else -det)
    return out


def _form_degree(f):
    return max(sum(m) for m in f.itermonoms())


def _shifted_rows(forms, degree):
    # coefficient rows of all monomial multiples of degree `degree`
    rows = []
    for f in forms:
        d = _form_degree(f) if f else None
        if d is None or d > degree:
            continue
        for p in range(degree - d + 1):
            g = f * XI**p * ETA**(degree - d - p)
            rows.append([g.get((q, degree - q), QQ.zero) for q in range(degree + 1)])
    return rows


def _rank(rows, ncols):
    if not rows:
        return 0
    return DomainMatrix(rows, (len(rows), ncols), QQ).rank()


def _reproduces(forms, h, gens):
    top = max(len(h), max(gens) + 1)
    counts = Counter()
    for degree in range(top + 1):
        dim = _rank(_shifted_rows(forms, degree), degree + 1)
        hk = h[degree] if degree < len(h) else 0
        if degree + 1 - dim != hk:
            return False
        lower = [f for f in forms if f and _form_degree(f) < degree]
        lifted = _rank(_shifted_rows(lower, degree), degree + 1)
        if dim - lifted:
            counts[degree] = dim - lifted
    return counts == Counter(gens)


def realizable(gens, syz, h, seed=None):
    '''
    Look for an ideal with minimal generators in degrees gens and Hilbert
    function h among random Hilbert-Burch matrices.

    The generators are the signed maximal minors of an r x (r - 1) matrix
    with entries of degree syz_j - gens_i (zero when not positive).

    Returns
    -------
    bool

    '''
    rng = np.random.default_rng(cfg.oracle_seed if seed is None else seed)
    for _ in range(cfg.oracle_trials):
        matrix = [[_random_form(rng, b - a) if b > a else SYMBOLS.zero for b in syz] for a in gens]
        forms = _minors(matrix)
        if any(not f for f in forms):
            continue
        if _reproduces(forms, h, gens):
            return True
    return False

#%% Enumeration

class TypeZoo(Verbose):
    '''
    Cached enumeration of class one types by complexity.

    Parameters
    ----------
    verbose : int or None, optional
        If None, cfg.verbose is used. The default is None.
    check : bool, optional
        Confirm every Betti candidate with the realizability oracle.
        The default is True.

    '''

    def __init__(self, verbose=None, check=True):
        self.verbose = cfg.verbose if verbose is None else verbose
        self.check = check
        self._types = {}

    def types(self, n):
        '''
        Realizable types of complexity n, sorted by orders then stratum.

        Returns
        -------
        list of ZooType

        '''
        if n < 0:
            raise ValueError('complexity must be non-negative')
        if n in self._types:
            return self._types[n]
        if n == 0:
            found = {ZooType((1,), (), (0,))}
        else:
            found = set()
            for profile in admissible_profiles(n):
                h = profile[1:]
                for gens, syz in betti_candidates(h):
                    if self.check and not realizable(gens, syz, h):
                        logger.debug('candidate %s / %s rejected by the oracle', gens, syz)
                        continue
                    found.add(ZooType(tuple(a + 1 for a in gens), tuple(b + 1 for b in syz), profile))
        self._types[n] = sorted(found)
        if n >= cfg.zoo_extrapolation_from:
            self._msg('kappa = %d: %d types (extrapolated)' % (n, len(self._types[n])), level=2)
        return self._types[n]

    def R(self, n):
        return len({t.orders for t in self.types(n)})

    def kappas(self, orders):
        '''
        Complexities at which a type occurs.
        '''
        orders = tuple(sorted(orders))
        b = complexity_bound(orders)
        if b.equality:
            return {b.exact}
        return {n for n in range(b.bound + 1) if any(t.orders == orders for t in self.types(n))}

    def table(self, kmax, rmax, upto=None):
        '''
        Types by number of equations r and highest order k_max, with their
        complexities.

        Returns
        -------
        dict
            (r, k_max) -> sorted list of (label, kappa).

        '''
        upto = cfg.zoo_upto if upto is None else upto
        cells = {}
        for n in range(upto + 1):
            for t in self.types(n):
                r, k = len(t.orders), max(t.orders)
                if r <= rmax and k <= kmax:
                    cells.setdefault((r, k), set()).add((type_label(t.orders), n))
        return {key: sorted(v, key=lambda item: (item[1], item[0])) for key, v in sorted(cells.items())}


_ZOO = TypeZoo(verbose=0)


def enumerate_types(n):
    '''
    Realizable class one types of complexity n.

    Returns
    -------
    list of ZooType

    '''
    return _ZOO.types(n)


def R(n):
    '''
    Number of distinct order multisets of complexity n.
    '''
    return _ZOO.R(n)


def zoo_table(kmax, rmax, upto=None):
    return _ZOO.table(kmax, rmax, upto)


def valid_arrow(source, target):
    '''
    True if a Laplace step from type source to type target can lower the
    complexity.

    Parameters
    ----------
    source, target : sequence of int
        Orders of the equations.

    '''
    source, target = tuple(sorted(source)), tuple(sorted(target))
    if source == (1,):
        return False
    k_source, k_target = _ZOO.kappas(source), _ZOO.kappas(target)
    if not k_source or not k_target:
        return False
    return min(k_target) < max(k_source)


def is_extrapolated(n):
    return n >= cfg.zoo_extrapolation_from
