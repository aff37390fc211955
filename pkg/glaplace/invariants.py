'''
Relative invariants and branch labels of the low-complexity class one types.

After normalization and the basic gauge every generator is written in the
frame X = Dx + a, Y = Dy as its top monomial plus lower terms, and the lower
coefficients are named by letters:

    2E2         G1 = X^2 + a1 X + b1 Y + c1,  G2 = YX + a2 X + b2 Y + c2
    E2+E3 (1)   G1 = YX + b1 X^2 + c1 X + d1 Y + e1,
                G2 = X^3 + a2 X^2 + b2 Y^2 + c2 X + d2 Y + e2
    E2+E3 (2)   G1 = X^2 + c1 X + d1 Y + e1,
                G2 = Y^2X + a2 YX + b2 Y^2 + c2 X + d2 Y + e2
    3E3, 2E3    G = top + a X^2 + b YX + c Y^2 + d X + e Y + f

The vanishing pattern of a few of them decides the type of the next Laplace
transformation and the kind of its inverse.
'''
import logging
from collections import namedtuple

from glaplace.ratfield import ZERO, ONE, rf_derive, rf_to_str
from glaplace.diffop import rewrite_in_frame, frame_monomial
from glaplace.errors import UnsupportedType

logger = logging.getLogger(__name__)

InvariantReport = namedtuple('InvariantReport', [
    'type',            # '2E2', 'E2+E3', '3E3' or '2E3'
    'symbol_class',    # 1 or 2 for E2+E3 and 2E3, None otherwise
    'branch',          # e.g. 'Upsilon_333^c'
    'invariants',      # {name: FracElement}
    'conditional',     # {name: (FracElement, condition text, applies)}
    'ties',            # [(text, holds)]
    'predicted_type',  # type of the transformed system
    'predicted_kind',  # kind of the inverse, alternatives separated by '|'
    'gauge',           # GaugeChoice
    ])

# framed monomial (j, i) = Y^j X^i of each letter
_SECOND_ORDER = {'a': (0, 2), 'b': (1, 1), 'c': (2, 0), 'd': (0, 1), 'e': (1, 0), 'f': (0, 0)}
_LETTERS = {
    '2E2': ({'a': (0, 1), 'b': (1, 0), 'c': (0, 0)},
            {'a': (0, 1), 'b': (1, 0), 'c': (0, 0)}),
    'E2+E3/1': ({'b': (0, 2), 'c': (0, 1), 'd': (1, 0), 'e': (0, 0)},
                {'a': (0, 2), 'b': (2, 0), 'c': (0, 1), 'd': (1, 0), 'e': (0, 0)}),
    'E2+E3/2': ({'c': (0, 1), 'd': (1, 0), 'e': (0, 0)},
                {'a': (1, 1), 'b': (2, 0), 'c': (0, 1), 'd': (1, 0), 'e': (0, 0)}),
    }

_TYPES = {
    frozenset({(2, 0), (1, 1)}): ('2E2', None),
    frozenset({(1, 1), (3, 0)}): ('E2+E3', 1),
    frozenset({(2, 0), (1, 2)}): ('E2+E3', 2),
    frozenset({(3, 0), (2, 1), (1, 2)}): ('3E3', None),
    frozenset({(2, 1), (1, 2), (4, 0)}): ('2E3', 1),
    frozenset({(3, 0), (1, 2)}): ('2E3', 2),
    }


def identify_type(generators):
    '''
    Type and symbol class from the leading monomials of a reduced basis.

    Raises
    ------
    UnsupportedType
        If the staircase is not one of the tabulated types.

    '''
    lms = frozenset(g.leading_monomial for g in generators)
    if lms not in _TYPES:
        raise UnsupportedType('no invariant table for leading monomials %s' % sorted(lms))
    return _TYPES[lms]


def _lower_terms(g, frame, top, letters, index):
    framed = rewrite_in_frame(g, frame)
    if framed.pop(top, None) != ONE:
        raise UnsupportedType('generator %s is not monic in the frame' % g)
    positions = {m: name for name, m in letters.items()}
    values = {name + str(index): ZERO for name in letters}
    for m, c in framed.items():
        if m not in positions:
            raise UnsupportedType('unexpected frame monomial Y^%d X^%d in %s' % (m[0], m[1], g))
        values[positions[m] + str(index)] = c
    return values


def _by_top(generators):
    # frame top monomial (j, i) -> generator
    return {(g.leading_monomial[1], g.leading_monomial[0]): g for g in generators}


def _ties(items):
    out = []
    for text, holds in items:
        if not holds:
            logger.warning('expected identity %s fails', text)
        out.append((text, bool(holds)))
    return out

#%% Tables

def _table_2e2(gens, frame):
    tops = _by_top(gens)
    v = _lower_terms(tops[(0, 2)], frame, (0, 2), _LETTERS['2E2'][0], 1)
    v.update(_lower_terms(tops[(1, 1)], frame, (1, 1), _LETTERS['2E2'][1], 2))
    invariants = {'c2': v['c2']}
    ties = _ties([('b1 = 0', not v['b1']), ('c1 = 0', not v['c1']), ('b2 = 0', not v['b2'])])
    if v['c2']:
        return 'Upsilon_22^a', invariants, {}, ties, 'E1', 'differential'
    return 'Upsilon_22^b', invariants, {}, ties, 'Frobenius', 'integral'


def _table_e2e3_class1(gens, frame):
    tops = _by_top(gens)
    g1, g2 = _LETTERS['E2+E3/1']
    v = _lower_terms(tops[(1, 1)], frame, (1, 1), g1, 1)
    v.update(_lower_terms(tops[(0, 3)], frame, (0, 3), g2, 2))
    invariants = {'e1': v['e1']}
    # G1 = (Y + b1 X + c1) X + d1 Y + e1: the symbol is xi*(eta + b1 xi), the
    # branch only depends on e1, the remaining ties are those of b1 = 0
    checked = ('d1',)
    if v['b1']:
        invariants['b1'] = v['b1']
    else:
        checked += ('b2', 'd2', 'e2')
    ties = _ties([('%s = 0' % k, not v[k]) for k in checked])
    if v['e1']:
        return 'Upsilon_23^1a', invariants, {}, ties, '2E2', 'differential'
    return 'Upsilon_23^1b', invariants, {}, ties, 'Frobenius', 'integral'


def _table_e2e3_class2(gens, frame):
    tops = _by_top(gens)
    g1, g2 = _LETTERS['E2+E3/2']
    v = _lower_terms(tops[(0, 2)], frame, (0, 2), g1, 1)
    v.update(_lower_terms(tops[(2, 1)], frame, (2, 1), g2, 2))
    invariants = {'d2': v['d2']}
    conditional = {'e2': (v['e2'], 'd2 = 0', not v['d2'])}
    ties = _ties([('%s = 0' % k, not v[k]) for k in ('d1', 'b2', 'e1')])
    if v['d2']:
        return 'Upsilon_23^2a', invariants, conditional, ties, 'E1', 'frobenius'
    if v['e2']:
        return 'Upsilon_23^2b', invariants, conditional, ties, 'E1', 'differential'
    return 'Upsilon_23^2c', invariants, conditional, ties, 'Frobenius', 'integral'


def _table_3e3(gens, frame):
    tops = _by_top(gens)
    v = {}
    for index, top in enumerate(((0, 3), (1, 2), (2, 1)), 1):
        v.update(_lower_terms(tops[top], frame, top, _SECOND_ORDER, index))
    invariants = {'e3': v['e3'], 'b1': v['b1'], 'f1': v['f1']}
    conditional = {
        'f2': (v['f2'], 'f1 = 0', not v['f1']),
        'f3': (v['f3'], 'f1 = f2 = 0', not v['f1'] and not v['f2']),
        }
    ties = _ties([('%s = 0' % k, not v[k]) for k in ('c1', 'c2', 'c3', 'e1', 'e2')] + [
        ('f1 = b1*e3', v['f1'] == v['b1'] * v['e3']),
        ('f2 = b2*e3 + (e3)_x', v['f2'] == v['b2'] * v['e3'] + rf_derive(v['e3'], 'x')),
        ])
    if v['f1']:
        branch, target, kind = 'a', 'E2+E3', 'differential'
    elif v['e3'] and v['f2']:
        branch, target, kind = 'b', 'E2+E3', 'differential'
    elif v['e3']:
        branch, target, kind = 'c', '2E2', 'frobenius'
    elif v['f3']:
        branch, target, kind = 'd', '2E2', 'differential'
    else:
        branch, target, kind = 'e', 'Frobenius', 'integral'
    return 'Upsilon_333^' + branch, invariants, conditional, ties, target, kind


def _table_2e3(gens, frame, symbol_class):
    tops = _by_top(gens)
    extra = {}
    if symbol_class == 1:
        first, second = tops[(1, 2)], tops[(2, 1)]
        v = _lower_terms(first, frame, (1, 2), _SECOND_ORDER, 1)
        framed = rewrite_in_frame(second, frame)
        epsilon = framed.pop((0, 3), ZERO)
        if epsilon not in (ONE, -ONE):
            raise UnsupportedType('the X^3 coefficient %s of Y^2X is not +1 or -1' % rf_to_str(epsilon))
        extra['epsilon'] = epsilon
        v.update(_lower_terms(second - _epsilon_term(epsilon, frame), frame, (2, 1), _SECOND_ORDER, 2))
    else:
        v = _lower_terms(tops[(0, 3)], frame, (0, 3), _SECOND_ORDER, 1)
        v.update(_lower_terms(tops[(2, 1)], frame, (2, 1), _SECOND_ORDER, 2))
    invariants = dict({'e2': v['e2'], 'b1': v['b1'], 'f1': v['f1']}, **extra)
    conditional = {'f2': (v['f2'], 'e2 = 0', not v['e2'])}
    ties = _ties([('%s = 0' % k, not v[k]) for k in ('c1', 'c2', 'e1')] + [
        ('f1 = b1*e2', v['f1'] == v['b1'] * v['e2']),
        ])
    if symbol_class == 1:
        if v['f1']:
            row = ('a', '3E3', 'differential')
        elif v['e2']:
            row = ('b', 'E2+E3', 'frobenius')
        elif v['f2']:
            row = ('c', 'E2+E3', 'differential')
        else:
            row = ('d', 'Frobenius', 'integral')
    else:
        if v['f1']:
            row = ('a', '3E3', 'differential')
        elif v['e2']:
            row = ('b', 'E2+E3|E2+E4', 'frobenius|differential')
        elif v['f2']:
            row = ('c', 'E2+E3', 'differential')
        else:
            row = ('d', 'Frobenius', 'integral')
    branch, target, kind = row
    return 'Upsilon_33^%d%s' % (symbol_class, branch), invariants, conditional, ties, target, kind


def _epsilon_term(epsilon, frame):
    return frame_monomial(frame, 0, 3).scale(epsilon)

#%% Public interface

def table_entry(gauge, gauged):
    '''
    Invariants of a system that is already normalized and gauged.

    Parameters
    ----------
    gauge : GaugeChoice
    gauged : PDESystem
        Output of basic_gauge; the generators are the reduced basis.

    Returns
    -------
    InvariantReport

    '''
    type_name, symbol_class = identify_type(gauged.generators)
    gens = [g for g in gauged.generators if g.leading_monomial != (4, 0)]
    frame = gauged.frame
    if type_name == '2E2':
        row = _table_2e2(gens, frame)
    elif type_name == 'E2+E3':
        row = (_table_e2e3_class1 if symbol_class == 1 else _table_e2e3_class2)(gens, frame)
    elif type_name == '3E3':
        row = _table_3e3(gens, frame)
    else:
        row = _table_2e3(gens, frame, symbol_class)
    branch, invariants, conditional, ties, target, kind = row
    logger.debug('%s: branch %s', type_name, branch)
    return InvariantReport(type_name, symbol_class, branch, invariants, conditional, ties,
                           target, kind, gauge)


def relative_invariants(sys):
    '''
    Normalize and gauge a system, then read its relative invariants.

    Parameters
    ----------
    sys : PDESystem
        Compatible class one system with characteristic Dx.

    Raises
    ------
    UnsupportedType
        If the type is not 2E2, E2+E3, 3E3 or 2E3 in normal form.

    Returns
    -------
    InvariantReport

    '''
    from glaplace.laplace1 import normalize_generators, basic_gauge
    gauge, gauged = basic_gauge(normalize_generators(sys))
    return table_entry(gauge, gauged)


def report_to_dict(report):
    '''
    JSON-ready view with rendered rational functions.
    '''
    return {
        'type': report.type,
        'symbol_class': report.symbol_class,
        'branch': report.branch,
        'gauge': rf_to_str(report.gauge.a),
        'invariants': {k: rf_to_str(v) for k, v in report.invariants.items()},
        'conditional': {k: {'value': rf_to_str(v), 'when': cond, 'applies': applies}
                        for k, (v, cond, applies) in report.conditional.items()},
        'ties': [{'identity': t, 'holds': h} for t, h in report.ties],
        'predicted': {'type': report.predicted_type, 'inverse': report.predicted_kind},
        }
