'''
Command-line interface: input files, commands and reports.

Input files hold one linear equation per line, e.g.

    # Example
    @option depth 10
    u_xxx = (3*x + 6)/x^2*u_xx + 6*y/x^3*u_xy

Derivatives of the unknown are written u_xxy (letters in any order), the
coefficients are rational expressions in x and y. Every command builds a
JSON-ready report; the human output is a rendering of the same report.
'''
import os
import re
import sys
import glob
import json
import logging
import argparse
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor

from glaplace.ratfield import FIELD, ZERO, ONE, X, Y, rf_inv, rf_to_str, ExpressionParser
from glaplace.diffop import DiffOp, op_mul, op_to_str, framed_to_str, rewrite_in_frame
from glaplace.formal import PDESystem, analyze, divisor_to_str, type_label
from glaplace.errors import (
    EXIT_INTERNAL, GlaplaceError, InhomogeneousTerm, NonlinearTerm, PDESyntaxError,
    QuadratureResidual, ReducedToODE, SolutionShapeMismatch, UnsupportedType, UnknownSymbol,
    Incompatible,
    )
from glaplace.utilities import cfg, apply_config, setup_logging

logger = logging.getLogger(__name__)

COMMANDS = ('analyze', 'laplace', 'solve', 'invariants', 'classic', 'zoo')

_DERIVATIVE = re.compile(r'^(?P<unknown>[A-Za-z][A-Za-z0-9]*?)(?:_(?P<letters>[xy]+))?$')

#%% Parsing

class LinearForm(namedtuple('LinearForm', ['op', 'rest'])):
    '''
    Value of a parsed expression: op applied to the unknown plus a function.
    '''

    @property
    def is_scalar(self):
        return not self.op


class LinearFormParser(ExpressionParser):
    '''
    Parse one side of an equation into a LinearForm.

    Raises
    ------
    NonlinearTerm
        If the unknown is multiplied by itself, divided by or raised to a
        power.
    UnknownSymbol
        For names other than x, y and derivatives of the unknown.

    '''

    def __init__(self, text, unknown='u', line=None, offset=1):
        self.unknown = unknown
        super().__init__(text, line, offset)

    def number(self, value, token):
        return LinearForm(DiffOp(), FIELD(value))

    def name(self, name, token):
        if name in ('x', 'y'):
            return LinearForm(DiffOp(), X if name == 'x' else Y)
        m = _DERIVATIVE.match(name)
        if m is None or m.group('unknown') != self.unknown:
            raise self.error('unknown symbol %r' % name, token.column, UnknownSymbol)
        letters = m.group('letters') or ''
        return LinearForm(DiffOp.monomial(letters.count('x'), letters.count('y')), ZERO)

    def negate(self, value, token):
        return LinearForm(-value.op, -value.rest)

    def binary(self, op, left, right, token):
        if op == '+':
            return LinearForm(left.op + right.op, left.rest + right.rest)
        if op == '-':
            return LinearForm(left.op - right.op, left.rest - right.rest)
        if op == '*':
            if not left.is_scalar and not right.is_scalar:
                raise self.error('product of two terms in %s' % self.unknown, token.column, NonlinearTerm)
            if left.is_scalar:
                left, right = right, left
            return LinearForm(left.op.scale(right.rest), left.rest * right.rest)
        if not right.is_scalar:
            raise self.error('division by a term in %s' % self.unknown, token.column, NonlinearTerm)
        if not right.rest:
            raise self.error('division by zero', token.column)
        inv = rf_inv(right.rest)
        return LinearForm(left.op.scale(inv), left.rest * inv)

    def power(self, base, exponent, token):
        if not base.is_scalar:
            if exponent == 1:
                return base
            raise self.error('power of a term in %s' % self.unknown, token.column, NonlinearTerm)
        return LinearForm(DiffOp(), base.rest ** exponent)


class OperatorParser(ExpressionParser):
    '''
    Parse an operator written with Dx and Dy, e.g. 'Dx^2 + y*Dy'.

    '*' is composition, so 'Dx*x' is x*Dx + 1; division by a function
    multiplies on the left.
    '''

    def number(self, value, token):
        return DiffOp.scalar(value)

    def name(self, name, token):
        if name == 'Dx':
            return DiffOp.dx()
        if name == 'Dy':
            return DiffOp.dy()
        return DiffOp.scalar(super().name(name, token))

    def negate(self, value, token):
        return -value

    def binary(self, op, left, right, token):
        if op == '+':
            return left + right
        if op == '-':
            return left - right
        if op == '*':
            return op_mul(left, right)
        if set(right) - {(0, 0)}:
            raise self.error('division by an operator', token.column)
        if not right:
            raise self.error('division by zero', token.column)
        return left.scale(rf_inv(right[(0, 0)]))

    def power(self, base, exponent, token):
        out = DiffOp.scalar(ONE)
        for _ in range(exponent):
            out = op_mul(out, base)
        return out


Equation = namedtuple('Equation', ['op', 'line', 'text'])


class InputDocument:
    '''
    Parsed input file.

    Attributes
    ----------
    unknown : str
    equations : list of Equation
    options : dict
        Directives '@option key value' (and '@key value'), values as text.

    '''

    def __init__(self, equations, unknown='u', options=None):
        if not equations:
            raise PDESyntaxError('the document has no equation', 1, 1)
        self.equations = list(equations)
        self.unknown = unknown
        self.options = dict(options or {})

    @property
    def operators(self):
        return [e.op for e in self.equations]

    def system(self):
        return PDESystem(self.operators, unknown=self.unknown)

    def option(self, key, cast=str, default=None):
        if key not in self.options:
            return default
        try:
            return cast(self.options[key])
        except ValueError:
            raise PDESyntaxError('invalid value %r for option %s' % (self.options[key], key))

    def __eq__(self, other):
        return (isinstance(other, InputDocument) and self.unknown == other.unknown
                and self.operators == other.operators and self.options == other.options)

    def __str__(self):
        return document_to_text(self)


def _parse_equation(text, unknown, line):
    if text.count('=') > 1:
        raise PDESyntaxError('more than one "=" in the equation', line, text.index('=', text.index('=') + 1) + 1)
    if '=' in text:
        lhs, rhs = text.split('=')
        left = LinearFormParser(lhs, unknown, line).parse()
        right = LinearFormParser(rhs, unknown, line, offset=len(lhs) + 2).parse()
        form = LinearForm(left.op - right.op, left.rest - right.rest)
    else:
        form = LinearFormParser(text, unknown, line).parse()
    if form.rest:
        raise InhomogeneousTerm('the equation has the free term %s' % rf_to_str(form.rest), line, 1)
    if not form.op:
        raise PDESyntaxError('the equation does not involve %s' % unknown, line, 1)
    return Equation(form.op, line, text.strip())


def parse(text):
    '''
    Parse an input document.

    Raises
    ------
    PDESyntaxError, NonlinearTerm, InhomogeneousTerm, UnknownSymbol
        With the line and column of the offending token.

    Returns
    -------
    InputDocument

    '''
    options, pending = {}, []
    unknown = 'u'
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if line.startswith('@'):
            words = line[1:].split()
            if words and words[0] == 'option':
                words = words[1:]
            if len(words) != 2:
                raise PDESyntaxError('directives read "@option key value"', number, 1)
            key, value = words
            if key == 'unknown':
                unknown = value
            options[key] = value
            continue
        pending.append((line, number))
    equations = [_parse_equation(line, unknown, number) for line, number in pending]
    return InputDocument(equations, unknown, options)


def parse_file(path):
    with open(path, encoding='utf-8') as f:
        return parse(f.read())


def document_to_text(doc):
    '''
    Render a document that parses back to an equal one.
    '''
    lines = ['@option %s %s' % kv for kv in sorted(doc.options.items())]
    lines += ['%s = 0' % op_to_str(op, doc.unknown) for op in doc.operators]
    return '\n'.join(lines) + '\n'

#%% Reports

def _ops(ops, unknown='u'):
    return [op_to_str(g, unknown) for g in ops]


def analysis_report(doc):
    sys_ = doc.system()
    a = analyze(sys_)
    report = {
        'generators': _ops(sys_.generators, doc.unknown),
        'orders': list(sys_.orders),
        'compatible': a.verdict.compatible,
        }
    if not a.verdict.compatible:
        report['witness'] = {
            'order': a.verdict.order,
            'operator': op_to_str(a.verdict.witness, doc.unknown) if a.verdict.witness is not None else None,
            }
    if a.ideal.trivial:
        report['trivial'] = True
        return report
    p = a.profile
    report.update({
        'gdims': [int(g) for g in p.gdims],
        'k_stab': p.k_stab,
        'char_divisor': divisor_to_str(p.char_divisor),
        'omega': p.omega,
        'kappa': p.kappa,
        })
    if a.spencer is not None:
        report.update({
            'type': type_label(a.spencer.type_sig),
            'h1': a.spencer.h1,
            'h2': a.spencer.h2,
            'm': {str(k): v for k, v in sorted(a.spencer.m.items())},
            's': {str(k): v for k, v in sorted(a.spencer.s.items())},
            })
    return report


def _inverse_report(step, unknown):
    out = {'kind': step.inverse_kind, 'order': step.inverse_order}
    if step.inverse_op is not None:
        out['operator'] = op_to_str(step.inverse_op, 'v')
    if step.inverse_system is not None:
        out['system'] = ['%s = %s' % (op_to_str(p, unknown), op_to_str(q, 'v')) for p, q in step.inverse_system]
    return out


def laplace_report(doc):
    from glaplace.laplace1 import normalize_generators, basic_gauge, laplace_step
    gauge, gauged = basic_gauge(normalize_generators(doc.system()))
    step = laplace_step(gauged)
    return {
        'gauge': rf_to_str(gauge.a),
        'framed': [framed_to_str(rewrite_in_frame(g, gauged.frame)) for g in gauged.generators],
        'transformed': _ops(step.transformed.generators, 'v'),
        'inverse': _inverse_report(step, doc.unknown),
        }


def trace_report(trace):
    return [{
        'source': {'type': t.source_type, 'kappa': t.source_kappa},
        'target': {'type': t.target_type, 'kappa': t.target_kappa},
        'inverse': t.kind,
        'branch': t.branch,
        'gauge': rf_to_str(t.gauge),
        } for t in trace]


def _solution_text(sol):
    return sol.render(cfg.function_name, cfg.constant_prefix)


def solve_report(doc, trace=False):
    from glaplace.laplace1 import Integrator, verify_solution
    sys_ = doc.system()
    result = Integrator(sys_, verbose=0).run()
    report = {
        'solution': _solution_text(result.solution),
        'verified': verify_solution(sys_, result.solution),
        'q': result.solution.q,
        'constants': len(result.solution.constants),
        'kappa': result.kappa,
        'shape_ok': result.shape_ok,
        }
    if trace:
        report['trace'] = trace_report(result.trace)
    return report


def invariants_report(doc):
    from glaplace.invariants import relative_invariants, report_to_dict
    return report_to_dict(relative_invariants(doc.system()))


def classic_report(doc, depth=None):
    from glaplace.classical import HyperbolicE2, invariant_sequence, darboux_status, status_to_dict
    if len(doc.operators) != 1:
        raise UnsupportedType('classic needs exactly one equation')
    e = HyperbolicE2.from_operator(doc.operators[0])
    depth = depth if depth is not None else doc.option('depth', int, cfg.classic_depth)
    seq = invariant_sequence(e, depth)
    return dict({'equation': str(e)}, **status_to_dict(seq, darboux_status(seq)))


def zoo_report(kappa=None, upto=None, table=False):
    from glaplace.zoo import enumerate_types, R, is_extrapolated, zoo_table
    ns = [kappa] if kappa is not None else range(1, (cfg.zoo_upto if upto is None else upto) + 1)
    report = {'R': {}, 'types': {}, 'extrapolated': []}
    for n in ns:
        report['R'][str(n)] = R(n)
        report['types'][str(n)] = [{
            'type': type_label(t.orders),
            'orders': list(t.orders),
            'stratum': list(t.stratum),
            'profile': list(t.profile),
            } for t in enumerate_types(n)]
        if is_extrapolated(n):
            report['extrapolated'].append(n)
    if table:
        top = max(ns)
        cells = zoo_table(kmax=top + 1, rmax=top + 1, upto=top)
        report['table'] = ['r=%d k=%d: %s' % (r, k, ', '.join('%s (%d)' % c for c in v))
                           for (r, k), v in cells.items()]
    return report


def _partial(err, unknown):
    if isinstance(err, ReducedToODE) and err.system is not None:
        return {'system': _ops(err.system.generators, 'v')}
    if isinstance(err, (QuadratureResidual, SolutionShapeMismatch)) and err.solution is not None:
        return {'solution': _solution_text(err.solution)}
    if isinstance(err, Incompatible) and err.verdict is not None:
        witness = err.verdict.witness
        return {'order': err.verdict.order,
                'witness': op_to_str(witness, unknown) if witness is not None else None}
    return {}


def run(command, document=None, options=None):
    '''
    Execute a command and build its report.

    Parameters
    ----------
    command : str
        One of COMMANDS.
    document : InputDocument or None
        Not used by zoo.
    options : dict or None
        depth, kappa, upto, table, trace.

    Returns
    -------
    (dict, int)
        The report and the exit status.

    '''
    options = options or {}
    report = {'command': command, 'diagnostics': []}
    try:
        if command == 'zoo':
            report.update(zoo_report(options.get('kappa'), options.get('upto'), options.get('table', False)))
        elif command == 'analyze':
            report['analysis'] = analysis_report(document)
        elif command == 'laplace':
            report['step'] = laplace_report(document)
            if options.get('trace'):
                from glaplace.laplace1 import complexity_trace
                report['trace'] = trace_report(complexity_trace(document.system()))
        elif command == 'solve':
            report.update(solve_report(document, options.get('trace', False)))
        elif command == 'invariants':
            report['invariants'] = invariants_report(document)
        elif command == 'classic':
            report['classic'] = classic_report(document, options.get('depth'))
        else:
            raise ValueError('unknown command %r' % command)
    except GlaplaceError as err:
        logger.debug('%s failed', command, exc_info=True)
        diagnostic = err.diagnostic()
        partial = _partial(err, document.unknown if document is not None else 'u')
        if partial:
            diagnostic['partial'] = partial
        report['diagnostics'].append(diagnostic)
        return report, err.exit_status
    if command == 'analyze' and not report['analysis']['compatible']:
        return report, Incompatible.exit_status
    return report, 0

#%% Rendering

def render_human(value, indent=0):
    '''
    Plain text rendering of a report: one 'key: value' line per scalar,
    nested blocks indented.
    '''
    pad = '  ' * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append('%s%s:' % (pad, key))
                lines.append(render_human(item, indent + 1))
            else:
                lines.append('%s%s: %s' % (pad, key, _scalar(item)))
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append('%s-' % pad)
                lines.append(render_human(item, indent + 1))
            else:
                lines.append('%s- %s' % (pad, _scalar(item)))
    else:
        lines.append(pad + _scalar(value))
    return '\n'.join(lines)


def _scalar(value):
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if value == [] or value == {}:
        return '-'
    return str(value)

#%% Entry point

def _run_file(args):
    command, path, options = args
    try:
        document = parse_file(path)
    except GlaplaceError as err:
        return {'file': path, 'command': command, 'diagnostics': [err.diagnostic()]}, err.exit_status
    report, status = run(command, document, options)
    return dict({'file': path}, **report), status


def run_all(command, directory, options, workers=None):
    '''
    Run a command on every *.pde file of a directory in a process pool.

    Returns
    -------
    (list of dict, int)
        Reports in file name order and the largest exit status.

    '''
    paths = sorted(glob.glob(os.path.join(directory, '*.pde')))
    jobs = [(command, p, options) for p in paths]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_file, jobs))
    return [r for r, _ in results], max((s for _, s in results), default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='glaplace',
        description='Analyze and integrate linear overdetermined PDE systems by Laplace transformations')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('file', nargs='?', help='input file with one equation per line')
    parser.add_argument('--json', action='store_true', help='print the report as JSON')
    parser.add_argument('--depth', type=int, default=None, help='depth of the classic invariant sequence')
    parser.add_argument('--kappa', type=int, default=None, help='zoo: types of one complexity')
    parser.add_argument('--upto', type=int, default=None, help='zoo: types of complexity 1..N')
    parser.add_argument('--table', action='store_true', help='zoo: lay the types out by r and k_max')
    parser.add_argument('--trace', action='store_true', help='report the complexity trace of the pipeline')
    parser.add_argument('--all', metavar='DIR', default=None, help='run the command on every *.pde file of DIR')
    parser.add_argument('-c', '--path_to_config', type=str, default=None, help='custom config file')
    parser.add_argument('-v', '--verbose', type=int, default=None, help='0 = warnings, 1 = progress, 2 = debug')
    return parser


def _emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=cfg.json_indent))
    else:
        print(render_human(report))


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.path_to_config:
        apply_config(args.path_to_config)
    setup_logging(args.verbose)
    options = {'depth': args.depth, 'kappa': args.kappa, 'upto': args.upto,
               'table': args.table, 'trace': args.trace}
    try:
        if args.all is not None:
            reports, status = run_all(args.command, args.all, options)
            _emit(reports, args.json)
            return status
        if args.command == 'zoo':
            report, status = run('zoo', None, options)
        elif args.file is None:
            build_parser().error('%s needs an input file' % args.command)
        else:
            try:
                document = parse_file(args.file)
            except GlaplaceError as err:
                report = {'file': args.file, 'command': args.command, 'diagnostics': [err.diagnostic()]}
                _emit(report, args.json)
                return err.exit_status
            report, status = run(args.command, document, options)
            report = dict({'file': args.file}, **report)
    except Exception:
        logger.exception('internal error')
        return EXIT_INTERNAL
    _emit(report, args.json)
    return status


if __name__ == '__main__':
    sys.exit(main())
