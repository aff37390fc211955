'''
Generalized Laplace transformations of class one systems.

A compatible system whose characteristic divisor is {xi} (the characteristic
is Dx) is normalized, gauged by the unique shift X = Dx + a and transformed by
the substitution v = X u. The transformed ideal is {L : L X in J}. The inverse
of the substitution is differential, a first-order Frobenius system or an
integral. Iterating the step ends at one first-order equation or at a system
of finite type, and composing the inverses gives the general solution

    u = a_q f^(q)(y) + ... + a_0 f(y) + c_1 phi_1 + ... + c_m phi_m

with q + m equal to the complexity of the input.
'''
import logging
from collections import namedtuple

from glaplace.ratfield import ZERO, ONE, rf, nullspace, solve, rf_to_str
from glaplace.diffop import DiffOp, Frame, STANDARD_FRAME, rewrite_in_frame, op_apply, term_key
from glaplace.formal import PDESystem, analyze, complete, shifted, is_straightened, divisor_to_str, type_label
from glaplace.solution import (
    SolutionExpr, Scalar, FunctionDerivative, Constant, exp_solution, normalize_solution,
    )
from glaplace.errors import (
    GlaplaceError, ApplyToResidual, ComplexityNotDecreasing, CharNotStraightened,
    GaugeEquationDifferential, Incompatible, InvalidArrow, NotClassOne, QuadratureResidual,
    ReducedToODE, SolutionShapeMismatch, TrivialIdeal, UnsupportedType, ZeroGauge,
    )
from glaplace.utilities import cfg, Verbose

logger = logging.getLogger(__name__)

DIFFERENTIAL = 'differential'
FROBENIUS = 'frobenius'
INTEGRAL = 'integral'
FINITE_TYPE = 'Frobenius' # type label of class zero systems in traces


class GaugeChoice(namedtuple('GaugeChoice', ['a', 'sigma'])):
    '''
    Shift X -> Dx + a and rescaling u -> sigma u.
    '''

    def __new__(cls, a=ZERO, sigma=ONE):
        sigma = rf(sigma)
        if not sigma:
            raise ZeroGauge('the rescaling of the unknown must be nonzero')
        return super().__new__(cls, rf(a), sigma)

    @property
    def frame(self):
        return Frame(self.a)


LaplaceStep = namedtuple('LaplaceStep', [
    'source',          # gauged system on u
    'gauge',           # GaugeChoice
    'transformed',     # system on v = X u
    'inverse_kind',    # DIFFERENTIAL, FROBENIUS or INTEGRAL
    'inverse_op',      # L with u = L v, differential kind only
    'inverse_system',  # ((P1, Q1), (P2, Q2)) meaning P u = Q v, Frobenius kind only
    'inverse_order',   # order of L, 0 for Frobenius, -1 for integral
    ])

TraceEntry = namedtuple('TraceEntry', [
    'source_type', 'source_kappa', 'kind', 'branch', 'target_type', 'target_kappa', 'gauge',
    ])

Route = namedtuple('Route', ['steps', 'trace', 'terminal', 'terminal_kind', 'kappa'])

IntegrationResult = namedtuple('IntegrationResult', [
    'solution', 'steps', 'trace', 'terminal', 'kappa', 'shape_ok',
    ])

#%% Normalization and gauge

def _check_class_one(analysis):
    if analysis.ideal.trivial:
        raise TrivialIdeal('the ideal contains 1; the only solution is u = 0')
    if not analysis.verdict.compatible:
        raise Incompatible('the system is not compatible (order %s)' % analysis.verdict.order,
                           analysis.verdict)
    profile = analysis.profile
    if profile.omega != 1:
        raise NotClassOne('the system has class %d, not 1' % profile.omega)
    if not is_straightened(profile.char_divisor):
        raise CharNotStraightened('characteristic divisor %s is not {xi}'
                                  % divisor_to_str(profile.char_divisor))


def _normalized(sys, analysis):
    basis = sorted(analysis.ideal.basis, key=lambda g: g.leading_monomial[1])
    return PDESystem(basis, sys.frame, sys.unknown, analysis.ideal)


def normalize_generators(sys):
    '''
    Re-choose the generators so that their leading monomials are
    Dx^i_1 Dy^j_1, Dx^i_2 Dy^j_2, ... with j strictly increasing and leading
    coefficients 1.

    The new generators are the reduced Groebner basis of the ideal; for a
    class one system with characteristic Dx every leading monomial has i >= 1,
    and i and j both change monotonically along the staircase.

    Parameters
    ----------
    sys : PDESystem

    Raises
    ------
    NotClassOne
        If the class of the system is not 1.
    CharNotStraightened
        If the characteristic divisor is not {xi}.
    Incompatible, TrivialIdeal
        If the system is not compatible.

    Returns
    -------
    PDESystem

    '''
    analysis = analyze(sys)
    _check_class_one(analysis)
    return _normalized(sys, analysis)


def basic_gauge(sys):
    '''
    The unique shift X = Dx + a that removes the highest pure Dy term.

    The generator with leading monomial Dx Dy^j0 reads
    Dy^j0 Dx + alpha Dy^j0 + ...; in the frame X = Dx + a its Y^j0
    coefficient is alpha - a, so a = alpha is the only solution.

    Parameters
    ----------
    sys : PDESystem
        Output of normalize_generators.

    Raises
    ------
    GaugeEquationDifferential
        If no generator with leading monomial Dx Dy^j exists, or the gauge
        condition is not solved by a function.

    Returns
    -------
    gauge : GaugeChoice
    gauged : PDESystem
        The same generators with the frame X = Dx + a.

    '''
    tops = [g for g in sys.generators if g.leading_monomial[0] == 1]
    if len(tops) != 1:
        raise GaugeEquationDifferential('no unique generator with leading monomial Dx*Dy^j')
    top = tops[0]
    j0 = top.leading_monomial[1]
    gauge = GaugeChoice(top[(0, j0)])
    framed = rewrite_in_frame(top, gauge.frame)
    if framed.get((j0, 0), ZERO):
        raise GaugeEquationDifferential('the Y^%d coefficient does not vanish for a = %s'
                                        % (j0, rf_to_str(gauge.a)))
    logger.debug('basic gauge a = %s', rf_to_str(gauge.a))
    return gauge, sys.with_frame(gauge.frame)


def relative_invariants(sys):
    '''
    Named relative invariants and branch label of the type table, see
    glaplace.invariants.relative_invariants.
    '''
    from glaplace.invariants import relative_invariants as table_invariants
    return table_invariants(sys)

#%% Laplace step

def _gamma_order(ci):
    return ci.max_order - 1 + cfg.quotient_margin


def _images(ci, X, order):
    # normal forms of Dx^i Dy^j X for i + j <= order
    gammas = [(i, k - i) for k in range(order + 1) for i in range(k, -1, -1)]
    return gammas, [ci.reduce(shifted(X, i, j)) for i, j in gammas]


def _coordinates(ops):
    # one row per monomial, one column per operator
    monomials = sorted({m for op in ops for m in op}, key=term_key, reverse=True)
    return [[op[m] for op in ops] for m in monomials]


def _search_inverse(ci, gammas, images, upto):
    '''
    Smallest d <= upto with Dy^d + sum(c_j Dy^j) = M X modulo the ideal.

    Returns
    -------
    (int, tuple of FracElement, DiffOp) or None
        d, the coefficients c_0..c_(d-1) and M.

    '''
    for d in range(upto + 1):
        pure = [ci.reduce(DiffOp.monomial(0, j)) for j in range(d + 1)]
        columns = pure[:d] + [-img for img in images]
        rows = _coordinates(columns + [pure[d]])
        sol = solve([r[:-1] for r in rows], [-r[-1] for r in rows], len(columns))
        if sol is not None:
            return d, tuple(sol[:d]), DiffOp(dict(zip(gammas, sol[d:])))
    return None


def _is_integral(ci, transformed, X):
    # the ideal is generated by the products G X, G in the transformed ideal
    products = complete([g * X for g in transformed.ideal.basis])
    return not products.trivial and all(products.contains(g) for g in ci.basis)


def inverse_operator(sys, transformed=None):
    '''
    Differential inverse of the substitution v = X u.

    Looks for L with L X = 1 modulo the ideal among operators of order below
    the highest order of the ideal, by exact elimination over Q(x, y).

    Parameters
    ----------
    sys : PDESystem
        Normalized and gauged system; X is its frame operator.
    transformed : PDESystem, optional
        If given, L is reduced modulo its ideal.

    Returns
    -------
    DiffOp or None
        None when the elimination has no solution (the inverse is not
        differential).

    '''
    ci = sys.ideal
    X = sys.frame.X
    gammas, images = _images(ci, X, _gamma_order(ci))
    found = _search_inverse(ci, gammas, images, 0)
    if found is None:
        return None
    L = found[2]
    if transformed is not None:
        L = transformed.ideal.reduce(L)
    if not ci.contains(L * X - 1):
        logger.error('eliminated inverse %s fails L X = 1', L)
        return None
    return L


def inverse_unique_check(L1, L2, sys, transformed):
    '''
    True if two inverses of v = X u agree modulo the transformed ideal.
    '''
    X = sys.frame.X
    for L in (L1, L2):
        if not sys.ideal.contains(L * X - 1):
            logger.warning('%s is not an inverse of %s', L, X)
    return transformed.ideal.contains(L1 - L2)


def inverse_contracts(step):
    '''
    For a differential step, whether L X = 1 modulo the source ideal and
    X L = 1 modulo the transformed ideal.

    Returns
    -------
    (bool, bool)

    '''
    X = step.source.frame.X
    L = step.inverse_op
    return (step.source.ideal.contains(L * X - 1),
            step.transformed.ideal.contains(X * L - 1))


def laplace_step(sys):
    '''
    Generalized Laplace transformation v = X u of a gauged system.

    The transformed ideal is spanned by the operators sum(c_g Dx^i Dy^j) with
    sum(c_g Dx^i Dy^j X) in the ideal; up to the order of the ideal these are
    the kernel of the matrix of normal forms of Dx^i Dy^j X. The inverse is
    classified by the smallest d with Dy^d + ... = M X modulo the ideal:
    d = 0 gives the differential inverse u = M v, d = 1 the Frobenius system
    X u = v, (Dy + c) u = M v. Otherwise the inverse is integral when the
    ideal is the product of the transformed ideal and X.

    Parameters
    ----------
    sys : PDESystem
        Output of basic_gauge.

    Raises
    ------
    ReducedToODE
        If u is tied to v by an ODE in y of order 2 or more.

    Returns
    -------
    LaplaceStep

    '''
    ci = sys.ideal
    X = sys.frame.X
    gammas, images = _images(ci, X, _gamma_order(ci))
    kernel = nullspace(_coordinates(images), len(gammas))
    generators = [g for g in (DiffOp(dict(zip(gammas, vec))) for vec in kernel) if g]
    if any(g.order == 0 for g in generators):
        raise GlaplaceError('X = %s lies in the ideal; the system is a single first-order equation' % X)
    transformed = PDESystem(generators, STANDARD_FRAME, 'v')
    gauge = GaugeChoice(sys.frame.a)

    found = _search_inverse(ci, gammas, images, cfg.max_pure_y_order)
    if found is not None and found[0] == 0:
        L = transformed.ideal.reduce(found[2])
        return LaplaceStep(sys, gauge, transformed, DIFFERENTIAL, L, None, L.order)
    if found is not None and found[0] == 1:
        Yc = DiffOp({(0, 1): ONE, (0, 0): found[1][0]})
        M = transformed.ideal.reduce(found[2])
        system = ((X, DiffOp.scalar(ONE)), (Yc, M))
        return LaplaceStep(sys, gauge, transformed, FROBENIUS, None, system, 0)
    if _is_integral(ci, transformed, X):
        return LaplaceStep(sys, gauge, transformed, INTEGRAL, None, None, -1)
    if found is not None:
        message = 'u is determined from v by an ODE of order %d in y' % found[0]
    else:
        message = 'no inverse of order <= %d in Dy found' % cfg.max_pure_y_order
    raise ReducedToODE(message, system=transformed)

#%% Quadratures

def integrate_y(h):
    '''
    Antiderivative in y of an expression independent of x.

    The f-part is integrated by parts: with G = sum(g_j f^(j)), j < J,
    G' = h requires g_(J-1) = h_J, g_(j-1) = h_j - g_j' and h_0 = g_0'.
    Constant coefficients are integrated term by term.

    Raises
    ------
    QuadratureResidual
        If a coefficient depends on x, or h_0 - g_0' is not zero.

    '''
    for _, s in h.items():
        if s.depends_on('x'):
            raise QuadratureResidual('the y-equation of a Frobenius inverse depends on x')
    out = SolutionExpr()
    top = h.q
    if top >= 0:
        g = {}
        current = Scalar()
        for j in range(top, 0, -1):
            current = h[FunctionDerivative(j)] - current.derive('y')
            g[j - 1] = current
        remainder = h[FunctionDerivative(0)] - (g[0].derive('y') if top >= 1 else Scalar())
        if remainder:
            raise QuadratureResidual('Int(%s*f(y), y) has no closed form' % remainder.render())
        out = SolutionExpr({FunctionDerivative(j): s for j, s in g.items()})
    for k in h.constants:
        out = out + SolutionExpr({Constant(k): h[Constant(k)].integrate('y')})
    return out


def _next_constant(v):
    return max(v.constants, default=0) + 1


def _check_arrow(source, target):
    '''
    Postcondition of one Laplace step between two visited systems, each
    given as (label, kappa, omega, orders).

    Raises
    ------
    ComplexityNotDecreasing
        If a class one target does not have smaller complexity, or a finite
        type target has more solutions than the source complexity.
    InvalidArrow
        If a class one target is not reachable from the source type.

    '''
    from glaplace.zoo import valid_arrow

    label, kappa, _, orders = source
    if target[2] == 0:
        if target[1] > kappa:
            raise ComplexityNotDecreasing('%s (kappa=%d) -> finite type with %d constants'
                                          % (label, kappa, target[1]))
        return
    if target[1] >= kappa:
        raise ComplexityNotDecreasing('complexity %d -> %d from %s to %s'
                                      % (kappa, target[1], label, target[0]))
    if not valid_arrow(orders, target[3]):
        raise InvalidArrow('%s -> %s is not an arrow of the type zoo' % (label, target[0]))

#%% Integration pipeline

class Integrator(Verbose):
    '''
    Iterated Laplace transformations of one system.

    Parameters
    ----------
    system : PDESystem
        Compatible class one system with characteristic Dx.
    verbose : int or None, optional
        0 = quiet, 1 = one line per step. If None, cfg.verbose is used.
        The default is None.

    '''

    def __init__(self, system, verbose=None):
        self.system = system
        self.verbose = cfg.verbose if verbose is None else verbose
        self.route = None

    #%% Reduction

    def reduce(self):
        '''
        Apply Laplace steps until one first-order equation or a system of
        finite type remains.

        Raises
        ------
        ComplexityNotDecreasing
            If a step onto a class one system does not lower the complexity.
        InvalidArrow
            If a step is not an arrow of the type zoo.

        Returns
        -------
        Route

        '''
        steps, visited = [], []
        current = self.system
        for n in range(cfg.max_laplace_steps + 1):
            analysis = analyze(current)
            if analysis.ideal.trivial or not analysis.verdict.compatible or analysis.profile.omega != 0:
                _check_class_one(analysis)
            profile = analysis.profile
            orders = analysis.spencer.type_sig
            label = FINITE_TYPE if profile.omega == 0 else type_label(orders)
            visited.append((label, profile.kappa, profile.omega, orders))
            if profile.omega == 0:
                terminal_kind = FINITE_TYPE
                break
            if analysis.ideal.max_order == 1:
                terminal_kind = 'E1'
                break
            if n == cfg.max_laplace_steps:
                raise GlaplaceError('no terminal system after %d Laplace steps' % n)
            gauge, gauged = basic_gauge(_normalized(current, analysis))
            step = laplace_step(gauged)
            steps.append((step, self._branch(gauged, step)))
            self._msg('%s (kappa=%d): gauge a = %s, %s inverse' % (
                label, profile.kappa, rf_to_str(gauge.a), step.inverse_kind))
            current = step.transformed

        trace = []
        for (step, branch), source, target in zip(steps, visited, visited[1:]):
            _check_arrow(source, target)
            trace.append(TraceEntry(source[0], source[1], step.inverse_kind, branch,
                                    target[0], target[1], step.gauge.a))
        self.route = Route(tuple(s for s, _ in steps), tuple(trace), current, terminal_kind, visited[0][1])
        return self.route

    def _branch(self, gauged, step):
        from glaplace.invariants import table_entry
        try:
            report = table_entry(step.gauge, gauged)
        except UnsupportedType:
            return None
        if report.predicted_kind and step.inverse_kind not in report.predicted_kind.split('|'):
            logger.warning('branch %s predicts a %s inverse, the step found %s',
                           report.branch, report.predicted_kind, step.inverse_kind)
        return report.branch

    #%% Solution assembly

    def _terminal_solution(self, system, kind):
        ci = system.ideal
        if kind == 'E1':
            (g,) = ci.basis
            return SolutionExpr.function(exp_solution(g[(0, 0)]))
        if set(ci.leading_monomials) == {(1, 0), (0, 1)}:
            gx, gy = sorted(ci.basis, key=lambda g: g.leading_monomial[1])
            return SolutionExpr.constant(1, exp_solution(gx[(0, 0)], gy[(0, 0)]))
        raise ReducedToODE('the finite-type system %s of order %d is not solved by quadratures'
                           % (system, ci.max_order), system=system)

    def _invert(self, step, v):
        if step.inverse_kind == DIFFERENTIAL:
            return op_apply(step.inverse_op, v)
        a = step.gauge.a
        if step.inverse_kind == INTEGRAL:
            if v.q >= 0:
                raise UnsupportedType('an integral inverse over a class one system adds a second function')
            E = exp_solution(a)
            W = v.scale(E.inverse()).integrate_x()
            return (W + SolutionExpr.function()).scale(E)
        _, (Yc, M) = step.inverse_system
        E = exp_solution(a, Yc[(0, 0)])
        Einv = E.inverse()
        W = v.scale(Einv).integrate_x()
        try:
            h = op_apply(M, v).scale(Einv) - W.derive('y')
        except ApplyToResidual as err:
            raise QuadratureResidual(str(err))
        return (W + integrate_y(h) + SolutionExpr.constant(_next_constant(v))).scale(E)

    def run(self):
        '''
        Integrate the system.

        Raises
        ------
        ReducedToODE
            If the terminal system has finite type and order above 1, or an
            inverse is an ODE in y.
        QuadratureResidual
            If the solution keeps unevaluated integrals; the solution is
            attached to the error.
        SolutionShapeMismatch
            If q + #constants differs from the complexity of the input.

        Returns
        -------
        IntegrationResult

        '''
        route = self.route or self.reduce()
        solution = self._terminal_solution(route.terminal, route.terminal_kind)
        for step in reversed(route.steps):
            solution = self._invert(step, solution)
        solution = normalize_solution(solution)
        if solution.has_quadrature:
            raise QuadratureResidual('the solution keeps unevaluated quadratures', solution=solution)
        shape_ok = max(solution.q, 0) + len(solution.constants) == route.kappa
        if not shape_ok:
            raise SolutionShapeMismatch('solution has q = %d and %d constants, complexity is %d'
                                        % (solution.q, len(solution.constants), route.kappa),
                                        solution=solution)
        self._msg('solution: u = %s' % solution.render())
        return IntegrationResult(solution, route.steps, route.trace, route.terminal, route.kappa, shape_ok)


def integrate(sys):
    '''
    General solution of a compatible class one system with characteristic Dx.

    Returns
    -------
    SolutionExpr

    '''
    return Integrator(sys, verbose=0).run().solution


def complexity_trace(sys):
    '''
    (type, kappa, inverse kind, branch) of every Laplace step.

    Returns
    -------
    tuple of TraceEntry

    '''
    return Integrator(sys, verbose=0).reduce().trace


def verify_solution(sys, sol):
    '''
    True if every generator annihilates the solution identically.

    Raises
    ------
    ApplyToResidual
        If the solution contains unevaluated quadratures.

    '''
    if sol.has_quadrature:
        raise ApplyToResidual('cannot verify a solution with unevaluated quadratures')
    return all(not op_apply(g, sol) for g in sys.generators)
