'''
Exception hierarchy of glaplace.

Every error carries a machine-readable diagnostic code and the exit status
the command-line interface returns for it.
'''

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_INCOMPATIBLE = 4
EXIT_RESIDUAL = 5


class GlaplaceError(Exception):
    code = 'E_INTERNAL'
    exit_status = EXIT_INTERNAL

    def diagnostic(self):
        '''
        Machine-readable form of the error, as written to reports.

        Returns
        -------
        dict
            Keys 'code', 'message' and any error-specific fields.

        '''
        return {'code': self.code, 'message': str(self)}


#%% Arithmetic

class DivisionByZero(GlaplaceError, ZeroDivisionError):
    code = 'E_DIVISION_BY_ZERO'


class ZeroGauge(GlaplaceError):
    code = 'E_ZERO_GAUGE'


class ZeroOperator(GlaplaceError):
    code = 'E_ZERO_OPERATOR'


class ApplyToResidual(GlaplaceError):
    code = 'E_APPLY_TO_RESIDUAL'
    exit_status = EXIT_RESIDUAL


#%% Formal theory

class TrivialIdeal(GlaplaceError):
    code = 'E_TRIVIAL_IDEAL'
    exit_status = EXIT_INCOMPATIBLE


class Incompatible(GlaplaceError):
    code = 'E_INCOMPATIBLE'
    exit_status = EXIT_INCOMPATIBLE

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict

    def diagnostic(self):
        diag = super().diagnostic()
        if self.verdict is not None:
            diag['order'] = self.verdict.order
        return diag


class NonDiscreteCharVariety(GlaplaceError):
    code = 'E_NON_DISCRETE_CHAR'
    exit_status = EXIT_UNSUPPORTED


#%% Laplace transformations

class CharNotStraightened(GlaplaceError):
    code = 'E_CHAR_NOT_STRAIGHTENED'
    exit_status = EXIT_UNSUPPORTED


class NotClassOne(GlaplaceError):
    code = 'E_NOT_CLASS_ONE'
    exit_status = EXIT_UNSUPPORTED


class GaugeEquationDifferential(GlaplaceError):
    code = 'E_GAUGE_DIFFERENTIAL'
    exit_status = EXIT_UNSUPPORTED


class UnsupportedType(GlaplaceError):
    code = 'E_UNSUPPORTED_TYPE'
    exit_status = EXIT_UNSUPPORTED


class ComplexityNotDecreasing(GlaplaceError):
    code = 'E_COMPLEXITY'


class InvalidArrow(ComplexityNotDecreasing):
    code = 'E_INVALID_ARROW'


class SolutionShapeMismatch(GlaplaceError):
    code = 'E_SOLUTION_SHAPE'

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class ReducedToODE(GlaplaceError):
    code = 'E_REDUCED_TO_ODE'
    exit_status = EXIT_RESIDUAL

    def __init__(self, message, system=None):
        super().__init__(message)
        self.system = system


class QuadratureResidual(GlaplaceError):
    code = 'E_QUADRATURE_RESIDUAL'
    exit_status = EXIT_RESIDUAL

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


#%% Classical method

class ZeroInvariant(GlaplaceError):
    code = 'E_ZERO_INVARIANT'
    exit_status = EXIT_UNSUPPORTED


#%% Input parsing

class PDESyntaxError(GlaplaceError):
    code = 'E_SYNTAX'
    exit_status = EXIT_PARSE

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = '%s (line %d, column %d)' % (message, line, column or 0)
        super().__init__(message)
        self.line = line
        self.column = column

    def diagnostic(self):
        diag = super().diagnostic()
        diag['line'] = self.line
        diag['column'] = self.column
        return diag


class NonlinearTerm(PDESyntaxError):
    code = 'E_NONLINEAR'


class InhomogeneousTerm(NonlinearTerm):
    code = 'E_INHOMOGENEOUS'


class UnknownSymbol(PDESyntaxError):
    code = 'E_UNKNOWN_SYMBOL'
