"""Exception types.  Negative mathematical verdicts carry their evidence."""


class VarCalcError(Exception):
    pass


class BidegreeError(VarCalcError, ValueError):
    """An operator was applied to a form of the wrong bidegree."""


class NoSolution(VarCalcError):
    """The truncated linear system is inconsistent at the given bounds."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoPotential(VarCalcError):
    """No d_H-potential was found within the escalation limit."""


class NotClosed(NoPotential):
    """A form of horizontal degree < n is not d_H-closed, so it cannot be exact."""

    def __init__(self, message, differential=None):
        super().__init__(message)
        self.differential = differential


class PotentialNotFound(VarCalcError):
    """The d_H-exact remainder of a decomposition had no potential (a bound bug)."""


class NotTrivial(VarCalcError):
    """The Lagrangian has a nonzero Euler-Lagrange form."""

    def __init__(self, message, euler_lagrange=None):
        super().__init__(message)
        self.euler_lagrange = euler_lagrange


class HelmholtzFailed(VarCalcError):
    """The source form violates the Helmholtz condition."""

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class InternalCheckFailed(VarCalcError, AssertionError):
    """A self-verification identity failed.  Always a bug."""


class InternalRoundTripFailed(InternalCheckFailed):
    pass


class ParseError(VarCalcError, ValueError):
    def __init__(self, message, position=None, text=None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")
        self.position = position
        self.text = text


class WireFormatError(VarCalcError, ValueError):
    pass
