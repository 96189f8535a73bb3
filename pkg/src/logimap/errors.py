"""Exception types shared across the toolkit.

Every named failure mode raised by an analysis routine derives from
ToolkitError so the command-line layer can report it uniformly.
"""


class ToolkitError(Exception):
    """Base class for all toolkit-specific failures."""


class DegenerateParameter(ToolkitError):
    """A parameter value makes the requested construction undefined."""


class InsufficientData(ToolkitError):
    """Not enough samples or sequence entries for the requested analysis."""


class NoConvergence(ToolkitError):
    """An iterative refinement exhausted its budget without converging."""


class NotMinimalPeriod(ToolkitError):
    """A candidate periodic orbit actually has a shorter period."""


class BadBracket(ToolkitError):
    """Root bracketing endpoints do not straddle a sign change."""


class DegenerateSpacing(ToolkitError):
    """Consecutive parameter values coincide; a gap ratio is undefined."""


class EscapedOrbit(ToolkitError):
    """A trajectory left the invariant interval during an analysis."""


class IterationBudgetExhausted(ToolkitError):
    """Successive approximation hit its iteration cap before converging.

    Carries the partial run so callers can inspect how far it got.
    """

    def __init__(self, message, run=None):
        super().__init__(message)
        self.run = run
