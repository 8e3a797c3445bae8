"""Exception hierarchy shared by every layer of the toolkit."""


class IsocompareError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(IsocompareError, ValueError):
    """An argument lies outside the admissible range of a model quantity."""


class SingularSystemError(IsocompareError, ValueError):
    """The 2x2 chord system is (numerically) singular."""


class HypothesisViolation(IsocompareError):
    """A sampled hypothesis of a comparison statement does not hold."""


class OracleResolutionError(IsocompareError):
    """Two independent distance estimates disagree beyond the allowed slack."""


class NonConvergenceError(IsocompareError):
    """Quadrature or an iterative solver failed to reach its target accuracy."""


class ChartExitError(IsocompareError):
    """A geodesic left the chart of a manifold without a transition map."""


class ResolutionError(IsocompareError):
    """A sampled object is too coarse for the tolerance it was asked to meet."""


class ScenarioError(IsocompareError, ValueError):
    """A scenario file failed to parse or validate."""
