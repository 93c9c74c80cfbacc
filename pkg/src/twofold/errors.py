"""Exception types shared across the package."""


class TwofoldError(Exception):
    """Base class for numeric and contract failures raised by this package."""


class DegenerateTangency(TwofoldError):
    """Second Lie derivative vanishes at a tangency (cusp-like point)."""


class NotSlidingRegion(TwofoldError):
    """Sliding field requested outside a sliding or escaping region."""


class DivisionDegeneracy(TwofoldError):
    """Denominator of a Filippov convex combination is numerically zero."""


class StepSizeUnderflow(TwofoldError):
    """The adaptive integrator failed to advance (step size collapsed)."""


class DomainEscape(TwofoldError):
    """A trajectory left the configured bounding box."""


class NoHitWithinHorizon(TwofoldError):
    """No switching-line crossing was found inside the time horizon."""


class GrazingHit(TwofoldError):
    """Switching-line contact is tangential where transversality is required."""


class NonDeterministicEscape(TwofoldError):
    """The flow reached a region of the switching line where continuation
    is not unique (escaping region in forward time, sliding in backward)."""


class TooManyEvents(TwofoldError):
    """Chattering guard: the hybrid integrator exceeded its event budget."""


class HypothesisH1Violated(TwofoldError):
    """Fold structure of the unperturbed lower field fails a sign condition."""


class ZeroCountMismatch(TwofoldError):
    """The lower field does not have exactly two simple folds in the range."""


class NotInRange(TwofoldError):
    """Argument outside the admissible interval (abscissa or half-period)."""


class DegenerateSlope(TwofoldError):
    """A root was located but its defining derivative is numerically zero."""


class NoZeros(TwofoldError):
    """The sampled bifurcation function has no sign change."""


class NonSimpleZero(TwofoldError):
    """A located zero has a derivative below the simplicity tolerance."""


class SingularFundamentalMatrix(TwofoldError):
    """Fundamental matrix is numerically singular and cannot be inverted."""


class Inconclusive(TwofoldError):
    """The sliding/crossing dichotomy sits on its strict-inequality boundary."""


class OutOfDomain(TwofoldError):
    """Argument outside the domain of a special function."""


class PositiveTau(TwofoldError):
    """Sliding-closure time solved to a non-negative value; the upstream
    sliding inequality must have been violated."""


class NewtonDiverged(TwofoldError):
    """Newton iteration on the stroboscopic map failed to converge."""


class NoSlidingSegment(TwofoldError):
    """A sliding verification run produced no sliding segment."""


class ConfigInvalid(TwofoldError):
    """Experiment configuration failed validation; the message names the field."""
