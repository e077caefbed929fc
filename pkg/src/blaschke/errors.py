"""Exception hierarchy for the blaschke package.

Every failure mode that callers may want to catch individually gets its own
class; ``code`` is a stable machine-readable slug surfaced in CLI reports.
"""


class BlaschkeError(Exception):
    """Base class for all package errors."""

    code = "error"


class ZeroOutsideDisk(BlaschkeError):
    """A zero (or fitted zero) violates the open-unit-disk margin."""

    code = "zero-outside-disk"


class DegenerateProduct(BlaschkeError):
    code = "degenerate-product"


class PoleProximity(BlaschkeError):
    """Evaluation point too close to a reflected pole 1/conj(a)."""

    code = "pole-proximity"


class RootFindingFailure(BlaschkeError):
    """Simultaneous iteration did not certify all roots."""

    code = "root-finding-failure"


class NewtonDivergence(BlaschkeError):
    code = "newton-divergence"


class CutProximity(BlaschkeError):
    """Point too close to the segment system joining the zeros."""

    code = "cut-proximity"


class FrameNotFound(BlaschkeError):
    """No working circle with a certified fiber labeling was found."""

    code = "frame-not-found"


class LabelingAmbiguity(BlaschkeError):
    """Fiber points could not be matched bijectively to root-of-unity sectors."""

    code = "labeling-ambiguity"


class LoopPlanningFailure(BlaschkeError):
    code = "loop-planning-failure"


class ContinuationCollision(BlaschkeError):
    """Two tracked fiber points merged; the path ran too close to a branch point."""

    code = "continuation-collision"


class StepUnderflow(BlaschkeError):
    """Step halving exhausted its budget during fiber continuation."""

    code = "step-underflow"


class MatchingAmbiguity(BlaschkeError):
    """End fiber could not be matched unambiguously to the labeled start fiber."""

    code = "matching-ambiguity"


class SizeLimit(BlaschkeError):
    """Enumeration request exceeds the Bell-number guard."""

    code = "size-limit"


class FitIllConditioned(BlaschkeError):
    """Rational least-squares system has no well-separated null direction."""

    code = "fit-ill-conditioned"


class ExpressionSyntaxError(BlaschkeError):
    """Expression text failed to parse; ``position`` is the offending index."""

    code = "syntax-error"

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class ParameterOutOfDisk(ExpressionSyntaxError):
    """mobius() parameter lies on or outside the unit circle."""

    code = "parameter-out-of-disk"
