"""Exception types shared across the toolkit.

Every error raised by fairkit derives from FairkitError so callers can
catch domain failures separately from programming errors.
"""


class FairkitError(Exception):
    """Base class for all fairkit domain errors."""


# --- curve construction / evaluation -------------------------------------

class InvalidKnots(FairkitError):
    """Knot vector is non-monotone or has invalid multiplicities."""


class InvalidJoint(FairkitError):
    """Piecewise segment endpoints do not meet within the join tolerance."""


class DegenerateControlData(FairkitError):
    """Control data is empty, non-finite, or otherwise unusable."""


class OutOfDomain(FairkitError):
    """Parameter lies outside the curve or patch domain."""


class DimensionMismatch(FairkitError):
    """Operands have incompatible spatial dimensions."""


# --- differential geometry ------------------------------------------------

class CuspError(FairkitError):
    """First derivative magnitude below the cusp tolerance."""


class PlanarCurve(FairkitError):
    """Operation requires a spatial (3D) curve."""


class InflectionError(FairkitError):
    """Torsion undefined: |r' x r''| below tolerance."""


class ReversedInterval(FairkitError):
    """Interval endpoints are equal or out of order."""


# --- quadrature and special functions -------------------------------------

class BudgetExhausted(FairkitError):
    """Adaptive subdivision budget exhausted before reaching tolerance."""


class NoConvergence(FairkitError):
    """Iteration failed to reach the requested tolerance."""


class PoleError(FairkitError):
    """Hypergeometric parameter c is a non-positive integer."""


class DomainError(FairkitError):
    """Argument outside the supported real branch."""


class KappaSingular(FairkitError):
    """Spiral curvature non-finite or non-positive where positivity is required."""


class QuadratureFailure(FairkitError):
    """Quadrature inside a curve generator failed to converge."""


# --- fairness metrics -------------------------------------------------------

class NonMonotoneCurvature(FairkitError):
    """Logarithmic curvature graph requires strictly monotone curvature."""


class NonPositiveCurvature(FairkitError):
    """Logarithmic curvature graph requires positive curvature."""


# --- hermite candidates -----------------------------------------------------

class InfeasibleQuadratic(FairkitError):
    """End tangent lines do not intersect on the forward side."""


class MissingCurvatureData(FairkitError):
    """Curvature-dependent construction requested without end curvatures."""


# --- comparator ---------------------------------------------------------------

class EmptyCandidateSet(FairkitError):
    """No candidates supplied."""


class CommonDataViolation(FairkitError):
    """Candidates do not share the required Hermite data."""


# --- aesthetics -----------------------------------------------------------------

class MissingCriterion(FairkitError):
    """Score sheet lacks one of the eleven criteria."""


class UnknownCriterion(FairkitError):
    """Score sheet names a criterion outside the fixed eleven."""


class ScoreOutOfRange(FairkitError):
    """Score outside the integer range [-3, 3]."""


class NonIntegerScore(FairkitError):
    """Score is not an integer."""


class EmptySet(FairkitError):
    """Aggregation over an empty collection."""


class MixedSubjects(FairkitError):
    """Score sheets refer to different subject curves."""


# --- surfaces ----------------------------------------------------------------

class DegenerateNormal(FairkitError):
    """Surface normal undefined: |du x dv| below tolerance."""


# --- cli documents --------------------------------------------------------------

class DocumentError(FairkitError):
    """Base class for document parsing failures."""


class DocumentSyntaxError(DocumentError):
    """Document is not valid JSON or lacks the envelope fields."""


class UnknownEntityKind(DocumentError):
    """Entity kind not one of the supported payload kinds."""


class DuplicateId(DocumentError):
    """Two entities share an id."""


class SchemaViolation(DocumentError):
    """Entity payload fails schema validation."""
