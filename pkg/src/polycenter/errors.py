"""Exception hierarchy for polycenter.

Every domain error raised by the library derives from PolycenterError so the
CLI can convert any of them into a structured JSON error and exit code 1.
"""

from __future__ import annotations


class PolycenterError(Exception):
    """Base class for all domain errors raised by this package."""


# -- geometry ---------------------------------------------------------------

class DimensionMismatch(PolycenterError):
    """Two polygons that should have the same vertex count do not."""


class NoIsometry(PolycenterError):
    """No rigid motion maps one labelled polygon onto the other."""


# -- center engine ----------------------------------------------------------

class OutOfDomain(PolycenterError):
    """Polygon is outside the family a center function is defined on."""


class DegenerateNormalization(PolycenterError):
    """The cyclic-shift values of a center function sum to (nearly) zero."""


class UnknownName(PolycenterError):
    """Requested built-in center name is not in the catalog."""


class ZeroValue(PolycenterError):
    """A center function vanished where a nonzero value was required."""


class NoValidTriple(PolycenterError):
    """No consecutive vertex triple admitted a local weight solution."""


class PointOffLine(PolycenterError):
    """Claimed center of a flat polygon does not lie on the carrier line."""


class BadWeights(PolycenterError):
    """Affine weights do not sum to one."""


# -- central lines ----------------------------------------------------------

class CoincidentCenters(PolycenterError):
    """The two weight vectors are proportional; the line is undefined."""


class Infeasible(PolycenterError):
    """The linear line system has no solution."""


class NotARectangle(PolycenterError):
    """Input is not a non-square rectangle."""


# -- symmetry ---------------------------------------------------------------

class Degenerate(PolycenterError):
    """All vertices coincide; the operation is undefined."""


class TooFew(PolycenterError):
    """Not enough center evaluations for the requested comparison."""


class FlatTrigon(PolycenterError):
    """Triangle classification requires a non-flat triangle."""


class ClassificationMismatch(PolycenterError):
    """Metric and center-based triangle classifications disagree."""


# -- tangential -------------------------------------------------------------

class NotConvex(PolycenterError):
    """Operation requires a convex polygon."""


class NotTangential(PolycenterError):
    """Polygon does not admit an inscribed circle touching every side."""


class NumericallyNegative(PolycenterError):
    """A vertex lies inside the candidate incircle; tangent length undefined."""


class BadAngles(PolycenterError):
    """Tangency angles are not increasing with gaps in (0, pi)."""


class ZeroArea(PolycenterError):
    """Polygon encloses no area; the lamina centroid is undefined."""


class NotParallelogram(PolycenterError):
    """Operation requires a parallelogram."""


# -- DSL --------------------------------------------------------------------

class ParseError(PolycenterError):
    """Expression source could not be parsed; carries the failing position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class IndexOutOfRange(PolycenterError):
    """A distance symbol d(i,j) uses an index outside [1, n]."""


class NegativeSqrt(PolycenterError):
    """Square root of a value negative beyond the clamping window."""


class DivisionByZero(PolycenterError):
    """Division by a (nearly) zero denominator during expression evaluation."""


class SymmetryViolation(PolycenterError):
    """Expression is not invariant under the index-reversal relabelling."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DegreeInconsistent(PolycenterError):
    """Numeric homogeneity-degree estimates disagree across samples."""
