"""fairkit: multi-criteria curve and surface fairness assessment."""

from . import aesthetics, comparator, diffgeom, fairness, geomcore, hermite, spirals, surfaudit
from .geomcore import (
    BezierCurve,
    BSplineCurve,
    Curve,
    PiecewiseCurve,
    Polyline,
    SimilarityTransform,
    construct_curve,
)
from .spirals import SpiralSpec, generate_spiral

__version__ = "0.1.0"

__all__ = [
    "aesthetics",
    "comparator",
    "diffgeom",
    "fairness",
    "geomcore",
    "hermite",
    "spirals",
    "surfaudit",
    "BezierCurve",
    "BSplineCurve",
    "Curve",
    "PiecewiseCurve",
    "Polyline",
    "SimilarityTransform",
    "SpiralSpec",
    "construct_curve",
    "generate_spiral",
    "__version__",
]
