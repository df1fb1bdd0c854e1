"""Bergman orthogonal polynomials, Faber polynomials and exterior conformal maps
at arbitrary precision."""

from .numerics import LaurentSeries, Poly, TruncationError, precision
from .domains import (DomainError, ExteriorMap, HalfDisk, MomentMatrix, Polygon, UnitDisk,
                      ellipse, from_json, from_name, hypocycloid, moment, moment_matrix, square)
from .orthogonal import ARNOLDI, CONVENTIONAL, OrthonormalBasis, PrecisionExhausted, build_basis

__all__ = [
    "LaurentSeries", "Poly", "TruncationError", "precision", "DomainError", "ExteriorMap",
    "HalfDisk", "MomentMatrix", "Polygon", "UnitDisk", "ellipse", "from_json", "from_name",
    "hypocycloid", "moment", "moment_matrix", "square", "ARNOLDI", "CONVENTIONAL",
    "OrthonormalBasis", "PrecisionExhausted", "build_basis",
]
