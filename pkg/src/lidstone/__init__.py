"""Multivariate Lidstone interpolation and integer-valued entire functions.

Exact rational polynomial arithmetic, the basis dual to admissible
derivative data at ``n + 1`` points, reconstruction of polynomials from such
data, a small symbolic layer for the extremal example functions, and
numerical growth diagnostics.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .basis import (
    DataSet, LidstoneBasisElement, NoSolutionWithinCapError, expand, extract_data,
    kernel_rank_check, lidstone_basis, reconstruct, reconstruct_general, univariate_lidstone,
)
from .growth import (
    GrowthParams, cauchy_derivative_bound, check_growth_condition, estimate_directional_type,
    finite_exception_scan, polya_threshold, stirling_bounds, sup_norm, theorem_pipeline,
)
from .linalg import InconsistentSystemError, NonUniqueSolutionError
from .multiindex import IndexPair, MultiIndex, enumerate_index_set, in_index_set
from .polycore import (
    AffinePointFrame, MultiPoly, SingularFrameError, differentiate, evaluate,
    even_slice_vanishes, inverse_precompose, poly_arith, precompose_affine,
)

__all__ = [
    "__version__",
    "AffinePointFrame", "DataSet", "GrowthParams", "InconsistentSystemError", "IndexPair",
    "LidstoneBasisElement", "MultiIndex", "MultiPoly", "NoSolutionWithinCapError",
    "NonUniqueSolutionError", "SingularFrameError",
    "cauchy_derivative_bound", "check_growth_condition", "differentiate", "enumerate_index_set",
    "estimate_directional_type", "evaluate", "even_slice_vanishes", "expand", "extract_data",
    "finite_exception_scan", "in_index_set", "inverse_precompose", "kernel_rank_check",
    "lidstone_basis", "poly_arith", "polya_threshold", "precompose_affine", "reconstruct",
    "reconstruct_general", "stirling_bounds", "sup_norm", "theorem_pipeline",
    "univariate_lidstone",
]
