"""Exact binary and quaternary subdivision schemes.

Conversion of dual even-point binary schemes into quaternary schemes,
refinement of control polygons, Hölder regularity bounds and polynomial
precision/generation degrees, all in exact rational arithmetic.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .analysis import (
    NotAnalyzable,
    NotConvergent,
    PrecisionReport,
    RegularityPair,
    RegularityReport,
    degree_of_generation,
    degree_of_precision,
    holder_regularity,
    regularity_pair_report,
    smoothing_factorization,
    transfer_matrices,
)
from .catalog import PAIRS, Catalog, UnknownScheme, catalog_get, load_catalog
from .conversion import (
    ConversionError,
    ConversionResult,
    NotDual,
    WrongArity,
    WrongParity,
    convert,
    convert_even,
    convert_odd,
    convert_via_symbol,
    expand_rule_text,
)
from .numeric import (
    LaurentPolynomial,
    SmallMatrix,
    infinity_norm,
    laurent_multiply,
    laurent_substitute_power,
    spectral_radius,
    try_divide,
)
from .refinement import Polygon, RefinementTrace, TooFewPoints, displacement_bound, refine, refine_once
from .scheme import Mask, Stencil, SubdivisionScheme, check_convergence_condition, stencils

__all__ = [name for name in dir() if not name.startswith("_")]
