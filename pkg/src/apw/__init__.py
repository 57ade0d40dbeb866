"""Exact apolarity computations for subcanonical curves on rational surfaces."""

from .linalg import BACKEND, InputError, Matrix, StructuralError, kernel_basis, rank, solve
from .poly import (LinearFormPoint, Poly, apolar_apply, catalecticant, format_poly, pairing,
                   parse_poly, power_of_linear_form)
from .cox import cox_basis, cox_multiply_and_reduce
from .apolar import (ApolarIdeal, ArtinianGorenstein, FermatVerdict, detect_fermat,
                     dual_socle_generator, fermat_perp, hilbert_function, ideal_of_points,
                     is_apolar_scheme, minimal_generators, perp, quotient_by_perp,
                     waring_from_points, waring_rank_lower_bound)
from .surfaces import (DivisorClass, SurfaceEmbedding, adjunction_genus, build_embedding,
                       canonical_class, curve_invariants, intersect, line_bundle_cohomology,
                       subcanonical_class, surface_ideal_piece)
from .pipeline import (ArtinianReduction, EmbeddedCurve, PipelineReport, UndeterminedError,
                       alpha_map, artinian_reduction, curve_ideal_piece, curve_on_scroll, gamma_cut,
                       normality_check, plane_curve, rational_cut, verify_theorem)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "InputError",
    "Matrix",
    "StructuralError",
    "kernel_basis",
    "rank",
    "solve",
    "LinearFormPoint",
    "Poly",
    "apolar_apply",
    "catalecticant",
    "format_poly",
    "pairing",
    "parse_poly",
    "power_of_linear_form",
    "cox_basis",
    "cox_multiply_and_reduce",
    "ApolarIdeal",
    "ArtinianGorenstein",
    "FermatVerdict",
    "detect_fermat",
    "dual_socle_generator",
    "fermat_perp",
    "hilbert_function",
    "ideal_of_points",
    "is_apolar_scheme",
    "minimal_generators",
    "perp",
    "quotient_by_perp",
    "waring_from_points",
    "waring_rank_lower_bound",
    "DivisorClass",
    "SurfaceEmbedding",
    "adjunction_genus",
    "build_embedding",
    "canonical_class",
    "curve_invariants",
    "intersect",
    "line_bundle_cohomology",
    "subcanonical_class",
    "surface_ideal_piece",
    "ArtinianReduction",
    "EmbeddedCurve",
    "PipelineReport",
    "UndeterminedError",
    "alpha_map",
    "artinian_reduction",
    "curve_ideal_piece",
    "curve_on_scroll",
    "gamma_cut",
    "normality_check",
    "plane_curve",
    "rational_cut",
    "verify_theorem",
]
