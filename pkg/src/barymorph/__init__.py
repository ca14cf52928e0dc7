"""Barycentric (Tutte/Floater) drawings and morphs of planar and torus graphs."""
from .combmap import (
    CombinatorialMap,
    CoverPatch,
    PlanarDrawing,
    TorusDrawing,
    normalize_isotopy,
    universal_cover_patch,
)
from .errors import (
    ConditionViolated,
    DegenerateInputError,
    DomainError,
    MorphError,
    NotIsotopicError,
    StructuralError,
    UnrealizableError,
    ValidationFailure,
)
from .linsys import (
    LaplacianSystem,
    assemble_planar,
    assemble_torus,
    floater_drawing,
    left_null_vector,
    least_squares_residual,
    realizability_residual,
    solve_floater,
)
from .planar import MorphSchedule, convexify, morph, morph_convex, nested_squares
from .torus import (
    MorphableWeights,
    TorusMorph,
    edge_tweak_displacement_check,
    edge_tweak_realizable,
    is_morphable,
    morphable_scaling,
    torus_morph_build,
    torus_morph_build_nonconvex,
    torus_morph_eval,
)
from .validation import (
    ValidationReport,
    convex_faces,
    crossing_free,
    morph_frames_valid,
    torus_crossing_free,
)
from .weights import interpolate, mean_value_weights, per_vertex_normalize

__version__ = "0.1.0"

__all__ = [
    "CombinatorialMap",
    "CoverPatch",
    "PlanarDrawing",
    "TorusDrawing",
    "normalize_isotopy",
    "universal_cover_patch",
    "ConditionViolated",
    "DegenerateInputError",
    "DomainError",
    "MorphError",
    "NotIsotopicError",
    "StructuralError",
    "UnrealizableError",
    "ValidationFailure",
    "LaplacianSystem",
    "assemble_planar",
    "assemble_torus",
    "floater_drawing",
    "left_null_vector",
    "least_squares_residual",
    "realizability_residual",
    "solve_floater",
    "MorphableWeights",
    "TorusMorph",
    "edge_tweak_displacement_check",
    "edge_tweak_realizable",
    "is_morphable",
    "morphable_scaling",
    "torus_morph_build",
    "torus_morph_build_nonconvex",
    "torus_morph_eval",
    "ValidationReport",
    "convex_faces",
    "crossing_free",
    "morph_frames_valid",
    "torus_crossing_free",
    "MorphSchedule",
    "convexify",
    "morph",
    "morph_convex",
    "nested_squares",
    "interpolate",
    "mean_value_weights",
    "per_vertex_normalize",
]
