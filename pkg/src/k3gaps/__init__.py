"""Numerical verification of gap directions on the ample-cone boundary
of (2,2,2) surfaces via iterated commutators of Vieta involutions."""

from .words import (
    Word,
    WordError,
    abstract_generators,
    commutator,
    derived_level,
    klein_image,
    level_prefix,
    schreier_generators,
    substitute,
    tree_path_count,
    verify_fast_ramification,
)
from .surface import (
    PRESETS,
    PerturbationSpec,
    SurfaceCoefficients,
    SurfacePoint,
    apply_word,
    apply_word_batch,
    evaluate,
    gradient,
    sample_points,
    sphere,
    vieta_involution,
    wehler_example,
)
from .germs import (
    BallSpec,
    Chart,
    ContractionParams,
    GermMap,
    check_seed_condition,
    commutator_contraction_check,
    derived_decay_table,
    find_epsilon,
    sup_deviation,
)
from .lattice import (
    GRAM,
    IsometryMatrix,
    boundary_limit,
    canonical_path,
    classify,
    involution_matrix,
    lambda_sequence,
    pairing,
    word_matrix,
)
from .experiments import (
    ScenarioConfig,
    build_chart_cover,
    mass_gap_estimate,
    run_gap_theorem,
    run_real_locus_theorem,
)

__version__ = "0.1.0"
