"""seqfpp: finite-truncation toolkit for sequence-space norms, basic-sequence
constants, and affine fixed-point-free self-maps of the coefficient simplex.

Hot kernels run in the compiled extension when built, with a pure-numpy twin
selected automatically at import (see `seqfpp.backend`).
"""

from .backend import BACKEND, available_backends
from .basis import (
    BasicSequenceSpec,
    ConstantEstimate,
    SimplexPoint,
    basis_constant,
    coefficients,
    domination_constant,
    equivalence_constants,
    exemplar_preset,
    from_preset_string,
    project,
    simplex_membership,
    wide_s_constant,
)
from .constructions import (
    AffineMapSpec,
    AlphaSchedule,
    abel_summation_residual,
    alpha_generate,
    alpha_validate,
    convex_basis,
    convex_basis_equivalence_bound,
    interval_renorm,
    map_build,
    monotone_weight_check,
    scaled_basis,
    scaling_equivalence_check,
    separation_lower_bound,
    small_perturbation_sum,
)
from .errors import SeqFppError
from .harness import (
    OrbitRecord,
    fixed_point_solve,
    lipschitz_estimate,
    map_apply,
    min_displacement,
    picard_orbit,
    uniform_lipschitz_probe,
)
from .optim import LinearProgram, SearchReport, lp_solve, max_over_extreme_points, sampled_ascent
from .spaces import CoeffVector, Space, extreme_points, norm_eval

__version__ = "0.1.0"

__all__ = [
    "AffineMapSpec",
    "AlphaSchedule",
    "BACKEND",
    "BasicSequenceSpec",
    "CoeffVector",
    "ConstantEstimate",
    "LinearProgram",
    "OrbitRecord",
    "SearchReport",
    "SeqFppError",
    "SimplexPoint",
    "Space",
    "abel_summation_residual",
    "alpha_generate",
    "alpha_validate",
    "available_backends",
    "basis_constant",
    "coefficients",
    "convex_basis",
    "convex_basis_equivalence_bound",
    "domination_constant",
    "equivalence_constants",
    "exemplar_preset",
    "extreme_points",
    "fixed_point_solve",
    "from_preset_string",
    "interval_renorm",
    "lipschitz_estimate",
    "lp_solve",
    "map_apply",
    "map_build",
    "max_over_extreme_points",
    "min_displacement",
    "monotone_weight_check",
    "norm_eval",
    "picard_orbit",
    "project",
    "sampled_ascent",
    "scaled_basis",
    "scaling_equivalence_check",
    "separation_lower_bound",
    "simplex_membership",
    "small_perturbation_sum",
    "uniform_lipschitz_probe",
    "wide_s_constant",
]
