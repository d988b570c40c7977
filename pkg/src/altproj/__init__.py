"""Joint subspace angles and the dynamics of alternating projections."""

from .angles import (
    AngleReport,
    InclinationBudget,
    InclinationEstimate,
    ProductSpacePair,
    angle_report,
    configuration_constant,
    dixmier_number,
    friedrichs_number,
    gramian_sample,
    inclination,
    pairwise_dixmier_reduced,
    pairwise_friedrichs,
    prefix_friedrichs,
    product_space,
)
from .corpus import FamilySpec, common_core, example3, random_system, tilted_pairs, two_lines
from .diagnostics import (
    BoundCheck,
    BoundReport,
    DichotomyVerdict,
    bound_report,
    cor_main_check,
    dehu_check,
    dichotomy_report,
    eq_norm_check,
    eq_qua_check,
    estimc_check,
    kw_check,
    remark_product_check,
)
from .dynamics import (
    ConvergenceTrace,
    IndexSchedule,
    SlowProbeResult,
    SlowSequence,
    cyclic_operator,
    iterate_vector,
    operator_error_norms,
    random_product_norm,
    reduced_min_modulus,
    slow_vector_probe,
)
from .numerics import (
    DEFAULT_TOL,
    NumericalFailure,
    TolerancePolicy,
    operator_norm,
    orthonormalize,
    principal_eigenspace,
    restricted_min_singular,
)
from .subspace import (
    Subspace,
    SubspaceSystem,
    intersection,
    intersection_of,
    orthogonal_complement,
    projector,
    reduce_mod_intersection,
)

__version__ = "0.1.0"
