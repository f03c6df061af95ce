"""Exact calculus for canonical star-quiver algebras and their tube categories."""

from .core import (
    CanonicalType,
    Classification,
    DimVector,
    PreconditionError,
    VerificationError,
    a_dim,
    canonical_type,
    classify,
    delta_interval,
    delta_invariant,
    e_interval,
    e_vector,
    euler_form,
    h_vector,
    homogeneous_multiplicity,
    in_P,
    in_Q,
    in_R,
    is_tame,
    threshold_N,
    unit_vector,
    unflatten,
    zero_vector,
)
from .candecomp import (
    CanonicalDecomposition,
    IntervalClass,
    ad,
    admissible_intervals,
    all_classes,
    canonical_decomposition,
    inside_multiplicity,
    lies_inside,
)
from .tubes import (
    RegularPart,
    TubeClass,
    TypeAModule,
    enumerate_regular,
    enumerate_type_a,
    euler_type_a,
    ext1_tube,
    hom_regular,
    hom_tube,
    hom_type_a,
    hom_type_a_modules,
    regular_part,
    tau,
    to_type_a,
    tube_class,
    tube_dim_vector,
    type_a_module,
    verify_cw_bound,
)
from .matrixrep import (
    MatrixModule,
    ZMembership,
    build_homogeneous,
    build_tube_module,
    direct_sum,
    hom_space_dim,
    is_valid_module,
    module_from_doc,
    module_to_doc,
    orbit_dim,
    validate_module,
    z_membership,
    zero_maps_module,
)
from .strata import (
    CiVerdict,
    MarginsReport,
    ReductionStep,
    StratumIndex,
    StratumReport,
    ZReport,
    ad_split,
    build_report,
    ci_check,
    enumerate_strata,
    generator_count,
    in_c_prime,
    inequality_report,
    iter_c3,
    min_quantity_c3,
    reduce_q,
    reduce_to_c3,
    reduce_X,
    staircase_decomposition,
    stratum_dim,
    stratum_quantity,
    z_dimension,
)

__version__ = "0.1.0"
