"""cpsemi: generators of completely positive semigroups on matrix algebras.

Heisenberg-picture conventions throughout: maps act on observables, "unital"
means P(1) = 1 and a generator of a unital semigroup satisfies L(1) = 0.
"""

from .errors import (
    ConstraintViolated,
    CpsemiError,
    DimensionMismatch,
    LogBranch,
    NotCCP,
    NotCP,
    NotHermitian,
    NotHermiticityPreserving,
    NotMember,
    NotPSD,
    OwnerMismatch,
    ParseError,
)
from .generator import (
    GaugeRelation,
    GklsForm,
    decompose,
    dominates,
    extract_gauge,
    gauge_shift,
    hamiltonian_lindblad,
    rank,
    rebuild,
    same_generator,
    split_k,
)
from .numerics import DEFAULT_TOL, Tolerances
from .opspace import MetricOperatorSpace, space_from_cp_map, space_from_kraus
from .semigroup import (
    CovarianceKernel,
    Unit,
    covariance,
    covariance_estimate,
    covariance_kernel,
    evolve,
    gram_dimension,
    index,
    make_unit,
    product_system_check,
    sample_units,
    space_at,
    unit_matrix,
    verify_unit,
)
from .superop import (
    ad_superop,
    apply_superop,
    choi_to_kraus,
    choi_to_superop,
    identity_superop,
    is_completely_positive,
    is_hermiticity_preserving,
    is_unital,
    kraus_to_choi,
    kraus_to_superop,
    left_right_superop,
    superop_to_choi,
    unvec,
    vec,
)
from .symbols import (
    block_positivity_witness,
    check_block_positivity,
    is_conditionally_cp,
    recover_linear_form,
    symbol,
    symbol_table,
    symbols_equal,
)

__version__ = "0.1.0"
