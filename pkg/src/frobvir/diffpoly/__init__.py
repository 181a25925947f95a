from .core import (
    AlgDiffPoly,
    DiffPoly,
    alg_variational_derivative,
    component_names,
    euler_operator,
    is_total_derivative,
    total_x_derivative,
)
from .operators import DiffOperator, OperatorMatrix, symmetric_mult
from .verify import verify_bihamiltonian, verify_cocycle
from .virasoro import (
    DualElement,
    VirasoroElement,
    bracket_X,
    coadjoint_rhs,
    cocycle_integrand,
    expand_components,
    pairing,
    pairing_density,
    pointwise_commutator,
    poisson_apply_J1,
    poisson_apply_J2,
)
from .pairs import CASES, example_case, inertia_preimage, verify_example_pairs
