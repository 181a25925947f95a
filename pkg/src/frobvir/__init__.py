"""Euler equations on the dual of Frobenius-algebra-valued Virasoro algebras.

Exact symbolic verification of the cocycle and bihamiltonian identities, and
pseudo-spectral simulation of the resulting multi-component flows.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    AlgebraError,
    DegenerateTrace,
    FrobeniusAlgebra,
    NotInvertible,
    builtin_R,
    builtin_Z2,
    builtin_Zl,
    make_algebra,
)
from .euler import (
    EulerEquation,
    InertiaSpec,
    Kind,
    build_euler_equation,
    classify,
    conserved_functionals,
    format_componentwise,
    hamiltonian_H1,
    hamiltonian_H2,
    rhs_is_hamiltonian_J2,
)
from .report import IdentityResult, VerificationReport
from .solver import (
    GridField,
    NonzeroMeanHS,
    NumericalBlowup,
    RunConfig,
    SingularSymbol,
    SolverState,
    TimeSeries,
    initial_state,
    invert_inertia,
    run,
    spectral_derivative,
    step,
)
