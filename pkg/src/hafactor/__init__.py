"""Hybrid classical/adiabatic-quantum factorization of biprimes.

The classical stage builds and simplifies the bitwise factoring equations of a
composite number; the quantum stage (a statevector simulation) solves whatever
system survives by adiabatic evolution and decodes the ground states back into
the factors.
"""

from .polynomial import (
    EncodingError,
    PseudoBooleanPolynomial,
    Variable,
    VarKind,
    bounds,
    evaluate,
    exact_range,
    multiply,
    substitute,
)
from .equations import (
    BitSplit,
    EquationSystem,
    FactoringEquation,
    absolute_carry_bound,
    build_equations,
    enumerate_splits,
    matrix_view,
    true_carries,
)
from .simplify import (
    BoundTable,
    InfeasibleSplit,
    ResidualSystem,
    init_bounds,
    propagate,
    refine_bounds,
    solve_residual_exhaustively,
)
from .hamiltonian import (
    CarryEncoding,
    HamiltonianSpec,
    NothingToSolve,
    PauliTerm,
    QubitCapExceeded,
    QubitMap,
    build_bitwise_hamiltonian,
    build_peng_hamiltonian,
    encode_carry,
    initial_matrix,
    to_matrix,
)
from .adiabatic import (
    AdiabaticTrace,
    Schedule,
    SpectrumTrace,
    adiabatic_time_estimate,
    evolve,
    fidelity,
    interpolate,
    prepare_initial_ground,
    spectrum_trace,
    step_unitary,
)
from .pipeline import (
    FactorResult,
    Method,
    NotFactorable,
    PipelineConfig,
    brute_force_factor,
    decode,
    factor,
)

__version__ = "0.1.0"
