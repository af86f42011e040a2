"""Robustness analysis of dissipatively coupled qubits in the Bloch
representation: Lindblad models as real linear systems, steady-state
entanglement and fidelity measures, stability margins, structured
perturbations with transfer-matrix shift bounds, and rank-correlation
concordance across sweeps."""

from .analysis import (
    RobustnessRecord,
    SteadyState,
    TransferMatrixEval,
    concurrence,
    d_vector,
    fidelity,
    hash_inverse,
    propagate,
    purity,
    spectrum,
    stability_margin,
    steady_state,
    steady_state_shift_and_bound,
    transfer_matrix,
)
from .bloch import (
    BlochGenerator,
    HermitianBasis,
    assemble,
    bloch_to_density,
    build_basis,
    c_vector,
    density_to_bloch,
    hamiltonian_generator,
    lindblad_generator,
    validate_density_matrix,
)
from .errors import (
    ConfigError,
    InternalConsistencyError,
    LindblochError,
    NonUniqueSteadyStateError,
    NumericalError,
    PoleError,
    RangeViolationError,
)
from .model import (
    BARE_PARAMS,
    PERTURBATIONS,
    ModelParams,
    PerturbationStructure,
    build_bloch,
    hamiltonian,
    jump_operators,
    perturb,
    structure_matrix,
)
from .stats import ConcordanceReport, concordance_suite, kendall_tau
from .sweep import (
    DEFAULT_GRIDS,
    GridSpec,
    SweepSpec,
    run_concordance,
    run_sweep,
    steady_state_report,
    sweep_records,
)

__version__ = "0.1.0"
