"""Dynamical-Zeno screening of qubits from a zero-temperature reservoir.

A stored qubit (atomic or photonic) is protected from an absorbing
environment by routing all dissipation through an auxiliary "casing" mode
that is frequently erased back to its ground state.  This package bundles

* dense density-matrix linear algebra (:mod:`zenoscreen.quantum`),
* a step-doubling Runge-Kutta Lindblad integrator (:mod:`zenoscreen.lindblad`),
* closed-form solutions for the free and screened qubit (:mod:`zenoscreen.analytic`),
* the segmented erase-and-evolve protocols (:mod:`zenoscreen.protocols`),
* sweep/report commands behind the ``zeno-screen`` CLI (:mod:`zenoscreen.reporting`).
"""

from .quantum import (
    Coefficients,
    DensityMatrix,
    HilbertSpace,
    Operator,
    PhaseConsistencyError,
    QubitParams,
    Tolerances,
    extract_coefficients,
    fidelity_with_pure,
    partial_trace,
    qubit_state,
    tensor,
)
from .lindblad import (
    IntegrationError,
    IntegratorConfig,
    LindbladModel,
    evolve,
    evolve_expm,
    lindblad_rhs,
)
from .analytic import (
    BranchKind,
    FreeDecayParams,
    ScreenParams,
    classify_branch,
    fidelity,
    free_decay_coeffs,
    minimal_erasures,
    screened_coeffs,
    screened_fidelity,
)
from .protocols import (
    AtomCavityModel,
    FieldScreenModel,
    InternalHamiltonian,
    ProtocolTrace,
    TruncationLeakError,
    erase_casing,
    run_atom_screening,
    run_field_screening,
    xi_moment_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AtomCavityModel",
    "BranchKind",
    "Coefficients",
    "DensityMatrix",
    "FieldScreenModel",
    "FreeDecayParams",
    "HilbertSpace",
    "IntegrationError",
    "IntegratorConfig",
    "InternalHamiltonian",
    "LindbladModel",
    "Operator",
    "PhaseConsistencyError",
    "ProtocolTrace",
    "QubitParams",
    "ScreenParams",
    "Tolerances",
    "TruncationLeakError",
    "classify_branch",
    "erase_casing",
    "evolve",
    "evolve_expm",
    "extract_coefficients",
    "fidelity",
    "fidelity_with_pure",
    "free_decay_coeffs",
    "lindblad_rhs",
    "minimal_erasures",
    "partial_trace",
    "qubit_state",
    "run_atom_screening",
    "run_field_screening",
    "screened_coeffs",
    "screened_fidelity",
    "tensor",
    "xi_moment_probe",
]
