"""Worked systems: qubit-SET circuit, oscillator ladders, uncoupled subsystems."""

from .composite import CompositeReport, forgetful_residual, forgetful_superop, uncoupled_composite
from .ladders import (
    Ladder,
    LadderAlgebraReport,
    coherent_state,
    harmonic_oscillator,
    ladder_superop_algebra,
    ladder_superops,
    stark_ladder,
    window_residual,
)
from .qubit_set import (
    BLOCH_LABELS,
    FIVE_BLOCK,
    TEN_BLOCK,
    VANISHING_TRIPLES,
    CancellationReport,
    CircuitParams,
    CorrelatorSpec,
    EffParams,
    ParameterError,
    all_correlator_specs,
    analytic_eigenvectors,
    analytic_spectrum,
    bloch_liouvillian,
    bloch_permutation,
    block_projector,
    build_heff,
    cancellation_report,
    charge_conjugation_symmetry,
    circuit_to_coefficients,
    correlator_analytic,
    correlator_numeric,
    default_times,
    five_block_projector,
    pauli_coefficients,
    pauli_liouvillian,
    qubit_liouvillian,
    qubit_marginal_trajectory,
    ten_block_projector,
)
