"""Bounds and receiver analysis for optical memory readout with entangled light.

The package compares the best error probability any classical (coherent-state)
transmitter can reach against quantum Chernoff-bound guarantees for an
EPR (two-mode squeezed vacuum) transmitter probing a reflectivity-encoded
memory cell, and analyzes a concrete sub-optimal Bell-measurement receiver.
A truncated Fock-space oracle cross-validates every Gaussian closed form.
"""

from .analysis import (
    Axis,
    GainResult,
    IdealThresholdPoint,
    PureLossCoefficients,
    ScanCell,
    ScanGrid,
    binary_entropy,
    find_min_bandwidth,
    ideal_gain_expr,
    ideal_threshold_curve,
    info_gain,
    scan_plane,
    threshold_energy,
)
from .bell import (
    GTestResult,
    MonteCarloResult,
    ReceiverConfig,
    TestStatistics,
    conditional_variance,
    monte_carlo_error,
    optimize_g_test,
    p_test,
    regularized_upper_gamma,
    test_quantile,
)
from .classical import (
    BoundValue,
    FidelityParams,
    classical_bound,
    coherent_output_fidelity,
    fidelity_params,
)
from .errors import (
    CutoffTooSmallError,
    ModelRegimeError,
    NumericalError,
    OracleAccuracyError,
)
from .fock import (
    FockDensity,
    apply_channel_fock,
    coherent_fock,
    conditional_output_fock,
    fidelity_fock,
    helstrom_error_fock,
    loss_kraus_defect,
    overlap_fock,
    state_moments,
    suggested_cutoff,
    tmsv_fock,
)
from .gaussian import (
    CellSpec,
    GaussianChannel,
    GaussianState,
    TransmitterSpec,
    apply_bipartite,
    check_physical,
    compose,
    conditional_output_blocks,
    conditional_output_cm,
    identity_channel,
    make_attenuator,
    make_thermal_noise,
    make_tmsv,
    standard_form_blocks,
    symplectic_eigenvalues,
    symplectic_form,
)
from .quantum import (
    AsymptoticBounds,
    OverlapResult,
    asymptotic_bounds,
    bhattacharyya_bound,
    chernoff_bound,
    gaussian_overlap,
    ideal_chernoff_closed,
)

__version__ = "0.1.0"
