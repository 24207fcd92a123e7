"""Truncated Fock-space numerics for photon creation from accelerated measurements.

A uniformly accelerated observer sees the inertial vacuum as a thermal state;
projecting its photon number in the accelerating frame and carrying the
collapse back to the inertial frame leaves real, entangled photons behind.
This package simulates that pipeline in sparse truncated Fock space, with
every closed-form state cross-checked against an independent operator-algebra
route.
"""

from .bogoliubov import (
    DEFAULT_EPSILON_MAX,
    DEFAULT_LOSS_BUDGET,
    AccelerationParams,
    analytic_sector_state,
    bogoliubov_image,
    epsilon_of,
    inertial_image_of_rindler_vacuum,
    k_coefficient,
    min_omega_for_cap,
    required_truncation,
    sector_tail_bound,
    transport_measured_sector,
    transport_thermal_sector,
    unruh_sector_state,
)
from .entanglement import (
    DENSE_BASIS_CAP,
    DensityMatrix,
    EntanglementReport,
    concurrence_two_qubit,
    density_matrix,
    partial_transpose,
    ppt_report,
    schmidt_entropy_bits,
)
from .errors import (
    ConfigurationError,
    DomainError,
    PrecisionError,
    ResourceError,
    UnruhSimError,
    ZeroProbabilityError,
)
from .fock import (
    PRUNE_THRESHOLD,
    Branch,
    FockState,
    Frame,
    Ladder,
    ModeId,
    OperatorPolynomial,
    apply_ladder,
    apply_polynomial,
    create_vacuum,
    fidelity,
    inner_product,
    minkowski_mode,
    minkowski_pair,
    number_expectation,
    reorder_modes,
    rindler_mode,
    rindler_pair,
    tensor,
)
from .measurement import (
    P_FLOOR,
    RNG_ALGORITHM,
    MeasurementRecord,
    project_number,
    project_total_number,
    sample_outcome,
    thermal_outcome_distribution,
)
from .protocols import (
    ProtocolResult,
    Scenario,
    energy_proxy,
    epr_postselect,
    eq8_amplitudes,
    signal_transmission,
    single_frequency,
    two_frequency,
)

__version__ = "0.1.0"

__all__ = [
    "AccelerationParams",
    "Branch",
    "ConfigurationError",
    "DENSE_BASIS_CAP",
    "DEFAULT_EPSILON_MAX",
    "DEFAULT_LOSS_BUDGET",
    "DensityMatrix",
    "DomainError",
    "EntanglementReport",
    "FockState",
    "Frame",
    "Ladder",
    "MeasurementRecord",
    "ModeId",
    "OperatorPolynomial",
    "P_FLOOR",
    "PRUNE_THRESHOLD",
    "PrecisionError",
    "ProtocolResult",
    "RNG_ALGORITHM",
    "ResourceError",
    "Scenario",
    "UnruhSimError",
    "ZeroProbabilityError",
    "analytic_sector_state",
    "apply_ladder",
    "apply_polynomial",
    "bogoliubov_image",
    "concurrence_two_qubit",
    "create_vacuum",
    "density_matrix",
    "energy_proxy",
    "epr_postselect",
    "epsilon_of",
    "eq8_amplitudes",
    "fidelity",
    "inner_product",
    "inertial_image_of_rindler_vacuum",
    "k_coefficient",
    "min_omega_for_cap",
    "minkowski_mode",
    "minkowski_pair",
    "number_expectation",
    "partial_transpose",
    "ppt_report",
    "project_number",
    "project_total_number",
    "reorder_modes",
    "required_truncation",
    "rindler_mode",
    "rindler_pair",
    "sample_outcome",
    "schmidt_entropy_bits",
    "sector_tail_bound",
    "signal_transmission",
    "single_frequency",
    "tensor",
    "thermal_outcome_distribution",
    "transport_measured_sector",
    "transport_thermal_sector",
    "two_frequency",
    "unruh_sector_state",
]
