"""Two-qubit entanglement quantification and verification.

Exact measures on density matrices (covariance sum g, concurrence, the
local-uncertainty variance sum, the nonlocal variance measure k), a
polarization-optics layer for preparing and transforming states, a
coincidence-count data layer with Poisson error propagation, linear-inversion
tomography, and a CLI that ties them together.
"""

from .algebra import (
    apply_local_unitary,
    expectation_value,
    pauli_operator,
    pure_to_density,
    random_density,
    random_pure,
    random_unitary,
    tensor_product,
    validate_density,
)
from .counts import (
    FULL_SETTINGS,
    KMODE_SETTINGS,
    CountsTable,
    EstimatedValue,
    Setting,
    SimConfig,
    data_file,
    g_from_counts,
    joint_expectation,
    k_from_counts,
    marginal_expectation,
    parse_counts_csv,
    simulate_counts,
    write_counts_csv,
)
from .measures import (
    GResult,
    KObservables,
    KResult,
    LurSpec,
    SchmidtCoeffs,
    concurrence,
    concurrence_from_g,
    covariance,
    covariance_matrix,
    g_from_concurrence,
    g_measure,
    k_measure,
    k_observables,
    k_separable_bound,
    lur_sum,
    mixed_state_bounds,
    pauli_expectation_matrix,
    pauli_lur_spec,
)
from .optics import (
    BasisLabel,
    ChannelSpec,
    WaveplateSpec,
    basis_projector,
    joint_projector,
    phase_damping,
    prepare_antiparallel,
    prepare_parallel,
    waveplate_unitary,
)
from .tomography import (
    fidelity,
    linear_inversion,
    pauli_vector_from_counts,
    project_to_physical,
    reconstruct,
    tomo_concurrence,
    trace_distance,
)

__version__ = "0.1.0"
