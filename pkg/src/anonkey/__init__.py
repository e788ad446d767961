"""Anonymous-key quantum cryptography: simulation and security analysis.

The carrier of a secret here is a quantum state the encrypting party does
not know: keys are distributed by modulating unknown ring states and
returning them in secret orders, identity is proven by unwinding a stored
unknown phase, and every interception strategy is scored by whether the
re-prepared estimate survives verification.
"""

from .states import (
    ATOL,
    BlochVector,
    CircleStateIndex,
    DensityOperator,
    Ensemble,
    bloch_to_density,
    circle_phase,
    circle_state,
    circle_state_at,
    ensemble_mixture,
    hermitian_eig,
    overlap,
    partial_trace,
    rotate_circle,
    six_state_ensemble,
    sphere_grid_ensemble,
    sphere_state,
    tensor,
    uniform_circle_ensemble,
)
from .detection import (
    DetectionReport,
    Povm,
    acceptance_probability,
    certify_optimality,
    correct_id_probability,
    evaluate_detection,
    helstrom_binary,
    random_basis_strategy,
    square_root_measurement,
    uniform_guess_povm,
)
from .coding import cecc_decode, cecc_encode, hamming74_decode, hamming74_encode, privacy_amplify
from .protocol import (
    ChannelModel,
    OrderTable,
    SessionConfig,
    SessionTranscript,
    apply_channel,
    order_permute,
    order_unpermute,
    run_ake_session,
)
from .adversary import (
    AttackReport,
    binary_entropy,
    impersonation_order_pmf,
    joint_attack_factorization_check,
    opaque_bound,
    sequential_strategy_pc,
    translucent_accounting,
    two_copy_states,
)
from .aki import (
    AkiChallenge,
    SecretCirclePhase,
    aki_challenge,
    aki_impersonation,
    aki_respond,
    aki_verify,
    run_honest_aki_round,
)
from .coherent import (
    CoherentState,
    PhaseDistribution,
    canonical_phase_density,
    canonical_phase_pa,
    coherent_overlap_mag,
    heterodyne_pa,
    heterodyne_resend_pa,
    heterodyne_sample,
    two_mode_overlap_mag,
)
from .harness import ResultTable, derive_seeds, spawn_trial_streams

__version__ = "0.1.0"
