"""State discrimination bounds and certificates for quantum-like GPT models."""

from .cones import (
    GeneratorCone,
    GptModel,
    Measurement,
    MembershipVerdict,
    PSDCone,
    SeparableCone,
    State,
    Status,
    cone_membership,
    dual_membership,
    interior_point,
    outcome_distribution,
    psd_model,
    sep_model,
    validate_measurement,
    validate_state,
)
from .discrimination import (
    AdvantageCertificate,
    BoundReport,
    DiscriminationInstance,
    check_violation,
    construct_advantage,
    distinguishability_norm,
    equality_condition,
    error_probability,
    general_bound,
    helstrom_bound,
    helstrom_optimal_measurement,
    measurement_spectral_stats,
    sep_example,
)
from .embedding import (
    AbstractModel,
    IsoMap,
    contract_into_quantum,
    detect_beyond_quantum,
    embed_model,
    find_nonpsd_dual_effect,
    probability_preservation_check,
)

__version__ = "0.1.0"
