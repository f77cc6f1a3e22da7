"""Non-Markovian single-qubit dephasing: telegraph noise (RTN) and NMD channels,
with the information measures evaluated along their evolution."""

from .channels import (
    ChannelPoint,
    KrausSet,
    NmdParams,
    RegimeTag,
    RtnParams,
    apply_channel,
    classify_regime,
    dephased_state,
    nmd_critical_points,
    nmd_decoherence_rate,
    nmd_kappa,
    nmd_kraus,
    nmd_omega,
    rtn_decoherence_rate,
    rtn_kraus,
    rtn_memory_factor,
)
from .errors import (
    CompletenessError,
    DomainError,
    InputError,
    QFacetsError,
    SingularityError,
    UnsupportedDimensionError,
    ValidityError,
)
from .infomeasures import Ensemble, avg_gate_fidelity, gate_fidelity_dephased, holevo, holevo_dephased_closed, holevo_nmd_closed
from .qfi import numeric_flow, positive_flow_intervals, qfi_flow_nmd, qfi_flow_rtn, qfi_from_bloch, qfi_phi_closed, qfi_theta_closed
from .qstate import (
    BlochVector,
    DensityMatrix,
    Spectrum,
    beta_balance,
    bloch_of,
    coherence_l1,
    density_of,
    mixedness,
    pure_qubit,
    purity,
    spectrum,
    vn_entropy_bits,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelPoint",
    "KrausSet",
    "NmdParams",
    "RegimeTag",
    "RtnParams",
    "apply_channel",
    "classify_regime",
    "dephased_state",
    "nmd_critical_points",
    "nmd_decoherence_rate",
    "nmd_kappa",
    "nmd_kraus",
    "nmd_omega",
    "rtn_decoherence_rate",
    "rtn_kraus",
    "rtn_memory_factor",
    "CompletenessError",
    "DomainError",
    "InputError",
    "QFacetsError",
    "SingularityError",
    "UnsupportedDimensionError",
    "ValidityError",
    "Ensemble",
    "avg_gate_fidelity",
    "gate_fidelity_dephased",
    "holevo",
    "holevo_dephased_closed",
    "holevo_nmd_closed",
    "numeric_flow",
    "positive_flow_intervals",
    "qfi_flow_nmd",
    "qfi_flow_rtn",
    "qfi_from_bloch",
    "qfi_phi_closed",
    "qfi_theta_closed",
    "BlochVector",
    "DensityMatrix",
    "Spectrum",
    "beta_balance",
    "bloch_of",
    "coherence_l1",
    "density_of",
    "mixedness",
    "pure_qubit",
    "purity",
    "spectrum",
    "vn_entropy_bits",
]
