from .registry import DeadPhotonError, PairRegistry, PhotonRef
from .states import (
    ALL_PREPARATIONS,
    BASES,
    DECOY_STATES,
    BellSet,
    MeasBasis,
    UnitaryCode,
    density_average,
    equal_up_to_phase,
    fidelity,
    is_density_matrix,
    letter_bit,
    member_name,
    prepare_decoy,
    sign_bit,
    state_of,
)
from .statevector import ATOL, MAX_QUBITS, StateVector
from .tables import (
    DOCUMENTED_REPRESENTATION_MISMATCHES,
    PRINTED_REPRESENTATIONS,
    PRINTED_TRANSITIONS,
    RepresentationNotListed,
    check_representations,
    check_transitions,
    representation_mismatches,
    representation_of,
    transition,
)

__all__ = [
    "ALL_PREPARATIONS", "ATOL", "BASES", "DECOY_STATES", "MAX_QUBITS",
    "BellSet", "DeadPhotonError", "MeasBasis", "PairRegistry", "PhotonRef",
    "StateVector", "UnitaryCode", "RepresentationNotListed",
    "DOCUMENTED_REPRESENTATION_MISMATCHES", "PRINTED_REPRESENTATIONS", "PRINTED_TRANSITIONS",
    "check_representations", "check_transitions", "density_average", "equal_up_to_phase",
    "fidelity", "is_density_matrix", "letter_bit", "member_name", "prepare_decoy",
    "representation_mismatches", "representation_of", "sign_bit", "state_of", "transition",
]
