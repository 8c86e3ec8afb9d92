//! Passivity and activation of states diagonal in the Fock basis.

mod diagonal;
mod witness;

pub use diagonal::{
    activation_number, diagonal_ergotropy, level_ergotropy, DiagonalState, ACTIVITY_TOL,
    MAX_DIAGONAL_MODES,
};
pub use witness::{
    activation_report, activation_work, bitstring, nonpassivity_witness, protocol_check,
    ActivationReport, ConditionStatus, ProtocolCondition,
};
