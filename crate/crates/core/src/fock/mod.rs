//! Exact Fock-space reference: Jordan–Wigner operators and dense density
//! matrices for up to [`MAX_FOCK_MODES`] modes.

mod bridge;
mod operators;
mod state;

pub use bridge::{cm_to_density, density_to_cm};
pub use operators::{
    activation_unitary_3mode, annihilator, extract_orthogonal_action, fock_gaussian_unitary,
    hamiltonian, majorana_ops, swap_unitary, FockOperator, GaussianKind, MAX_FOCK_MODES,
};
pub use state::{
    commutator_with_hamiltonian, energy, entropy, ergotropy, free_energy, is_passive,
    thermal_state, work_extracted, FockState, STATE_TOL,
};
