//! Gaussian operations on covariance matrices.
//!
//! The phase-space matrices here act as `Γ ↦ OΓOᵀ`. For a Fock unitary
//! `U` with Heisenberg action `U†c_kU = Σ_l O_kl c_l`, the state `UρU†` has
//! covariance matrix `OΓOᵀ`. The block forms of [`rotation_matrix`],
//! [`squeeze_matrix`] and [`beamsplit_matrix`] at angle `t` are the
//! transposes of those Heisenberg actions, i.e. they describe the unitaries
//! at angle `−t`.

mod ergotropy;
mod pipeline;
mod search;
pub(crate) mod transform;

pub use ergotropy::{
    gaussian_ergotropy, gaussian_min_energy, is_gaussian_passive, theorem1_passive,
    MAX_GAUSSIAN_MODES, PASSIVITY_TOL,
};
pub use pipeline::{
    gaussian_minimize, optimal_beamsplit, optimal_squeeze, MinimizationTrace, Stage, PATTERN_TOL,
};
pub use search::random_orthogonal_search;
pub use transform::{
    apply, beamsplit_matrix, rotation_matrix, squeeze_matrix, OrthogonalTransform,
    ORTHOGONALITY_TOL,
};
