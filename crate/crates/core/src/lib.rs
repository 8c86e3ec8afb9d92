//! Work extraction from non-interacting fermionic modes.
//!
//! Two representations of a state of `n` fermionic modes live side by side:
//!
//! * [`fock`]: dense `2ⁿ × 2ⁿ` density operators built through the
//!   Jordan–Wigner construction. Exact but capped at `n ≤ 8`; used as the
//!   reference for everything else.
//! * [`covariance`]: the real antisymmetric `2n × 2n` Majorana covariance
//!   matrix `Γ_kl = (i/2)⟨[c_k, c_l]⟩`, with `c_k² = 𝟙` and mode-interleaved
//!   ordering `(c₁, c₂ | c₃, c₄ | …)`.
//!
//! On top of these, [`gaussian`] implements orthogonal (Gaussian) phase-space
//! transformations, the two-mode energy-minimization pipeline and Gaussian
//! ergotropy, while [`passivity`] handles the combinatorial passivity and
//! activation analysis of diagonal states. [`cli`] is the command-line front
//! end.

pub mod cli;
pub mod covariance;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod modes;
pub mod passivity;

pub use covariance::{CanonicalForm, CovarianceMatrix};
pub use error::{Error, Result};
pub use fock::{FockOperator, FockState};
pub use gaussian::{MinimizationTrace, OrthogonalTransform};
pub use modes::ModeSystem;
pub use passivity::{ActivationReport, DiagonalState};
