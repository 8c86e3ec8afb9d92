//! Covariance matrices: validation, thermal states, energy, canonical form
//! and the two-mode standard form.

mod canonical;
mod cm;
mod standard_form;
pub mod text;

pub use canonical::{canonical_form, pfaffian_sign, CanonicalForm, ZERO_VALUE_TOL};
pub use cm::{
    energy_cm, is_pure, purity_defect, thermal_cm, validate, CovarianceMatrix, ANTISYMMETRY_TOL,
    PHYSICALITY_TOL,
};
pub use standard_form::{standard_form_defect, standard_form_params, standard_form_two_mode};
