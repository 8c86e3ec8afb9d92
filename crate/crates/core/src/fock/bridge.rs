//! Conversions between dense Fock states and covariance matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operators::{check_capacity, majorana_monomials, Monomial};
use super::state::FockState;
use crate::covariance::{canonical_form, CovarianceMatrix};
use crate::error::{Error, Result};

const IMAG_TOL: f64 = 1e-10;

/// `Γ_kl = (i/2)⟨[c_k, c_l]⟩`.
pub fn density_to_cm(state: &FockState) -> Result<CovarianceMatrix> {
    let n = state.n_modes();
    check_capacity(n)?;
    let c = majorana_monomials(n);
    let mut gamma = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for k in 0..2 * n {
        for l in (k + 1)..2 * n {
            // k ≠ l: c_l c_k = −c_k c_l, so (i/2)⟨[c_k,c_l]⟩ = i⟨c_k c_l⟩
            let value = Complex64::new(0.0, 1.0) * c[k].times(&c[l]).trace_with(state.matrix());
            if value.im.abs() > IMAG_TOL {
                return Err(Error::Consistency(format!(
                    "Γ[{k},{l}] has imaginary part {:e}",
                    value.im
                )));
            }
            gamma[(k, l)] = value.re;
            gamma[(l, k)] = -value.re;
        }
    }
    CovarianceMatrix::new(gamma)
}

/// The Gaussian state with covariance matrix `cm`:
/// `ρ = 2⁻ⁿ Πⱼ (𝟙 + i mⱼ c̃_{2j−1} c̃_{2j})` with `c̃ = O c` and
/// `OΓOᵀ = ⊕ [[0, mⱼ], [−mⱼ, 0]]`.
pub fn cm_to_density(cm: &CovarianceMatrix) -> Result<FockState> {
    let n = cm.n_modes();
    check_capacity(n)?;
    let canon = canonical_form(cm)?;
    let o = canon.transform.matrix();
    let c = majorana_monomials(n);
    let products: Vec<Vec<Monomial>> = c
        .iter()
        .map(|ck| c.iter().map(|cl| ck.times(cl)).collect())
        .collect();
    let dim = 1usize << n;
    let mut rho = DMatrix::<Complex64>::identity(dim, dim);
    for (j, &m) in canon.values.iter().enumerate() {
        let (p, q) = (2 * j, 2 * j + 1);
        let mut factor = DMatrix::<Complex64>::identity(dim, dim);
        for k in 0..2 * n {
            for l in 0..2 * n {
                let w = o[(p, k)] * o[(q, l)];
                if w != 0.0 {
                    products[k][l].add_to(&mut factor, Complex64::new(0.0, m * w));
                }
            }
        }
        rho *= factor;
    }
    rho /= Complex64::new(dim as f64, 0.0);
    // enforce exact hermiticity against rounding in the product
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(FockState::from_trusted(n, rho))
}
