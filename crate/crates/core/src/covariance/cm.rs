use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::modes::{check_betas, ModeSystem};

/// Largest `|Γ + Γᵀ|` entry accepted as antisymmetric.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Slack on the singular-value bound `σ_max(Γ) ≤ 1`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Majorana covariance matrix of an `n`-mode state, `2n × 2n`, real and
/// antisymmetric, mode-interleaved `(c₁, c₂ | c₃, c₄ | …)`.
///
/// Construction validates antisymmetry and the physicality bound `iΓ ≤ 𝟙`
/// (all singular values at most one).
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: DMatrix<f64>,
}

impl CovarianceMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        validate(entries)
    }

    pub fn from_row_slice(dim: usize, values: &[f64]) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: values.len(),
            });
        }
        validate(DMatrix::from_row_slice(dim, dim, values))
    }

    /// Skips validation; callers guarantee the result of an orthogonal
    /// conjugation of a valid matrix.
    pub(crate) fn from_trusted(entries: DMatrix<f64>) -> Self {
        let n_modes = entries.nrows() / 2;
        Self { n_modes, entries }
    }

    /// Direct sum of `[[0, mⱼ], [−mⱼ, 0]]` blocks.
    pub fn block_diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for (j, &m) in values.iter().enumerate() {
            g[(2 * j, 2 * j + 1)] = m;
            g[(2 * j + 1, 2 * j)] = -m;
        }
        validate(g)
    }

    /// All modes empty.
    pub fn vacuum(n_modes: usize) -> Self {
        let mut g = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for j in 0..n_modes {
            g[(2 * j, 2 * j + 1)] = 1.0;
            g[(2 * j + 1, 2 * j)] = -1.0;
        }
        Self::from_trusted(g)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    /// `Γ_{2j−1, 2j}` of mode `j` (0-based), i.e. `1 − 2⟨n̂ⱼ⟩`.
    pub fn block_value(&self, mode: usize) -> f64 {
        self.entries[(2 * mode, 2 * mode + 1)]
    }

    pub fn max_singular_value(&self) -> f64 {
        max_singular_value(&self.entries)
    }

    pub(crate) fn check_modes(&self, modes: &ModeSystem) -> Result<()> {
        if modes.n_modes() != self.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: modes.n_modes(),
            });
        }
        Ok(())
    }
}

fn max_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Checks shape, antisymmetry and physicality of a raw matrix.
pub fn validate(entries: DMatrix<f64>) -> Result<CovarianceMatrix> {
    let (r, c) = entries.shape();
    if r != c {
        return Err(Error::Argument(format!("covariance matrix must be square, got {r}×{c}")));
    }
    if r == 0 || r % 2 != 0 {
        return Err(Error::Argument(format!(
            "covariance matrix dimension must be even and positive, got {r}"
        )));
    }
    if entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::Argument("covariance matrix has non-finite entries".into()));
    }
    let max_deviation = (&entries + entries.transpose()).amax();
    if max_deviation >= ANTISYMMETRY_TOL {
        return Err(Error::Asymmetric { max_deviation });
    }
    let max_singular_value = max_singular_value(&entries);
    if max_singular_value > 1.0 + PHYSICALITY_TOL {
        return Err(Error::Unphysical { max_singular_value });
    }
    Ok(CovarianceMatrix {
        n_modes: r / 2,
        entries,
    })
}

/// Covariance matrix of a product of thermal modes:
/// `⊕ [[0, λᵢ], [−λᵢ, 0]]`, `λᵢ = tanh(βᵢωᵢ/2)`.
pub fn thermal_cm(betas: &[f64], modes: &ModeSystem) -> Result<CovarianceMatrix> {
    check_betas(betas, modes)?;
    let values: Vec<f64> = betas
        .iter()
        .zip(modes.omegas())
        .map(|(b, w)| if b.is_infinite() { 1.0 } else { (b * w / 2.0).tanh() })
        .collect();
    CovarianceMatrix::block_diagonal(&values)
}

/// `E(Γ) = Σⱼ (ωⱼ/2)(1 − Γ_{2j−1,2j})`.
///
/// With `c² = 𝟙` this is `Σ ωⱼ⟨n̂ⱼ⟩`: zero on the vacuum and `ω` on a
/// filled mode.
pub fn energy_cm(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<f64> {
    cm.check_modes(modes)?;
    Ok(modes
        .omegas()
        .iter()
        .enumerate()
        .map(|(j, w)| 0.5 * w * (1.0 - cm.block_value(j)))
        .sum())
}

/// `‖ΓΓᵀ − 𝟙‖_max < tol`.
pub fn is_pure(cm: &CovarianceMatrix, tol: f64) -> bool {
    purity_defect(cm) < tol
}

pub fn purity_defect(cm: &CovarianceMatrix) -> f64 {
    let g = cm.entries();
    let dim = g.nrows();
    (g * g.transpose() - DMatrix::<f64>::identity(dim, dim)).amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let vac = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let g = validate(vac).unwrap();
        assert!(is_pure(&g, 1e-12));

        let too_big = DMatrix::from_row_slice(2, 2, &[0.0, 1.5, -1.5, 0.0]);
        match validate(too_big) {
            Err(Error::Unphysical { max_singular_value }) => {
                assert!((max_singular_value - 1.5).abs() < 1e-12)
            }
            other => panic!("expected unphysical, got {other:?}"),
        }

        let zero = validate(DMatrix::zeros(4, 4)).unwrap();
        assert!(!is_pure(&zero, 1e-10));
    }

    #[test]
    fn validate_rejects_shapes_and_asymmetry() {
        assert!(validate(DMatrix::zeros(3, 3)).is_err());
        assert!(validate(DMatrix::zeros(2, 4)).is_err());
        let sym = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]);
        assert!(matches!(validate(sym), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn thermal_cm_values() {
        let m = ModeSystem::new(vec![1.0, 2.0, 1.0]).unwrap();
        let g = thermal_cm(&[f64::INFINITY, 1.0, 0.0], &m).unwrap();
        assert_eq!(g.block_value(0), 1.0);
        assert!((g.block_value(1) - 0.761_594_155_955_765).abs() < 1e-12);
        assert_eq!(g.block_value(2), 0.0);
        assert!(thermal_cm(&[1.0], &m).is_err());
    }

    #[test]
    fn energy_examples() {
        let w = ModeSystem::new(vec![2.5, 0.7]).unwrap();
        assert_eq!(energy_cm(&CovarianceMatrix::vacuum(2), &w).unwrap(), 0.0);
        let filled = CovarianceMatrix::block_diagonal(&[-1.0]).unwrap();
        let one = ModeSystem::new(vec![1.0]).unwrap();
        assert_eq!(energy_cm(&filled, &one).unwrap(), 1.0);
        let th = thermal_cm(&[1.0], &one).unwrap();
        assert!((energy_cm(&th, &one).unwrap() - 0.268_941_421_369_995).abs() < 1e-12);
    }

    #[test]
    fn pure_two_mode_form() {
        let a: f64 = 0.6;
        let e = (1.0 - a * a).sqrt();
        let g = CovarianceMatrix::from_row_slice(
            4,
            &[
                0.0, a, 0.0, -e, //
                -a, 0.0, -e, 0.0, //
                0.0, e, 0.0, a, //
                e, 0.0, -a, 0.0,
            ],
        )
        .unwrap();
        assert!(is_pure(&g, 1e-12));
        let th = thermal_cm(&[1.0, 1.0], &ModeSystem::uniform(2, 1.0).unwrap()).unwrap();
        assert!(!is_pure(&th, 1e-10));
    }
}
