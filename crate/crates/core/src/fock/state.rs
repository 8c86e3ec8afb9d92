use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::operators::{check_capacity, hamiltonian, FockOperator};
use crate::error::{Error, Result};
use crate::modes::{check_betas, fermi_population, ModeSystem};

/// Tolerance used when validating a density operator.
pub const STATE_TOL: f64 = 1e-12;

/// A density operator on the Fock space of `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_modes: usize,
    matrix: DMatrix<Complex64>,
}

impl FockState {
    /// Validates hermiticity, unit trace and positivity to [`STATE_TOL`].
    pub fn new(n_modes: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(n_modes, matrix, STATE_TOL)
    }

    pub fn with_tolerance(n_modes: usize, matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let op = FockOperator::from_matrix(n_modes, matrix)?;
        let matrix = op.into_matrix();
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > tol {
            return Err(Error::Argument(format!("density matrix is not Hermitian ({herm:e})")));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::Argument(format!("density matrix has trace {trace}")));
        }
        let state = Self { n_modes, matrix };
        let min_eig = state.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::Argument(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_trusted(n_modes: usize, matrix: DMatrix<Complex64>) -> Self {
        Self { n_modes, matrix }
    }

    /// Diagonal state with the given populations over occupation bitstrings.
    pub fn diagonal(n_modes: usize, populations: &[f64]) -> Result<Self> {
        check_capacity(n_modes)?;
        let dim = 1usize << n_modes;
        if populations.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: populations.len(),
            });
        }
        let diag = DVector::from_iterator(dim, populations.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(n_modes, DMatrix::from_diagonal(&diag))
    }

    /// The pure basis state `|bitstring⟩⟨bitstring|`.
    pub fn basis(n_modes: usize, bitstring: usize) -> Result<Self> {
        check_capacity(n_modes)?;
        let dim = 1usize << n_modes;
        if bitstring >= dim {
            return Err(Error::Argument(format!(
                "bitstring {bitstring} out of range for {n_modes} modes"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(bitstring, bitstring)] = Complex64::new(1.0, 0.0);
        Ok(Self { n_modes, matrix: m })
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        Self::basis(n_modes, 0)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues of the density operator, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// `UρU†`.
    pub fn evolve(&self, u: &FockOperator) -> Result<Self> {
        if u.n_modes() != self.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: u.n_modes(),
            });
        }
        let m = u.matrix() * &self.matrix * u.matrix().adjoint();
        Ok(Self {
            n_modes: self.n_modes,
            matrix: m,
        })
    }

    /// `max |[ρ, P]|` for the total parity `P = Πₖ(𝟙 − 2n̂ₖ)`.
    pub fn parity_violation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                if (i.count_ones() + j.count_ones()) % 2 == 1 {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    fn check_modes(&self, modes: &ModeSystem) -> Result<()> {
        if modes.n_modes() != self.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: modes.n_modes(),
            });
        }
        Ok(())
    }
}

/// Product of single-mode Gibbs states `τ(βᵢ)`; `β = +∞` gives the ground state.
pub fn thermal_state(betas: &[f64], modes: &ModeSystem) -> Result<FockState> {
    check_betas(betas, modes)?;
    let n = modes.n_modes();
    check_capacity(n)?;
    let excited: Vec<f64> = betas
        .iter()
        .zip(modes.omegas())
        .map(|(b, w)| fermi_population(b * w))
        .collect();
    let dim = 1usize << n;
    let populations: Vec<f64> = (0..dim)
        .map(|j| {
            excited
                .iter()
                .enumerate()
                .map(|(k, &p)| if j >> (n - 1 - k) & 1 == 1 { p } else { 1.0 - p })
                .product()
        })
        .collect();
    FockState::diagonal(n, &populations)
}

/// `Tr[Hρ]`.
pub fn energy(state: &FockState, modes: &ModeSystem) -> Result<f64> {
    state.check_modes(modes)?;
    Ok((0..state.dim())
        .map(|j| state.matrix[(j, j)].re * modes.bitstring_energy(j))
        .sum())
}

fn sorted_levels(state: &FockState, modes: &ModeSystem) -> (Vec<f64>, Vec<f64>) {
    let mut p = state.eigenvalues();
    p.sort_by(|a, b| b.total_cmp(a));
    let mut e: Vec<f64> = (0..state.dim()).map(|j| modes.bitstring_energy(j)).collect();
    e.sort_by(|a, b| a.total_cmp(b));
    (p, e)
}

/// Maximal unitarily extractable work `Tr[Hρ] − Σₖ pₖ↓ Eₖ↑`.
pub fn ergotropy(state: &FockState, modes: &ModeSystem) -> Result<f64> {
    let e = energy(state, modes)?;
    let (p, levels) = sorted_levels(state, modes);
    let passive: f64 = p.iter().zip(&levels).map(|(p, e)| p * e).sum();
    Ok((e - passive).max(0.0))
}

/// Passive iff the ergotropy vanishes and ρ commutes with `H`, both to `tol`.
pub fn is_passive(state: &FockState, modes: &ModeSystem, tol: f64) -> Result<bool> {
    if ergotropy(state, modes)? > tol {
        return Ok(false);
    }
    let dim = state.dim();
    for i in 0..dim {
        for j in 0..dim {
            let gap = modes.bitstring_energy(i) - modes.bitstring_energy(j);
            if (state.matrix[(i, j)] * gap).norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Von Neumann entropy `−Tr[ρ ln ρ]` (natural log, `0 ln 0 = 0`).
pub fn entropy(state: &FockState) -> f64 {
    state
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// `F = E − T·S`.
pub fn free_energy(state: &FockState, modes: &ModeSystem, temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::Argument(format!("temperature must be positive, got {temperature}")));
    }
    Ok(energy(state, modes)? - temperature * entropy(state))
}

/// `W = Tr[H(ρ − UρU†)]`; negative when `U` charges the system.
pub fn work_extracted(state: &FockState, u: &FockOperator, modes: &ModeSystem) -> Result<f64> {
    let after = state.evolve(u)?;
    Ok(energy(state, modes)? - energy(&after, modes)?)
}

/// `max |[ρ, H]|`.
pub fn commutator_with_hamiltonian(state: &FockState, modes: &ModeSystem) -> Result<f64> {
    state.check_modes(modes)?;
    let h = hamiltonian(modes)?;
    let c = state.matrix() * h.matrix() - h.matrix() * state.matrix();
    Ok(c.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
