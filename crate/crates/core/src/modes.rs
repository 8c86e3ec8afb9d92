use crate::error::{Error, Result};

/// Frequencies of `n` non-interacting fermionic modes, `H = Σ ωᵢ aᵢ†aᵢ`.
///
/// The order of the frequencies is the mode order used by every
/// representation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSystem {
    omegas: Vec<f64>,
}

impl ModeSystem {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::Argument("a mode system needs at least one mode".into()));
        }
        if let Some(w) = omegas.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Argument(format!(
                "mode frequencies must be finite and positive, got {w}"
            )));
        }
        Ok(Self { omegas })
    }

    /// `n` modes of the same frequency.
    pub fn uniform(n: usize, omega: f64) -> Result<Self> {
        Self::new(vec![omega; n])
    }

    pub fn n_modes(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn omega(&self, mode: usize) -> f64 {
        self.omegas[mode]
    }

    /// Energy of the Fock basis state with occupation bitstring `index`
    /// (mode 0 is the most significant bit).
    pub fn bitstring_energy(&self, index: usize) -> f64 {
        let n = self.n_modes();
        self.omegas
            .iter()
            .enumerate()
            .filter(|(k, _)| index >> (n - 1 - k) & 1 == 1)
            .map(|(_, w)| w)
            .sum()
    }

    /// The system formed by `copies` side-by-side copies of this one.
    pub fn repeated(&self, copies: usize) -> Self {
        Self {
            omegas: self.omegas.repeat(copies),
        }
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_modes() {
            return Err(Error::Dimension {
                expected: self.n_modes(),
                found: len,
            });
        }
        Ok(())
    }
}

/// Checks a list of inverse temperatures: positive, `+∞` allowed.
pub(crate) fn check_betas(betas: &[f64], modes: &ModeSystem) -> Result<()> {
    modes.check_len(betas.len())?;
    if let Some(b) = betas.iter().find(|b| b.is_nan() || **b < 0.0) {
        return Err(Error::Argument(format!(
            "inverse temperatures must be non-negative, got {b}"
        )));
    }
    Ok(())
}

/// Excited-state population `e^{-x}/(1+e^{-x})` of a mode with `x = βω`.
pub fn fermi_population(beta_omega: f64) -> f64 {
    if beta_omega.is_infinite() {
        return 0.0;
    }
    let t = (-beta_omega).exp();
    t / (1.0 + t)
}
