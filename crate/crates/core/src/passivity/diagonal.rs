use crate::error::{Error, Result};
use crate::modes::{check_betas, fermi_population, ModeSystem};

/// Largest total mode count handled by bitstring scans (`2¹⁶` populations).
pub const MAX_DIAGONAL_MODES: usize = 16;
/// Ergotropy above this counts as non-passive.
pub const ACTIVITY_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-12;

pub(crate) fn check_diagonal_capacity(n_modes: usize) -> Result<()> {
    if n_modes > MAX_DIAGONAL_MODES {
        return Err(Error::Capacity {
            what: "modes in a bitstring scan",
            requested: n_modes,
            max: MAX_DIAGONAL_MODES,
        });
    }
    Ok(())
}

/// A state diagonal in the Fock basis: one population per occupation
/// bitstring, mode 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState {
    populations: Vec<f64>,
    modes: ModeSystem,
}

impl DiagonalState {
    pub fn new(populations: Vec<f64>, modes: ModeSystem) -> Result<Self> {
        let n = modes.n_modes();
        check_diagonal_capacity(n)?;
        if populations.len() != 1 << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                found: populations.len(),
            });
        }
        if let Some(p) = populations.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::Argument(format!("population {p} is not a non-negative number")));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Argument(format!("populations sum to {total}, not 1")));
        }
        Ok(Self { populations, modes })
    }

    /// Product of per-mode Gibbs states at inverse temperatures `betas`.
    pub fn thermal(betas: &[f64], modes: &ModeSystem) -> Result<Self> {
        check_betas(betas, modes)?;
        check_diagonal_capacity(modes.n_modes())?;
        Ok(Self {
            populations: thermal_populations(betas, modes),
            modes: modes.clone(),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.modes.n_modes()
    }

    pub fn modes(&self) -> &ModeSystem {
        &self.modes
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.populations.len()).map(|s| self.modes.bitstring_energy(s)).collect()
    }

    pub fn energy(&self) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(s, p)| p * self.modes.bitstring_energy(s))
            .sum()
    }

    /// `copies`-fold tensor power; copy 0 occupies the most significant bits.
    pub fn tensor_power(&self, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::Argument("tensor power needs at least one copy".into()));
        }
        check_diagonal_capacity(self.n_modes() * copies)?;
        let mut pops = vec![1.0];
        for _ in 0..copies {
            pops = pops
                .iter()
                .flat_map(|a| self.populations.iter().map(move |b| a * b))
                .collect();
        }
        Ok(Self {
            populations: pops,
            modes: self.modes.repeated(copies),
        })
    }
}

pub(crate) fn thermal_populations(betas: &[f64], modes: &ModeSystem) -> Vec<f64> {
    let n = modes.n_modes();
    let excited: Vec<f64> = betas
        .iter()
        .zip(modes.omegas())
        .map(|(b, w)| fermi_population(b * w))
        .collect();
    (0..1usize << n)
        .map(|s| {
            (0..n)
                .map(|k| {
                    if s >> (n - 1 - k) & 1 == 1 {
                        excited[k]
                    } else {
                        1.0 - excited[k]
                    }
                })
                .product()
        })
        .collect()
}

/// `Σ p_s E_s − Σ p↓_k E↑_k`: energy above the passive rearrangement.
pub fn diagonal_ergotropy(state: &DiagonalState) -> f64 {
    level_ergotropy(&state.populations, &state.energies())
}

/// Ergotropy of populations `p` on levels `e`, matched by index.
pub fn level_ergotropy(populations: &[f64], energies: &[f64]) -> f64 {
    let actual: f64 = populations.iter().zip(energies).map(|(p, e)| p * e).sum();
    let mut p = populations.to_vec();
    let mut e = energies.to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    e.sort_by(f64::total_cmp);
    let passive: f64 = p.iter().zip(&e).map(|(p, e)| p * e).sum();
    (actual - passive).max(0.0)
}

/// Smallest `k ≤ k_max` whose `k`-fold tensor power is non-passive.
pub fn activation_number(single_copy: &DiagonalState, k_max: usize) -> Result<Option<usize>> {
    check_diagonal_capacity(single_copy.n_modes() * k_max)?;
    for k in 1..=k_max {
        if diagonal_ergotropy(&single_copy.tensor_power(k)?) > ACTIVITY_TOL {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_examples() {
        assert_eq!(level_ergotropy(&[0.5, 0.3, 0.2], &[0.0, 1.0, 2.0]), 0.0);
        let w = level_ergotropy(&[0.2, 0.3, 0.5], &[0.0, 1.0, 2.0]);
        assert!((w - 0.6).abs() < 1e-15);
        assert_eq!(level_ergotropy(&[0.5, 0.5], &[0.0, 1.0]), 0.0);
    }

    #[test]
    fn tensor_power_layout() {
        let m = ModeSystem::new(vec![1.0]).unwrap();
        let s = DiagonalState::new(vec![0.7, 0.3], m).unwrap();
        let sq = s.tensor_power(2).unwrap();
        let expect = [0.49, 0.21, 0.21, 0.09];
        for (a, b) in sq.populations().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(sq.n_modes(), 2);
        assert!(s.tensor_power(17).is_err());
    }

    #[test]
    fn thermal_is_never_activated() {
        let m = ModeSystem::new(vec![1.3]).unwrap();
        let th = DiagonalState::thermal(&[0.8], &m).unwrap();
        assert_eq!(activation_number(&th, 5).unwrap(), None);
        assert!(activation_number(&th, 17).is_err());
    }

    #[test]
    fn rejects_bad_populations() {
        let m = ModeSystem::new(vec![1.0]).unwrap();
        assert!(DiagonalState::new(vec![0.7, 0.2], m.clone()).is_err());
        assert!(DiagonalState::new(vec![1.1, -0.1], m.clone()).is_err());
        assert!(DiagonalState::new(vec![1.0], m).is_err());
    }
}
