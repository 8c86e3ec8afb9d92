use super::pipeline::PATTERN_TOL;
use crate::covariance::{
    canonical_form, energy_cm, standard_form_params, standard_form_two_mode, CovarianceMatrix,
    ZERO_VALUE_TOL,
};
use crate::error::{Error, Result};
use crate::modes::ModeSystem;

/// Largest mode count accepted by [`gaussian_ergotropy`].
pub const MAX_GAUSSIAN_MODES: usize = 8;
/// Default classifier tolerance.
pub const PASSIVITY_TOL: f64 = 1e-8;

/// Arrangement of Williamson values over modes: mode `j` receives
/// `signs[j] · |m_{source[j]}|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub energy: f64,
    pub source: Vec<usize>,
    pub signs: Vec<f64>,
}

fn descending(xs: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[b].total_cmp(&xs[a]));
    idx
}

/// Minimum energy over signed permutations of the signed block values
/// `values` (as returned by the canonical form), keeping the parity of
/// negative signs fixed unless some value vanishes.
///
/// Rearrangement makes the all-positive, sorted pairing optimal; under odd
/// parity exactly one mode takes a negative value and the rest stay sorted,
/// so trying every (mode, value) pair for that slot is exhaustive.
pub(crate) fn optimal_assignment(values: &[f64], omegas: &[f64]) -> Assignment {
    let n = values.len();
    let nu: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let void = nu.iter().any(|&v| v < ZERO_VALUE_TOL);
    let odd = !void && values.iter().filter(|v| **v < 0.0).count() % 2 == 1;
    let w_order = descending(omegas);
    let nu_order = descending(&nu);

    let energy_of = |source: &[usize], signs: &[f64]| -> f64 {
        (0..n)
            .map(|j| 0.5 * omegas[j] * (1.0 - signs[j] * nu[source[j]]))
            .sum()
    };

    let sorted_pairing = |skip_mode: Option<usize>, skip_value: Option<usize>| -> Vec<usize> {
        let mut source = vec![usize::MAX; n];
        let modes = w_order.iter().filter(|&&j| Some(j) != skip_mode);
        let vals = nu_order.iter().filter(|&&k| Some(k) != skip_value);
        for (&j, &k) in modes.zip(vals) {
            source[j] = k;
        }
        source
    };

    if !odd {
        let source = sorted_pairing(None, None);
        let signs = vec![1.0; n];
        return Assignment {
            energy: energy_of(&source, &signs),
            source,
            signs,
        };
    }

    let mut best: Option<Assignment> = None;
    for j in 0..n {
        for k in 0..n {
            let mut source = sorted_pairing(Some(j), Some(k));
            source[j] = k;
            let mut signs = vec![1.0; n];
            signs[j] = -1.0;
            let energy = energy_of(&source, &signs);
            if best.as_ref().is_none_or(|b| energy < b.energy) {
                best = Some(Assignment { energy, source, signs });
            }
        }
    }
    best.expect("n ≥ 1")
}

/// Lowest energy reachable from `cm` by proper orthogonal conjugation.
pub fn gaussian_min_energy(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<f64> {
    cm.check_modes(modes)?;
    if cm.n_modes() > MAX_GAUSSIAN_MODES {
        return Err(Error::Capacity {
            what: "modes for Gaussian ergotropy",
            requested: cm.n_modes(),
            max: MAX_GAUSSIAN_MODES,
        });
    }
    let canon = canonical_form(cm)?;
    Ok(optimal_assignment(&canon.values, modes.omegas()).energy)
}

/// `E(Γ) − E*`, the work extractable with Gaussian unitaries.
pub fn gaussian_ergotropy(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<f64> {
    let floor = gaussian_min_energy(cm, modes)?;
    Ok((energy_cm(cm, modes)? - floor).max(0.0))
}

pub fn is_gaussian_passive(cm: &CovarianceMatrix, modes: &ModeSystem, tol: f64) -> Result<bool> {
    Ok(gaussian_ergotropy(cm, modes)? <= tol)
}

/// Structural two-mode test.
///
/// * `ω_a ≠ ω_b`: no inter-mode correlations (Williamson form) and the
///   higher-frequency mode carries the larger value, `λ_high ≥ |λ_low|`.
/// * `ω_a = ω_b`: in standard form `e₁ + e₂ = 0` and `a + b ≥ 0`.
pub fn theorem1_passive(cm: &CovarianceMatrix, modes: &ModeSystem, tol: f64) -> Result<bool> {
    cm.check_modes(modes)?;
    if cm.n_modes() != 2 {
        return Err(Error::Argument(format!("expected 2 modes, got {}", cm.n_modes())));
    }
    let (wa, wb) = (modes.omega(0), modes.omega(1));
    if (wa - wb).abs() <= PATTERN_TOL * wa.max(wb) {
        let (_, sf) = standard_form_two_mode(cm)?;
        let (a, b, e1, e2) = standard_form_params(&sf);
        return Ok((e1 + e2).abs() <= tol && a + b >= -tol);
    }
    let g = cm.entries();
    let coupling = g.view((0, 2), (2, 2)).amax();
    let (la, lb) = (cm.block_value(0), cm.block_value(1));
    let (high, low) = if wb > wa { (lb, la) } else { (la, lb) };
    Ok(coupling <= tol && high >= low.abs() - tol)
}
