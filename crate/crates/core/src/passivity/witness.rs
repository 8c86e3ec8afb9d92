use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;

use super::diagonal::{
    activation_number, check_diagonal_capacity, thermal_populations, DiagonalState,
};
use crate::error::{Error, Result};
use crate::modes::{check_betas, ModeSystem};

/// Relative slack below which two energies or two Boltzmann weights tie.
const TIE: f64 = 1e-12;

/// `Σ sᵢβᵢωᵢ`, tracking modes at zero temperature separately so that
/// `∞ − ∞` never arises. States occupying any such mode have zero weight.
#[derive(Debug, Clone, Copy)]
struct Weight {
    frozen: bool,
    finite: f64,
}

struct Scan {
    n: usize,
    energies: Vec<f64>,
    weights: Vec<Weight>,
    populations: Vec<f64>,
    energy_tie: f64,
    weight_tie: f64,
}

impl Scan {
    fn new(betas: &[f64], modes: &ModeSystem) -> Self {
        let n = modes.n_modes();
        let dim = 1usize << n;
        let bw: Vec<f64> = betas.iter().zip(modes.omegas()).map(|(b, w)| b * w).collect();
        let weights = (0..dim)
            .map(|s| {
                let mut w = Weight {
                    frozen: false,
                    finite: 0.0,
                };
                for (k, x) in bw.iter().enumerate() {
                    if s >> (n - 1 - k) & 1 == 1 {
                        if x.is_infinite() {
                            w.frozen = true;
                        } else {
                            w.finite += x;
                        }
                    }
                }
                w
            })
            .collect();
        let finite_scale: f64 = bw.iter().filter(|x| x.is_finite()).sum();
        Self {
            n,
            energies: (0..dim).map(|s| modes.bitstring_energy(s)).collect(),
            weights,
            populations: thermal_populations(betas, modes),
            energy_tie: TIE * modes.omegas().iter().sum::<f64>().max(1.0),
            weight_tie: TIE * finite_scale.max(1.0),
        }
    }

    /// `p(s′) > p(s)` strictly, i.e. `w(s) > w(s′)`.
    fn more_populated(&self, s_prime: usize, s: usize) -> bool {
        let (a, b) = (self.weights[s], self.weights[s_prime]);
        match (a.frozen, b.frozen) {
            (true, true) | (false, true) => false,
            (true, false) => true,
            (false, false) => a.finite > b.finite + self.weight_tie,
        }
    }

    fn is_witness(&self, s: usize, s_prime: usize) -> bool {
        self.energies[s_prime] > self.energies[s] + self.energy_tie && self.more_populated(s_prime, s)
    }

    fn gain(&self, s: usize, s_prime: usize) -> f64 {
        (self.energies[s_prime] - self.energies[s]) * (self.populations[s_prime] - self.populations[s])
    }
}

/// Prefers higher gain, then the lexicographically smaller pair.
fn better(a: &(f64, usize, usize), b: &(f64, usize, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (a.1, a.2) < (b.1, b.2),
    }
}

/// A pair of bitstrings `(s, s′)` with `E(s′) > E(s)` but `p(s′) > p(s)`
/// in the thermal product at `betas`: a population inversion.
///
/// Returns the lexicographically first pair of maximal swap gain, or `None`
/// for a passive product. Near-ties in energy or weight are not inversions.
pub fn nonpassivity_witness(betas: &[f64], modes: &ModeSystem) -> Result<Option<(usize, usize)>> {
    check_betas(betas, modes)?;
    check_diagonal_capacity(modes.n_modes())?;
    let scan = Scan::new(betas, modes);
    let dim = 1usize << scan.n;
    let best = (0..dim)
        .into_par_iter()
        .filter_map(|s| {
            let mut local: Option<(f64, usize, usize)> = None;
            for s_prime in 0..dim {
                if scan.is_witness(s, s_prime) {
                    let cand = (scan.gain(s, s_prime), s, s_prime);
                    if local.as_ref().is_none_or(|l| better(&cand, l)) {
                        local = Some(cand);
                    }
                }
            }
            local
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a });
    Ok(best.map(|(_, s, s_prime)| (s, s_prime)))
}

fn check_bitstring(s: usize, n_modes: usize) -> Result<()> {
    if s >> n_modes != 0 {
        return Err(Error::Argument(format!(
            "bitstring {s:b} does not fit in {n_modes} modes"
        )));
    }
    Ok(())
}

/// Work from exchanging `|s⟩ ↔ |s′⟩` in the thermal product:
/// `(E_{s′} − E_s)(p_{s′} − p_s)`.
pub fn activation_work(betas: &[f64], modes: &ModeSystem, swap: (usize, usize)) -> Result<f64> {
    check_betas(betas, modes)?;
    let n = modes.n_modes();
    check_diagonal_capacity(n)?;
    check_bitstring(swap.0, n)?;
    check_bitstring(swap.1, n)?;
    let populations = thermal_populations(betas, modes);
    let (s, t) = swap;
    Ok((modes.bitstring_energy(t) - modes.bitstring_energy(s)) * (populations[t] - populations[s]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Satisfied,
    Violated,
    Vacuous,
}

impl fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Satisfied => "satisfied",
            Self::Violated => "violated",
            Self::Vacuous => "vacuous",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolCondition {
    pub name: &'static str,
    pub status: ConditionStatus,
    pub detail: String,
}

/// Formats `s` as an `n`-character occupation string, mode 0 first.
pub fn bitstring(s: usize, n_modes: usize) -> String {
    (0..n_modes)
        .map(|k| if s >> (n_modes - 1 - k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Evaluates the four requirements of a single-swap activation protocol.
///
/// 1. Neither state is fully empty or fully occupied.
/// 2. The swap moves occupation both ways: some flipped mode empties and
///    some fills.
/// 3. On the flipped modes, the inverse temperatures of the modes that
///    fill sum to less than those of the modes that empty.
/// 4. Modes left untouched play no role (always satisfied; listed).
pub fn protocol_check(swap: (usize, usize), betas: &[f64]) -> Result<Vec<ProtocolCondition>> {
    let n = betas.len();
    if n == 0 {
        return Err(Error::Argument("protocol check needs at least one mode".into()));
    }
    check_diagonal_capacity(n)?;
    check_bitstring(swap.0, n)?;
    check_bitstring(swap.1, n)?;
    let (s, t) = swap;
    let full = (1usize << n) - 1;
    let bit = |x: usize, k: usize| x >> (n - 1 - k) & 1 == 1;
    let flipped: Vec<usize> = (0..n).filter(|&k| bit(s, k) != bit(t, k)).collect();
    let untouched: Vec<usize> = (0..n).filter(|&k| bit(s, k) == bit(t, k)).collect();

    let extremes = [s, t].iter().any(|&x| x == 0 || x == full);
    let boundary = ProtocolCondition {
        name: "no all-empty or all-occupied state",
        status: if extremes {
            ConditionStatus::Violated
        } else {
            ConditionStatus::Satisfied
        },
        detail: format!("{} <-> {}", bitstring(s, n), bitstring(t, n)),
    };

    let fills: Vec<usize> = flipped.iter().copied().filter(|&k| !bit(s, k)).collect();
    let empties: Vec<usize> = flipped.iter().copied().filter(|&k| bit(s, k)).collect();
    let exchange = ProtocolCondition {
        name: "occupied and empty modes exchanged",
        status: if flipped.is_empty() {
            ConditionStatus::Vacuous
        } else if !fills.is_empty() && !empties.is_empty() {
            ConditionStatus::Satisfied
        } else {
            ConditionStatus::Violated
        },
        detail: format!("filled {:?}, emptied {:?}", one_based(&fills), one_based(&empties)),
    };

    let beta_fill: f64 = fills.iter().map(|&k| betas[k]).sum();
    let beta_empty: f64 = empties.iter().map(|&k| betas[k]).sum();
    let temperature = ProtocolCondition {
        name: "inverse-temperature sum inequality",
        status: if flipped.is_empty() {
            ConditionStatus::Vacuous
        } else if beta_fill < beta_empty {
            ConditionStatus::Satisfied
        } else {
            ConditionStatus::Violated
        },
        detail: format!("sum beta filled = {beta_fill}, sum beta emptied = {beta_empty}"),
    };

    let spectators = ProtocolCondition {
        name: "untouched modes irrelevant",
        status: ConditionStatus::Satisfied,
        detail: format!("untouched {:?}", one_based(&untouched)),
    };
    Ok(vec![boundary, exchange, temperature, spectators])
}

fn one_based(ks: &[usize]) -> Vec<usize> {
    ks.iter().map(|k| k + 1).collect()
}

/// Summary of a passivity and activation query on a thermal product.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationReport {
    /// The single copy has no population inversion.
    pub passive: bool,
    /// Inversion found on `k_used` copies, as bitstrings over all their modes.
    pub witness: Option<(usize, usize)>,
    /// Swap work of the witness; zero without one.
    pub work_gain: f64,
    /// Copies needed for the witness; zero when none was found.
    pub k_used: usize,
}

/// Looks for an inversion on `k = 1, …, k_max` copies of the thermal
/// product at `betas`.
pub fn activation_report(betas: &[f64], modes: &ModeSystem, k_max: usize) -> Result<ActivationReport> {
    check_betas(betas, modes)?;
    check_diagonal_capacity(modes.n_modes() * k_max.max(1))?;
    let single = DiagonalState::thermal(betas, modes)?;
    let k = activation_number(&single, k_max)?;
    let passive = k != Some(1);
    let Some(k) = k else {
        return Ok(ActivationReport {
            passive,
            witness: None,
            work_gain: 0.0,
            k_used: 0,
        });
    };
    let betas_k = betas.repeat(k);
    let modes_k = modes.repeated(k);
    let witness = nonpassivity_witness(&betas_k, &modes_k)?;
    let work_gain = match witness {
        Some(w) => activation_work(&betas_k, &modes_k, w)?,
        None => 0.0,
    };
    Ok(ActivationReport {
        passive,
        witness,
        work_gain,
        k_used: if witness.is_some() { k } else { 0 },
    })
}
