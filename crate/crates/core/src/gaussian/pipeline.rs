use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;

use super::ergotropy::{optimal_assignment, Assignment};
use super::transform::{apply, beamsplit_matrix, squeeze_matrix, OrthogonalTransform};
use crate::covariance::{
    canonical_form, energy_cm, standard_form_defect, standard_form_params, standard_form_two_mode,
    CovarianceMatrix,
};
use crate::error::{Error, Result};
use crate::modes::ModeSystem;

/// Structural zeros must vanish to this level.
pub const PATTERN_TOL: f64 = 1e-10;
/// Energies closer than this are treated as tied between branches.
const TIE: f64 = 1e-14;

/// One step of a minimization: the transform applied at this stage and the
/// state it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: &'static str,
    /// Squeeze or beam-splitter angle where the stage has one.
    pub param: Option<f64>,
    pub transform: OrthogonalTransform,
    pub cm: CovarianceMatrix,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizationTrace {
    pub stages: Vec<Stage>,
    pub final_energy: f64,
    pub final_cm: CovarianceMatrix,
}

impl MinimizationTrace {
    fn from_stages(stages: Vec<Stage>) -> Self {
        let last = stages.last().expect("trace has at least the input stage");
        Self {
            final_energy: last.energy,
            final_cm: last.cm.clone(),
            stages,
        }
    }

    pub fn initial_energy(&self) -> f64 {
        self.stages[0].energy
    }

    /// Product of all stage transforms, last stage leftmost.
    pub fn total_transform(&self) -> OrthogonalTransform {
        let n = self.final_cm.n_modes();
        self.stages.iter().fold(OrthogonalTransform::identity(n), |acc, s| {
            s.transform.then_after(&acc).expect("stages share a mode count")
        })
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }
}

fn check_two_modes(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<()> {
    cm.check_modes(modes)?;
    if cm.n_modes() != 2 {
        return Err(Error::Argument(format!("expected 2 modes, got {}", cm.n_modes())));
    }
    Ok(())
}

/// Maps an angle of a π-periodic family into `[0, π)`.
fn half_turn(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    if y >= PI - 1e-15 {
        0.0
    } else {
        y + 0.0
    }
}

fn distance_to_zero(theta: f64) -> f64 {
    theta.min(PI - theta)
}

/// Evaluates both stationary roots `root` and `root + π/2` and keeps the
/// lower-energy one (ties go to the angle nearer 0).
fn pick_branch(
    root: f64,
    cm: &CovarianceMatrix,
    modes: &ModeSystem,
    build: impl Fn(f64) -> Result<OrthogonalTransform>,
) -> Result<(f64, CovarianceMatrix)> {
    let mut best: Option<(f64, f64, CovarianceMatrix)> = None;
    for angle in [half_turn(root), half_turn(root + FRAC_PI_2)] {
        let out = apply(&build(angle)?, cm)?;
        let e = energy_cm(&out, modes)?;
        let better = match &best {
            None => true,
            Some((a0, e0, _)) => {
                e < e0 - TIE || ((e - e0).abs() <= TIE && distance_to_zero(angle) < distance_to_zero(*a0))
            }
        };
        if better {
            best = Some((angle, e, out));
        }
    }
    let (angle, _, out) = best.expect("two candidates evaluated");
    Ok((angle, out))
}

/// Squeezing angle minimizing the energy of a two-mode standard-form CM.
///
/// Pair creation keeps `a − b` fixed, so the energy falls as `a′ + b′`
/// grows; the stationary roots of `(a+b) sin 2r + (e₁+e₂) cos 2r = 0` are
/// `½·atan2(−(e₁+e₂), a+b)` (the maximum of `a′ + b′`) and that plus π/2.
pub fn optimal_squeeze(cm_sf: &CovarianceMatrix, modes: &ModeSystem) -> Result<(f64, CovarianceMatrix)> {
    check_two_modes(cm_sf, modes)?;
    let defect = standard_form_defect(cm_sf);
    if defect > PATTERN_TOL {
        return Err(Error::Pattern(format!("input not in standard form (defect {defect:e})")));
    }
    let (a, b, e1, e2) = standard_form_params(cm_sf);
    let root = 0.5 * (-(e1 + e2)).atan2(a + b);
    pick_branch(root, cm_sf, modes, |r| squeeze_matrix(r, (0, 1), 2))
}

/// Beam-splitter angle minimizing the energy of a post-squeeze CM
/// (`e₁ = −e₂ = e`); the result is block diagonal.
///
/// `A + B` is conserved and the energy is linear in `A − B`, so of the two
/// roots of `(b̃′−ã′) sin 2θ + 2e cos 2θ = 0` the one sending the larger
/// value to the higher frequency wins.
pub fn optimal_beamsplit(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<(f64, CovarianceMatrix)> {
    check_two_modes(cm, modes)?;
    let (a, b, e1, e2) = standard_form_params(cm);
    let defect = standard_form_defect(cm).max((e1 + e2).abs());
    if defect > PATTERN_TOL {
        return Err(Error::Pattern(format!(
            "input not in post-squeeze form (defect {defect:e})"
        )));
    }
    let e = 0.5 * (e1 - e2);
    let root = 0.5 * (2.0 * e).atan2(a - b);
    pick_branch(root, cm, modes, |t| beamsplit_matrix(t, (0, 1), 2))
}

fn stage(
    name: &'static str,
    param: Option<f64>,
    transform: OrthogonalTransform,
    cm: CovarianceMatrix,
    modes: &ModeSystem,
) -> Result<Stage> {
    let energy = energy_cm(&cm, modes)?;
    Ok(Stage {
        name,
        param,
        transform,
        cm,
        energy,
    })
}

/// Lowers the energy of `cm` with Gaussian operations until minimal.
///
/// Two modes run the closed-form pipeline `standard_form → squeeze →
/// beamsplit`. Other mode counts go straight to the optimal Williamson
/// arrangement (a single `williamson` stage).
pub fn gaussian_minimize(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<MinimizationTrace> {
    cm.check_modes(modes)?;
    let n = cm.n_modes();
    let mut stages = vec![stage("input", None, OrthogonalTransform::identity(n), cm.clone(), modes)?];
    if n == 2 {
        let (o_loc, sf) = standard_form_two_mode(cm)?;
        stages.push(stage("standard_form", None, o_loc, sf.clone(), modes)?);
        let (r, sq) = optimal_squeeze(&sf, modes)?;
        stages.push(stage("squeeze", Some(r), squeeze_matrix(r, (0, 1), 2)?, sq.clone(), modes)?);
        let (t, bs) = optimal_beamsplit(&sq, modes)?;
        stages.push(stage("beamsplit", Some(t), beamsplit_matrix(t, (0, 1), 2)?, bs, modes)?);
    } else {
        let o = williamson_transform(cm, modes)?;
        let out = apply(&o, cm)?;
        stages.push(stage("williamson", None, o, out, modes)?);
    }
    Ok(MinimizationTrace::from_stages(stages))
}

/// Proper transform taking `cm` to its minimum-energy Williamson arrangement:
/// canonical form followed by a signed block permutation.
fn williamson_transform(cm: &CovarianceMatrix, modes: &ModeSystem) -> Result<OrthogonalTransform> {
    let canon = canonical_form(cm)?;
    let n = cm.n_modes();
    let Assignment { source, signs, .. } = optimal_assignment(&canon.values, modes.omegas());
    // signs are relative to |m|; convert to flips of the signed values
    let mut flips: Vec<f64> = (0..n)
        .map(|j| signs[j] * canon.values[source[j]].signum())
        .collect();
    let parity: f64 = flips.iter().product();
    if parity < 0.0 {
        // only possible when a block value vanishes; flip that block instead
        let j = (0..n)
            .min_by(|&x, &y| canon.values[source[x]].abs().total_cmp(&canon.values[source[y]].abs()))
            .expect("at least one mode");
        flips[j] = -flips[j];
    }
    let mut p = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for j in 0..n {
        p[(2 * j, 2 * source[j])] = 1.0;
        p[(2 * j + 1, 2 * source[j] + 1)] = flips[j];
    }
    let p = OrthogonalTransform::from_trusted(p);
    p.then_after(&canon.transform)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::thermal_cm;

    fn two(omegas: [f64; 2]) -> ModeSystem {
        ModeSystem::new(omegas.to_vec()).unwrap()
    }

    fn sf(a: f64, b: f64, e1: f64, e2: f64) -> CovarianceMatrix {
        CovarianceMatrix::from_row_slice(
            4,
            &[
                0.0, a, 0.0, -e1, //
                -a, 0.0, -e2, 0.0, //
                0.0, e2, 0.0, b, //
                e1, 0.0, -b, 0.0,
            ],
        )
        .unwrap()
    }

    #[test]
    fn squeeze_idle_when_already_minimal() {
        let (r, out) = optimal_squeeze(&sf(0.4, 0.2, 0.0, 0.0), &two([1.0, 1.0])).unwrap();
        assert_eq!(r, 0.0);
        assert_eq!(standard_form_params(&out), (0.4, 0.2, 0.0, 0.0));
    }

    #[test]
    fn squeeze_filled_pair_to_vacuum() {
        let m = two([1.0, 1.0]);
        let (r, out) = optimal_squeeze(&sf(-1.0, -1.0, 0.0, 0.0), &m).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-15);
        assert!((out.entries() - CovarianceMatrix::vacuum(2).entries()).amax() < 1e-15);
        assert!(energy_cm(&out, &m).unwrap().abs() < 1e-15);
    }

    #[test]
    fn squeeze_halves_correlated_energy() {
        let m = two([1.0, 1.0]);
        let input = sf(0.0, 0.0, 0.5, 0.5);
        assert!((energy_cm(&input, &m).unwrap() - 1.0).abs() < 1e-15);
        let (r, out) = optimal_squeeze(&input, &m).unwrap();
        assert!((r - 3.0 * PI / 4.0).abs() < 1e-12);
        let (a, b, e1, e2) = standard_form_params(&out);
        assert!((a - 0.5).abs() < 1e-12 && (b - 0.5).abs() < 1e-12);
        assert!((e1 + e2).abs() < 1e-12);
        assert!((energy_cm(&out, &m).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn squeeze_rejects_pattern_violation() {
        let g = CovarianceMatrix::from_row_slice(
            4,
            &[
                0.0, 0.0, 0.3, 0.0, //
                0.0, 0.0, 0.0, 0.0, //
                -0.3, 0.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        assert!(matches!(optimal_squeeze(&g, &two([1.0, 1.0])), Err(Error::Pattern(_))));
        assert!(matches!(
            optimal_beamsplit(&sf(0.1, 0.1, 0.3, 0.1), &two([1.0, 1.0])),
            Err(Error::Pattern(_))
        ));
    }

    #[test]
    fn beamsplit_diagonalizes() {
        let m = two([1.0, 2.0]);
        let (_, out) = optimal_beamsplit(&sf(0.3, 0.6, 0.2, -0.2), &m).unwrap();
        let g = out.entries();
        assert!(g[(0, 3)].abs() < 1e-12 && g[(1, 2)].abs() < 1e-12);
        // larger value lands on the higher frequency
        assert!(g[(2, 3)] > g[(0, 1)]);
    }

    #[test]
    fn thermal_minimize_swaps_when_active() {
        // ω = (2, 1) with equal temperatures: the low mode holds the larger λ
        let m = two([2.0, 1.0]);
        let th = thermal_cm(&[0.1, 3.0], &m).unwrap();
        let trace = gaussian_minimize(&th, &m).unwrap();
        assert!(trace.final_energy < trace.initial_energy() - 1e-3);
        let passive = thermal_cm(&[3.0, 0.1], &m).unwrap();
        let trace = gaussian_minimize(&passive, &m).unwrap();
        assert!((trace.final_energy - trace.initial_energy()).abs() < 1e-14);
    }

    #[test]
    fn fallback_reaches_vacuum_for_filled_modes() {
        let m = ModeSystem::new(vec![1.0, 2.0, 3.0]).unwrap();
        let g = CovarianceMatrix::block_diagonal(&[-1.0, -1.0, 1.0]).unwrap();
        let trace = gaussian_minimize(&g, &m).unwrap();
        assert_eq!(trace.stages.len(), 2);
        assert!(trace.final_energy.abs() < 1e-12);
        let total = trace.total_transform();
        assert!(total.is_proper());
        let again = apply(&total, &g).unwrap();
        assert!((again.entries() - trace.final_cm.entries()).amax() < 1e-12);
    }

    #[test]
    fn fallback_keeps_odd_parity() {
        // one filled mode: the odd Pfaffian sign keeps one mode occupied
        let m = ModeSystem::new(vec![1.0, 2.0, 3.0]).unwrap();
        let g = CovarianceMatrix::block_diagonal(&[1.0, 1.0, -1.0]).unwrap();
        let trace = gaussian_minimize(&g, &m).unwrap();
        assert!((trace.final_energy - 1.0).abs() < 1e-12);
    }
}
