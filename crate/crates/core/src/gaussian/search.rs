//! Stochastic lower-energy search over random proper orthogonal conjugations.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covariance::{energy_cm, CovarianceMatrix};
use crate::error::{Error, Result};
use crate::modes::ModeSystem;

const CHUNK: usize = 2048;
const KEEP: usize = 8;
const MAX_SWEEPS: usize = 500;
const NEWTON_STEPS: usize = 50;

/// Row-major antisymmetric matrix with in-place Givens conjugation.
#[derive(Clone)]
struct Dense {
    dim: usize,
    data: Vec<f64>,
}

impl Dense {
    fn from_cm(cm: &CovarianceMatrix) -> Self {
        let dim = cm.dim();
        let g = cm.entries();
        Self {
            dim,
            data: (0..dim * dim).map(|i| g[(i / dim, i % dim)]).collect(),
        }
    }

    /// `G ← R G Rᵀ` with `R` rotating rows `p, q` by `t`.
    fn rotate(&mut self, p: usize, q: usize, t: f64) {
        let (s, c) = t.sin_cos();
        let d = self.dim;
        for k in 0..d {
            let (x, y) = (self.data[p * d + k], self.data[q * d + k]);
            self.data[p * d + k] = c * x + s * y;
            self.data[q * d + k] = -s * x + c * y;
        }
        for k in 0..d {
            let (x, y) = (self.data[k * d + p], self.data[k * d + q]);
            self.data[k * d + p] = c * x + s * y;
            self.data[k * d + q] = -s * x + c * y;
        }
    }

    fn energy(&self, omegas: &[f64]) -> f64 {
        let d = self.dim;
        omegas
            .iter()
            .enumerate()
            .map(|(j, w)| 0.5 * w * (1.0 - self.data[2 * j * d + 2 * j + 1]))
            .sum()
    }

    fn rotated_energy(&self, p: usize, q: usize, t: f64, omegas: &[f64]) -> f64 {
        let mut tmp = self.clone();
        tmp.rotate(p, q, t);
        tmp.energy(omegas)
    }
}

fn planes(dim: usize) -> Vec<(usize, usize)> {
    (0..dim).flat_map(|p| ((p + 1)..dim).map(move |q| (p, q))).collect()
}

/// Planes joining two different modes; rotations inside one mode leave
/// the energy unchanged.
fn cross_planes(dim: usize) -> Vec<(usize, usize)> {
    planes(dim).into_iter().filter(|(p, q)| p / 2 != q / 2).collect()
}

/// Cyclic coordinate descent over cross-mode Givens planes. Such a rotation
/// changes each diagonal block entry linearly in `(cos t, sin t)`, so the
/// energy is `α + β cos t + γ sin t` and each step is an exact line search.
fn refine(g: &mut Dense, omegas: &[f64], planes: &[(usize, usize)]) -> f64 {
    let mut current = g.energy(omegas);
    for _ in 0..MAX_SWEEPS {
        let start = current;
        for &(p, q) in planes {
            let e0 = current;
            let e_half = g.rotated_energy(p, q, PI, omegas);
            let e_quarter = g.rotated_energy(p, q, FRAC_PI_2, omegas);
            let alpha = 0.5 * (e0 + e_half);
            let beta = 0.5 * (e0 - e_half);
            let gamma = e_quarter - alpha;
            if beta.hypot(gamma) < 1e-300 {
                continue;
            }
            let t = (-gamma).atan2(-beta);
            let candidate = alpha - beta.hypot(gamma);
            if candidate < current {
                g.rotate(p, q, t);
                current = g.energy(omegas);
            }
        }
        if start - current < 1e-15 {
            break;
        }
    }
    current
}

/// `L([B_pq, C])` where `L(Γ) = −½ Σ ωⱼ Γ[2j, 2j+1]` and
/// `B_pq = e_p e_qᵀ − e_q e_pᵀ`; only the block entries of the bracket are
/// needed.
fn bracket_weight(p: usize, q: usize, c: &DMatrix<f64>, omegas: &[f64]) -> f64 {
    let entry = |a: usize, b: usize| {
        let left = if a == p { c[(q, b)] } else if a == q { -c[(p, b)] } else { 0.0 };
        let right = if b == q { c[(a, p)] } else if b == p { -c[(a, q)] } else { 0.0 };
        left - right
    };
    omegas
        .iter()
        .enumerate()
        .map(|(j, w)| -0.5 * w * entry(2 * j, 2 * j + 1))
        .sum()
}

fn commutator(p: usize, q: usize, g: &DMatrix<f64>) -> DMatrix<f64> {
    let d = g.nrows();
    let mut b = DMatrix::zeros(d, d);
    b[(p, q)] = 1.0;
    b[(q, p)] = -1.0;
    &b * g - g * &b
}

fn dense_energy(g: &DMatrix<f64>, omegas: &[f64]) -> f64 {
    omegas
        .iter()
        .enumerate()
        .map(|(j, w)| 0.5 * w * (1.0 - g[(2 * j, 2 * j + 1)]))
        .sum()
}

/// Saddle-free Newton iteration on the orbit `e^X Γ e^{−X}`, using the exact
/// gradient and Hessian of the (linear) energy. Converges where coordinate
/// descent crawls, e.g. for nearly degenerate canonical values.
fn polish(g: &Dense, omegas: &[f64], planes: &[(usize, usize)]) -> f64 {
    let d = g.dim;
    let mut gamma = DMatrix::from_row_slice(d, d, &g.data);
    let mut current = dense_energy(&gamma, omegas);
    let m = planes.len();
    for _ in 0..NEWTON_STEPS {
        let brackets: Vec<DMatrix<f64>> = planes.iter().map(|&(p, q)| commutator(p, q, &gamma)).collect();
        let grad = DVector::from_fn(m, |i, _| bracket_weight(planes[i].0, planes[i].1, &gamma, omegas));
        if grad.amax() < 1e-15 {
            break;
        }
        let hess = DMatrix::from_fn(m, m, |i, k| {
            let (pi, qi) = planes[i];
            let (pk, qk) = planes[k];
            0.5 * (bracket_weight(pi, qi, &brackets[k], omegas) + bracket_weight(pk, qk, &brackets[i], omegas))
        });
        let eig = SymmetricEigen::new(hess);
        let floor = 1e-12 * eig.eigenvalues.amax().max(1e-300);
        let mut step = DVector::zeros(m);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda.abs() > floor {
                let v = eig.eigenvectors.column(k);
                step -= v * (v.dot(&grad) / lambda.abs());
            }
        }
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let mut x = DMatrix::zeros(d, d);
            for (i, &(p, q)) in planes.iter().enumerate() {
                x[(p, q)] += scale * step[i];
                x[(q, p)] -= scale * step[i];
            }
            let u = x.exp();
            let next = &u * &gamma * u.transpose();
            let next = (&next - next.transpose()) * 0.5;
            let e = dense_energy(&next, omegas);
            if e < current {
                gamma = next;
                current = e;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if !improved {
            break;
        }
    }
    current
}

/// Best energy found over `trials` random Givens-product conjugations of
/// `cm`, with the best few samples refined by coordinate descent and a
/// Newton polish.
///
/// Trials are split into fixed chunks with independent ChaCha streams, so
/// the result depends only on `(cm, trials, seed)`, never on scheduling.
pub fn random_orthogonal_search(
    cm: &CovarianceMatrix,
    modes: &ModeSystem,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    cm.check_modes(modes)?;
    if trials == 0 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let base = Dense::from_cm(cm);
    let omegas = modes.omegas();
    let planes = planes(base.dim);
    let chunks = trials.div_ceil(CHUNK);

    let mut finalists: Vec<(f64, usize, Dense)> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = CHUNK.min(trials - chunk * CHUNK);
            let mut kept: Vec<(f64, usize, Dense)> = Vec::with_capacity(KEEP + 1);
            for i in 0..count {
                let mut g = base.clone();
                for &(p, q) in &planes {
                    g.rotate(p, q, rng.random_range(0.0..TAU));
                }
                let e = g.energy(omegas);
                if kept.len() < KEEP || e < kept[kept.len() - 1].0 {
                    kept.push((e, chunk * CHUNK + i, g));
                    kept.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    kept.truncate(KEEP);
                }
            }
            kept
        })
        .collect();
    finalists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    finalists.truncate(KEEP);

    let start = energy_cm(cm, modes)?;
    let best = finalists
        .into_par_iter()
        .map(|(_, _, mut g)| {
            let cross = cross_planes(base.dim);
            refine(&mut g, omegas, &cross);
            polish(&g, omegas, &cross)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.min(start))
}
