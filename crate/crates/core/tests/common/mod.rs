//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use fermion_ergotropy::CovarianceMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar orthogonal matrix from the QR decomposition of a Gaussian matrix.
pub fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let signs = DMatrix::from_diagonal(&r.diagonal().map(|x| if x < 0.0 { -1.0 } else { 1.0 }));
    q * signs
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

/// `Oᵀ (⊕ [[0, mⱼ], [−mⱼ, 0]]) O` for a random orthogonal `O`.
pub fn cm_with_values(values: &[f64], rng: &mut impl Rng) -> CovarianceMatrix {
    let n = values.len();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for (j, &m) in values.iter().enumerate() {
        d[(2 * j, 2 * j + 1)] = m;
        d[(2 * j + 1, 2 * j)] = -m;
    }
    let o = random_orthogonal(2 * n, rng);
    let g = o.transpose() * d * &o;
    let g = (&g - g.transpose()) * 0.5;
    CovarianceMatrix::new(g).expect("conjugated block matrix is physical")
}

pub fn random_cm(n: usize, rng: &mut impl Rng) -> CovarianceMatrix {
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    cm_with_values(&values, rng)
}

pub fn random_pure_cm(n: usize, rng: &mut impl Rng) -> CovarianceMatrix {
    let values: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    cm_with_values(&values, rng)
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    let mut total = 0.0;
    for j in 1..n {
        if a[(0, j)] == 0.0 {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor = DMatrix::from_fn(n - 2, n - 2, |r, c| a[(keep[r], keep[c])]);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * pfaffian(&minor);
    }
    total
}

/// Singular values of `Γ`, which come in equal pairs; one of each pair,
/// descending.
pub fn paired_singular_values(g: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = g.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.iter().step_by(2).copied().collect()
}

// ---- dense fermion operators built from Kronecker products ----

pub type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `|0⟩⟨1|` on one site: empties an occupied mode.
fn lowering() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
}

/// Jordan–Wigner annihilator of `mode` (mode 0 is the leftmost factor).
pub fn jw_annihilator(mode: usize, n: usize) -> CMat {
    let mut out = CMat::identity(1, 1);
    for k in 0..n {
        let factor = match k.cmp(&mode) {
            std::cmp::Ordering::Less => pauli_z(),
            std::cmp::Ordering::Equal => lowering(),
            std::cmp::Ordering::Greater => CMat::identity(2, 2),
        };
        out = kron(&out, &factor);
    }
    out
}

/// `c_{2m} = a + a†`, `c_{2m+1} = i(a − a†)`.
pub fn jw_majoranas(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for m in 0..n {
        let a = jw_annihilator(m, n);
        let ad = a.adjoint();
        out.push(&a + &ad);
        out.push((&a - &ad) * c(0., 1.));
    }
    out
}

pub fn number_op(mode: usize, n: usize) -> CMat {
    let a = jw_annihilator(mode, n);
    a.adjoint() * a
}

pub fn jw_hamiltonian(omegas: &[f64]) -> CMat {
    let n = omegas.len();
    let dim = 1 << n;
    let mut h = CMat::zeros(dim, dim);
    for (k, &w) in omegas.iter().enumerate() {
        h += number_op(k, n) * c(w, 0.);
    }
    h
}

pub fn trace_re(a: &CMat) -> f64 {
    a.trace().re
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Exhaustive ergotropy over all level permutations (small level counts).
pub fn permutation_ergotropy(pops: &[f64], energies: &[f64]) -> f64 {
    fn permute(k: usize, idx: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if k == idx.len() {
            f(idx);
            return;
        }
        for i in k..idx.len() {
            idx.swap(k, i);
            permute(k + 1, idx, f);
            idx.swap(k, i);
        }
    }
    let actual: f64 = pops.iter().zip(energies).map(|(p, e)| p * e).sum();
    let mut best = actual;
    let mut idx: Vec<usize> = (0..pops.len()).collect();
    permute(0, &mut idx, &mut |perm| {
        let e: f64 = perm.iter().enumerate().map(|(i, &j)| pops[i] * energies[j]).sum();
        best = best.min(e);
    });
    actual - best
}

/// Any strictly inverted pair: `E_i < E_j` while `p_i < p_j`.
pub fn has_inversion(pops: &[f64], energies: &[f64], tol: f64) -> bool {
    for i in 0..pops.len() {
        for j in 0..pops.len() {
            if energies[j] > energies[i] + tol && pops[j] > pops[i] + tol {
                return true;
            }
        }
    }
    false
}

/// Energies of bitstrings, mode 0 most significant.
pub fn level_energies(omegas: &[f64]) -> Vec<f64> {
    let n = omegas.len();
    (0..1usize << n)
        .map(|s| (0..n).filter(|k| s >> (n - 1 - k) & 1 == 1).map(|k| omegas[k]).sum())
        .collect()
}

/// Populations of `copies` independent copies, copy 0 most significant.
pub fn tensor_power(pops: &[f64], copies: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..copies {
        out = out.iter().flat_map(|a| pops.iter().map(move |b| a * b)).collect();
    }
    out
}
