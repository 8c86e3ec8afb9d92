use nalgebra::{DMatrix, Matrix4};

use super::cm::CovarianceMatrix;
use super::standard_form::local_block;
use crate::error::{Error, Result};
use crate::gaussian::transform::{beamsplit_block, squeeze_block};
use crate::gaussian::OrthogonalTransform;

const MAX_SWEEPS: usize = 200;
const CONVERGED: f64 = 1e-12;
/// Block values below this magnitude count as zero for sign bookkeeping.
pub const ZERO_VALUE_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;
const SKIP: f64 = 1e-18;

/// Block-diagonal form `OΓOᵀ = ⊕ [[0, mⱼ], [−mⱼ, 0]]`.
///
/// Values are ordered by `|mⱼ|` descending (ties keep block order). The
/// transform is always proper, so at most one value, the smallest in
/// magnitude, is left negative.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub transform: OrthogonalTransform,
    pub values: Vec<f64>,
    pub det_sign: i8,
}

impl CanonicalForm {
    /// `|mⱼ|`, the Williamson values.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|m| m.abs()).collect()
    }
}

/// Rotation that block-diagonalizes a 4×4 antisymmetric matrix exactly:
/// local rotations, then the squeeze-type and beam-splitter-type mixers at
/// stationary angles.
fn pair_rotation(g: &Matrix4<f64>) -> Matrix4<f64> {
    let l = local_block(g);
    let g1 = l * g * l.transpose();
    let (a, b) = (g1[(0, 1)], g1[(2, 3)]);
    let (e1, e2) = (-g1[(0, 3)], -g1[(1, 2)]);
    let s = squeeze_block(0.5 * (-(e1 + e2)).atan2(a + b));
    let g2 = s * g1 * s.transpose();
    let e = 0.5 * (g2[(1, 2)] - g2[(0, 3)]);
    let bs = beamsplit_block(0.5 * (2.0 * e).atan2(g2[(0, 1)] - g2[(2, 3)]));
    bs * s * l
}

/// `M ← Q M` on rows `idx`.
fn rotate_rows(m: &mut DMatrix<f64>, q: &Matrix4<f64>, idx: &[usize; 4]) {
    for col in 0..m.ncols() {
        let v = [m[(idx[0], col)], m[(idx[1], col)], m[(idx[2], col)], m[(idx[3], col)]];
        for (i, &r) in idx.iter().enumerate() {
            m[(r, col)] = (0..4).map(|k| q[(i, k)] * v[k]).sum();
        }
    }
}

/// `M ← M Qᵀ` on columns `idx`.
fn rotate_cols(m: &mut DMatrix<f64>, q: &Matrix4<f64>, idx: &[usize; 4]) {
    for row in 0..m.nrows() {
        let v = [m[(row, idx[0])], m[(row, idx[1])], m[(row, idx[2])], m[(row, idx[3])]];
        for (i, &c) in idx.iter().enumerate() {
            m[(row, c)] = (0..4).map(|k| q[(i, k)] * v[k]).sum();
        }
    }
}

fn coupling_norm(g: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    g.view((2 * i, 2 * j), (2, 2)).norm()
}

fn off_block_norm(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows() / 2;
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * coupling_norm(g, i, j).powi(2);
        }
        sum += g[(2 * i, 2 * i)].powi(2) + g[(2 * i + 1, 2 * i + 1)].powi(2);
    }
    sum.sqrt()
}

fn sweep(g: &mut DMatrix<f64>, o: &mut DMatrix<f64>) {
    let n = g.nrows() / 2;
    for i in 0..n {
        for j in (i + 1)..n {
            if coupling_norm(g, i, j) < SKIP {
                continue;
            }
            let idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
            let sub = Matrix4::from_fn(|r, c| g[(idx[r], idx[c])]);
            let q = pair_rotation(&sub);
            rotate_rows(g, &q, &idx);
            rotate_cols(g, &q, &idx);
            rotate_rows(o, &q, &idx);
        }
    }
}

/// Jacobi-style block diagonalization by two-mode rotations, swept over
/// all mode pairs in fixed order until the off-block mass vanishes.
pub fn canonical_form(cm: &CovarianceMatrix) -> Result<CanonicalForm> {
    let dim = cm.dim();
    let n = cm.n_modes();
    let mut g = cm.entries().clone();
    let mut o = DMatrix::<f64>::identity(dim, dim);

    let mut converged = off_block_norm(&g) < CONVERGED;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "canonical form did not converge in {MAX_SWEEPS} sweeps (off-block {:e})",
                off_block_norm(&g)
            )));
        }
        sweep(&mut g, &mut o);
        sweeps += 1;
        if off_block_norm(&g) < CONVERGED {
            // convergence is quadratic; one more sweep lands at rounding level
            sweep(&mut g, &mut o);
            converged = true;
        }
    }
    let residual = off_block_norm(&g);
    if residual > RESIDUAL_TOL {
        return Err(Error::Numeric(format!("canonical form residual {residual:e}")));
    }

    let raw: Vec<f64> = (0..n).map(|j| 0.5 * (g[(2 * j, 2 * j + 1)] - g[(2 * j + 1, 2 * j)])).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| raw[y].abs().total_cmp(&raw[x].abs()));

    let mut values: Vec<f64> = order.iter().map(|&p| raw[p]).collect();
    let mut sorted = DMatrix::<f64>::zeros(dim, dim);
    for (k, &p) in order.iter().enumerate() {
        sorted.row_mut(2 * k).copy_from(&o.row(2 * p));
        sorted.row_mut(2 * k + 1).copy_from(&o.row(2 * p + 1));
    }

    let mut flips: Vec<usize> = (0..n).filter(|&j| values[j] < 0.0).collect();
    if flips.len() % 2 == 1 {
        let last = n - 1;
        match flips.iter().position(|&j| j == last) {
            Some(pos) => {
                flips.remove(pos);
            }
            None => flips.push(last),
        }
    }
    for j in flips {
        values[j] = -values[j];
        sorted.row_mut(2 * j + 1).neg_mut();
    }

    let transform = OrthogonalTransform::from_trusted(sorted);
    let det_sign = transform.det_sign();
    Ok(CanonicalForm {
        transform,
        values,
        det_sign,
    })
}

/// Sign of the Pfaffian, `sign(det O · Π mⱼ)`; zero when some block value
/// vanishes.
pub fn pfaffian_sign(cm: &CovarianceMatrix) -> Result<i8> {
    let canon = canonical_form(cm)?;
    if canon.values.iter().any(|m| m.abs() < ZERO_VALUE_TOL) {
        return Ok(0);
    }
    let negatives = canon.values.iter().filter(|m| **m < 0.0).count();
    let sign = if negatives % 2 == 0 { 1 } else { -1 };
    Ok(sign * canon.det_sign)
}
