use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::covariance::CovarianceMatrix;
use crate::error::{Error, Result};

/// Default orthogonality tolerance, `‖OOᵀ − 𝟙‖_max`.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// A real orthogonal `2n × 2n` phase-space map acting on covariance
/// matrices as `Γ ↦ OΓOᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalTransform {
    n_modes: usize,
    matrix: DMatrix<f64>,
    det_sign: i8,
}

impl OrthogonalTransform {
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::Argument(format!(
                "orthogonal transform must be square with even dimension, got {r}×{c}"
            )));
        }
        let defect = orthogonality_defect(&matrix);
        if defect > tol {
            return Err(Error::Numeric(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        let det = matrix.clone().determinant();
        Ok(Self {
            n_modes: r / 2,
            det_sign: if det < 0.0 { -1 } else { 1 },
            matrix,
        })
    }

    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        let det = matrix.clone().determinant();
        Self {
            n_modes: matrix.nrows() / 2,
            det_sign: if det < 0.0 { -1 } else { 1 },
            matrix,
        }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            n_modes,
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            det_sign: 1,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    pub fn is_proper(&self) -> bool {
        self.det_sign > 0
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_modes: self.n_modes,
            matrix: self.matrix.transpose(),
            det_sign: self.det_sign,
        }
    }

    /// `self · other`: apply `other` first, then `self`.
    pub fn then_after(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(Self {
            n_modes: self.n_modes,
            matrix: &self.matrix * &other.matrix,
            det_sign: self.det_sign * other.det_sign,
        })
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.matrix)
    }
}

fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    (m * m.transpose() - DMatrix::<f64>::identity(n, n)).amax()
}

/// `OΓOᵀ`.
pub fn apply(o: &OrthogonalTransform, cm: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if o.n_modes() != cm.n_modes() {
        return Err(Error::Dimension {
            expected: cm.n_modes(),
            found: o.n_modes(),
        });
    }
    let g = o.matrix() * cm.entries() * o.matrix().transpose();
    // restore exact antisymmetry lost to rounding
    let g = (&g - g.transpose()) * 0.5;
    Ok(CovarianceMatrix::from_trusted(g))
}

/// `[[cos θ, sin θ], [−sin θ, cos θ]]`.
pub(crate) fn rotation_block(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// Two-mode squeezing block in interleaved order `(c_a1, c_a2, c_b1, c_b2)`:
/// `[[cos r·𝟙, −sin r·σ_z], [sin r·σ_z, cos r·𝟙]]`.
pub(crate) fn squeeze_block(r: f64) -> Matrix4<f64> {
    let (s, c) = r.sin_cos();
    Matrix4::new(
        c, 0.0, -s, 0.0, //
        0.0, c, 0.0, s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// Beam-splitter block in interleaved order:
/// `[[cos φ·𝟙, −sin φ·𝟙], [sin φ·𝟙, cos φ·𝟙]]`.
pub(crate) fn beamsplit_block(phi: f64) -> Matrix4<f64> {
    let (s, c) = phi.sin_cos();
    Matrix4::new(
        c, 0.0, -s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, s, 0.0, c,
    )
}

fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
    if mode >= n_modes {
        return Err(Error::ModeIndex { index: mode, n_modes });
    }
    Ok(())
}

fn check_pair(modes: (usize, usize), n_modes: usize) -> Result<()> {
    check_mode(modes.0, n_modes)?;
    check_mode(modes.1, n_modes)?;
    if modes.0 == modes.1 {
        return Err(Error::Argument(format!(
            "two-mode transform needs distinct modes, got ({}, {})",
            modes.0, modes.1
        )));
    }
    Ok(())
}

fn embed_pair(block: &Matrix4<f64>, modes: (usize, usize), n_modes: usize) -> OrthogonalTransform {
    let idx = [2 * modes.0, 2 * modes.0 + 1, 2 * modes.1, 2 * modes.1 + 1];
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for (i, &gi) in idx.iter().enumerate() {
        for (j, &gj) in idx.iter().enumerate() {
            m[(gi, gj)] = block[(i, j)];
        }
    }
    OrthogonalTransform {
        n_modes,
        matrix: m,
        det_sign: 1,
    }
}

/// Phase rotation on one mode's Majorana pair. It is the phase-space
/// action of the Fock unitary `exp(+iθ a†a)`, i.e. of `R(θ)†`.
pub fn rotation_matrix(theta: f64, mode: usize, n_modes: usize) -> Result<OrthogonalTransform> {
    check_mode(mode, n_modes)?;
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let b = rotation_block(theta);
    for i in 0..2 {
        for j in 0..2 {
            m[(2 * mode + i, 2 * mode + j)] = b[(i, j)];
        }
    }
    Ok(OrthogonalTransform {
        n_modes,
        matrix: m,
        det_sign: 1,
    })
}

/// Two-mode squeezing `S(r)` between `modes.0` (a) and `modes.1` (b).
/// It is the phase-space action of `exp[−r(ab − b†a†)] = S(r)†`.
pub fn squeeze_matrix(r: f64, modes: (usize, usize), n_modes: usize) -> Result<OrthogonalTransform> {
    check_pair(modes, n_modes)?;
    Ok(embed_pair(&squeeze_block(r), modes, n_modes))
}

/// Beam splitter `B(φ)` between `modes.0` (a) and `modes.1` (b).
/// It is the phase-space action of `exp[−φ(ab† + a†b)] = B(φ)†`.
pub fn beamsplit_matrix(phi: f64, modes: (usize, usize), n_modes: usize) -> Result<OrthogonalTransform> {
    check_pair(modes, n_modes)?;
    Ok(embed_pair(&beamsplit_block(phi), modes, n_modes))
}

/// Local transform `R(φ_a) ⊕ R(φ_b)` on a two-mode system.
pub(crate) fn local_rotation(phi_a: f64, phi_b: f64) -> Matrix4<f64> {
    let ra = rotation_block(phi_a);
    let rb = rotation_block(phi_b);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&ra);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&rb);
    m
}

pub(crate) fn from_matrix4(m: &Matrix4<f64>) -> OrthogonalTransform {
    OrthogonalTransform::from_trusted(DMatrix::from_fn(4, 4, |i, j| m[(i, j)]))
}
