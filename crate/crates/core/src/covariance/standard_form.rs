use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix4};

use super::cm::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::gaussian::transform::{from_matrix4, local_rotation};
use crate::gaussian::{apply, OrthogonalTransform};

/// Below this norm a correlation component is treated as absent.
const DEGENERATE: f64 = 1e-14;

fn wrap(x: f64) -> f64 {
    // into (−π, π]
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Of the two targets `±π/2`, the shift `t − angle` with the smaller magnitude.
fn nearest_quarter(angle: f64) -> f64 {
    let up = wrap(FRAC_PI_2 - angle);
    let down = wrap(-FRAC_PI_2 - angle);
    if up.abs() <= down.abs() {
        up
    } else {
        down
    }
}

/// Local angles `(φ_a, φ_b)` such that `R(φ_a) C R(φ_b)ᵀ` is anti-diagonal.
///
/// `C` splits as `ρ_p R(α) + ρ_q R(β) σ_z`; conjugation shifts α by
/// `φ_a − φ_b` and β by `φ_a + φ_b`, and both must land on `±π/2`.
pub(crate) fn local_angles(c: &Matrix2<f64>) -> (f64, f64) {
    let p = 0.5 * (c[(0, 0)] + c[(1, 1)]);
    let q = 0.5 * (c[(1, 0)] - c[(0, 1)]);
    let u = 0.5 * (c[(0, 0)] - c[(1, 1)]);
    let v = 0.5 * (c[(0, 1)] + c[(1, 0)]);
    let diff = if p.hypot(q) > DEGENERATE {
        nearest_quarter((-q).atan2(p))
    } else {
        0.0
    };
    let sum = if u.hypot(v) > DEGENERATE {
        nearest_quarter((-v).atan2(u))
    } else {
        0.0
    };
    (0.5 * (sum + diff), 0.5 * (sum - diff))
}

/// The local rotation `R(φ_a) ⊕ R(φ_b)` that clears the diagonal of the
/// inter-mode block of a 4×4 antisymmetric matrix.
pub(crate) fn local_block(g: &Matrix4<f64>) -> Matrix4<f64> {
    let c = g.fixed_view::<2, 2>(0, 2).into_owned();
    let (pa, pb) = local_angles(&c);
    local_rotation(pa, pb)
}

/// Brings a two-mode CM to
/// `[[0, a, 0, −e₁], [−a, 0, −e₂, 0], [0, e₂, 0, b], [e₁, 0, −b, 0]]`
/// with a local rotation on each mode. Energy is unchanged.
pub fn standard_form_two_mode(cm: &CovarianceMatrix) -> Result<(OrthogonalTransform, CovarianceMatrix)> {
    if cm.n_modes() != 2 {
        return Err(Error::Argument(format!(
            "standard form needs exactly 2 modes, got {}",
            cm.n_modes()
        )));
    }
    let g = Matrix4::from_fn(|i, j| cm.entries()[(i, j)]);
    let o = from_matrix4(&local_block(&g));
    let sf = apply(&o, cm)?;
    Ok((o, sf))
}

/// `(a, b, e₁, e₂)` read from a two-mode CM in standard form.
pub fn standard_form_params(cm: &CovarianceMatrix) -> (f64, f64, f64, f64) {
    let g = cm.entries();
    (g[(0, 1)], g[(2, 3)], -g[(0, 3)], -g[(1, 2)])
}

/// Largest entry outside the standard-form pattern.
pub fn standard_form_defect(cm: &CovarianceMatrix) -> f64 {
    let g = cm.entries();
    g[(0, 2)].abs().max(g[(1, 3)].abs())
}
