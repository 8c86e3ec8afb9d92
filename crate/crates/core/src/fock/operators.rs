use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::OrthogonalTransform;
use crate::modes::ModeSystem;

/// Largest number of modes the dense Fock representation accepts (256 × 256).
pub const MAX_FOCK_MODES: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn check_capacity(n_modes: usize) -> Result<()> {
    if n_modes == 0 || n_modes > MAX_FOCK_MODES {
        return Err(Error::Capacity {
            what: "Fock-space modes",
            requested: n_modes,
            max: MAX_FOCK_MODES,
        });
    }
    Ok(())
}

/// An operator on the `2ⁿ`-dimensional Fock space of `n` modes.
///
/// Basis index `j` encodes the occupation bitstring `|s₁ s₂ … sₙ⟩` with
/// mode 1 as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    n_modes: usize,
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    pub fn from_matrix(n_modes: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_capacity(n_modes)?;
        let dim = 1usize << n_modes;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { n_modes, matrix })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        check_capacity(n_modes)?;
        let dim = 1usize << n_modes;
        Ok(Self {
            n_modes,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_modes: self.n_modes,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::Dimension {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(Self {
            n_modes: self.n_modes,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `max |U†U − 𝟙|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        max_abs_diff_identity(&prod)
    }
}

pub(crate) fn max_abs_diff_identity(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

/// An operator that maps each basis state to a single basis state:
/// `M|j⟩ = phase[j] |j ⊕ flip⟩`. Majorana operators and their products
/// have this shape in the Jordan–Wigner basis.
#[derive(Debug, Clone)]
pub(crate) struct Monomial {
    pub flip: usize,
    pub phase: Vec<Complex64>,
}

impl Monomial {
    /// Majorana operator `c_k` (0-based, interleaved: `2m` and `2m + 1`
    /// belong to mode `m`), normalized so that `c_k² = 𝟙`:
    /// `c_{2m} = a_m + a_m†`, `c_{2m+1} = i(a_m − a_m†)`.
    pub fn majorana(k: usize, n_modes: usize) -> Self {
        let mode = k / 2;
        let shift = n_modes - 1 - mode;
        let flip = 1usize << shift;
        let before_mask = !((1usize << (shift + 1)) - 1);
        let dim = 1usize << n_modes;
        let phase = (0..dim)
            .map(|j| {
                let string = if (j & before_mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                let occupied = j & flip != 0;
                if k.is_multiple_of(2) {
                    Complex64::new(string, 0.0)
                } else if occupied {
                    I * string
                } else {
                    -I * string
                }
            })
            .collect();
        Self { flip, phase }
    }

    /// `self · other`.
    pub fn times(&self, other: &Self) -> Self {
        let phase = (0..other.phase.len())
            .map(|j| other.phase[j] * self.phase[j ^ other.flip])
            .collect();
        Self {
            flip: self.flip ^ other.flip,
            phase,
        }
    }

    pub fn add_to(&self, dense: &mut DMatrix<Complex64>, coeff: Complex64) {
        for (j, p) in self.phase.iter().enumerate() {
            dense[(j ^ self.flip, j)] += coeff * p;
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = self.phase.len();
        let mut m = DMatrix::zeros(dim, dim);
        self.add_to(&mut m, ONE);
        m
    }

    /// `Tr[A · M]` in `O(dim)`.
    pub fn trace_with(&self, a: &DMatrix<Complex64>) -> Complex64 {
        self.phase
            .iter()
            .enumerate()
            .map(|(j, p)| a[(j, j ^ self.flip)] * p)
            .sum()
    }

    /// `M · A` without a dense product.
    pub fn left_mul(&self, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = self.phase.len();
        let mut out = DMatrix::zeros(dim, a.ncols());
        for j in 0..dim {
            let target = j ^ self.flip;
            let p = self.phase[j];
            for c in 0..a.ncols() {
                out[(target, c)] = p * a[(j, c)];
            }
        }
        out
    }
}

pub(crate) fn majorana_monomials(n_modes: usize) -> Vec<Monomial> {
    (0..2 * n_modes).map(|k| Monomial::majorana(k, n_modes)).collect()
}

/// Annihilation operator of `mode` with the Jordan–Wigner sign string on
/// the modes before it.
pub fn annihilator(mode: usize, n_modes: usize) -> Result<FockOperator> {
    check_capacity(n_modes)?;
    if mode >= n_modes {
        return Err(Error::ModeIndex { index: mode, n_modes });
    }
    let c_re = Monomial::majorana(2 * mode, n_modes).to_dense();
    let c_im = Monomial::majorana(2 * mode + 1, n_modes).to_dense();
    // a = (c_{2m} − i c_{2m+1}) / 2
    let matrix = (c_re - c_im * I) * Complex64::new(0.5, 0.0);
    FockOperator::from_matrix(n_modes, matrix)
}

/// The `2n` Majorana operators `(c₁, c₂, …, c_{2n})` in mode-interleaved order.
pub fn majorana_ops(n_modes: usize) -> Result<Vec<FockOperator>> {
    check_capacity(n_modes)?;
    Ok(majorana_monomials(n_modes)
        .iter()
        .map(|m| FockOperator {
            n_modes,
            matrix: m.to_dense(),
        })
        .collect())
}

/// `H = Σᵢ ωᵢ aᵢ†aᵢ`, diagonal in the occupation basis.
pub fn hamiltonian(modes: &ModeSystem) -> Result<FockOperator> {
    let n = modes.n_modes();
    check_capacity(n)?;
    let dim = 1usize << n;
    let diag = nalgebra::DVector::from_iterator(
        dim,
        (0..dim).map(|j| Complex64::new(modes.bitstring_energy(j), 0.0)),
    );
    Ok(FockOperator {
        n_modes: n,
        matrix: DMatrix::from_diagonal(&diag),
    })
}

/// The three quadratic generators of Gaussian unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianKind {
    /// `R(θ) = exp(−iθ a†a)` on one mode.
    Rotation,
    /// `S(r) = exp[r(ab − b†a†)]` on two modes.
    Squeeze,
    /// `B(φ) = exp[φ(ab† + a†b)]` on two modes.
    Beamsplit,
}

pub(crate) fn check_modes(kind: GaussianKind, modes: &[usize], n_modes: usize) -> Result<()> {
    let needed = match kind {
        GaussianKind::Rotation => 1,
        GaussianKind::Squeeze | GaussianKind::Beamsplit => 2,
    };
    if modes.len() != needed {
        return Err(Error::Argument(format!(
            "{kind:?} acts on {needed} mode(s), got {}",
            modes.len()
        )));
    }
    if let Some(&bad) = modes.iter().find(|&&m| m >= n_modes) {
        return Err(Error::ModeIndex { index: bad, n_modes });
    }
    if needed == 2 && modes[0] == modes[1] {
        return Err(Error::Argument(format!(
            "{kind:?} needs two distinct modes, got ({}, {})",
            modes[0], modes[1]
        )));
    }
    Ok(())
}

/// Dense unitary for one of the Gaussian generators, by exponentiating its
/// quadratic generator.
pub fn fock_gaussian_unitary(
    kind: GaussianKind,
    angle: f64,
    modes: &[usize],
    n_modes: usize,
) -> Result<FockOperator> {
    check_capacity(n_modes)?;
    check_modes(kind, modes, n_modes)?;
    let a = annihilator(modes[0], n_modes)?.into_matrix();
    let generator = match kind {
        GaussianKind::Rotation => (a.adjoint() * &a) * (-I * angle),
        GaussianKind::Squeeze => {
            let b = annihilator(modes[1], n_modes)?.into_matrix();
            (&a * &b - b.adjoint() * a.adjoint()) * Complex64::new(angle, 0.0)
        }
        GaussianKind::Beamsplit => {
            let b = annihilator(modes[1], n_modes)?.into_matrix();
            (&a * b.adjoint() + a.adjoint() * &b) * Complex64::new(angle, 0.0)
        }
    };
    FockOperator::from_matrix(n_modes, generator.exp())
}

/// The self-inverse three-mode unitary exchanging `|010⟩ ↔ |101⟩` and
/// fixing every other basis state.
pub fn activation_unitary_3mode() -> FockOperator {
    swap_unitary(3, 0b010, 0b101)
}

/// Permutation unitary exchanging two basis states of `n_modes` modes.
pub fn swap_unitary(n_modes: usize, s: usize, s_prime: usize) -> FockOperator {
    let dim = 1usize << n_modes;
    let mut m = DMatrix::identity(dim, dim);
    if s != s_prime {
        m[(s, s)] = ZERO;
        m[(s_prime, s_prime)] = ZERO;
        m[(s, s_prime)] = ONE;
        m[(s_prime, s)] = ONE;
    }
    FockOperator { n_modes, matrix: m }
}

/// Phase-space action of a Gaussian unitary: the real `O` with
/// `U† c_k U = Σ_l O_kl c_l`. Under `ρ ↦ UρU†` the covariance matrix
/// transforms as `Γ ↦ OΓOᵀ`.
pub fn extract_orthogonal_action(u: &FockOperator) -> Result<OrthogonalTransform> {
    const TOL: f64 = 1e-10;
    let n = u.n_modes();
    let dim = u.dim();
    let majoranas = majorana_monomials(n);
    let u_dag = u.matrix.adjoint();
    let scale = 1.0 / dim as f64;
    let mut o = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for (k, ck) in majoranas.iter().enumerate() {
        let conj = &u_dag * ck.left_mul(&u.matrix);
        let mut rebuilt = DMatrix::<Complex64>::zeros(dim, dim);
        for (l, cl) in majoranas.iter().enumerate() {
            let coeff = cl.trace_with(&conj) * scale;
            if coeff.im.abs() > TOL {
                return Err(Error::Representation(format!(
                    "conjugated Majorana {k} has complex weight {coeff} on c_{l}"
                )));
            }
            o[(k, l)] = coeff.re;
            cl.add_to(&mut rebuilt, Complex64::new(coeff.re, 0.0));
        }
        let residue = (&conj - &rebuilt).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residue > TOL {
            return Err(Error::Representation(format!(
                "U†c_{k}U leaves the Majorana span (residue {residue:e})"
            )));
        }
    }
    OrthogonalTransform::new(o, TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a * b + b * a
    }

    #[test]
    fn car_holds_for_all_sizes() {
        for n in 1..=4 {
            let c = majorana_ops(n).unwrap();
            let dim = 1 << n;
            for i in 0..2 * n {
                for j in 0..2 * n {
                    let ac = anticommutator(c[i].matrix(), c[j].matrix());
                    let target: DMatrix<Complex64> = if i == j {
                        DMatrix::identity(dim, dim) * Complex64::new(2.0, 0.0)
                    } else {
                        DMatrix::zeros(dim, dim)
                    };
                    let err = (ac - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    assert!(err < 1e-12, "n={n} i={i} j={j} err={err}");
                }
                assert_eq!(c[i].matrix(), &c[i].matrix().adjoint());
            }
        }
    }

    #[test]
    fn single_mode_parity_identity() {
        // i c₁c₂ = 𝟙 − 2n̂ = diag(1, −1)
        let c = majorana_ops(1).unwrap();
        let prod = c[0].matrix() * c[1].matrix() * I;
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, -ONE]));
        assert!((prod - expected).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn annihilator_anticommutes() {
        let n = 3;
        for p in 0..n {
            for q in 0..n {
                let a = annihilator(p, n).unwrap().into_matrix();
                let b = annihilator(q, n).unwrap().into_matrix();
                let ab_dag = anticommutator(&a, &b.adjoint());
                let expected: DMatrix<Complex64> = if p == q {
                    DMatrix::identity(8, 8)
                } else {
                    DMatrix::zeros(8, 8)
                };
                assert!((ab_dag - expected).iter().all(|z| z.norm() < 1e-14));
                assert!(anticommutator(&a, &b).iter().all(|z| z.norm() < 1e-14));
            }
        }
    }

    #[test]
    fn annihilator_lowers_the_right_bit() {
        // a₁|100⟩ = |000⟩, a₂|110⟩ = −|100⟩ (one occupied mode before it)
        let a1 = annihilator(0, 3).unwrap();
        assert_eq!(a1.matrix()[(0b000, 0b100)], ONE);
        let a2 = annihilator(1, 3).unwrap();
        assert_eq!(a2.matrix()[(0b100, 0b110)], -ONE);
    }

    #[test]
    fn hamiltonian_spectra() {
        let h = hamiltonian(&ModeSystem::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(h.matrix()[(0, 0)], ZERO);
        assert_eq!(h.matrix()[(1, 1)], ONE);
        let h = hamiltonian(&ModeSystem::new(vec![1.0, 1.0]).unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|j| h.matrix()[(j, j)].re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 1.0, 2.0]);
        let h = hamiltonian(&ModeSystem::new(vec![1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(h.matrix()[(7, 7)].re, 6.0);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(majorana_ops(9), Err(Error::Capacity { .. })));
        assert!(matches!(majorana_ops(0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn gaussian_unitaries_are_unitary() {
        for (kind, modes) in [
            (GaussianKind::Rotation, vec![1]),
            (GaussianKind::Squeeze, vec![0, 2]),
            (GaussianKind::Beamsplit, vec![2, 1]),
        ] {
            let u = fock_gaussian_unitary(kind, 0.73, &modes, 3).unwrap();
            assert!(u.unitarity_defect() < 1e-12);
        }
        let id = fock_gaussian_unitary(GaussianKind::Rotation, 0.0, &[0], 2).unwrap();
        assert!(max_abs_diff_identity(id.matrix()) < 1e-15);
    }

    #[test]
    fn gaussian_unitary_rejects_bad_modes() {
        assert!(fock_gaussian_unitary(GaussianKind::Squeeze, 0.1, &[1, 1], 2).is_err());
        assert!(fock_gaussian_unitary(GaussianKind::Beamsplit, 0.1, &[0, 2], 2).is_err());
        assert!(fock_gaussian_unitary(GaussianKind::Rotation, 0.1, &[0, 1], 2).is_err());
    }

    #[test]
    fn squeeze_quarter_turn_empties_both_modes() {
        // On span{|00⟩, |11⟩} the generator ab − b†a† is a real rotation
        // generator, so S(π/2)|11⟩ = ±|00⟩.
        let u = fock_gaussian_unitary(GaussianKind::Squeeze, std::f64::consts::FRAC_PI_2, &[0, 1], 2)
            .unwrap();
        let amp = u.matrix()[(0b00, 0b11)];
        assert!((amp.norm() - 1.0).abs() < 1e-12);
        for j in 1..4 {
            assert!(u.matrix()[(j, 0b11)].norm() < 1e-12);
        }
    }

    #[test]
    fn beamsplit_mixes_single_excitations() {
        let phi = 0.4;
        let u = fock_gaussian_unitary(GaussianKind::Beamsplit, phi, &[0, 1], 2).unwrap();
        // column |10⟩ spreads onto |10⟩ and |01⟩ only
        let col = u.matrix().column(0b10);
        assert!((col[0b10].norm() - phi.cos()).abs() < 1e-12);
        assert!((col[0b01].norm() - phi.sin()).abs() < 1e-12);
        assert!(col[0b00].norm() < 1e-14 && col[0b11].norm() < 1e-14);
    }

    #[test]
    fn activation_unitary_is_an_involution_swapping_010_101() {
        let u = activation_unitary_3mode();
        assert_eq!(u.matrix()[(0b101, 0b010)], ONE);
        assert_eq!(u.matrix()[(0b010, 0b101)], ONE);
        assert_eq!(u.matrix()[(0, 0)], ONE);
        assert_eq!(u.matrix(), &u.matrix().adjoint());
        let sq = u.matrix() * u.matrix();
        assert_eq!(max_abs_diff_identity(&sq), 0.0);
    }

    #[test]
    fn extract_identity() {
        let o = extract_orthogonal_action(&FockOperator::identity(2).unwrap()).unwrap();
        assert!((o.matrix() - DMatrix::<f64>::identity(4, 4)).amax() < 1e-14);
    }

    #[test]
    fn extract_rejects_non_gaussian() {
        let err = extract_orthogonal_action(&activation_unitary_3mode()).unwrap_err();
        assert!(matches!(err, Error::Representation(_)));
    }
}
