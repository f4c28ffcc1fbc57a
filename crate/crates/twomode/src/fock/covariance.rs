//! Quadrature covariance matrices and their symplectic data.
//!
//! Conventions: x = (a + a†)/√2, p = (a − a†)/(i√2), so [x, p] = i and the
//! vacuum covariance matrix is the 4×4 identity. The matrix is assembled from
//! the symmetrized second moments minus first-moment products,
//! γᵢⱼ = ⟨RᵢRⱼ + RⱼRᵢ⟩ − 2⟨Rᵢ⟩⟨Rⱼ⟩ with R = (x_A, p_A, x_B, p_B).

use nalgebra::{Matrix2, Matrix4};

use super::{FockError, LadderMonomial, LadderPolynomial, Mode, MomentTable};
use crate::C64;

/// Real symmetric 4×4 covariance matrix with 2×2 blocks A, B, C:
///
/// ```text
/// γ = ( A   C )
///     ( Cᵗ  B )
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    gamma: Matrix4<f64>,
}

impl CovarianceMatrix {
    /// Assemble from the diagonal blocks and the cross block.
    pub fn from_blocks(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>) -> Self {
        let mut gamma = Matrix4::zeros();
        gamma.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
        gamma.fixed_view_mut::<2, 2>(2, 2).copy_from(&b);
        gamma.fixed_view_mut::<2, 2>(0, 2).copy_from(&c);
        gamma.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
        Self { gamma }
    }

    /// Wrap an externally supplied matrix. Symmetry is the caller's claim;
    /// [`CovarianceMatrix::check_symmetric`] verifies it.
    pub fn from_matrix(gamma: Matrix4<f64>) -> Self {
        Self { gamma }
    }

    /// Build from first and second ladder moments (table order ≥ 2).
    pub fn from_moment_table(table: &MomentTable) -> Result<Self, FockError> {
        // Work with √2-scaled quadratures X = a + a†, P = −i(a − a†) so every
        // polynomial coefficient is ±1 or ±i; γ picks up the exact factor ½
        // at the end. Keeps γ(vacuum) = I free of roundoff.
        let quads = [
            quadrature_x(Mode::A),
            quadrature_p(Mode::A),
            quadrature_x(Mode::B),
            quadrature_p(Mode::B),
        ];
        let firsts: Vec<C64> = quads
            .iter()
            .map(|q| table.expectation(q))
            .collect::<Result<_, _>>()?;
        let mut gamma = Matrix4::zeros();
        for i in 0..4 {
            for j in i..4 {
                let sym = &(&quads[i] * &quads[j]) + &(&quads[j] * &quads[i]);
                // Hermitian combination: expectation is real up to roundoff
                let second = table.expectation(&sym)?.re;
                let v = 0.5 * (second - 2.0 * (firsts[i] * firsts[j]).re);
                gamma[(i, j)] = v;
                gamma[(j, i)] = v;
            }
        }
        Ok(Self { gamma })
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.gamma
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.gamma.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.gamma.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.gamma.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Largest |γ − γᵗ| entry.
    pub fn asymmetry(&self) -> f64 {
        let d = self.gamma - self.gamma.transpose();
        d.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn check_symmetric(&self, tol: f64) -> Result<(), FockError> {
        let max_dev = self.asymmetry();
        if max_dev > tol {
            return Err(FockError::AsymmetricCovariance { max_dev });
        }
        Ok(())
    }

    /// Simon's separability quantity D = det γ + 1 − det A − det B + 2 det C.
    ///
    /// Non-negative for every separable state; negative D certifies
    /// entanglement from second moments alone.
    pub fn simon_d(&self) -> f64 {
        self.gamma.determinant() + 1.0 - self.block_a().determinant() - self.block_b().determinant()
            + 2.0 * self.block_c().determinant()
    }

    /// Symplectic eigenvalues (ν₋, ν₊); a physical state has ν₋ ≥ 1.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        let delta = self.block_a().determinant()
            + self.block_b().determinant()
            + 2.0 * self.block_c().determinant();
        let disc = (delta * delta - 4.0 * self.gamma.determinant()).max(0.0);
        let nu_plus_sq = 0.5 * (delta + disc.sqrt());
        let nu_minus_sq = 0.5 * (delta - disc.sqrt());
        (nu_minus_sq.max(0.0).sqrt(), nu_plus_sq.max(0.0).sqrt())
    }

    /// Smallest eigenvalue of the Hermitian matrix γ + iΩ; non-negative (up
    /// to tolerance) for physical covariance matrices.
    pub fn min_eig_gamma_plus_i_omega(&self) -> f64 {
        let omega = symplectic_form();
        let h = Matrix4::from_fn(|i, j| C64::new(self.gamma[(i, j)], omega[(i, j)]));
        let eig = nalgebra::SymmetricEigen::new(h);
        eig.eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// Whether γ + iΩ ⪰ −tol, i.e. the matrix is physical up to truncation
    /// noise.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eig_gamma_plus_i_omega() >= -tol
    }
}

/// Standard two-mode symplectic form for R = (x_A, p_A, x_B, p_B).
pub fn symplectic_form() -> Matrix4<f64> {
    let mut o = Matrix4::zeros();
    o[(0, 1)] = 1.0;
    o[(1, 0)] = -1.0;
    o[(2, 3)] = 1.0;
    o[(3, 2)] = -1.0;
    o
}

/// √2·x = a + a†.
fn quadrature_x(mode: Mode) -> LadderPolynomial {
    let one = C64::new(1.0, 0.0);
    let (raise, lower) = mode_monomials(mode);
    LadderPolynomial::from_terms([(lower, one), (raise, one)])
}

/// √2·p = (a − a†)/i = −i·a + i·a†.
fn quadrature_p(mode: Mode) -> LadderPolynomial {
    let i = C64::new(0.0, 1.0);
    let (raise, lower) = mode_monomials(mode);
    LadderPolynomial::from_terms([(lower, -i), (raise, i)])
}

fn mode_monomials(mode: Mode) -> (LadderMonomial, LadderMonomial) {
    match mode {
        Mode::A => (
            LadderMonomial::new(1, 0, 0, 0),
            LadderMonomial::new(0, 1, 0, 0),
        ),
        Mode::B => (
            LadderMonomial::new(0, 0, 1, 0),
            LadderMonomial::new(0, 0, 0, 1),
        ),
    }
}
