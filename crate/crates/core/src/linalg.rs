//! Dense complex matrices, Kronecker products and the Hermitian eigensolver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli and identity matrices in the `{|↑⟩, |↓⟩}` basis.
pub mod pauli {
    use super::*;

    pub fn identity(d: usize) -> CMatrix {
        CMatrix::identity(d, d)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }
}

/// Kronecker product `a ⊗ b`; `a` indexes the slow (outer) block.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Left-to-right Kronecker product of a list. An empty list gives the 1x1 identity.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(CMatrix::identity(1, 1), |acc, m| acc.kronecker(m))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |m - m†|` over entries.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    err
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// Eigen-decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(lambda);
        }
        scaled * v.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch {
            rows: m.nrows(),
            cols: m.ncols(),
            expected: m.nrows(),
        });
    }
    Ok(())
}

/// Hermitian eigen-decomposition with ascending eigenvalues.
pub fn eig_hermitian(m: &CMatrix) -> Result<Spectrum> {
    check_square(m)?;
    let herr = hermiticity_error(m);
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    Ok(eig_hermitian_unchecked(m))
}

pub(crate) fn eig_hermitian_unchecked(m: &CMatrix) -> Spectrum {
    let n = m.nrows();
    if n == 0 {
        return Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        };
    }
    // Symmetrise so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    let herr = hermiticity_error(m);
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kron_identity_and_diagonal() {
        assert_eq!(
            kron(&pauli::identity(2), &pauli::identity(2)),
            pauli::identity(4)
        );
        let zz = kron(&pauli::z(), &pauli::z());
        let expected =
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.), c(-1.), c(-1.), c(1.)]));
        assert_eq!(zz, expected);
    }

    #[test]
    fn kron_matches_index_formula() {
        // (i1 i2, j1 j2) -> a[i1, j1] b[i2, j2] with a on the slow index.
        let a = pauli::x();
        let b = pauli::z();
        let k = kron(&a, &b);
        for i1 in 0..2 {
            for i2 in 0..2 {
                for j1 in 0..2 {
                    for j2 in 0..2 {
                        assert_eq!(k[(2 * i1 + i2, 2 * j1 + j2)], a[(i1, j1)] * b[(i2, j2)]);
                    }
                }
            }
        }
        // σˣ ⊗ σᶻ: zero diagonal blocks, σᶻ on the off-diagonal blocks.
        assert_eq!(k[(0, 2)], c(1.));
        assert_eq!(k[(1, 3)], c(-1.));
        assert_eq!(k[(0, 0)], ZERO);
    }

    #[test]
    fn kron_all_empty_is_scalar_one() {
        let empty: Vec<CMatrix> = Vec::new();
        assert_eq!(kron_all(&empty), CMatrix::identity(1, 1));
        assert_eq!(kron_all(&[pauli::z(), pauli::x(), pauli::y()]).nrows(), 8);
    }

    #[test]
    fn eig_pauli() {
        let s = eig_hermitian(&pauli::z()).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 1.0]);
        let s = eig_hermitian(&pauli::x()).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvectors up to phase: |⟨v|(1,±1)/√2⟩| = 1.
        let plus = s.eigenvectors.column(1);
        let minus = s.eigenvectors.column(0);
        assert!(((plus[0] + plus[1]) * c(r)).norm() > 1.0 - 1e-12);
        assert!(((minus[0] - minus[1]) * c(r)).norm() > 1.0 - 1e-12);
    }

    #[test]
    fn eig_reconstructs_and_rejects_non_hermitian() {
        let m = kron(&pauli::y(), &pauli::x()) + kron(&pauli::z(), &pauli::identity(2)) * c(0.3);
        let s = eig_hermitian(&m).unwrap();
        assert!(max_abs_diff(&s.reconstruct(), &m) < 1e-12);
        let vv = s.eigenvectors.adjoint() * &s.eigenvectors;
        assert!(max_abs_diff(&vv, &pauli::identity(4)) < 1e-12);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));

        let mut bad = pauli::x();
        bad[(0, 1)] = c(2.0);
        assert!(matches!(eig_hermitian(&bad), Err(Error::NotHermitian(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            eig_hermitian(&rect),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
