//! Von Neumann, Shannon and relative entropies, all in bits.

use crate::density::{DensityOperator, POSITIVITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// σ eigenvalues below this define its kernel.
pub const KERNEL_TOL: f64 = 1e-12;
/// ρ weight on the kernel of σ above this makes `S(ρ‖σ)` infinite.
pub const SUPPORT_TOL: f64 = 1e-9;

/// `-x log₂ x` with `0 log 0 = 0`.
#[inline]
pub fn eta(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a probability vector. Non-positive entries contribute 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| eta(x)).sum()
}

/// Entropy of a spectrum. Eigenvalues in `(-1e-10, 0)` are clamped to zero;
/// anything more negative is rejected.
pub fn entropy_of_eigenvalues(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -POSITIVITY_TOL {
            return Err(Error::NotPositive(lambda));
        }
        s += eta(lambda);
    }
    Ok(s)
}

/// `S(ρ) = -Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_eigenvalues(&rho.eigenvalues())
}

/// Entropy of a raw Hermitian matrix (must be a valid state up to tolerance).
pub fn matrix_entropy(m: &CMatrix) -> Result<f64> {
    entropy_of_eigenvalues(&linalg::eigvals_hermitian(m)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    /// `supp ρ ⊄ supp σ`.
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }

    /// `f64::INFINITY` for the infinite case.
    pub fn value(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// `S(ρ‖σ) = Tr(ρ log₂ ρ − ρ log₂ σ)`, via eigendecompositions of both.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<RelativeEntropy> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeMismatch {
            rows: sigma.dim(),
            cols: sigma.dim(),
            expected: rho.dim(),
        });
    }
    let neg_s_rho = -von_neumann_entropy(rho)?;
    let sig = sigma.spectrum();
    let v = &sig.eigenvectors;
    // weights[k] = ⟨v_k|ρ|v_k⟩
    let rv = rho.matrix() * v;
    let mut cross = 0.0;
    for (k, &lambda) in sig.eigenvalues.iter().enumerate() {
        if lambda < -POSITIVITY_TOL {
            return Err(Error::NotPositive(lambda));
        }
        let w = v.column(k).dotc(&rv.column(k)).re;
        if lambda < KERNEL_TOL {
            if w > SUPPORT_TOL {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        cross += w * lambda.log2();
    }
    Ok(RelativeEntropy::Finite(neg_s_rho - cross))
}
