//! Density operators over an ordered tensor product of subsystems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Spectrum, HERMITIAN_TOL};

/// Trace tolerance for validated density operators.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted as numerical noise.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Local Hilbert-space dimensions, first subsystem slowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemDims(Vec<usize>);

impl SubsystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::NoSubsystems);
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        Ok(SubsystemDims(dims))
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, j: usize) -> Option<usize> {
        self.0.get(j).copied()
    }

    pub fn all_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    /// Dimensions of the listed subsystems, in listed order.
    pub fn select(&self, keep: &[usize]) -> Result<SubsystemDims> {
        validate_selection(self.len(), keep)?;
        Ok(SubsystemDims(keep.iter().map(|&k| self.0[k]).collect()))
    }

    /// `self ⊗ other`.
    pub fn concat(&self, other: &SubsystemDims) -> SubsystemDims {
        SubsystemDims(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Row-major strides: `index = Σ digit_k * stride_k`.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.len()];
        for k in (0..self.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.0[k + 1];
        }
        strides
    }
}

pub(crate) fn validate_selection(n: usize, keep: &[usize]) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::InvalidSelection("empty subsystem set".into()));
    }
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n {
            return Err(Error::InvalidSelection(format!(
                "subsystem {k} out of range for {n} subsystems"
            )));
        }
        if seen[k] {
            return Err(Error::InvalidSelection(format!(
                "subsystem {k} listed twice"
            )));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite operator tagged with its
/// subsystem structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: SubsystemDims,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: CMatrix, dims: SubsystemDims) -> Result<Self> {
        let total = dims.total();
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::ShapeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                expected: total,
            });
        }
        let herr = linalg::hermiticity_error(&matrix);
        if herr > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herr));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let min = linalg::eigvals_hermitian(&matrix)?[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityOperator { matrix, dims })
    }

    /// For operators valid by construction (channel outputs, reductions).
    pub(crate) fn from_parts_unchecked(matrix: CMatrix, dims: SubsystemDims) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.total());
        DensityOperator { matrix, dims }
    }

    /// `|ψ⟩⟨ψ|` for a normalised copy of `psi`.
    pub fn from_pure(psi: &CVector, dims: SubsystemDims) -> Result<Self> {
        if psi.len() != dims.total() {
            return Err(Error::ShapeMismatch {
                rows: psi.len(),
                cols: 1,
                expected: dims.total(),
            });
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        let v = psi / Complex64::new(norm, 0.0);
        Ok(DensityOperator {
            matrix: &v * v.adjoint(),
            dims,
        })
    }

    pub fn maximally_mixed(dims: SubsystemDims) -> Self {
        let d = dims.total();
        DensityOperator {
            matrix: CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn spectrum(&self) -> Spectrum {
        linalg::eig_hermitian_unchecked(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvals_hermitian(&self.matrix).expect("density operator is Hermitian")
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            dims: self.dims.concat(&other.dims),
        }
    }

    /// `U ρ U†` for a unitary acting on the full space.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityOperator> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::ShapeMismatch {
                rows: u.nrows(),
                cols: u.ncols(),
                expected: self.dim(),
            });
        }
        Ok(DensityOperator {
            matrix: u * &self.matrix * u.adjoint(),
            dims: self.dims.clone(),
        })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        partial_trace(self, keep)
    }

    /// Single-subsystem reduction `Tr_{≠j} ρ`.
    pub fn marginal(&self, j: usize) -> Result<DensityOperator> {
        partial_trace(self, &[j])
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).diagonal().sum().re
    }
}

/// For every index of the full space, its (kept, rest) sub-indices.
fn split_indices(dims: &SubsystemDims, keep: &[usize]) -> (Vec<usize>, Vec<usize>, usize, usize) {
    let d = dims.as_slice();
    let rest: Vec<usize> = (0..d.len()).filter(|k| !keep.contains(k)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| d[k]).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&k| d[k]).collect();
    let d_keep: usize = keep_dims.iter().product();
    let d_rest: usize = rest_dims.iter().product();
    let strides = dims.strides();
    let total = dims.total();
    let mut kept_index = vec![0; total];
    let mut rest_index = vec![0; total];
    for i in 0..total {
        let digit = |k: usize| (i / strides[k]) % d[k];
        let mut a = 0;
        for (pos, &k) in keep.iter().enumerate() {
            a = a * keep_dims[pos] + digit(k);
        }
        let mut r = 0;
        for (pos, &k) in rest.iter().enumerate() {
            r = r * rest_dims[pos] + digit(k);
        }
        kept_index[i] = a;
        rest_index[i] = r;
    }
    (kept_index, rest_index, d_keep, d_rest)
}

/// Reduced operator on the `keep` subsystems. The output subsystems appear
/// in the order listed in `keep`, so this also permutes subsystems.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let dims = rho.dims();
    let out_dims = dims.select(keep)?;
    let (kept, rest, d_keep, d_rest) = split_indices(dims, keep);
    // table[r][a] = full index with kept digits a and traced digits r
    let mut table = vec![0usize; d_keep * d_rest];
    for i in 0..dims.total() {
        table[rest[i] * d_keep + kept[i]] = i;
    }
    let m = rho.matrix();
    let mut out = CMatrix::zeros(d_keep, d_keep);
    for r in 0..d_rest {
        let row = &table[r * d_keep..(r + 1) * d_keep];
        for (a, &ia) in row.iter().enumerate() {
            for (b, &ib) in row.iter().enumerate() {
                out[(a, b)] += m[(ia, ib)];
            }
        }
    }
    Ok(DensityOperator::from_parts_unchecked(out, out_dims))
}

/// Reduced state of the pure state `psi` on `keep`, without forming `|ψ⟩⟨ψ|`.
pub fn reduce_pure(psi: &CVector, dims: &SubsystemDims, keep: &[usize]) -> Result<DensityOperator> {
    if psi.len() != dims.total() {
        return Err(Error::ShapeMismatch {
            rows: psi.len(),
            cols: 1,
            expected: dims.total(),
        });
    }
    let out_dims = dims.select(keep)?;
    let (kept, rest, d_keep, d_rest) = split_indices(dims, keep);
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::NotNormalized(0.0));
    }
    let mut amp = CMatrix::zeros(d_keep, d_rest);
    for (i, &c) in psi.iter().enumerate() {
        amp[(kept[i], rest[i])] = c / norm;
    }
    let out = &amp * amp.adjoint();
    Ok(DensityOperator::from_parts_unchecked(out, out_dims))
}
