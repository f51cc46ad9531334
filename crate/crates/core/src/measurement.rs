//! Local projective (von Neumann) measurements and the non-selective
//! dephasing channels `Φ_j(ρ_j) = Σ Π ρ_j Π` and `Φ(ρ) = Σ_k Π_k ρ Π_k`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::density::{DensityOperator, SubsystemDims};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

const ORTHONORMAL_TOL: f64 = 1e-10;
/// Eigenvalue gap below which a reduced state counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Bloch angles of a qubit measurement direction.
///
/// The basis is `|+⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`,
/// `|−⟩ = −e^{−iφ} sin(θ/2)|↑⟩ + cos(θ/2)|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBasisAngles {
    theta: f64,
    phi: f64,
}

impl QubitBasisAngles {
    /// Requires `θ ∈ [0, π)` and `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..PI).contains(&theta) {
            return Err(Error::OutOfRange(format!("theta = {theta} not in [0, π)")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::OutOfRange(format!("phi = {phi} not in [0, 2π)")));
        }
        Ok(QubitBasisAngles { theta, phi })
    }

    /// Map arbitrary real angles onto the canonical range without changing
    /// the projector set: shifting θ by π only swaps `|+⟩` and `|−⟩`.
    pub fn wrapped(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        if t >= PI {
            t = 0.0;
        }
        let mut p = phi.rem_euclid(2.0 * PI);
        if p >= 2.0 * PI {
            p = 0.0;
        }
        QubitBasisAngles { theta: t, phi: p }
    }

    /// σᶻ eigenbasis.
    pub fn sigma_z() -> Self {
        QubitBasisAngles {
            theta: 0.0,
            phi: 0.0,
        }
    }

    /// σˣ eigenbasis.
    pub fn sigma_x() -> Self {
        QubitBasisAngles {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }

    /// Angles whose `|+⟩` is proportional to `a|↑⟩ + b|↓⟩`.
    pub fn from_state(a: Complex64, b: Complex64) -> Self {
        let theta = 2.0 * b.norm().atan2(a.norm());
        let phi = if b.norm() == 0.0 || a.norm() == 0.0 {
            0.0
        } else {
            b.arg() - a.arg()
        };
        Self::wrapped(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(|+⟩, |−⟩)` as printed above; valid for unwrapped angles too.
    pub(crate) fn kets(theta: f64, phi: f64) -> ([Complex64; 2], [Complex64; 2]) {
        let (s, c) = (theta / 2.0).sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let plus = [Complex64::new(c, 0.0), e * s];
        let minus = [-e.conj() * s, Complex64::new(c, 0.0)];
        (plus, minus)
    }
}

/// Complete set of orthonormal rank-1 projectors `{|b_k⟩⟨b_k|}` on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBasis {
    /// Columns are the basis vectors.
    vectors: CMatrix,
}

impl LocalBasis {
    /// Columns of `vectors` must be orthonormal.
    pub fn from_vectors(vectors: CMatrix) -> Result<Self> {
        if vectors.nrows() != vectors.ncols() || vectors.nrows() < 2 {
            return Err(Error::ShapeMismatch {
                rows: vectors.nrows(),
                cols: vectors.ncols(),
                expected: vectors.nrows().max(2),
            });
        }
        let d = vectors.nrows();
        let gram = vectors.adjoint() * &vectors;
        let err = linalg::max_abs_diff(&gram, &CMatrix::identity(d, d));
        if err > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(err));
        }
        Ok(LocalBasis { vectors })
    }

    pub(crate) fn from_vectors_unchecked(vectors: CMatrix) -> Self {
        LocalBasis { vectors }
    }

    /// Standard basis of dimension `d` (σᶻ eigenbasis for a qubit).
    pub fn computational(d: usize) -> Self {
        LocalBasis {
            vectors: CMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn projector(&self, k: usize) -> CMatrix {
        let v = self.vectors.column(k);
        v * v.adjoint()
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        (0..self.dim()).map(|k| self.projector(k)).collect()
    }

    /// `⟨b_k|ρ|b_k⟩` for each k.
    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        let rv = rho * &self.vectors;
        (0..self.dim())
            .map(|k| self.vectors.column(k).dotc(&rv.column(k)).re)
            .collect()
    }
}

/// Eigenbasis of `σ_n` for the direction given by `angles`.
pub fn qubit_basis(angles: QubitBasisAngles) -> LocalBasis {
    qubit_basis_raw(angles.theta, angles.phi)
}

/// As [`qubit_basis`] for unconstrained angles.
pub(crate) fn qubit_basis_raw(theta: f64, phi: f64) -> LocalBasis {
    let (plus, minus) = QubitBasisAngles::kets(theta, phi);
    LocalBasis {
        vectors: CMatrix::from_row_slice(2, 2, &[plus[0], minus[0], plus[1], minus[1]]),
    }
}

/// One local basis per subsystem; `Π_k = Π^{j_1} ⊗ ⋯ ⊗ Π^{j_N}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    locals: Vec<LocalBasis>,
}

impl ProductBasis {
    pub fn new(locals: Vec<LocalBasis>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::NoSubsystems);
        }
        Ok(ProductBasis { locals })
    }

    pub fn from_angles(angles: &[QubitBasisAngles]) -> Result<Self> {
        Self::new(angles.iter().map(|&a| qubit_basis(a)).collect())
    }

    pub fn uniform(local: &LocalBasis, n: usize) -> Result<Self> {
        Self::new(vec![local.clone(); n])
    }

    pub fn sigma_z(n: usize) -> Self {
        ProductBasis {
            locals: vec![LocalBasis::computational(2); n],
        }
    }

    pub fn sigma_x(n: usize) -> Self {
        ProductBasis {
            locals: vec![qubit_basis(QubitBasisAngles::sigma_x()); n],
        }
    }

    /// Computational basis for arbitrary local dimensions.
    pub fn computational(dims: &SubsystemDims) -> Self {
        ProductBasis {
            locals: dims
                .as_slice()
                .iter()
                .map(|&d| LocalBasis::computational(d))
                .collect(),
        }
    }

    pub fn locals(&self) -> &[LocalBasis] {
        &self.locals
    }

    pub fn local(&self, j: usize) -> &LocalBasis {
        &self.locals[j]
    }

    pub fn len(&self) -> usize {
        self.locals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }

    pub fn matches(&self, dims: &SubsystemDims) -> bool {
        self.locals.len() == dims.len()
            && self
                .locals
                .iter()
                .zip(dims.as_slice())
                .all(|(b, &d)| b.dim() == d)
    }

    pub(crate) fn check(&self, dims: &SubsystemDims) -> Result<()> {
        if self.matches(dims) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `⊗_j V_j`, columns are the product basis vectors.
    pub fn unitary(&self) -> CMatrix {
        linalg::kron_all(self.locals.iter().map(|b| &b.vectors))
    }

    /// `(⊗V_j)† ρ (⊗V_j)`, applied one subsystem at a time.
    pub fn rotate_into(&self, rho: &CMatrix) -> CMatrix {
        let dims: Vec<usize> = self.locals.iter().map(LocalBasis::dim).collect();
        let mut m = rho.clone();
        let total = m.nrows();
        let mut stride = total;
        for (j, local) in self.locals.iter().enumerate() {
            let d = dims[j];
            stride /= d;
            let v = &local.vectors;
            let vd = v.adjoint();
            // left: rows mixed by V†
            apply_local_rows(&mut m, &vd, d, stride);
            // right: columns mixed by V; transpose trick via adjoint twice
            let mut mt = m.adjoint();
            apply_local_rows(&mut mt, &vd, d, stride);
            m = mt.adjoint();
        }
        m
    }

    /// Outcome probabilities `p_k = Tr(Π_k ρ)`, k in row-major index order.
    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        // p_k = Σ_j (U†ρ)_{kj} U_{jk}; only the row rotation is needed.
        let total = rho.nrows();
        let mut a = rho.clone();
        let mut stride = total;
        for local in &self.locals {
            let d = local.dim();
            stride /= d;
            apply_local_rows(&mut a, &local.vectors.adjoint(), d, stride);
        }
        let u = self.unitary();
        (0..total)
            .map(|k| (0..total).map(|j| (a[(k, j)] * u[(j, k)]).re).sum::<f64>())
            .collect()
    }
}

/// `m ← (1 ⊗ a ⊗ 1) m` where `a` acts on the factor with the given
/// dimension and stride.
fn apply_local_rows(m: &mut CMatrix, a: &CMatrix, d: usize, stride: usize) {
    let total = m.nrows();
    let block = d * stride;
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    for col in 0..m.ncols() {
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (r, b) in buf.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..d {
                        acc += a[(r, s)] * m[(base + s * stride, col)];
                    }
                    *b = acc;
                }
                for (r, b) in buf.iter().enumerate() {
                    m[(base + r * stride, col)] = *b;
                }
            }
        }
    }
}

/// Non-selective measurement in the product basis: `Φ(ρ) = Σ_k Π_k ρ Π_k`.
pub fn dephase(rho: &DensityOperator, basis: &ProductBasis) -> Result<DensityOperator> {
    basis.check(rho.dims())?;
    let p = basis.probabilities(rho.matrix());
    let u = basis.unitary();
    Ok(DensityOperator::from_parts_unchecked(
        diag_in_basis(&u, &p),
        rho.dims().clone(),
    ))
}

/// `Φ_j(ρ_j) = Σ Π ρ_j Π` for a single-subsystem state.
pub fn local_dephase(rho_j: &DensityOperator, basis_j: &LocalBasis) -> Result<DensityOperator> {
    if rho_j.n_subsystems() != 1 || rho_j.dim() != basis_j.dim() {
        return Err(Error::BasisMismatch);
    }
    let p = basis_j.probabilities(rho_j.matrix());
    Ok(DensityOperator::from_parts_unchecked(
        diag_in_basis(&basis_j.vectors, &p),
        rho_j.dims().clone(),
    ))
}

fn diag_in_basis(u: &CMatrix, p: &[f64]) -> CMatrix {
    let mut scaled = u.clone();
    for (k, &pk) in p.iter().enumerate() {
        scaled.column_mut(k).scale_mut(pk);
    }
    scaled * u.adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedBasis {
    pub basis: LocalBasis,
    /// Reduced state had (near-)degenerate eigenvalues; the computational
    /// basis was used instead of its eigenvectors.
    pub degenerate: bool,
}

/// Eigenbasis of `Tr_{≠j} ρ`. When any eigenvalue gap is below
/// [`DEGENERACY_GAP`] the computational (σᶻ) basis is returned and flagged.
pub fn reduced_eigenbasis(rho: &DensityOperator, j: usize) -> Result<ReducedBasis> {
    if j >= rho.n_subsystems() {
        return Err(Error::InvalidSelection(format!(
            "subsystem {j} out of range for {} subsystems",
            rho.n_subsystems()
        )));
    }
    let rho_j = rho.marginal(j)?;
    Ok(eigenbasis_of(&rho_j))
}

pub(crate) fn eigenbasis_of(rho_j: &DensityOperator) -> ReducedBasis {
    let spec = rho_j.spectrum();
    let degenerate = spec
        .eigenvalues
        .windows(2)
        .any(|w| (w[1] - w[0]).abs() < DEGENERACY_GAP);
    if degenerate {
        ReducedBasis {
            basis: LocalBasis::computational(rho_j.dim()),
            degenerate: true,
        }
    } else {
        ReducedBasis {
            basis: LocalBasis::from_vectors_unchecked(spec.eigenvectors),
            degenerate: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, pauli};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn qubit(m: [f64; 4]) -> DensityOperator {
        DensityOperator::new(
            CMatrix::from_row_slice(2, 2, &[c(m[0]), c(m[1]), c(m[2]), c(m[3])]),
            SubsystemDims::qubits(1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn angle_ranges() {
        assert!(QubitBasisAngles::new(PI, 0.0).is_err());
        assert!(QubitBasisAngles::new(0.0, 2.0 * PI).is_err());
        assert!(QubitBasisAngles::new(-0.1, 0.0).is_err());
        let w = QubitBasisAngles::wrapped(-0.3, 7.0);
        assert!((0.0..PI).contains(&w.theta()) && (0.0..2.0 * PI).contains(&w.phi()));
    }

    #[test]
    fn zero_rotation_is_sigma_z() {
        let b = qubit_basis(QubitBasisAngles::sigma_z());
        assert_eq!(
            b.projector(0),
            CMatrix::from_row_slice(2, 2, &[c(1.), c(0.), c(0.), c(0.)])
        );
        assert_eq!(
            b.projector(1),
            CMatrix::from_row_slice(2, 2, &[c(0.), c(0.), c(0.), c(1.)])
        );
    }

    #[test]
    fn half_pi_is_sigma_x() {
        // θ = π/2, φ = 0: |±⟩ = (|↑⟩ ± |↓⟩)/√2 up to sign, so P± = (1 ± σˣ)/2.
        let b = qubit_basis(QubitBasisAngles::sigma_x());
        let id = pauli::identity(2);
        let x = pauli::x();
        assert!(max_abs_diff(&b.projector(0), &((&id + &x) * c(0.5))) < 1e-15);
        assert!(max_abs_diff(&b.projector(1), &((&id - &x) * c(0.5))) < 1e-15);
    }

    #[test]
    fn wrapping_preserves_projector_set() {
        for &(t, p) in &[(-0.4, 1.0), (3.7, -2.0), (7.1, 9.9), (PI, 0.3)] {
            let raw = qubit_basis_raw(t, p);
            let w = qubit_basis(QubitBasisAngles::wrapped(t, p));
            let same = max_abs_diff(&raw.projector(0), &w.projector(0)) < 1e-12
                && max_abs_diff(&raw.projector(1), &w.projector(1)) < 1e-12;
            let swapped = max_abs_diff(&raw.projector(0), &w.projector(1)) < 1e-12
                && max_abs_diff(&raw.projector(1), &w.projector(0)) < 1e-12;
            assert!(same || swapped, "({t}, {p})");
        }
    }

    #[test]
    fn from_state_roundtrip() {
        let a = QubitBasisAngles::new(1.1, 4.0).unwrap();
        let (plus, _) = QubitBasisAngles::kets(a.theta(), a.phi());
        let phase = Complex64::from_polar(1.0, 0.7);
        let back = QubitBasisAngles::from_state(plus[0] * phase, plus[1] * phase);
        assert!((back.theta() - a.theta()).abs() < 1e-12);
        assert!((back.phi() - a.phi()).abs() < 1e-12);
    }

    #[test]
    fn local_basis_validation() {
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.), c(1.), c(0.), c(1.)]);
        assert!(matches!(
            LocalBasis::from_vectors(bad),
            Err(Error::NotOrthonormal(_))
        ));
    }

    #[test]
    fn local_dephase_cases() {
        let mixed = DensityOperator::maximally_mixed(SubsystemDims::qubits(1).unwrap());
        let any = qubit_basis(QubitBasisAngles::new(0.8, 2.5).unwrap());
        assert!(
            max_abs_diff(
                local_dephase(&mixed, &any).unwrap().matrix(),
                mixed.matrix()
            ) < 1e-15
        );

        let plus_x = qubit([0.5, 0.5, 0.5, 0.5]);
        let out = local_dephase(&plus_x, &LocalBasis::computational(2)).unwrap();
        assert!(max_abs_diff(out.matrix(), mixed.matrix()) < 1e-15);

        let rho = qubit([0.6, 0.2, 0.2, 0.4]);
        let own = eigenbasis_of(&rho);
        assert!(!own.degenerate);
        assert!(
            max_abs_diff(
                local_dephase(&rho, &own.basis).unwrap().matrix(),
                rho.matrix()
            ) < 1e-14
        );
    }

    #[test]
    fn dephase_diagonal_is_fixed_point() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.1), c(0.2), c(0.3), c(0.4)]));
        let rho = DensityOperator::new(d, SubsystemDims::qubits(2).unwrap()).unwrap();
        let out = dephase(&rho, &ProductBasis::sigma_z(2)).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
        assert!(matches!(
            dephase(&rho, &ProductBasis::sigma_z(3)),
            Err(Error::BasisMismatch)
        ));
    }

    #[test]
    fn rotate_into_matches_kron_route() {
        let basis = ProductBasis::new(vec![
            qubit_basis(QubitBasisAngles::new(0.3, 1.2).unwrap()),
            LocalBasis::computational(3),
            qubit_basis(QubitBasisAngles::new(2.0, 5.0).unwrap()),
        ])
        .unwrap();
        let m = CMatrix::from_fn(12, 12, |i, j| {
            Complex64::new((i * 7 + j) as f64 % 5.0, (i as f64 - j as f64) * 0.1)
        });
        let u = basis.unitary();
        let expected = u.adjoint() * &m * &u;
        assert!(max_abs_diff(&basis.rotate_into(&m), &expected) < 1e-12);
    }

    #[test]
    fn reduced_eigenbasis_rules() {
        let diag = qubit([0.7, 0.0, 0.0, 0.3]).tensor(&qubit([0.5, 0.0, 0.0, 0.5]));
        let r0 = reduced_eigenbasis(&diag, 0).unwrap();
        assert!(!r0.degenerate);
        for k in 0..2 {
            let p = r0.basis.projector(k);
            assert!(p[(0, 1)].norm() < 1e-14);
        }
        let r1 = reduced_eigenbasis(&diag, 1).unwrap();
        assert!(r1.degenerate);
        assert_eq!(r1.basis, LocalBasis::computational(2));
        assert!(reduced_eigenbasis(&diag, 2).is_err());
    }
}
