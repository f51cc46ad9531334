use nalgebra::{DMatrix, DVector};

use super::{ChainSpec, DENSE_SITE_LIMIT};
use crate::error::{Error, Result};
use crate::exec::Execution;

fn z(index: usize, mask: usize) -> f64 {
    if index & mask == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Per-site flip masks `(σ_j, τ_j)`.
fn site_masks(spec: &ChainSpec) -> Vec<(usize, usize)> {
    (0..spec.sites())
        .map(|j| (spec.mask(spec.sigma(j)), spec.mask(spec.tau(j))))
        .collect()
}

fn diagonal_element(spec: &ChainSpec, masks: &[(usize, usize)], i: usize) -> f64 {
    let m = spec.sites();
    let mut acc = 0.0;
    for j in 0..m {
        let (s0, t0) = masks[j];
        let (s1, t1) = masks[(j + 1) % m];
        let zz_s = z(i, s0) * z(i, s1);
        let zz_t = z(i, t0) * z(i, t1);
        acc += zz_s + zz_t + spec.delta * zz_s * zz_t;
    }
    -spec.coupling * spec.beta * acc
}

/// `y = H x` without storing H.
pub fn apply_hamiltonian(spec: &ChainSpec, x: &[f64], y: &mut [f64], exec: Execution) {
    assert_eq!(x.len(), spec.dim());
    assert_eq!(y.len(), spec.dim());
    let masks = site_masks(spec);
    let j = spec.coupling;
    let delta = spec.delta;
    exec.fill(y, |i| {
        let mut acc = diagonal_element(spec, &masks, i) * x[i];
        for &(s, t) in &masks {
            acc -= j * (x[i ^ s] + x[i ^ t] + delta * x[i ^ s ^ t]);
        }
        acc
    });
}

pub(crate) fn check_dense_budget(spec: &ChainSpec) -> Result<()> {
    if spec.sites() > DENSE_SITE_LIMIT {
        return Err(Error::OverBudget {
            sites: spec.sites(),
            limit: DENSE_SITE_LIMIT,
        });
    }
    Ok(())
}

/// Dense real-symmetric Hamiltonian of dimension `4^M`.
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    check_dense_budget(spec)?;
    let d = spec.dim();
    let masks = site_masks(spec);
    let mut h = DMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] += diagonal_element(spec, &masks, i);
        for &(s, t) in &masks {
            h[(i, i ^ s)] -= spec.coupling;
            h[(i, i ^ t)] -= spec.coupling;
            h[(i, i ^ s ^ t)] -= spec.coupling * spec.delta;
        }
    }
    Ok(h)
}

pub(crate) fn parity_masks(spec: &ChainSpec) -> (usize, usize) {
    site_masks(spec)
        .iter()
        .fold((0, 0), |(a, b), &(s, t)| (a | s, b | t))
}

/// `P₁ = ⊗_j σˣ_j` and `P₂ = ⊗_j τˣ_j` as dense permutation matrices.
pub fn parity_operators(sites: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let spec = ChainSpec::new(sites, 0.0, 0.0)?;
    check_dense_budget(&spec)?;
    let (ms, mt) = parity_masks(&spec);
    let d = spec.dim();
    let mut p1 = DMatrix::zeros(d, d);
    let mut p2 = DMatrix::zeros(d, d);
    for i in 0..d {
        p1[(i ^ ms, i)] = 1.0;
        p2[(i ^ mt, i)] = 1.0;
    }
    Ok((p1, p2))
}

/// `(⟨P₁⟩, ⟨P₂⟩)` for a normalised real state.
pub fn parity_expectations(spec: &ChainSpec, psi: &DVector<f64>) -> (f64, f64) {
    let (ms, mt) = parity_masks(spec);
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for (i, &v) in psi.iter().enumerate() {
        e1 += v * psi[i ^ ms];
        e2 += v * psi[i ^ mt];
    }
    (e1, e2)
}

/// Joint parity sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    /// P₁ = +1, P₂ = +1.
    Q0,
    /// P₁ = +1, P₂ = −1.
    Q1,
    /// P₁ = −1, P₂ = −1.
    Q2,
    /// P₁ = −1, P₂ = +1.
    Q3,
}

impl Sector {
    pub fn parities(self) -> (f64, f64) {
        match self {
            Sector::Q0 => (1.0, 1.0),
            Sector::Q1 => (1.0, -1.0),
            Sector::Q2 => (-1.0, -1.0),
            Sector::Q3 => (-1.0, 1.0),
        }
    }
}

/// Orthonormal basis of a parity sector, one column per orbit
/// `{i, i⊕S_σ, i⊕S_τ, i⊕S_σ⊕S_τ}`.
pub fn sector_basis(spec: &ChainSpec, sector: Sector) -> DMatrix<f64> {
    let (ms, mt) = parity_masks(spec);
    let (p1, p2) = sector.parities();
    let reps: Vec<usize> = (0..spec.dim())
        .filter(|&i| i < (i ^ ms) && i < (i ^ mt) && i < (i ^ ms ^ mt))
        .collect();
    let mut v = DMatrix::zeros(spec.dim(), reps.len());
    for (col, &i) in reps.iter().enumerate() {
        v[(i, col)] = 0.5;
        v[(i ^ ms, col)] = 0.5 * p1;
        v[(i ^ mt, col)] = 0.5 * p2;
        v[(i ^ ms ^ mt, col)] = 0.5 * p1 * p2;
    }
    v
}

/// `Vᵀ H V` restricted to one parity sector.
pub fn sector_hamiltonian(
    spec: &ChainSpec,
    sector: Sector,
    exec: Execution,
) -> Result<DMatrix<f64>> {
    check_dense_budget(spec)?;
    let v = sector_basis(spec, sector);
    let cols = exec.map_range(v.ncols(), |c| {
        let x: Vec<f64> = v.column(c).iter().copied().collect();
        let mut y = vec![0.0; x.len()];
        apply_hamiltonian(spec, &x, &mut y, Execution::Sequential);
        DVector::from_vec(y)
    });
    let hv = DMatrix::from_columns(&cols);
    Ok(v.transpose() * hv)
}

/// Lowest energy within a parity sector.
pub fn sector_lowest_energy(spec: &ChainSpec, sector: Sector, exec: Execution) -> Result<f64> {
    let h = sector_hamiltonian(spec, sector, exec)?;
    Ok(h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_and_matrix_free_agree() {
        let spec = ChainSpec::new(3, 0.7, 1.3).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        assert_eq!(h, h.transpose());
        let x: Vec<f64> = (0..spec.dim())
            .map(|i| ((i * 37) % 11) as f64 - 5.0)
            .collect();
        let mut y = vec![0.0; spec.dim()];
        apply_hamiltonian(&spec, &x, &mut y, Execution::Parallel);
        let hx = &h * DVector::from_vec(x);
        for (a, b) in hx.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn budget() {
        let spec = ChainSpec::new(7, 1.0, 1.0).unwrap();
        assert!(matches!(
            build_hamiltonian(&spec),
            Err(Error::OverBudget { sites: 7, limit: 6 })
        ));
    }

    #[test]
    fn sector_bases_partition_space() {
        let spec = ChainSpec::new(2, 1.0, 1.0).unwrap();
        let mut total = 0;
        for s in [Sector::Q0, Sector::Q1, Sector::Q2, Sector::Q3] {
            let v = sector_basis(&spec, s);
            let g = v.transpose() * &v;
            assert!((g - DMatrix::identity(v.ncols(), v.ncols())).abs().max() < 1e-15);
            total += v.ncols();
        }
        assert_eq!(total, spec.dim());
    }

    #[test]
    fn parity_involutions() {
        let (p1, p2) = parity_operators(2).unwrap();
        let id = DMatrix::<f64>::identity(16, 16);
        assert_eq!(&p1 * &p1, id);
        assert_eq!(&p2 * &p2, id);
        assert_eq!(p1.trace(), 0.0);
        assert_eq!(p1, p1.transpose());
    }
}
