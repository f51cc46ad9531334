use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::hamiltonian::{
    apply_hamiltonian, build_hamiltonian, parity_masks, sector_basis, sector_hamiltonian, Sector,
};
use super::{ChainSpec, ITERATIVE_SITE_LIMIT};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Gap below which the two lowest levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Target residual `‖Hψ − Eψ‖` of the iterative solver.
pub const LANCZOS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    /// Real, unit-norm eigenvector.
    pub vector: DVector<f64>,
    /// Distance to the next level seen by the solver (sector-restricted
    /// for the iterative solver).
    pub gap: f64,
    pub degenerate: bool,
}

/// Lowest eigenpair of a dense real-symmetric matrix.
pub fn ground_state(h: &DMatrix<f64>) -> Result<GroundState> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(Error::ShapeMismatch {
            rows: h.nrows(),
            cols: h.ncols(),
            expected: h.nrows(),
        });
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let gap = order
        .get(1)
        .map_or(f64::INFINITY, |&k| eig.eigenvalues[k] - e0);
    Ok(GroundState {
        energy: e0,
        vector: canonical_sign(eig.eigenvectors.column(order[0]).into_owned()),
        gap,
        degenerate: gap < DEGENERACY_TOL,
    })
}

/// Fix the global sign so the largest-magnitude entry is positive.
fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    let k = v.iamax();
    if v[k] < 0.0 {
        v.neg_mut();
    }
    v
}

/// Ground state of the chain. A degenerate spectrum is resolved by taking
/// the lowest state of the fully symmetric parity sector.
pub fn chain_ground_state(
    spec: &ChainSpec,
    solver: Solver,
    exec: Execution,
) -> Result<GroundState> {
    match solver {
        Solver::Dense => {
            let gs = ground_state(&build_hamiltonian(spec)?)?;
            if !gs.degenerate {
                return Ok(gs);
            }
            let v = sector_basis(spec, Sector::Q0);
            let sector = ground_state(&sector_hamiltonian(spec, Sector::Q0, exec)?)?;
            Ok(GroundState {
                vector: canonical_sign(&v * sector.vector),
                degenerate: true,
                ..gs
            })
        }
        Solver::Lanczos => lanczos_ground_state(spec, exec),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Matrix-free Lanczos with full reorthogonalisation, run inside the
/// fully symmetric parity sector.
pub fn lanczos_ground_state(spec: &ChainSpec, exec: Execution) -> Result<GroundState> {
    if spec.sites() > ITERATIVE_SITE_LIMIT {
        return Err(Error::OverBudget {
            sites: spec.sites(),
            limit: ITERATIVE_SITE_LIMIT,
        });
    }
    let d = spec.dim();
    let (ms, mt) = parity_masks(spec);
    let project = |v: &mut [f64]| {
        let src = v.to_vec();
        for (i, x) in v.iter_mut().enumerate() {
            *x = 0.25 * (src[i] + src[i ^ ms] + src[i ^ mt] + src[i ^ ms ^ mt]);
        }
    };
    // Deterministic start vector with overlap on every sector state.
    let mut start: Vec<f64> = (0..d)
        .map(|i| 1.0 + ((i * 2654435761) % 1000) as f64 * 1e-3)
        .collect();
    project(&mut start);
    normalize(&mut start);

    let krylov = d.min(250);
    let mut y = vec![0.0; d];
    for _restart in 0..8 {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut result = None;
        for k in 0..krylov {
            apply_hamiltonian(spec, &basis[k], &mut y, exec);
            let mut w = y.clone();
            project(&mut w);
            let alpha = dot(&basis[k], &w);
            alphas.push(alpha);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    axpy(-c, q, &mut w);
                }
            }
            let beta = normalize(&mut w);
            let m = alphas.len();
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alphas[i];
                if i + 1 < m {
                    t[(i, i + 1)] = betas[i];
                    t[(i + 1, i)] = betas[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let c0 = eig.eigenvectors.column(order[0]);
            let residual = beta * c0[m - 1].abs();
            let done = residual < LANCZOS_TOL * 0.1 || beta < 1e-12 || k + 1 == krylov;
            if done {
                let mut ritz = vec![0.0; d];
                for (i, q) in basis.iter().enumerate() {
                    axpy(c0[i], q, &mut ritz);
                }
                normalize(&mut ritz);
                let gap = order.get(1).map_or(f64::INFINITY, |&k| {
                    eig.eigenvalues[k] - eig.eigenvalues[order[0]]
                });
                result = Some((eig.eigenvalues[order[0]], ritz, gap));
                break;
            }
            betas.push(beta);
            basis.push(w);
        }
        let (energy, ritz, gap) = result.expect("Krylov loop always yields a Ritz pair");
        apply_hamiltonian(spec, &ritz, &mut y, exec);
        axpy(-energy, &ritz, &mut y);
        if dot(&y, &y).sqrt() < LANCZOS_TOL {
            return Ok(GroundState {
                energy,
                vector: canonical_sign(DVector::from_vec(ritz)),
                gap,
                degenerate: gap < DEGENERACY_TOL,
            });
        }
        start = ritz;
    }
    Err(Error::NoConvergence(format!(
        "Lanczos did not reach residual {LANCZOS_TOL:e}"
    )))
}
