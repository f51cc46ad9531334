//! Coarse angle grid plus multistart Nelder-Mead refinement over qubit
//! measurement directions (two angles per qubit).
//!
//! The objective is evaluated on raw, unconstrained angles; projectors are
//! periodic in both, so the simplex may cross the `θ = 0` boundary freely.
//! Reported angles are wrapped back into `[0, π) × [0, 2π)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::measurement::QubitBasisAngles;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Grid points per angle over the closed range; must be at least 5.
    pub grid_points: usize,
    /// Number of best grid points refined; must be at least 8.
    pub multistarts: usize,
    /// Refinement stops when the simplex values agree to this many bits.
    pub tolerance: f64,
    /// Objective evaluations allowed per refinement run.
    pub max_evaluations: usize,
    /// Coarse grids larger than this are subsampled (seeded).
    pub max_grid_size: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_points: 9,
            multistarts: 8,
            tolerance: 1e-8,
            max_evaluations: 20_000,
            max_grid_size: 250_000,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 5 {
            return Err(Error::InvalidConfig(format!(
                "grid_points = {} (need >= 5)",
                self.grid_points
            )));
        }
        if self.multistarts < 8 {
            return Err(Error::InvalidConfig(format!(
                "multistarts = {} (need >= 8)",
                self.multistarts
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerance = {}",
                self.tolerance
            )));
        }
        if self.max_evaluations == 0 || self.max_grid_size == 0 {
            return Err(Error::InvalidConfig(
                "evaluation budgets must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Distinct single-qubit measurement bases on the angle grid.
    ///
    /// A basis is fixed by its pair of antipodal Bloch directions, and
    /// `(π − θ, φ + π)` is antipodal to `(θ, φ)`, so only the upper
    /// hemisphere is kept: θ = 0 once, θ < π/2 with every φ, and on the
    /// equator only φ < π.
    pub fn qubit_grid(&self) -> Vec<(f64, f64)> {
        let g = self.grid_points;
        let steps = g - 1;
        let angle = |k: usize, span: f64| k as f64 * span / steps as f64;
        let mut pts = vec![(0.0, 0.0)];
        for a in (1..steps).take_while(|&a| 2 * a <= steps) {
            for b in (0..steps).filter(|&b| 2 * a < steps || 2 * b < steps) {
                pts.push((angle(a, PI), angle(b, 2.0 * PI)));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Nelder-Mead with restarts from the incumbent until a restart fails to
/// improve by more than `tol`.
pub fn nelder_mead<F>(f: F, x0: &[f64], step: f64, tol: f64, max_evals: usize) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = x0.to_vec();
    let mut best_val = f(&best);
    let mut evals = 1;
    let mut converged = false;
    for _ in 0..4 {
        let (x, v, used, ok) = nelder_mead_once(
            &f,
            &best,
            best_val,
            step,
            tol,
            max_evals.saturating_sub(evals),
        );
        evals += used;
        let improvement = best_val - v;
        if v < best_val {
            best = x;
            best_val = v;
        }
        if !ok {
            converged = false;
            break;
        }
        converged = true;
        if improvement <= tol {
            break;
        }
    }
    Minimum {
        x: best,
        value: best_val,
        converged,
        evaluations: evals,
    }
}

fn nelder_mead_once<F>(
    f: &F,
    x0: &[f64],
    f0: f64,
    step: f64,
    tol: f64,
    budget: usize,
) -> (Vec<f64>, f64, usize, bool)
where
    F: Fn(&[f64]) -> f64,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let n = x0.len();
    let mut evals = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        evals += 1;
        simplex.push((x, v));
    }

    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread <= tol {
            let (x, v) = simplex.swap_remove(0);
            return (x, v, evals, true);
        }
        if evals + 2 > budget {
            let (x, v) = simplex.swap_remove(0);
            return (x, v, evals, false);
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = point(&centroid, &worst, -ALPHA);
        let fr = f(&reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = point(&centroid, &worst, -GAMMA);
            let fe = f(&expanded);
            evals += 1;
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[n].1 {
            let c = point(&centroid, &reflected, RHO);
            let v = f(&c);
            (c, v)
        } else {
            let c = point(&centroid, &worst, RHO);
            let v = f(&c);
            (c, v)
        };
        evals += 1;
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (contracted, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x = point(&x_best, &entry.0, SIGMA);
            entry.1 = f(&x);
            entry.0 = x;
            evals += 1;
        }
    }
}

/// Result of a minimisation over per-qubit measurement directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleMinimum {
    pub angles: Vec<QubitBasisAngles>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
}

fn angles_to_vec(angles: &[QubitBasisAngles]) -> Vec<f64> {
    angles.iter().flat_map(|a| [a.theta(), a.phi()]).collect()
}

fn vec_to_angles(x: &[f64]) -> Vec<QubitBasisAngles> {
    x.chunks(2)
        .map(|c| QubitBasisAngles::wrapped(c[0], c[1]))
        .collect()
}

/// Minimise `objective(raw_angles)` over `n_qubits` directions, where
/// `raw_angles = [θ_0, φ_0, θ_1, φ_1, …]`.
///
/// Every point in `seeds` is evaluated and can win outright, so the result
/// is never worse than any seed. Deterministic for a fixed config.
pub fn minimize_angles<F>(
    n_qubits: usize,
    objective: F,
    seeds: &[Vec<QubitBasisAngles>],
    config: &OptimizerConfig,
) -> Result<AngleMinimum>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    config.validate()?;
    if n_qubits == 0 {
        return Err(Error::NoSubsystems);
    }
    let exec = config.execution;
    let local = config.qubit_grid();
    let per = local.len();
    let full = (per as f64).powi(n_qubits as i32);

    let decode = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; 2 * n_qubits];
        for q in (0..n_qubits).rev() {
            let (t, p) = local[idx % per];
            x[2 * q] = t;
            x[2 * q + 1] = p;
            idx /= per;
        }
        x
    };

    let grid: Vec<Vec<f64>> = if full <= config.max_grid_size as f64 {
        exec.map_range(per.pow(n_qubits as u32), decode)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let total = per.pow(n_qubits as u32);
        (0..config.max_grid_size)
            .map(|_| decode(rng.random_range(0..total)))
            .collect()
    };
    let mut candidates: Vec<Vec<f64>> = seeds
        .iter()
        .filter(|s| s.len() == n_qubits)
        .map(|s| angles_to_vec(s))
        .collect();
    candidates.extend(grid);

    let values = exec.map(&candidates, |x| objective(x));
    let mut evaluations = values.len();

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let starts: Vec<usize> = order.into_iter().take(config.multistarts).collect();

    let step = PI / (2.0 * (config.grid_points - 1) as f64);
    let refined = exec.map(&starts, |&i| {
        nelder_mead(
            &objective,
            &candidates[i],
            step,
            config.tolerance,
            config.max_evaluations,
        )
    });

    evaluations += refined.iter().map(|m| m.evaluations).sum::<usize>();
    // Each run starts from a grid point and never worsens it, so the best
    // refinement is also the best point seen overall.
    let best = refined
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .map(|(_, m)| m)
        .expect("at least one start");
    let (best_x, best_val, converged) = (&best.x, best.value, best.converged);
    Ok(AngleMinimum {
        angles: vec_to_angles(best_x),
        value: best_val,
        converged,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            grid_points: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            multistarts: 3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn qubit_grid_contents() {
        let g = OptimizerConfig::default().qubit_grid();
        assert_eq!(g.len(), 1 + 3 * 8 + 4);
        assert!(g.contains(&(0.0, 0.0)));
        assert!(g
            .iter()
            .any(|&(t, p)| (t - PI / 2.0).abs() < 1e-15 && p == 0.0));
        assert!(g
            .iter()
            .all(|&(t, p)| (0.0..=PI / 2.0).contains(&t) && (0.0..2.0 * PI).contains(&p)));
        assert!(g.iter().all(|&(t, p)| t < PI / 2.0 - 1e-12 || p < PI));
        // Odd step counts have no equator row.
        let odd = OptimizerConfig {
            grid_points: 4,
            ..OptimizerConfig::default()
        }
        .qubit_grid();
        assert_eq!(odd.len(), 1 + 3);
    }

    #[test]
    fn nelder_mead_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 2.0;
        let m = nelder_mead(f, &[0.0, 0.0], 0.2, 1e-12, 10_000);
        assert!(m.converged);
        assert!((m.value - 2.0).abs() < 1e-10);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn nelder_mead_budget() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let m = nelder_mead(f, &[3.0, -2.0, 1.0], 0.1, 1e-14, 10);
        assert!(!m.converged);
        assert!(m.evaluations <= 12);
    }

    #[test]
    fn angles_minimum_is_found_and_deterministic() {
        // Smooth function of two directions with a minimum off the grid.
        let target: [(f64, f64); 2] = [(0.7, 1.3), (2.1, 4.0)];
        let obj = |x: &[f64]| -> f64 {
            x.chunks(2)
                .zip(target.iter())
                .map(|(a, &(t, p))| {
                    let n = [a[0].sin() * a[1].cos(), a[0].sin() * a[1].sin(), a[0].cos()];
                    let m = [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
                    1.0 - (n[0] * m[0] + n[1] * m[1] + n[2] * m[2]).powi(2)
                })
                .sum()
        };
        let cfg = OptimizerConfig::default();
        let a = minimize_angles(2, obj, &[], &cfg).unwrap();
        assert!(a.value < 1e-7, "{}", a.value);
        let b = minimize_angles(
            2,
            obj,
            &[],
            &cfg.clone().with_execution(Execution::Sequential),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subsampled_grid_is_seeded() {
        let obj = |x: &[f64]| x.iter().map(|v| v.sin().powi(2)).sum::<f64>();
        let cfg = OptimizerConfig {
            max_grid_size: 500,
            ..Default::default()
        };
        let a = minimize_angles(3, obj, &[], &cfg).unwrap();
        let b = minimize_angles(3, obj, &[], &cfg).unwrap();
        assert_eq!(a, b);
    }
}
