use nalgebra::DMatrix;

use gqd_core::ashkin_teller::*;
use gqd_core::linalg::{eigvals_hermitian, to_complex};
use gqd_core::measurement::reduced_eigenbasis;
use gqd_core::{gqd, Execution, OptimizerConfig, ProductBasis, Strategy};

fn spec(m: usize, beta: f64, delta: f64) -> ChainSpec {
    ChainSpec::new(m, beta, delta).unwrap()
}

fn dense_gs(s: &ChainSpec) -> GroundState {
    chain_ground_state(s, Solver::Dense, Execution::Parallel).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Permutation exchanging every σ_j with τ_j.
fn swap_species(s: &ChainSpec) -> DMatrix<f64> {
    let d = s.dim();
    let n = s.spins();
    let mut p = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut k = 0;
        for j in 0..s.sites() {
            let bs = (i >> (n - 1 - 2 * j)) & 1;
            let bt = (i >> (n - 2 - 2 * j)) & 1;
            k |= bt << (n - 1 - 2 * j);
            k |= bs << (n - 2 - 2 * j);
        }
        p[(k, i)] = 1.0;
    }
    p
}

#[test]
fn decoupled_transverse_fields() {
    let h = build_hamiltonian(&spec(2, 0.0, 0.0)).unwrap();
    let ev = sorted(h.symmetric_eigenvalues().iter().copied().collect());
    let expected = [(-4.0, 1), (-2.0, 4), (0.0, 6), (2.0, 4), (4.0, 1)];
    let mut k = 0;
    for (e, mult) in expected {
        for _ in 0..mult {
            assert!((ev[k] - e).abs() < 1e-12);
            k += 1;
        }
    }
    assert!((ground_state(&h).unwrap().energy + 4.0).abs() < 1e-12);
}

#[test]
fn parity_symmetry_and_species_exchange() {
    for m in [2, 3] {
        let (p1, p2) = parity_operators(m).unwrap();
        for &(beta, delta) in &[(1.0, 1.0), (0.6, 0.3), (1.4, 1.7)] {
            let s = spec(m, beta, delta);
            let h = build_hamiltonian(&s).unwrap();
            assert!((&h * &p1 - &p1 * &h).abs().max() <= 1e-10);
            assert!((&h * &p2 - &p2 * &h).abs().max() <= 1e-10);
            let x = swap_species(&s);
            let swapped = x.transpose() * &h * &x;
            let a = sorted(h.symmetric_eigenvalues().iter().copied().collect());
            let b = sorted(swapped.symmetric_eigenvalues().iter().copied().collect());
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn ground_state_lives_in_symmetric_sector() {
    for m in [2, 3] {
        for delta in [0.2, 0.7, 1.0, 1.5] {
            let s = spec(m, 1.0, delta);
            let gs = dense_gs(&s);
            let (e1, e2) = parity_expectations(&s, &gs.vector);
            assert!(
                (e1 - 1.0).abs() <= 1e-9 && (e2 - 1.0).abs() <= 1e-9,
                "M={m} Δ={delta}"
            );
            let q0 = sector_lowest_energy(&s, Sector::Q0, Execution::Sequential).unwrap();
            assert!((q0 - gs.energy).abs() <= 1e-9);
        }
    }
}

#[test]
fn odd_sectors_are_degenerate() {
    for m in [2, 3] {
        for delta in [0.3, 1.0, 1.6] {
            let s = spec(m, 1.0, delta);
            let q1 = sector_lowest_energy(&s, Sector::Q1, Execution::Parallel).unwrap();
            let q3 = sector_lowest_energy(&s, Sector::Q3, Execution::Parallel).unwrap();
            assert!((q1 - q3).abs() <= 1e-9, "M={m} Δ={delta}: {q1} vs {q3}");
        }
    }
}

#[test]
fn ground_energy_matches_complex_eigensolver() {
    let s = spec(2, 1.0, 1.0);
    let h = build_hamiltonian(&s).unwrap();
    let ev = eigvals_hermitian(&to_complex(&h)).unwrap();
    let gs = ground_state(&h).unwrap();
    assert!((gs.energy - ev[0]).abs() <= 1e-10);
    let r = &h * &gs.vector - &gs.vector * gs.energy;
    assert!(r.norm() <= 1e-9);
}

#[test]
fn ground_energy_decreases_with_beta() {
    for delta in [0.5, 1.0] {
        let energies: Vec<f64> = (0..=10)
            .map(|k| dense_gs(&spec(3, 0.2 * k as f64, delta)).energy)
            .collect();
        assert!(energies.windows(2).all(|w| w[1] < w[0]), "{energies:?}");
    }
}

#[test]
fn iterative_solver_agrees_at_five_sites() {
    let s = spec(5, 1.0, 1.0);
    let a = dense_gs(&s);
    let b = chain_ground_state(&s, Solver::Lanczos, Execution::Parallel).unwrap();
    assert!((a.energy - b.energy).abs() <= 1e-9);
    assert!((a.vector.dot(&b.vector).abs() - 1.0).abs() <= 1e-8);
}

#[test]
fn group_reductions() {
    let s = spec(4, 1.0, 0.8);
    let gs = dense_gs(&s);
    let mut spectra = Vec::new();
    for anchor in 0..4 {
        let rho = reduce_to_group(&gs.vector, &s, &SpinGroup::quartet(anchor)).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
        assert!(rho.spectrum().min() >= -1e-10);
        spectra.push(rho.eigenvalues());
    }
    for w in spectra.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
    let oct = reduce_to_group(&gs.vector, &s, &SpinGroup::new(GroupKind::Octet, 1)).unwrap();
    assert_eq!(oct.dim(), 256);
}

#[test]
fn same_site_pair_is_diagonal_in_sigma_x() {
    let u = ProductBasis::sigma_x(2).unitary();
    for delta in [0.3, 1.0, 1.7] {
        let s = spec(3, 1.0, delta);
        let gs = dense_gs(&s);
        let rho =
            reduce_to_group(&gs.vector, &s, &SpinGroup::new(GroupKind::SameSitePair, 1)).unwrap();
        let rotated = u.adjoint() * rho.matrix() * &u;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(rotated[(i, j)].norm() <= 1e-9);
                }
            }
        }
    }
}

#[test]
fn single_spins_pick_the_sigma_x_basis() {
    let s = spec(3, 1.0, 0.6);
    let gs = dense_gs(&s);
    let rho = reduce_to_group(&gs.vector, &s, &SpinGroup::quartet(0)).unwrap();
    let x = ProductBasis::sigma_x(1);
    for j in 0..4 {
        let r = reduced_eigenbasis(&rho, j).unwrap();
        assert!(!r.degenerate);
        let overlap = x.local(0).vectors().adjoint() * r.basis.vectors();
        // Same basis up to order and phases: every overlap has modulus 0 or 1.
        assert!(overlap
            .iter()
            .all(|z| z.norm() < 1e-9 || (z.norm() - 1.0).abs() < 1e-9));
    }
    let cfg = OptimizerConfig::default();
    let mid = gqd(&rho, Strategy::ReducedEigenbasis, &cfg).unwrap().value;
    let fx = gqd(&rho, Strategy::FixedX, &cfg).unwrap().value;
    assert!((mid - fx).abs() <= 1e-9);
}

#[test]
fn sigma_x_scan_has_an_extremum_at_the_transition() {
    let template = spec(3, 1.0, 1.0);
    let opts = ScanOptions::default();
    let x = gqd_scan(
        &template,
        &default_delta_grid(),
        SpinGroup::quartet(0),
        Strategy::FixedX,
        &opts,
    )
    .unwrap();
    assert!(x.values.iter().all(|&v| v >= -1e-9));
    assert_eq!(x.crossings_within(0.85, 1.15).len(), 1);
    assert_eq!(x.derivative.len(), x.deltas.len());
    assert!(x.derivative[0].is_none() && x.derivative.last().unwrap().is_none());

    let z = gqd_scan(
        &template,
        &default_delta_grid(),
        SpinGroup::quartet(0),
        Strategy::FixedZ,
        &opts,
    )
    .unwrap();
    assert!(z.values.iter().all(|&v| v > 0.0));
    assert!(z.crossings_within(0.85, 1.15).is_empty());
}

#[test]
fn zero_crossing_is_stable_under_refinement() {
    let template = spec(3, 1.0, 1.0);
    let opts = ScanOptions::default();
    let mut found = Vec::new();
    for step in [0.04, 0.02] {
        let grid = uniform_delta_grid(0.8, 1.2, step).unwrap();
        let scan = gqd_scan(
            &template,
            &grid,
            SpinGroup::quartet(0),
            Strategy::FixedX,
            &opts,
        )
        .unwrap();
        let c = scan.crossings_within(0.85, 1.15);
        assert_eq!(c.len(), 1);
        found.push(c[0]);
    }
    assert!((found[0] - found[1]).abs() < 0.02);
}

#[test]
fn pair_discords_across_delta() {
    let template = spec(3, 1.0, 1.0);
    let opts = ScanOptions::default();
    let grid = uniform_delta_grid(0.2, 1.8, 0.2).unwrap();
    let same = pairwise_discord_scan(&template, &grid, GroupKind::SameSitePair, 0, &opts).unwrap();
    assert!(
        same.values.iter().all(|v| v.abs() <= 1e-8),
        "{:?}",
        same.values
    );

    let fine = uniform_delta_grid(0.86, 1.14, 0.02).unwrap();
    let nb =
        pairwise_discord_scan(&template, &fine, GroupKind::NeighborSigmaPair, 0, &opts).unwrap();
    assert!(nb.values.iter().all(|&v| v > 1e-3));
    assert!(nb.crossings_within(0.9, 1.1).is_empty());
}
