//! Oracle states: GHZ, Werner-GHZ (with closed forms), Bell/Werner pairs,
//! seeded random density operators and the restricted GHZ dephasing surface.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::density::{DensityOperator, SubsystemDims};
use crate::entropy::shannon_entropy;
use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli, CMatrix, CVector};
use crate::measurement::{ProductBasis, QubitBasisAngles};

/// Below this, `(1−μ) log₂(1−μ)` is taken as its limit 0.
const MU_LIMIT: f64 = 1e-15;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `x log₂ x`, continuous at 0.
fn xlog2x(x: f64) -> f64 {
    if x < MU_LIMIT {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn ghz_vector(n: usize) -> Result<CVector> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "GHZ needs n >= 2 qubits, got {n}"
        )));
    }
    let d = 1usize << n;
    let mut v = CVector::zeros(d);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[0] = c(r);
    v[d - 1] = c(r);
    Ok(v)
}

/// `|GHZ⟩⟨GHZ|` with `|GHZ⟩ = (|↑…↑⟩ + |↓…↓⟩)/√2`.
pub fn ghz(n: usize) -> Result<DensityOperator> {
    DensityOperator::from_pure(&ghz_vector(n)?, SubsystemDims::qubits(n)?)
}

/// Bell state `|Φ⁺⟩⟨Φ⁺|`.
pub fn bell() -> DensityOperator {
    ghz(2).expect("n = 2")
}

/// Mixing weight of the Werner-GHZ family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerGhzParam(f64);

impl WernerGhzParam {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::OutOfRange(format!("mu = {mu} not in [0, 1]")));
        }
        Ok(WernerGhzParam(mu))
    }

    pub fn mu(self) -> f64 {
        self.0
    }
}

/// `(1−μ)/8 · 1 + μ |GHZ⟩⟨GHZ|` on three qubits.
pub fn werner_ghz(p: WernerGhzParam) -> DensityOperator {
    let mu = p.mu();
    let ghz = ghz(3).expect("n = 3").into_matrix();
    let m = CMatrix::identity(8, 8) * c((1.0 - mu) / 8.0) + ghz * c(mu);
    debug_assert!(crate::linalg::max_abs_diff(&m, &werner_ghz_pauli_expansion(mu)) < 1e-12);
    DensityOperator::from_parts_unchecked(m, SubsystemDims::qubits(3).expect("n = 3"))
}

/// The same operator assembled from its Pauli expansion:
/// `1/8 + μ/8 (z₁z₂ + z₁z₃ + z₂z₃ + x₁x₂x₃ − x₁y₂y₃ − y₁x₂y₃ − y₁y₂x₃)`.
pub fn werner_ghz_pauli_expansion(mu: f64) -> CMatrix {
    let (i, x, y, z) = (pauli::identity(2), pauli::x(), pauli::y(), pauli::z());
    let terms: [(f64, [&CMatrix; 3]); 7] = [
        (1.0, [&z, &z, &i]),
        (1.0, [&z, &i, &z]),
        (1.0, [&i, &z, &z]),
        (1.0, [&x, &x, &x]),
        (-1.0, [&x, &y, &y]),
        (-1.0, [&y, &x, &y]),
        (-1.0, [&y, &y, &x]),
    ];
    let mut m = CMatrix::identity(8, 8) * c(1.0 / 8.0);
    for (sign, ops) in terms {
        m += kron_all(ops) * c(sign * mu / 8.0);
    }
    m
}

/// Closed-form `S(ρ)` of the Werner-GHZ state.
pub fn werner_ghz_entropy(mu: f64) -> f64 {
    3.0 - 7.0 / 8.0 * xlog2x(1.0 - mu) - 1.0 / 8.0 * xlog2x(1.0 + 7.0 * mu)
}

/// Closed-form `S(Φ(ρ))` of the Werner-GHZ state dephased in σᶻ.
pub fn werner_ghz_dephased_entropy(mu: f64) -> f64 {
    3.0 - 3.0 / 4.0 * xlog2x(1.0 - mu) - 1.0 / 4.0 * xlog2x(1.0 + 3.0 * mu)
}

/// Closed-form global quantum discord of the Werner-GHZ state.
pub fn werner_ghz_gqd_analytic(mu: f64) -> f64 {
    -0.25 * xlog2x(1.0 + 3.0 * mu) + 0.125 * xlog2x(1.0 - mu) + 0.125 * xlog2x(1.0 + 7.0 * mu)
}

/// Two-qubit Werner state `(1−μ)/4 · 1 + μ |Φ⁺⟩⟨Φ⁺|`.
pub fn werner_two_qubit(mu: f64) -> Result<DensityOperator> {
    WernerGhzParam::new(mu)?;
    let m = CMatrix::identity(4, 4) * c((1.0 - mu) / 4.0) + bell().into_matrix() * c(mu);
    Ok(DensityOperator::from_parts_unchecked(
        m,
        SubsystemDims::qubits(2)?,
    ))
}

/// Spectrum `λ_1 … λ_8` of `Φ(|GHZ⟩⟨GHZ|)` measured with `θ_1 = 0`,
/// `θ_2`, `θ_3` and all `φ = 0`.
pub fn ghz_dephased_spectrum(theta2: f64, theta3: f64) -> [f64; 8] {
    let (c2, s2) = ((theta2 / 2.0).cos().powi(2), (theta2 / 2.0).sin().powi(2));
    let (c3, s3) = ((theta3 / 2.0).cos().powi(2), (theta3 / 2.0).sin().powi(2));
    let l1 = 0.5 * c2 * c3;
    let l2 = 0.5 * c2 * s3;
    let l3 = 0.5 * s2 * c3;
    let l4 = 0.5 * s2 * s3;
    [l1, l2, l3, l4, l4, l3, l2, l1]
}

/// `D(θ_2, θ_3) = −Σ λ_j log₂ λ_j`.
pub fn ghz_surface_value(theta2: f64, theta3: f64) -> f64 {
    shannon_entropy(&ghz_dephased_spectrum(theta2, theta3))
}

/// Measurement angles `(0, θ_2, θ_3)` with `φ = 0` used by the surface.
pub fn ghz_surface_basis(theta2: f64, theta3: f64) -> Result<ProductBasis> {
    ProductBasis::from_angles(&[
        QubitBasisAngles::sigma_z(),
        QubitBasisAngles::new(theta2, 0.0)?,
        QubitBasisAngles::new(theta3, 0.0)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta2: f64,
    pub theta3: f64,
    pub value: f64,
}

/// `D(θ_2, θ_3)` on `θ_k = kπ/resolution`, `k = 0..resolution`, so the grid
/// covers `[0, π)` and contains the boundary minimum at the origin.
/// Rows are θ_2-major.
pub fn ghz_surface(resolution: usize) -> Result<Vec<SurfacePoint>> {
    if resolution < 2 {
        return Err(Error::OutOfRange(format!(
            "resolution = {resolution} (need >= 2)"
        )));
    }
    let thetas: Vec<f64> = (0..resolution)
        .map(|k| k as f64 * PI / resolution as f64)
        .collect();
    Ok(thetas
        .iter()
        .flat_map(|&t2| {
            thetas.iter().map(move |&t3| SurfacePoint {
                theta2: t2,
                theta3: t3,
                value: ghz_surface_value(t2, t3),
            })
        })
        .collect())
}

/// `ρ = G G† / Tr(G G†)` with `G` a seeded complex Gaussian `total × rank` matrix.
pub fn random_density(dims: &SubsystemDims, rank: usize, seed: u64) -> Result<DensityOperator> {
    let total = dims.total();
    if rank == 0 || rank > total {
        return Err(Error::OutOfRange(format!(
            "rank = {rank} not in 1..={total}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(total, rank, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let mut m = &g * g.adjoint();
    let tr = m.diagonal().iter().map(|z| z.re).sum::<f64>();
    m /= c(tr);
    // exact Hermiticity
    let m = (&m + m.adjoint()) * c(0.5);
    Ok(DensityOperator::from_parts_unchecked(m, dims.clone()))
}

/// Haar-uniform qubit measurement direction.
pub fn random_qubit_angles<R: Rng + ?Sized>(rng: &mut R) -> QubitBasisAngles {
    let cos_theta: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    QubitBasisAngles::wrapped(cos_theta.acos(), phi)
}

pub fn random_product_angles<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<QubitBasisAngles> {
    (0..n).map(|_| random_qubit_angles(rng)).collect()
}

/// A state diagonal in the given product basis, with seeded random weights.
pub fn random_classical(basis: &ProductBasis, seed: u64) -> Result<DensityOperator> {
    let u = basis.unitary();
    let d = u.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut scaled = u.clone();
    for (k, wk) in w.iter().enumerate() {
        scaled.column_mut(k).scale_mut(wk / total);
    }
    let dims = SubsystemDims::new(basis.locals().iter().map(|b| b.dim()).collect())?;
    Ok(DensityOperator::from_parts_unchecked(
        scaled * u.adjoint(),
        dims,
    ))
}

/// Eigenvalues of the Werner-GHZ state: `(1+7μ)/8, ((1−μ)/8)×7`.
pub fn werner_ghz_spectrum(mu: f64) -> [f64; 8] {
    let mut s = [(1.0 - mu) / 8.0; 8];
    s[7] = (1.0 + 7.0 * mu) / 8.0;
    s
}
