//! Discord-family functionals: mutual information, measured conditional
//! entropy, asymmetric and symmetric discord, and the global quantum discord.
//!
//! For a product basis `{Π_k}` the global quantum discord integrand is
//!
//! ```text
//! S(ρ‖Φ(ρ)) − Σ_j S(ρ_j‖Φ_j(ρ_j))
//! ```
//!
//! Dephasing keeps the diagonal in the measurement basis, so each relative
//! entropy reduces to `S(Φ(·)) − S(·)` and `S(Φ(ρ))` is the Shannon entropy of
//! the outcome distribution. No eigendecomposition is needed per basis.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::density::{DensityOperator, SubsystemDims};
use crate::entropy::{eta, matrix_entropy, shannon_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::measurement::{
    self, eigenbasis_of, qubit_basis, qubit_basis_raw, LocalBasis, ProductBasis, QubitBasisAngles,
};
use crate::optimize::{minimize_angles, AngleMinimum, OptimizerConfig};

/// Outcomes less likely than this are dropped from conditional sums.
pub const OUTCOME_TOL: f64 = 1e-14;

/// Split of the subsystems into two nonempty groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Bipartition {
    /// `a` lists the A-side subsystems; B is the complement.
    pub fn new(n: usize, a: Vec<usize>) -> Result<Self> {
        crate::density::validate_selection(n, &a)?;
        let b: Vec<usize> = (0..n).filter(|k| !a.contains(k)).collect();
        if b.is_empty() {
            return Err(Error::InvalidSelection("B side of the cut is empty".into()));
        }
        Ok(Bipartition { a, b })
    }

    /// A = all but the last subsystem, B = the last.
    pub fn last(n: usize) -> Result<Self> {
        Self::new(n, (0..n.saturating_sub(1)).collect())
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }
}

/// `I(ρ_AB) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityOperator, cut: &Bipartition) -> Result<f64> {
    if cut.a.len() + cut.b.len() != rho.n_subsystems() {
        return Err(Error::InvalidSelection(
            "cut does not cover the state".into(),
        ));
    }
    let s_a = von_neumann_entropy(&rho.partial_trace(&cut.a)?)?;
    let s_b = von_neumann_entropy(&rho.partial_trace(&cut.b)?)?;
    Ok(s_a + s_b - von_neumann_entropy(rho)?)
}

/// Entropy of a 2x2 Hermitian unit-trace block scaled by `1/p`.
fn qubit_block_entropy(m: &CMatrix, p: f64) -> f64 {
    let a = m[(0, 0)].re / p;
    let d = m[(1, 1)].re / p;
    let b = m[(0, 1)].norm() / p;
    let disc = ((a - d) * (a - d) + 4.0 * b * b).sqrt();
    let l1 = 0.5 * (a + d + disc);
    let l2 = 0.5 * (a + d - disc);
    eta(l1) + eta(l2.max(0.0))
}

/// Conditional blocks `⟨b_j|ρ_AB|b_j⟩` (unnormalised) for B = last subsystem.
fn conditional_blocks(rho_ab: &CMatrix, d_a: usize, basis_b: &LocalBasis) -> Vec<CMatrix> {
    let d_b = basis_b.dim();
    let v = basis_b.vectors();
    (0..d_b)
        .map(|j| {
            CMatrix::from_fn(d_a, d_a, |a, a2| {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..d_b {
                    let vb = v[(b, j)].conj();
                    if vb == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for b2 in 0..d_b {
                        acc += vb * rho_ab[(a * d_b + b, a2 * d_b + b2)] * v[(b2, j)];
                    }
                }
                acc
            })
        })
        .collect()
}

fn conditional_entropy_raw(rho_ab: &CMatrix, d_a: usize, basis_b: &LocalBasis) -> f64 {
    conditional_blocks(rho_ab, d_a, basis_b)
        .iter()
        .map(|m| {
            let p = m.diagonal().iter().map(|z| z.re).sum::<f64>();
            if p < OUTCOME_TOL {
                0.0
            } else if d_a == 2 {
                p * qubit_block_entropy(m, p)
            } else {
                p * matrix_entropy(&(m / Complex64::new(p, 0.0))).unwrap_or(0.0)
            }
        })
        .sum()
}

fn split_last(rho: &DensityOperator) -> Result<(usize, usize)> {
    let n = rho.n_subsystems();
    if n < 2 {
        return Err(Error::InvalidSelection(
            "need at least two subsystems".into(),
        ));
    }
    let d_b = rho.dims().get(n - 1).unwrap();
    Ok((rho.dim() / d_b, d_b))
}

/// `S(ρ_AB | {Π_B^j}) = Σ_j p_j S(ρ_{A|j})`, measuring the last subsystem.
pub fn measured_conditional_entropy(rho_ab: &DensityOperator, basis_b: &LocalBasis) -> Result<f64> {
    let (d_a, d_b) = split_last(rho_ab)?;
    if basis_b.dim() != d_b {
        return Err(Error::BasisMismatch);
    }
    Ok(conditional_entropy_raw(rho_ab.matrix(), d_a, basis_b))
}

/// Outcome probabilities and normalised conditional states of A after
/// measuring the last subsystem. Zero-probability outcomes are omitted.
pub fn conditional_states(
    rho_ab: &DensityOperator,
    basis_b: &LocalBasis,
) -> Result<Vec<(f64, DensityOperator)>> {
    let (d_a, d_b) = split_last(rho_ab)?;
    if basis_b.dim() != d_b {
        return Err(Error::BasisMismatch);
    }
    let n = rho_ab.n_subsystems();
    let dims_a = rho_ab.dims().select(&(0..n - 1).collect::<Vec<_>>())?;
    Ok(conditional_blocks(rho_ab.matrix(), d_a, basis_b)
        .into_iter()
        .filter_map(|m| {
            let p = m.diagonal().iter().map(|z| z.re).sum::<f64>();
            (p >= OUTCOME_TOL).then(|| {
                (
                    p,
                    DensityOperator::from_parts_unchecked(
                        m / Complex64::new(p, 0.0),
                        dims_a.clone(),
                    ),
                )
            })
        })
        .collect())
}

/// `I − J` at a fixed basis on the last subsystem.
pub fn discord_asymmetric_at(rho_ab: &DensityOperator, basis_b: &LocalBasis) -> Result<f64> {
    let n = rho_ab.n_subsystems();
    let cut = Bipartition::last(n)?;
    let i = mutual_information(rho_ab, &cut)?;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(cut.a())?)?;
    Ok(i - s_a + measured_conditional_entropy(rho_ab, basis_b)?)
}

/// Asymmetric discord `min_{Π_B} [I(ρ_AB) − J(ρ_AB)]` with B the last
/// subsystem, which must be a qubit.
pub fn discord_asymmetric(
    rho_ab: &DensityOperator,
    config: &OptimizerConfig,
) -> Result<AngleMinimum> {
    let (d_a, d_b) = split_last(rho_ab)?;
    if d_b != 2 {
        return Err(Error::NotQubits(rho_ab.dims().as_slice().to_vec()));
    }
    let n = rho_ab.n_subsystems();
    let cut = Bipartition::last(n)?;
    let i = mutual_information(rho_ab, &cut)?;
    let s_a = von_neumann_entropy(&rho_ab.partial_trace(cut.a())?)?;
    let m = rho_ab.matrix();
    let objective =
        |x: &[f64]| i - s_a + conditional_entropy_raw(m, d_a, &qubit_basis_raw(x[0], x[1]));
    let seeds = vec![
        vec![QubitBasisAngles::sigma_z()],
        vec![QubitBasisAngles::sigma_x()],
    ];
    minimize_angles(1, objective, &seeds, config)
}

/// Precomputed pieces of the global quantum discord of one state.
#[derive(Debug, Clone)]
pub struct GqdEvaluator<'a> {
    rho: &'a DensityOperator,
    entropy: f64,
    marginals: Vec<DensityOperator>,
    marginal_entropies: Vec<f64>,
}

impl<'a> GqdEvaluator<'a> {
    pub fn new(rho: &'a DensityOperator) -> Result<Self> {
        let marginals = (0..rho.n_subsystems())
            .map(|j| rho.marginal(j))
            .collect::<Result<Vec<_>>>()?;
        let marginal_entropies = marginals
            .iter()
            .map(von_neumann_entropy)
            .collect::<Result<Vec<_>>>()?;
        Ok(GqdEvaluator {
            rho,
            entropy: von_neumann_entropy(rho)?,
            marginals,
            marginal_entropies,
        })
    }

    pub fn state(&self) -> &DensityOperator {
        self.rho
    }

    pub fn marginals(&self) -> &[DensityOperator] {
        &self.marginals
    }

    pub fn at(&self, basis: &ProductBasis) -> Result<f64> {
        basis.check(self.rho.dims())?;
        Ok(self.at_unchecked(basis))
    }

    fn at_unchecked(&self, basis: &ProductBasis) -> f64 {
        let global = shannon_entropy(&basis.probabilities(self.rho.matrix())) - self.entropy;
        let local: f64 = self
            .marginals
            .iter()
            .zip(&self.marginal_entropies)
            .zip(basis.locals())
            .map(|((m, s), b)| shannon_entropy(&b.probabilities(m.matrix())) - s)
            .sum();
        global - local
    }

    /// Qubit states only: `[θ_0, φ_0, θ_1, φ_1, …]`, any real values.
    pub fn at_raw_angles(&self, x: &[f64]) -> f64 {
        let locals = x.chunks(2).map(|c| qubit_basis_raw(c[0], c[1])).collect();
        let basis = ProductBasis::new(locals).expect("non-empty");
        self.at_unchecked(&basis)
    }
}

/// Global quantum discord integrand at a fixed product basis.
pub fn gqd_at_basis(rho: &DensityOperator, basis: &ProductBasis) -> Result<f64> {
    basis.check(rho.dims())?;
    GqdEvaluator::new(rho)?.at(basis)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// σᶻ (computational) basis on every subsystem.
    FixedZ,
    /// σˣ eigenbasis on every qubit.
    FixedX,
    /// Eigenbasis of each single-subsystem reduced state.
    ReducedEigenbasis,
    /// Minimise over all product qubit bases.
    Minimize,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::FixedZ => "fixed-z",
            Strategy::FixedX => "fixed-x",
            Strategy::ReducedEigenbasis => "reduced-eigenbasis",
            Strategy::Minimize => "minimize",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed-z" | "z" => Some(Strategy::FixedZ),
            "fixed-x" | "x" => Some(Strategy::FixedX),
            "reduced-eigenbasis" | "mid" => Some(Strategy::ReducedEigenbasis),
            "minimize" | "min" => Some(Strategy::Minimize),
            _ => None,
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GqdResult {
    /// Bits.
    pub value: f64,
    /// Argmin for `Minimize`, otherwise the fixed basis used.
    pub basis: ProductBasis,
    /// Qubit directions of `basis`, when it is a qubit basis built from angles.
    pub angles: Option<Vec<QubitBasisAngles>>,
    pub strategy: Strategy,
    pub converged: bool,
    pub evaluations: usize,
    /// Some reduced state was degenerate and fell back to σᶻ
    /// (`ReducedEigenbasis` only).
    pub degenerate: bool,
}

fn require_qubits(dims: &SubsystemDims) -> Result<()> {
    if dims.all_qubits() {
        Ok(())
    } else {
        Err(Error::NotQubits(dims.as_slice().to_vec()))
    }
}

/// Basis and degeneracy flag for the reduced-eigenbasis strategy.
pub fn reduced_eigenbases(rho: &DensityOperator) -> Result<(ProductBasis, bool)> {
    let mut degenerate = false;
    let mut locals = Vec::with_capacity(rho.n_subsystems());
    for j in 0..rho.n_subsystems() {
        let r = eigenbasis_of(&rho.marginal(j)?);
        degenerate |= r.degenerate;
        locals.push(r.basis);
    }
    Ok((ProductBasis::new(locals)?, degenerate))
}

fn basis_angles(basis: &ProductBasis) -> Vec<QubitBasisAngles> {
    basis
        .locals()
        .iter()
        .map(|b| {
            let v = b.vectors();
            QubitBasisAngles::from_state(v[(0, 0)], v[(1, 0)])
        })
        .collect()
}

/// Global quantum discord of `rho` under the given strategy.
pub fn gqd(
    rho: &DensityOperator,
    strategy: Strategy,
    config: &OptimizerConfig,
) -> Result<GqdResult> {
    let eval = GqdEvaluator::new(rho)?;
    let n = rho.n_subsystems();
    let fixed = |basis: ProductBasis, angles: Option<Vec<QubitBasisAngles>>, degenerate: bool| {
        let value = eval.at(&basis)?;
        Ok(GqdResult {
            value,
            basis,
            angles,
            strategy,
            converged: true,
            evaluations: 1,
            degenerate,
        })
    };
    match strategy {
        Strategy::FixedZ => {
            let angles = rho
                .dims()
                .all_qubits()
                .then(|| vec![QubitBasisAngles::sigma_z(); n]);
            fixed(ProductBasis::computational(rho.dims()), angles, false)
        }
        Strategy::FixedX => {
            require_qubits(rho.dims())?;
            fixed(
                ProductBasis::sigma_x(n),
                Some(vec![QubitBasisAngles::sigma_x(); n]),
                false,
            )
        }
        Strategy::ReducedEigenbasis => {
            let (basis, degenerate) = reduced_eigenbases(rho)?;
            let angles = rho.dims().all_qubits().then(|| basis_angles(&basis));
            fixed(basis, angles, degenerate)
        }
        Strategy::Minimize => {
            require_qubits(rho.dims())?;
            config.validate()?;
            let (mid, _) = reduced_eigenbases(rho)?;
            let seeds = vec![
                vec![QubitBasisAngles::sigma_z(); n],
                vec![QubitBasisAngles::sigma_x(); n],
                basis_angles(&mid),
            ];
            let m = minimize_angles(n, |x| eval.at_raw_angles(x), &seeds, config)?;
            Ok(GqdResult {
                value: m.value,
                basis: ProductBasis::from_angles(&m.angles)?,
                angles: Some(m.angles),
                strategy,
                converged: m.converged,
                evaluations: m.evaluations,
                degenerate: false,
            })
        }
    }
}

/// The two algebraic forms of the symmetric bipartite discord at one basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricForms {
    /// `I(ρ_AB) − I(Φ_AB(ρ_AB))`.
    pub mutual_information_loss: f64,
    /// `S(ρ‖Φ_AB(ρ)) − S(ρ_A‖Φ_A(ρ_A)) − S(ρ_B‖Φ_B(ρ_B))`.
    pub relative_entropy_form: f64,
}

/// Both symmetric-discord forms for a two-subsystem state at a fixed basis.
pub fn symmetric_forms_at(
    rho_ab: &DensityOperator,
    basis: &ProductBasis,
) -> Result<SymmetricForms> {
    if rho_ab.n_subsystems() != 2 {
        return Err(Error::InvalidSelection(
            "symmetric discord needs two subsystems".into(),
        ));
    }
    basis.check(rho_ab.dims())?;
    let cut = Bipartition::new(2, vec![0])?;
    let dephased = measurement::dephase(rho_ab, basis)?;
    let loss = mutual_information(rho_ab, &cut)? - mutual_information(&dephased, &cut)?;
    Ok(SymmetricForms {
        mutual_information_loss: loss,
        relative_entropy_form: gqd_at_basis(rho_ab, basis)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricDiscord {
    pub optimum: AngleMinimum,
    /// Largest `|loss form − relative-entropy form|` over every basis the
    /// optimizer evaluated.
    pub max_form_gap: f64,
}

impl SymmetricDiscord {
    pub fn value(&self) -> f64 {
        self.optimum.value
    }
}

/// Symmetric two-qubit discord, minimising the mutual-information loss
/// `I(ρ) − I(Φ_AB(ρ))` over product bases. The relative-entropy form is
/// evaluated alongside at every basis and the largest disagreement recorded.
pub fn symmetric_discord(
    rho_ab: &DensityOperator,
    config: &OptimizerConfig,
) -> Result<SymmetricDiscord> {
    if rho_ab.n_subsystems() != 2 {
        return Err(Error::InvalidSelection(
            "symmetric discord needs two subsystems".into(),
        ));
    }
    require_qubits(rho_ab.dims())?;
    let cut = Bipartition::new(2, vec![0])?;
    let mi = mutual_information(rho_ab, &cut)?;
    let eval = GqdEvaluator::new(rho_ab)?;
    let gap_bits = AtomicU64::new(0f64.to_bits());
    let objective = |x: &[f64]| {
        let basis = ProductBasis::new(vec![
            qubit_basis_raw(x[0], x[1]),
            qubit_basis_raw(x[2], x[3]),
        ])
        .expect("two locals");
        let dephased = measurement::dephase(rho_ab, &basis).expect("matching basis");
        let loss = mi - mutual_information(&dephased, &cut).expect("valid cut");
        let rel = eval.at_unchecked(&basis);
        // Non-negative f64 bit patterns order like the values themselves.
        gap_bits.fetch_max((loss - rel).abs().to_bits(), Ordering::Relaxed);
        loss
    };
    let (mid, _) = reduced_eigenbases(rho_ab)?;
    let seeds = vec![
        vec![QubitBasisAngles::sigma_z(); 2],
        vec![QubitBasisAngles::sigma_x(); 2],
        basis_angles(&mid),
    ];
    let optimum = minimize_angles(2, objective, &seeds, config)?;
    Ok(SymmetricDiscord {
        optimum,
        max_form_gap: f64::from_bits(gap_bits.load(Ordering::Relaxed)),
    })
}

/// Convenience: the product basis `b_1 × b_2 × …` for given qubit angles.
pub fn qubit_product_basis(angles: &[QubitBasisAngles]) -> ProductBasis {
    ProductBasis::new(angles.iter().map(|&a| qubit_basis(a)).collect()).expect("non-empty")
}
