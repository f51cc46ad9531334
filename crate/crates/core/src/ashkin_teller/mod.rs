//! One-dimensional quantum Ashkin-Teller chain with periodic boundaries:
//!
//! ```text
//! H = −J Σ_j (σˣ_j + τˣ_j + Δ σˣ_j τˣ_j) − Jβ Σ_j (σᶻ_j σᶻ_{j+1} + τᶻ_j τᶻ_{j+1} + Δ σᶻ_j σᶻ_{j+1} τᶻ_j τᶻ_{j+1})
//! ```
//!
//! Spins are ordered site-major with σ before τ inside a site, so spin
//! `2j` is `σ_j` and spin `2j + 1` is `τ_j`; spin 0 is the slowest index of
//! the `4^M`-dimensional space.

mod hamiltonian;
mod scan;
mod solver;

pub use hamiltonian::{
    apply_hamiltonian, build_hamiltonian, parity_expectations, parity_operators, sector_basis,
    sector_hamiltonian, sector_lowest_energy, Sector,
};
pub use scan::{
    default_delta_grid, gqd_scan, nonuniform_derivative, pairwise_discord_scan, uniform_delta_grid,
    zero_crossings, ScanMeasure, ScanOptions, ScanResult,
};
pub use solver::{chain_ground_state, ground_state, lanczos_ground_state, GroundState, Solver};

use crate::density::{reduce_pure, DensityOperator, SubsystemDims};
use crate::error::{Error, Result};
use crate::linalg::CVector;
use nalgebra::DVector;
use num_complex::Complex64;

/// Largest chain handled by the dense eigensolver.
pub const DENSE_SITE_LIMIT: usize = 6;
/// Largest chain handled by the iterative solver.
pub const ITERATIVE_SITE_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    sites: usize,
    pub beta: f64,
    pub delta: f64,
    /// Energy scale J (> 0).
    pub coupling: f64,
}

impl ChainSpec {
    pub fn new(sites: usize, beta: f64, delta: f64) -> Result<Self> {
        if sites < 2 {
            return Err(Error::OutOfRange(format!(
                "chain needs at least 2 sites, got {sites}"
            )));
        }
        Ok(ChainSpec {
            sites,
            beta,
            delta,
            coupling: 1.0,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = coupling;
        self
    }

    /// M.
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// N = 2M.
    pub fn spins(&self) -> usize {
        2 * self.sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.spins()
    }

    /// Global spin index of `σ_j` (site taken mod M).
    pub fn sigma(&self, j: usize) -> usize {
        2 * (j % self.sites)
    }

    /// Global spin index of `τ_j` (site taken mod M).
    pub fn tau(&self, j: usize) -> usize {
        2 * (j % self.sites) + 1
    }

    /// Bit mask of a spin within a basis-state index.
    pub(crate) fn mask(&self, spin: usize) -> usize {
        1usize << (self.spins() - 1 - spin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `σ_j, σ_{j+1}, τ_j, τ_{j+1}`.
    Quartet,
    /// Three contiguous sites.
    Sextet,
    /// Four contiguous sites.
    Octet,
    /// `σ_j, τ_j`.
    SameSitePair,
    /// `σ_j, σ_{j+1}`.
    NeighborSigmaPair,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Quartet => "quartet",
            GroupKind::Sextet => "sextet",
            GroupKind::Octet => "octet",
            GroupKind::SameSitePair => "same-site",
            GroupKind::NeighborSigmaPair => "neighbor-sigma",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quartet" => Some(GroupKind::Quartet),
            "sextet" => Some(GroupKind::Sextet),
            "octet" => Some(GroupKind::Octet),
            "same-site" => Some(GroupKind::SameSitePair),
            "neighbor-sigma" => Some(GroupKind::NeighborSigmaPair),
            _ => None,
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(self, GroupKind::SameSitePair | GroupKind::NeighborSigmaPair)
    }
}

/// A group of spins anchored at site `anchor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinGroup {
    pub kind: GroupKind,
    pub anchor: usize,
}

impl SpinGroup {
    pub fn new(kind: GroupKind, anchor: usize) -> Self {
        SpinGroup { kind, anchor }
    }

    pub fn quartet(anchor: usize) -> Self {
        Self::new(GroupKind::Quartet, anchor)
    }

    /// Global spin indices in reduced-state order: all σ's of the covered
    /// sites, then all τ's.
    pub fn spins(&self, spec: &ChainSpec) -> Result<Vec<usize>> {
        let m = spec.sites();
        let a = self.anchor;
        let span = match self.kind {
            GroupKind::SameSitePair => return Ok(vec![spec.sigma(a), spec.tau(a)]),
            GroupKind::NeighborSigmaPair => return Ok(vec![spec.sigma(a), spec.sigma(a + 1)]),
            GroupKind::Quartet => 2,
            GroupKind::Sextet => 3,
            GroupKind::Octet => 4,
        };
        if span > m {
            return Err(Error::InvalidGroup(format!(
                "{} spans {span} sites but the chain has {m}",
                self.kind.name()
            )));
        }
        let sites: Vec<usize> = (0..span).map(|k| a + k).collect();
        Ok(sites
            .iter()
            .map(|&j| spec.sigma(j))
            .chain(sites.iter().map(|&j| spec.tau(j)))
            .collect())
    }
}

/// Reduced density operator of a real chain state on the group's spins.
pub fn reduce_to_group(
    state: &DVector<f64>,
    spec: &ChainSpec,
    group: &SpinGroup,
) -> Result<DensityOperator> {
    let keep = group.spins(spec)?;
    let psi = CVector::from_iterator(state.len(), state.iter().map(|&x| Complex64::new(x, 0.0)));
    reduce_pure(&psi, &SubsystemDims::qubits(spec.spins())?, &keep)
}
