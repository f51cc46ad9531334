//! Global quantum discord (GQD) for multipartite density operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`], [`density`], [`entropy`]: dense complex matrices, density
//!   operators over labelled subsystems, von Neumann and relative entropies.
//! * [`measurement`]: local projective bases and the dephasing channels they
//!   induce.
//! * [`correlations`]: mutual information, asymmetric and symmetric discord,
//!   and the global quantum discord at a fixed basis or minimised over
//!   product bases.
//! * [`states`]: GHZ and Werner-GHZ oracles with closed forms, random states.
//! * [`ashkin_teller`]: exact diagonalization of the quantum Ashkin-Teller
//!   chain and GQD scans across the four-spin coupling.
//!
//! Index convention: the first subsystem varies slowest, so `kron(a, b)`
//! places `a` on subsystem 0. Qubit level 0 is `|↑⟩` (σᶻ = +1).

pub mod ashkin_teller;
pub mod correlations;
pub mod density;
pub mod entropy;
mod error;
pub mod exec;
pub mod linalg;
pub mod measurement;
pub mod optimize;
pub mod states;

pub use correlations::{gqd, gqd_at_basis, GqdResult, Strategy};
pub use density::{DensityOperator, SubsystemDims};
pub use error::{Error, Result};
pub use exec::Execution;
pub use measurement::{LocalBasis, ProductBasis, QubitBasisAngles};
pub use optimize::OptimizerConfig;

pub use num_complex::Complex64;
