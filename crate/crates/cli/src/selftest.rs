//! Seeded property suites over random states.
//!
//! All numerical work goes through a [`Backend`] so a deliberately broken
//! implementation can be substituted to check that the suites catch it.

use gqd_core::density::{partial_trace, DensityOperator};
use gqd_core::entropy::{relative_entropy, von_neumann_entropy, RelativeEntropy};
use gqd_core::linalg::{max_abs_diff, CMatrix};
use gqd_core::measurement::{dephase, local_dephase};
use gqd_core::states::{random_density, random_product_angles};
use gqd_core::{Execution, LocalBasis, ProductBasis, QubitBasisAngles, Result, SubsystemDims};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::Report;

pub trait Backend: Sync {
    fn entropy(&self, rho: &DensityOperator) -> Result<f64>;
    fn relative_entropy(
        &self,
        rho: &DensityOperator,
        sigma: &DensityOperator,
    ) -> Result<RelativeEntropy>;
    fn dephase(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<DensityOperator>;
    fn local_dephase(&self, rho: &DensityOperator, basis: &LocalBasis) -> Result<DensityOperator>;
    fn partial_trace(&self, rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator>;
    fn gqd_at_basis(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<f64>;
}

/// The real implementation.
pub struct Library;

impl Backend for Library {
    fn entropy(&self, rho: &DensityOperator) -> Result<f64> {
        von_neumann_entropy(rho)
    }

    fn relative_entropy(
        &self,
        rho: &DensityOperator,
        sigma: &DensityOperator,
    ) -> Result<RelativeEntropy> {
        relative_entropy(rho, sigma)
    }

    fn dephase(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<DensityOperator> {
        dephase(rho, basis)
    }

    fn local_dephase(&self, rho: &DensityOperator, basis: &LocalBasis) -> Result<DensityOperator> {
        local_dephase(rho, basis)
    }

    fn partial_trace(&self, rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
        partial_trace(rho, keep)
    }

    fn gqd_at_basis(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<f64> {
        gqd_core::gqd_at_basis(rho, basis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Nonnegativity,
    RelativeEntropy,
    Idempotence,
    EntropyBounds,
    OracleEquality,
}

const SUITES: [Suite; 5] = [
    Suite::Nonnegativity,
    Suite::RelativeEntropy,
    Suite::Idempotence,
    Suite::EntropyBounds,
    Suite::OracleEquality,
];

/// Failures listed per suite in the report.
const MAX_LISTED: usize = 5;

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Nonnegativity => "nonnegativity",
            Suite::RelativeEntropy => "relative-entropy",
            Suite::Idempotence => "idempotence",
            Suite::EntropyBounds => "entropy-bounds",
            Suite::OracleEquality => "oracle-equality",
        }
    }
}

/// One randomly drawn test input.
struct Case {
    seed: u64,
    qubits: usize,
    rank: usize,
    rho: DensityOperator,
    angles: Vec<Vec<QubitBasisAngles>>,
}

impl Case {
    fn draw(seed: u64, qubits: std::ops::RangeInclusive<usize>, bases: usize) -> Result<Case> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(qubits);
        let rank = rng.random_range(1..=1usize << n);
        let rho = random_density(&SubsystemDims::qubits(n)?, rank, seed)?;
        let angles = (0..bases)
            .map(|_| random_product_angles(n, &mut rng))
            .collect();
        Ok(Case {
            seed,
            qubits: n,
            rank,
            rho,
            angles,
        })
    }

    fn basis(&self, k: usize) -> Result<ProductBasis> {
        ProductBasis::from_angles(&self.angles[k])
    }

    fn describe(&self, suite: Suite, index: usize, detail: String) -> Value {
        let angles: Vec<Value> = self
            .angles
            .iter()
            .map(|b| b.iter().map(|a| json!([a.theta(), a.phi()])).collect())
            .collect();
        json!({
            "suite": suite.name(),
            "case": index,
            "state_seed": self.seed,
            "qubits": self.qubits,
            "rank": self.rank,
            "basis_angles": angles,
            "detail": detail,
        })
    }
}

type Outcome = std::result::Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn naive_partial_trace(rho: &CMatrix, n: usize, keep: &[usize]) -> CMatrix {
    let bit = |i: usize, q: usize| (i >> (n - 1 - q)) & 1;
    let mut out = CMatrix::zeros(1 << keep.len(), 1 << keep.len());
    for i in 0..1 << n {
        for j in 0..1 << n {
            if (0..n)
                .filter(|q| !keep.contains(q))
                .any(|q| bit(i, q) != bit(j, q))
            {
                continue;
            }
            let r = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(i, q));
            let c = keep.iter().fold(0, |acc, &q| (acc << 1) | bit(j, q));
            out[(r, c)] += rho[(i, j)];
        }
    }
    out
}

fn run_case(b: &dyn Backend, suite: Suite, seed: u64) -> (Case, Outcome) {
    let qubits = match suite {
        Suite::RelativeEntropy => 2..=3,
        _ => 2..=4,
    };
    let case = Case::draw(seed, qubits, 5).expect("qubit count and rank are in range");
    let outcome = evaluate(b, suite, &case);
    (case, outcome)
}

fn evaluate(b: &dyn Backend, suite: Suite, case: &Case) -> Outcome {
    let rho = &case.rho;
    let n = case.qubits;
    match suite {
        Suite::Nonnegativity => {
            for k in 0..case.angles.len() {
                let d = lib(b.gqd_at_basis(rho, &lib(case.basis(k))?))?;
                check(d >= -1e-9, || format!("gqd {d:e} at basis {k}"))?;
            }
            Ok(())
        }
        Suite::RelativeEntropy => {
            let sigma = lib(random_density(rho.dims(), 1 << n, case.seed ^ 0x5157))?;
            let full = lib(b.relative_entropy(rho, &sigma))?.value();
            check(full >= -1e-10, || format!("S(ρ‖σ) = {full:e}"))?;
            let keep: Vec<usize> = (0..n - 1).collect();
            let reduced = lib(b.relative_entropy(
                &lib(b.partial_trace(rho, &keep))?,
                &lib(b.partial_trace(&sigma, &keep))?,
            ))?
            .value();
            check(full >= reduced - 1e-9, || {
                format!("monotonicity {full:e} < {reduced:e}")
            })?;
            let own = lib(b.relative_entropy(rho, rho))?.value();
            check(own.abs() <= 1e-9, || format!("S(ρ‖ρ) = {own:e}"))
        }
        Suite::Idempotence => {
            for k in 0..case.angles.len() {
                let basis = lib(case.basis(k))?;
                let once = lib(b.dephase(rho, &basis))?;
                let twice = lib(b.dephase(&once, &basis))?;
                let diff = max_abs_diff(once.matrix(), twice.matrix());
                check(diff <= 1e-10, || {
                    format!("‖Φ²ρ − Φρ‖ = {diff:e} at basis {k}")
                })?;
                let tr = once.matrix().trace().re;
                check((tr - 1.0).abs() <= 1e-10, || format!("Tr Φρ = {tr}"))?;
            }
            Ok(())
        }
        Suite::EntropyBounds => {
            let s = lib(b.entropy(rho))?;
            check(s >= -1e-12 && s <= n as f64 + 1e-9, || {
                format!("S = {s} outside [0, {n}]")
            })?;
            if case.rank == 1 {
                check(s.abs() <= 1e-9, || format!("pure state has S = {s:e}"))?;
            }
            let phi = lib(b.dephase(rho, &lib(case.basis(0))?))?;
            let sp = lib(b.entropy(&phi))?;
            check(sp >= s - 1e-9, || format!("S(Φρ) = {sp} < S(ρ) = {s}"))
        }
        Suite::OracleEquality => {
            let basis = lib(case.basis(0))?;
            let phi = lib(b.dephase(rho, &basis))?;
            let mut expected = lib(b.entropy(&phi))? - lib(b.entropy(rho))?;
            for j in 0..n {
                let rj = lib(b.partial_trace(rho, &[j]))?;
                let pj = lib(b.local_dephase(&rj, basis.local(j)))?;
                expected -= lib(b.entropy(&pj))? - lib(b.entropy(&rj))?;
            }
            let got = lib(b.gqd_at_basis(rho, &basis))?;
            check((got - expected).abs() <= 1e-9, || {
                format!("gqd {got} vs entropy route {expected}")
            })?;
            let keep: Vec<usize> = (0..n).filter(|q| (case.seed >> q) & 1 == 1).collect();
            let keep = if keep.is_empty() { vec![0] } else { keep };
            let fast = lib(b.partial_trace(rho, &keep))?;
            let diff = max_abs_diff(fast.matrix(), &naive_partial_trace(rho.matrix(), n, &keep));
            check(diff <= 1e-12, || {
                format!("partial trace on {keep:?} off by {diff:e}")
            })
        }
    }
}

/// Run every suite with `count` cases. Returns the report and the number
/// of failed cases.
pub fn run_selftest(backend: &dyn Backend, seed: u64, count: usize) -> (Report, usize) {
    let mut report = Report::new("selftest", vec!["suite", "cases", "passed", "failed"]);
    let mut listed = Vec::new();
    let mut total_failed = 0;
    for (idx, suite) in SUITES.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let seeds: Vec<u64> = (0..count).map(|_| rng.next_u64()).collect();
        let results = Execution::Parallel.map(&seeds, |&s| run_case(backend, suite, s));
        let mut failed = 0;
        for (k, (case, outcome)) in results.iter().enumerate() {
            if let Err(detail) = outcome {
                if failed < MAX_LISTED {
                    listed.push(case.describe(suite, k, detail.clone()));
                }
                failed += 1;
            }
        }
        total_failed += failed;
        report.push(vec![
            suite.name().into(),
            count.into(),
            (count - failed).into(),
            failed.into(),
        ]);
    }
    report.meta("seed", seed);
    report.meta("cases_per_suite", count);
    report.meta("passed", total_failed == 0);
    report.meta("failures", Value::Array(listed));
    (report, total_failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Library backend with a 1% entropy error.
    struct SkewedEntropy;

    impl Backend for SkewedEntropy {
        fn entropy(&self, rho: &DensityOperator) -> Result<f64> {
            Ok(von_neumann_entropy(rho)? * 1.01 + 1e-3)
        }
        fn relative_entropy(
            &self,
            rho: &DensityOperator,
            sigma: &DensityOperator,
        ) -> Result<RelativeEntropy> {
            Library.relative_entropy(rho, sigma)
        }
        fn dephase(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<DensityOperator> {
            Library.dephase(rho, basis)
        }
        fn local_dephase(
            &self,
            rho: &DensityOperator,
            basis: &LocalBasis,
        ) -> Result<DensityOperator> {
            Library.local_dephase(rho, basis)
        }
        fn partial_trace(&self, rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
            Library.partial_trace(rho, keep)
        }
        fn gqd_at_basis(&self, rho: &DensityOperator, basis: &ProductBasis) -> Result<f64> {
            Library.gqd_at_basis(rho, basis)
        }
    }

    #[test]
    fn library_passes() {
        let (report, failed) = run_selftest(&Library, 1, 20);
        assert_eq!(failed, 0, "{:?}", report.meta);
        assert_eq!(report.rows.len(), 5);
    }

    #[test]
    fn skewed_entropy_is_caught() {
        let (report, failed) = run_selftest(&SkewedEntropy, 1, 20);
        assert!(failed > 0);
        let failures = report.meta["failures"].as_array().unwrap();
        assert!(failures.iter().any(|f| f["suite"] == "oracle-equality"));
        assert!(failures[0]["state_seed"].is_u64());
    }

    #[test]
    fn report_is_deterministic() {
        let a = run_selftest(&Library, 9, 10).0.to_json();
        let b = run_selftest(&Library, 9, 10).0.to_json();
        assert_eq!(a, b);
    }
}
