use gqd_cli::selftest::{Backend, Library};
use gqd_core::density::DensityOperator;
use gqd_core::entropy::RelativeEntropy;
use gqd_core::{LocalBasis, ProductBasis, Result};

/// Reports von Neumann entropies 2% too high.
struct InflatedEntropy;

impl Backend for InflatedEntropy {
    fn entropy(&self, rho: &DensityOperator) -> Result<f64> {
        Ok(Library.entropy(rho)? * 1.02)
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
    fn local_dephase(&self, rho: &DensityOperator, basis: &LocalBasis) -> Result<DensityOperator> {
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
fn corrupted_entropy_exits_with_code_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let argv = [
        "gqd",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
        "selftest",
        "--count",
        "25",
    ];
    assert_eq!(gqd_cli::run_with_backend(argv, &InflatedEntropy), 4);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report["meta"]["passed"], false);
    let first = &report["meta"]["failures"][0];
    assert!(first["state_seed"].is_u64());
    assert!(first["basis_angles"].is_array());
}

#[test]
fn library_backend_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let argv = [
        "gqd",
        "--out",
        out.to_str().unwrap(),
        "selftest",
        "--count",
        "25",
    ];
    assert_eq!(gqd_cli::run_with_backend(argv, &Library), 0);
}
