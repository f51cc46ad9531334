use super::solver::{chain_ground_state, Solver};
use super::{reduce_to_group, ChainSpec, GroupKind, SpinGroup};
use crate::correlations::{discord_asymmetric, gqd, Strategy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::optimize::OptimizerConfig;

/// Default Δ grid: 0.2..=1.8 in steps of 0.05, refined to 0.01 on
/// 0.9..=1.1. Built in integer hundredths so the points are exact decimals.
pub fn default_delta_grid() -> Vec<f64> {
    let mut hundredths: Vec<u32> = (20..=180).step_by(5).chain(90..=110).collect();
    hundredths.sort_unstable();
    hundredths.dedup();
    hundredths
        .into_iter()
        .map(|h| f64::from(h) / 100.0)
        .collect()
}

/// `lo, lo + step, …` up to and including `hi` (with a small slack for
/// rounding).
pub fn uniform_delta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
        return Err(Error::OutOfRange(format!(
            "empty delta range [{lo}, {hi}] with step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| lo + k as f64 * step).collect())
}

/// Three-point derivative on a possibly non-uniform grid; `None` at the
/// two endpoints.
pub fn nonuniform_derivative(xs: &[f64], ys: &[f64]) -> Vec<Option<f64>> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    (0..n)
        .map(|i| {
            if i == 0 || i + 1 >= n {
                return None;
            }
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            Some(
                -h1 / (h0 * (h0 + h1)) * ys[i - 1]
                    + (h1 - h0) / (h0 * h1) * ys[i]
                    + h0 / (h1 * (h0 + h1)) * ys[i + 1],
            )
        })
        .collect()
}

/// Linearly interpolated locations where consecutive defined derivative
/// values change sign. An exact zero counts once.
pub fn zero_crossings(xs: &[f64], derivative: &[Option<f64>]) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(derivative)
        .filter_map(|(&x, d)| d.map(|d| (x, d)))
        .collect();
    let mut out = Vec::new();
    for (k, w) in pts.windows(2).enumerate() {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0 == 0.0 {
            if k == 0 || pts[k - 1].1 != 0.0 {
                out.push(x0);
            }
        } else if d0 * d1 < 0.0 {
            out.push(x0 - d0 * (x1 - x0) / (d1 - d0));
        }
    }
    if let Some(&(x, d)) = pts.last() {
        if d == 0.0 && pts.len() >= 2 && pts[pts.len() - 2].1 != 0.0 {
            out.push(x);
        }
    }
    out
}

/// What a scan evaluates at each Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMeasure {
    Gqd(Strategy),
    /// Asymmetric discord with the second spin of the pair measured.
    PairDiscord,
}

impl ScanMeasure {
    pub fn name(self) -> &'static str {
        match self {
            ScanMeasure::Gqd(s) => s.name(),
            ScanMeasure::PairDiscord => "asymmetric-discord",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub solver: Solver,
    pub execution: Execution,
    /// Only used by pair discord.
    pub optimizer: OptimizerConfig,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub derivative: Vec<Option<f64>>,
    /// Ground-state degeneracy flag per Δ.
    pub degenerate: Vec<bool>,
    pub measure: ScanMeasure,
    pub chain: ChainSpec,
    pub group: SpinGroup,
}

impl ScanResult {
    pub fn zero_crossings(&self) -> Vec<f64> {
        zero_crossings(&self.deltas, &self.derivative)
    }

    /// Crossings strictly inside `(lo, hi)`.
    pub fn crossings_within(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.zero_crossings()
            .into_iter()
            .filter(|&x| x > lo && x < hi)
            .collect()
    }
}

fn run_scan<F>(
    template: &ChainSpec,
    deltas: &[f64],
    group: SpinGroup,
    measure: ScanMeasure,
    options: &ScanOptions,
    evaluate: F,
) -> Result<ScanResult>
where
    F: Fn(&crate::DensityOperator) -> Result<f64> + Sync + Send,
{
    if deltas.is_empty() {
        return Err(Error::OutOfRange("empty delta grid".into()));
    }
    group.spins(template)?;
    let points = options
        .execution
        .map(deltas, |&delta| -> Result<(f64, bool)> {
            let spec = template.with_delta(delta);
            let gs = chain_ground_state(&spec, options.solver, options.execution)?;
            let rho = reduce_to_group(&gs.vector, &spec, &group)?;
            Ok((evaluate(&rho)?, gs.degenerate))
        });
    let mut values = Vec::with_capacity(deltas.len());
    let mut degenerate = Vec::with_capacity(deltas.len());
    for p in points {
        let (v, d) = p?;
        values.push(v);
        degenerate.push(d);
    }
    Ok(ScanResult {
        deltas: deltas.to_vec(),
        derivative: nonuniform_derivative(deltas, &values),
        values,
        degenerate,
        measure,
        chain: *template,
        group,
    })
}

/// GQD of a spin group across Δ with a fixed measurement strategy.
pub fn gqd_scan(
    template: &ChainSpec,
    deltas: &[f64],
    group: SpinGroup,
    strategy: Strategy,
    options: &ScanOptions,
) -> Result<ScanResult> {
    if strategy == Strategy::Minimize {
        return Err(Error::UnsupportedStrategy(
            "chain scans use fixed-z, fixed-x or reduced-eigenbasis".into(),
        ));
    }
    if group.kind.is_pair() {
        return Err(Error::InvalidGroup(
            "gqd scans need a quartet, sextet or octet".into(),
        ));
    }
    let config = options.optimizer.clone();
    run_scan(
        template,
        deltas,
        group,
        ScanMeasure::Gqd(strategy),
        options,
        move |rho| Ok(gqd(rho, strategy, &config)?.value),
    )
}

/// Asymmetric discord of a spin pair across Δ.
pub fn pairwise_discord_scan(
    template: &ChainSpec,
    deltas: &[f64],
    kind: GroupKind,
    anchor: usize,
    options: &ScanOptions,
) -> Result<ScanResult> {
    if !kind.is_pair() {
        return Err(Error::InvalidGroup(format!(
            "{} is not a pair",
            kind.name()
        )));
    }
    let config = options
        .optimizer
        .clone()
        .with_execution(Execution::Sequential);
    run_scan(
        template,
        deltas,
        SpinGroup::new(kind, anchor),
        ScanMeasure::PairDiscord,
        options,
        move |rho| Ok(discord_asymmetric(rho, &config)?.value),
    )
}
