use gqd_core::ashkin_teller::{
    default_delta_grid, gqd_scan, uniform_delta_grid, ChainSpec, GroupKind, ScanOptions, Solver,
    SpinGroup, DENSE_SITE_LIMIT, ITERATIVE_SITE_LIMIT,
};
use gqd_core::correlations::{
    discord_asymmetric, mutual_information, symmetric_discord, Bipartition,
};
use gqd_core::states::{ghz_surface, werner_ghz, werner_ghz_gqd_analytic, WernerGhzParam};
use gqd_core::{gqd, Execution, Strategy};
use serde_json::{json, Value};

use crate::args::{GroupArg, ScanStrategy, StrategyArg, WernerMode};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Report};
use crate::state_spec::StateSpec;

/// Tolerance for the monotonicity flag of the Werner-GHZ sweep.
const MONOTONE_TOL: f64 = 1e-9;

pub fn ghz_surface_cmd(resolution: usize) -> CliResult<Report> {
    let pts = ghz_surface(resolution)?;
    let mut r = Report::new("ghz-surface", vec!["theta2", "theta3", "gqd"]);
    for p in &pts {
        r.push(vec![p.theta2.into(), p.theta3.into(), p.value.into()]);
    }
    let min = pts
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("non-empty grid");
    let max = pts
        .iter()
        .map(|p| p.value)
        .fold(f64::NEG_INFINITY, f64::max);
    r.meta("resolution", resolution);
    r.meta("rows", pts.len());
    r.meta(
        "min",
        json!({"theta2": min.theta2, "theta3": min.theta3, "gqd": min.value}),
    );
    r.meta("max_gqd", max);
    Ok(r)
}

pub fn werner_ghz_cmd(mode: WernerMode, settings: &Settings) -> CliResult<Report> {
    let step = settings.grid_step.unwrap_or(0.01);
    let mus = uniform_delta_grid(0.0, 1.0, step)?;
    let config = settings.optimizer()?.with_execution(Execution::Sequential);
    let analytic: Option<Vec<f64>> = (mode != WernerMode::Numeric)
        .then(|| mus.iter().map(|&m| werner_ghz_gqd_analytic(m)).collect());
    let numeric: Option<Vec<f64>> = if mode == WernerMode::Analytic {
        None
    } else {
        let values = Execution::Parallel.map(&mus, |&mu| -> CliResult<f64> {
            let rho = werner_ghz(WernerGhzParam::new(mu)?);
            Ok(gqd(&rho, Strategy::Minimize, &config)?.value)
        });
        Some(values.into_iter().collect::<CliResult<_>>()?)
    };

    let columns = match mode {
        WernerMode::Analytic => vec!["mu", "gqd_analytic"],
        WernerMode::Numeric => vec!["mu", "gqd_numeric"],
        WernerMode::Both => vec!["mu", "gqd_analytic", "gqd_numeric", "abs_difference"],
    };
    let mut r = Report::new("werner-ghz", columns);
    let mut max_diff: f64 = 0.0;
    for (k, &mu) in mus.iter().enumerate() {
        let mut row = vec![Cell::from(mu)];
        let a = analytic.as_ref().map(|v| v[k]);
        let n = numeric.as_ref().map(|v| v[k]);
        row.extend(a.map(Cell::from));
        row.extend(n.map(Cell::from));
        if let (Some(a), Some(n)) = (a, n) {
            max_diff = max_diff.max((a - n).abs());
            row.push((a - n).abs().into());
        }
        r.push(row);
    }
    let curve = analytic
        .as_ref()
        .or(numeric.as_ref())
        .expect("at least one column");
    let monotone = curve.windows(2).all(|w| w[1] >= w[0] - MONOTONE_TOL);
    r.meta("mode", format!("{mode:?}").to_lowercase());
    r.meta("points", mus.len());
    r.meta("seed", settings.seed);
    if mode == WernerMode::Both {
        r.meta("max_abs_difference", max_diff);
    }
    r.meta("monotone", monotone);
    Ok(r)
}

pub struct AtScanRequest {
    pub sites: usize,
    pub group: GroupArg,
    pub anchor: usize,
    pub strategy: ScanStrategy,
    pub beta: f64,
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub iterative: bool,
}

pub fn at_scan_cmd(req: &AtScanRequest, settings: &Settings) -> CliResult<Report> {
    let limit = if req.iterative {
        ITERATIVE_SITE_LIMIT
    } else {
        DENSE_SITE_LIMIT
    };
    if req.sites > limit {
        let hint = if req.iterative {
            ""
        } else {
            " (pass --iterative for up to 8)"
        };
        return Err(CliError::Budget(format!(
            "{} sites exceeds the limit of {limit}{hint}",
            req.sites
        )));
    }
    let deltas =
        if req.delta_min.is_none() && req.delta_max.is_none() && settings.grid_step.is_none() {
            default_delta_grid()
        } else {
            uniform_delta_grid(
                req.delta_min.unwrap_or(0.2),
                req.delta_max.unwrap_or(1.8),
                settings.grid_step.unwrap_or(0.05),
            )?
        };
    let template = ChainSpec::new(req.sites, req.beta, 1.0)?;
    let kind = match req.group {
        GroupArg::Quartet => GroupKind::Quartet,
        GroupArg::Sextet => GroupKind::Sextet,
        GroupArg::Octet => GroupKind::Octet,
    };
    let strategy = match req.strategy {
        ScanStrategy::FixedZ => Strategy::FixedZ,
        ScanStrategy::FixedX => Strategy::FixedX,
        ScanStrategy::ReducedEigenbasis => Strategy::ReducedEigenbasis,
    };
    let solver = if req.iterative {
        Solver::Lanczos
    } else {
        Solver::Dense
    };
    let options = ScanOptions {
        solver,
        execution: Execution::Parallel,
        optimizer: settings.optimizer()?,
    };
    let group = SpinGroup::new(kind, req.anchor);
    let scan = gqd_scan(&template, &deltas, group, strategy, &options)?;

    let mut r = Report::new("at-scan", vec!["delta", "gqd", "derivative", "degenerate"]);
    for k in 0..scan.deltas.len() {
        r.push(vec![
            scan.deltas[k].into(),
            scan.values[k].into(),
            scan.derivative[k].into(),
            scan.degenerate[k].into(),
        ]);
    }
    r.meta("sites", req.sites);
    r.meta("spins", template.spins());
    r.meta("beta", req.beta);
    r.meta("group", kind.name());
    r.meta("anchor", req.anchor);
    r.meta("strategy", strategy.name());
    r.meta("solver", if req.iterative { "lanczos" } else { "dense" });
    r.meta("points", scan.deltas.len());
    r.meta("zero_crossings", scan.zero_crossings());
    r.meta("any_degenerate", scan.degenerate.iter().any(|&d| d));
    Ok(r)
}

pub fn discord_cmd(state: &str, strategy: StrategyArg, settings: &Settings) -> CliResult<Report> {
    let spec: StateSpec = state.parse()?;
    let rho = spec.build()?;
    let config = settings.optimizer()?;
    let n = rho.n_subsystems();
    let strategy = match strategy {
        StrategyArg::FixedZ => Strategy::FixedZ,
        StrategyArg::FixedX => Strategy::FixedX,
        StrategyArg::ReducedEigenbasis => Strategy::ReducedEigenbasis,
        StrategyArg::Minimize => Strategy::Minimize,
    };

    let mi = mutual_information(&rho, &Bipartition::last(n)?)?;
    let asym = discord_asymmetric(&rho, &config)?;
    let sym = (n == 2)
        .then(|| symmetric_discord(&rho, &config))
        .transpose()?;
    let g = gqd(&rho, strategy, &config)?;

    let mut r = Report::new("discord", vec!["quantity", "value"]);
    r.push(vec!["mutual_information".into(), mi.into()]);
    r.push(vec![
        "classical_correlation".into(),
        (mi - asym.value).into(),
    ]);
    r.push(vec!["discord_asymmetric".into(), asym.value.into()]);
    r.push(vec![
        "discord_symmetric".into(),
        sym.as_ref().map(|s| s.value()).into(),
    ]);
    r.push(vec!["gqd".into(), g.value.into()]);
    r.meta("state", state.trim());
    r.meta("subsystems", n);
    r.meta("measured_subsystem", n - 1);
    r.meta("gqd_strategy", strategy.name());
    r.meta("seed", settings.seed);
    let angles = |a: &[gqd_core::QubitBasisAngles]| -> Value {
        a.iter().map(|x| json!([x.theta(), x.phi()])).collect()
    };
    r.meta("discord_asymmetric_angles", angles(&asym.angles));
    if let Some(a) = &g.angles {
        r.meta("gqd_angles", angles(a));
    }
    r.meta("converged", asym.converged && g.converged);
    Ok(r)
}
