//! Parsing of `discord` state names such as `ghz(3)` or `at-pair(3,0.8,same-site)`.

use gqd_core::ashkin_teller::{
    chain_ground_state, reduce_to_group, ChainSpec, GroupKind, Solver, SpinGroup,
};
use gqd_core::states::{bell, ghz, werner_ghz, werner_two_qubit, WernerGhzParam};
use gqd_core::{DensityOperator, Execution};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Bell,
    Werner(f64),
    Ghz(usize),
    WernerGhz(f64),
    AtPair {
        sites: usize,
        delta: f64,
        kind: GroupKind,
    },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<T> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("invalid {what}: {s:?}")))
}

impl std::str::FromStr for StateSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) => {
                let inner = s[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| usage(format!("missing ')' in {s:?}")))?;
                (&s[..i], inner.split(',').map(str::trim).collect::<Vec<_>>())
            }
            None => (s, Vec::new()),
        };
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(usage(format!(
                    "{name} takes {n} argument(s), got {}",
                    args.len()
                )))
            }
        };
        match name {
            "bell" => arity(0).map(|_| StateSpec::Bell),
            "werner" => {
                arity(1)?;
                Ok(StateSpec::Werner(number(args[0], "μ")?))
            }
            "ghz" => {
                arity(1)?;
                Ok(StateSpec::Ghz(number(args[0], "qubit count")?))
            }
            "werner-ghz" => {
                arity(1)?;
                Ok(StateSpec::WernerGhz(number(args[0], "μ")?))
            }
            "at-pair" => {
                arity(3)?;
                let kind = GroupKind::parse(args[2])
                    .filter(|k| k.is_pair())
                    .ok_or_else(|| usage(format!("unknown pair kind {:?}", args[2])))?;
                Ok(StateSpec::AtPair {
                    sites: number(args[0], "site count")?,
                    delta: number(args[1], "Δ")?,
                    kind,
                })
            }
            _ => Err(usage(format!("unknown state {s:?}"))),
        }
    }
}

impl StateSpec {
    pub fn build(&self) -> CliResult<DensityOperator> {
        Ok(match *self {
            StateSpec::Bell => bell(),
            StateSpec::Werner(mu) => werner_two_qubit(mu)?,
            StateSpec::Ghz(n) => ghz(n)?,
            StateSpec::WernerGhz(mu) => werner_ghz(WernerGhzParam::new(mu)?),
            StateSpec::AtPair { sites, delta, kind } => {
                let spec = ChainSpec::new(sites, 1.0, delta)?;
                let gs = chain_ground_state(&spec, Solver::Dense, Execution::Parallel)?;
                reduce_to_group(&gs.vector, &spec, &SpinGroup::new(kind, 0))?
            }
        })
    }
}
