use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Format, GlobalArgs};
use crate::error::{CliError, CliResult};

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub grid_step: Option<f64>,
    pub multistarts: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Effective settings: flags override the config file, which overrides
/// built-in defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub threads: usize,
    pub grid_step: Option<f64>,
    pub multistarts: Option<usize>,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let grid_step = args.grid_step.or(file.grid_step);
        if let Some(s) = grid_step {
            if !(s.is_finite() && s > 0.0) {
                return Err(CliError::Usage(format!(
                    "--grid-step must be positive, got {s}"
                )));
            }
        }
        Ok(Settings {
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            seed: args.seed.or(file.seed).unwrap_or(0),
            threads: args.threads.or(file.threads).unwrap_or(0),
            grid_step,
            multistarts: args.multistarts.or(file.multistarts),
        })
    }

    pub fn optimizer(&self) -> CliResult<gqd_core::OptimizerConfig> {
        let mut cfg = gqd_core::OptimizerConfig::default().with_seed(self.seed);
        if let Some(m) = self.multistarts {
            cfg.multistarts = m;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gqd.toml");
        std::fs::write(
            &path,
            "seed = 7\nformat = \"json\"\ngrid-step = 0.1\nmultistarts = 12\n",
        )
        .unwrap();
        let args = GlobalArgs {
            config: Some(path),
            seed: Some(3),
            ..GlobalArgs::default()
        };
        let s = Settings::resolve(&args).unwrap();
        assert_eq!(s.seed, 3);
        assert_eq!(s.format, Format::Json);
        assert_eq!(s.grid_step, Some(0.1));
        assert_eq!(s.optimizer().unwrap().multistarts, 12);
    }

    #[test]
    fn bad_config_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gqd.toml");
        std::fs::write(&path, "colour = 3\n").unwrap();
        let args = GlobalArgs {
            config: Some(path),
            ..GlobalArgs::default()
        };
        assert!(matches!(Settings::resolve(&args), Err(CliError::Usage(_))));
        let missing = GlobalArgs {
            config: Some(dir.path().join("nope.toml")),
            ..GlobalArgs::default()
        };
        assert!(matches!(Settings::resolve(&missing), Err(CliError::Io(_))));
    }

    #[test]
    fn non_positive_step_is_usage_error() {
        let args = GlobalArgs {
            grid_step: Some(0.0),
            ..GlobalArgs::default()
        };
        assert!(matches!(Settings::resolve(&args), Err(CliError::Usage(_))));
    }
}
