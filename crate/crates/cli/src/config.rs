//! Settings shared by every subcommand: defaults, then a flat `key = value`
//! file, then command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use onecircle::parse::{parse_config, parse_grid, parse_schedule, parse_window};
use onecircle::{SolverConfig, Window};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(CliError::Usage(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandConfig {
    /// Residual accepted from the parallelogram solver.
    pub root_tol: f64,
    /// Residual accepted by packing validation.
    pub validation_tol: f64,
    pub theta_samples: usize,
    pub window: Window,
    pub grid: Option<(usize, usize)>,
    /// Half-width of the real range sampled by `moduli --grid`.
    pub re_max: f64,
    pub schedule: Option<Vec<f64>>,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for CommandConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        CommandConfig {
            root_tol: solver.residual_tolerance,
            validation_tol: 1e-9,
            theta_samples: solver.theta_samples,
            window: Window::symmetric(3),
            grid: None,
            re_max: 6.0,
            schedule: None,
            samples: 2000,
            seed: 1,
            out: None,
            format: None,
        }
    }
}

/// Raw values before validation; file and flags both produce this.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub root_tol: Option<f64>,
    pub validation_tol: Option<f64>,
    pub theta_samples: Option<usize>,
    pub window: Option<String>,
    pub grid: Option<String>,
    pub re_max: Option<f64>,
    pub schedule: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {raw:?}")))
}

impl Overrides {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for (k, v) in map {
            match k.as_str() {
                "root_tol" => o.root_tol = Some(value(k, v)?),
                "tol" => o.validation_tol = Some(value(k, v)?),
                "theta_samples" => o.theta_samples = Some(value(k, v)?),
                "window" => o.window = Some(v.clone()),
                "grid" => o.grid = Some(v.clone()),
                "re_max" => o.re_max = Some(value(k, v)?),
                "s" => o.schedule = Some(v.clone()),
                "samples" => o.samples = Some(value(k, v)?),
                "seed" => o.seed = Some(value(k, v)?),
                "out" => o.out = Some(PathBuf::from(v)),
                "format" => o.format = Some(value(k, v)?),
                _ => return Err(CliError::Usage(format!("unknown config key {k:?}"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_map(&parse_config(&text)?)
    }

    /// Fields set in `over` win.
    pub fn merged(self, over: Overrides) -> Overrides {
        Overrides {
            root_tol: over.root_tol.or(self.root_tol),
            validation_tol: over.validation_tol.or(self.validation_tol),
            theta_samples: over.theta_samples.or(self.theta_samples),
            window: over.window.or(self.window),
            grid: over.grid.or(self.grid),
            re_max: over.re_max.or(self.re_max),
            schedule: over.schedule.or(self.schedule),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

impl CommandConfig {
    pub fn resolve(o: Overrides) -> Result<Self, CliError> {
        let d = CommandConfig::default();
        let cfg = CommandConfig {
            root_tol: o.root_tol.unwrap_or(d.root_tol),
            validation_tol: o.validation_tol.unwrap_or(d.validation_tol),
            theta_samples: o.theta_samples.unwrap_or(d.theta_samples),
            window: match o.window {
                Some(w) => parse_window(&w)?,
                None => d.window,
            },
            grid: o.grid.map(|g| parse_grid(&g)).transpose()?,
            re_max: o.re_max.unwrap_or(d.re_max),
            schedule: o.schedule.map(|s| parse_schedule(&s)).transpose()?,
            samples: o.samples.unwrap_or(d.samples),
            seed: o.seed.unwrap_or(d.seed),
            out: o.out,
            format: o.format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be positive, got {x}")))
            }
        };
        positive("root tolerance", self.root_tol)?;
        positive("validation tolerance", self.validation_tol)?;
        positive("re_max", self.re_max)?;
        if self.theta_samples < 64 {
            return Err(CliError::Usage(format!(
                "theta grid needs at least 64 samples, got {}",
                self.theta_samples
            )));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("sample count must be positive".into()));
        }
        Ok(())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            theta_samples: self.theta_samples,
            residual_tolerance: self.root_tol,
            ..SolverConfig::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file =
            Overrides::from_map(&parse_config("tol = 1e-6\nwindow = 2\nseed = 9\n").unwrap())
                .unwrap();
        let flags = Overrides {
            validation_tol: Some(1e-3),
            ..Default::default()
        };
        let cfg = CommandConfig::resolve(file.merged(flags)).unwrap();
        assert_eq!(cfg.validation_tol, 1e-3);
        assert_eq!(cfg.window, Window::symmetric(2));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.root_tol, 1e-9);
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = [
            "tol = 0",
            "root_tol = -1",
            "theta_samples = 10",
            "samples = 0",
            "colour = red",
            "window = x",
            "s = 1.5",
            "format = png",
        ];
        for text in bad {
            let r =
                Overrides::from_map(&parse_config(text).unwrap()).and_then(CommandConfig::resolve);
            assert!(
                matches!(r, Err(CliError::Usage(_)) | Err(CliError::Compute(_))),
                "{text}"
            );
        }
    }
}
