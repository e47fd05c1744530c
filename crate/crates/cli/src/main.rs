use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use onecircle_cli::acceptance::{self, Options};
use onecircle_cli::commands;
use onecircle_cli::config::Overrides;
use onecircle_cli::{CliError, CommandConfig, Format};

/// Moduli of one-circle packings on affine tori and the Dehn filling space
/// they parametrize.
#[derive(Parser, Debug)]
#[command(name = "onecircle", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write PREFIX.csv / PREFIX.json / PREFIX.svg instead of stdout.
    #[arg(long, global = true, value_name = "PREFIX")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Validation tolerance for packings.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Residual tolerance of the parallelogram solver.
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    /// Initial size of the angular scan (at least 64).
    #[arg(long, global = true)]
    theta_samples: Option<usize>,
    /// Level schedule: `0.1,0.5`, `tail:K0..K1` or `lin:A:B:N`.
    #[arg(long, global = true, value_name = "SCHEDULE")]
    s: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torus parameter, region and filling coefficients of one c or a grid.
    Moduli {
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, value_name = "NxM")]
        grid: Option<String>,
        /// Half-width of the real range covered by --grid.
        #[arg(long)]
        re_max: Option<f64>,
    },
    /// The twelve special points per level and the loci figure.
    Loci,
    /// Random samples of the filling map and rotated boundary traces.
    Dehnspace {
        #[arg(long)]
        samples: Option<usize>,
        /// Slopes to trace, comma separated; `inf` allowed.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cone angle and singular-locus length along the (p, q) slope.
    Degenerate {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Developed circle packing and its dual; c = 0 is the hexagonal packing.
    Packing {
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        c: String,
        /// `K` or `m0:m1,n0:n1`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Scale packing radii by this factor (negative control).
        #[arg(long)]
        inject_kappa_fault: Option<f64>,
        /// Run only these criteria (repeatable); the self-test criterion
        /// needs the full suite.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
}

fn config(cli: &Cli) -> Result<CommandConfig, CliError> {
    let file = match &cli.common.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    let mut flags = Overrides {
        root_tol: cli.common.root_tol,
        validation_tol: cli.common.tol,
        theta_samples: cli.common.theta_samples,
        schedule: cli.common.s.clone(),
        out: cli.common.out.clone(),
        format: cli.common.format,
        ..Default::default()
    };
    match &cli.command {
        Command::Moduli { grid, re_max, .. } => {
            flags.grid = grid.clone();
            flags.re_max = *re_max;
        }
        Command::Dehnspace { samples, seed, .. } => {
            flags.samples = *samples;
            flags.seed = *seed;
        }
        Command::Packing { window, .. } => flags.window = window.clone(),
        _ => {}
    }
    CommandConfig::resolve(file.merged(flags))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Command::Selftest {
        inject_kappa_fault,
        only,
    } = &cli.command
    {
        let opts = Options {
            kappa_fault: *inject_kappa_fault,
        };
        let outcomes = if only.is_empty() {
            acceptance::run_all(&opts, |o| println!("{o}"))
        } else {
            only.iter()
                .map(|&id| {
                    let o = acceptance::run(id as usize, &opts);
                    println!("{o}");
                    o
                })
                .collect()
        };
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        return if failed == 0 {
            Ok(())
        } else {
            Err(CliError::SelfTest(failed))
        };
    }
    let cfg = config(cli)?;
    let out = match &cli.command {
        Command::Moduli { c, .. } => commands::moduli(&cfg, c.as_deref())?,
        Command::Loci => commands::loci(&cfg)?,
        Command::Dehnspace { t, .. } => commands::dehnspace(&cfg, t.as_deref())?,
        Command::Degenerate { p, q } => commands::degenerate(&cfg, *p, *q)?,
        Command::Packing { c, .. } => commands::packing(&cfg, c)?,
        Command::Selftest { .. } => unreachable!(),
    };
    let written = out.emit(&cfg, &mut std::io::stdout().lock())?;
    for line in &out.summary {
        eprintln!("{line}");
    }
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    match out.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
