use clap::{Args, Parser, Subcommand};
use hyperloc_cli::config::{
    self, BumpConfig, ExpandConfig, HeatKernelConfig, HeatSolveConfig, LocalizeConfig, StudyConfig, SweepConfig,
    Validate, SCHEMA_VERSION,
};
use hyperloc_cli::output::RunOutput;
use hyperloc_cli::{checks, commands, golden, CliError, CliResult};
use std::path::{Path, PathBuf};

/// Inverse localization and heat-kernel experiments on hyperbolic space.
#[derive(Parser)]
#[command(name = "hyperloc", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit a Helmholtz expansion to a preset target
    Expand(ConfigArgs),
    /// Build eigenfunctions approximating a target and measure the error
    Localize(ConfigArgs),
    /// Convergence sweep over nhat with the automatic curvature
    Study(ConfigArgs),
    /// Heat kernel tables and the propagator
    #[command(subcommand)]
    Heat(HeatCmd),
    /// Run a named check suite (`all` runs every suite)
    Verify {
        suite: String,
        #[arg(long, default_value = "hyperloc-out")]
        out: PathBuf,
    },
    /// Compare outputs with golden fixtures
    Regress {
        /// fixture names; all fixtures when empty
        names: Vec<String>,
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
        /// rewrite the goldens instead of comparing
        #[arg(long)]
        regenerate: bool,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "hyperloc-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum HeatCmd {
    /// Tabulate H(t, rho) with its bound and dimension-shift defects
    Kernel(HeatKernelArgs),
    /// Propagate a bump datum
    Solve(HeatSolveArgs),
}

/// Shared kernel flags; a `--config` file takes precedence over them.
#[derive(Args)]
struct KernelFlags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "hyperloc-out")]
    out: PathBuf,
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,5")]
    times: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4,8")]
    radii: Vec<f64>,
}

#[derive(Args)]
struct HeatKernelArgs {
    #[command(flatten)]
    common: KernelFlags,
}

#[derive(Args)]
struct HeatSolveArgs {
    #[command(flatten)]
    common: KernelFlags,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
}

fn from_flags_or_file<T: serde::de::DeserializeOwned + Validate>(file: Option<&Path>, flags: T) -> CliResult<T> {
    match file {
        Some(p) => config::load(p),
        None => {
            flags.validate()?;
            Ok(flags)
        }
    }
}

fn emit(out: &RunOutput, dir: &Path) -> CliResult<()> {
    for line in &out.summary {
        println!("{line}");
    }
    for p in out.write(dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Expand(a) => emit(&commands::run_expand(&config::load::<ExpandConfig>(&a.config)?)?, &a.out),
        Cmd::Localize(a) => emit(&commands::run_localize(&config::load::<LocalizeConfig>(&a.config)?)?, &a.out),
        Cmd::Study(a) => emit(&commands::run_study(&config::load::<StudyConfig>(&a.config)?)?, &a.out),
        Cmd::Heat(HeatCmd::Kernel(a)) => {
            let c = a.common;
            let cfg = from_flags_or_file(
                c.config.as_deref(),
                HeatKernelConfig {
                    schema_version: SCHEMA_VERSION,
                    d: c.d,
                    kappa: c.kappa,
                    times: c.times,
                    radii: c.radii,
                    calibration: SweepConfig::default(),
                },
            )?;
            emit(&commands::run_heat_kernel(&cfg)?, &c.out)
        }
        Cmd::Heat(HeatCmd::Solve(a)) => {
            let c = a.common;
            let cfg = from_flags_or_file(
                c.config.as_deref(),
                HeatSolveConfig {
                    schema_version: SCHEMA_VERSION,
                    d: c.d,
                    kappa: c.kappa,
                    initial: BumpConfig {
                        amplitude: a.amplitude,
                        radius: a.radius,
                    },
                    times: c.times,
                    radii: c.radii,
                },
            )?;
            emit(&commands::run_heat_solve(&cfg)?, &c.out)
        }
        Cmd::Verify { suite, out } => {
            let (res, ok) = checks::run_verify(&suite)?;
            emit(&res, &out)?;
            if ok {
                Ok(())
            } else {
                let last = res.summary.last().cloned().unwrap_or_default();
                Err(CliError::Verification(last))
            }
        }
        Cmd::Regress {
            names,
            fixtures,
            regenerate,
        } => {
            let rep = golden::regress(&fixtures, &names, regenerate)?;
            for l in rep.lines() {
                println!("{l}");
            }
            if rep.passed() {
                Ok(())
            } else {
                Err(CliError::Verification("golden regression failed".into()))
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("hyperloc: {e}");
        std::process::exit(e.exit_code());
    }
}
