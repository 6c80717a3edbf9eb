//! Command-line front end for the `thzlink` experiment runners.
//!
//! Every subcommand reads one TOML run configuration (all keys optional),
//! applies command-line overrides, executes the corresponding runner, and
//! writes CSV.
//!
//! Exit codes: `0` success, `2` configuration error, `3` a result table
//! contains a non-finite value, `4` success but at least one Monte Carlo
//! point missed its target error count.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thzlink::harness::{self, RunConfig, RunOutput};

#[derive(Parser)]
#[command(
    name = "thzlink",
    version,
    about = "Link-level analysis and simulation of sub-terahertz wireless links",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic SNR and noise decomposition across a parameter sweep.
    SnrSweep(CommonArgs),
    /// Monte Carlo bit-error-rate across a parameter sweep.
    BerSweep(CommonArgs),
    /// Conditional noise statistics per constellation power group.
    NoiseStats(CommonArgs),
    /// Power penalty at a target error rate across phase-noise severities.
    PhaseNoiseSuite(CommonArgs),
    /// Measured spectrum of a synthesized phase-noise trace.
    Psd(CommonArgs),
    /// Predicted SNR of frozen laboratory scenarios against references.
    Validate(CommonArgs),
    /// Itemised link budget for the configured geometry.
    Budget(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration (defaults cover every key when omitted).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override one configuration key, e.g. `photonics.rin_db_hz=-150`.
    #[arg(long = "set", value_name = "KEY=VALUE", action = clap::ArgAction::Append)]
    set: Vec<String>,

    /// Master seed (shorthand for --set run.seed=N).
    #[arg(long)]
    seed: Option<u64>,

    /// Symbol budget per Monte Carlo point (shorthand for --set run.symbols=N).
    #[arg(long)]
    symbols: Option<u64>,

    /// Worker threads, 0 = automatic (shorthand for --set run.workers=N).
    #[arg(long)]
    workers: Option<usize>,

    /// Write the primary CSV table here instead of stdout. Extra tables are
    /// written next to it as `<stem>.<name>.csv`.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<RunConfig, thzlink::Error> {
        let mut overrides: Vec<(String, String)> = Vec::new();
        for kv in &self.set {
            let (key, value) = kv.split_once('=').ok_or_else(|| {
                thzlink::Error::InvalidConfig(format!(
                    "--set expects KEY=VALUE, got {kv:?}"
                ))
            })?;
            overrides.push((key.to_string(), value.to_string()));
        }
        if let Some(seed) = self.seed {
            overrides.push(("run.seed".into(), seed.to_string()));
        }
        if let Some(symbols) = self.symbols {
            overrides.push(("run.symbols".into(), symbols.to_string()));
        }
        if let Some(workers) = self.workers {
            overrides.push(("run.workers".into(), workers.to_string()));
        }
        RunConfig::load_with_overrides(self.config.as_deref(), &overrides)
    }
}

/// Path for an extra table: `results/sweep.csv` + `fit` →
/// `results/sweep.fit.csv`.
fn extra_path(primary: &Path, name: &str) -> PathBuf {
    let stem = primary
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    primary.with_file_name(format!("{stem}.{name}.csv"))
}

fn write_output(out: &Option<PathBuf>, result: &RunOutput) -> Result<(), thzlink::Error> {
    match out {
        Some(path) => {
            result.table.save(path)?;
            for (name, table) in &result.extras {
                table.save(&extra_path(path, name))?;
            }
        }
        None => {
            print!("{}", result.table.to_csv_string()?);
            if !result.extras.is_empty() {
                eprintln!(
                    "note: {} extra table(s) not printed; pass --out to write them",
                    result.extras.len()
                );
            }
        }
    }
    Ok(())
}

fn run(command: &Command) -> Result<ExitCode, thzlink::Error> {
    let args = match command {
        Command::SnrSweep(a)
        | Command::BerSweep(a)
        | Command::NoiseStats(a)
        | Command::PhaseNoiseSuite(a)
        | Command::Psd(a)
        | Command::Validate(a)
        | Command::Budget(a) => a,
    };
    let cfg = args.load()?;
    let result = match command {
        Command::SnrSweep(_) => harness::run_snr_sweep(&cfg)?,
        Command::BerSweep(_) => harness::run_ber_sweep(&cfg)?,
        Command::NoiseStats(_) => harness::run_noise_stats(&cfg)?,
        Command::PhaseNoiseSuite(_) => harness::run_phase_noise_suite(&cfg)?,
        Command::Psd(_) => harness::run_phase_psd(&cfg)?,
        Command::Validate(_) => harness::run_validation(&cfg)?,
        Command::Budget(_) => harness::run_budget(&cfg)?,
    };

    if result.table.has_nan() || result.extras.iter().any(|(_, t)| t.has_nan()) {
        // Still write the output for post-mortem inspection.
        write_output(&args.out, &result)?;
        eprintln!("error: result table contains non-finite values");
        return Ok(ExitCode::from(3));
    }
    write_output(&args.out, &result)?;
    if result.low_confidence {
        eprintln!(
            "warning: at least one point missed its target error count; raise run.symbols"
        );
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => code,
        Err(e @ (thzlink::Error::InvalidConfig(_)
        | thzlink::Error::ConfigParse(_)
        | thzlink::Error::InvalidParameter { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
