use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use mccsim_core::channel::ScatteringKind;
use mccsim_core::geometry::Scenario;

use mccsim_harness::capacity::run_fig4;
use mccsim_harness::config::ExperimentSpec;
use mccsim_harness::error::{Error, Result};
use mccsim_harness::experiment::{
    bound_curves, run_fig3, ResultRow, ResultTable, TableMetadata,
};
use mccsim_harness::report::{
    bound_rows_to_csv, capacity_table_to_csv, result_table_to_csv, to_json, OutputFormat,
};
use mccsim_harness::tails::{validate_tails, TailOptions};

/// Monte Carlo and closed-form toolkit for clustered base-station
/// cooperation. Exit codes: 0 success, 1 invalid configuration, 2 numerical
/// or I/O failure, 3 tail-validation failure.
#[derive(Debug, Parser)]
#[command(name = "mccsim", version, about)]
struct Cli {
    /// TOML experiment configuration; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo trials per table row.
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (0 = one per CPU).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Table encoding.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate one outage probability.
    Simulate {
        /// Mean cluster size.
        #[arg(long, default_value_t = 4.0)]
        ell: f64,
        /// cluster-center, typical, or no-mcc.
        #[arg(long, default_value = "cluster-center")]
        scenario: String,
        /// sparse or rich.
        #[arg(long, default_value = "sparse")]
        scattering: String,
    },
    /// Outage probability over the cluster-size sweep, with exponent bounds.
    Fig3,
    /// Outage capacity over the cluster-size sweep.
    Fig4,
    /// Empirical-vs-analytic tail validation suite; exits 3 on any failure.
    Tails {
        /// Multiplier on the documented sample sizes.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Print the analytic exponent-bound curves on the sweep.
    Bounds,
}

fn main() -> ExitCode {
    // Parse manually so argument mistakes exit with the config code (1)
    // rather than clap's default, while --help/--version stay successful.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let mut spec = match &cli.config {
        Some(path) => ExperimentSpec::load(path)?,
        None => ExperimentSpec::default(),
    };
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(trials) = cli.trials {
        spec.trials = trials;
    }
    if let Some(out) = &cli.out {
        spec.output_path = Some(out.clone());
    }
    spec.validate()?;
    Ok(spec)
}

fn emit(spec: &ExperimentSpec, text: String) -> Result<()> {
    match &spec.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let spec = load_spec(&cli)?;

    match &cli.command {
        Command::Simulate {
            ell,
            scenario,
            scattering,
        } => {
            let scenario = Scenario::from_str(scenario)?;
            let kind = ScatteringKind::from_str(scattering)?;
            let cfg = spec.sim_config(*ell, scenario, kind)?;
            let est = mccsim_core::simcore::estimate_outage(&cfg)?;
            let bounds = mccsim_harness::experiment::bounds_for(&spec, *ell, scenario, kind)?;
            let table = ResultTable {
                metadata: TableMetadata::new(&spec),
                rows: vec![ResultRow {
                    ell: *ell,
                    scenario,
                    scattering: kind,
                    trials: est.trials,
                    outage_count: est.outage_count,
                    p_hat: est.p_hat,
                    ci_low: est.ci.0,
                    ci_high: est.ci.1,
                    ope_hat: est.ope,
                    bound_lower: bounds.map(|b| b.lower),
                    bound_upper: bounds.map(|b| b.upper),
                }],
            };
            let text = match cli.format {
                OutputFormat::Csv => result_table_to_csv(&table)?,
                OutputFormat::Json => to_json(&table)?,
            };
            emit(&spec, text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fig3 => {
            let table = run_fig3(&spec)?;
            let complete = table.is_complete();
            for err in &table.metadata.row_errors {
                eprintln!("row failed: {err}");
            }
            let text = match cli.format {
                OutputFormat::Csv => result_table_to_csv(&table)?,
                OutputFormat::Json => to_json(&table)?,
            };
            emit(&spec, text)?;
            Ok(if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Fig4 => {
            let table = run_fig4(&spec)?;
            let complete = table.is_complete();
            for err in &table.metadata.row_errors {
                eprintln!("row failed: {err}");
            }
            let text = match cli.format {
                OutputFormat::Csv => capacity_table_to_csv(&table)?,
                OutputFormat::Json => to_json(&table)?,
            };
            emit(&spec, text)?;
            Ok(if complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Tails { scale } => {
            if !(*scale > 0.0 && scale.is_finite()) {
                return Err(Error::Config(format!(
                    "scale must be finite and positive, got {scale}"
                )));
            }
            let opts = TailOptions {
                seed: spec.seed,
                scale: *scale,
                analytic_alpha: None,
            };
            let report = validate_tails(&spec, &opts)?;
            print!("{}", report.render_text());
            if let Some(path) = &spec.output_path {
                std::fs::write(path, to_json(&report)?)?;
            }
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Bounds => {
            let rows = bound_curves(&spec)?;
            let text = match cli.format {
                OutputFormat::Csv => bound_rows_to_csv(&TableMetadata::new(&spec), &rows)?,
                OutputFormat::Json => to_json(&rows)?,
            };
            emit(&spec, text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
