use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use cli_io::{
    check_tolerance, compare_rows, execute, read_series, sweep, write_run, CliError, Norm,
    RunConfig, SweepAxis,
};

#[derive(Parser)]
#[command(name = "qtraj", about = "Run, compare, and sweep discrete trajectory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress the human-readable summary; files are still written.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run config and write series, diagnostics, and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare one quantity between two series files.
    Compare {
        /// First series CSV (the run under test).
        run_a: PathBuf,
        /// Second series CSV (the reference side).
        run_b: PathBuf,
        #[arg(long, default_value = "P")]
        quantity: String,
        #[arg(long, default_value = "sup")]
        norm: Norm,
        /// Fail with exit code 3 when the selected norm exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Rerun a config across axis values and fit the error order.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
    },
}

fn load_config(path: &PathBuf, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let mut config: RunConfig =
        serde_json::from_str(&text).map_err(|source| CliError::Parse {
            path: path.clone(),
            source,
        })?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.validate()?;
    Ok(config)
}

fn main_inner(cli: &Cli) -> Result<(), CliError> {
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match &cli.command {
        Command::Run { config } => {
            let config = load_config(config, cli.seed)?;
            let start = Instant::now();
            let artifacts = execute(&config)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let (manifest, series_path) =
                write_run(&config, &artifacts.rows, &artifacts.diagnostics, &out_dir, wall)?;
            if !cli.quiet {
                println!(
                    "wrote {} rows to {} (config {}, {:.1} ms)",
                    artifacts.rows.len(),
                    series_path.display(),
                    &manifest.hash[..12],
                    wall
                );
                for (k, v) in &artifacts.diagnostics {
                    println!("  {k} = {v}");
                }
            }
        }
        Command::Validate { config } => {
            let config = load_config(config, cli.seed)?;
            if !cli.quiet {
                println!("config ok: {:?} on {:?}", config.formulation, config.model);
            }
        }
        Command::Compare {
            run_a,
            run_b,
            quantity,
            norm,
            tolerance,
        } => {
            let a = read_series(run_a)?;
            let b = read_series(run_b)?;
            let report = compare_rows(&a, &b, quantity)?;
            if !cli.quiet {
                println!(
                    "{} over {} points: sup {:.3e} at t = {:.6} index {}, l2 {:.3e}, rel-l2 {:.3e}",
                    report.quantity,
                    report.points,
                    report.sup,
                    report.sup_t,
                    report.sup_index,
                    report.l2,
                    report.rel_l2
                );
            }
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            if let Some(tol) = tolerance {
                check_tolerance(&report, *norm, *tol)?;
            }
        }
        Command::Sweep {
            config,
            axis,
            values,
        } => {
            let config = load_config(config, cli.seed)?;
            let report = sweep(&config, *axis, values)?;
            if !cli.quiet {
                for p in &report.points {
                    println!("{} = {:.6e}: error {:.6e}", report.axis, p.value, p.error);
                }
                println!("fitted order {:.3}", report.fitted_order);
            }
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = main_inner(&cli) {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            eprintln!("  caused by: {s}");
            source = s.source();
        }
        std::process::exit(e.exit_code());
    }
}
