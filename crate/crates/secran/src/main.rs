//! Command-line front end: `simulate`, `sweep`, `plot`, `selftest`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use secran::cccp::{reduce_to_streams, validate_feasibility};
use secran::experiments::{
    emit_csv, emit_plot, parse_config, parse_csv, run_sweep, ExperimentSpec,
};
use secran::model::{mix_seed, realize};
use secran::strategies::{evaluate_all, run_strategy, StrategyFlags};

#[derive(Parser)]
#[command(
    name = "secran",
    about = "Secure C-RAN downlink design: joint precoding and multivariate fronthaul compression",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every strategy on a single channel draw and print the full
    /// rate report.
    Simulate {
        /// Experiment config file.
        #[arg(long)]
        config: PathBuf,
        /// Seed for the topology/channel draw (default: master_seed).
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated strategy subset (default: from the config).
        #[arg(long)]
        strategies: Option<String>,
    },
    /// Run the full Monte Carlo sweep and write CSV (and SVG next to it).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (default: from the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the number of draws per sweep value.
        #[arg(long)]
        draws: Option<usize>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strategies: Option<String>,
    },
    /// Render an SVG line chart from a sweep CSV.
    Plot {
        /// CSV file produced by `sweep`.
        input: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in property suites.
    Selftest,
}

fn parse_strategy_list(s: &str) -> secran::Result<Vec<StrategyFlags>> {
    s.split(',').map(StrategyFlags::parse).collect()
}

fn apply_overrides(
    mut spec: ExperimentSpec,
    draws: Option<usize>,
    seed: Option<u64>,
    strategies: Option<&str>,
) -> secran::Result<ExperimentSpec> {
    if let Some(d) = draws {
        spec.num_draws = d;
    }
    if let Some(s) = seed {
        spec.master_seed = s;
    }
    if let Some(list) = strategies {
        spec.strategies = parse_strategy_list(list)?;
    }
    spec.validate()?;
    Ok(spec)
}

fn simulate(config: PathBuf, seed: Option<u64>, strategies: Option<String>) -> secran::Result<()> {
    let spec = apply_overrides(parse_config(&config)?, None, seed, strategies.as_deref())?;
    let sys = &spec.base_config;
    let draw_seed = spec.master_seed;
    let channels = realize(sys, draw_seed);
    println!(
        "single draw: seed {draw_seed}, realization digest {:016x}",
        channels.digest()
    );
    for &flags in &spec.strategies {
        let init_seed = mix_seed(&[draw_seed, 1]);
        let outcome = run_strategy(flags, sys, &channels, init_seed, None)?;
        let reduced = reduce_to_streams(&outcome.vars, sys);
        let report = evaluate_all(&reduced, sys, &channels)?;
        let audit = validate_feasibility(&reduced, sys)?;
        println!("\nstrategy {}", flags.label());
        println!(
            "  cccp: {} iterations, converged: {}, stalled: {}",
            outcome.trace.iterations, outcome.trace.converged, outcome.trace.stalled
        );
        println!(
            "  weighted secrecy sum-rate {:.6} bits/s/Hz (covariance level {:.6})",
            report.weighted_objective, outcome.report.weighted_objective
        );
        for k in 0..sys.num_ues {
            println!(
                "  UE {k}: secrecy margin {:+.6} | secrecy rate {:.6} | rate w/o secrecy {:.6}",
                report.secrecy_margin[k], report.secrecy_rate[k], report.nonsecrecy_rate[k]
            );
        }
        for (subset, usage) in &report.fronthaul_usage {
            let cap: f64 = subset.iter().map(|&i| sys.fronthaul_capacity[i]).sum();
            println!("  fronthaul S={subset:?}: {usage:.6} / {cap:.6} bits/s/Hz");
        }
        for (i, power) in report.per_ru_power.iter().enumerate() {
            println!("  RU {i} power: {power:.6} / {:.6}", sys.power_limit[i]);
        }
        println!(
            "  feasible: {} (max violation {:.3e})",
            audit.is_feasible(),
            audit.max_violation
        );
    }
    Ok(())
}

fn sweep(
    config: PathBuf,
    out: Option<PathBuf>,
    draws: Option<usize>,
    seed: Option<u64>,
    strategies: Option<String>,
) -> secran::Result<()> {
    let mut spec = apply_overrides(parse_config(&config)?, draws, seed, strategies.as_deref())?;
    if let Some(o) = out {
        spec.output_path = o;
    }
    eprintln!(
        "sweep: {} values x {} draws x {} strategies",
        spec.sweep_values.len(),
        spec.num_draws,
        spec.strategies.len()
    );
    let result = run_sweep(&spec)?;
    emit_csv(&result, &spec.output_path)?;
    println!("wrote {}", spec.output_path.display());
    let svg_path = spec.output_path.with_extension("svg");
    emit_plot(&result.rows, &svg_path)?;
    println!("wrote {}", svg_path.display());
    for c in &result.summaries {
        println!(
            "{} {} | mean secrecy {:.4} (stderr {:.4}) | mean non-secrecy {:.4} | draws {}",
            c.sweep_value,
            c.strategy.label(),
            c.mean_secrecy_sum_rate,
            c.stderr_secrecy_sum_rate,
            c.mean_nonsecrecy_sum_rate,
            c.draws_used
        );
    }
    Ok(())
}

fn plot(input: PathBuf, out: PathBuf) -> secran::Result<()> {
    let rows = parse_csv(&input)?;
    emit_plot(&rows, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            seed,
            strategies,
        } => simulate(config, seed, strategies),
        Command::Sweep {
            config,
            out,
            draws,
            seed,
            strategies,
        } => sweep(config, out, draws, seed, strategies),
        Command::Plot { input, out } => plot(input, out),
        Command::Selftest => {
            let ok = secran::selftest::run_all(|s| {
                println!(
                    "[{}] {} - {}",
                    if s.passed { "PASS" } else { "FAIL" },
                    s.name,
                    s.detail
                );
            });
            if ok {
                println!("selftest: all suites passed");
                return ExitCode::SUCCESS;
            }
            eprintln!("selftest: failures detected");
            return ExitCode::FAILURE;
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
