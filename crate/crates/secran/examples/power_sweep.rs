//! Average secrecy sum-rate versus transmit power for all four
//! strategies, written to CSV and SVG.
//!
//! Uses a reduced draw count so it finishes in about a minute; raise
//! `num_draws` for smoother curves.
//!
//! Run with: `cargo run --release --example power_sweep`

use secran::experiments::{emit_csv, emit_plot, run_sweep, ExperimentSpec, SweepVariable};
use secran::model::SystemConfig;
use secran::strategies::StrategyFlags;

fn main() -> secran::Result<()> {
    let spec = ExperimentSpec {
        base_config: SystemConfig::uniform(2, 3, 1, 1, 2.0, 100.0),
        sweep_variable: SweepVariable::PowerDb,
        sweep_values: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        num_draws: 10,
        master_seed: 1,
        strategies: StrategyFlags::all().to_vec(),
        output_path: "power_sweep.csv".into(),
    };
    let result = run_sweep(&spec)?;
    emit_csv(&result, &spec.output_path)?;
    emit_plot(&result.rows, std::path::Path::new("power_sweep.svg"))?;

    println!("mean secrecy sum-rate [bits/s/Hz]:");
    for c in &result.summaries {
        println!(
            "  P = {:>4} dB  {:<24} {:.4} (stderr {:.4})",
            c.sweep_value,
            c.strategy.label(),
            c.mean_secrecy_sum_rate,
            c.stderr_secrecy_sum_rate
        );
    }
    println!("wrote power_sweep.csv and power_sweep.svg");
    Ok(())
}
