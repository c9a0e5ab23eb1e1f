//! Secrecy and no-secrecy sum-rates versus the number of UEs.
//!
//! More UEs means more cooperating eavesdroppers per message, so secrecy
//! rates fall while plain sum-rates keep growing; multivariate
//! compression softens the secrecy loss.
//!
//! Run with: `cargo run --release --example ue_sweep`

use secran::experiments::{emit_csv, emit_plot, run_sweep, ExperimentSpec, SweepVariable};
use secran::model::SystemConfig;
use secran::strategies::StrategyFlags;

fn main() -> secran::Result<()> {
    let spec = ExperimentSpec {
        // three single-antenna RUs, C = 1 bits/s/Hz, P = 20 dB
        base_config: SystemConfig::uniform(3, 2, 1, 1, 1.0, 100.0),
        sweep_variable: SweepVariable::NumUes,
        sweep_values: vec![2.0, 3.0, 4.0, 5.0, 6.0],
        num_draws: 10,
        master_seed: 1,
        strategies: StrategyFlags::all().to_vec(),
        output_path: "ue_sweep.csv".into(),
    };
    let result = run_sweep(&spec)?;
    emit_csv(&result, &spec.output_path)?;
    emit_plot(&result.rows, std::path::Path::new("ue_sweep.svg"))?;

    for c in &result.summaries {
        println!(
            "N_U = {}  {:<24} secrecy {:.4}  no-secrecy {:.4}",
            c.sweep_value,
            c.strategy.label(),
            c.mean_secrecy_sum_rate,
            c.mean_nonsecrecy_sum_rate
        );
    }
    println!("wrote ue_sweep.csv and ue_sweep.svg");
    Ok(())
}
