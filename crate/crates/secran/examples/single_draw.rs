//! Optimize all four strategies on one channel draw and print the full
//! rate reports.
//!
//! Run with: `cargo run --release --example single_draw`

use secran::cccp::{reduce_to_streams, validate_feasibility};
use secran::model::{realize, SystemConfig};
use secran::strategies::{evaluate_all, run_strategy, StrategyFlags};

fn main() -> secran::Result<()> {
    // two RUs, three single-antenna UEs, C = 2 bits/s/Hz, P = 20 dB
    let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 100.0);
    let channels = realize(&config, 42);
    println!(
        "{} RUs, {} UEs, realization digest {:016x}",
        config.num_rus,
        config.num_ues,
        channels.digest()
    );

    for flags in StrategyFlags::all() {
        let outcome = run_strategy(flags, &config, &channels, 7, None)?;
        let precoder_design = reduce_to_streams(&outcome.vars, &config);
        let report = evaluate_all(&precoder_design, &config, &channels)?;
        let audit = validate_feasibility(&precoder_design, &config)?;

        println!("\n== {} ==", flags.label());
        println!(
            "cccp iterations: {} (converged: {})",
            outcome.trace.iterations, outcome.trace.converged
        );
        println!(
            "weighted secrecy sum-rate: {:.4} bits/s/Hz",
            report.weighted_objective
        );
        for k in 0..config.num_ues {
            println!(
                "  UE {k}: secrecy {:.4}  (margin {:+.4}, no-secrecy rate {:.4})",
                report.secrecy_rate[k], report.secrecy_margin[k], report.nonsecrecy_rate[k]
            );
        }
        for (subset, usage) in &report.fronthaul_usage {
            let cap: f64 = subset.iter().map(|&i| config.fronthaul_capacity[i]).sum();
            println!("  fronthaul {subset:?}: {usage:.4} / {cap:.4}");
        }
        println!("  feasible: {}", audit.is_feasible());
    }
    Ok(())
}
