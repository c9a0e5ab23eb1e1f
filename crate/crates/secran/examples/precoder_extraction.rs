//! From optimized transmit covariances to actual precoding matrices.
//!
//! The optimizer works at the covariance level; the transmit precoder of
//! each UE is recovered afterwards by rank reduction (leading eigenpairs,
//! scaled by square-rooted eigenvalues). The reduced design is dominated
//! by the covariance design, so it inherits feasibility; the objective it
//! gives up is the "rank gap".
//!
//! Run with: `cargo run --release --example precoder_extraction`

use secran::cccp::{rank_reduce, reduce_to_streams, validate_feasibility};
use secran::model::{realize, SystemConfig};
use secran::strategies::{evaluate_all, run_strategy, StrategyFlags};

fn main() -> secran::Result<()> {
    // two 2-antenna RUs, two single-antenna UEs: covariances are 4x4,
    // precoders 4x1
    let config = SystemConfig::uniform(2, 2, 2, 1, 3.0, 100.0);
    let channels = realize(&config, 17);
    let outcome = run_strategy(StrategyFlags::SECURE_MULTIVARIATE, &config, &channels, 4, None)?;

    println!("covariance-level design:");
    println!(
        "  weighted secrecy sum-rate {:.6} bits/s/Hz",
        outcome.report.weighted_objective
    );

    for (k, cov) in outcome.vars.tx_cov.iter().enumerate() {
        let precoder = rank_reduce(cov, config.streams[k]);
        println!(
            "\nUE {k}: covariance {}x{} -> precoder {}x{}",
            cov.dim(),
            cov.dim(),
            precoder.rows(),
            precoder.cols()
        );
        for i in 0..precoder.rows() {
            let z = precoder.get(i, 0);
            println!("    [{:+.4}{:+.4}i]", z.re, z.im);
        }
    }

    let reduced = reduce_to_streams(&outcome.vars, &config);
    let report = evaluate_all(&reduced, &config, &channels)?;
    let audit = validate_feasibility(&reduced, &config)?;
    println!("\nrank-reduced design:");
    println!(
        "  weighted secrecy sum-rate {:.6} bits/s/Hz",
        report.weighted_objective
    );
    println!(
        "  rank gap {:.3e}, still feasible: {}",
        outcome.report.weighted_objective - report.weighted_objective,
        audit.is_feasible()
    );
    Ok(())
}
