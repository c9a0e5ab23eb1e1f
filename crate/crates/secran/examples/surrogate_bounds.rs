//! Numerical demonstration of the convex-concave surrogate properties:
//! the rate surrogate under-estimates the true secrecy rate and touches
//! it at the expansion point; the fronthaul surrogate over-estimates the
//! true usage and touches it at the expansion point. These two one-sided
//! bounds are what make every optimizer iterate feasible and the
//! objective sequence monotone.
//!
//! Run with: `cargo run --release --example surrogate_bounds`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secran::hermitian::HermitianMatrix;
use secran::model::{realize, SystemConfig};
use secran::rates::{
    fronthaul_usage, fronthaul_usage_surrogate, secrecy_rate, secrecy_rate_surrogate,
    DesignVariables,
};

fn random_design(config: &SystemConfig, rng: &mut ChaCha8Rng, scale: f64) -> DesignVariables {
    let n_r = config.total_ru_antennas();
    DesignVariables {
        tx_cov: (0..config.num_ues)
            .map(|_| HermitianMatrix::random_psd(n_r, rng).scale(scale))
            .collect(),
        quant_cov: HermitianMatrix::random_psd(n_r, rng)
            .scale(scale)
            .add_scaled_identity(0.05),
        art_noise: config
            .ru_antennas
            .iter()
            .map(|&n| HermitianMatrix::zeros(n))
            .collect(),
    }
}

fn main() -> secran::Result<()> {
    let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
    let blocks = config.antenna_blocks();
    let channels = realize(&config, 11);
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let expansion = random_design(&config, &mut rng, 1.0);

    // tangency at the expansion point
    let exact = secrecy_rate(&expansion, &channels, &config, 0)?;
    let at_anchor = secrecy_rate_surrogate(&expansion, &expansion, &channels, &config, 0)?;
    println!("secrecy rate of UE 0 at the expansion point: {exact:.9}");
    println!("surrogate evaluated there:                   {at_anchor:.9}");

    // one-sided bounds at random probe points
    println!("\nprobe points (surrogate <= rate, usage surrogate >= usage):");
    let mut worst_rate_gap = f64::INFINITY;
    let mut worst_usage_gap = f64::INFINITY;
    for i in 0..8 {
        let probe = random_design(&config, &mut rng, 0.8 + 0.2 * i as f64);
        let rate = secrecy_rate(&probe, &channels, &config, 0)?;
        let lower = secrecy_rate_surrogate(&probe, &expansion, &channels, &config, 0)?;
        let usage = fronthaul_usage(&probe, &blocks, &[0, 1])?;
        let upper = fronthaul_usage_surrogate(&probe, &expansion, &blocks, &[0, 1])?;
        worst_rate_gap = worst_rate_gap.min(rate - lower);
        worst_usage_gap = worst_usage_gap.min(upper - usage);
        println!(
            "  probe {i}: rate {rate:+.4} >= surrogate {lower:+.4} | usage {usage:.4} <= surrogate {upper:.4}"
        );
    }
    println!(
        "\nsmallest observed slack: rate {worst_rate_gap:.3e}, usage {worst_usage_gap:.3e} (both nonnegative)"
    );
    Ok(())
}
