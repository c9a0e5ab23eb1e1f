//! Artificial noise can always be folded into the quantization noise:
//! every secrecy rate and every per-RU power stays exactly the same, and
//! the fronthaul usage of every RU subset can only drop. This is why the
//! optimizer never carries a separate artificial-noise variable.
//!
//! Run with: `cargo run --release --example noise_absorption`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secran::cccp::absorb_artificial_noise;
use secran::hermitian::{non_empty_subsets, HermitianMatrix};
use secran::model::{realize, SystemConfig};
use secran::rates::{fronthaul_usage, ru_power, secrecy_rate, DesignVariables};

fn main() -> secran::Result<()> {
    let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
    let blocks = config.antenna_blocks();
    let channels = realize(&config, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let n_r = config.total_ru_antennas();
    let with_artificial_noise = DesignVariables {
        tx_cov: (0..config.num_ues)
            .map(|_| HermitianMatrix::random_psd(n_r, &mut rng))
            .collect(),
        quant_cov: HermitianMatrix::random_psd(n_r, &mut rng).add_scaled_identity(0.1),
        art_noise: config
            .ru_antennas
            .iter()
            .map(|&n| HermitianMatrix::random_psd(n, &mut rng).scale(0.5))
            .collect(),
    };
    let absorbed = absorb_artificial_noise(&with_artificial_noise, &blocks);

    println!("per-UE secrecy rates (identical by construction):");
    for k in 0..config.num_ues {
        let before = secrecy_rate(&with_artificial_noise, &channels, &config, k)?;
        let after = secrecy_rate(&absorbed, &channels, &config, k)?;
        println!("  UE {k}: {before:+.6} -> {after:+.6} (bit-exact: {})", before == after);
    }
    println!("\nper-RU power (identical by construction):");
    for i in 0..config.num_rus {
        let before = ru_power(&with_artificial_noise, &blocks, i);
        let after = ru_power(&absorbed, &blocks, i);
        println!("  RU {i}: {before:.6} -> {after:.6} (bit-exact: {})", before == after);
    }
    println!("\nfronthaul usage per subset (never increases):");
    for subset in non_empty_subsets(config.num_rus) {
        let before = fronthaul_usage(&with_artificial_noise, &blocks, &subset)?;
        let after = fronthaul_usage(&absorbed, &blocks, &subset)?;
        println!("  {subset:?}: {before:.6} -> {after:.6}");
    }
    Ok(())
}
