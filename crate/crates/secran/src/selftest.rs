//! Runtime property checks, exposed through the `selftest` CLI
//! subcommand.
//!
//! Each suite samples random instances with a fixed seed and verifies the
//! structural identities the optimizer relies on: surrogate
//! tangency/bounds, artificial-noise absorption, strategy collapses on
//! degenerate topologies, and sweep determinism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cccp::absorb_artificial_noise;
use crate::experiments::{csv_string, run_sweep, ExperimentSpec, SweepVariable};
use crate::hermitian::{non_empty_subsets, HermitianMatrix};
use crate::model::{realize, SystemConfig};
use crate::rates::{
    fronthaul_usage, fronthaul_usage_surrogate, ru_power, secrecy_rate, secrecy_rate_surrogate,
    DesignVariables,
};
use crate::strategies::{run_strategy, StrategyFlags};

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn random_vars(config: &SystemConfig, rng: &mut impl Rng, scale: f64) -> DesignVariables {
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
            .map(|&n| HermitianMatrix::random_psd(n, rng).scale(0.3 * scale))
            .collect(),
    }
}

fn surrogate_suite() -> SuiteResult {
    let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
    let blocks = config.antenna_blocks();
    let channels = realize(&config, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst_tangency = 0.0f64;
    let mut worst_bound = 0.0f64;
    for _ in 0..200 {
        let old = random_vars(&config, &mut rng, 1.0);
        let new = random_vars(&config, &mut rng, 1.1);
        for k in 0..config.num_ues {
            let tangency = (secrecy_rate_surrogate(&old, &old, &channels, &config, k).unwrap()
                - secrecy_rate(&old, &channels, &config, k).unwrap())
            .abs();
            worst_tangency = worst_tangency.max(tangency);
            let bound = secrecy_rate_surrogate(&new, &old, &channels, &config, k).unwrap()
                - secrecy_rate(&new, &channels, &config, k).unwrap();
            worst_bound = worst_bound.max(bound);
        }
        for subset in non_empty_subsets(config.num_rus) {
            let tangency = (fronthaul_usage_surrogate(&old, &old, &blocks, &subset).unwrap()
                - fronthaul_usage(&old, &blocks, &subset).unwrap())
            .abs();
            worst_tangency = worst_tangency.max(tangency);
            let bound = fronthaul_usage(&new, &blocks, &subset).unwrap()
                - fronthaul_usage_surrogate(&new, &old, &blocks, &subset).unwrap();
            worst_bound = worst_bound.max(bound);
        }
    }
    SuiteResult {
        name: "surrogate tangency and one-sided bounds",
        passed: worst_tangency <= 1e-9 && worst_bound <= 1e-9,
        detail: format!("worst tangency {worst_tangency:.2e}, worst bound slack {worst_bound:.2e}"),
    }
}

fn absorption_suite() -> SuiteResult {
    let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
    let blocks = config.antenna_blocks();
    let channels = realize(&config, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut rate_exact = true;
    let mut power_exact = true;
    let mut usage_monotone = true;
    for _ in 0..200 {
        let vars = random_vars(&config, &mut rng, 1.0);
        let absorbed = absorb_artificial_noise(&vars, &blocks);
        for k in 0..config.num_ues {
            rate_exact &= secrecy_rate(&vars, &channels, &config, k).unwrap()
                == secrecy_rate(&absorbed, &channels, &config, k).unwrap();
        }
        for i in 0..config.num_rus {
            power_exact &= ru_power(&vars, &blocks, i) == ru_power(&absorbed, &blocks, i);
        }
        for subset in non_empty_subsets(config.num_rus) {
            usage_monotone &= fronthaul_usage(&absorbed, &blocks, &subset).unwrap()
                <= fronthaul_usage(&vars, &blocks, &subset).unwrap() + 1e-9;
        }
    }
    SuiteResult {
        name: "artificial-noise absorption",
        passed: rate_exact && power_exact && usage_monotone,
        detail: format!(
            "rates exact: {rate_exact}, power exact: {power_exact}, usage monotone: {usage_monotone}"
        ),
    }
}

fn collapse_suite() -> SuiteResult {
    // single RU: multivariate == point-to-point
    let config = SystemConfig::uniform(1, 2, 1, 1, 2.0, 10.0);
    let channels = realize(&config, 10);
    let mv = run_strategy(StrategyFlags::SECURE_MULTIVARIATE, &config, &channels, 3, None);
    let p2p = run_strategy(StrategyFlags::SECURE_P2P, &config, &channels, 3, None);
    let ru_collapse = match (&mv, &p2p) {
        (Ok(a), Ok(b)) => a
            .report
            .secrecy_rate
            .iter()
            .zip(&b.report.secrecy_rate)
            .all(|(x, y)| (x - y).abs() <= 1e-6),
        _ => false,
    };
    // single UE: secure == non-secure
    let solo = SystemConfig::uniform(2, 1, 1, 1, 2.0, 10.0);
    let channels = realize(&solo, 11);
    let sec = run_strategy(StrategyFlags::SECURE_MULTIVARIATE, &solo, &channels, 4, None);
    let non = run_strategy(
        StrategyFlags::NONSECURE_MULTIVARIATE,
        &solo,
        &channels,
        4,
        None,
    );
    let ue_collapse = match (&sec, &non) {
        (Ok(a), Ok(b)) => (a.report.secrecy_rate[0] - b.report.secrecy_rate[0]).abs() <= 1e-6,
        _ => false,
    };
    SuiteResult {
        name: "structural collapses (single RU, single UE)",
        passed: ru_collapse && ue_collapse,
        detail: format!("single-RU collapse: {ru_collapse}, single-UE collapse: {ue_collapse}"),
    }
}

fn determinism_suite() -> SuiteResult {
    let spec = ExperimentSpec {
        base_config: SystemConfig::uniform(1, 2, 1, 1, 2.0, 10.0),
        sweep_variable: SweepVariable::PowerDb,
        sweep_values: vec![0.0, 10.0],
        num_draws: 2,
        master_seed: 33,
        strategies: vec![StrategyFlags::SECURE_MULTIVARIATE],
        output_path: "selftest.csv".into(),
    };
    let a = run_sweep(&spec).map(|r| csv_string(&r));
    let b = run_sweep(&spec).map(|r| csv_string(&r));
    let passed = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    SuiteResult {
        name: "sweep determinism (byte-identical CSV)",
        passed,
        detail: if passed {
            "two runs produced identical bytes".to_string()
        } else {
            "mismatch or failure".to_string()
        },
    }
}

/// Runs every suite; returns true when all pass.
pub fn run_all(mut sink: impl FnMut(&SuiteResult)) -> bool {
    let suites = [
        surrogate_suite(),
        absorption_suite(),
        collapse_suite(),
        determinism_suite(),
    ];
    let mut all = true;
    for s in &suites {
        all &= s.passed;
        sink(s);
    }
    all
}
