//! Rate and fronthaul functionals of a design point.
//!
//! A design point holds the per-UE transmit covariances, the quantization
//! noise covariance of the joint fronthaul compressor, and optional per-RU
//! artificial noise covariances. This module evaluates the secrecy rate of
//! each UE (difference of log-det rate increments at the intended UE and
//! at the stack of cooperating eavesdropping UEs), the rate without a
//! secrecy constraint, the aggregate fronthaul rate needed by each subset
//! of RUs, per-RU transmit power, and the first-order concave-convex
//! surrogates of the secrecy rate (a global under-estimator, tight at the
//! expansion point) and of the fronthaul usage (a global over-estimator).

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{
    block_submatrix, log2_det, log2_det_tangent, logdet_rate, AntennaBlocks, HermitianMatrix,
};
use crate::model::{ChannelRealization, SystemConfig};

/// Joint design point: transmit covariances `R_k` (one per UE, over the
/// stacked RU antennas), the quantization-noise covariance of the
/// fronthaul compressor, and per-RU artificial-noise covariances
/// (block-diagonal by construction: one block per RU).
#[derive(Clone, Debug, PartialEq)]
pub struct DesignVariables {
    pub tx_cov: Vec<HermitianMatrix>,
    pub quant_cov: HermitianMatrix,
    pub art_noise: Vec<HermitianMatrix>,
}

impl DesignVariables {
    pub fn zero(config: &SystemConfig) -> Self {
        let n_r = config.total_ru_antennas();
        DesignVariables {
            tx_cov: vec![HermitianMatrix::zeros(n_r); config.num_ues],
            quant_cov: HermitianMatrix::zeros(n_r),
            art_noise: config
                .ru_antennas
                .iter()
                .map(|&n| HermitianMatrix::zeros(n))
                .collect(),
        }
    }

    /// Sum of the per-UE transmit covariances (the precoder Gram matrix).
    pub fn sum_tx_cov(&self) -> HermitianMatrix {
        let n = self.quant_cov.dim();
        let mut acc = HermitianMatrix::zeros(n);
        for r in &self.tx_cov {
            acc = acc.add(r);
        }
        acc
    }

    /// Artificial noise assembled into a full block-diagonal matrix.
    pub fn assembled_art_noise(&self, blocks: &AntennaBlocks) -> HermitianMatrix {
        let n = blocks.total();
        let mut full = HermitianMatrix::zeros(n);
        for (b, phi) in self.art_noise.iter().enumerate() {
            assert_eq!(phi.dim(), blocks.size(b), "artificial noise block size");
            let off = blocks.range(b).start;
            for i in 0..phi.dim() {
                for j in 0..phi.dim() {
                    full.set(off + i, off + j, phi.get(i, j));
                }
            }
        }
        full
    }

    /// Quantization plus artificial noise covariance; computed the same
    /// way everywhere so that absorbing the artificial noise into the
    /// quantization noise leaves downstream values bit-identical.
    pub fn total_injected_noise(&self, blocks: &AntennaBlocks) -> HermitianMatrix {
        self.quant_cov.add(&self.assembled_art_noise(blocks))
    }

    /// Verifies PSD of every block within `tol` (relative to the largest
    /// eigenvalue magnitude).
    pub fn validate_psd(&self, tol: f64) -> Result<()> {
        let check = |m: &HermitianMatrix, what: &str| -> Result<()> {
            let ev = crate::hermitian::eigenvalues(m);
            let min = ev.last().copied().unwrap_or(0.0);
            let max = ev.first().copied().unwrap_or(0.0).abs().max(1.0);
            if min < -tol * max {
                return Err(Error::NotPositiveDefinite(format!(
                    "{what}: min eigenvalue {min:.3e}"
                )));
            }
            Ok(())
        };
        for (k, r) in self.tx_cov.iter().enumerate() {
            check(r, &format!("transmit covariance of UE {k}"))?;
        }
        check(&self.quant_cov, "quantization noise covariance")?;
        for (i, phi) in self.art_noise.iter().enumerate() {
            check(phi, &format!("artificial noise of RU {i}"))?;
        }
        Ok(())
    }

    pub fn distance(&self, other: &DesignVariables) -> f64 {
        let mut acc = 0.0;
        for (a, b) in self.tx_cov.iter().zip(&other.tx_cov) {
            acc += a.sub(b).frobenius_norm().powi(2);
        }
        acc += self.quant_cov.sub(&other.quant_cov).frobenius_norm().powi(2);
        for (a, b) in self.art_noise.iter().zip(&other.art_noise) {
            acc += a.sub(b).frobenius_norm().powi(2);
        }
        acc.sqrt()
    }
}

/// Everything a single design evaluates to.
#[derive(Clone, Debug)]
pub struct RateReport {
    /// Raw secrecy rate of each UE (may be negative).
    pub secrecy_margin: Vec<f64>,
    /// Achievable secrecy rate `max(0, margin)`.
    pub secrecy_rate: Vec<f64>,
    /// Rate achievable without the secrecy constraint.
    pub nonsecrecy_rate: Vec<f64>,
    /// Fronthaul usage per non-empty RU subset, keyed by the subset.
    pub fronthaul_usage: Vec<(Vec<usize>, f64)>,
    /// Transmit power per RU.
    pub per_ru_power: Vec<f64>,
    /// Weighted clipped secrecy sum-rate.
    pub weighted_objective: f64,
}

impl RateReport {
    pub fn secrecy_sum_rate(&self) -> f64 {
        self.secrecy_rate.iter().sum()
    }

    pub fn nonsecrecy_sum_rate(&self) -> f64 {
        self.nonsecrecy_rate.iter().sum()
    }
}

// ---------------------------------------------------------------------------
// Received covariances
// ---------------------------------------------------------------------------

/// Received covariance at an arbitrary receiver: channel-mapped sum of the
/// selected transmit covariances and injected noise, plus thermal noise.
fn received_noise(
    vars: &DesignVariables,
    channel: &ComplexMatrix,
    thermal: &HermitianMatrix,
    blocks: &AntennaBlocks,
    exclude: Option<usize>,
) -> HermitianMatrix {
    let n_r = blocks.total();
    let mut inside = vars.total_injected_noise(blocks);
    for (l, r) in vars.tx_cov.iter().enumerate() {
        if Some(l) == exclude {
            continue;
        }
        assert_eq!(r.dim(), n_r);
        inside = inside.add(r);
    }
    channel.congruence(&inside).add(thermal)
}

/// Interference-plus-noise covariance observed by UE `k`: all transmit
/// covariances except `exclude`, plus channelized injected noise, plus the
/// UE's thermal noise. Positive definite whenever the thermal noise is.
pub fn effective_noise_cov(
    vars: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    k: usize,
    exclude: Option<usize>,
) -> HermitianMatrix {
    received_noise(
        vars,
        channels.stacked(k),
        &config.noise_cov[k],
        &config.antenna_blocks(),
        exclude,
    )
}

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

/// Secrecy rate of UE `k` (bits/s/Hz, may be negative): the rate increment
/// at the intended UE minus the rate increment at the stack of all other
/// (cooperating) UEs. With a single UE the second term is vacuous.
pub fn secrecy_rate(
    vars: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    k: usize,
) -> Result<f64> {
    let own = nonsecrecy_rate(vars, channels, config, k)?;
    let Some(eav) = channels.eavesdropper(k) else {
        return Ok(own);
    };
    let blocks = config.antenna_blocks();
    let thermal = channels
        .eavesdropper_noise(config, k)
        .expect("eavesdropper stack is non-empty");
    let signal = eav.congruence(&vars.tx_cov[k]);
    let noise = received_noise(vars, eav, &thermal, &blocks, Some(k));
    let leak = logdet_rate(&signal, &noise)?;
    Ok(own - leak)
}

/// Rate of UE `k` without a secrecy constraint (bits/s/Hz, nonnegative).
pub fn nonsecrecy_rate(
    vars: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    k: usize,
) -> Result<f64> {
    let signal = channels.stacked(k).congruence(&vars.tx_cov[k]);
    let noise = effective_noise_cov(vars, channels, config, k, Some(k));
    logdet_rate(&signal, &noise)
}

/// Aggregate fronthaul rate needed by the RUs in `subset` to recover their
/// quantized signals: sum of per-RU log-dets of the compressor input
/// covariance minus the log-det of the subset's quantization noise block.
/// Artificial noise does not enter (it is injected after decompression).
pub fn fronthaul_usage(
    vars: &DesignVariables,
    blocks: &AntennaBlocks,
    subset: &[usize],
) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let signal_plus_noise = vars.sum_tx_cov().add(&vars.quant_cov);
    let mut acc = 0.0;
    for &i in subset {
        acc += log2_det(&block_submatrix(&signal_plus_noise, blocks, &[i])?)?;
    }
    acc -= log2_det(&block_submatrix(&vars.quant_cov, blocks, subset)?)?;
    Ok(acc)
}

/// Transmit power of RU `i`: trace of its diagonal block of the sum of all
/// transmit covariances plus the injected noise.
pub fn ru_power(vars: &DesignVariables, blocks: &AntennaBlocks, i: usize) -> f64 {
    let total = vars.sum_tx_cov().add(&vars.total_injected_noise(blocks));
    blocks
        .range(i)
        .map(|a| total.get(a, a).re)
        .sum()
}

/// Weighted secrecy sum-rate; `clipped` selects between the achievable
/// objective (margins clipped at zero) and its smooth surrogate.
pub fn weighted_secrecy_objective(
    vars: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    clipped: bool,
) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..config.num_ues {
        let f = secrecy_rate(vars, channels, config, k)?;
        acc += config.weights[k] * if clipped { f.max(0.0) } else { f };
    }
    Ok(acc)
}

/// The smooth objective the optimizer tracks: weighted unclipped secrecy
/// sum-rate for secure designs, weighted sum of rates without secrecy
/// constraints otherwise.
pub fn smooth_objective(
    vars: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    secure: bool,
) -> Result<f64> {
    if secure {
        weighted_secrecy_objective(vars, channels, config, false)
    } else {
        let mut acc = 0.0;
        for k in 0..config.num_ues {
            acc += config.weights[k] * nonsecrecy_rate(vars, channels, config, k)?;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Concave-convex surrogates
// ---------------------------------------------------------------------------

/// Covariance pieces of UE `k`'s receiver (and of its eavesdropper stack)
/// needed by the surrogates.
struct ReceiverCovs {
    total: HermitianMatrix,
    interference: HermitianMatrix,
}

fn receiver_covs(
    vars: &DesignVariables,
    channel: &ComplexMatrix,
    thermal: &HermitianMatrix,
    blocks: &AntennaBlocks,
    k: usize,
) -> ReceiverCovs {
    let interference = received_noise(vars, channel, thermal, blocks, Some(k));
    let total = interference.add(&channel.congruence(&vars.tx_cov[k]));
    ReceiverCovs {
        total,
        interference,
    }
}

/// First-order under-estimator of the secrecy rate of UE `k`, expanded at
/// `old`: the concave terms are kept exact, the convex terms are replaced
/// by their log-det tangents at `old`. Tight at `new == old`; requires the
/// `old` covariances to be strictly feasible (positive definite log-det
/// arguments).
pub fn secrecy_rate_surrogate(
    new: &DesignVariables,
    old: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    k: usize,
) -> Result<f64> {
    let own = nonsecrecy_rate_surrogate(new, old, channels, config, k)?;
    let Some(eav) = channels.eavesdropper(k) else {
        return Ok(own);
    };
    let blocks = config.antenna_blocks();
    let thermal = channels
        .eavesdropper_noise(config, k)
        .expect("eavesdropper stack is non-empty");
    let new_covs = receiver_covs(new, eav, &thermal, &blocks, k);
    let old_covs = receiver_covs(old, eav, &thermal, &blocks, k);
    // leak surrogate: majorize log2 det(total), keep -log2 det(interference)
    let leak_upper =
        log2_det_tangent(&new_covs.total, &old_covs.total)? - log2_det(&new_covs.interference)?;
    Ok(own - leak_upper)
}

/// First-order under-estimator of the rate of UE `k` without a secrecy
/// constraint, expanded at `old` (the secure surrogate minus its
/// eavesdropper terms).
pub fn nonsecrecy_rate_surrogate(
    new: &DesignVariables,
    old: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    k: usize,
) -> Result<f64> {
    let blocks = config.antenna_blocks();
    let channel = channels.stacked(k);
    let new_covs = receiver_covs(new, channel, &config.noise_cov[k], &blocks, k);
    let old_covs = receiver_covs(old, channel, &config.noise_cov[k], &blocks, k);
    Ok(log2_det(&new_covs.total)? - log2_det_tangent(&new_covs.interference, &old_covs.interference)?)
}

/// Weighted sum of rate surrogates; the objective of each convex
/// subproblem.
pub fn weighted_surrogate_objective(
    new: &DesignVariables,
    old: &DesignVariables,
    channels: &ChannelRealization,
    config: &SystemConfig,
    secure: bool,
) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..config.num_ues {
        let s = if secure {
            secrecy_rate_surrogate(new, old, channels, config, k)?
        } else {
            nonsecrecy_rate_surrogate(new, old, channels, config, k)?
        };
        acc += config.weights[k] * s;
    }
    Ok(acc)
}

/// First-order over-estimator of the fronthaul usage of `subset`, expanded
/// at `old`: per-RU concave log-dets are replaced by tangents, the convex
/// `-log2 det` of the subset noise block is kept exact. Tight at
/// `new == old` and convex in `new`.
pub fn fronthaul_usage_surrogate(
    new: &DesignVariables,
    old: &DesignVariables,
    blocks: &AntennaBlocks,
    subset: &[usize],
) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let new_total = new.sum_tx_cov().add(&new.quant_cov);
    let old_total = old.sum_tx_cov().add(&old.quant_cov);
    let mut acc = 0.0;
    for &i in subset {
        acc += log2_det_tangent(
            &block_submatrix(&new_total, blocks, &[i])?,
            &block_submatrix(&old_total, blocks, &[i])?,
        )?;
    }
    acc -= log2_det(&block_submatrix(&new.quant_cov, blocks, subset)?)?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::non_empty_subsets;
    use crate::model::realize;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar_config(num_ues: usize) -> SystemConfig {
        SystemConfig::uniform(1, num_ues, 1, 1, 2.0, 10.0)
    }

    /// Hand-built scalar realization with prescribed channel amplitudes.
    fn scalar_realization(config: &SystemConfig, gains: &[f64]) -> ChannelRealization {
        let channels: Vec<Vec<ComplexMatrix>> = gains
            .iter()
            .map(|&g| {
                vec![ComplexMatrix::from_rows(1, 1, vec![Complex64::new(g, 0.0)]).unwrap()]
            })
            .collect();
        ChannelRealization::from_parts(
            vec![(0.0, 0.0)],
            vec![(0.0, 0.0); config.num_ues],
            channels,
            1,
        )
    }

    fn scalar_vars(p: &[f64], omega: f64) -> DesignVariables {
        DesignVariables {
            tx_cov: p.iter().map(|&x| HermitianMatrix::from_diag(&[x])).collect(),
            quant_cov: HermitianMatrix::from_diag(&[omega]),
            art_noise: vec![HermitianMatrix::zeros(1)],
        }
    }

    fn random_vars(config: &SystemConfig, rng: &mut impl Rng, scale: f64) -> DesignVariables {
        let n_r = config.total_ru_antennas();
        DesignVariables {
            tx_cov: (0..config.num_ues)
                .map(|_| HermitianMatrix::random_psd(n_r, rng).scale(scale))
                .collect(),
            quant_cov: HermitianMatrix::random_psd(n_r, rng)
                .scale(scale)
                .add_scaled_identity(0.05 * scale.max(0.1)),
            art_noise: config
                .ru_antennas
                .iter()
                .map(|&n| HermitianMatrix::random_psd(n, rng).scale(0.3 * scale))
                .collect(),
        }
    }

    #[test]
    fn effective_noise_reduces_to_thermal() {
        let config = SystemConfig::uniform(2, 2, 2, 2, 2.0, 10.0);
        let real = realize(&config, 9);
        let vars = DesignVariables::zero(&config);
        let cov = effective_noise_cov(&vars, &real, &config, 0, None);
        assert_eq!(cov, config.noise_cov[0]);
    }

    #[test]
    fn effective_noise_scalar_arithmetic() {
        let config = scalar_config(2);
        let real = scalar_realization(&config, &[1.0, 1.0]);
        let vars = scalar_vars(&[0.7, 1.3], 0.4);
        let cov = effective_noise_cov(&vars, &real, &config, 0, Some(0));
        // p2 + omega + 1
        assert!((cov.get(0, 0).re - (1.3 + 0.4 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn artificial_noise_absorption_is_bit_exact_for_rates() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let real = realize(&config, 31);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vars = random_vars(&config, &mut rng, 1.0);
        let absorbed = DesignVariables {
            tx_cov: vars.tx_cov.clone(),
            quant_cov: vars.total_injected_noise(&blocks),
            art_noise: config
                .ru_antennas
                .iter()
                .map(|&n| HermitianMatrix::zeros(n))
                .collect(),
        };
        for k in 0..config.num_ues {
            let before = secrecy_rate(&vars, &real, &config, k).unwrap();
            let after = secrecy_rate(&absorbed, &real, &config, k).unwrap();
            assert_eq!(before, after);
        }
        for i in 0..config.num_rus {
            assert_eq!(ru_power(&vars, &blocks, i), ru_power(&absorbed, &blocks, i));
        }
    }

    #[test]
    fn secrecy_rate_zero_for_statistically_identical_eavesdropper() {
        let config = scalar_config(2);
        let real = scalar_realization(&config, &[1.0, 1.0]);
        let vars = scalar_vars(&[0.9, 0.2], 0.6);
        assert_eq!(secrecy_rate(&vars, &real, &config, 0).unwrap(), 0.0);
    }

    #[test]
    fn secrecy_rate_scalar_worked_value() {
        let config = scalar_config(2);
        let real = scalar_realization(&config, &[1.0, 0.0]);
        let vars = scalar_vars(&[1.0, 0.0], 1.0);
        let f = secrecy_rate(&vars, &real, &config, 0).unwrap();
        assert!((f - 1.5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn no_signal_no_rate() {
        let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
        let real = realize(&config, 17);
        let mut vars = DesignVariables::zero(&config);
        vars.quant_cov = HermitianMatrix::identity(config.total_ru_antennas());
        for k in 0..config.num_ues {
            assert!(secrecy_rate(&vars, &real, &config, k).unwrap().abs() < 1e-12);
            assert!(nonsecrecy_rate(&vars, &real, &config, k).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn nonsecrecy_equals_secrecy_plus_leak() {
        let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
        let real = realize(&config, 23);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let vars = random_vars(&config, &mut rng, 0.8);
            for k in 0..config.num_ues {
                let own = nonsecrecy_rate(&vars, &real, &config, k).unwrap();
                let f = secrecy_rate(&vars, &real, &config, k).unwrap();
                let eav = real.eavesdropper(k).unwrap();
                let thermal = real.eavesdropper_noise(&config, k).unwrap();
                let leak = logdet_rate(
                    &eav.congruence(&vars.tx_cov[k]),
                    &received_noise(&vars, eav, &thermal, &blocks, Some(k)),
                )
                .unwrap();
                assert!((own - (f + leak)).abs() < 1e-9);
                assert!(own >= f - 1e-12, "leak term must be nonnegative");
            }
        }
    }

    #[test]
    fn fronthaul_scalar_value_and_zero_signal() {
        let config = scalar_config(2);
        let blocks = config.antenna_blocks();
        let vars = scalar_vars(&[0.5, 0.5], 1.0);
        // log2((0.5 + 0.5 + 1) / 1) = 1
        assert!((fronthaul_usage(&vars, &blocks, &[0]).unwrap() - 1.0).abs() < 1e-12);

        let quiet = scalar_vars(&[0.0, 0.0], 1.0);
        assert!(fronthaul_usage(&quiet, &blocks, &[0]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fronthaul_zero_signal_block_diagonal_all_subsets() {
        let config = SystemConfig::uniform(3, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let mut vars = DesignVariables::zero(&config);
        vars.quant_cov = HermitianMatrix::identity(config.total_ru_antennas()).scale(0.7);
        for subset in non_empty_subsets(config.num_rus) {
            assert!(fronthaul_usage(&vars, &blocks, &subset).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn fronthaul_additive_over_blocks_when_uncorrelated() {
        let config = SystemConfig::uniform(3, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let mut vars = random_vars(&config, &mut rng, 1.0);
            // block-diagonal quantization noise
            let mut bd = HermitianMatrix::zeros(config.total_ru_antennas());
            for b in 0..config.num_rus {
                let blk = HermitianMatrix::random_psd(blocks.size(b), &mut rng)
                    .add_scaled_identity(0.1);
                let idx: Vec<usize> = blocks.range(b).collect();
                bd = bd.add(&HermitianMatrix::embed(&blk, bd.dim(), &idx));
            }
            vars.quant_cov = bd;
            for subset in non_empty_subsets(config.num_rus) {
                let joint = fronthaul_usage(&vars, &blocks, &subset).unwrap();
                let split: f64 = subset
                    .iter()
                    .map(|&i| fronthaul_usage(&vars, &blocks, &[i]).unwrap())
                    .sum();
                assert!((joint - split).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fronthaul_nonnegative_and_monotone_in_noise() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let vars = random_vars(&config, &mut rng, 1.0);
            for subset in non_empty_subsets(config.num_rus) {
                let g = fronthaul_usage(&vars, &blocks, &subset).unwrap();
                assert!(g >= -1e-9);
                // absorbing block-diagonal noise into the quantization noise
                // cannot increase usage
                let absorbed = DesignVariables {
                    tx_cov: vars.tx_cov.clone(),
                    quant_cov: vars.total_injected_noise(&blocks),
                    art_noise: config
                        .ru_antennas
                        .iter()
                        .map(|&n| HermitianMatrix::zeros(n))
                        .collect(),
                };
                let g2 = fronthaul_usage(&absorbed, &blocks, &subset).unwrap();
                assert!(g2 <= g + 1e-9);
            }
        }
    }

    #[test]
    fn fronthaul_rejects_singular_noise() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let vars = DesignVariables::zero(&config);
        assert!(matches!(
            fronthaul_usage(&vars, &blocks, &[0]),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn power_values() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let zero = DesignVariables::zero(&config);
        assert_eq!(ru_power(&zero, &blocks, 0), 0.0);

        let mut vars = DesignVariables::zero(&config);
        vars.quant_cov = HermitianMatrix::identity(4);
        assert_eq!(ru_power(&vars, &blocks, 0), 2.0);
        assert_eq!(ru_power(&vars, &blocks, 1), 2.0);

        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..50 {
            let vars = random_vars(&config, &mut rng, 1.0);
            let total = vars.sum_tx_cov().add(&vars.total_injected_noise(&blocks));
            for i in 0..config.num_rus {
                let via_block = block_submatrix(&total, &blocks, &[i]).unwrap().trace();
                assert!((ru_power(&vars, &blocks, i) - via_block).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weighted_objective_cases() {
        let config = scalar_config(2);
        let real = scalar_realization(&config, &[1.0, 0.0]);
        let zero = DesignVariables::zero(&config);
        assert_eq!(
            weighted_secrecy_objective(&zero, &real, &config, true).unwrap(),
            0.0
        );

        // single-UE weighted case: w = 2, f = log2(1.5)
        let mut cfg1 = scalar_config(1);
        cfg1.weights = vec![2.0];
        let real1 = scalar_realization(&cfg1, &[1.0]);
        let vars1 = DesignVariables {
            tx_cov: vec![HermitianMatrix::from_diag(&[1.0])],
            quant_cov: HermitianMatrix::from_diag(&[1.0]),
            art_noise: vec![HermitianMatrix::zeros(1)],
        };
        let obj = weighted_secrecy_objective(&vars1, &real1, &cfg1, true).unwrap();
        assert!((obj - 2.0 * 1.5f64.log2()).abs() < 1e-12);
        assert!((obj - 1.17).abs() < 5e-3);

        // clipped dominates unclipped
        let config2 = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
        let real2 = realize(&config2, 53);
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..50 {
            let vars = random_vars(&config2, &mut rng, 1.0);
            let clipped = weighted_secrecy_objective(&vars, &real2, &config2, true).unwrap();
            let smooth = weighted_secrecy_objective(&vars, &real2, &config2, false).unwrap();
            assert!(clipped >= smooth - 1e-12);
        }
    }

    #[test]
    fn rate_surrogate_tangent_at_expansion_point() {
        let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
        let real = realize(&config, 61);
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..100 {
            let old = random_vars(&config, &mut rng, 1.0);
            for k in 0..config.num_ues {
                let surrogate = secrecy_rate_surrogate(&old, &old, &real, &config, k).unwrap();
                let exact = secrecy_rate(&old, &real, &config, k).unwrap();
                assert!((surrogate - exact).abs() <= 1e-9, "gap {}", surrogate - exact);
            }
        }
    }

    #[test]
    fn rate_surrogate_minorizes() {
        let config = SystemConfig::uniform(2, 3, 1, 1, 2.0, 10.0);
        let real = realize(&config, 71);
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..1000 {
            let old = random_vars(&config, &mut rng, 1.0);
            let new = random_vars(&config, &mut rng, 1.2);
            for k in 0..config.num_ues {
                let surrogate = secrecy_rate_surrogate(&new, &old, &real, &config, k).unwrap();
                let exact = secrecy_rate(&new, &real, &config, k).unwrap();
                assert!(surrogate <= exact + 1e-9);
            }
        }
    }

    #[test]
    fn rate_surrogate_scalar_expansion() {
        let config = scalar_config(2);
        let real = scalar_realization(&config, &[1.3, 0.4]);
        let old = scalar_vars(&[0.8, 0.5], 0.9);
        let new = scalar_vars(&[1.1, 0.3], 0.7);
        let (h1, h2) = (1.3f64 * 1.3, 0.4f64 * 0.4);
        let ln2 = std::f64::consts::LN_2;
        let tangent = |x: f64, y: f64| y.log2() + (x - y) / (y * ln2);
        // UE 0: own terms on h1, leak terms on h2
        let own_total_new = h1 * (1.1 + 0.3 + 0.7) + 1.0;
        let own_intf_new = h1 * (0.3 + 0.7) + 1.0;
        let own_intf_old = h1 * (0.5 + 0.9) + 1.0;
        let leak_total_new = h2 * (1.1 + 0.3 + 0.7) + 1.0;
        let leak_total_old = h2 * (0.8 + 0.5 + 0.9) + 1.0;
        let leak_intf_new = h2 * (0.3 + 0.7) + 1.0;
        let expected = own_total_new.log2() - tangent(own_intf_new, own_intf_old)
            - (tangent(leak_total_new, leak_total_old) - leak_intf_new.log2());
        let got = secrecy_rate_surrogate(&new, &old, &real, &config, 0).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}, expected {expected}");
    }

    #[test]
    fn fronthaul_surrogate_tangent_and_majorization() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..1000 {
            let old = random_vars(&config, &mut rng, 1.0);
            let new = random_vars(&config, &mut rng, 0.9);
            for subset in non_empty_subsets(config.num_rus) {
                let at_old = fronthaul_usage_surrogate(&old, &old, &blocks, &subset).unwrap();
                let exact_old = fronthaul_usage(&old, &blocks, &subset).unwrap();
                assert!((at_old - exact_old).abs() <= 1e-9);

                let upper = fronthaul_usage_surrogate(&new, &old, &blocks, &subset).unwrap();
                let exact_new = fronthaul_usage(&new, &blocks, &subset).unwrap();
                assert!(upper >= exact_new - 1e-9);
            }
        }
    }

    #[test]
    fn fronthaul_surrogate_scalar_expansion() {
        let config = scalar_config(2);
        let blocks = config.antenna_blocks();
        let old = scalar_vars(&[0.5, 0.7], 0.8);
        let new = scalar_vars(&[0.9, 0.1], 0.5);
        let ln2 = std::f64::consts::LN_2;
        let tangent = |x: f64, y: f64| y.log2() + (x - y) / (y * ln2);
        let expected = tangent(0.9 + 0.1 + 0.5, 0.5 + 0.7 + 0.8) - 0.5f64.log2();
        let got = fronthaul_usage_surrogate(&new, &old, &blocks, &[0]).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn single_ue_secrecy_equals_plain_rate() {
        let config = scalar_config(1);
        let real = scalar_realization(&config, &[1.0]);
        let vars = scalar_vars(&[1.0], 1.0);
        let f = secrecy_rate(&vars, &real, &config, 0).unwrap();
        let r = nonsecrecy_rate(&vars, &real, &config, 0).unwrap();
        assert_eq!(f, r);
        assert!((r - 1.5f64.log2()).abs() < 1e-12);
    }
}
