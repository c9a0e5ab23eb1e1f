//! System configuration, topology sampling and channel generation.
//!
//! Topologies place RUs and UEs uniformly in a square service area; each
//! RU-to-UE channel block is i.i.d. Rayleigh scaled by a distance-based
//! path gain `1 / (1 + (d/d0)^alpha)`. Generation is fully deterministic
//! given `(config, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{complex_gaussian, AntennaBlocks, HermitianMatrix};

/// Static system parameters: counts, antenna dimensions, fronthaul
/// capacities (bits/s/Hz), per-RU power limits (linear, relative to unit
/// noise), per-UE noise covariances, rate weights, stream counts and the
/// propagation model.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub num_rus: usize,
    pub num_ues: usize,
    pub ru_antennas: Vec<usize>,
    pub ue_antennas: Vec<usize>,
    pub fronthaul_capacity: Vec<f64>,
    pub power_limit: Vec<f64>,
    pub noise_cov: Vec<HermitianMatrix>,
    pub weights: Vec<f64>,
    pub streams: Vec<usize>,
    pub pathloss_exponent: f64,
    pub reference_distance: f64,
    pub area_side: f64,
}

impl SystemConfig {
    /// Homogeneous setup with the default propagation parameters
    /// (alpha = 3, d0 = 50 m, 500 m square, unit noise, unit weights,
    /// full streams per UE).
    pub fn uniform(
        num_rus: usize,
        num_ues: usize,
        ru_antennas: usize,
        ue_antennas: usize,
        capacity: f64,
        power: f64,
    ) -> Self {
        SystemConfig {
            num_rus,
            num_ues,
            ru_antennas: vec![ru_antennas; num_rus],
            ue_antennas: vec![ue_antennas; num_ues],
            fronthaul_capacity: vec![capacity; num_rus],
            power_limit: vec![power; num_rus],
            noise_cov: vec![HermitianMatrix::identity(ue_antennas); num_ues],
            weights: vec![1.0; num_ues],
            streams: vec![ue_antennas; num_ues],
            pathloss_exponent: 3.0,
            reference_distance: 50.0,
            area_side: 500.0,
        }
    }

    pub fn total_ru_antennas(&self) -> usize {
        self.ru_antennas.iter().sum()
    }

    pub fn antenna_blocks(&self) -> AntennaBlocks {
        AntennaBlocks::new(self.ru_antennas.clone()).expect("validated block sizes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_rus == 0 {
            return Err(Error::config("num_rus", "must be positive"));
        }
        if self.num_ues == 0 {
            return Err(Error::config("num_ues", "must be positive"));
        }
        let per_ru = |name: &str, len: usize| -> Result<()> {
            if len != self.num_rus {
                Err(Error::config(
                    name,
                    format!("expected {} entries (one per RU), got {len}", self.num_rus),
                ))
            } else {
                Ok(())
            }
        };
        let per_ue = |name: &str, len: usize| -> Result<()> {
            if len != self.num_ues {
                Err(Error::config(
                    name,
                    format!("expected {} entries (one per UE), got {len}", self.num_ues),
                ))
            } else {
                Ok(())
            }
        };
        per_ru("ru_antennas", self.ru_antennas.len())?;
        per_ru("fronthaul_capacity", self.fronthaul_capacity.len())?;
        per_ru("power_limit", self.power_limit.len())?;
        per_ue("ue_antennas", self.ue_antennas.len())?;
        per_ue("noise_cov", self.noise_cov.len())?;
        per_ue("weights", self.weights.len())?;
        per_ue("streams", self.streams.len())?;

        if self.ru_antennas.iter().any(|&n| n == 0) {
            return Err(Error::config("ru_antennas", "antenna counts must be positive"));
        }
        if self.ue_antennas.iter().any(|&n| n == 0) {
            return Err(Error::config("ue_antennas", "antenna counts must be positive"));
        }
        if self.fronthaul_capacity.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::config("fronthaul_capacity", "capacities must be > 0"));
        }
        if self.power_limit.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::config("power_limit", "power limits must be > 0"));
        }
        if self.weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::config("weights", "weights must be >= 0"));
        }
        let n_r = self.total_ru_antennas();
        for (k, (&d, &n_u)) in self.streams.iter().zip(&self.ue_antennas).enumerate() {
            if d == 0 {
                return Err(Error::config("streams", "stream counts must be positive"));
            }
            let bound = n_r.min(n_u);
            if d > bound {
                return Err(Error::config(
                    "streams",
                    format!(
                        "UE {k}: streams {d} exceeds min(total RU antennas, UE antennas) = {bound}"
                    ),
                ));
            }
        }
        for (k, cov) in self.noise_cov.iter().enumerate() {
            if cov.dim() != self.ue_antennas[k] {
                return Err(Error::config(
                    "noise_cov",
                    format!(
                        "UE {k}: covariance is {}x{0}, expected {1}x{1}",
                        cov.dim(),
                        self.ue_antennas[k]
                    ),
                ));
            }
            let ev = crate::hermitian::eigenvalues(cov);
            if ev.last().copied().unwrap_or(0.0) <= 0.0 {
                return Err(Error::config("noise_cov", format!("UE {k}: not positive definite")));
            }
        }
        if !(self.pathloss_exponent > 0.0) {
            return Err(Error::config("pathloss_exponent", "must be > 0"));
        }
        if !(self.reference_distance > 0.0) {
            return Err(Error::config("reference_distance", "must be > 0"));
        }
        if !(self.area_side > 0.0) {
            return Err(Error::config("area_side", "must be > 0"));
        }
        Ok(())
    }
}

/// One sampled network state: positions plus the per-(UE, RU) channel
/// blocks, with precomputed stacked forms.
#[derive(Clone, Debug)]
pub struct ChannelRealization {
    pub ru_positions: Vec<(f64, f64)>,
    pub ue_positions: Vec<(f64, f64)>,
    /// `channels[k][i]` is the `ue_antennas[k] x ru_antennas[i]` block from
    /// RU `i` to UE `k`.
    pub channels: Vec<Vec<ComplexMatrix>>,
    pub seed: u64,
    stacked: Vec<ComplexMatrix>,
    eavesdropper: Vec<Option<ComplexMatrix>>,
}

impl ChannelRealization {
    /// Assembles a realization from explicit channel blocks (stacked and
    /// eavesdropper forms are precomputed). Mostly useful for constructing
    /// deterministic instances in tests and examples.
    pub fn from_parts(
        ru_positions: Vec<(f64, f64)>,
        ue_positions: Vec<(f64, f64)>,
        channels: Vec<Vec<ComplexMatrix>>,
        seed: u64,
    ) -> Self {
        Self::build(ru_positions, ue_positions, channels, seed)
    }

    fn build(
        ru_positions: Vec<(f64, f64)>,
        ue_positions: Vec<(f64, f64)>,
        channels: Vec<Vec<ComplexMatrix>>,
        seed: u64,
    ) -> Self {
        let num_ues = channels.len();
        let stacked: Vec<ComplexMatrix> = channels
            .iter()
            .map(|row| ComplexMatrix::hstack(&row.iter().collect::<Vec<_>>()))
            .collect();
        let eavesdropper: Vec<Option<ComplexMatrix>> = (0..num_ues)
            .map(|k| {
                let others: Vec<&ComplexMatrix> = (0..num_ues)
                    .filter(|&l| l != k)
                    .map(|l| &stacked[l])
                    .collect();
                if others.is_empty() {
                    None
                } else {
                    Some(ComplexMatrix::vstack(&others))
                }
            })
            .collect();
        ChannelRealization {
            ru_positions,
            ue_positions,
            channels,
            seed,
            stacked,
            eavesdropper,
        }
    }

    /// Stacked channel from all RUs to UE `k` (`ue_antennas[k] x n_R`).
    pub fn stacked(&self, k: usize) -> &ComplexMatrix {
        &self.stacked[k]
    }

    /// Channel to the cooperating eavesdroppers of UE `k`: the rows of
    /// every other UE's stacked channel in index order. `None` when there
    /// are no other UEs.
    pub fn eavesdropper(&self, k: usize) -> Option<&ComplexMatrix> {
        self.eavesdropper[k].as_ref()
    }

    /// Block-diagonal noise covariance of the eavesdropper stack of UE `k`.
    pub fn eavesdropper_noise(&self, config: &SystemConfig, k: usize) -> Option<HermitianMatrix> {
        let rows: usize = (0..config.num_ues)
            .filter(|&l| l != k)
            .map(|l| config.ue_antennas[l])
            .sum();
        if rows == 0 {
            return None;
        }
        let mut cov = HermitianMatrix::zeros(rows);
        let mut off = 0;
        for l in 0..config.num_ues {
            if l == k {
                continue;
            }
            let nl = config.ue_antennas[l];
            for i in 0..nl {
                for j in 0..nl {
                    cov.set(off + i, off + j, config.noise_cov[l].get(i, j));
                }
            }
            off += nl;
        }
        Some(cov)
    }

    /// Order-independent digest of the realization (used to verify that
    /// paired strategy runs consumed identical draws).
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bits: u64| {
            h ^= bits;
            h = h.wrapping_mul(0x100000001b3);
        };
        for &(x, y) in self.ru_positions.iter().chain(&self.ue_positions) {
            eat(x.to_bits());
            eat(y.to_bits());
        }
        for row in &self.channels {
            for m in row {
                for z in m.data() {
                    eat(z.re.to_bits());
                    eat(z.im.to_bits());
                }
            }
        }
        h
    }
}

/// Uniform i.i.d. positions for all RUs and UEs in the square
/// `[0, area_side]^2`.
pub fn sample_topology(
    config: &SystemConfig,
    rng: &mut impl Rng,
) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut draw = || {
        let x: f64 = rng.random::<f64>() * config.area_side;
        let y: f64 = rng.random::<f64>() * config.area_side;
        (x, y)
    };
    let ru = (0..config.num_rus).map(|_| draw()).collect();
    let ue = (0..config.num_ues).map(|_| draw()).collect();
    (ru, ue)
}

/// Distance-based path gain `1 / (1 + (d/d0)^alpha)`, in (0, 1].
pub fn path_loss(distance: f64, config: &SystemConfig) -> f64 {
    1.0 / (1.0 + (distance / config.reference_distance).powf(config.pathloss_exponent))
}

/// Draws the channel blocks for fixed positions: each entry of the
/// small-scale block is CN(0, 1), scaled by the square root of the path
/// gain of the RU-UE distance.
pub fn sample_channels(
    config: &SystemConfig,
    ru_positions: &[(f64, f64)],
    ue_positions: &[(f64, f64)],
    rng: &mut impl Rng,
    seed: u64,
) -> ChannelRealization {
    let mut channels = Vec::with_capacity(config.num_ues);
    for (k, &(ux, uy)) in ue_positions.iter().enumerate() {
        let mut row = Vec::with_capacity(config.num_rus);
        for (i, &(rx, ry)) in ru_positions.iter().enumerate() {
            let d = ((ux - rx).powi(2) + (uy - ry).powi(2)).sqrt();
            let gain = path_loss(d, config).sqrt();
            let block = ComplexMatrix::from_fn(config.ue_antennas[k], config.ru_antennas[i], |_, _| {
                complex_gaussian(rng) * gain
            });
            row.push(block);
        }
        channels.push(row);
    }
    ChannelRealization::build(ru_positions.to_vec(), ue_positions.to_vec(), channels, seed)
}

/// Topology plus channels from a single seed.
pub fn realize(config: &SystemConfig, seed: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ru, ue) = sample_topology(config, &mut rng);
    sample_channels(config, &ru, &ue, &mut rng, seed)
}

/// Deterministic seed mixer (splitmix64 steps over the parts).
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut state: u64 = 0x9e3779b97f4a7c15;
    for &p in parts {
        state = state.wrapping_add(p).wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        state = z ^ (z >> 31);
    }
    state
}
