//! The four compared design strategies: {secure, non-secure} x
//! {multivariate, point-to-point} fronthaul compression.
//!
//! A secure design optimizes the weighted secrecy sum-rate (the
//! eavesdropper penalty included); a non-secure design optimizes the
//! plain weighted sum-rate and is then *evaluated* under the secrecy
//! metric. Multivariate compression lets the quantization noise be
//! correlated across RUs (full covariance, all subset fronthaul
//! constraints); point-to-point compression forces it block-diagonal,
//! under which the subset constraints collapse to the per-RU ones.

use crate::cccp::{run_cccp_from, CcCpTrace};
use crate::error::{Error, Result};
use crate::hermitian::non_empty_subsets;
use crate::model::{ChannelRealization, SystemConfig};
use crate::rates::{
    fronthaul_usage, nonsecrecy_rate, ru_power, secrecy_rate, weighted_secrecy_objective,
    DesignVariables, RateReport,
};

/// Which of the four designs to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyFlags {
    /// Include the eavesdropper penalty in the optimized objective.
    pub secure: bool,
    /// Allow correlated quantization noise across RUs.
    pub multivariate: bool,
}

impl StrategyFlags {
    pub const SECURE_MULTIVARIATE: StrategyFlags = StrategyFlags {
        secure: true,
        multivariate: true,
    };
    pub const SECURE_P2P: StrategyFlags = StrategyFlags {
        secure: true,
        multivariate: false,
    };
    pub const NONSECURE_MULTIVARIATE: StrategyFlags = StrategyFlags {
        secure: false,
        multivariate: true,
    };
    pub const NONSECURE_P2P: StrategyFlags = StrategyFlags {
        secure: false,
        multivariate: false,
    };

    /// All four strategies, in the fixed reporting order.
    pub fn all() -> [StrategyFlags; 4] {
        [
            Self::SECURE_MULTIVARIATE,
            Self::SECURE_P2P,
            Self::NONSECURE_MULTIVARIATE,
            Self::NONSECURE_P2P,
        ]
    }

    pub fn label(&self) -> &'static str {
        match (self.secure, self.multivariate) {
            (true, true) => "secure-multivariate",
            (true, false) => "secure-p2p",
            (false, true) => "nonsecure-multivariate",
            (false, false) => "nonsecure-p2p",
        }
    }

    pub fn parse(s: &str) -> Result<StrategyFlags> {
        match s.trim() {
            "secure-multivariate" => Ok(Self::SECURE_MULTIVARIATE),
            "secure-p2p" => Ok(Self::SECURE_P2P),
            "nonsecure-multivariate" => Ok(Self::NONSECURE_MULTIVARIATE),
            "nonsecure-p2p" => Ok(Self::NONSECURE_P2P),
            other => Err(Error::config(
                "strategies",
                format!(
                    "unknown strategy `{other}` (expected secure-multivariate, secure-p2p, \
                     nonsecure-multivariate or nonsecure-p2p)"
                ),
            )),
        }
    }
}

impl std::fmt::Display for StrategyFlags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Optimized design plus its evaluation and the optimizer trace.
#[derive(Clone, Debug)]
pub struct StrategyOutcome {
    pub flags: StrategyFlags,
    pub vars: DesignVariables,
    pub report: RateReport,
    pub trace: CcCpTrace,
}

/// Optimizes one strategy on one channel draw. All strategies run on the
/// same realization and the same `init_seed` for paired comparisons;
/// `warm_start` optionally seeds the iteration from a feasible design
/// point (for example another strategy's solution).
pub fn run_strategy(
    flags: StrategyFlags,
    config: &SystemConfig,
    channels: &ChannelRealization,
    init_seed: u64,
    warm_start: Option<&DesignVariables>,
) -> Result<StrategyOutcome> {
    let (vars, trace) = run_cccp_from(config, channels, flags, init_seed, warm_start)?;
    let report = evaluate_all(&vars, config, channels)?;
    Ok(StrategyOutcome {
        flags,
        vars,
        report,
        trace,
    })
}

/// Evaluates every rate/constraint functional of a design point (always
/// under the secrecy metric, regardless of which objective produced the
/// point).
pub fn evaluate_all(
    vars: &DesignVariables,
    config: &SystemConfig,
    channels: &ChannelRealization,
) -> Result<RateReport> {
    let blocks = config.antenna_blocks();
    let mut secrecy_margin = Vec::with_capacity(config.num_ues);
    let mut nonsecrecy = Vec::with_capacity(config.num_ues);
    for k in 0..config.num_ues {
        secrecy_margin.push(secrecy_rate(vars, channels, config, k)?);
        nonsecrecy.push(nonsecrecy_rate(vars, channels, config, k)?);
    }
    let secrecy_clipped: Vec<f64> = secrecy_margin.iter().map(|f| f.max(0.0)).collect();
    let mut usage = Vec::new();
    for subset in non_empty_subsets(config.num_rus) {
        let g = fronthaul_usage(vars, &blocks, &subset)?;
        usage.push((subset, g));
    }
    let per_ru_power = (0..config.num_rus)
        .map(|i| ru_power(vars, &blocks, i))
        .collect();
    let weighted_objective = weighted_secrecy_objective(vars, channels, config, true)?;
    Ok(RateReport {
        secrecy_margin,
        secrecy_rate: secrecy_clipped,
        nonsecrecy_rate: nonsecrecy,
        fronthaul_usage: usage,
        per_ru_power,
        weighted_objective,
    })
}
