//! Concave-convex procedure for the joint precoding/compression design.
//!
//! The weighted secrecy sum-rate maximization is a difference-of-convex
//! program in the transmit covariances and the quantization-noise
//! covariance. Each iteration replaces the troublesome terms by their
//! log-det tangents at the current point (the surrogates in
//! [`crate::rates`]) and solves the resulting convex subproblem with the
//! barrier method from [`crate::subproblem`]. Because the fronthaul
//! surrogate over-estimates the true usage, every iterate is feasible for
//! the original constraints, and tangency makes the objective sequence
//! monotone.
//!
//! Artificial RU noise never helps: absorbing it into the quantization
//! noise preserves all rates and powers and can only relax the fronthaul
//! constraints, so the optimizer works with the artificial noise pinned
//! at zero and [`absorb_artificial_noise`] is provided for preprocessing
//! externally supplied design points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::hermitian::{
    leading_eigenpairs, non_empty_subsets, AntennaBlocks, Cholesky, HermitianMatrix, LN_2,
};
use crate::model::{ChannelRealization, SystemConfig};
use crate::rates::{
    self, fronthaul_usage, ru_power, smooth_objective, weighted_surrogate_objective,
    DesignVariables,
};
use crate::strategies::StrategyFlags;
use crate::subproblem::{
    solve_barrier, BarrierOptions, CongruenceMap, LogDetTerm, Problem, ScalarFn, VarLayout,
    VarPattern,
};

/// Additive identity floor applied to the quantization-noise covariance
/// between iterations; keeps every tangent anchor strictly positive
/// definite.
pub const EPS_FLOOR: f64 = 1e-9;

/// Relative objective improvement below which the outer loop stops.
pub const CONVERGENCE_RTOL: f64 = 1e-4;

/// Outer iteration cap.
pub const MAX_ITERATIONS: usize = 100;

/// Feasibility slack demanded from the initializer (fraction of each
/// constraint budget).
const INIT_SLACK: f64 = 0.05;

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// Outcome of one convex subproblem solve.
#[derive(Clone, Debug)]
pub struct SubproblemSolution {
    /// Updated design point (artificial noise identically zero).
    pub new_vars: DesignVariables,
    /// Exact weighted surrogate objective at `new_vars`.
    pub objective: f64,
    pub inner_iterations: usize,
    /// Newton decrement of the final barrier centering.
    pub stationarity_residual: f64,
    /// Positive part of the worst surrogate-constraint violation (zero
    /// for interior points).
    pub feasibility_residual: f64,
    /// The inner solver hit a numerical floor before reaching its
    /// stationarity target; the returned point is still feasible.
    pub stalled: bool,
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    /// Smooth objective (weighted unclipped secrecy sum-rate, or its
    /// non-secure analogue).
    pub objective: f64,
    /// Worst exact constraint violation at the iterate.
    pub max_violation: f64,
    /// Frobenius distance moved by this iteration.
    pub step_norm: f64,
}

/// Iteration history of one optimizer run. The first entry describes the
/// initialization; each subsequent entry one subproblem update.
#[derive(Clone, Debug)]
pub struct CcCpTrace {
    pub entries: Vec<TraceEntry>,
    pub iterations: usize,
    pub converged: bool,
    pub stalled: bool,
}

impl CcCpTrace {
    pub fn final_objective(&self) -> f64 {
        self.entries.last().map(|e| e.objective).unwrap_or(0.0)
    }
}

/// Exact slack bookkeeping for every constraint of the original problem.
#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    /// `(subset, usage, capacity, slack)` per non-empty RU subset.
    pub fronthaul: Vec<(Vec<usize>, f64, f64, f64)>,
    /// `(usage, limit, slack)` per RU.
    pub power: Vec<(f64, f64, f64)>,
    /// Smallest eigenvalue of each variable block (transmit covariances,
    /// then quantization noise, then artificial noise blocks).
    pub min_eigenvalues: Vec<f64>,
    /// Human-readable description of every violation beyond tolerance.
    pub violations: Vec<String>,
    /// Largest violation magnitude (zero when feasible).
    pub max_violation: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

fn feasible_point(config: &SystemConfig, units: Vec<HermitianMatrix>) -> Result<DesignVariables> {
    let blocks = config.antenna_blocks();
    let omega = 0.45
        * config
            .power_limit
            .iter()
            .zip(&config.ru_antennas)
            .map(|(&p, &n)| p / n as f64)
            .fold(f64::INFINITY, f64::min);
    let n_r = config.total_ru_antennas();
    let subsets = non_empty_subsets(config.num_rus);

    let build = |rho: f64| -> DesignVariables {
        DesignVariables {
            tx_cov: units.iter().map(|u| u.scale(rho)).collect(),
            quant_cov: HermitianMatrix::identity(n_r).scale(omega),
            art_noise: config
                .ru_antennas
                .iter()
                .map(|&n| HermitianMatrix::zeros(n))
                .collect(),
        }
    };
    let ok = |vars: &DesignVariables| -> bool {
        for (i, &p) in config.power_limit.iter().enumerate() {
            if ru_power(vars, &blocks, i) > (1.0 - INIT_SLACK) * p {
                return false;
            }
        }
        for subset in &subsets {
            let cap: f64 = subset.iter().map(|&i| config.fronthaul_capacity[i]).sum();
            match fronthaul_usage(vars, &blocks, subset) {
                Ok(g) => {
                    if g > (1.0 - INIT_SLACK) * cap {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        true
    };

    // Largest rho the power budget admits with the chosen omega; the
    // fronthaul predicate is monotone in rho, so bisection applies.
    let mut rho_hi = f64::INFINITY;
    for (i, &p) in config.power_limit.iter().enumerate() {
        let noise_power = omega * config.ru_antennas[i] as f64;
        let unit_power: f64 = units
            .iter()
            .map(|u| blocks.range(i).map(|a| u.get(a, a).re).sum::<f64>())
            .sum();
        rho_hi = rho_hi.min(((1.0 - INIT_SLACK) * p - noise_power) / unit_power.max(1e-300));
    }
    if ok(&build(rho_hi)) {
        return Ok(build(rho_hi));
    }
    let mut lo = rho_hi * 1e-12;
    if !ok(&build(lo)) {
        return Err(Error::InfeasibleConfig(
            "no scaling of the initial covariances satisfies the fronthaul constraints".into(),
        ));
    }
    let mut hi = rho_hi;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ok(&build(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(build(lo))
}

/// Strictly feasible starting point: isotropic quantization noise at a
/// fraction of the power budget and scaled random unit-trace transmit
/// covariances, with the scale found by bisection so that every fronthaul
/// and power constraint holds with at least 5% slack.
pub fn initialize_feasible(config: &SystemConfig, rng: &mut impl Rng) -> Result<DesignVariables> {
    config.validate()?;
    let n_r = config.total_ru_antennas();
    let units: Vec<HermitianMatrix> = (0..config.num_ues)
        .map(|_| {
            let w = HermitianMatrix::random_psd(n_r, rng);
            let ridge = 0.01 * w.trace().max(1e-6) / n_r as f64;
            let w = w.add_scaled_identity(ridge);
            w.scale(1.0 / w.trace())
        })
        .collect();
    feasible_point(config, units)
}

/// Deterministic interior point (isotropic transmit covariances); used as
/// the pull-back anchor when a warm start sits on the feasible boundary.
fn deterministic_interior(config: &SystemConfig) -> Result<DesignVariables> {
    let n_r = config.total_ru_antennas();
    let units = vec![HermitianMatrix::identity(n_r).scale(1.0 / n_r as f64); config.num_ues];
    feasible_point(config, units)
}

// ---------------------------------------------------------------------------
// Subproblem construction
// ---------------------------------------------------------------------------

fn var_patterns(config: &SystemConfig, flags: StrategyFlags) -> Vec<VarPattern> {
    let mut patterns = vec![VarPattern::Full; config.num_ues];
    patterns.push(if flags.multivariate {
        VarPattern::Full
    } else {
        VarPattern::BlockDiagonal(config.antenna_blocks())
    });
    patterns
}

fn constraint_subsets(config: &SystemConfig, flags: StrategyFlags) -> Vec<Vec<usize>> {
    if flags.multivariate {
        non_empty_subsets(config.num_rus)
    } else {
        // block-diagonal noise makes usage additive over RUs, so the
        // singleton constraints imply every subset constraint
        (0..config.num_rus).map(|i| vec![i]).collect()
    }
}

/// Adds `-(weight) * varphi(base + map(Y), anchor)` to `(constant,
/// linear)`, where `Y = sum coeff_v X_v` and varphi is the log-det tangent
/// (affine in the new variables).
fn add_negated_tangent(
    layout: &VarLayout,
    constant: &mut f64,
    linear: &mut [f64],
    weight: f64,
    anchor: &HermitianMatrix,
    base: &HermitianMatrix,
    map: Option<&ComplexMatrix>,
    coeffs: &[f64],
) -> Result<()> {
    let chol = Cholesky::factor(anchor).ok_or_else(|| {
        Error::NotPositiveDefinite("tangent anchor in subproblem construction".into())
    })?;
    let inv = chol.inverse();
    let dim = anchor.dim() as f64;
    *constant -= weight
        * (chol.ln_det() / LN_2 - dim / LN_2
            + crate::hermitian::trace_product(&inv, base) / LN_2);
    let grad = match map {
        Some(h) => h.adjoint().congruence(&inv),
        None => inv,
    };
    for (vi, &c) in coeffs.iter().enumerate() {
        if c != 0.0 {
            layout.scatter_grad(vi, &grad, -weight * c / LN_2, linear);
        }
    }
    Ok(())
}

/// Assembles the convex subproblem expanded at `old`.
fn build_subproblem(
    old: &DesignVariables,
    config: &SystemConfig,
    channels: &ChannelRealization,
    flags: StrategyFlags,
) -> Result<Problem> {
    let blocks = config.antenna_blocks();
    let n_r = config.total_ru_antennas();
    let num_vars = config.num_ues + 1;
    let layout = VarLayout::new(n_r, &var_patterns(config, flags));
    let total = layout.total_coords();

    let all_ones = vec![1.0; num_vars];
    let omega_only = {
        let mut v = vec![0.0; num_vars];
        v[config.num_ues] = 1.0;
        v
    };
    let without = |k: usize| {
        let mut v = vec![1.0; num_vars];
        v[k] = 0.0;
        v
    };

    let old_sum = old.sum_tx_cov().add(&old.quant_cov);

    // objective: sum_k w_k * rate surrogate of UE k
    let mut objective = ScalarFn {
        constant: 0.0,
        linear: vec![0.0; total],
        logdets: Vec::new(),
    };
    for k in 0..config.num_ues {
        let w = config.weights[k];
        if w == 0.0 {
            continue;
        }
        let own_channel = channels.stacked(k);
        // + w log2 det(total received covariance at UE k)
        objective.logdets.push(LogDetTerm {
            weight: w,
            base: config.noise_cov[k].clone(),
            map: CongruenceMap::Channel(own_channel.clone()),
            coeffs: all_ones.clone(),
        });
        // - w varphi(interference at UE k ; old interference)
        let old_intf = rates::effective_noise_cov(old, channels, config, k, Some(k));
        add_negated_tangent(
            &layout,
            &mut objective.constant,
            &mut objective.linear,
            w,
            &old_intf,
            &config.noise_cov[k],
            Some(own_channel),
            &without(k),
        )?;

        if flags.secure {
            if let Some(eav) = channels.eavesdropper(k) {
                let thermal = channels
                    .eavesdropper_noise(config, k)
                    .expect("non-empty eavesdropper stack");
                // + w log2 det(interference at the eavesdropper stack)
                objective.logdets.push(LogDetTerm {
                    weight: w,
                    base: thermal.clone(),
                    map: CongruenceMap::Channel(eav.clone()),
                    coeffs: without(k),
                });
                // - w varphi(total at the eavesdropper stack ; old total)
                let old_total = eav.congruence(&old_sum).add(&thermal);
                add_negated_tangent(
                    &layout,
                    &mut objective.constant,
                    &mut objective.linear,
                    w,
                    &old_total,
                    &thermal,
                    Some(eav),
                    &all_ones,
                )?;
            }
        }
    }

    // fronthaul constraints: capacity - surrogate usage >= 0
    let mut constraints = Vec::new();
    for subset in constraint_subsets(config, flags) {
        let cap: f64 = subset.iter().map(|&i| config.fronthaul_capacity[i]).sum();
        let mut c = ScalarFn {
            constant: cap,
            linear: vec![0.0; total],
            logdets: Vec::new(),
        };
        for &i in &subset {
            let idx = blocks.subset_indices(&[i])?;
            let anchor = old_sum.principal(&idx)?;
            let chol = Cholesky::factor(&anchor).ok_or_else(|| {
                Error::NotPositiveDefinite(format!("old compressor input block of RU {i}"))
            })?;
            let inv = chol.inverse();
            // - varphi(per-RU compressor input block ; old block)
            c.constant -= chol.ln_det() / LN_2 - idx.len() as f64 / LN_2;
            let grad = HermitianMatrix::embed(&inv, n_r, &idx);
            for vi in 0..num_vars {
                layout.scatter_grad(vi, &grad, -1.0 / LN_2, &mut c.linear);
            }
        }
        // + log2 det(subset block of the quantization noise)
        let subset_idx = blocks.subset_indices(&subset)?;
        c.logdets.push(LogDetTerm {
            weight: 1.0,
            base: HermitianMatrix::zeros(subset_idx.len()),
            map: CongruenceMap::Principal(subset_idx),
            coeffs: omega_only.clone(),
        });
        constraints.push(c);
    }

    // power constraints: P_i - sum_v tr(block_i X_v) >= 0
    for (i, &p) in config.power_limit.iter().enumerate() {
        let idx: Vec<usize> = blocks.range(i).collect();
        let selector =
            HermitianMatrix::embed(&HermitianMatrix::identity(idx.len()), n_r, &idx);
        let mut c = ScalarFn {
            constant: p,
            linear: vec![0.0; total],
            logdets: Vec::new(),
        };
        for vi in 0..num_vars {
            layout.scatter_grad(vi, &selector, -1.0, &mut c.linear);
        }
        constraints.push(c);
    }

    Ok(Problem {
        layout,
        objective,
        constraints,
    })
}

fn pack_design(problem: &Problem, vars: &DesignVariables) -> Vec<f64> {
    let mut mats = vars.tx_cov.clone();
    mats.push(vars.quant_cov.clone());
    problem.layout.pack(&mats)
}

fn unpack_design(problem: &Problem, x: &[f64], config: &SystemConfig) -> DesignVariables {
    let mats = problem.layout.unpack(x);
    let num_ues = config.num_ues;
    DesignVariables {
        tx_cov: mats[..num_ues].to_vec(),
        quant_cov: mats[num_ues].clone(),
        art_noise: config
            .ru_antennas
            .iter()
            .map(|&n| HermitianMatrix::zeros(n))
            .collect(),
    }
}

/// Pulls `x` toward the strictly interior `anchor` until the barrier
/// domain accepts it.
fn ensure_strict_interior(problem: &Problem, x: Vec<f64>, anchor: &[f64]) -> Option<Vec<f64>> {
    for &theta in &[0.0, 1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0] {
        let cand: Vec<f64> = x
            .iter()
            .zip(anchor)
            .map(|(xi, ai)| (1.0 - theta) * xi + theta * ai)
            .collect();
        if problem.strictly_feasible(&cand) {
            return Some(cand);
        }
    }
    None
}

/// Solves the convex subproblem expanded at `old`. The returned point is
/// always feasible for the surrogate constraints (hence for the original
/// fronthaul constraints); when the inner solver cannot improve on the
/// expansion point, `old` itself is returned.
pub fn solve_subproblem(
    old: &DesignVariables,
    config: &SystemConfig,
    channels: &ChannelRealization,
    flags: StrategyFlags,
) -> Result<SubproblemSolution> {
    let problem = build_subproblem(old, config, channels, flags)?;
    let anchor_vars = deterministic_interior(config)?;
    let anchor = pack_design(&problem, &anchor_vars);
    let x0 = ensure_strict_interior(&problem, pack_design(&problem, old), &anchor)
        .ok_or_else(|| Error::InfeasibleConfig("no strictly interior start".into()))?;

    let sol = solve_barrier(&problem, x0, &BarrierOptions::default());
    let candidate = unpack_design(&problem, &sol.x, config);

    let old_surrogate = weighted_surrogate_objective(old, old, channels, config, flags.secure)?;
    let new_surrogate =
        weighted_surrogate_objective(&candidate, old, channels, config, flags.secure)?;

    if !new_surrogate.is_finite() || new_surrogate < old_surrogate {
        // numerically no progress: the expansion point is already
        // (near-)stationary for this surrogate
        return Ok(SubproblemSolution {
            new_vars: old.clone(),
            objective: old_surrogate,
            inner_iterations: sol.newton_iters,
            stationarity_residual: sol.stationarity,
            feasibility_residual: 0.0,
            stalled: sol.stalled,
        });
    }
    Ok(SubproblemSolution {
        new_vars: candidate,
        objective: new_surrogate,
        inner_iterations: sol.newton_iters,
        stationarity_residual: sol.stationarity,
        feasibility_residual: (-sol.min_slack).max(0.0),
        stalled: sol.stalled,
    })
}

// ---------------------------------------------------------------------------
// Outer loop
// ---------------------------------------------------------------------------

/// Runs the full procedure: feasible initialization, surrogate subproblem
/// iterations until the relative improvement of the smooth objective
/// drops below `CONVERGENCE_RTOL` (or `MAX_ITERATIONS` is hit), returning
/// the final design (artificial noise zero) and the iteration trace.
pub fn run_cccp(
    config: &SystemConfig,
    channels: &ChannelRealization,
    flags: StrategyFlags,
    init_seed: u64,
) -> Result<(DesignVariables, CcCpTrace)> {
    run_cccp_from(config, channels, flags, init_seed, None)
}

/// As [`run_cccp`], but optionally warm-started from a feasible design
/// point instead of the seeded initializer.
pub fn run_cccp_from(
    config: &SystemConfig,
    channels: &ChannelRealization,
    flags: StrategyFlags,
    init_seed: u64,
    warm_start: Option<&DesignVariables>,
) -> Result<(DesignVariables, CcCpTrace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(init_seed);
    let init = initialize_feasible(config, &mut rng)?;
    let mut current = match warm_start {
        Some(w) => {
            let mut w = w.clone();
            w.quant_cov = w.quant_cov.add_scaled_identity(EPS_FLOOR);
            w
        }
        None => init,
    };
    let mut objective = smooth_objective(&current, channels, config, flags.secure)?;
    let mut entries = vec![TraceEntry {
        objective,
        max_violation: validate_feasibility(&current, config)?.max_violation,
        step_norm: 0.0,
    }];
    let mut converged = false;
    let mut stalled = false;
    let mut iterations = 0;

    for _ in 0..MAX_ITERATIONS {
        let sol = solve_subproblem(&current, config, channels, flags)?;
        stalled |= sol.stalled;
        iterations += 1;

        let mut next = sol.new_vars;
        next.quant_cov = next.quant_cov.add_scaled_identity(EPS_FLOOR);
        let next_objective = smooth_objective(&next, channels, config, flags.secure)?;
        let step_norm = next.distance(&current);
        entries.push(TraceEntry {
            objective: next_objective,
            max_violation: validate_feasibility(&next, config)?.max_violation,
            step_norm,
        });
        let improvement = next_objective - objective;
        current = next;
        objective = next_objective;
        if improvement < CONVERGENCE_RTOL * objective.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    Ok((
        current,
        CcCpTrace {
            entries,
            iterations,
            converged,
            stalled,
        },
    ))
}

// ---------------------------------------------------------------------------
// Post-processing and checks
// ---------------------------------------------------------------------------

/// Extracts the rank-`streams` precoder from a transmit covariance: the
/// leading eigenvectors scaled by square-rooted eigenvalues. The Gram
/// matrix of the result is the best PSD approximation of that rank.
pub fn rank_reduce(cov: &HermitianMatrix, streams: usize) -> ComplexMatrix {
    let (vals, vecs) = leading_eigenpairs(cov, streams.min(cov.dim())).expect("valid rank");
    ComplexMatrix::from_fn(cov.dim(), vals.len(), |i, j| vecs[j][i] * vals[j].sqrt())
}

/// Replaces every transmit covariance by the Gram matrix of its
/// rank-reduced precoder (stream counts from the config). Feasibility is
/// preserved: the reduced covariances are dominated by the originals.
pub fn reduce_to_streams(vars: &DesignVariables, config: &SystemConfig) -> DesignVariables {
    DesignVariables {
        tx_cov: vars
            .tx_cov
            .iter()
            .zip(&config.streams)
            .map(|(r, &d)| rank_reduce(r, d).gram())
            .collect(),
        quant_cov: vars.quant_cov.clone(),
        art_noise: vars.art_noise.clone(),
    }
}

/// Moves the artificial noise into the quantization noise: rates and
/// powers are unchanged (bit-exact) and fronthaul usage can only drop.
pub fn absorb_artificial_noise(vars: &DesignVariables, blocks: &AntennaBlocks) -> DesignVariables {
    DesignVariables {
        tx_cov: vars.tx_cov.clone(),
        quant_cov: vars.total_injected_noise(blocks),
        art_noise: (0..blocks.num_blocks())
            .map(|b| HermitianMatrix::zeros(blocks.size(b)))
            .collect(),
    }
}

/// Exact constraint audit of a design point against the original
/// (non-surrogate) problem. Violations beyond 1e-6 (1e-9 for
/// eigenvalues) are listed.
pub fn validate_feasibility(
    vars: &DesignVariables,
    config: &SystemConfig,
) -> Result<FeasibilityReport> {
    let blocks = config.antenna_blocks();
    let mut fronthaul = Vec::new();
    let mut violations = Vec::new();
    let mut max_violation = 0.0f64;
    for subset in non_empty_subsets(config.num_rus) {
        let cap: f64 = subset.iter().map(|&i| config.fronthaul_capacity[i]).sum();
        let usage = fronthaul_usage(vars, &blocks, &subset)?;
        let slack = cap - usage;
        if slack < -1e-6 {
            violations.push(format!(
                "fronthaul subset {subset:?}: usage {usage:.6} exceeds capacity {cap:.6}"
            ));
        }
        max_violation = max_violation.max(-slack);
        fronthaul.push((subset, usage, cap, slack));
    }
    let mut power = Vec::new();
    for (i, &p) in config.power_limit.iter().enumerate() {
        let usage = ru_power(vars, &blocks, i);
        let slack = p - usage;
        if slack < -1e-6 {
            violations.push(format!("RU {i}: power {usage:.6} exceeds limit {p:.6}"));
        }
        max_violation = max_violation.max(-slack);
        power.push((usage, p, slack));
    }
    let mut min_eigenvalues = Vec::new();
    {
        let mut check_psd = |m: &HermitianMatrix, what: String| {
            let min = crate::hermitian::eigenvalues(m)
                .last()
                .copied()
                .unwrap_or(0.0);
            if min < -1e-9 {
                violations.push(format!("{what}: minimum eigenvalue {min:.3e}"));
            }
            min_eigenvalues.push(min);
        };
        for (k, r) in vars.tx_cov.iter().enumerate() {
            check_psd(r, format!("transmit covariance of UE {k}"));
        }
        check_psd(&vars.quant_cov, "quantization noise covariance".to_string());
        for (i, phi) in vars.art_noise.iter().enumerate() {
            check_psd(phi, format!("artificial noise of RU {i}"));
        }
    }
    max_violation = max_violation.max(0.0);
    Ok(FeasibilityReport {
        fronthaul,
        power,
        min_eigenvalues,
        violations,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::realize;

    fn flags(secure: bool, multivariate: bool) -> StrategyFlags {
        StrategyFlags {
            secure,
            multivariate,
        }
    }

    #[test]
    fn initializer_respects_slack_and_is_deterministic() {
        let config = SystemConfig::uniform(2, 3, 1, 1, 1.0, 100.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vars = initialize_feasible(&config, &mut rng).unwrap();
        for subset in non_empty_subsets(config.num_rus) {
            let cap: f64 = subset.iter().map(|&i| config.fronthaul_capacity[i]).sum();
            assert!(fronthaul_usage(&vars, &blocks, &subset).unwrap() <= 0.95 * cap + 1e-9);
        }
        for i in 0..config.num_rus {
            assert!(ru_power(&vars, &blocks, i) <= 0.95 * config.power_limit[i] + 1e-9);
        }
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(vars, initialize_feasible(&config, &mut rng2).unwrap());
    }

    #[test]
    fn initializer_power_bound_when_capacity_is_huge() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 1e3, 10.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vars = initialize_feasible(&config, &mut rng).unwrap();
        for i in 0..config.num_rus {
            assert!(ru_power(&vars, &blocks, i) <= 0.95 * config.power_limit[i] + 1e-9);
        }
        // power is the binding constraint here: most of the allowance is used
        let used: f64 = (0..config.num_rus)
            .map(|i| ru_power(&vars, &blocks, i))
            .sum();
        assert!(used > 0.5 * 0.95 * config.power_limit.iter().sum::<f64>());
    }

    #[test]
    fn initializer_scalar_capacity_bound() {
        let config = SystemConfig::uniform(1, 2, 1, 1, 1.0, 100.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let vars = initialize_feasible(&config, &mut rng).unwrap();
        let g = fronthaul_usage(&vars, &blocks, &[0]).unwrap();
        assert!(g <= 0.95 + 1e-9, "g = {g}");
    }

    #[test]
    fn absorption_clauses() {
        let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let real = realize(&config, 17);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let vars = DesignVariables {
                tx_cov: (0..config.num_ues)
                    .map(|_| HermitianMatrix::random_psd(4, &mut rng))
                    .collect(),
                quant_cov: HermitianMatrix::random_psd(4, &mut rng).add_scaled_identity(0.1),
                art_noise: config
                    .ru_antennas
                    .iter()
                    .map(|&n| HermitianMatrix::random_psd(n, &mut rng).scale(0.5))
                    .collect(),
            };
            let absorbed = absorb_artificial_noise(&vars, &blocks);
            for k in 0..config.num_ues {
                assert_eq!(
                    rates::secrecy_rate(&vars, &real, &config, k).unwrap(),
                    rates::secrecy_rate(&absorbed, &real, &config, k).unwrap()
                );
            }
            for i in 0..config.num_rus {
                assert_eq!(ru_power(&vars, &blocks, i), ru_power(&absorbed, &blocks, i));
            }
            for subset in non_empty_subsets(config.num_rus) {
                let before = fronthaul_usage(&vars, &blocks, &subset).unwrap();
                let after = fronthaul_usage(&absorbed, &blocks, &subset).unwrap();
                assert!(after <= before + 1e-9);
            }
            let twice = absorb_artificial_noise(&absorbed, &blocks);
            assert_eq!(absorbed, twice);
        }
    }

    #[test]
    fn absorption_noop_without_artificial_noise() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 10.0);
        let blocks = config.antenna_blocks();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let vars = DesignVariables {
            tx_cov: (0..2)
                .map(|_| HermitianMatrix::random_psd(2, &mut rng))
                .collect(),
            quant_cov: HermitianMatrix::random_psd(2, &mut rng).add_scaled_identity(0.2),
            art_noise: vec![HermitianMatrix::zeros(1), HermitianMatrix::zeros(1)],
        };
        assert_eq!(absorb_artificial_noise(&vars, &blocks), vars);
    }

    #[test]
    fn rank_reduction_cases() {
        // exact when the rank already fits
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let g = crate::hermitian::random_complex_gaussian_matrix(3, 2, &mut rng);
        let low_rank = g.gram(); // rank 2
        let a = rank_reduce(&low_rank, 2);
        assert!(a.gram().sub(&low_rank).frobenius_norm() <= 1e-8 * low_rank.frobenius_norm());

        // diag(3, 1) reduced to one stream: sqrt(3) e_1 (phase fixed)
        let m = HermitianMatrix::from_diag(&[3.0, 1.0]);
        let a = rank_reduce(&m, 1);
        assert_eq!((a.rows(), a.cols()), (2, 1));
        assert!((a.get(0, 0).re - 3.0f64.sqrt()).abs() < 1e-12);
        assert!(a.get(0, 0).im.abs() < 1e-12);
        assert!(a.get(1, 0).norm() < 1e-12);
    }

    #[test]
    fn rank_reduction_lossless_when_rank_fits() {
        let mut config = SystemConfig::uniform(2, 2, 2, 2, 3.0, 20.0);
        config.streams = vec![2, 2];
        let blocks = config.antenna_blocks();
        let real = realize(&config, 31);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        // rank-2 covariances over 4 antennas, reduced to 2 streams: lossless
        let vars = DesignVariables {
            tx_cov: (0..2)
                .map(|_| crate::hermitian::random_complex_gaussian_matrix(4, 2, &mut rng).gram())
                .collect(),
            quant_cov: HermitianMatrix::random_psd(4, &mut rng).add_scaled_identity(0.3),
            art_noise: vec![HermitianMatrix::zeros(2), HermitianMatrix::zeros(2)],
        };
        let reduced = reduce_to_streams(&vars, &config);
        for k in 0..2 {
            let before = rates::secrecy_rate(&vars, &real, &config, k).unwrap();
            let after = rates::secrecy_rate(&reduced, &real, &config, k).unwrap();
            assert!((before - after).abs() < 1e-8);
        }
        for subset in non_empty_subsets(2) {
            let before = fronthaul_usage(&vars, &blocks, &subset).unwrap();
            let after = fronthaul_usage(&reduced, &blocks, &subset).unwrap();
            assert!((before - after).abs() < 1e-7);
        }
    }

    #[test]
    fn feasibility_report_flags_scaled_power() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let vars = initialize_feasible(&config, &mut rng).unwrap();
        let report = validate_feasibility(&vars, &config).unwrap();
        assert!(report.is_feasible());
        assert!(report.max_violation <= 1e-12);

        let blown = DesignVariables {
            tx_cov: vars.tx_cov.iter().map(|r| r.scale(10.0)).collect(),
            quant_cov: vars.quant_cov.clone(),
            art_noise: vars.art_noise.clone(),
        };
        let report = validate_feasibility(&blown, &config).unwrap();
        assert!(!report.is_feasible());
        assert!(report.violations.iter().any(|v| v.contains("power")));
    }

    #[test]
    fn zero_channels_converge_immediately() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 10.0);
        let zero_channels: Vec<Vec<ComplexMatrix>> = (0..config.num_ues)
            .map(|_| {
                (0..config.num_rus)
                    .map(|_| ComplexMatrix::zeros(1, 1))
                    .collect()
            })
            .collect();
        let real = crate::model::ChannelRealization::from_parts(
            vec![(0.0, 0.0); 2],
            vec![(0.0, 0.0); 2],
            zero_channels,
            0,
        );
        for &fl in &[flags(true, true), flags(false, false)] {
            let (vars, trace) = run_cccp(&config, &real, fl, 5).unwrap();
            assert!(trace.iterations <= 2, "iterations {}", trace.iterations);
            assert!(trace.converged);
            assert!(trace.final_objective().abs() < 1e-8);
            let report = validate_feasibility(&vars, &config).unwrap();
            assert!(report.is_feasible());
        }
    }

    #[test]
    fn cccp_monotone_and_feasible_small_instance() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 10.0);
        let real = realize(&config, 43);
        for &fl in &[flags(true, true), flags(true, false), flags(false, true)] {
            let (vars, trace) = run_cccp(&config, &real, fl, 11).unwrap();
            assert!(trace.converged, "should converge on an easy instance");
            for pair in trace.entries.windows(2) {
                assert!(pair[1].objective >= pair[0].objective - 1e-6);
            }
            for e in &trace.entries {
                assert!(e.max_violation <= 1e-6);
            }
            let report = validate_feasibility(&vars, &config).unwrap();
            assert!(report.is_feasible(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn subproblem_no_regression_at_stationarity() {
        let config = SystemConfig::uniform(1, 2, 1, 1, 2.0, 10.0);
        let real = realize(&config, 47);
        let fl = flags(true, true);
        let (vars, _) = run_cccp(&config, &real, fl, 3).unwrap();
        let sol = solve_subproblem(&vars, &config, &real, fl).unwrap();
        let old_obj = weighted_surrogate_objective(&vars, &vars, &real, &config, true).unwrap();
        assert!(sol.objective >= old_obj - 1e-8);
        assert!((sol.objective - old_obj).abs() < 5e-3);
    }

    #[test]
    fn subproblem_solution_contract() {
        let config = SystemConfig::uniform(2, 2, 1, 1, 2.0, 10.0);
        let real = realize(&config, 53);
        let fl = flags(true, true);
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let old = initialize_feasible(&config, &mut rng).unwrap();
        let sol = solve_subproblem(&old, &config, &real, fl).unwrap();
        assert!(sol.feasibility_residual <= 1e-7);
        assert!(sol.stalled || sol.stationarity_residual <= 1e-6);
        sol.new_vars.validate_psd(1e-9).unwrap();
        // feasible for the original constraints too (majorization)
        let report = validate_feasibility(&sol.new_vars, &config).unwrap();
        assert!(report.is_feasible(), "{:?}", report.violations);
    }

    #[test]
    fn constraint_set_enumerates_all_subsets() {
        for num_rus in 1..=3 {
            let config = SystemConfig::uniform(num_rus, 2, 1, 1, 2.0, 10.0);
            let real = realize(&config, 61);
            let mut rng = ChaCha8Rng::seed_from_u64(67);
            let old = initialize_feasible(&config, &mut rng).unwrap();
            let multivariate =
                build_subproblem(&old, &config, &real, flags(true, true)).unwrap();
            assert_eq!(
                multivariate.constraints.len(),
                (1 << num_rus) - 1 + num_rus,
                "N_R = {num_rus}: every non-empty subset plus per-RU power"
            );
            let p2p = build_subproblem(&old, &config, &real, flags(true, false)).unwrap();
            assert_eq!(p2p.constraints.len(), 2 * num_rus);
        }
    }

    #[test]
    fn rank_gap_never_negative_on_optimized_designs() {
        for seed in [3u64, 5, 7] {
            let config = SystemConfig::uniform(2, 2, 2, 1, 2.0, 10.0);
            let real = realize(&config, seed);
            let (vars, _) = run_cccp(&config, &real, flags(true, true), seed).unwrap();
            let cov_obj =
                rates::weighted_secrecy_objective(&vars, &real, &config, true).unwrap();
            let reduced = reduce_to_streams(&vars, &config);
            let red_obj =
                rates::weighted_secrecy_objective(&reduced, &real, &config, true).unwrap();
            assert!(
                cov_obj - red_obj >= -1e-8,
                "seed {seed}: rank reduction gained {:.3e}",
                red_obj - cov_obj
            );
            assert!(validate_feasibility(&reduced, &config).unwrap().is_feasible());
        }
    }
}
