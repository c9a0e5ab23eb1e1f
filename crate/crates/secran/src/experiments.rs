//! Monte Carlo experiment harness: config files, sweeps, CSV output.
//!
//! An experiment sweeps either the per-RU transmit power (in dB) or the
//! number of UEs, draws `num_draws` independent topologies/channels per
//! sweep value, runs every requested strategy on identical draws (paired
//! comparison), and reports per-row results plus per-cell means and
//! standard errors. Everything is deterministic in `(spec, master_seed)`:
//! per-cell seeds are derived by a fixed mixer, cells execute in parallel,
//! and rows are sorted before emission, so repeated runs produce
//! byte-identical CSV regardless of thread count.
//!
//! # Config file format
//!
//! Plain `key = value` lines, `#` comments. Per-RU/per-UE list values
//! accept either a single number (replicated) or a comma-separated list.
//!
//! ```text
//! num_rus = 2
//! num_ues = 3
//! ru_antennas = 1
//! ue_antennas = 1
//! capacity = 2.0          # bits/s/Hz per RU
//! power_db = 20           # per-RU power in dB (or: power = 100.0 linear)
//! noise_power = 1.0       # per-UE thermal noise variance
//! weights = 1.0
//! streams = 1             # default: UE antenna count
//! pathloss_exponent = 3.0
//! reference_distance = 50.0
//! area_side = 500.0
//! sweep_variable = power_db   # power_db | num_ues
//! sweep_values = 0,5,10,15,20,25,30
//! num_draws = 50
//! master_seed = 1
//! strategies = secure-multivariate,secure-p2p,nonsecure-multivariate,nonsecure-p2p
//! output = results.csv
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cccp::{reduce_to_streams, validate_feasibility};
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::model::{mix_seed, realize, SystemConfig};
use crate::rates::RateReport;
use crate::strategies::{evaluate_all, run_strategy, StrategyFlags};

/// Which scalar the sweep varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    /// Per-RU power limit in dB (linear limit `10^(v/10)` applied to all
    /// RUs).
    PowerDb,
    /// Number of UEs; per-UE fields are replicated from the first UE of
    /// the base config.
    NumUes,
}

impl SweepVariable {
    pub fn key(&self) -> &'static str {
        match self {
            SweepVariable::PowerDb => "power_db",
            SweepVariable::NumUes => "num_ues",
        }
    }

    pub fn axis_label(&self) -> &'static str {
        match self {
            SweepVariable::PowerDb => "P [dB]",
            SweepVariable::NumUes => "number of UEs",
        }
    }
}

/// Full experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub base_config: SystemConfig,
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub num_draws: usize,
    pub master_seed: u64,
    pub strategies: Vec<StrategyFlags>,
    pub output_path: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.base_config.validate()?;
        if self.sweep_values.is_empty() {
            return Err(Error::config("sweep_values", "must be non-empty"));
        }
        if self.sweep_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "sweep_values",
                "must be strictly increasing",
            ));
        }
        if self.num_draws == 0 {
            return Err(Error::config("num_draws", "must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(Error::config("strategies", "must list at least one"));
        }
        let mut seen = BTreeSet::new();
        for s in &self.strategies {
            if !seen.insert(s.label()) {
                return Err(Error::config(
                    "strategies",
                    format!("`{}` listed twice", s.label()),
                ));
            }
        }
        if self.sweep_variable == SweepVariable::NumUes {
            for &v in &self.sweep_values {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(Error::config(
                        "sweep_values",
                        format!("num_ues sweep needs positive integers, got {v}"),
                    ));
                }
            }
        }
        // every sweep point must define a valid system
        for &v in &self.sweep_values {
            self.config_for(v)?.validate()?;
        }
        Ok(())
    }

    /// System configuration at one sweep point.
    pub fn config_for(&self, value: f64) -> Result<SystemConfig> {
        let mut config = self.base_config.clone();
        match self.sweep_variable {
            SweepVariable::PowerDb => {
                let linear = 10f64.powf(value / 10.0);
                config.power_limit = vec![linear; config.num_rus];
            }
            SweepVariable::NumUes => {
                let n = value as usize;
                config.num_ues = n;
                config.ue_antennas = vec![self.base_config.ue_antennas[0]; n];
                config.noise_cov = vec![self.base_config.noise_cov[0].clone(); n];
                config.weights = vec![self.base_config.weights[0]; n];
                config.streams = vec![self.base_config.streams[0]; n];
            }
        }
        Ok(config)
    }

    /// Canonical text form; parsing it back yields an equal spec.
    pub fn canonical_string(&self) -> String {
        let cfg = &self.base_config;
        let join_f =
            |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let join_u = |v: &[usize]| {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        let noise: Vec<f64> = cfg.noise_cov.iter().map(|m| m.get(0, 0).re).collect();
        let mut s = String::new();
        let _ = writeln!(s, "num_rus = {}", cfg.num_rus);
        let _ = writeln!(s, "num_ues = {}", cfg.num_ues);
        let _ = writeln!(s, "ru_antennas = {}", join_u(&cfg.ru_antennas));
        let _ = writeln!(s, "ue_antennas = {}", join_u(&cfg.ue_antennas));
        let _ = writeln!(s, "capacity = {}", join_f(&cfg.fronthaul_capacity));
        let _ = writeln!(s, "power = {}", join_f(&cfg.power_limit));
        let _ = writeln!(s, "noise_power = {}", join_f(&noise));
        let _ = writeln!(s, "weights = {}", join_f(&cfg.weights));
        let _ = writeln!(s, "streams = {}", join_u(&cfg.streams));
        let _ = writeln!(s, "pathloss_exponent = {}", cfg.pathloss_exponent);
        let _ = writeln!(s, "reference_distance = {}", cfg.reference_distance);
        let _ = writeln!(s, "area_side = {}", cfg.area_side);
        let _ = writeln!(s, "sweep_variable = {}", self.sweep_variable.key());
        let _ = writeln!(s, "sweep_values = {}", join_f(&self.sweep_values));
        let _ = writeln!(s, "num_draws = {}", self.num_draws);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(
            s,
            "strategies = {}",
            self.strategies
                .iter()
                .map(|f| f.label())
                .collect::<Vec<_>>()
                .join(",")
        );
        let _ = writeln!(s, "output = {}", self.output_path.display());
        s
    }
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

struct RawConfig {
    entries: Vec<(usize, String, String)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let stripped = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("expected `key = value`, got `{stripped}`"),
                });
            };
            entries.push((
                line_no,
                key.trim().to_string(),
                value.trim().to_string(),
            ));
        }
        Ok(RawConfig { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        let pos = self.entries.iter().position(|(_, k, _)| k == key)?;
        let (line, _, value) = self.entries.remove(pos);
        Some((line, value))
    }
}

fn parse_scalar<T: std::str::FromStr>(key: &str, line: usize, value: &str) -> Result<T> {
    value.parse::<T>().map_err(|_| Error::Parse {
        line,
        reason: format!("field `{key}`: cannot parse `{value}`"),
    })
}

/// Single value (replicated to `count`) or a comma list of exactly
/// `count` entries.
fn parse_list<T: std::str::FromStr + Clone>(
    key: &str,
    line: usize,
    value: &str,
    count: usize,
) -> Result<Vec<T>> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let items: Vec<T> = parts
        .iter()
        .map(|p| parse_scalar(key, line, p))
        .collect::<Result<_>>()?;
    if items.len() == 1 {
        Ok(vec![items[0].clone(); count])
    } else if items.len() == count {
        Ok(items)
    } else {
        Err(Error::Parse {
            line,
            reason: format!(
                "field `{key}`: expected 1 or {count} comma-separated values, got {}",
                items.len()
            ),
        })
    }
}

/// Parses an experiment spec from config text, filling defaults for
/// absent fields (propagation: alpha = 3, d0 = 50 m, 500 m area; unit
/// noise and weights; streams = UE antennas; the standard power sweep
/// with 50 draws and all four strategies).
pub fn parse_config_str(text: &str) -> Result<ExperimentSpec> {
    let mut raw = RawConfig::parse(text)?;

    let (line_rus, v) = raw
        .take("num_rus")
        .ok_or_else(|| Error::config("num_rus", "missing required field"))?;
    let num_rus: usize = parse_scalar("num_rus", line_rus, &v)?;
    let (line_ues, v) = raw
        .take("num_ues")
        .ok_or_else(|| Error::config("num_ues", "missing required field"))?;
    let num_ues: usize = parse_scalar("num_ues", line_ues, &v)?;
    if num_rus == 0 {
        return Err(Error::config("num_rus", "must be positive"));
    }
    if num_ues == 0 {
        return Err(Error::config("num_ues", "must be positive"));
    }

    let ru_antennas = match raw.take("ru_antennas") {
        Some((line, v)) => parse_list::<usize>("ru_antennas", line, &v, num_rus)?,
        None => vec![1; num_rus],
    };
    let ue_antennas = match raw.take("ue_antennas") {
        Some((line, v)) => parse_list::<usize>("ue_antennas", line, &v, num_ues)?,
        None => vec![1; num_ues],
    };
    let fronthaul_capacity = match raw.take("capacity") {
        Some((line, v)) => parse_list::<f64>("capacity", line, &v, num_rus)?,
        None => vec![2.0; num_rus],
    };
    let power_limit = match (raw.take("power"), raw.take("power_db")) {
        (Some(_), Some((line, _))) => {
            return Err(Error::Parse {
                line,
                reason: "specify `power` (linear) or `power_db`, not both".into(),
            })
        }
        (Some((line, v)), None) => parse_list::<f64>("power", line, &v, num_rus)?,
        (None, Some((line, v))) => parse_list::<f64>("power_db", line, &v, num_rus)?
            .into_iter()
            .map(|db| 10f64.powf(db / 10.0))
            .collect(),
        (None, None) => vec![100.0; num_rus],
    };
    let noise_power = match raw.take("noise_power") {
        Some((line, v)) => parse_list::<f64>("noise_power", line, &v, num_ues)?,
        None => vec![1.0; num_ues],
    };
    for (k, &p) in noise_power.iter().enumerate() {
        if !(p > 0.0) {
            return Err(Error::config(
                "noise_power",
                format!("UE {k}: must be > 0"),
            ));
        }
    }
    let weights = match raw.take("weights") {
        Some((line, v)) => parse_list::<f64>("weights", line, &v, num_ues)?,
        None => vec![1.0; num_ues],
    };
    let streams = match raw.take("streams") {
        Some((line, v)) => parse_list::<usize>("streams", line, &v, num_ues)?,
        None => ue_antennas.clone(),
    };
    let pathloss_exponent = match raw.take("pathloss_exponent") {
        Some((line, v)) => parse_scalar("pathloss_exponent", line, &v)?,
        None => 3.0,
    };
    let reference_distance = match raw.take("reference_distance") {
        Some((line, v)) => parse_scalar("reference_distance", line, &v)?,
        None => 50.0,
    };
    let area_side = match raw.take("area_side") {
        Some((line, v)) => parse_scalar("area_side", line, &v)?,
        None => 500.0,
    };

    let sweep_variable = match raw.take("sweep_variable") {
        Some((line, v)) => match v.as_str() {
            "power_db" => SweepVariable::PowerDb,
            "num_ues" => SweepVariable::NumUes,
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!(
                        "field `sweep_variable`: expected power_db or num_ues, got `{other}`"
                    ),
                })
            }
        },
        None => SweepVariable::PowerDb,
    };
    let sweep_values = match raw.take("sweep_values") {
        Some((line, v)) => {
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            parts
                .iter()
                .map(|p| parse_scalar::<f64>("sweep_values", line, p))
                .collect::<Result<Vec<f64>>>()?
        }
        None => vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
    };
    let num_draws = match raw.take("num_draws") {
        Some((line, v)) => parse_scalar("num_draws", line, &v)?,
        None => 50,
    };
    let master_seed = match raw.take("master_seed") {
        Some((line, v)) => parse_scalar("master_seed", line, &v)?,
        None => 0,
    };
    let strategies = match raw.take("strategies") {
        Some((_, v)) => v
            .split(',')
            .map(StrategyFlags::parse)
            .collect::<Result<Vec<_>>>()?,
        None => StrategyFlags::all().to_vec(),
    };
    let output_path = match raw.take("output") {
        Some((_, v)) => PathBuf::from(v),
        None => PathBuf::from("results.csv"),
    };

    if let Some((line, key, _)) = raw.entries.first() {
        return Err(Error::Parse {
            line: *line,
            reason: format!("unknown field `{key}`"),
        });
    }

    let spec = ExperimentSpec {
        base_config: SystemConfig {
            num_rus,
            num_ues,
            ru_antennas,
            ue_antennas: ue_antennas.clone(),
            fronthaul_capacity,
            power_limit,
            noise_cov: noise_power
                .iter()
                .zip(&ue_antennas)
                .map(|(&p, &n)| HermitianMatrix::identity(n).scale(p))
                .collect(),
            weights,
            streams,
            pathloss_exponent,
            reference_distance,
            area_side,
        },
        sweep_variable,
        sweep_values,
        num_draws,
        master_seed,
        strategies,
        output_path,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn parse_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}

// ---------------------------------------------------------------------------
// Sweep execution
// ---------------------------------------------------------------------------

/// One (sweep value, strategy, draw) result.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub sweep_value: f64,
    pub strategy: StrategyFlags,
    pub draw: usize,
    /// Weighted clipped secrecy sum-rate of the rank-reduced design.
    pub secrecy_sum_rate: f64,
    /// Weighted sum-rate without secrecy constraints of the same design.
    pub nonsecrecy_sum_rate: f64,
    pub cccp_iterations: usize,
    /// False on optimizer failure or numerical stall; such rows are
    /// excluded from the cell means.
    pub converged: bool,
    /// Covariance-level objective minus the rank-reduced objective.
    pub rank_gap: f64,
    /// Digest of the channel realization the run consumed.
    pub realization_digest: u64,
}

/// Mean and standard error of one (sweep value, strategy) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub sweep_value: f64,
    pub strategy: StrategyFlags,
    pub draws_used: usize,
    pub mean_secrecy_sum_rate: f64,
    pub stderr_secrecy_sum_rate: f64,
    pub mean_nonsecrecy_sum_rate: f64,
    pub stderr_nonsecrecy_sum_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<ExperimentRow>,
    pub summaries: Vec<CellSummary>,
}

fn weighted_sums(report: &RateReport, config: &SystemConfig) -> (f64, f64) {
    let secrecy = report.weighted_objective;
    let nonsecrecy: f64 = report
        .nonsecrecy_rate
        .iter()
        .zip(&config.weights)
        .map(|(r, w)| r * w)
        .sum();
    (secrecy, nonsecrecy)
}

fn run_cell(
    spec: &ExperimentSpec,
    sweep_index: usize,
    draw: usize,
) -> Result<Vec<ExperimentRow>> {
    let value = spec.sweep_values[sweep_index];
    let config = spec.config_for(value)?;
    let cell_seed = mix_seed(&[spec.master_seed, sweep_index as u64, draw as u64]);
    let channels = realize(&config, cell_seed);
    let digest = channels.digest();
    let init_seed = mix_seed(&[cell_seed, 1]);

    let mut rows = Vec::with_capacity(spec.strategies.len());
    for &flags in &spec.strategies {
        let row = match run_strategy(flags, &config, &channels, init_seed, None) {
            Ok(outcome) => {
                let reduced = reduce_to_streams(&outcome.vars, &config);
                let reduced_report = evaluate_all(&reduced, &config, &channels)?;
                let feasible = validate_feasibility(&reduced, &config)?.is_feasible();
                let (secrecy, nonsecrecy) = weighted_sums(&reduced_report, &config);
                let (cov_secrecy, _) = weighted_sums(&outcome.report, &config);
                ExperimentRow {
                    sweep_value: value,
                    strategy: flags,
                    draw,
                    secrecy_sum_rate: secrecy,
                    nonsecrecy_sum_rate: nonsecrecy,
                    cccp_iterations: outcome.trace.iterations,
                    converged: !outcome.trace.stalled && feasible,
                    rank_gap: cov_secrecy - secrecy,
                    realization_digest: digest,
                }
            }
            Err(_) => ExperimentRow {
                sweep_value: value,
                strategy: flags,
                draw,
                secrecy_sum_rate: 0.0,
                nonsecrecy_sum_rate: 0.0,
                cccp_iterations: 0,
                converged: false,
                rank_gap: 0.0,
                realization_digest: digest,
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

fn summarize(spec: &ExperimentSpec, rows: &[ExperimentRow]) -> Vec<CellSummary> {
    let mut out = Vec::new();
    for &value in &spec.sweep_values {
        for &strategy in &spec.strategies {
            let cell: Vec<&ExperimentRow> = rows
                .iter()
                .filter(|r| r.sweep_value == value && r.strategy == strategy && r.converged)
                .collect();
            let n = cell.len();
            let (mean_s, se_s) = mean_stderr(cell.iter().map(|r| r.secrecy_sum_rate));
            let (mean_n, se_n) = mean_stderr(cell.iter().map(|r| r.nonsecrecy_sum_rate));
            out.push(CellSummary {
                sweep_value: value,
                strategy,
                draws_used: n,
                mean_secrecy_sum_rate: mean_s,
                stderr_secrecy_sum_rate: se_s,
                mean_nonsecrecy_sum_rate: mean_n,
                stderr_nonsecrecy_sum_rate: se_n,
            });
        }
    }
    out
}

fn mean_stderr(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs the full sweep. Cells execute in parallel; per-draw optimizer
/// failures are recorded as unconverged rows and never abort the sweep.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepResult> {
    spec.validate()?;
    let cells: Vec<(usize, usize)> = (0..spec.sweep_values.len())
        .flat_map(|si| (0..spec.num_draws).map(move |draw| (si, draw)))
        .collect();
    let mut rows: Vec<ExperimentRow> = cells
        .par_iter()
        .map(|&(si, draw)| run_cell(spec, si, draw))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let strategy_index = |s: StrategyFlags| {
        spec.strategies
            .iter()
            .position(|&f| f == s)
            .expect("strategy from spec")
    };
    rows.sort_by(|a, b| {
        a.sweep_value
            .partial_cmp(&b.sweep_value)
            .unwrap()
            .then(strategy_index(a.strategy).cmp(&strategy_index(b.strategy)))
            .then(a.draw.cmp(&b.draw))
    });
    let summaries = summarize(spec, &rows);
    Ok(SweepResult { rows, summaries })
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str = "sweep_value,strategy,draw,secrecy_sum_rate,nonsecrecy_sum_rate,\
cccp_iterations,converged,rank_gap,realization_digest";

pub const CSV_SUMMARY_HEADER: &str = "sweep_value,strategy,draws_used,mean_secrecy_sum_rate,\
stderr_secrecy_sum_rate,mean_nonsecrecy_sum_rate,stderr_nonsecrecy_sum_rate";

fn csv_row(r: &ExperimentRow) -> String {
    format!(
        "{:.6},{},{},{:.6},{:.6},{},{},{:.6},{:016x}",
        r.sweep_value,
        r.strategy.label(),
        r.draw,
        r.secrecy_sum_rate,
        r.nonsecrecy_sum_rate,
        r.cccp_iterations,
        r.converged,
        r.rank_gap,
        r.realization_digest
    )
}

/// Serializes rows plus the summary block with fixed 6-decimal formatting
/// (byte-reproducible).
pub fn csv_string(result: &SweepResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{CSV_HEADER}");
    for r in &result.rows {
        let _ = writeln!(s, "{}", csv_row(r));
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "# summary");
    let _ = writeln!(s, "{CSV_SUMMARY_HEADER}");
    for c in &result.summaries {
        let _ = writeln!(
            s,
            "{:.6},{},{},{:.6},{:.6},{:.6},{:.6}",
            c.sweep_value,
            c.strategy.label(),
            c.draws_used,
            c.mean_secrecy_sum_rate,
            c.stderr_secrecy_sum_rate,
            c.mean_nonsecrecy_sum_rate,
            c.stderr_nonsecrecy_sum_rate
        );
    }
    s
}

pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(result)).map_err(|e| Error::io(path, e))
}

/// Reads the data rows back from a CSV produced by [`emit_csv`] (the
/// summary block is recomputed, not parsed).
pub fn parse_csv(path: &Path) -> Result<Vec<ExperimentRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_str(&text)
}

pub fn parse_csv_str(text: &str) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            break; // summary block follows
        }
        if idx == 0 {
            if trimmed != CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    reason: "unrecognized CSV header".into(),
                });
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected 9 fields, got {}", fields.len()),
            });
        }
        rows.push(ExperimentRow {
            sweep_value: parse_scalar("sweep_value", line_no, fields[0])?,
            strategy: StrategyFlags::parse(fields[1])?,
            draw: parse_scalar("draw", line_no, fields[2])?,
            secrecy_sum_rate: parse_scalar("secrecy_sum_rate", line_no, fields[3])?,
            nonsecrecy_sum_rate: parse_scalar("nonsecrecy_sum_rate", line_no, fields[4])?,
            cccp_iterations: parse_scalar("cccp_iterations", line_no, fields[5])?,
            converged: parse_scalar("converged", line_no, fields[6])?,
            rank_gap: parse_scalar("rank_gap", line_no, fields[7])?,
            realization_digest: u64::from_str_radix(fields[8], 16).map_err(|_| Error::Parse {
                line: line_no,
                reason: "bad digest".into(),
            })?,
        });
    }
    Ok(rows)
}

pub fn emit_plot(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    let svg = crate::plot::render_svg(rows)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            base_config: SystemConfig::uniform(1, 2, 1, 1, 2.0, 10.0),
            sweep_variable: SweepVariable::PowerDb,
            sweep_values: vec![0.0, 10.0],
            num_draws: 2,
            master_seed: 7,
            strategies: vec![StrategyFlags::SECURE_MULTIVARIATE, StrategyFlags::SECURE_P2P],
            output_path: PathBuf::from("results.csv"),
        }
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let spec = parse_config_str("num_rus = 2\nnum_ues = 3\n").unwrap();
        assert_eq!(spec.base_config.num_rus, 2);
        assert_eq!(spec.base_config.num_ues, 3);
        assert_eq!(spec.base_config.pathloss_exponent, 3.0);
        assert_eq!(spec.base_config.reference_distance, 50.0);
        assert_eq!(spec.base_config.area_side, 500.0);
        assert_eq!(spec.base_config.weights, vec![1.0; 3]);
        assert_eq!(spec.base_config.power_limit, vec![100.0; 2]);
        assert_eq!(spec.num_draws, 50);
        assert_eq!(spec.strategies.len(), 4);
        assert_eq!(spec.sweep_values.len(), 7);
    }

    #[test]
    fn stream_bound_violation_reports_field() {
        let err =
            parse_config_str("num_rus = 1\nnum_ues = 1\nue_antennas = 2\nstreams = 2\n")
                .unwrap_err();
        match err {
            Error::InvalidConfig { field, reason } => {
                assert_eq!(field, "streams");
                assert!(reason.contains("min(total RU antennas, UE antennas)"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn canonical_round_trip() {
        let mut spec = tiny_spec();
        spec.base_config.fronthaul_capacity = vec![1.5];
        spec.base_config.weights = vec![1.0, 2.0];
        let text = spec.canonical_string();
        let back = parse_config_str(&text).unwrap();
        assert_eq!(back, spec);
        // twice canonical is a fixed point
        assert_eq!(back.canonical_string(), text);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_sweeps() {
        assert!(matches!(
            parse_config_str("num_rus = 1\nnum_ues = 1\nbogus = 3\n"),
            Err(Error::Parse { .. })
        ));
        let err = parse_config_str(
            "num_rus = 1\nnum_ues = 1\nsweep_values = 3,2\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { ref field, .. } if field == "sweep_values"));
        let err = parse_config_str(
            "num_rus = 1\nnum_ues = 2\nsweep_variable = num_ues\nsweep_values = 1.5,2\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { ref field, .. } if field == "sweep_values"));
    }

    #[test]
    fn power_and_db_are_exclusive() {
        assert!(parse_config_str("num_rus = 1\nnum_ues = 1\npower = 10\npower_db = 10\n").is_err());
        let spec = parse_config_str("num_rus = 1\nnum_ues = 1\npower_db = 20\n").unwrap();
        assert!((spec.base_config.power_limit[0] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn single_cell_sweep_counts_rows() {
        let mut spec = tiny_spec();
        spec.sweep_values = vec![10.0];
        spec.num_draws = 1;
        spec.strategies = vec![StrategyFlags::SECURE_MULTIVARIATE];
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.rows.len(), 1);
        assert_eq!(result.summaries.len(), 1);
        assert_eq!(result.summaries[0].draws_used, 1);
        assert_eq!(result.summaries[0].stderr_secrecy_sum_rate, 0.0);
    }

    #[test]
    fn sweep_is_deterministic_and_paired() {
        let spec = tiny_spec();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(csv_string(&a), csv_string(&b));
        // paired draws: identical digests across strategies of a cell
        for &value in &spec.sweep_values {
            for draw in 0..spec.num_draws {
                let digests: BTreeSet<u64> = a
                    .rows
                    .iter()
                    .filter(|r| r.sweep_value == value && r.draw == draw)
                    .map(|r| r.realization_digest)
                    .collect();
                assert_eq!(digests.len(), 1, "strategies saw different draws");
            }
        }
    }

    #[test]
    fn num_ues_sweep_replicates_template() {
        let mut spec = tiny_spec();
        spec.sweep_variable = SweepVariable::NumUes;
        spec.sweep_values = vec![1.0, 3.0];
        let config = spec.config_for(3.0).unwrap();
        assert_eq!(config.num_ues, 3);
        assert_eq!(config.ue_antennas, vec![1; 3]);
        assert_eq!(config.weights, vec![1.0; 3]);
    }

    #[test]
    fn csv_round_trip_and_formatting() {
        let mut spec = tiny_spec();
        spec.sweep_values = vec![0.0];
        spec.num_draws = 1;
        let result = run_sweep(&spec).unwrap();
        let text = csv_string(&result);
        assert!(text.starts_with(CSV_HEADER));
        assert!(text.contains("# summary"));
        // fixed 6-decimal fields
        let first_row = text.lines().nth(1).unwrap();
        let sweep_field = first_row.split(',').next().unwrap();
        assert_eq!(sweep_field, "0.000000");
        // parsed rows re-serialize to the identical row lines
        let rows = parse_csv_str(&text).unwrap();
        assert_eq!(rows.len(), result.rows.len());
        for (parsed, original) in rows.iter().zip(&result.rows) {
            assert_eq!(csv_row(parsed), csv_row(original));
        }
    }

    #[test]
    fn empty_rows_emit_header_only_csv() {
        let result = SweepResult {
            rows: vec![],
            summaries: vec![],
        };
        let text = csv_string(&result);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some(""));
        assert_eq!(lines.next(), Some("# summary"));
    }
}
