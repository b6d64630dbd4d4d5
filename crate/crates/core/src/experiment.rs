//! Scheme x frame grids over a swept dimension, with CSV output.
//!
//! For every (sweep value, frame) one channel is drawn and shared by all
//! schemes, so scheme comparisons are paired. Rows are produced in
//! `(sweep value, frame, scheme)` order regardless of execution mode.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Deserialize;

use crate::baselines::{baseline_alimari, baseline_mollanoori_fairness, baseline_mollanoori_throughput};
use crate::error::ExperimentError;
use crate::exec::{self, ExecMode};
use crate::gp::{run_gp, GpOptions};
use crate::iwf::{run_iwf, IwfOptions};
use crate::matching::{run_matching_with, MatchingOptions};
use crate::model::{evaluate, generate_channel, AllocationReport, Assignment, ChannelState, SystemConfig};
use crate::oracle::{self, OracleLimits};
use crate::seed::frame_seed;
use crate::stats::Summary;

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const DEFAULT_FRAMES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    MatchingIwf,
    MatchingGp,
    MatchingOnly,
    Alimari,
    MollanooriThroughput,
    MollanooriFairness,
    Oracle,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::MatchingIwf,
        Scheme::MatchingGp,
        Scheme::MatchingOnly,
        Scheme::Alimari,
        Scheme::MollanooriThroughput,
        Scheme::MollanooriFairness,
        Scheme::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::MatchingIwf => "matching+iwf",
            Scheme::MatchingGp => "matching+gp",
            Scheme::MatchingOnly => "matching-only",
            Scheme::Alimari => "alimari",
            Scheme::MollanooriThroughput => "mollanoori-thr",
            Scheme::MollanooriFairness => "mollanoori-pf",
            Scheme::Oracle => "oracle",
        }
    }

    /// Parse a comma-separated list such as `matching+iwf,alimari`.
    pub fn parse_list(s: &str) -> Result<Vec<Scheme>, ExperimentError> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ExperimentError::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepVariable {
    /// Number of users.
    M,
    /// Maximum users per subchannel.
    K,
    #[default]
    None,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::M => "M",
            SweepVariable::K => "K",
            SweepVariable::None => "none",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "M" | "m" => Ok(SweepVariable::M),
            "K" | "k" => Ok(SweepVariable::K),
            "none" | "" => Ok(SweepVariable::None),
            other => Err(ExperimentError::UnknownSweep(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub schemes: Vec<Scheme>,
    pub sweep: SweepVariable,
    /// Ignored when `sweep` is `None`.
    pub values: Vec<usize>,
    pub frames: usize,
    pub base: SystemConfig,
    pub out_dir: PathBuf,
    pub mode: ExecMode,
    pub jobs: Option<usize>,
    pub oracle_limits: OracleLimits,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            schemes: vec![
                Scheme::MatchingIwf,
                Scheme::MatchingGp,
                Scheme::Alimari,
                Scheme::MollanooriThroughput,
                Scheme::MollanooriFairness,
            ],
            sweep: SweepVariable::None,
            values: Vec::new(),
            frames: DEFAULT_FRAMES,
            base: SystemConfig::default(),
            out_dir: PathBuf::from("results"),
            mode: ExecMode::default(),
            jobs: None,
            oracle_limits: OracleLimits::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.schemes.is_empty() {
            return Err(ExperimentError::Invalid("scheme list is empty".into()));
        }
        if self.frames == 0 {
            return Err(ExperimentError::Invalid("frames must be positive".into()));
        }
        if self.sweep != SweepVariable::None {
            if self.values.is_empty() {
                return Err(ExperimentError::Invalid(format!("sweep over {} has no values", self.sweep)));
            }
            if self.values.contains(&0) {
                return Err(ExperimentError::Invalid("sweep values must be positive".into()));
            }
        }
        for (_, cfg) in self.points()? {
            cfg.validate()?;
        }
        Ok(())
    }

    /// Sweep values paired with the system configuration used at each.
    pub fn points(&self) -> Result<Vec<(usize, SystemConfig)>, ExperimentError> {
        match self.sweep {
            SweepVariable::None => Ok(vec![(0, self.base.clone())]),
            SweepVariable::M => self
                .values
                .iter()
                .map(|&v| Ok((v, self.base.with_num_users(v)?)))
                .collect(),
            SweepVariable::K => Ok(self
                .values
                .iter()
                .map(|&v| {
                    (v, SystemConfig {
                        max_per_subchannel: v,
                        ..self.base.clone()
                    })
                })
                .collect()),
        }
    }

    /// Seed stream of the `index`-th sweep value.
    ///
    /// Sweeping `K` keeps the user count, so all values share stream 0 and see
    /// the same channels frame by frame.
    pub fn stream(&self, index: usize) -> u64 {
        match self.sweep {
            SweepVariable::M => index as u64,
            SweepVariable::K | SweepVariable::None => 0,
        }
    }
}

/// Channel of one frame, with the seed it was drawn from.
pub fn frame_channel(
    cfg: &SystemConfig,
    stream: u64,
    frame: u64,
) -> Result<(u64, ChannelState), ExperimentError> {
    let seed = frame_seed(cfg.rng_seed, stream, frame);
    let seeded = SystemConfig {
        rng_seed: seed,
        ..cfg.clone()
    };
    Ok((seed, generate_channel(&seeded, 0)?))
}

/// Allocation produced by one scheme on one frame.
#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub assignment: Assignment,
    pub report: AllocationReport,
    pub matching_passes: Option<usize>,
    pub power_iterations: Option<usize>,
}

/// Run a single scheme. Errors are returned as text for the errors column.
pub fn run_scheme(
    scheme: Scheme,
    channel: &ChannelState,
    cfg: &SystemConfig,
    limits: &OracleLimits,
) -> Result<SchemeRun, String> {
    let mut matching_passes = None;
    let mut power_iterations = None;
    let mut trace: Vec<(usize, f64)> = Vec::new();
    let matched = |passes: &mut Option<usize>, trace: &mut Vec<(usize, f64)>| {
        let out = run_matching_with(channel, cfg, &MatchingOptions::default());
        *passes = Some(out.outer_iterations);
        *trace = out.trace;
        out.assignment
    };
    let assignment = match scheme {
        Scheme::MatchingOnly => matched(&mut matching_passes, &mut trace),
        Scheme::MatchingIwf => {
            let asg = matched(&mut matching_passes, &mut trace);
            let out = run_iwf(channel, &asg, cfg, &IwfOptions::default());
            power_iterations = Some(out.sweeps);
            trace = out.trace.iter().copied().enumerate().collect();
            out.assignment
        }
        Scheme::MatchingGp => {
            let asg = matched(&mut matching_passes, &mut trace);
            let out = run_gp(channel, &asg, cfg, &GpOptions::default());
            power_iterations = Some(out.rounds);
            trace = out.trace.iter().copied().enumerate().collect();
            out.assignment
        }
        Scheme::Alimari => {
            let out = baseline_alimari(channel, cfg);
            power_iterations = Some(out.power_iterations);
            out.assignment
        }
        Scheme::MollanooriThroughput => baseline_mollanoori_throughput(channel, cfg).assignment,
        Scheme::MollanooriFairness => baseline_mollanoori_fairness(channel, cfg).assignment,
        Scheme::Oracle => {
            oracle::oracle_assignment(channel, cfg, limits)
                .map_err(|e| e.to_string())?
                .assignment
        }
    };
    let mut report = evaluate(channel, &assignment, cfg);
    report.convergence_trace = trace;
    Ok(SchemeRun {
        assignment,
        report,
        matching_passes,
        power_iterations,
    })
}

/// One (scheme, sweep value, frame) record.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub sweep_value: usize,
    pub frame: usize,
    pub seed: u64,
    pub num_users: usize,
    pub num_subchannels: usize,
    pub max_per_subchannel: usize,
    /// Absent when the scheme or the frame failed; see `error`.
    pub report: Option<AllocationReport>,
    pub matching_passes: Option<usize>,
    pub power_iterations: Option<usize>,
    pub wall_time_s: f64,
    pub error: Option<String>,
}

/// Mean and 95% interval of the main metrics for one (scheme, sweep value).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub scheme: Scheme,
    pub sweep_value: usize,
    pub frames: usize,
    pub errors: usize,
    pub throughput: Summary,
    pub pf_objective: Summary,
    pub resource_efficiency: Summary,
    pub matching_passes: Summary,
    pub power_iterations: Summary,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<AggregateRow>,
}

/// Compute every row without touching the filesystem.
pub fn compute_rows(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, ExperimentError> {
    spec.validate()?;
    let points = spec.points()?;
    let frames = spec.frames;
    let nested = exec::with_jobs(spec.jobs, || {
        exec::map_range(points.len() * frames, spec.mode, |job| {
            let (index, frame) = (job / frames, job % frames);
            let (value, cfg) = &points[index];
            frame_rows(spec, *value, cfg, spec.stream(index), frame)
        })
    });
    Ok(nested.into_iter().flatten().collect())
}

fn frame_rows(spec: &ExperimentSpec, value: usize, cfg: &SystemConfig, stream: u64, frame: usize) -> Vec<ResultRow> {
    let blank = |scheme: Scheme, seed: u64| ResultRow {
        scheme,
        sweep_value: value,
        frame,
        seed,
        num_users: cfg.num_users,
        num_subchannels: cfg.num_subchannels,
        max_per_subchannel: cfg.max_per_subchannel,
        report: None,
        matching_passes: None,
        power_iterations: None,
        wall_time_s: 0.0,
        error: None,
    };
    let enumerable = oracle::is_enumerable(cfg, &spec.oracle_limits);
    let schemes = spec
        .schemes
        .iter()
        .copied()
        .filter(|&s| s != Scheme::Oracle || enumerable);
    let (seed, channel) = match frame_channel(cfg, stream, frame as u64) {
        Ok(v) => v,
        Err(e) => {
            let seed = frame_seed(cfg.rng_seed, stream, frame as u64);
            return schemes
                .map(|s| ResultRow {
                    error: Some(e.to_string()),
                    ..blank(s, seed)
                })
                .collect();
        }
    };
    // Oracle enumeration is already parallel; nested pools would only add overhead.
    let limits = OracleLimits {
        mode: ExecMode::Sequential,
        ..spec.oracle_limits
    };
    schemes
        .map(|scheme| {
            let start = Instant::now();
            let result = run_scheme(scheme, &channel, cfg, &limits);
            let wall_time_s = start.elapsed().as_secs_f64();
            match result {
                Ok(run) => ResultRow {
                    report: Some(run.report),
                    matching_passes: run.matching_passes,
                    power_iterations: run.power_iterations,
                    wall_time_s,
                    ..blank(scheme, seed)
                },
                Err(e) => ResultRow {
                    wall_time_s,
                    error: Some(e),
                    ..blank(scheme, seed)
                },
            }
        })
        .collect()
}

/// Group rows by (scheme, sweep value) in first-appearance order and summarize.
pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut keys: Vec<(Scheme, usize)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.scheme, r.sweep_value)) {
            keys.push((r.scheme, r.sweep_value));
        }
    }
    keys.into_iter()
        .map(|(scheme, sweep_value)| {
            let group: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.sweep_value == sweep_value)
                .collect();
            let ok: Vec<&AllocationReport> = group.iter().filter_map(|r| r.report.as_ref()).collect();
            let metric = |f: &dyn Fn(&AllocationReport) -> f64| Summary::of(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
            let counts = |f: &dyn Fn(&ResultRow) -> Option<usize>| {
                Summary::of(&group.iter().filter_map(|r| f(r)).map(|v| v as f64).collect::<Vec<_>>())
            };
            AggregateRow {
                scheme,
                sweep_value,
                frames: group.len(),
                errors: group.len() - ok.len(),
                throughput: metric(&|r| r.system_throughput),
                pf_objective: metric(&|r| r.pf_objective),
                resource_efficiency: metric(&|r| r.resource_efficiency),
                matching_passes: counts(&|r| r.matching_passes),
                power_iterations: counts(&|r| r.power_iterations),
            }
        })
        .collect()
}

/// Compute all rows, write the three CSV files into `spec.out_dir`, and return them.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    let rows = compute_rows(spec)?;
    let aggregates = aggregate(&rows);
    fs::create_dir_all(&spec.out_dir).map_err(|source| ExperimentError::Io {
        path: spec.out_dir.clone(),
        source,
    })?;
    write_results(&spec.out_dir.join(RESULTS_FILE), spec.sweep, &rows)?;
    write_aggregates(&spec.out_dir.join(AGGREGATE_FILE), spec.sweep, &aggregates)?;
    write_timings(&spec.out_dir.join(TIMINGS_FILE), spec.sweep, &rows)?;
    Ok(ExperimentOutput { rows, aggregates })
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>, ExperimentError> {
    let file = fs::File::create(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

/// Results table. Wall times live in the timings file so this one is reproducible.
pub fn write_results(path: &Path, sweep: SweepVariable, rows: &[ResultRow]) -> Result<(), ExperimentError> {
    let max_users = rows.iter().map(|r| r.num_users).max().unwrap_or(0);
    let max_subchannels = rows.iter().map(|r| r.num_subchannels).max().unwrap_or(0);
    let mut w = writer(path)?;
    let mut header: Vec<String> = [
        "scheme",
        "sweep",
        "sweep_value",
        "frame",
        "seed",
        "M",
        "N",
        "K",
        "system_throughput",
        "pf_objective",
        "resource_efficiency",
        "matching_passes",
        "power_iterations",
        "error",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..max_users).map(|m| format!("rate_{m}")));
    header.extend((0..max_subchannels).map(|n| format!("load_{n}")));
    w.write_record(&header)?;
    for r in rows {
        let rep = r.report.as_ref();
        let mut rec = vec![
            r.scheme.to_string(),
            sweep.to_string(),
            r.sweep_value.to_string(),
            r.frame.to_string(),
            r.seed.to_string(),
            r.num_users.to_string(),
            r.num_subchannels.to_string(),
            r.max_per_subchannel.to_string(),
            opt(rep.map(|x| x.system_throughput)),
            opt(rep.map(|x| x.pf_objective)),
            opt(rep.map(|x| x.resource_efficiency)),
            opt(r.matching_passes),
            opt(r.power_iterations),
            r.error.clone().unwrap_or_default(),
        ];
        rec.extend((0..max_users).map(|m| opt(rep.and_then(|x| x.per_user_rate.get(m)))));
        rec.extend((0..max_subchannels).map(|n| opt(rep.and_then(|x| x.per_subchannel_load.get(n)))));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_aggregates(path: &Path, sweep: SweepVariable, aggs: &[AggregateRow]) -> Result<(), ExperimentError> {
    let mut w = writer(path)?;
    let mut header = vec!["scheme", "sweep", "sweep_value", "frames", "errors"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    for metric in AGGREGATE_METRICS {
        header.push(format!("{metric}_mean"));
        header.push(format!("{metric}_ci95"));
    }
    w.write_record(&header)?;
    for a in aggs {
        let mut rec = vec![
            a.scheme.to_string(),
            sweep.to_string(),
            a.sweep_value.to_string(),
            a.frames.to_string(),
            a.errors.to_string(),
        ];
        for s in [
            a.throughput,
            a.pf_objective,
            a.resource_efficiency,
            a.matching_passes,
            a.power_iterations,
        ] {
            rec.push(fmt_stat(s.mean));
            rec.push(fmt_stat(s.ci95));
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Metric names in aggregate column order.
pub const AGGREGATE_METRICS: [&str; 5] = [
    "system_throughput",
    "pf_objective",
    "resource_efficiency",
    "matching_passes",
    "power_iterations",
];

fn fmt_stat(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

pub fn write_timings(path: &Path, sweep: SweepVariable, rows: &[ResultRow]) -> Result<(), ExperimentError> {
    let mut w = writer(path)?;
    w.write_record(["scheme", "sweep", "sweep_value", "frame", "wall_time_s"])?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            sweep.to_string(),
            r.sweep_value.to_string(),
            r.frame.to_string(),
            r.wall_time_s.to_string(),
        ])?;
    }
    w.flush().map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One recomputed aggregate cell: `(scheme, sweep_value, metric, mean, ci95)`.
pub type RecomputedCell = (String, String, String, f64, f64);

/// Recompute per-group means and interval half-widths from a results file.
///
/// Entries come back in file order.
/// Only the results file is read, so comparing against the aggregate file
/// checks the whole write path.
pub fn reaggregate_results(path: &Path) -> Result<Vec<RecomputedCell>, ExperimentError> {
    let mut rd = csv::Reader::from_path(path)?;
    let headers = rd.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ExperimentError::Invalid(format!("results file lacks column {name}")))
    };
    let scheme_col = col("scheme")?;
    let value_col = col("sweep_value")?;
    let metric_cols: Vec<usize> = AGGREGATE_METRICS.iter().map(|m| col(m)).collect::<Result<_, _>>()?;

    type Group = ((String, String), Vec<Vec<f64>>);
    let mut groups: Vec<Group> = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let key = (rec[scheme_col].to_string(), rec[value_col].to_string());
        let idx = match groups.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                groups.push((key, vec![Vec::new(); metric_cols.len()]));
                groups.len() - 1
            }
        };
        for (j, &c) in metric_cols.iter().enumerate() {
            if let Ok(v) = rec[c].parse::<f64>() {
                groups[idx].1[j].push(v);
            }
        }
    }
    let mut out = Vec::new();
    for ((scheme, value), samples) in groups {
        for (metric, xs) in AGGREGATE_METRICS.iter().zip(samples) {
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            let half = if xs.len() < 2 {
                f64::NAN
            } else {
                student_t_975(xs.len() - 1) * (var / n).sqrt()
            };
            out.push((scheme.clone(), value.clone(), metric.to_string(), mean, half));
        }
    }
    Ok(out)
}

fn student_t_975(dof: usize) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    StudentsT::new(0.0, 1.0, dof as f64)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN)
}

/// Compare an aggregate file against a re-aggregation of the results file.
///
/// Returns the number of checked cells or a description of the first mismatch.
pub fn verify_aggregates(out_dir: &Path, rel_tol: f64) -> Result<usize, ExperimentError> {
    let recomputed = reaggregate_results(&out_dir.join(RESULTS_FILE))?;
    let mut rd = csv::Reader::from_path(out_dir.join(AGGREGATE_FILE))?;
    let headers = rd.headers()?.clone();
    let pos = |name: &str| headers.iter().position(|h| h == name);
    let mut checked = 0;
    for rec in rd.records() {
        let rec = rec?;
        for metric in AGGREGATE_METRICS {
            let (Some(mc), Some(cc)) = (pos(&format!("{metric}_mean")), pos(&format!("{metric}_ci95"))) else {
                return Err(ExperimentError::Invalid(format!("aggregate file lacks {metric} columns")));
            };
            let entry = recomputed
                .iter()
                .find(|e| e.0 == rec[0] && e.1 == rec[2] && e.2 == metric)
                .ok_or_else(|| ExperimentError::Invalid(format!("no results for {} at {}", &rec[0], &rec[2])))?;
            for (cell, expected) in [(&rec[mc], entry.3), (&rec[cc], entry.4)] {
                let got: f64 = if cell.is_empty() { f64::NAN } else {
                    cell.parse().map_err(|_| ExperimentError::Invalid(format!("bad number {cell:?}")))?
                };
                let same = (got.is_nan() && expected.is_nan())
                    || (got - expected).abs() <= rel_tol * expected.abs().max(1.0);
                if !same {
                    return Err(ExperimentError::Invalid(format!(
                        "{} {} {metric}: aggregate {got} vs recomputed {expected}",
                        &rec[0], &rec[2]
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Flat key-value run file: every `SystemConfig` field plus the experiment keys
/// `schemes`, `sweep`, `values`, `frames`, `out_dir`.
///
/// `max_power` may be a single number applied to every user.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentKeys {
    schemes: Option<SchemeList>,
    sweep: Option<String>,
    values: Option<Vec<usize>>,
    frames: Option<usize>,
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SchemeList {
    One(String),
    Many(Vec<String>),
}

const EXPERIMENT_KEYS: [&str; 5] = ["schemes", "sweep", "values", "frames", "out_dir"];

/// Parse a run file into an experiment spec.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ExperimentError> {
    let mut table: toml::Table = text.parse()?;
    let mut experiment = toml::Table::new();
    for key in EXPERIMENT_KEYS {
        if let Some(v) = table.remove(key) {
            experiment.insert(key.to_string(), v);
        }
    }
    let scalar_budget = match table.get("max_power") {
        Some(toml::Value::Float(p)) => Some(*p),
        Some(toml::Value::Integer(p)) => Some(*p as f64),
        _ => None,
    };
    if scalar_budget.is_some() {
        table.remove("max_power");
    }
    let mut base: SystemConfig = toml::Value::Table(table).try_into()?;
    if let Some(p) = scalar_budget {
        base.max_power = vec![p; base.num_users];
    } else if base.max_power.len() != base.num_users && base.uniform_budget().is_some() {
        // Default budgets follow the configured user count.
        let p = base.max_power[0];
        base.max_power = vec![p; base.num_users];
    }
    let keys: ExperimentKeys = toml::Value::Table(experiment).try_into()?;
    let mut spec = ExperimentSpec {
        base,
        ..ExperimentSpec::default()
    };
    if let Some(list) = keys.schemes {
        spec.schemes = match list {
            SchemeList::One(s) => Scheme::parse_list(&s)?,
            SchemeList::Many(v) => v.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        };
    }
    if let Some(s) = keys.sweep {
        spec.sweep = s.parse()?;
    }
    if let Some(v) = keys.values {
        spec.values = v;
    }
    if let Some(f) = keys.frames {
        spec.frames = f;
    }
    if let Some(d) = keys.out_dir {
        spec.out_dir = d;
    }
    Ok(spec)
}

pub fn load_config(path: &Path) -> Result<ExperimentSpec, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}
