//! Batch execution of an [`ExperimentConfig`] over seeds and methods.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dirflow_core::controller::{ClosedLoop, ControllerParams, FormationLoop, MatchingLoop};
use dirflow_core::graph::Partition;
use dirflow_core::objectives::FormationSpec;
use dirflow_core::sim::{formation_error, input_norm, matched_pairs, simulate, RunStatus, RunSummary};

use crate::config::{ExperimentConfig, GraphSource, Method, Scenario, SCHEMA_VERSION};
use crate::error::ConfigError;
use crate::sampler::sample_state;
use crate::stats::{BoxStats, Histogram};

/// Worker count override for batch runs.
pub const WORKERS_ENV: &str = "DIRFLOW_WORKERS";

/// One simulation's outcome, without timing so summaries are reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub case: String,
    pub method: Method,
    pub seed: u64,
    /// `None` for matching runs and for runs whose final state is not finite.
    pub final_formation_error: Option<f64>,
    /// `None` when the final input is not finite.
    pub final_input_norm: Option<f64>,
    pub matched_pairs: Option<usize>,
    pub converged: bool,
    pub status: RunStatus,
}

/// Aggregates for one `(case, method)` group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub case: String,
    pub method: Method,
    pub runs: usize,
    /// Runs that did not complete (diverged or tripped the descent monitor).
    pub incomplete: usize,
    pub converged: usize,
    /// Box statistics over the runs with finite metrics.
    pub formation_error: Option<BoxStats>,
    pub input_norm: Option<BoxStats>,
    /// `pair_histogram.counts[k]` runs ended with `k` matched pairs.
    pub pair_histogram: Option<Histogram>,
    pub mean_pairs: Option<f64>,
    /// Fraction of runs that matched every minority agent.
    pub full_match_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub groups: Vec<GroupSummary>,
    /// Sorted by case, method, seed.
    pub runs: Vec<RunRecord>,
}

impl BatchSummary {
    pub fn group(&self, case: &str, method: Method) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| g.case == case && g.method == method)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Summary plus the per-run records with wall-clock times.
#[derive(Debug, Clone)]
pub struct Batch {
    pub summary: BatchSummary,
    pub runs: Vec<RunSummary>,
}

impl Batch {
    /// Writes `summary.json`, `runs.jsonl` (one [`RunSummary`] per line, with
    /// the case label) and the plot-data CSVs into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.json"), self.summary.to_json())?;
        let mut lines = String::new();
        for (rec, run) in self.summary.runs.iter().zip(&self.runs) {
            let mut v = serde_json::to_value(run).expect("run serializes");
            v["case"] = serde_json::Value::String(rec.case.clone());
            lines.push_str(&v.to_string());
            lines.push('\n');
        }
        std::fs::write(dir.join("runs.jsonl"), lines)?;
        crate::plot::emit_plot_data(&self.summary, dir)?;
        Ok(())
    }
}

/// Case label of a matching batch.
pub fn delta_label(delta_a: f64) -> String {
    format!("delta_a={delta_a}")
}

struct Case {
    label: String,
    loops: Vec<(Method, Box<dyn ClosedLoop>)>,
    full_spec: Option<FormationSpec>,
}

fn build_cases(cfg: &ExperimentConfig, partition: &Partition) -> Result<Vec<Case>, ConfigError> {
    let g = &cfg.gains;
    let params = ControllerParams::uniform(partition.clone(), g.lambda, g.eta, g.kappa, g.mu)
        .map_err(|e| ConfigError::Field { field: "gains".into(), msg: e.to_string() })?;
    let nu = cfg.nu(partition);
    let core = |e: dirflow_core::Error| ConfigError::Field { field: "graph".into(), msg: e.to_string() };
    match &cfg.graph {
        GraphSource::Explicit { .. } => {
            let net = cfg.network()?;
            let shape = cfg.shape().expect("explicit graph has a shape");
            let mut loops: Vec<(Method, Box<dyn ClosedLoop>)> = Vec::new();
            for &m in &cfg.methods {
                let lp = FormationLoop::new(net.clone(), &shape, m.kind(), params.clone(), nu.clone()).map_err(core)?;
                loops.push((m, Box::new(lp)));
            }
            let full = FormationSpec::complete_from_shape(&shape).map_err(core)?;
            Ok(vec![Case { label: "fixed".into(), loops, full_spec: Some(full) }])
        }
        GraphSource::TwoRange { delta_a, delta_b } => delta_a
            .iter()
            .map(|&da| {
                let mut loops: Vec<(Method, Box<dyn ClosedLoop>)> = Vec::new();
                for &m in &cfg.methods {
                    let lp = MatchingLoop::new(m.kind(), params.clone(), nu.clone(), da, *delta_b, cfg.tie).map_err(core)?;
                    loops.push((m, Box::new(lp)));
                }
                Ok(Case { label: delta_label(da), loops, full_spec: None })
            })
            .collect(),
    }
}

/// Worker count: `DIRFLOW_WORKERS` if set and positive, else rayon's default.
pub fn worker_count() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&w: &usize| w > 0)
}

/// Runs every `(case, method, seed)` combination. Divergent runs are recorded,
/// not fatal. The summary depends only on the config.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<Batch, ConfigError> {
    cfg.validate()?;
    let partition = cfg.partition()?;
    let cases = build_cases(cfg, &partition)?;
    let mut seeds = cfg.seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let minority = partition.group_a().len().min(partition.group_b().len());

    let mut jobs: Vec<(usize, usize, u64)> = Vec::new();
    for (c, case) in cases.iter().enumerate() {
        for m in 0..case.loops.len() {
            jobs.extend(seeds.iter().map(|&s| (c, m, s)));
        }
    }

    let run_one = |&(c, m, seed): &(usize, usize, u64)| -> (RunRecord, RunSummary) {
        let case = &cases[c];
        let (method, lp) = &case.loops[m];
        let x0 = sample_state(seed, cfg.n, &cfg.sampler);
        let mut sim = cfg.sim.clone();
        sim.seed = seed;
        let start = Instant::now();
        let traj = simulate(&x0, lp.as_ref(), &sim).expect("config validated before the batch");
        let wall_time = start.elapsed().as_secs_f64();
        let x = traj.final_state();
        let finite = x.is_finite();
        let err = case.full_spec.as_ref().filter(|_| finite).map(|spec| formation_error(x, spec).expect("complete spec"));
        let pairs = match (&case.full_spec, finite) {
            (Some(_), _) => None,
            (None, true) => Some(matched_pairs(x, &partition, cfg.metrics.match_tol, cfg.tie).0),
            (None, false) => Some(0),
        };
        let converged = traj.completed()
            && match (&case.full_spec, err, pairs) {
                (Some(_), Some(e), _) => e < cfg.metrics.formation_tol,
                (None, _, Some(p)) => p == minority,
                _ => false,
            };
        let unorm = Some(input_norm(traj.final_input())).filter(|v| v.is_finite());
        let record = RunRecord {
            case: case.label.clone(),
            method: *method,
            seed,
            final_formation_error: err,
            final_input_norm: unorm,
            matched_pairs: pairs,
            converged,
            status: traj.status.clone(),
        };
        let summary = RunSummary {
            seed,
            method: method.name().into(),
            final_formation_error: err,
            final_input_norm: unorm.unwrap_or(f64::NAN),
            matched_pairs: pairs,
            converged,
            status: traj.status,
            wall_time,
        };
        (record, summary)
    };

    let results: Vec<(RunRecord, RunSummary)> = match worker_count() {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool")
            .install(|| jobs.par_iter().map(run_one).collect()),
        None => jobs.par_iter().map(run_one).collect(),
    };

    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (&results[a].0, &results[b].0);
        (case_index(&cases, &ra.case), ra.method, ra.seed).cmp(&(case_index(&cases, &rb.case), rb.method, rb.seed))
    });
    let (records, runs): (Vec<RunRecord>, Vec<RunSummary>) = order.into_iter().map(|k| results[k].clone()).unzip();

    let mut groups = Vec::new();
    for case in &cases {
        for (method, _) in &case.loops {
            let rs: Vec<&RunRecord> = records.iter().filter(|r| r.case == case.label && r.method == *method).collect();
            groups.push(aggregate(&case.label, *method, &rs, case.full_spec.is_some(), minority, cfg.metrics.whisker));
        }
    }
    Ok(Batch { summary: BatchSummary { schema_version: SCHEMA_VERSION, scenario: cfg.scenario, groups, runs: records }, runs })
}

fn case_index(cases: &[Case], label: &str) -> usize {
    cases.iter().position(|c| c.label == label).expect("known case")
}

/// Aggregates one group. Sorting inside the statistics makes the result
/// independent of run order.
pub fn aggregate(case: &str, method: Method, runs: &[&RunRecord], formation: bool, minority: usize, whisker: f64) -> GroupSummary {
    let errors: Vec<f64> = runs.iter().filter_map(|r| r.final_formation_error).collect();
    let norms: Vec<f64> = runs.iter().filter_map(|r| r.final_input_norm).collect();
    let pairs: Option<Vec<usize>> = if formation { None } else { Some(runs.iter().map(|r| r.matched_pairs.unwrap_or(0)).collect()) };
    let histogram = pairs.as_ref().map(|p| Histogram::of_counts(p, minority));
    GroupSummary {
        case: case.to_string(),
        method,
        runs: runs.len(),
        incomplete: runs.iter().filter(|r| r.status != RunStatus::Completed).count(),
        converged: runs.iter().filter(|r| r.converged).count(),
        formation_error: Some(errors).filter(|e| formation && !e.is_empty()).map(|e| BoxStats::of(&e, whisker)),
        input_norm: Some(norms).filter(|v| !v.is_empty()).map(|v| BoxStats::of(&v, whisker)),
        mean_pairs: pairs.as_ref().filter(|p| !p.is_empty()).map(|p| p.iter().sum::<usize>() as f64 / p.len() as f64),
        full_match_rate: pairs
            .as_ref()
            .filter(|p| !p.is_empty())
            .map(|p| p.iter().filter(|&&k| k == minority).count() as f64 / p.len() as f64),
        pair_histogram: histogram,
    }
}
