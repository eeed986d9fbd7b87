//! Experiment configuration documents and the bundled presets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dirflow_core::controller::ControllerKind;
use dirflow_core::graph::{generalized_partition, Partition};
use dirflow_core::objectives::TiePolicy;
use dirflow_core::sim::{Integrator, SimConfig};
use dirflow_core::{DirectedNetwork, StateMatrix};

use crate::error::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Formation4,
    Formation6,
    Matching,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Proposed,
    /// Gradient flow of `V_ud`.
    PrevA,
    /// Gradient flow that also descends unidirectional edges.
    PrevB,
}

impl Method {
    pub fn kind(self) -> ControllerKind {
        match self {
            Method::Proposed => ControllerKind::Proposed,
            Method::PrevA => ControllerKind::GradientFlow,
            Method::PrevB => ControllerKind::NaiveDirected,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::PrevA => "prev_a",
            Method::PrevB => "prev_b",
        }
    }
}

/// Where the sensing graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    /// Fixed digraph with 1-based directed edges `[tail, head]` and the
    /// desired shape whose pairwise distances define every `d_ij`.
    Explicit { edges: Vec<[usize; 2]>, shape: Vec<Vec<f64>> },
    /// Two-range proximity digraph; one batch per entry of `delta_a`.
    TwoRange { delta_a: Vec<f64>, delta_b: f64 },
}

/// Controller gains, uniform over the agents they apply to. `nu_a`/`nu_b` are
/// the baseline gains on group A and group B agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gains {
    pub lambda: f64,
    pub eta: f64,
    pub kappa: f64,
    pub mu: f64,
    pub nu_a: f64,
    pub nu_b: f64,
}

/// Independent uniform draws per coordinate: coordinate `k` of every agent is
/// drawn from `[lo[k], hi[k])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl SamplerConfig {
    pub fn square(dim: usize, half_width: f64) -> Self {
        Self { lo: vec![-half_width; dim], hi: vec![half_width; dim] }
    }
}

/// Either a seed count (`0..count`) or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Seeds {
    Count(u64),
    List(Vec<u64>),
}

impl Seeds {
    pub fn to_vec(&self) -> Vec<u64> {
        match self {
            Seeds::Count(c) => (0..*c).collect(),
            Seeds::List(v) => v.clone(),
        }
    }
}

/// Metrics are taken on the final state at `sim.t_final`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfig {
    /// A pair counts as matched below this distance.
    pub match_tol: f64,
    /// A formation run counts as converged below this formation error.
    pub formation_tol: f64,
    /// Box-plot whiskers reach `whisker · IQR` beyond the quartiles.
    pub whisker: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self { match_tol: 1e-2, formation_tol: 1e-3, whisker: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub n: usize,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// 1-based members of group A. Formation configs may omit it, in which
    /// case the tails of the unidirectional edges are used.
    #[serde(default)]
    pub group_a: Option<Vec<usize>>,
    #[serde(default)]
    pub tie: TiePolicy,
    pub graph: GraphSource,
    pub gains: Gains,
    pub sampler: SamplerConfig,
    pub seeds: Seeds,
    pub sim: SimConfig,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub metrics: MetricConfig,
}

fn default_dim() -> usize {
    2
}

impl ExperimentConfig {
    /// Reads JSON, or TOML when the extension is `.toml`.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        let cfg = if path.extension().is_some_and(|e| e == "toml") { Self::from_toml(&text)? } else { Self::from_json(&text)? };
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let field = |name: &str, msg: String| Err(ConfigError::Field { field: name.to_string(), msg });
        if self.schema_version != SCHEMA_VERSION {
            return field("schema_version", format!("expected {SCHEMA_VERSION}, got {}", self.schema_version));
        }
        if self.n == 0 {
            return field("n", "at least one agent is required".into());
        }
        if self.dim == 0 {
            return field("dim", "dimension must be positive".into());
        }
        if self.sampler.lo.len() != self.dim || self.sampler.hi.len() != self.dim {
            return field("sampler", format!("bounds need {} entries per side", self.dim));
        }
        for (k, (lo, hi)) in self.sampler.lo.iter().zip(&self.sampler.hi).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return field("sampler", format!("coordinate {} has bounds [{lo}, {hi}]", k + 1));
            }
        }
        if let Some(a) = &self.group_a {
            if let Some(bad) = a.iter().find(|&&i| i == 0 || i > self.n) {
                return field("group_a", format!("agent {bad} outside 1..={}", self.n));
            }
        }
        let g = &self.gains;
        for (name, v) in [("gains.lambda", g.lambda), ("gains.eta", g.eta), ("gains.mu", g.mu), ("gains.nu_a", g.nu_a), ("gains.nu_b", g.nu_b)] {
            if !(v > 0.0 && v.is_finite()) {
                return field(name, format!("must be positive, got {v}"));
            }
        }
        if !(g.kappa >= 0.0 && g.kappa.is_finite()) {
            return field("gains.kappa", format!("must be nonnegative, got {}", g.kappa));
        }
        if self.seeds.to_vec().is_empty() {
            return field("seeds", "no seeds to run".into());
        }
        if self.methods.is_empty() {
            return field("methods", "no methods to run".into());
        }
        self.sim.validate().map_err(|e| ConfigError::Field { field: "sim".into(), msg: e.to_string() })?;
        if !(self.metrics.match_tol > 0.0 && self.metrics.formation_tol > 0.0 && self.metrics.whisker >= 0.0) {
            return field("metrics", "tolerances must be positive".into());
        }
        match &self.graph {
            GraphSource::Explicit { edges, shape } => {
                if shape.len() != self.n || shape.iter().any(|p| p.len() != self.dim || p.iter().any(|v| !v.is_finite())) {
                    return field("graph.shape", format!("need {} finite points of dimension {}", self.n, self.dim));
                }
                if let Some(e) = edges.iter().find(|e| e[0] == 0 || e[1] == 0 || e[0] > self.n || e[1] > self.n || e[0] == e[1]) {
                    return field("graph.edges", format!("invalid edge [{}, {}]", e[0], e[1]));
                }
                self.network()?;
                self.partition()?;
            }
            GraphSource::TwoRange { delta_a, delta_b } => {
                if self.group_a.is_none() {
                    return field("group_a", "matching scenarios must name group A".into());
                }
                if delta_a.is_empty() {
                    return field("graph.delta_a", "at least one sensing range".into());
                }
                if let Some(da) = delta_a.iter().find(|&&da| !(da > *delta_b && *delta_b > 0.0 && da.is_finite())) {
                    return field("graph.delta_a", format!("need delta_a > delta_b > 0, got {da} and {delta_b}"));
                }
                if self.methods.contains(&Method::PrevB) {
                    return field("methods", "prev_b is defined for fixed-graph formation only".into());
                }
            }
        }
        Ok(())
    }

    /// Fixed network of an explicit-graph config (0-based).
    pub fn network(&self) -> Result<DirectedNetwork, ConfigError> {
        match &self.graph {
            GraphSource::Explicit { edges, .. } => DirectedNetwork::new(self.n, edges.iter().map(|e| (e[0] - 1, e[1] - 1)))
                .map_err(|e| ConfigError::Field { field: "graph.edges".into(), msg: e.to_string() }),
            GraphSource::TwoRange { .. } => Err(ConfigError::Field { field: "graph".into(), msg: "proximity graphs are state dependent".into() }),
        }
    }

    pub fn shape(&self) -> Option<StateMatrix> {
        match &self.graph {
            GraphSource::Explicit { shape, .. } => Some(StateMatrix::from_points(shape).expect("validated shape")),
            GraphSource::TwoRange { .. } => None,
        }
    }

    pub fn partition(&self) -> Result<Partition, ConfigError> {
        let to_field = |e: dirflow_core::Error| ConfigError::Field { field: "group_a".into(), msg: e.to_string() };
        match (&self.graph, &self.group_a) {
            (GraphSource::Explicit { .. }, hint) => {
                let hint: Option<Vec<usize>> = hint.as_ref().map(|a| a.iter().map(|i| i - 1).collect());
                generalized_partition(&self.network()?, hint.as_deref()).map_err(to_field)
            }
            (GraphSource::TwoRange { .. }, Some(a)) => Partition::from_group_a(self.n, a.iter().map(|i| i - 1)).map_err(to_field),
            (GraphSource::TwoRange { .. }, None) => Err(ConfigError::Field { field: "group_a".into(), msg: "missing".into() }),
        }
    }

    /// Per-agent baseline gains.
    pub fn nu(&self, partition: &Partition) -> Vec<f64> {
        (0..self.n).map(|i| if partition.in_a(i) { self.gains.nu_a } else { self.gains.nu_b }).collect()
    }
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 3] = ["formation4", "formation6", "matching"];

/// Side length of the stand-in formation shapes.
pub const FORMATION_SCALE: f64 = 10.0;

fn bidirectional(pairs: &[[usize; 2]], directed: &[[usize; 2]]) -> Vec<[usize; 2]> {
    let mut edges: Vec<[usize; 2]> = pairs.iter().flat_map(|&[a, b]| [[a, b], [b, a]]).collect();
    edges.extend_from_slice(directed);
    edges
}

fn formation_sim() -> SimConfig {
    SimConfig {
        dt: 2e-4,
        t_final: 80.0,
        record_stride: 50_000,
        integrator: Integrator::Euler,
        seed: 0,
        record_graphs: false,
        monitor_graph: false,
        check_descent: true,
    }
}

/// Bundled configurations.
///
/// The formation shapes are stand-ins: the published figures only show the
/// targets pictorially. n = 4 uses a square of side 10 (sides bidirectional,
/// diagonals 1→4 and 3→2 one-way); n = 6 a regular hexagon of radius 10
/// (ring plus chord 3–5 bidirectional, 3→1, 4→2, 4→6, 5→1 one-way).
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let s = FORMATION_SCALE;
    match name {
        "formation4" => {
            let (lambda, mu) = (1.0, 0.01);
            Some(ExperimentConfig {
                schema_version: SCHEMA_VERSION,
                scenario: Scenario::Formation4,
                n: 4,
                dim: 2,
                group_a: None,
                tie: TiePolicy::AMinority,
                graph: GraphSource::Explicit {
                    edges: bidirectional(&[[1, 2], [3, 4], [1, 3], [2, 4]], &[[1, 4], [3, 2]]),
                    shape: vec![vec![0.0, 0.0], vec![s, 0.0], vec![0.0, s], vec![s, s]],
                },
                gains: Gains { lambda, eta: mu, kappa: 0.01, mu, nu_a: (lambda + mu) / 2.0, nu_b: (lambda + mu) / 2.0 },
                sampler: SamplerConfig::square(2, 10.0),
                seeds: Seeds::Count(100),
                sim: formation_sim(),
                methods: vec![Method::Proposed, Method::PrevA, Method::PrevB],
                metrics: MetricConfig::default(),
            })
        }
        "formation6" => {
            let (lambda, mu) = (2.0, 0.01);
            let shape = (0..6)
                .map(|k| {
                    let a = std::f64::consts::FRAC_PI_3 * k as f64;
                    vec![s * a.cos(), s * a.sin()]
                })
                .collect();
            Some(ExperimentConfig {
                schema_version: SCHEMA_VERSION,
                scenario: Scenario::Formation6,
                n: 6,
                dim: 2,
                group_a: None,
                tie: TiePolicy::AMinority,
                graph: GraphSource::Explicit {
                    edges: bidirectional(
                        &[[1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [6, 1], [3, 5]],
                        &[[3, 1], [4, 2], [4, 6], [5, 1]],
                    ),
                    shape,
                },
                gains: Gains { lambda, eta: mu, kappa: 0.01, mu, nu_a: (lambda + mu) / 2.0, nu_b: (lambda + mu) / 2.0 },
                sampler: SamplerConfig::square(2, 10.0),
                seeds: Seeds::Count(100),
                sim: formation_sim(),
                methods: vec![Method::Proposed, Method::PrevA, Method::PrevB],
                metrics: MetricConfig::default(),
            })
        }
        "matching" => Some(ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            scenario: Scenario::Matching,
            n: 20,
            dim: 2,
            group_a: Some((1..=10).collect()),
            tie: TiePolicy::AMinority,
            graph: GraphSource::TwoRange { delta_a: vec![2.0, 3.0, 5.0], delta_b: 1.5 },
            gains: Gains { lambda: 1.2, eta: 0.6, kappa: 0.0, mu: 0.6, nu_a: 0.9, nu_b: 0.6 },
            sampler: SamplerConfig::square(2, 4.0),
            seeds: Seeds::Count(50),
            sim: SimConfig {
                dt: 1e-2,
                t_final: 30.0,
                record_stride: 3_000,
                integrator: Integrator::Euler,
                seed: 0,
                record_graphs: false,
                monitor_graph: false,
                // V_ud jumps when the proximity graph switches
                check_descent: false,
            },
            methods: vec![Method::Proposed, Method::PrevA],
            metrics: MetricConfig::default(),
        }),
        _ => None,
    }
}
