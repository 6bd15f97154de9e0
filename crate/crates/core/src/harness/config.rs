//! Experiment configuration: a flat set of `key=value` settings shared by
//! the config file format and the command line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dendrogram::{balanced_binary_dendrogram, build_dendrogram, Dendrogram};
use crate::error::{Error, Result};
use crate::graph::{build_cycle, build_path, build_torus, spanning_tree, ClusterShape, Graph};
use crate::recovery::PassiveEnergy;

/// Environment variable that, when set, prefixes relative output paths.
pub const OUT_DIR_ENV: &str = "CLUSTERSENSE_OUT_DIR";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Torus(usize, usize),
    EdgeList(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Path(n) => build_path(*n),
            GraphSpec::Cycle(n) => build_cycle(*n),
            GraphSpec::Torus(r, c) => build_torus(*r, *c),
            GraphSpec::EdgeList(p) => Graph::load_edge_list(p),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Torus(r, c) => write!(f, "torus:{r}x{c}"),
            GraphSpec::EdgeList(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad graph spec `{s}`"));
        let (kind, arg) = s.trim().split_once(':').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match kind {
            "path" => Ok(GraphSpec::Path(num(arg)?)),
            "cycle" => Ok(GraphSpec::Cycle(num(arg)?)),
            "torus" => {
                let (r, c) = arg.split_once('x').ok_or_else(bad)?;
                Ok(GraphSpec::Torus(num(r)?, num(c)?))
            }
            "file" if !arg.is_empty() => Ok(GraphSpec::EdgeList(PathBuf::from(arg))),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DendrogramSpec {
    /// Balanced splits of a breadth-first spanning tree rooted at vertex 0.
    #[default]
    Built,
    /// Halving of the id range; intended for path graphs.
    Binary,
}

impl DendrogramSpec {
    pub fn build(&self, g: &Graph) -> Result<Dendrogram> {
        match self {
            DendrogramSpec::Built => Ok(build_dendrogram(&spanning_tree(g, 0)?)),
            DendrogramSpec::Binary => balanced_binary_dendrogram(g.n()),
        }
    }
}

impl fmt::Display for DendrogramSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DendrogramSpec::Built => "built",
            DendrogramSpec::Binary => "binary",
        })
    }
}

impl FromStr for DendrogramSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "built" => Ok(DendrogramSpec::Built),
            "binary" => Ok(DendrogramSpec::Binary),
            _ => Err(Error::Config(format!("bad dendrogram spec `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Exact,
    Approx,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exact => "exact",
            Algorithm::Approx => "approx",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Algorithm::Exact),
            "approx" => Ok(Algorithm::Approx),
            _ => Err(Error::Config(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Sensing budget, either absolute or per vertex (`4n` means `4 * n`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    Absolute(f64),
    PerVertex(f64),
}

impl Budget {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            Budget::Absolute(m) => m,
            Budget::PerVertex(f) => f * n as f64,
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Budget::Absolute(v) | Budget::PerVertex(v) => v,
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("bad budget `{s}`"));
        match s.strip_suffix('n') {
            Some(f) => f.parse().map(Budget::PerVertex).map_err(|_| bad()),
            None => s.parse().map(Budget::Absolute).map_err(|_| bad()),
        }
    }
}

/// Signal strength axis of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum SnrAxis {
    /// Values of `mu / sigma` (of `mu` itself when `sigma = 0`).
    Snr(Vec<f64>),
    /// Values of the rescaled `theta`; `mu` is solved per trial from
    /// `theta = (mu / sigma) sqrt(m / (n log2(rho) ln(rho ln n)))`.
    Theta(Vec<f64>),
}

impl SnrAxis {
    pub fn values(&self) -> &[f64] {
        match self {
            SnrAxis::Snr(v) | SnrAxis::Theta(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub graphs: Vec<GraphSpec>,
    pub dendrogram: DendrogramSpec,
    pub clusters: Vec<ClusterShape>,
    pub snr: SnrAxis,
    pub budgets: Vec<Budget>,
    pub sigma: f64,
    /// Empty means the sweep's own default.
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub delta: f64,
    /// Fraction of the budget given to the adaptive phase of `approx`.
    pub split: f64,
    pub passive: PassiveEnergy,
    /// Cut-size parameter handed to the algorithms; defaults to the
    /// sampled cluster's own cut size.
    pub rho: Option<usize>,
    /// Size threshold for the partial-recovery target.
    pub partial_t: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Record per-trial wall time. Off by default because it makes output
    /// nondeterministic.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: "experiment".into(),
            graphs: vec![GraphSpec::Torus(16, 16)],
            dendrogram: DendrogramSpec::Built,
            clusters: vec![ClusterShape::Rectangle { width: 3, height: 3 }],
            snr: SnrAxis::Snr(vec![1.0]),
            budgets: vec![Budget::PerVertex(1.0)],
            sigma: 1.0,
            algorithms: Vec::new(),
            trials: 1,
            delta: 0.1,
            split: 0.5,
            passive: PassiveEnergy::Fixed,
            rho: None,
            partial_t: None,
            seed: 0,
            out: None,
            threads: None,
            timing: false,
        }
    }
}

fn list<T: FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse())
        .collect()
}

fn float_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: bad number `{t}`")))
        })
        .collect()
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: bad value `{value}`")))
}

impl ExperimentConfig {
    /// Phase-transition defaults: exact recovery on tori of three sizes
    /// with a 3x3 rectangle (cut size 12 at every size), `m = n`.
    pub fn phase_transition() -> Self {
        ExperimentConfig {
            experiment: "phase-transition".into(),
            graphs: vec![GraphSpec::Torus(8, 8), GraphSpec::Torus(16, 16), GraphSpec::Torus(32, 32)],
            dendrogram: DendrogramSpec::Built,
            clusters: vec![ClusterShape::Rectangle { width: 3, height: 3 }],
            snr: SnrAxis::Theta(vec![2.0, 3.0, 4.0, 5.0, 5.5, 6.0, 6.5, 7.0, 7.5, 8.0, 10.0, 12.0, 16.0]),
            budgets: vec![Budget::PerVertex(1.0)],
            algorithms: vec![Algorithm::Exact],
            trials: 200,
            ..Default::default()
        }
    }

    /// Error-versus-budget defaults: path of 512 vertices, binary
    /// dendrogram, clusters of 10 and 50 (the latter starting on a
    /// 64-block boundary), unit SNR, budgets 8..65536.
    pub fn error_vs_budget() -> Self {
        ExperimentConfig {
            experiment: "error-vs-budget".into(),
            graphs: vec![GraphSpec::Path(512)],
            dendrogram: DendrogramSpec::Binary,
            clusters: vec![
                ClusterShape::Interval { len: 10, align: None },
                ClusterShape::Interval { len: 50, align: Some(64) },
            ],
            snr: SnrAxis::Snr(vec![1.0]),
            budgets: (3..=16).map(|e| Budget::Absolute(f64::from(1u32 << e))).collect(),
            algorithms: vec![Algorithm::Exact, Algorithm::Approx],
            trials: 100,
            passive: PassiveEnergy::Remaining,
            rho: Some(2),
            ..Default::default()
        }
    }

    /// Sets one option by its flag name (without leading dashes).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "experiment" => self.experiment = value.trim().to_string(),
            "graph" => self.graphs = list(value)?,
            "dendrogram" => self.dendrogram = value.parse()?,
            "cluster" => self.clusters = list(value)?,
            "snr-list" => self.snr = SnrAxis::Snr(float_list(key, value)?),
            "theta-list" => self.snr = SnrAxis::Theta(float_list(key, value)?),
            "budget-list" => self.budgets = list(value)?,
            "sigma" => self.sigma = scalar(key, value)?,
            "algorithms" => self.algorithms = list(value)?,
            "trials" => self.trials = scalar(key, value)?,
            "delta" => self.delta = scalar(key, value)?,
            "split" => self.split = scalar(key, value)?,
            "passive" => {
                self.passive = match value.trim() {
                    "fixed" => PassiveEnergy::Fixed,
                    "remaining" => PassiveEnergy::Remaining,
                    _ => return Err(Error::Config(format!("passive: bad value `{value}`"))),
                }
            }
            "rho" => self.rho = Some(scalar(key, value)?),
            "partial-t" => self.partial_t = Some(scalar(key, value)?),
            "seed" => self.seed = scalar(key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "threads" => self.threads = Some(scalar(key, value)?),
            "timing" => self.timing = scalar(key, value)?,
            _ => return Err(Error::Config(format!("unknown option `{key}`"))),
        }
        Ok(())
    }

    /// Applies a config file of `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.graphs.is_empty() {
            return fail("no graph configured".into());
        }
        if self.clusters.is_empty() {
            return fail("no cluster shape configured".into());
        }
        if self.trials == 0 {
            return fail("trials must be >= 1".into());
        }
        if self.snr.values().is_empty() || self.snr.values().iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return fail("signal strengths must be positive".into());
        }
        if self.budgets.is_empty() || self.budgets.iter().any(|b| !(b.value() > 0.0 && b.value().is_finite())) {
            return fail("budgets must be positive".into());
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return fail(format!("sigma must be >= 0, got {}", self.sigma));
        }
        if matches!(self.snr, SnrAxis::Theta(_)) && self.sigma == 0.0 {
            return fail("theta sweeps need sigma > 0".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return fail(format!("split must lie in (0, 1), got {}", self.split));
        }
        if self.partial_t == Some(0) {
            return fail("partial-t must be >= 1".into());
        }
        if self.threads == Some(0) {
            return fail("threads must be >= 1".into());
        }
        Ok(())
    }

    /// Output path with [`OUT_DIR_ENV`] applied to relative paths.
    pub fn resolved_out(&self) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if out.is_relative() => Some(PathBuf::from(dir).join(out)),
            _ => Some(out.clone()),
        }
    }
}
