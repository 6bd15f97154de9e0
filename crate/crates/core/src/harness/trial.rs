use std::sync::Arc;
use std::time::Instant;

use super::config::{Algorithm, Budget, ExperimentConfig, SnrAxis};
use crate::dendrogram::{block_stats, Dendrogram};
use crate::error::{Error, Result};
use crate::graph::{sample_cluster, ClusterShape, Graph, VertexSet};
use crate::numerics::{mix_seed, SeededRandomness};
use crate::recovery::{
    approx_params, approx_recover, cluster_distance, exact_params, exact_recover, partial_target,
    ApproxOptions, ParamInputs, RecoveryResult,
};
use crate::sensing::{AuditedSensor, SensingSession, Sensor};

/// Relative tolerance for the energy ledger recount.
pub const LEDGER_TOL: f64 = 1e-12;

/// Error-column note for trials whose estimate (or truth) was empty; such
/// trials count with distance 1.
pub const EMPTY_ESTIMATE: &str = "empty_estimate";

/// One Monte Carlo outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub experiment: String,
    /// Index of the sweep cell the trial belongs to.
    pub cell: usize,
    pub n: usize,
    pub m: f64,
    pub k: usize,
    pub rho: usize,
    pub d: usize,
    pub mu: f64,
    pub sigma: f64,
    pub theta: Option<f64>,
    pub trial: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub energy_spent: Option<f64>,
    pub measurements: Option<usize>,
    pub pruned_size: Option<usize>,
    pub dist: Option<f64>,
    pub exact_success: Option<bool>,
    pub partial_dist: Option<f64>,
    pub error: Option<String>,
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    /// Whether the trial produced an evaluated estimate.
    pub fn is_evaluated(&self) -> bool {
        self.dist.is_some()
    }
}

/// Rescaled signal strength `(mu / sigma) sqrt(m / (n log2(rho) ln(rho ln n)))`.
pub fn theta(mu: f64, sigma: f64, m: f64, n: usize, rho: usize) -> Option<f64> {
    let scale = theta_scale(m, n, rho)?;
    (sigma > 0.0).then(|| mu / sigma * scale)
}

fn theta_scale(m: f64, n: usize, rho: usize) -> Option<f64> {
    let (n, rho) = (n as f64, rho as f64);
    let denom = n * rho.log2() * (rho * n.ln()).ln();
    (rho >= 2.0 && denom > 0.0).then(|| (m / denom).sqrt())
}

/// Graph and dendrogram shared by every trial on that graph.
#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub graph: Arc<Graph>,
    pub dendrogram: Arc<Dendrogram>,
}

/// One point of the sweep grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub index: usize,
    /// Cell index with the algorithm axis removed; trials of different
    /// algorithms at the same point share seeds.
    pub point: usize,
    pub instance: usize,
    pub cluster: ClusterShape,
    pub budget: Budget,
    pub strength: f64,
    pub algorithm: Algorithm,
}

/// Full trial outcome, including the sets behind the record.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub truth: Option<VertexSet>,
    pub estimate: Option<VertexSet>,
    pub recovery: Option<RecoveryResult>,
}

pub(crate) fn run_cell_trial(
    cfg: &ExperimentConfig,
    instance: &Instance,
    cell: &Cell,
    trial: usize,
) -> TrialOutcome {
    let start = cfg.timing.then(Instant::now);
    let g = &instance.graph;
    let n = g.n();
    let m = cell.budget.resolve(n);
    let seed = mix_seed(cfg.seed, &[cell.point as u64, trial as u64]);
    let mut record = TrialRecord {
        experiment: cfg.experiment.clone(),
        cell: cell.index,
        n,
        m,
        k: cell.cluster.size(),
        rho: cfg.rho.unwrap_or(0),
        d: g.max_degree(),
        mu: f64::NAN,
        sigma: cfg.sigma,
        theta: None,
        trial,
        seed,
        algorithm: cell.algorithm,
        energy_spent: None,
        measurements: None,
        pruned_size: None,
        dist: None,
        exact_success: None,
        partial_dist: None,
        error: None,
        wall_ms: None,
    };
    let mut outcome = TrialOutcome {
        record: record.clone(),
        truth: None,
        estimate: None,
        recovery: None,
    };
    let result = execute(cfg, instance, cell, seed, &mut record, &mut outcome);
    if let Err(e) = result {
        record.error = Some(e.to_string());
        record.dist = None;
        record.exact_success = None;
        record.partial_dist = None;
    }
    record.wall_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    outcome.record = record;
    outcome
}

fn execute(
    cfg: &ExperimentConfig,
    instance: &Instance,
    cell: &Cell,
    seed: u64,
    record: &mut TrialRecord,
    outcome: &mut TrialOutcome,
) -> Result<()> {
    let g = &instance.graph;
    let dendro = &instance.dendrogram;
    let n = g.n();
    let cluster = sample_cluster(g, &cell.cluster, &mut SeededRandomness::new(seed, 0))?;
    let truth = cluster.vertices;
    let rho = cfg.rho.unwrap_or(cluster.cut_size);
    record.k = truth.len();
    record.rho = rho;
    let mu = match cfg.snr {
        SnrAxis::Snr(_) if cfg.sigma == 0.0 => cell.strength,
        SnrAxis::Snr(_) => cell.strength * cfg.sigma,
        SnrAxis::Theta(_) => {
            let scale = theta_scale(record.m, n, rho).ok_or_else(|| {
                Error::DegenerateParameter(format!("theta undefined for rho = {rho}"))
            })?;
            cell.strength * cfg.sigma / scale
        }
    };
    record.mu = mu;
    record.theta = theta(mu, cfg.sigma, record.m, n, rho);
    outcome.truth = Some(truth.clone());

    let session = SensingSession::new(n, &truth, mu, cfg.sigma, record.m, SeededRandomness::new(seed, 1))?;
    let mut sensor = AuditedSensor::new(session);
    let inputs = ParamInputs {
        n,
        budget: record.m,
        max_degree: g.max_degree(),
        rho,
        height: dendro.height(),
        sigma: cfg.sigma,
        delta: cfg.delta,
        cluster_size: truth.len(),
    };
    let run = match cell.algorithm {
        Algorithm::Exact => exact_params(inputs).and_then(|p| exact_recover(&mut sensor, dendro, &p)),
        Algorithm::Approx => approx_params(inputs, cfg.split).and_then(|p| {
            approx_recover(&mut sensor, dendro, &p, ApproxOptions { passive: cfg.passive })
        }),
    };
    record.energy_spent = Some(sensor.spent());
    record.measurements = Some(sensor.measurement_count());
    let audit = sensor.audit();
    if !audit.is_consistent(LEDGER_TOL) {
        return Err(Error::InvalidArgument(format!(
            "energy ledger mismatch: reported {} recomputed {} budget {}",
            audit.reported, audit.recomputed, audit.budget
        )));
    }
    let estimate = match run {
        Ok(r) => {
            record.pruned_size = r.pruned_size;
            let est = r.estimate.clone();
            outcome.recovery = Some(r);
            est
        }
        // nothing survived pruning or the passive estimate vanished
        Err(Error::DegenerateInput(_)) => VertexSet::empty(),
        Err(e) => return Err(e),
    };
    record.exact_success = Some(estimate == truth);
    record.dist = Some(match cluster_distance(&estimate, &truth) {
        Ok(d) => d,
        Err(_) => {
            record.error = Some(EMPTY_ESTIMATE.into());
            1.0
        }
    });
    if let Some(t) = cfg.partial_t {
        let target = partial_target(&block_stats(dendro, &truth)?, t)?;
        if !target.is_empty() {
            record.partial_dist = Some(cluster_distance(&estimate, &target).unwrap_or(1.0));
        }
    }
    outcome.estimate = Some(estimate);
    Ok(())
}
