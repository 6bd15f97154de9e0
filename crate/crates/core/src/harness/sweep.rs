use std::collections::BTreeMap;
use std::sync::Arc;

use super::config::{Algorithm, ExperimentConfig};
use super::trial::{run_cell_trial, Cell, Instance, TrialOutcome, TrialRecord};
use crate::error::{Error, Result};

/// How trials are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    /// Rayon pool; `threads = None` uses the global default size.
    #[cfg(feature = "parallel")]
    Parallel { threads: Option<usize> },
}

impl Execution {
    /// Parallel when the feature is compiled in, sequential otherwise.
    pub fn preferred(threads: Option<usize>) -> Self {
        #[cfg(feature = "parallel")]
        {
            Execution::Parallel { threads }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = threads;
            Execution::Sequential
        }
    }
}

/// A configured sweep: instances built once, cells enumerated.
#[derive(Clone, Debug)]
pub struct Sweep {
    cfg: ExperimentConfig,
    instances: Vec<Instance>,
    cells: Vec<Cell>,
}

impl Sweep {
    /// Builds every graph and dendrogram and enumerates the grid. An empty
    /// algorithm list means `default_algorithms`.
    pub fn new(cfg: ExperimentConfig, default_algorithms: &[Algorithm]) -> Result<Self> {
        cfg.validate()?;
        let algorithms = if cfg.algorithms.is_empty() {
            default_algorithms.to_vec()
        } else {
            cfg.algorithms.clone()
        };
        if algorithms.is_empty() {
            return Err(Error::Config("no algorithm selected".into()));
        }
        let mut instances = Vec::with_capacity(cfg.graphs.len());
        for spec in &cfg.graphs {
            let graph = spec.build()?;
            let dendrogram = cfg.dendrogram.build(&graph)?;
            instances.push(Instance {
                label: spec.to_string(),
                graph: Arc::new(graph),
                dendrogram: Arc::new(dendrogram),
            });
        }
        let mut cells = Vec::new();
        let mut point = 0;
        for instance in 0..instances.len() {
            for &cluster in &cfg.clusters {
                for &budget in &cfg.budgets {
                    for &strength in cfg.snr.values() {
                        for &algorithm in &algorithms {
                            cells.push(Cell {
                                index: cells.len(),
                                point,
                                instance,
                                cluster,
                                budget,
                                strength,
                                algorithm,
                            });
                        }
                        point += 1;
                    }
                }
            }
        }
        let mut cfg = cfg;
        cfg.algorithms = algorithms;
        Ok(Sweep { cfg, instances, cells })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of trials the sweep runs in total.
    pub fn len(&self) -> usize {
        self.cells.len() * self.cfg.trials
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn run_trial(&self, cell: usize, trial: usize) -> TrialRecord {
        self.run_trial_detailed(cell, trial).record
    }

    pub fn run_trial_detailed(&self, cell: usize, trial: usize) -> TrialOutcome {
        let c = &self.cells[cell];
        run_cell_trial(&self.cfg, &self.instances[c.instance], c, trial)
    }

    /// Runs every trial. Records come back in (cell, trial) order regardless
    /// of scheduling.
    pub fn run(&self, exec: Execution) -> Result<Vec<TrialRecord>> {
        let trials = self.cfg.trials;
        match exec {
            Execution::Sequential => Ok((0..self.len())
                .map(|i| self.run_trial(i / trials, i % trials))
                .collect()),
            #[cfg(feature = "parallel")]
            Execution::Parallel { threads } => {
                use rayon::prelude::*;
                let work = || {
                    (0..self.len())
                        .into_par_iter()
                        .map(|i| self.run_trial(i / trials, i % trials))
                        .collect()
                };
                match threads {
                    None => Ok(work()),
                    Some(t) => rayon::ThreadPoolBuilder::new()
                        .num_threads(t)
                        .build()
                        .map_err(|e| Error::Config(format!("thread pool: {e}")))
                        .map(|pool| pool.install(work)),
                }
            }
        }
    }
}

/// Aggregate over the trials of one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub cell: usize,
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: f64,
    pub k: usize,
    pub trials: usize,
    /// Trials with an evaluated estimate.
    pub evaluated: usize,
    pub errors: usize,
    pub success_rate: f64,
    pub mean_dist: f64,
    pub mean_partial_dist: Option<f64>,
    pub mean_theta: Option<f64>,
    pub mean_snr: f64,
    pub max_energy_fraction: f64,
}

/// Groups records by cell. Rates and means are over evaluated trials.
pub fn summarize(records: &[TrialRecord]) -> Vec<CellSummary> {
    let mut groups: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.cell).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(cell, rs)| {
            let first = rs[0];
            let evaluated: Vec<_> = rs.iter().filter(|r| r.is_evaluated()).collect();
            let ne = evaluated.len() as f64;
            let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
            let successes = evaluated.iter().filter(|r| r.exact_success == Some(true)).count();
            CellSummary {
                cell,
                algorithm: first.algorithm,
                n: first.n,
                m: first.m,
                k: first.k,
                trials: rs.len(),
                evaluated: evaluated.len(),
                errors: rs.len() - evaluated.len(),
                success_rate: if ne > 0.0 { successes as f64 / ne } else { f64::NAN },
                mean_dist: mean(evaluated.iter().filter_map(|r| r.dist).collect()).unwrap_or(f64::NAN),
                mean_partial_dist: mean(evaluated.iter().filter_map(|r| r.partial_dist).collect()),
                mean_theta: mean(rs.iter().filter_map(|r| r.theta).collect()),
                mean_snr: mean(
                    rs.iter()
                        .filter(|r| r.mu.is_finite())
                        .map(|r| if r.sigma > 0.0 { r.mu / r.sigma } else { r.mu })
                        .collect(),
                )
                .unwrap_or(f64::NAN),
                max_energy_fraction: rs
                    .iter()
                    .filter_map(|r| r.energy_spent.map(|e| e / r.m))
                    .fold(0.0, f64::max),
            }
        })
        .collect()
}

/// Phase-transition sweep: exact recovery only.
pub fn phase_transition_sweep(mut cfg: ExperimentConfig, exec: Execution) -> Result<Vec<TrialRecord>> {
    cfg.algorithms = vec![Algorithm::Exact];
    Sweep::new(cfg, &[Algorithm::Exact])?.run(exec)
}

/// Error-versus-budget sweep; runs both algorithms unless told otherwise.
pub fn error_vs_budget_sweep(cfg: ExperimentConfig, exec: Execution) -> Result<Vec<TrialRecord>> {
    Sweep::new(cfg, &[Algorithm::Exact, Algorithm::Approx])?.run(exec)
}
