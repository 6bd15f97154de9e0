//! Cluster recovery from adaptive block measurements.
//!
//! [`exact_recover`] senses dendrogram blocks top-down and refines only the
//! blocks whose measurement looks impure. [`approx_recover`] prunes the
//! dendrogram with a low threshold, senses passively over the span of the
//! surviving block indicators, and extracts the cluster greedily.

mod approx;
mod exact;
mod subspace;

pub use approx::{approx_recover, greedy_cluster, passive_estimate, prune_dendrogram, ApproxOptions, PassiveEnergy};
pub use exact::exact_recover;
pub use subspace::{orthonormal_basis, project};

use crate::dendrogram::{ceil_log2, BlockStats};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::numerics::std_normal_upper_quantile;

/// Problem quantities both parameter rules are derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamInputs {
    /// Number of vertices `n`.
    pub n: usize,
    /// Total sensing budget `m`.
    pub budget: f64,
    /// Maximum graph degree `d`.
    pub max_degree: usize,
    /// Cut-size bound `rho` of the cluster class.
    pub rho: usize,
    /// Dendrogram height `L`.
    pub height: usize,
    pub sigma: f64,
    /// Failure probability `delta`.
    pub delta: f64,
    /// Assumed cluster size `k` (only used by the approximate rule).
    pub cluster_size: usize,
}

impl ParamInputs {
    fn check_common(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if !(self.budget > 0.0 && self.budget.is_finite()) {
            return Err(Error::InvalidArgument(format!("budget must be positive, got {}", self.budget)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

/// Energy density and threshold for [`exact_recover`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactParams {
    /// Energy per vertex of every block measurement.
    pub alpha: f64,
    /// Decision margin on block measurements.
    pub tau: f64,
    pub delta: f64,
    pub inputs: ParamInputs,
}

impl ExactParams {
    /// `alpha = m / (3 n log2(d rho))`, `tau = sigma sqrt(2 ln((d rho L + 1) / delta))`.
    pub fn new(inputs: ParamInputs) -> Result<Self> {
        inputs.check_common()?;
        let drho = (inputs.max_degree * inputs.rho) as f64;
        if drho < 2.0 {
            return Err(Error::DegenerateParameter(format!(
                "d * rho = {drho} gives log2(d rho) <= 0"
            )));
        }
        let alpha = inputs.budget / (3.0 * inputs.n as f64 * drho.log2());
        let tau = inputs.sigma * (2.0 * (Self::union_count(&inputs) / inputs.delta).ln()).sqrt();
        Ok(ExactParams {
            alpha,
            tau,
            delta: inputs.delta,
            inputs,
        })
    }

    fn union_count(inputs: &ParamInputs) -> f64 {
        (inputs.max_degree * inputs.rho * inputs.height + 1) as f64
    }

    /// Worst-case energy `3 alpha n log2(d rho)` of one run.
    pub fn budget_bound(&self) -> f64 {
        let drho = (self.inputs.max_degree * self.inputs.rho) as f64;
        3.0 * self.alpha * self.inputs.n as f64 * drho.log2()
    }

    /// Smallest `mu / sigma` covered by the exact-recovery guarantee:
    /// `sqrt((8 / alpha) ln((d rho L + 1) / delta))`.
    pub fn snr_threshold(&self) -> f64 {
        (8.0 / self.alpha * (Self::union_count(&self.inputs) / self.delta).ln()).sqrt()
    }
}

pub fn exact_params(inputs: ParamInputs) -> Result<ExactParams> {
    ExactParams::new(inputs)
}

/// Parameters of the two-phase approximate procedure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxParams {
    /// Energy per vertex in the adaptive (pruning) phase.
    pub alpha: f64,
    /// Pruning threshold in standard-normal units; blocks are kept when
    /// their measurement is at least `sigma * z`.
    pub z: f64,
    /// Tail probability `q = (sqrt 5 - 1) / (2 d)` that fixes `z`.
    pub q: f64,
    /// Energy per basis vector in the passive phase.
    pub beta: f64,
    /// Impure-block budget `r = rho * ceil(log2 n)`.
    pub r: usize,
    pub k: usize,
    pub delta: f64,
    /// Fraction of the budget assigned to the adaptive phase.
    pub split: f64,
    pub inputs: ParamInputs,
}

impl ApproxParams {
    /// With `s = split`:
    /// `alpha = s m / (3 n log2(4 r d^2 ln(r d L / delta) + k))` and
    /// `beta = (1 - s) m / (3 r d L ln(r d L / delta) + L k)`.
    /// At `s = 1/2` these are the even-split settings.
    pub fn new(inputs: ParamInputs, split: f64) -> Result<Self> {
        inputs.check_common()?;
        if !(split > 0.0 && split < 1.0) {
            return Err(Error::InvalidArgument(format!("split must lie in (0, 1), got {split}")));
        }
        if inputs.max_degree == 0 {
            return Err(Error::DegenerateParameter("graph has no edges".into()));
        }
        let r = inputs.rho * ceil_log2(inputs.n);
        let (d, l, k) = (inputs.max_degree as f64, inputs.height as f64, inputs.cluster_size as f64);
        let log_term = (r as f64 * d * l / inputs.delta).ln();
        if log_term.is_nan() || log_term <= 0.0 {
            return Err(Error::DegenerateParameter(format!(
                "ln(r d L / delta) = {log_term} must be positive"
            )));
        }
        let energy_arg = 4.0 * r as f64 * d * d * log_term + k;
        if energy_arg.is_nan() || energy_arg <= 1.0 {
            return Err(Error::DegenerateParameter(format!(
                "log2 argument {energy_arg} must exceed 1"
            )));
        }
        let q = (5f64.sqrt() - 1.0) / (2.0 * d);
        let z = std_normal_upper_quantile(q)?;
        let m = inputs.budget;
        let alpha = split * m / (3.0 * inputs.n as f64 * energy_arg.log2());
        let beta = (1.0 - split) * m / (3.0 * r as f64 * d * l * log_term + l * k);
        Ok(ApproxParams {
            alpha,
            z,
            q,
            beta,
            r,
            k: inputs.cluster_size,
            delta: inputs.delta,
            split,
            inputs,
        })
    }

    fn log_term(&self) -> f64 {
        let i = &self.inputs;
        (self.r as f64 * i.max_degree as f64 * i.height as f64 / i.delta).ln()
    }

    /// Worst-case adaptive energy `3 alpha n log2(4 r d^2 ln(r d L / delta) + k)`.
    pub fn adaptive_bound(&self) -> f64 {
        let d = self.inputs.max_degree as f64;
        let arg = 4.0 * self.r as f64 * d * d * self.log_term() + self.k as f64;
        3.0 * self.alpha * self.inputs.n as f64 * arg.log2()
    }

    /// High-probability bound `L (3 r d ln(r d L / delta) + k)` on `|K|`.
    pub fn pruned_size_bound(&self) -> f64 {
        let i = &self.inputs;
        i.height as f64 * (3.0 * self.r as f64 * i.max_degree as f64 * self.log_term() + self.k as f64)
    }

    /// Pruning threshold `sigma * z` on the raw block statistic.
    pub fn threshold(&self) -> f64 {
        self.inputs.sigma * self.z
    }
}

pub fn approx_params(inputs: ParamInputs, split: f64) -> Result<ApproxParams> {
    ApproxParams::new(inputs, split)
}

/// `3 L ln(L / delta)`: bound on blocks kept when nothing is active.
pub fn empty_pruned_bound(height: usize, delta: f64) -> f64 {
    let l = height as f64;
    3.0 * l * (l / delta).ln()
}

/// Outcome of one recovery run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecoveryResult {
    pub estimate: VertexSet,
    pub energy_spent: f64,
    pub measurements: usize,
    pub adaptive_energy: f64,
    pub passive_energy: f64,
    /// `|K|` for the approximate procedure.
    pub pruned_size: Option<usize>,
    /// Dimension of the passive sensing subspace.
    pub subspace_rank: Option<usize>,
    /// Passive-phase estimate of the signal, when one was formed.
    pub signal_estimate: Option<Vec<f64>>,
}

/// `1 - |a ∩ b| / sqrt(|a| |b|)`.
pub fn cluster_distance(a: &VertexSet, b: &VertexSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("distance to an empty set is undefined".into()));
    }
    let overlap = a.intersection_len(b) as f64;
    Ok(1.0 - overlap / ((a.len() as f64) * (b.len() as f64)).sqrt())
}

/// Union of the maximal blocks with at least `t` vertices.
pub fn partial_target(stats: &BlockStats, t: usize) -> Result<VertexSet> {
    if t == 0 {
        return Err(Error::InvalidArgument("size threshold must be >= 1".into()));
    }
    Ok(stats
        .maximal_blocks
        .iter()
        .filter(|m| m.len() >= t)
        .flat_map(|m| m.iter())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::{balanced_binary_dendrogram, block_stats};

    fn inputs() -> ParamInputs {
        ParamInputs {
            n: 64,
            budget: 1000.0,
            max_degree: 4,
            rho: 4,
            height: 6,
            sigma: 1.0,
            delta: 0.1,
            cluster_size: 4,
        }
    }

    #[test]
    fn exact_alpha() {
        let p = exact_params(inputs()).unwrap();
        assert!((p.alpha - 1000.0 / 768.0).abs() < 1e-12);
        assert!((p.budget_bound() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn exact_tau() {
        let p = exact_params(ParamInputs {
            max_degree: 2,
            rho: 2,
            height: 9,
            delta: 0.05,
            ..inputs()
        })
        .unwrap();
        assert!((p.tau - 3.635_010_367_577_571).abs() < 1e-12);
        let p0 = exact_params(ParamInputs { sigma: 0.0, ..inputs() }).unwrap();
        assert_eq!(p0.tau, 0.0);
    }

    #[test]
    fn exact_rejects_degenerate() {
        let e = exact_params(ParamInputs { max_degree: 1, rho: 1, ..inputs() });
        assert!(matches!(e, Err(Error::DegenerateParameter(_))));
        assert!(exact_params(ParamInputs { delta: 1.0, ..inputs() }).is_err());
    }

    #[test]
    fn approx_threshold_for_degree_four() {
        let p = approx_params(inputs(), 0.5).unwrap();
        assert!((p.q - 0.154_508_497_187_473_7).abs() < 1e-15);
        assert!((p.z - 1.017_286_841_644_899).abs() < 1e-9);
        let p2 = approx_params(ParamInputs { sigma: 2.0, ..inputs() }, 0.5).unwrap();
        assert!((p2.threshold() - 2.0 * p.threshold()).abs() < 1e-15);
    }

    #[test]
    fn approx_budget_split() {
        let i = ParamInputs {
            n: 512,
            budget: 1e5,
            max_degree: 2,
            rho: 2,
            height: 9,
            sigma: 1.0,
            delta: 0.1,
            cluster_size: 50,
        };
        let p = approx_params(i, 0.5).unwrap();
        assert_eq!(p.r, 18);
        assert!(p.adaptive_bound() <= 0.5e5 * (1.0 + 1e-12));
        assert!(p.beta * p.pruned_size_bound() <= 0.5e5 * (1.0 + 1e-12));
        // the even split reproduces the m/6 and m/(6rdL ln + 2Lk) forms
        let log_term = (18.0 * 2.0 * 9.0 / 0.1f64).ln();
        let alpha = 1e5 / (6.0 * 512.0 * (4.0 * 18.0 * 4.0 * log_term + 50.0).log2());
        let beta = 1e5 / (6.0 * 18.0 * 2.0 * 9.0 * log_term + 2.0 * 9.0 * 50.0);
        assert!((p.alpha - alpha).abs() < 1e-12 * alpha);
        assert!((p.beta - beta).abs() < 1e-12 * beta);
    }

    #[test]
    fn approx_rejects_degenerate() {
        let e = approx_params(ParamInputs { height: 0, ..inputs() }, 0.5);
        assert!(matches!(e, Err(Error::DegenerateParameter(_))));
        assert!(approx_params(inputs(), 1.0).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = VertexSet::new([0, 1]);
        assert_eq!(cluster_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(cluster_distance(&a, &VertexSet::new([5])).unwrap(), 1.0);
        assert!((cluster_distance(&a, &VertexSet::new([1, 2])).unwrap() - 0.5).abs() < 1e-15);
        assert!(cluster_distance(&a, &VertexSet::empty()).is_err());
    }

    #[test]
    fn partial_target_examples() {
        let d = balanced_binary_dendrogram(8).unwrap();
        let cstar = VertexSet::range(1, 4);
        let stats = block_stats(&d, &cstar).unwrap();
        assert_eq!(partial_target(&stats, 1).unwrap(), cstar);
        assert_eq!(partial_target(&stats, 2).unwrap(), VertexSet::new([2, 3]));
        assert!(partial_target(&stats, 5).unwrap().is_empty());
        assert!(partial_target(&stats, 0).is_err());
    }
}
