use std::collections::VecDeque;

use super::subspace::orthonormal_basis;
use super::{ApproxParams, RecoveryResult};
use crate::dendrogram::Dendrogram;
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::sensing::Sensor;

/// How much energy each passive measurement receives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PassiveEnergy {
    /// The worst-case `beta` from [`ApproxParams`].
    #[default]
    Fixed,
    /// Whatever budget is left after pruning, split evenly over the basis.
    Remaining,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApproxOptions {
    pub passive: PassiveEnergy,
}

/// Adaptive phase: keeps every block whose measurement clears `sigma * z`
/// and descends into its children. Returns kept block indices, parents
/// first. A zero threshold is applied strictly so that noiseless empty
/// blocks are discarded.
pub fn prune_dendrogram<S: Sensor>(s: &mut S, d: &Dendrogram, p: &ApproxParams) -> Result<Vec<usize>> {
    let amp = p.alpha.sqrt();
    let threshold = s.noise_std() * p.z;
    let keep = |y: f64| if threshold == 0.0 { y > 0.0 } else { y >= threshold };
    let mut kept = Vec::new();
    let mut queue = VecDeque::from([d.root()]);
    while let Some(i) = queue.pop_front() {
        let block = d.block(i);
        if keep(s.measure_block(&block.vertices, amp)?) {
            kept.push(i);
            queue.extend(block.children.iter().copied());
        }
    }
    Ok(kept)
}

/// Passive phase: one measurement `sqrt(beta) u^T x + eps` per basis
/// vector, returning `x_hat = U y / sqrt(beta)`.
pub fn passive_estimate<S: Sensor>(s: &mut S, basis: &[Vec<f64>], beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    let needed = beta * basis.len() as f64;
    if needed > s.remaining() {
        return Err(Error::BudgetExceeded {
            requested: needed,
            remaining: s.remaining(),
        });
    }
    let amp = beta.sqrt();
    let mut xhat = vec![0.0; s.n()];
    let mut a = vec![0.0; s.n()];
    for u in basis {
        for (ai, ui) in a.iter_mut().zip(u) {
            *ai = amp * ui;
        }
        let coeff = s.measure(&a)? / amp;
        for (xi, ui) in xhat.iter_mut().zip(u) {
            *xi += coeff * ui;
        }
    }
    Ok(xhat)
}

/// Maximizes `1_C^T x / sqrt(|C|)` over nonempty `C`. For each size the best
/// set is the top coordinates, so scanning prefixes of the sorted vector is
/// exact.
pub fn greedy_cluster(xhat: &[f64]) -> Result<VertexSet> {
    if xhat.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("estimate has non-finite entries".into()));
    }
    if xhat.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateInput("estimate is identically zero".into()));
    }
    let mut order: Vec<usize> = (0..xhat.len()).collect();
    order.sort_by(|&a, &b| xhat[b].total_cmp(&xhat[a]).then(a.cmp(&b)));
    let (mut prefix, mut best, mut best_len) = (0.0, f64::NEG_INFINITY, 0);
    for (j, &i) in order.iter().enumerate() {
        prefix += xhat[i];
        let score = prefix / ((j + 1) as f64).sqrt();
        if score > best {
            best = score;
            best_len = j + 1;
        }
    }
    Ok(VertexSet::new(order[..best_len].iter().copied()))
}

/// Full two-phase procedure: prune, orthonormalize the kept indicators,
/// sense passively over their span, then extract the cluster greedily.
pub fn approx_recover<S: Sensor>(
    s: &mut S,
    d: &Dendrogram,
    p: &ApproxParams,
    options: ApproxOptions,
) -> Result<RecoveryResult> {
    if d.n() != s.n() {
        return Err(Error::InvalidArgument(format!(
            "dendrogram on {} vertices, signal has {}",
            d.n(),
            s.n()
        )));
    }
    let (spent0, count0) = (s.spent(), s.measurement_count());
    let kept = prune_dendrogram(s, d, p)?;
    let adaptive_energy = s.spent() - spent0;
    if kept.is_empty() {
        return Err(Error::DegenerateInput("pruning retained no blocks".into()));
    }
    let basis = orthonormal_basis(kept.iter().map(|&i| &d.block(i).vertices), s.n());
    let beta = match options.passive {
        PassiveEnergy::Fixed => p.beta,
        // shave a hair off so rounding in the per-vector norms cannot overrun
        PassiveEnergy::Remaining => s.remaining() * (1.0 - 1e-9) / basis.len() as f64,
    };
    let xhat = passive_estimate(s, &basis, beta)?;
    let passive_energy = s.spent() - spent0 - adaptive_energy;
    let estimate = greedy_cluster(&xhat)?;
    Ok(RecoveryResult {
        estimate,
        energy_spent: s.spent() - spent0,
        measurements: s.measurement_count() - count0,
        adaptive_energy,
        passive_energy,
        pruned_size: Some(kept.len()),
        subspace_rank: Some(basis.len()),
        signal_estimate: Some(xhat),
    })
}
