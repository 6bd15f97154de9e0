use super::{ExactParams, RecoveryResult};
use crate::dendrogram::Dendrogram;
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::sensing::Sensor;

/// Top-down exact recovery.
///
/// Each visited block `D` is measured at amplitude `sqrt(alpha)`. It joins
/// the estimate when `y >= mu sqrt(alpha) |D| - tau`, is refined when
/// `tau < y` (and it has children), and is discarded otherwise.
pub fn exact_recover<S: Sensor>(s: &mut S, d: &Dendrogram, p: &ExactParams) -> Result<RecoveryResult> {
    if d.n() != s.n() {
        return Err(Error::InvalidArgument(format!(
            "dendrogram on {} vertices, signal has {}",
            d.n(),
            s.n()
        )));
    }
    let needed = p.budget_bound();
    if s.remaining() < needed * (1.0 - 1e-12) {
        return Err(Error::BudgetExceeded {
            requested: needed,
            remaining: s.remaining(),
        });
    }
    let (spent0, count0) = (s.spent(), s.measurement_count());
    let amp = p.alpha.sqrt();
    let full_per_vertex = s.amplitude() * amp;
    let mut accepted: Vec<usize> = Vec::new();
    let mut stack = vec![d.root()];
    while let Some(i) = stack.pop() {
        let block = d.block(i);
        let y = s.measure_block(&block.vertices, amp)?;
        if y >= full_per_vertex * block.len() as f64 - p.tau {
            accepted.extend(block.vertices.iter());
        } else if y > p.tau && !block.is_leaf() {
            stack.extend(block.children.iter().rev());
        }
    }
    let spent = s.spent() - spent0;
    Ok(RecoveryResult {
        estimate: VertexSet::new(accepted),
        energy_spent: spent,
        measurements: s.measurement_count() - count0,
        adaptive_energy: spent,
        ..RecoveryResult::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::{balanced_binary_dendrogram, build_dendrogram};
    use crate::graph::{build_torus, cut_size, spanning_tree};
    use crate::numerics::SeededRandomness;
    use crate::recovery::{exact_params, ParamInputs};
    use crate::sensing::SensingSession;

    fn params(n: usize, d: usize, rho: usize, height: usize, sigma: f64) -> ExactParams {
        exact_params(ParamInputs {
            n,
            budget: 100.0 * n as f64,
            max_degree: d,
            rho: rho.max(1),
            height,
            sigma,
            delta: 0.1,
            cluster_size: 0,
        })
        .unwrap()
    }

    #[test]
    fn noiseless_exact_on_binary() {
        let d = balanced_binary_dendrogram(16).unwrap();
        for (lo, hi) in [(0, 15), (3, 9), (4, 7), (15, 15), (0, 0)] {
            let cstar = VertexSet::range(lo, hi);
            let p = params(16, 2, 2, d.height(), 0.0);
            let mut s = SensingSession::new(16, &cstar, 1.0, 0.0, 1600.0, SeededRandomness::new(0, 0)).unwrap();
            let r = exact_recover(&mut s, &d, &p).unwrap();
            assert_eq!(r.estimate, cstar);
            assert!(r.energy_spent <= p.budget_bound());
        }
    }

    #[test]
    fn empty_cluster_one_measurement() {
        let d = balanced_binary_dendrogram(16).unwrap();
        let p = params(16, 2, 2, d.height(), 0.0);
        let mut s = SensingSession::new(16, &VertexSet::empty(), 1.0, 0.0, 1600.0, SeededRandomness::new(0, 0)).unwrap();
        let r = exact_recover(&mut s, &d, &p).unwrap();
        assert!(r.estimate.is_empty());
        assert_eq!(r.measurements, 1);
    }

    #[test]
    fn noiseless_exact_on_torus() {
        let g = build_torus(5, 6).unwrap();
        let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
        let cstar = VertexSet::new([0, 1, 2, 6, 7, 8]);
        let rho = cut_size(&g, &cstar).unwrap();
        let p = params(30, 4, rho, d.height(), 0.0);
        let mut s = SensingSession::new(30, &cstar, 2.0, 0.0, 3000.0, SeededRandomness::new(0, 0)).unwrap();
        assert_eq!(exact_recover(&mut s, &d, &p).unwrap().estimate, cstar);
    }

    #[test]
    fn insufficient_budget_is_refused() {
        let d = balanced_binary_dendrogram(16).unwrap();
        let p = params(16, 2, 2, d.height(), 1.0);
        let mut s = SensingSession::new(16, &VertexSet::empty(), 1.0, 1.0, 10.0, SeededRandomness::new(0, 0)).unwrap();
        assert!(matches!(exact_recover(&mut s, &d, &p), Err(Error::BudgetExceeded { .. })));
        assert_eq!(s.measurement_count(), 0);
    }
}
