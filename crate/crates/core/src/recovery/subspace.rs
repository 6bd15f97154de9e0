use crate::graph::VertexSet;

const DEPENDENCE_TOL: f64 = 1e-10;

/// Orthonormal basis for the span of the block indicators, by modified
/// Gram-Schmidt with a second orthogonalization pass. Indicators whose
/// residual norm falls below `1e-10` are dropped as dependent.
pub fn orthonormal_basis<'a>(blocks: impl IntoIterator<Item = &'a VertexSet>, n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for block in blocks {
        let mut v = vec![0.0; n];
        for i in block.iter() {
            v[i] = 1.0;
        }
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm < DEPENDENCE_TOL {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    basis
}

/// Orthogonal projection of `x` onto the span of an orthonormal `basis`.
pub fn project(basis: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for u in basis {
        let c = dot(u, x);
        for (o, ui) in out.iter_mut().zip(u) {
            *o += c * ui;
        }
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
