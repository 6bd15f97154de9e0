#![allow(dead_code)]

use clustersense::dendrogram::{balanced_binary_dendrogram, build_dendrogram};
use clustersense::graph::{build_cycle, build_path, build_torus, spanning_tree, Graph};
use clustersense::numerics::SeededRandomness;
use clustersense::{Dendrogram, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn rng(seed: u64) -> SeededRandomness {
    SeededRandomness::new(seed, 0)
}

/// Random connected graph: a random recursive tree plus `extra` chords.
pub fn random_connected(rng: &mut impl Rng, n: usize, extra: usize) -> Graph {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((labels[i], labels[j]));
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let dup = edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
        if a != b && !dup {
            edges.push((a, b));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random tree on `n` vertices as a graph.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Graph {
    random_connected(rng, n, 0)
}

/// A graph with a valid dendrogram, drawn from several families.
pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> (Graph, Dendrogram) {
    match rng.random_range(0..5) {
        0 => {
            let n = rng.random_range(2..=max_n);
            let g = build_path(n).unwrap();
            let d = balanced_binary_dendrogram(n).unwrap();
            (g, d)
        }
        1 => {
            let n = rng.random_range(3..=max_n.max(3));
            let g = build_cycle(n).unwrap();
            let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
            (g, d)
        }
        2 => {
            let side = ((max_n as f64).sqrt() as usize).max(3);
            let (r, c) = (rng.random_range(3..=side), rng.random_range(3..=side));
            let g = build_torus(r, c).unwrap();
            let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
            (g, d)
        }
        _ => {
            let n = rng.random_range(2..=max_n);
            let extra = rng.random_range(0..=n);
            let g = random_connected(rng, n, extra);
            let root = rng.random_range(0..n);
            let d = build_dendrogram(&spanning_tree(&g, root).unwrap());
            (g, d)
        }
    }
}

/// Union of up to `max_blocks` random dendrogram blocks; never empty.
pub fn union_of_blocks(rng: &mut impl Rng, d: &Dendrogram, max_blocks: usize) -> VertexSet {
    let count = rng.random_range(1..=max_blocks);
    let mut set = VertexSet::empty();
    for _ in 0..count {
        let b = rng.random_range(0..d.len());
        set = set.union(&d.block(b).vertices);
    }
    set
}

/// Brute-force cut size.
pub fn brute_cut(g: &Graph, c: &VertexSet) -> usize {
    g.edges()
        .iter()
        .filter(|&&(a, b)| c.contains(a) != c.contains(b))
        .count()
}

use clustersense::recovery::ParamInputs;

pub fn inputs(g: &Graph, d: &Dendrogram, rho: usize, m: f64, sigma: f64, delta: f64, k: usize) -> ParamInputs {
    ParamInputs {
        n: g.n(),
        budget: m,
        max_degree: g.max_degree(),
        rho,
        height: d.height(),
        sigma,
        delta,
        cluster_size: k,
    }
}

/// Exhaustive argmax of `1_C^T x / sqrt(|C|)` over nonempty `C`.
pub fn brute_force_best(x: &[f64]) -> (f64, Vec<usize>) {
    let n = x.len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for mask in 1u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let score = members.iter().map(|&i| x[i]).sum::<f64>() / (members.len() as f64).sqrt();
        if score > best.0 {
            best = (score, members);
        }
    }
    best
}

pub fn indicator(set: &VertexSet, n: usize, scale: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for i in set.iter() {
        v[i] = scale;
    }
    v
}
