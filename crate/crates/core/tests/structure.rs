mod common;

use std::collections::BTreeSet;

use clustersense::dendrogram::{block_stats, build_dendrogram, find_balance, validate};
use clustersense::graph::{cut_size, is_connected_subset, spanning_tree, SpanningTree};
use clustersense::recovery::partial_target;
use clustersense::VertexSet;
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn largest_component_without(tree: &SpanningTree, v: usize) -> usize {
    let n = tree.n();
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in tree.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vertex_set_matches_btreeset(a in proptest::collection::vec(0usize..40, 0..30),
                                   b in proptest::collection::vec(0usize..40, 0..30)) {
        let (sa, sb) = (VertexSet::new(a.clone()), VertexSet::new(b.clone()));
        let (ta, tb): (BTreeSet<_>, BTreeSet<_>) = (a.into_iter().collect(), b.into_iter().collect());
        prop_assert_eq!(sa.clone().into_vec(), ta.iter().copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.intersection_len(&sb), ta.intersection(&tb).count());
        prop_assert_eq!(sa.union(&sb).into_vec(), ta.union(&tb).copied().collect::<Vec<_>>());
        prop_assert_eq!(sa.complement(40).len(), 40 - ta.len());
        prop_assert_eq!(sa.is_subset_of(&sb), ta.is_subset(&tb));
    }

    #[test]
    fn cut_size_matches_brute_force(seed in any::<u64>(), n in 2usize..30) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, n, n);
        let c = VertexSet::new((0..n).filter(|_| r.random_bool(0.4)));
        prop_assert_eq!(cut_size(&g, &c).unwrap(), brute_cut(&g, &c));
        prop_assert_eq!(cut_size(&g, &c.complement(n)).unwrap(), brute_cut(&g, &c));
    }

    #[test]
    fn find_balance_is_a_centroid(seed in any::<u64>(), n in 1usize..16) {
        let mut r = rng(seed);
        let g = random_tree(&mut r, n);
        let tree = spanning_tree(&g, 0).unwrap();
        let start = r.random_range(0..n);
        let v = find_balance(&tree, &VertexSet::full(n), start).unwrap();
        let centroids: Vec<usize> = (0..n)
            .filter(|&u| 2 * largest_component_without(&tree, u) <= n)
            .collect();
        prop_assert!(!centroids.is_empty());
        prop_assert!(centroids.contains(&v), "{} not in {:?}", v, centroids);
    }

    #[test]
    fn built_dendrograms_are_valid(seed in any::<u64>(), n in 3usize..80) {
        let mut r = rng(seed);
        let extra = r.random_range(0..=2 * n);
        let g = random_connected(&mut r, n, extra);
        let root = r.random_range(0..n);
        let d = build_dendrogram(&spanning_tree(&g, root).unwrap());
        let report = validate(&d, &g);
        prop_assert!(report.is_valid(), "{}", report);
        for b in d.blocks() {
            prop_assert!(is_connected_subset(&g, &b.vertices).unwrap());
        }
    }

    #[test]
    fn maximal_blocks_partition_the_cluster(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, d) = random_instance(&mut r, 40);
        let c = union_of_blocks(&mut r, &d, 3);
        let stats = block_stats(&d, &c).unwrap();
        let total: usize = stats.maximal_blocks.iter().map(VertexSet::len).sum();
        prop_assert_eq!(total, c.len());
        let union = stats.maximal_blocks.iter().fold(VertexSet::empty(), |acc, b| acc.union(b));
        prop_assert_eq!(&union, &c);
        prop_assert_eq!(partial_target(&stats, 1).unwrap(), c.clone());
        prop_assert!(partial_target(&stats, c.len() + 1).unwrap().is_empty());
    }
}

/// Impure blocks per level never exceed the cut size, on 100 random
/// instances with random connected clusters.
#[test]
fn impure_blocks_per_level_bounded_by_cut() {
    let mut r = rng(7);
    for _ in 0..100 {
        let (g, d) = random_instance(&mut r, 64);
        let c = if r.random_bool(0.5) {
            union_of_blocks(&mut r, &d, 3)
        } else {
            VertexSet::new((0..g.n()).filter(|_| r.random_bool(0.3)))
        };
        let rho = cut_size(&g, &c).unwrap();
        let stats = block_stats(&d, &c).unwrap();
        for (level, &count) in stats.impure_per_level.iter().enumerate() {
            assert!(count <= rho, "level {level}: {count} impure blocks, cut {rho}");
        }
    }
}
