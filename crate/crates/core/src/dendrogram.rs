//! Hierarchical partitions of a graph into connected blocks.
//!
//! A dendrogram is a tree whose root block is the whole vertex set, whose
//! leaves are singletons, and where the children of every block partition it
//! into connected pieces of at most half (rounded up) its size. Blocks are
//! stored in breadth-first order, so a block's parent always precedes it.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{is_connected_subset, Graph, SpanningTree, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: VertexSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub level: usize,
}

impl Block {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dendrogram {
    n: usize,
    blocks: Vec<Block>,
    height: usize,
}

impl Dendrogram {
    /// Assembles a dendrogram from `(vertices, parent)` pairs without
    /// checking any of the structural invariants; use [`validate`] for that.
    /// Entry 0 must be the root and every parent must precede its child.
    pub fn from_blocks(n: usize, spec: Vec<(VertexSet, Option<usize>)>) -> Result<Self> {
        let mut blocks: Vec<Block> = Vec::with_capacity(spec.len());
        for (i, (vertices, parent)) in spec.into_iter().enumerate() {
            vertices.check_bounds(n)?;
            let level = match (i, parent) {
                (0, None) => 0,
                (0, Some(_)) => {
                    return Err(Error::InvalidArgument("block 0 must be the root".into()))
                }
                (_, Some(p)) if p < i => {
                    blocks[p].children.push(i);
                    blocks[p].level + 1
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "block {i} needs a parent preceding it"
                    )))
                }
            };
            blocks.push(Block {
                vertices,
                parent,
                children: Vec::new(),
                level,
            });
        }
        if blocks.is_empty() {
            return Err(Error::InvalidArgument("dendrogram needs a root".into()));
        }
        let height = blocks.iter().map(|b| b.level).max().unwrap_or(0);
        Ok(Dendrogram { n, blocks, height })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Height `L`: the deepest block level, the root being level 0.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_fan_out(&self) -> usize {
        self.blocks.iter().map(|b| b.children.len()).max().unwrap_or(0)
    }

    /// Indented text dump: one block per line as `level size {v0,v1,...}`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            let b = &self.blocks[i];
            let _ = writeln!(
                out,
                "{:indent$}{} {} {}",
                "",
                b.level,
                b.len(),
                b.vertices,
                indent = 2 * b.level
            );
            stack.extend(b.children.iter().rev());
        }
        out
    }
}

/// `ceil(log2 n)`, zero for `n <= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// A connected subset of a spanning tree, re-indexed locally. Local ids
/// follow the global order, so neighbor lists stay sorted by global id.
struct LocalTree {
    vertices: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl LocalTree {
    fn new(tree: &SpanningTree, vertices: &[usize], scratch: &mut [usize]) -> Self {
        for (i, &v) in vertices.iter().enumerate() {
            scratch[v] = i;
        }
        let adjacency = vertices
            .iter()
            .map(|&v| {
                tree.neighbors(v)
                    .iter()
                    .filter(|&&w| scratch[w] != usize::MAX)
                    .map(|&w| scratch[w])
                    .collect()
            })
            .collect();
        for &v in vertices {
            scratch[v] = usize::MAX;
        }
        LocalTree {
            vertices: vertices.to_vec(),
            adjacency,
        }
    }

    fn len(&self) -> usize {
        self.vertices.len()
    }

    fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Parents and subtree sizes when rooted at `root`; `None` if the local
    /// graph is not connected.
    fn rooted_sizes(&self, root: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let s = self.len();
        let mut parent = vec![usize::MAX; s];
        let mut order = Vec::with_capacity(s);
        parent[root] = root;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        if order.len() != s {
            return None;
        }
        let mut size = vec![1usize; s];
        for &u in order.iter().skip(1).rev() {
            size[parent[u]] += size[u];
        }
        Some((parent, size))
    }

    /// Largest component of the tree minus `v`, as `(size, neighbor of v in
    /// it)`; ties go to the neighbor with the smaller id.
    fn largest_component(&self, v: usize, parent: &[usize], size: &[usize]) -> Option<(usize, usize)> {
        let total = self.len();
        self.adjacency[v]
            .iter()
            .map(|&nb| {
                let s = if parent[v] == nb { total - size[v] } else { size[nb] };
                (s, nb)
            })
            .fold(None, |best, (s, nb)| match best {
                Some((bs, _)) if bs >= s => best,
                _ => Some((s, nb)),
            })
    }

    fn balance(&self, start: usize) -> usize {
        let (parent, size) = self.rooted_sizes(start).expect("local tree is connected");
        let mut v = start;
        loop {
            let Some((s1, w)) = self.largest_component(v, &parent, &size) else {
                return v;
            };
            let (s2, _) = self
                .largest_component(w, &parent, &size)
                .expect("w has v as a neighbor");
            if s2 >= s1 {
                return v;
            }
            v = w;
        }
    }

    /// Components of the tree minus `v`, as sorted local index lists.
    fn components_without(&self, v: usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        self.adjacency[v]
            .iter()
            .map(|&nb| {
                let mut comp = vec![nb];
                seen[nb] = true;
                let mut i = 0;
                while i < comp.len() {
                    let u = comp[i];
                    i += 1;
                    for &w in &self.adjacency[u] {
                        if !seen[w] {
                            seen[w] = true;
                            comp.push(w);
                        }
                    }
                }
                comp.sort_unstable();
                comp
            })
            .collect()
    }
}

/// Balancing vertex of the subtree of `tree` spanned by `subtree`, found by
/// walking from `start` toward the largest remaining component until the
/// step stops shrinking it.
pub fn find_balance(tree: &SpanningTree, subtree: &VertexSet, start: usize) -> Result<usize> {
    subtree.check_bounds(tree.n())?;
    let Ok(start_local) = subtree.as_slice().binary_search(&start) else {
        return Err(Error::InvalidVertex {
            vertex: start,
            n: tree.n(),
        });
    };
    let mut scratch = vec![usize::MAX; tree.n()];
    let local = LocalTree::new(tree, subtree.as_slice(), &mut scratch);
    if local.edge_count() + 1 != local.len() || local.rooted_sizes(0).is_none() {
        return Err(Error::InvalidArgument(
            "vertex set does not span a subtree".into(),
        ));
    }
    Ok(local.vertices[local.balance(start_local)])
}

/// Recursively splits `tree` at balancing vertices. The balancing vertex
/// joins the smallest component (ties by smallest vertex id); blocks of size
/// two split straight into singletons.
pub fn build_dendrogram(tree: &SpanningTree) -> Dendrogram {
    let n = tree.n();
    let mut scratch = vec![usize::MAX; n];
    let mut spec: Vec<(VertexSet, Option<usize>)> = vec![(VertexSet::full(n), None)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let vertices = spec[i].0.as_slice().to_vec();
        let children: Vec<Vec<usize>> = match vertices.len() {
            0 | 1 => continue,
            2 => vec![vec![vertices[0]], vec![vertices[1]]],
            _ => {
                let local = LocalTree::new(tree, &vertices, &mut scratch);
                let v = local.balance(0);
                let mut comps = local.components_without(v);
                comps.sort_by_key(|c| (c.len(), c[0]));
                let smallest = &mut comps[0];
                smallest.push(v);
                smallest.sort_unstable();
                let mut comps: Vec<Vec<usize>> = comps
                    .into_iter()
                    .map(|c| c.into_iter().map(|u| local.vertices[u]).collect())
                    .collect();
                comps.sort_by_key(|c: &Vec<usize>| c[0]);
                comps
            }
        };
        for child in children {
            spec.push((VertexSet::from_sorted_unchecked(child), Some(i)));
            queue.push_back(spec.len() - 1);
        }
    }
    Dendrogram::from_blocks(n, spec).expect("construction yields a well-formed tree")
}

/// Dendrogram of the path `0..n` halving `{a..b}` into `{a..mid}` and
/// `{mid+1..b}` with `mid = (a + b) / 2`.
pub fn balanced_binary_dendrogram(n: usize) -> Result<Dendrogram> {
    if n == 0 {
        return Err(Error::InvalidSize("dendrogram needs n >= 1".into()));
    }
    let mut spec = vec![(VertexSet::full(n), None)];
    let mut ranges = vec![(0usize, n - 1)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (a, b) = ranges[i];
        if a == b {
            continue;
        }
        let mid = (a + b) / 2;
        for (lo, hi) in [(a, mid), (mid + 1, b)] {
            spec.push((VertexSet::range(lo, hi), Some(i)));
            ranges.push((lo, hi));
            queue.push_back(spec.len() - 1);
        }
    }
    Dendrogram::from_blocks(n, spec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexCount { dendrogram: usize, graph: usize },
    RootNotFull { size: usize },
    LeafNotSingleton { block: usize, size: usize },
    ChildrenNotPartition { block: usize },
    Disconnected { block: usize },
    FanOut { block: usize, fan_out: usize, max_degree: usize },
    Unbalanced { block: usize, size: usize, parent_size: usize },
    TooTall { height: usize, limit: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::VertexCount { dendrogram, graph } => {
                write!(f, "dendrogram covers {dendrogram} vertices, graph has {graph}")
            }
            Violation::RootNotFull { size } => write!(f, "root has {size} vertices, not all of V"),
            Violation::LeafNotSingleton { block, size } => {
                write!(f, "leaf block {block} has {size} vertices")
            }
            Violation::ChildrenNotPartition { block } => {
                write!(f, "children of block {block} do not partition it")
            }
            Violation::Disconnected { block } => write!(f, "block {block} is not connected"),
            Violation::FanOut {
                block,
                fan_out,
                max_degree,
            } => write!(f, "block {block} has {fan_out} children, max degree is {max_degree}"),
            Violation::Unbalanced {
                block,
                size,
                parent_size,
            } => write!(f, "block {block} has {size} vertices, parent has {parent_size}"),
            Violation::TooTall { height, limit } => {
                write!(f, "height {height} exceeds ceil(log2 n) = {limit}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub height: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid, L={}", self.height);
        }
        write!(f, "invalid, L={}, {} violation(s)", self.height, self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of `d` against `g`.
pub fn validate(d: &Dendrogram, g: &Graph) -> ValidationReport {
    let mut violations = Vec::new();
    if d.n() != g.n() {
        violations.push(Violation::VertexCount {
            dendrogram: d.n(),
            graph: g.n(),
        });
        return ValidationReport {
            height: d.height(),
            violations,
        };
    }
    let root = d.block(d.root());
    if root.vertices != VertexSet::full(g.n()) {
        violations.push(Violation::RootNotFull { size: root.len() });
    }
    let max_degree = g.max_degree();
    for (i, b) in d.blocks().iter().enumerate() {
        if b.is_empty() || !is_connected_subset(g, &b.vertices).unwrap_or(false) {
            violations.push(Violation::Disconnected { block: i });
        }
        if b.is_leaf() {
            if b.len() != 1 {
                violations.push(Violation::LeafNotSingleton {
                    block: i,
                    size: b.len(),
                });
            }
            continue;
        }
        let mut union: Vec<usize> = b
            .children
            .iter()
            .flat_map(|&c| d.block(c).vertices.iter())
            .collect();
        union.sort_unstable();
        if union != b.vertices.as_slice() {
            violations.push(Violation::ChildrenNotPartition { block: i });
        }
        if b.children.len() > max_degree {
            violations.push(Violation::FanOut {
                block: i,
                fan_out: b.children.len(),
                max_degree,
            });
        }
        let cap = b.len().div_ceil(2);
        for &c in &b.children {
            let size = d.block(c).len();
            if size > cap {
                violations.push(Violation::Unbalanced {
                    block: c,
                    size,
                    parent_size: b.len(),
                });
            }
        }
    }
    let limit = ceil_log2(g.n());
    if d.height() > limit {
        violations.push(Violation::TooTall {
            height: d.height(),
            limit,
        });
    }
    ValidationReport {
        height: d.height(),
        violations,
    }
}

/// How a cluster sits in a dendrogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStats {
    /// Number of impure blocks at each level `0..=L`.
    pub impure_per_level: Vec<usize>,
    /// Fully active blocks whose parent is impure (or the root if active).
    pub maximal_blocks: Vec<VertexSet>,
    /// Size of the smallest maximal block, if any.
    pub min_maximal_size: Option<usize>,
    pub impure_total: usize,
}

pub fn block_stats(d: &Dendrogram, cstar: &VertexSet) -> Result<BlockStats> {
    cstar.check_bounds(d.n())?;
    let active = cstar.mask(d.n());
    let overlap: Vec<usize> = d
        .blocks()
        .iter()
        .map(|b| b.vertices.iter().filter(|&v| active[v]).count())
        .collect();
    let mut impure_per_level = vec![0usize; d.height() + 1];
    for (b, &o) in d.blocks().iter().zip(&overlap) {
        if o > 0 && o < b.len() {
            impure_per_level[b.level] += 1;
        }
    }
    let mut maximal_blocks = Vec::new();
    let mut stack = vec![d.root()];
    while let Some(i) = stack.pop() {
        let b = d.block(i);
        if overlap[i] == b.len() {
            maximal_blocks.push(b.vertices.clone());
        } else if overlap[i] > 0 {
            stack.extend(b.children.iter().rev());
        }
    }
    let min_maximal_size = maximal_blocks.iter().map(VertexSet::len).min();
    Ok(BlockStats {
        impure_total: impure_per_level.iter().sum(),
        impure_per_level,
        maximal_blocks,
        min_maximal_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_path, build_torus, spanning_tree};

    fn path_tree(n: usize) -> SpanningTree {
        spanning_tree(&build_path(n).unwrap(), 0).unwrap()
    }

    #[test]
    fn path_centroid() {
        let t = path_tree(5);
        assert_eq!(find_balance(&t, &VertexSet::full(5), 0).unwrap(), 2);
    }

    #[test]
    fn star_center() {
        let t = SpanningTree::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for leaf in 1..5 {
            assert_eq!(find_balance(&t, &VertexSet::full(5), leaf).unwrap(), 0);
        }
    }

    #[test]
    fn balance_on_subtree() {
        let t = path_tree(10);
        assert_eq!(find_balance(&t, &VertexSet::range(4, 8), 8).unwrap(), 6);
        assert!(find_balance(&t, &VertexSet::range(4, 8), 2).is_err());
        assert!(find_balance(&t, &VertexSet::new([1, 3]), 1).is_err());
    }

    #[test]
    fn two_vertex_path() {
        let d = build_dendrogram(&path_tree(2));
        assert_eq!(d.len(), 3);
        assert_eq!(d.block(1).vertices, VertexSet::new([0]));
        assert_eq!(d.block(2).vertices, VertexSet::new([1]));
    }

    #[test]
    fn path_of_eight() {
        let g = build_path(8).unwrap();
        let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
        assert_eq!(d.height(), 3);
        assert!(validate(&d, &g).is_valid());
    }

    #[test]
    fn lattice_two_by_four() {
        let edges = (0..2)
            .flat_map(|r| (0..3).map(move |c| (r * 4 + c, r * 4 + c + 1)))
            .chain((0..4).map(|c| (c, 4 + c)));
        let g = Graph::from_edges(8, edges).unwrap();
        let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
        assert_eq!(d.block(0).len(), 8);
        assert!(validate(&d, &g).is_valid(), "{}", validate(&d, &g));
    }

    #[test]
    fn binary_shapes() {
        let d = balanced_binary_dendrogram(8).unwrap();
        assert_eq!(d.height(), 3);
        assert_eq!(d.block(1).vertices, VertexSet::range(0, 3));
        assert_eq!(d.block(2).vertices, VertexSet::range(4, 7));
        assert_eq!(d.blocks().iter().filter(|b| b.level == 2).count(), 4);
        let d5 = balanced_binary_dendrogram(5).unwrap();
        assert_eq!((d5.block(1).len(), d5.block(2).len()), (3, 2));
        let d512 = balanced_binary_dendrogram(512).unwrap();
        assert_eq!(d512.height(), 9);
        let report = validate(&d512, &build_path(512).unwrap());
        assert_eq!(report.to_string(), "valid, L=9");
    }

    #[test]
    fn validator_flags_disconnected_block() {
        let g = build_path(4).unwrap();
        let d = Dendrogram::from_blocks(
            4,
            vec![
                (VertexSet::full(4), None),
                (VertexSet::new([0, 2]), Some(0)),
                (VertexSet::new([1, 3]), Some(0)),
                (VertexSet::new([0]), Some(1)),
                (VertexSet::new([2]), Some(1)),
                (VertexSet::new([1]), Some(2)),
                (VertexSet::new([3]), Some(2)),
            ],
        )
        .unwrap();
        let report = validate(&d, &g);
        assert_eq!(
            report.violations,
            vec![Violation::Disconnected { block: 1 }, Violation::Disconnected { block: 2 }]
        );
    }

    #[test]
    fn validator_flags_structure() {
        let g = build_path(3).unwrap();
        let d = Dendrogram::from_blocks(
            3,
            vec![(VertexSet::full(3), None), (VertexSet::new([0, 1]), Some(0))],
        )
        .unwrap();
        let v = validate(&d, &g).violations;
        assert!(v.contains(&Violation::ChildrenNotPartition { block: 0 }));
        assert!(v.contains(&Violation::LeafNotSingleton { block: 1, size: 2 }));
        assert!(!v.iter().any(|x| matches!(x, Violation::Unbalanced { .. })));
    }

    #[test]
    fn maximal_blocks_examples() {
        let d = balanced_binary_dendrogram(8).unwrap();
        let s = block_stats(&d, &VertexSet::range(0, 3)).unwrap();
        assert_eq!(s.maximal_blocks, vec![VertexSet::range(0, 3)]);
        assert_eq!(s.min_maximal_size, Some(4));

        let s = block_stats(&d, &VertexSet::range(1, 4)).unwrap();
        assert_eq!(
            s.maximal_blocks,
            vec![VertexSet::new([1]), VertexSet::new([2, 3]), VertexSet::new([4])]
        );
        assert_eq!(s.min_maximal_size, Some(1));
        assert_eq!(s.impure_per_level, vec![1, 2, 2, 0]);

        let s = block_stats(&d, &VertexSet::empty()).unwrap();
        assert!(s.maximal_blocks.is_empty());
        assert_eq!(s.impure_total, 0);
    }

    #[test]
    fn dump_format() {
        let d = balanced_binary_dendrogram(2).unwrap();
        assert_eq!(d.dump(), "0 2 {0,1}\n  1 1 {0}\n  1 1 {1}\n");
    }

    #[test]
    fn torus_dendrogram_is_valid() {
        let g = build_torus(6, 7).unwrap();
        let d = build_dendrogram(&spanning_tree(&g, 0).unwrap());
        assert!(validate(&d, &g).is_valid(), "{}", validate(&d, &g));
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<_> = [1, 2, 3, 4, 5, 8, 9, 512, 513].iter().map(|&n| ceil_log2(n)).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 4, 9, 10]);
    }
}
