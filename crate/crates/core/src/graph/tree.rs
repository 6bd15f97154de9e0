use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};

/// A spanning tree with sorted adjacency lists, rooted where it was grown.
#[derive(Clone, Debug)]
pub struct SpanningTree {
    n: usize,
    root: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl SpanningTree {
    /// Wraps an explicit tree edge list; fails unless the edges form a tree
    /// on `0..n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Graph::from_edges(n, edges)?;
        if g.edge_count() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "a tree on {n} vertices has {} edges, got {}",
                n - 1,
                g.edge_count()
            )));
        }
        let tree = SpanningTree {
            n,
            root: 0,
            edges: g.edges().to_vec(),
            adjacency: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
        };
        if tree.bfs_order(0).len() != n {
            return Err(Error::NotConnected);
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Tree edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).expect("tree edges form a simple graph")
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }
}

/// Breadth-first spanning tree from `root`, visiting neighbors in ascending id.
pub fn spanning_tree(g: &Graph, root: usize) -> Result<SpanningTree> {
    let n = g.n();
    if root >= n {
        return Err(Error::InvalidVertex { vertex: root, n });
    }
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                edges.push((u.min(w), u.max(w)));
                queue.push_back(w);
            }
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::NotConnected);
    }
    edges.sort_unstable();
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(SpanningTree {
        n,
        root,
        edges,
        adjacency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_cycle, build_path, build_torus, is_connected_subset, VertexSet};

    #[test]
    fn path_is_its_own_tree() {
        let g = build_path(4).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        assert_eq!(t.edges(), g.edges());
    }

    #[test]
    fn cycle_bfs_tree() {
        let t = spanning_tree(&build_cycle(4).unwrap(), 0).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn torus_tree_edges_are_graph_edges() {
        let g = build_torus(3, 3).unwrap();
        let t = spanning_tree(&g, 0).unwrap();
        assert_eq!(t.edges().len(), 8);
        assert!(t.edges().iter().all(|&(u, v)| g.has_edge(u, v)));
        assert!(is_connected_subset(&t.to_graph(), &VertexSet::full(9)).unwrap());
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(spanning_tree(&g, 0), Err(Error::NotConnected)));
    }

    #[test]
    fn explicit_tree_validation() {
        assert!(SpanningTree::from_edges(4, [(0, 1), (0, 2), (0, 3)]).is_ok());
        assert!(SpanningTree::from_edges(4, [(0, 1), (1, 2)]).is_err());
        assert!(SpanningTree::from_edges(4, [(0, 1), (1, 2), (0, 2)]).is_err());
    }
}
