//! Branch decompositions: unrooted binary trees whose leaves are the edges
//! of a graph, their width, rooting, and per-node boundary sets.

mod build;

pub use build::{build_caterpillar, build_grid_band, build_heuristic, grid_band_bound};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchDecomposition {
    adj: Vec<Vec<usize>>,
    leaf_edge: Vec<Option<usize>>,
}

impl BranchDecomposition {
    /// Assembles a tree from adjacency lists and the leaf-to-edge map
    /// without checking it; use [`BranchDecomposition::validate`].
    pub fn from_parts(adj: Vec<Vec<usize>>, leaf_edge: Vec<Option<usize>>) -> Self {
        BranchDecomposition { adj, leaf_edge }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn leaf_edge(&self, node: usize) -> Option<usize> {
        self.leaf_edge[node]
    }

    /// Tree edges as `(a, b)` with `a < b`, sorted.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn validate(&self, graph: &Graph) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut bad = |what: String| out.push(Violation::Decomposition { what });
        let n = self.adj.len();
        let m = graph.num_edges();
        if n == 0 {
            bad("tree has no nodes".into());
            return out;
        }
        if self.leaf_edge.len() != n {
            bad(format!("leaf map has {} entries for {n} nodes", self.leaf_edge.len()));
            return out;
        }

        // shape: symmetric adjacency, n - 1 edges, connected
        let mut degree_sum = 0;
        for (a, ns) in self.adj.iter().enumerate() {
            for &b in ns {
                if b >= n || b == a || !self.adj[b].contains(&a) {
                    bad(format!("tree link {a} -> {b} is not a proper undirected edge"));
                    return out;
                }
            }
            degree_sum += ns.len();
        }
        if degree_sum != 2 * (n - 1) {
            bad(format!("tree has {} links for {n} nodes, expected {}", degree_sum / 2, n - 1));
        } else {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(a) = stack.pop() {
                for &b in &self.adj[a] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            if let Some(x) = seen.iter().position(|s| !s) {
                bad(format!("tree node {x} is disconnected"));
            }
        }

        for (node, ns) in self.adj.iter().enumerate() {
            let is_leaf = ns.len() <= 1;
            match (is_leaf, self.leaf_edge[node]) {
                (true, None) => bad(format!("leaf node {node} carries no graph edge")),
                (false, Some(e)) => bad(format!("internal node {node} carries graph edge {e}")),
                (false, None) if ns.len() != 3 => bad(format!("internal node {node} has degree {}", ns.len())),
                _ => {}
            }
        }

        let mut owner = vec![None; m];
        let mut leaves = 0;
        for (node, e) in self.leaf_edge.iter().enumerate() {
            let Some(e) = *e else { continue };
            leaves += 1;
            if e >= m {
                bad(format!("leaf node {node} maps to nonexistent edge {e}"));
            } else if let Some(prev) = owner[e] {
                bad(format!("edge {e} is mapped by leaves {prev} and {node}"));
            } else {
                owner[e] = Some(node);
            }
        }
        if leaves != m {
            bad(format!("{leaves} leaves for {m} graph edges"));
        }
        out
    }

    /// Largest number of vertices shared across any tree-edge cut.
    /// A single-edge graph has no cut; its width is taken as 2, the size of
    /// the lone leaf's endpoint set.
    pub fn width(&self, graph: &Graph) -> usize {
        match graph.num_edges() {
            0 => 0,
            1 => 2,
            _ => {
                let rooted = self.root(0);
                let sets = boundary_sets(&rooted, graph);
                (0..rooted.num_nodes())
                    .filter(|&v| v != rooted.root)
                    .map(|v| sets.of(v).len())
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Subdivides tree edge `tree_edge` (an index into [`Self::tree_edges`])
    /// with a new root node whose id is `num_nodes()`.
    ///
    /// # Panics
    /// If the tree has no edges (single-edge graphs) or the index is out of range.
    pub fn root(&self, tree_edge: usize) -> RootedDecomposition {
        let (a, b) = self.tree_edges()[tree_edge];
        let n = self.adj.len();
        let root = n;
        let mut parent = vec![None; n + 1];
        let mut children = vec![Vec::new(); n + 1];
        let mut visited = vec![false; n + 1];
        visited[root] = true;
        let mut queue = VecDeque::new();
        for x in [a, b] {
            parent[x] = Some(root);
            children[root].push(x);
            visited[x] = true;
            queue.push_back(x);
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if !visited[y] {
                    visited[y] = true;
                    parent[y] = Some(x);
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        let mut leaf_edge = self.leaf_edge.clone();
        leaf_edge.push(None);
        RootedDecomposition { root, parent, children, leaf_edge }
    }

    pub fn checked_root(&self, graph: &Graph, tree_edge: usize) -> Result<RootedDecomposition> {
        let v = self.validate(graph);
        if !v.is_empty() {
            return Err(Error::InvalidDecomposition(v));
        }
        let count = self.num_nodes() - 1;
        if tree_edge >= count {
            return Err(Error::InvalidSpec(format!("tree edge {tree_edge} out of range 0..{count}")));
        }
        Ok(self.root(tree_edge))
    }
}

/// A branch decomposition hung from a degree-2 root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedDecomposition {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub leaf_edge: Vec<Option<usize>>,
}

impl RootedDecomposition {
    pub fn num_nodes(&self) -> usize {
        self.parent.len()
    }

    /// Every node after all of its descendants.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.num_nodes());
        let mut queue = VecDeque::from([self.root]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            queue.extend(self.children[x].iter().copied());
        }
        order.reverse();
        order
    }

    /// Height above the deepest leaf below each node; leaves are 0.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.num_nodes()];
        for v in self.postorder() {
            h[v] = self.children[v].iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h
    }

    pub fn dump(&self) -> DecompositionDump {
        DecompositionDump { root: self.root, parent: self.parent.clone(), leaf_edge: self.leaf_edge.clone() }
    }
}

/// Debug serialization of a rooted decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDump {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub leaf_edge: Vec<Option<usize>>,
}

/// Per-node sorted boundary vertex lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySets {
    sets: Vec<Vec<usize>>,
}

impl BoundarySets {
    pub fn of(&self, node: usize) -> &[usize] {
        &self.sets[node]
    }

    pub fn max_len(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Vertices of each node's edge set that also touch an edge outside it.
///
/// Bottom-up: a parent's boundary is drawn from the union of its children's
/// boundaries, keeping the vertices whose incident edges are not all below
/// the parent.
pub fn boundary_sets(rooted: &RootedDecomposition, graph: &Graph) -> BoundarySets {
    // (vertex, number of incident edges below this node), boundary only
    let mut counted: Vec<Vec<(usize, usize)>> = vec![Vec::new(); rooted.num_nodes()];
    for v in rooted.postorder() {
        let merged = if let Some(e) = rooted.leaf_edge[v] {
            let (a, b) = graph.edge(e);
            let mut pair = vec![(a.min(b), 1), (a.max(b), 1)];
            pair.dedup_by_key(|x| x.0);
            pair
        } else {
            let mut acc: Vec<(usize, usize)> = Vec::new();
            for &c in &rooted.children[v] {
                acc = merge_counts(&acc, &counted[c]);
            }
            acc
        };
        counted[v] = merged.into_iter().filter(|&(w, cnt)| cnt < graph.degree(w)).collect();
    }
    BoundarySets { sets: counted.into_iter().map(|l| l.into_iter().map(|(w, _)| w).collect()).collect() }
}

fn merge_counts(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid_graph;

    fn path(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn validate_catches_bad_leaf_maps() {
        let g = grid_graph(3, 3).unwrap();
        let d = build_heuristic(&g).unwrap();
        assert!(d.validate(&g).is_empty());

        let leaf = (0..d.num_nodes()).find(|&v| d.leaf_edge(v).is_some()).unwrap();
        let mut broken = d.clone();
        broken.leaf_edge[leaf] = Some(99);
        assert_eq!(broken.validate(&g).len(), 1);

        let other = (0..d.num_nodes()).filter(|&v| d.leaf_edge(v).is_some()).nth(1).unwrap();
        let mut dup = d.clone();
        dup.leaf_edge[other] = d.leaf_edge(leaf);
        assert_eq!(dup.validate(&g).len(), 1);
    }

    #[test]
    fn rooting_two_edges() {
        let g = path(3);
        let d = build_caterpillar(&[0, 1]);
        let r = d.root(0);
        assert_eq!(r.children[r.root].len(), 2);
        assert!(r.children[r.root].iter().all(|&c| r.leaf_edge[c].is_some()));
        let b = boundary_sets(&r, &g);
        assert!(b.of(r.root).is_empty());
    }

    #[test]
    fn rooted_node_count() {
        let g = grid_graph(3, 3).unwrap();
        let d = build_heuristic(&g).unwrap();
        let r = d.root(0);
        assert_eq!(r.num_nodes(), 2 * g.num_edges() - 1);
        for v in 0..r.num_nodes() {
            assert!(v == r.root || r.leaf_edge[v].is_some() || r.children[v].len() == 2);
        }
    }

    #[test]
    fn leaf_and_root_boundaries() {
        let g = grid_graph(3, 3).unwrap();
        let d = build_heuristic(&g).unwrap();
        let r = d.root(0);
        let b = boundary_sets(&r, &g);
        assert!(b.of(r.root).is_empty());
        // edge (4, 5) in the middle: both endpoints have other edges
        let e = g.edges().iter().position(|&x| x == (4, 5)).unwrap();
        let leaf = (0..r.num_nodes()).find(|&v| r.leaf_edge[v] == Some(e)).unwrap();
        assert_eq!(b.of(leaf), &[4, 5]);
    }

    #[test]
    fn single_edge_width_convention() {
        let g = path(2);
        let d = build_caterpillar(&[0]);
        assert!(d.validate(&g).is_empty());
        assert_eq!(d.width(&g), 2);
    }

    #[test]
    fn dump_is_json() {
        let g = path(4);
        let r = build_caterpillar(&[0, 1, 2]).checked_root(&g, 0).unwrap();
        let text = serde_json::to_string(&r.dump()).unwrap();
        let back: DecompositionDump = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r.dump());
    }
}
