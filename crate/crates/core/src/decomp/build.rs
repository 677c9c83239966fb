use std::collections::BTreeSet;

use super::BranchDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Caterpillar over the given edge order: a spine of internal nodes with
/// one leaf hanging off each, and two leaves at each end.
///
/// Leaf `i` is node `i` and carries `order[i]`.
pub fn build_caterpillar(order: &[usize]) -> BranchDecomposition {
    let m = order.len();
    let leaf_edge: Vec<Option<usize>> = order.iter().map(|&e| Some(e)).collect();
    match m {
        0 => BranchDecomposition::from_parts(Vec::new(), Vec::new()),
        1 => BranchDecomposition::from_parts(vec![Vec::new()], leaf_edge),
        2 => BranchDecomposition::from_parts(vec![vec![1], vec![0]], leaf_edge),
        _ => {
            let spine = m - 2;
            let mut adj = vec![Vec::new(); m + spine];
            let mut link = |a: usize, b: usize| {
                adj[a].push(b);
                adj[b].push(a);
            };
            let s = |i: usize| m + i;
            link(s(0), 0);
            for i in 0..spine {
                link(s(i), i + 1);
                if i + 1 < spine {
                    link(s(i), s(i + 1));
                }
            }
            link(s(spine - 1), m - 1);
            let mut leaf_edge = leaf_edge;
            leaf_edge.resize(m + spine, None);
            BranchDecomposition::from_parts(adj, leaf_edge)
        }
    }
}

/// Width bound the grid-band builder guarantees for a band of `k` levels.
pub fn grid_band_bound(k: usize) -> usize {
    2 * k + 2
}

/// Column sweep for a connected grid subgraph whose BFS levels span at most
/// `k` values. Edges are ordered by (min column, min row, horizontal before
/// vertical) and strung into a caterpillar; the achieved width is measured
/// and must not exceed `2k + 2`.
pub fn build_grid_band(graph: &Graph, k: usize) -> Result<BranchDecomposition> {
    let coords = graph
        .coords()
        .ok_or_else(|| Error::InvalidSpec("grid-band builder needs grid coordinates".into()))?;
    if k == 0 {
        return Err(Error::InvalidSpec("band depth k must be at least 1".into()));
    }
    if graph.num_edges() == 0 {
        return Err(Error::InvalidSpec("cannot decompose a graph without edges".into()));
    }
    let mut order: Vec<usize> = (0..graph.num_edges()).collect();
    order.sort_by_key(|&e| {
        let (u, v) = graph.edge(e);
        let (a, b) = (coords[u], coords[v]);
        let vertical = a.col == b.col;
        (a.col.min(b.col), a.row.min(b.row), vertical, e)
    });
    let decomp = build_caterpillar(&order);
    let width = decomp.width(graph);
    let bound = grid_band_bound(k);
    if width > bound {
        return Err(Error::BuildFailure { width, bound });
    }
    Ok(decomp)
}

/// Generic builder: greedy minimum-degree elimination gives a tree
/// decomposition, each graph edge is hung as a leaf off the first bag that
/// covers it, and the tree is then trimmed to a ternary shape. The width is
/// at most the largest bag; no better bound is claimed.
pub fn build_heuristic(graph: &Graph) -> Result<BranchDecomposition> {
    let n = graph.num_vertices();
    let m = graph.num_edges();
    if m == 0 {
        return Err(Error::InvalidSpec("cannot decompose a graph without edges".into()));
    }
    if let Some(vertex) = graph.find_unreachable() {
        return Err(Error::Disconnected { vertex });
    }

    let mut nbrs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in graph.edges() {
        if u != v {
            nbrs[u].insert(v);
            nbrs[v].insert(u);
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (nbrs[v].len(), v)).collect();
    let mut position = vec![usize::MAX; n];
    let mut eliminated_nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut step = 0;
    while let Some((_, v)) = queue.pop_first() {
        position[v] = step;
        step += 1;
        let ns: Vec<usize> = nbrs[v].iter().copied().collect();
        for &a in &ns {
            queue.remove(&(nbrs[a].len(), a));
            nbrs[a].remove(&v);
        }
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
        }
        for &a in &ns {
            queue.insert((nbrs[a].len(), a));
        }
        eliminated_nbrs[v] = ns;
    }

    // bag node v = {v} + its neighbours at elimination time; its parent is
    // the earliest-eliminated of those neighbours
    let total = n + m;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); total];
    for v in 0..n {
        if let Some(&p) = eliminated_nbrs[v].iter().min_by_key(|&&a| position[a]) {
            adj[v].insert(p);
            adj[p].insert(v);
        }
    }
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let bag = if position[u] < position[v] { u } else { v };
        adj[n + e].insert(bag);
        adj[bag].insert(n + e);
    }
    let is_leaf = |x: usize| (n..n + m).contains(&x);
    Ok(normalize(adj, is_leaf, n, m))
}

/// Turns a tree whose designated leaves are graph edges into a branch
/// decomposition: drop dangling non-leaf nodes, split nodes of degree > 3,
/// splice out degree-2 nodes. Node ids are compacted with the `m` leaves
/// first (in edge order).
fn normalize(mut adj: Vec<BTreeSet<usize>>, is_leaf: impl Fn(usize) -> bool, leaf_base: usize, m: usize) -> BranchDecomposition {
    let mut alive = vec![true; adj.len()];

    let mut stack: Vec<usize> = (0..adj.len()).filter(|&x| !is_leaf(x) && adj[x].len() <= 1).collect();
    while let Some(x) = stack.pop() {
        if !alive[x] || adj[x].len() > 1 {
            continue;
        }
        alive[x] = false;
        if let Some(&y) = adj[x].iter().next() {
            adj[y].remove(&x);
            if !is_leaf(y) && adj[y].len() <= 1 {
                stack.push(y);
            }
        }
        adj[x].clear();
    }

    let mut x = 0;
    while x < adj.len() {
        if alive[x] && !is_leaf(x) && adj[x].len() > 3 {
            let fresh = adj.len();
            let moved: Vec<usize> = adj[x].iter().copied().skip(2).collect();
            adj.push(BTreeSet::new());
            alive.push(true);
            for y in moved {
                adj[x].remove(&y);
                adj[y].remove(&x);
                adj[y].insert(fresh);
                adj[fresh].insert(y);
            }
            adj[x].insert(fresh);
            adj[fresh].insert(x);
        }
        x += 1;
    }

    for x in 0..adj.len() {
        if alive[x] && !is_leaf(x) && adj[x].len() == 2 {
            let ends: Vec<usize> = adj[x].iter().copied().collect();
            let (a, b) = (ends[0], ends[1]);
            adj[a].remove(&x);
            adj[b].remove(&x);
            adj[a].insert(b);
            adj[b].insert(a);
            adj[x].clear();
            alive[x] = false;
        }
    }

    let mut new_id = vec![usize::MAX; adj.len()];
    for e in 0..m {
        new_id[leaf_base + e] = e;
    }
    let mut next = m;
    for x in 0..adj.len() {
        if alive[x] && !is_leaf(x) {
            new_id[x] = next;
            next += 1;
        }
    }
    let mut out_adj = vec![Vec::new(); next];
    let mut leaf_edge = vec![None; next];
    for x in 0..adj.len() {
        if !alive[x] {
            continue;
        }
        let id = new_id[x];
        out_adj[id] = adj[x].iter().map(|&y| new_id[y]).collect();
        out_adj[id].sort_unstable();
        if is_leaf(x) {
            leaf_edge[id] = Some(x - leaf_base);
        }
    }
    BranchDecomposition::from_parts(out_adj, leaf_edge)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid_graph;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn caterpillar_shapes_validate() {
        for m in 1..8 {
            let g = Graph::new(m + 1, (0..m).map(|i| (i, i + 1)).collect()).unwrap();
            let order: Vec<usize> = (0..m).rev().collect();
            let d = build_caterpillar(&order);
            assert!(d.validate(&g).is_empty(), "m={m}: {:?}", d.validate(&g));
        }
    }

    #[test]
    fn heuristic_on_triangle_and_cycles() {
        let tri = cycle(3);
        let d = build_heuristic(&tri).unwrap();
        assert!(d.validate(&tri).is_empty());
        assert_eq!(d.width(&tri), 2);
        for n in 4..=10 {
            let g = cycle(n);
            let d = build_heuristic(&g).unwrap();
            assert!(d.validate(&g).is_empty());
            assert!(d.width(&g) <= 3, "C{n} width {}", d.width(&g));
        }
    }

    #[test]
    fn heuristic_single_and_double_edge() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let d = build_heuristic(&g).unwrap();
        assert_eq!(d.num_nodes(), 1);
        assert!(d.validate(&g).is_empty());
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let d = build_heuristic(&g).unwrap();
        assert_eq!(d.num_nodes(), 2);
        assert!(d.validate(&g).is_empty());
    }

    #[test]
    fn heuristic_rejects_disconnected() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(build_heuristic(&g), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn grid_band_needs_coords() {
        let g = cycle(4);
        assert!(build_grid_band(&g, 2).is_err());
    }

    #[test]
    fn grid_band_on_path_row() {
        let g = grid_graph(6, 1).unwrap();
        let d = build_grid_band(&g, 1).unwrap();
        assert!(d.validate(&g).is_empty());
        assert!(d.width(&g) <= 2);
    }

    #[test]
    fn grid_band_errors_past_bound() {
        // a full 6x6 grid spans 11 levels; squeezing it into k = 1 must fail
        let g = grid_graph(6, 6).unwrap();
        assert!(matches!(build_grid_band(&g, 1), Err(Error::BuildFailure { bound: 4, .. })));
    }
}
