//! Exact MAP over a branch decomposition.
//!
//! Each node `v` of the rooted decomposition gets a table indexed by the
//! labels of its boundary `δ(v)` (sorted vertex ids, lowest id is the most
//! significant mixed-radix digit). An entry holds the best score of the
//! subgraph below `v` with the boundary fixed, counting phi of every vertex
//! of that subgraph (boundary included) and psi of every edge below `v`.
//! Merging two children sums their entries and subtracts phi once for each
//! vertex the two boundaries share, so the root's single entry is the
//! optimum of the whole objective.

use rayon::prelude::*;

use crate::decomp::{boundary_sets, BranchDecomposition};
use crate::error::{Error, Result};
use crate::mrf::{evaluate_unchecked, Assignment, MrfInstance, Score};

pub const DEFAULT_WIDTH_CAP: usize = 14;
pub const DEFAULT_BYTE_BUDGET: u64 = 1 << 30;

/// A DP table for one decomposition node.
#[derive(Debug, Clone, PartialEq)]
pub struct DpTable {
    /// Sorted boundary vertices; `values` and `choice` are indexed by their
    /// joint label code.
    pub boundary: Vec<usize>,
    /// Sorted vertices whose labels this node decides: the edge endpoints
    /// for a leaf, the union of the children's boundaries otherwise.
    pub scope: Vec<usize>,
    pub values: Vec<f64>,
    /// Best labeling of `scope` for each boundary code, as a code over `scope`.
    pub choice: Vec<usize>,
}

/// Mixed-radix code of `labels` (most significant first).
pub fn encode(labels: &[usize], num_labels: usize) -> usize {
    labels.iter().fold(0, |acc, &a| acc * num_labels + a)
}

pub fn decode(mut code: usize, len: usize, num_labels: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % num_labels;
        code /= num_labels;
    }
    out
}

fn strides(sub: &[usize], of: &[usize], num_labels: usize) -> Vec<usize> {
    // stride of each `of` vertex inside codes over `sub` (0 when absent)
    of.iter()
        .map(|w| match sub.binary_search(w) {
            Ok(i) => num_labels.pow((sub.len() - 1 - i) as u32),
            Err(_) => 0,
        })
        .collect()
}

/// Table for a leaf holding edge `edge`. `fixed` pins labels of selected
/// vertices; entries that contradict it stay at negative infinity.
pub fn leaf_table(instance: &MrfInstance, edge: usize, boundary: &[usize], fixed: Option<&[Option<usize>]>) -> DpTable {
    let l = instance.num_labels();
    let (first, second) = instance.graph().edge(edge);
    let scope = vec![first.min(second), first.max(second)];
    let size = l.pow(boundary.len() as u32);
    let mut values = vec![f64::NEG_INFINITY; size];
    let mut choice = vec![0; size];
    let bstride = strides(boundary, &scope, l);
    for a in 0..l {
        for b in 0..l {
            let (xs, xt) = (a, b);
            let (x_first, x_second) = if first < second { (xs, xt) } else { (xt, xs) };
            if let Some(fx) = fixed {
                if fx[first].is_some_and(|f| f != x_first) || fx[second].is_some_and(|f| f != x_second) {
                    continue;
                }
            }
            let value = instance.phi(first, x_first) + instance.phi(second, x_second) + instance.psi(edge, x_first, x_second);
            let code = xs * bstride[0] + xt * bstride[1];
            if value > values[code] {
                values[code] = value;
                choice[code] = xs * l + xt;
            }
        }
    }
    DpTable { boundary: boundary.to_vec(), scope, values, choice }
}

/// Combines two children into the parent table over `boundary`.
pub fn merge_children(instance: &MrfInstance, left: &DpTable, right: &DpTable, boundary: &[usize]) -> Result<DpTable> {
    let l = instance.num_labels();
    let mut scope: Vec<usize> = left.boundary.iter().chain(&right.boundary).copied().collect();
    scope.sort_unstable();
    scope.dedup();
    if let Some(w) = boundary.iter().find(|w| scope.binary_search(w).is_err()) {
        return Err(Error::Internal(format!("parent boundary vertex {w} is on neither child boundary")));
    }
    let shared: Vec<bool> = scope
        .iter()
        .map(|w| left.boundary.binary_search(w).is_ok() && right.boundary.binary_search(w).is_ok())
        .collect();
    let ls = strides(&left.boundary, &scope, l);
    let rs = strides(&right.boundary, &scope, l);
    let ps = strides(boundary, &scope, l);

    let size = l.pow(boundary.len() as u32);
    let mut values = vec![f64::NEG_INFINITY; size];
    let mut choice = vec![0; size];
    let width = scope.len();
    let mut digits = vec![0usize; width];
    let (mut lc, mut rc, mut pc) = (0usize, 0usize, 0usize);
    let total = l.pow(width as u32);
    for code in 0..total {
        let lv = left.values[lc];
        let rv = right.values[rc];
        if lv > f64::NEG_INFINITY && rv > f64::NEG_INFINITY {
            let mut overlap = 0.0;
            for (i, &w) in scope.iter().enumerate() {
                if shared[i] {
                    overlap += instance.phi(w, digits[i]);
                }
            }
            let value = lv + rv - overlap;
            if value > values[pc] {
                values[pc] = value;
                choice[pc] = code;
            }
        }
        // odometer step, last digit fastest
        for i in (0..width).rev() {
            if digits[i] + 1 < l {
                digits[i] += 1;
                lc += ls[i];
                rc += rs[i];
                pc += ps[i];
                break;
            }
            lc -= (l - 1) * ls[i];
            rc -= (l - 1) * rs[i];
            pc -= (l - 1) * ps[i];
            digits[i] = 0;
        }
    }
    Ok(DpTable { boundary: boundary.to_vec(), scope, values, choice })
}

/// Result of an exact solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub assignment: Assignment,
    pub score: Score,
    /// Largest boundary over non-root nodes; the decomposition's width.
    pub width: usize,
}

/// Configuration for the exact solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    /// Largest boundary allowed at any node; merges may see twice this.
    pub width_cap: usize,
    /// Upper bound on bytes held by all DP tables together.
    pub byte_budget: u64,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver { width_cap: DEFAULT_WIDTH_CAP, byte_budget: DEFAULT_BYTE_BUDGET }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the ambient
/// rayon pool when `workers` is 0. Results do not depend on the count.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Exact optimum of `instance` guided by `decomp`.
pub fn solve_exact(instance: &MrfInstance, decomp: &BranchDecomposition, width_cap: usize) -> Result<(Assignment, Score)> {
    let s = ExactSolver { width_cap, ..ExactSolver::default() }.solve(instance, decomp)?;
    Ok((s.assignment, s.score))
}

impl ExactSolver {
    pub fn solve(&self, instance: &MrfInstance, decomp: &BranchDecomposition) -> Result<ExactSolution> {
        self.solve_fixed(instance, decomp, None)
    }

    /// Exact optimum subject to the labels pinned in `fixed` (one slot per
    /// vertex, `None` = free).
    pub fn solve_fixed(
        &self,
        instance: &MrfInstance,
        decomp: &BranchDecomposition,
        fixed: Option<&[Option<usize>]>,
    ) -> Result<ExactSolution> {
        let violations = instance.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidInstance(violations));
        }
        let graph = instance.graph();
        let l = instance.num_labels();
        if let Some(fx) = fixed {
            if fx.len() != graph.num_vertices() || fx.iter().flatten().any(|&a| a >= l) {
                return Err(Error::InvalidAssignment("pinned labels do not fit the instance".into()));
            }
        }
        if let Some(vertex) = graph.find_unreachable() {
            return Err(Error::Disconnected { vertex });
        }
        let pinned = |v: usize| fixed.and_then(|f| f[v]);

        if graph.num_edges() == 0 {
            return self.finish(instance, vec![best_vertex_label(instance, 0, pinned(0))], 0);
        }
        let violations = decomp.validate(graph);
        if !violations.is_empty() {
            return Err(Error::InvalidDecomposition(violations));
        }
        if graph.num_edges() == 1 {
            let t = leaf_table(instance, 0, &[], fixed);
            let (a, b) = graph.edge(0);
            let labels = decode(t.choice[0], 2, l);
            let mut x = vec![0; 2];
            x[a.min(b)] = labels[0];
            x[a.max(b)] = labels[1];
            return self.finish(instance, x, 2);
        }

        let rooted = decomp.root(0);
        let sets = boundary_sets(&rooted, graph);
        let nodes = rooted.num_nodes();
        let width = (0..nodes).filter(|&v| v != rooted.root).map(|v| sets.of(v).len()).max().unwrap_or(0);
        if width > self.width_cap {
            return Err(Error::WidthExceeded { width, cap: self.width_cap });
        }
        let mut bytes: u128 = 0;
        for v in 0..nodes {
            let children = &rooted.children[v];
            if children.len() == 2 {
                let mut u: Vec<usize> = sets.of(children[0]).iter().chain(sets.of(children[1])).copied().collect();
                u.sort_unstable();
                u.dedup();
                if u.len() > 2 * self.width_cap {
                    return Err(Error::WidthExceeded { width: u.len(), cap: 2 * self.width_cap });
                }
                if (l as f64).powi(u.len() as i32) > (1u64 << 62) as f64 {
                    return Err(Error::WidthExceeded { width: u.len(), cap: u.len() - 1 });
                }
            }
            bytes += (l as u128).pow(sets.of(v).len() as u32) * 16;
        }
        if bytes > self.byte_budget as u128 {
            return Err(Error::MemoryBudget { bytes, budget: self.byte_budget });
        }

        // bottom-up by height so that siblings can be filled in parallel
        let heights = rooted.heights();
        let top = heights[rooted.root];
        let mut by_height: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for v in 0..nodes {
            by_height[heights[v]].push(v);
        }
        let mut tables: Vec<Option<DpTable>> = vec![None; nodes];
        for level in &by_height {
            let built: Vec<Result<DpTable>> = level
                .par_iter()
                .map(|&v| match rooted.leaf_edge[v] {
                    Some(e) => Ok(leaf_table(instance, e, sets.of(v), fixed)),
                    None => {
                        let c = &rooted.children[v];
                        let left = tables[c[0]].as_ref().expect("child table built at a lower height");
                        let right = tables[c[1]].as_ref().expect("child table built at a lower height");
                        merge_children(instance, left, right, sets.of(v))
                    }
                })
                .collect();
            for (&v, t) in level.iter().zip(built) {
                tables[v] = Some(t?);
                for &c in &rooted.children[v] {
                    // only the choices are needed from here on
                    if let Some(child) = tables[c].as_mut() {
                        child.values = Vec::new();
                    }
                }
            }
        }

        // top-down reconstruction
        let mut x = vec![usize::MAX; graph.num_vertices()];
        let mut stack = vec![(rooted.root, 0usize)];
        while let Some((v, code)) = stack.pop() {
            let t = tables[v].as_ref().expect("every node has a table");
            let labels = decode(t.choice[code], t.scope.len(), l);
            for (&w, &a) in t.scope.iter().zip(&labels) {
                x[w] = a;
            }
            for &c in &rooted.children[v] {
                let child = tables[c].as_ref().expect("every node has a table");
                let cl: Vec<usize> = child
                    .boundary
                    .iter()
                    .map(|w| labels[t.scope.binary_search(w).expect("child boundary inside parent scope")])
                    .collect();
                stack.push((c, encode(&cl, l)));
            }
        }
        if x.contains(&usize::MAX) {
            return Err(Error::Internal("reconstruction left a vertex unlabeled".into()));
        }
        self.finish(instance, x, width)
    }

    fn finish(&self, instance: &MrfInstance, x: Vec<usize>, width: usize) -> Result<ExactSolution> {
        let score = evaluate_unchecked(instance, &x);
        Ok(ExactSolution { assignment: Assignment::new(x), score, width })
    }
}

/// Best label for an isolated vertex; lowest label on ties.
pub(crate) fn best_vertex_label(instance: &MrfInstance, v: usize, pinned: Option<usize>) -> usize {
    if let Some(a) = pinned {
        return a;
    }
    let row = instance.phi_row(v);
    let mut best = 0;
    for a in 1..row.len() {
        if row[a] > row[best] {
            best = a;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{build_caterpillar, build_heuristic};
    use crate::graph::Graph;
    use crate::mrf::brute_force_solve;

    fn single_edge() -> MrfInstance {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        MrfInstance::checked(g, 2, vec![vec![0.0, 3.0], vec![1.0, 0.0]], vec![vec![2.0, 0.0, 0.0, 4.0]]).unwrap()
    }

    #[test]
    fn codes_round_trip() {
        for code in 0..81 {
            assert_eq!(encode(&decode(code, 4, 3), 3), code);
        }
        assert_eq!(encode(&[1, 0, 2], 3), 11);
    }

    #[test]
    fn single_edge_by_hand() {
        let inst = single_edge();
        let (x, s) = solve_exact(&inst, &build_caterpillar(&[0]), 14).unwrap();
        assert_eq!((x.to_one_based(), s), (vec![2, 2], 7.0));
    }

    #[test]
    fn leaf_table_shapes() {
        let inst = single_edge();
        let both = leaf_table(&inst, 0, &[0, 1], None);
        assert_eq!(both.values, vec![3.0, 0.0, 4.0, 7.0]);
        let one = leaf_table(&inst, 0, &[0], None);
        // vertex 0 fixed, vertex 1 maximized
        assert_eq!(one.values, vec![3.0, 7.0]);
        let none = leaf_table(&inst, 0, &[], None);
        assert_eq!(none.values, vec![7.0]);
        assert_eq!(none.choice, vec![3]);
    }

    #[test]
    fn leaf_table_respects_pins() {
        let inst = single_edge();
        let t = leaf_table(&inst, 0, &[], Some(&[Some(0), None]));
        assert_eq!(t.values, vec![3.0]);
    }

    #[test]
    fn merge_subtracts_shared_phi() {
        // path 0 - 1 - 2, shared vertex 1 with phi = [10, 0]
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let psi = vec![vec![1.0, 0.0, 0.0, 2.0], vec![3.0, 0.0, 0.0, 1.0]];
        let inst = MrfInstance::checked(g, 2, vec![vec![0.0, 1.0], vec![10.0, 0.0], vec![2.0, 0.0]], psi).unwrap();
        let left = leaf_table(&inst, 0, &[1], None);
        let right = leaf_table(&inst, 1, &[1], None);
        let parent = merge_children(&inst, &left, &right, &[1]).unwrap();
        assert_eq!(parent.values[0], left.values[0] + right.values[0] - 10.0);
        let root = merge_children(&inst, &left, &right, &[]).unwrap();
        assert_eq!(root.values[0], brute_force_solve(&inst).unwrap().1);
    }

    #[test]
    fn merge_of_disjoint_children_adds() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let psi = vec![vec![1.0, 0.0, 5.0, 2.0], vec![3.0, 0.0, 0.0, 1.0]];
        let inst = MrfInstance::new(g, 2, vec![vec![1.0, 0.0]; 4], psi);
        let left = leaf_table(&inst, 0, &[0], None);
        let right = leaf_table(&inst, 1, &[3], None);
        let parent = merge_children(&inst, &left, &right, &[0, 3]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(parent.values[a * 2 + b], left.values[a] + right.values[b]);
            }
        }
    }

    #[test]
    fn merge_rejects_foreign_boundary() {
        let inst = single_edge();
        let t = leaf_table(&inst, 0, &[0], None);
        assert!(matches!(merge_children(&inst, &t, &t, &[1]), Err(Error::Internal(_))));
    }

    #[test]
    fn triangle_maxcut() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = MrfInstance::checked(g.clone(), 2, vec![vec![0.0; 2]; 3], vec![vec![0.0, 1.0, 1.0, 0.0]; 3]).unwrap();
        let d = build_heuristic(&g).unwrap();
        let (x, s) = solve_exact(&inst, &d, 14).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(crate::mrf::evaluate(&inst, &x).unwrap(), 2.0);
    }

    #[test]
    fn grid_3x4_three_labels_matches_oracle() {
        use crate::mrf::{random_instance, GridInstanceSpec};
        let inst = random_instance(&GridInstanceSpec::new(3, 4, 3, (0, 10)), 11).unwrap();
        let (_, want) = brute_force_solve(&inst).unwrap();
        for d in [build_heuristic(inst.graph()).unwrap(), crate::decomp::build_grid_band(inst.graph(), 12).unwrap()] {
            let (x, got) = solve_exact(&inst, &d, 14).unwrap();
            assert_eq!(got, want);
            assert_eq!(crate::mrf::evaluate(&inst, &x).unwrap(), want);
        }
    }

    #[test]
    fn path_of_three_edges_matches_oracle() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let phi = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 0.0], vec![0.0, 1.0]];
        let psi = vec![vec![2.0, 0.0, 0.0, 2.0]; 3];
        let inst = MrfInstance::checked(g, 2, phi, psi).unwrap();
        let (_, want) = brute_force_solve(&inst).unwrap();
        let (_, got) = solve_exact(&inst, &build_caterpillar(&[0, 1, 2]), 14).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn width_cap_is_enforced() {
        let g = crate::graph::grid_graph(4, 4).unwrap();
        let inst = MrfInstance::new(g.clone(), 2, vec![vec![0.0; 2]; 16], vec![vec![0.0; 4]; g.num_edges()]);
        let d = build_heuristic(&g).unwrap();
        assert!(matches!(solve_exact(&inst, &d, 2), Err(Error::WidthExceeded { .. })));
        let tight = ExactSolver { width_cap: 14, byte_budget: 64 };
        assert!(matches!(tight.solve(&inst, &d), Err(Error::MemoryBudget { .. })));
    }

    #[test]
    fn rejects_disconnected() {
        let g = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let inst = MrfInstance::new(g, 2, vec![vec![0.0; 2]; 4], vec![vec![0.0; 4]; 2]);
        let d = build_caterpillar(&[0, 1]);
        assert!(matches!(solve_exact(&inst, &d, 14), Err(Error::Disconnected { .. })));
    }
}
