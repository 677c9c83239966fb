use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MrfInstance;
use crate::error::{Error, Result};
use crate::graph::{Graph, GridPos};

/// Parameters for random connected grid-subgraph instances with integer scores.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInstanceSpec {
    pub width: usize,
    pub height: usize,
    pub num_labels: usize,
    /// Inclusive range for every phi and psi entry.
    pub score_range: (i64, i64),
    /// Grow a random connected cell set of this size instead of using the
    /// whole rectangle.
    pub vertices: Option<usize>,
    /// Probability of keeping each grid edge that is not on the random
    /// spanning tree.
    pub extra_edge_prob: f64,
}

impl GridInstanceSpec {
    pub fn new(width: usize, height: usize, num_labels: usize, score_range: (i64, i64)) -> Self {
        GridInstanceSpec { width, height, num_labels, score_range, vertices: None, extra_edge_prob: 0.6 }
    }

    pub fn with_vertices(mut self, n: usize) -> Self {
        self.vertices = Some(n);
        self
    }

    pub fn with_extra_edge_prob(mut self, p: f64) -> Self {
        self.extra_edge_prob = p;
        self
    }
}

/// A random connected subgraph of a grid with uniform integer scores.
/// Deterministic in `seed`; vertex ids follow row-major cell order and the
/// graph carries grid coordinates.
pub fn random_instance(spec: &GridInstanceSpec, seed: u64) -> Result<MrfInstance> {
    let (w, h) = (spec.width, spec.height);
    if w == 0 || h == 0 {
        return Err(Error::InvalidSpec(format!("grid dimensions must be positive, got {w}x{h}")));
    }
    if spec.num_labels == 0 {
        return Err(Error::InvalidSpec("num_labels must be at least 1".into()));
    }
    let (lo, hi) = spec.score_range;
    if lo > hi {
        return Err(Error::InvalidSpec(format!("empty score range [{lo}, {hi}]")));
    }
    if !(0.0..=1.0).contains(&spec.extra_edge_prob) {
        return Err(Error::InvalidSpec(format!("extra_edge_prob {} outside [0, 1]", spec.extra_edge_prob)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let cells = match spec.vertices {
        None => (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).collect::<Vec<_>>(),
        Some(n) if n == 0 || n > w * h => {
            return Err(Error::InvalidSpec(format!("cannot pick {n} cells from a {w}x{h} grid")));
        }
        Some(n) => grow_cells(w, h, n, &mut rng),
    };

    let mut id_of = vec![usize::MAX; w * h];
    for (i, &(r, c)) in cells.iter().enumerate() {
        id_of[r * w + c] = i;
    }
    let present = |r: usize, c: usize| id_of[r * w + c] != usize::MAX;

    let mut candidates = Vec::new();
    for r in 0..h {
        for c in 0..w.saturating_sub(1) {
            if present(r, c) && present(r, c + 1) {
                candidates.push((id_of[r * w + c], id_of[r * w + c + 1]));
            }
        }
    }
    for r in 0..h.saturating_sub(1) {
        for c in 0..w {
            if present(r, c) && present(r + 1, c) {
                candidates.push((id_of[r * w + c], id_of[(r + 1) * w + c]));
            }
        }
    }

    // random spanning tree (Kruskal over shuffled candidates), then extras
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.shuffle(&mut rng);
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut keep = vec![false; candidates.len()];
    for &i in &order {
        let (a, b) = candidates[i];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            keep[i] = true;
        }
    }
    for k in keep.iter_mut() {
        if !*k {
            *k = rng.gen_bool(spec.extra_edge_prob);
        }
    }
    let edges: Vec<_> = candidates.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();

    let l = spec.num_labels;
    let mut draw = |n: usize| (0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect::<Vec<_>>();
    let phi = (0..cells.len()).map(|_| draw(l)).collect();
    let psi = (0..edges.len()).map(|_| draw(l * l)).collect();

    let coords = cells.iter().map(|&(row, col)| GridPos { row, col }).collect();
    let graph = Graph::new(cells.len(), edges)?.with_coords(coords)?;
    MrfInstance::checked(graph, l, phi, psi)
}

/// Random connected set of `n` cells, returned in row-major order.
fn grow_cells(w: usize, h: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let start = (rng.gen_range(0..h), rng.gen_range(0..w));
    let mut chosen = BTreeSet::from([start]);
    let mut frontier = BTreeSet::new();
    let push_neighbors = |(r, c): (usize, usize), chosen: &BTreeSet<_>, frontier: &mut BTreeSet<_>| {
        let mut cand = Vec::with_capacity(4);
        if r > 0 {
            cand.push((r - 1, c));
        }
        if r + 1 < h {
            cand.push((r + 1, c));
        }
        if c > 0 {
            cand.push((r, c - 1));
        }
        if c + 1 < w {
            cand.push((r, c + 1));
        }
        for x in cand {
            if !chosen.contains(&x) {
                frontier.insert(x);
            }
        }
    };
    push_neighbors(start, &chosen, &mut frontier);
    while chosen.len() < n {
        let pick = *frontier.iter().nth(rng.gen_range(0..frontier.len())).expect("frontier nonempty while grid has room");
        frontier.remove(&pick);
        chosen.insert(pick);
        push_neighbors(pick, &chosen, &mut frontier);
    }
    chosen.into_iter().collect()
}
