//! Oracles written against the raw tables only, so they share no code
//! with the solvers they check.

#![allow(dead_code)]

use mrf_ptas::graph::Graph;
use mrf_ptas::mrf::{random_instance, GridInstanceSpec, MrfInstance};
use mrf_ptas::reductions::CcInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn score(inst: &MrfInstance, x: &[usize]) -> f64 {
    let mut total = 0.0;
    for (v, &a) in x.iter().enumerate() {
        total += inst.phi_row(v)[a];
    }
    let l = inst.num_labels();
    for (e, &(u, v)) in inst.graph().edges().iter().enumerate() {
        total += inst.psi_table(e)[x[u] * l + x[v]];
    }
    total
}

/// Every assignment with its score, odometer order.
pub fn all_scores(inst: &MrfInstance) -> Vec<(Vec<usize>, f64)> {
    let n = inst.num_vertices();
    let l = inst.num_labels();
    let mut x = vec![0; n];
    let mut out = Vec::new();
    loop {
        out.push((x.clone(), score(inst, &x)));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < l {
                break;
            }
            x[i] = 0;
        }
    }
}

pub fn optimum(inst: &MrfInstance) -> f64 {
    all_scores(inst).into_iter().map(|(_, s)| s).fold(f64::NEG_INFINITY, f64::max)
}

pub fn argmax_set(inst: &MrfInstance) -> Vec<Vec<usize>> {
    let all = all_scores(inst);
    let best = all.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    all.into_iter().filter(|(_, s)| *s == best).map(|(x, _)| x).collect()
}

/// Connected grid subgraph with at most `max_n` vertices.
pub fn small_instance(seed: u64, max_n: usize, labels: usize, range: (i64, i64)) -> MrfInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let w = rng.gen_range(2..=4);
    let h = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=max_n.min(w * h));
    let spec = GridInstanceSpec::new(w, h, labels, range).with_vertices(n);
    random_instance(&spec, seed).expect("generator accepts these specs")
}

pub fn exhaustive_maxcut(g: &Graph) -> usize {
    let n = g.num_vertices();
    (0u32..1 << n)
        .map(|mask| g.edges().iter().filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count())
        .max()
        .unwrap_or(0)
}

/// Simple graph with each pair present with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Best correlation clustering value over all set partitions, by
/// assigning vertices one at a time to an existing block or a new one.
pub fn best_partition(cc: &CcInstance) -> f64 {
    fn go(cc: &CcInstance, block: &mut Vec<usize>, used: usize, best: &mut f64) {
        let n = cc.graph.num_vertices();
        if block.len() == n {
            let mut value = 0.0;
            for (e, &(u, v)) in cc.graph.edges().iter().enumerate() {
                let pref = cc.edges[e];
                if (block[u] == block[v]) != pref.separate {
                    value += pref.reward;
                }
            }
            *best = best.max(value);
            return;
        }
        for b in 0..=used {
            block.push(b);
            go(cc, block, used.max(b + 1), best);
            block.pop();
        }
    }
    let mut best = f64::NEG_INFINITY;
    go(cc, &mut Vec::new(), 0, &mut best);
    best
}
