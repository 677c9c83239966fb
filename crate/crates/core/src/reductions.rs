//! Correlation clustering as a 4-label MRF, plus the Max-Cut and
//! 3-coloring gadgets used as hardness fixtures.

use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, Subgraph};
use crate::mrf::{random_instance, Assignment, GridInstanceSpec, MrfInstance, Score};

/// Largest vertex count the exhaustive clustering oracle accepts.
pub const CC_ORACLE_MAX_VERTICES: usize = 10;

/// Per-edge preference: `separate == false` wants the endpoints together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcEdge {
    pub separate: bool,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CcInstance {
    pub graph: Graph,
    pub edges: Vec<CcEdge>,
}

impl CcInstance {
    pub fn new(graph: Graph, edges: Vec<CcEdge>) -> Result<Self> {
        if edges.len() != graph.num_edges() {
            return Err(Error::InvalidSpec(format!("{} preferences for {} edges", edges.len(), graph.num_edges())));
        }
        if let Some(e) = edges.iter().position(|p| !p.reward.is_finite() || p.reward < 0.0) {
            return Err(Error::InvalidSpec(format!("edge {e} has reward {}, rewards must be finite and >= 0", edges[e].reward)));
        }
        Ok(CcInstance { graph, edges })
    }
}

/// Cluster id per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    pub clusters: Vec<usize>,
}

/// Same graph, four labels, zero phi; psi pays the reward exactly when the
/// edge's preference is met (equal labels for "together", different labels
/// for "separate").
pub fn cc_to_mrf(cc: &CcInstance) -> Result<MrfInstance> {
    const LABELS: usize = 4;
    if let Some(e) = cc.edges.iter().position(|p| p.reward < 0.0) {
        return Err(Error::InvalidSpec(format!("edge {e} has negative reward")));
    }
    let psi = cc
        .edges
        .iter()
        .map(|p| {
            let mut t = vec![0.0; LABELS * LABELS];
            for a in 0..LABELS {
                for b in 0..LABELS {
                    if (a == b) != p.separate {
                        t[a * LABELS + b] = p.reward;
                    }
                }
            }
            t
        })
        .collect();
    MrfInstance::checked(cc.graph.clone(), LABELS, vec![vec![0.0; LABELS]; cc.graph.num_vertices()], psi)
}

/// One cluster per maximal connected set of equally labeled vertices,
/// numbered in order of each cluster's smallest vertex.
pub fn labels_to_clustering(graph: &Graph, x: &Assignment) -> Clustering {
    let kept = graph.edges().iter().map(|&(u, v)| x[u] == x[v]).collect();
    let comps = connected_components(&Subgraph { graph, kept });
    let mut clusters = vec![0; graph.num_vertices()];
    for (id, c) in comps.iter().enumerate() {
        for &v in &c.vertices {
            clusters[v] = id;
        }
    }
    Clustering { clusters }
}

pub fn cc_value(cc: &CcInstance, clustering: &Clustering) -> Score {
    let c = &clustering.clusters;
    cc.graph
        .edges()
        .iter()
        .zip(&cc.edges)
        .filter(|(&(u, v), p)| (c[u] == c[v]) != p.separate)
        .map(|(_, p)| p.reward)
        .sum()
}

/// Best clustering by enumerating every set partition as a restricted
/// growth string. First maximum in enumeration order wins.
pub fn cc_brute_force(cc: &CcInstance) -> Result<(Clustering, Score)> {
    let n = cc.graph.num_vertices();
    if n > CC_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge { evaluations: bell_estimate(n), cap: CC_ORACLE_MAX_VERTICES as u64 });
    }
    let mut rgs = vec![0usize; n];
    let mut best = (Clustering { clusters: rgs.clone() }, f64::NEG_INFINITY);
    loop {
        let cand = Clustering { clusters: rgs.clone() };
        let value = cc_value(cc, &cand);
        if value > best.1 {
            best = (cand, value);
        }
        // next restricted growth string: a[i] <= 1 + max(a[..i])
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(best);
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn bell_estimate(n: usize) -> f64 {
    let mut row = vec![1.0f64];
    for _ in 1..=n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Random planar instance: a connected subgraph of a `width` x `height`
/// grid with `vertices` cells, fair-coin preferences and integer rewards in
/// `0..=max_reward`.
pub fn random_cc_instance(width: usize, height: usize, vertices: usize, max_reward: u32, seed: u64) -> Result<CcInstance> {
    let spec = GridInstanceSpec::new(width, height, 1, (0, 0)).with_vertices(vertices);
    let graph = random_instance(&spec, seed)?.graph().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xcc);
    let edges = (0..graph.num_edges())
        .map(|_| CcEdge { separate: rng.gen_bool(0.5), reward: rng.gen_range(0..=max_reward) as f64 })
        .collect();
    CcInstance::new(graph, edges)
}

/// Two labels, zero phi, psi = 1 on cut edges: the optimum is the max cut.
pub fn maxcut_gadget(graph: &Graph) -> MrfInstance {
    let psi = vec![vec![0.0, 1.0, 1.0, 0.0]; graph.num_edges()];
    MrfInstance::new(graph.clone(), 2, vec![vec![0.0; 2]; graph.num_vertices()], psi)
}

/// Three labels, zero phi, psi = -1 on monochromatic edges: the optimum is
/// 0 exactly when the graph is 3-colorable. Scores are nonpositive, so this
/// is for the exact solvers only.
pub fn coloring_gadget(graph: &Graph) -> MrfInstance {
    let mut t = vec![0.0; 9];
    for a in 0..3 {
        t[a * 3 + a] = -1.0;
    }
    MrfInstance::new(graph.clone(), 3, vec![vec![0.0; 3]; graph.num_vertices()], vec![t; graph.num_edges()])
}

/// `{"num_vertices": n, "edges": [{"u", "v", "p", "w"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcFile {
    pub num_vertices: usize,
    pub edges: Vec<CcFileEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcFileEdge {
    pub u: usize,
    pub v: usize,
    pub p: u8,
    pub w: f64,
}

impl CcFile {
    pub fn from_instance(cc: &CcInstance) -> Self {
        CcFile {
            num_vertices: cc.graph.num_vertices(),
            edges: cc
                .graph
                .edges()
                .iter()
                .zip(&cc.edges)
                .map(|(&(u, v), p)| CcFileEdge { u, v, p: p.separate as u8, w: p.reward })
                .collect(),
        }
    }

    pub fn into_instance(self) -> Result<CcInstance> {
        if let Some(e) = self.edges.iter().position(|e| e.p > 1) {
            return Err(Error::InvalidSpec(format!("edge {e} has preference {}, expected 0 or 1", self.edges[e].p)));
        }
        let graph = Graph::new(self.num_vertices, self.edges.iter().map(|e| (e.u, e.v)).collect())?;
        let violations = graph.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidInstance(violations));
        }
        let prefs = self.edges.iter().map(|e| CcEdge { separate: e.p == 1, reward: e.w }).collect();
        CcInstance::new(graph, prefs)
    }

    pub fn parse(text: &str) -> Result<CcInstance> {
        serde_json::from_str::<CcFile>(text)?.into_instance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrf::{brute_force_solve, evaluate};

    fn single(separate: bool) -> CcInstance {
        CcInstance::new(Graph::new(2, vec![(0, 1)]).unwrap(), vec![CcEdge { separate, reward: 5.0 }]).unwrap()
    }

    fn triangle(separate: bool) -> CcInstance {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        CcInstance::new(g, vec![CcEdge { separate, reward: 1.0 }; 3]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn single_edge_tables() {
        let m = cc_to_mrf(&single(true)).unwrap();
        assert_eq!(m.psi(0, 0, 0), 0.0);
        assert_eq!(m.psi(0, 0, 3), 5.0);
        assert_eq!(brute_force_solve(&m).unwrap().1, 5.0);
        let m = cc_to_mrf(&single(false)).unwrap();
        assert_eq!(m.psi(0, 2, 2), 5.0);
        assert_eq!(m.psi(0, 2, 1), 0.0);
        assert_eq!(brute_force_solve(&m).unwrap().1, 5.0);
    }

    #[test]
    fn triangle_all_separate() {
        let cc = triangle(true);
        assert_eq!(brute_force_solve(&cc_to_mrf(&cc).unwrap()).unwrap().1, 3.0);
        let (_, best) = cc_brute_force(&cc).unwrap();
        assert_eq!(best, 3.0);
        assert_eq!(cc_value(&cc, &Clustering { clusters: vec![0, 1, 2] }), 3.0);
    }

    #[test]
    fn cc_value_examples() {
        assert_eq!(cc_value(&single(true), &Clustering { clusters: vec![0, 1] }), 5.0);
        assert_eq!(cc_value(&triangle(false), &Clustering { clusters: vec![0, 0, 0] }), 3.0);
    }

    #[test]
    fn clustering_is_per_component() {
        let g = cycle(4);
        let one = labels_to_clustering(&g, &Assignment::new(vec![2; 4]));
        assert_eq!(one.clusters, vec![0; 4]);
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let c = labels_to_clustering(&path, &Assignment::from_one_based(&[1, 2, 1]).unwrap());
        assert_eq!(c.clusters, vec![0, 1, 2]);
    }

    #[test]
    fn value_identity_on_triangle() {
        let cc = triangle(true);
        let m = cc_to_mrf(&cc).unwrap();
        for code in 0..64 {
            let x = Assignment::new(vec![code / 16, (code / 4) % 4, code % 4]);
            let c = labels_to_clustering(&cc.graph, &x);
            assert_eq!(cc_value(&cc, &c), evaluate(&m, &x).unwrap());
        }
    }

    #[test]
    fn restricted_growth_enumerates_bell_numbers() {
        // every partition of 5 vertices is visited once: count distinct
        // canonical labelings through a zero-weight instance
        let g = Graph::new(5, vec![]).unwrap();
        let cc = CcInstance::new(g, vec![]).unwrap();
        assert!(cc_brute_force(&cc).is_ok());
        assert_eq!(bell_estimate(5), 52.0);
        let big = CcInstance::new(Graph::new(11, vec![]).unwrap(), vec![]).unwrap();
        assert!(cc_brute_force(&big).is_err());
    }

    #[test]
    fn gadget_optima() {
        assert_eq!(brute_force_solve(&maxcut_gadget(&cycle(4))).unwrap().1, 4.0);
        assert_eq!(brute_force_solve(&maxcut_gadget(&cycle(5))).unwrap().1, 4.0);
        assert_eq!(brute_force_solve(&maxcut_gadget(&complete(4))).unwrap().1, 4.0);
        assert_eq!(brute_force_solve(&coloring_gadget(&cycle(5))).unwrap().1, 0.0);
        assert_eq!(brute_force_solve(&coloring_gadget(&complete(4))).unwrap().1, -1.0);
        assert_eq!(brute_force_solve(&coloring_gadget(&Graph::new(1, vec![]).unwrap())).unwrap().1, 0.0);
    }

    #[test]
    fn rejects_negative_rewards() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        assert!(CcInstance::new(g, vec![CcEdge { separate: true, reward: -1.0 }]).is_err());
        let bad = r#"{"num_vertices": 2, "edges": [{"u": 0, "v": 1, "p": 1, "w": -2}]}"#;
        assert!(CcFile::parse(bad).is_err());
    }

    #[test]
    fn random_cc_is_seeded_and_nonnegative() {
        let a = random_cc_instance(4, 3, 8, 10, 5).unwrap();
        assert_eq!(a, random_cc_instance(4, 3, 8, 10, 5).unwrap());
        assert_eq!(a.graph.num_vertices(), 8);
        assert!(a.graph.is_connected());
        assert!(a.edges.iter().all(|p| (0.0..=10.0).contains(&p.reward)));
    }

    #[test]
    fn cc_json_round_trip() {
        let cc = triangle(true);
        let text = serde_json::to_string(&CcFile::from_instance(&cc)).unwrap();
        assert_eq!(CcFile::parse(&text).unwrap(), cc);
    }
}
