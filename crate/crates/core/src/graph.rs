//! Undirected simple graphs, BFS levels from a root, and the level-class
//! edge deletion that splits a planar graph into bounded-depth slabs.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// An undirected graph with a fixed edge order.
///
/// Edge endpoints keep the order they were given in; pairwise score tables
/// are indexed `[first endpoint label][second endpoint label]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    coords: Option<Vec<GridPos>>,
}

/// Position of a vertex on the integer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPos {
    pub row: usize,
    pub col: usize,
}

impl Graph {
    /// Builds a graph. Endpoints must be in range; self-loops and parallel
    /// edges are accepted here and reported by [`Graph::validate`].
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); num_vertices];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::InvalidSpec(format!(
                    "edge {id} ({u}, {v}) has an endpoint outside 0..{num_vertices}"
                )));
            }
            adjacency[u].push((v, id));
            if u != v {
                adjacency[v].push((u, id));
            }
        }
        Ok(Graph { num_vertices, edges, adjacency, coords: None })
    }

    /// Attaches grid coordinates, one per vertex.
    pub fn with_coords(mut self, coords: Vec<GridPos>) -> Result<Self> {
        if coords.len() != self.num_vertices {
            return Err(Error::InvalidSpec(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                self.num_vertices
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// `(neighbor, edge id)` pairs incident to `v`, in edge-id order.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn coords(&self) -> Option<&[GridPos]> {
        self.coords.as_deref()
    }

    /// Reports self-loops and duplicate edges.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                out.push(Violation::Graph { what: format!("edge {id} is a self-loop on vertex {u}") });
                continue;
            }
            if !seen.insert((u.min(v), u.max(v))) {
                out.push(Violation::Graph { what: format!("edge {id} ({u}, {v}) duplicates an earlier edge") });
            }
        }
        out
    }

    /// First vertex not reachable from vertex 0, if any.
    pub fn find_unreachable(&self) -> Option<usize> {
        if self.num_vertices == 0 {
            return None;
        }
        let seen = self.reach_from(0);
        seen.iter().position(|s| !s)
    }

    pub fn is_connected(&self) -> bool {
        self.find_unreachable().is_none()
    }

    fn reach_from(&self, root: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Copies a component out as a standalone graph. Local vertex `i` is
    /// `component.vertices[i]`; local edge `i` is `component.edges[i]` with
    /// its endpoint order preserved. Coordinates are carried along.
    pub fn extract(&self, component: &Component) -> Graph {
        let mut local = vec![usize::MAX; self.num_vertices];
        for (i, &v) in component.vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = component
            .edges
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (local[u], local[v])
            })
            .collect();
        let g = Graph::new(component.vertices.len(), edges).expect("component edges lie inside the component");
        match &self.coords {
            Some(c) => Graph { coords: Some(component.vertices.iter().map(|&v| c[v]).collect()), ..g },
            None => g,
        }
    }
}

/// Builds the 4-connected `width` x `height` grid.
///
/// Vertex id is `row * width + col`. Edges: every horizontal edge in
/// row-major order, then every vertical edge in row-major order.
pub fn grid_graph(width: usize, height: usize) -> Result<Graph> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidSpec(format!("grid dimensions must be positive, got {width}x{height}")));
    }
    let id = |r: usize, c: usize| r * width + c;
    let mut edges = Vec::with_capacity(width * (height - 1) + height * (width - 1));
    for r in 0..height {
        for c in 0..width - 1 {
            edges.push((id(r, c), id(r, c + 1)));
        }
    }
    for r in 0..height - 1 {
        for c in 0..width {
            edges.push((id(r, c), id(r + 1, c)));
        }
    }
    let coords = (0..height).flat_map(|row| (0..width).map(move |col| GridPos { row, col })).collect();
    Graph::new(width * height, edges)?.with_coords(coords)
}

/// Hop distances from a root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMap {
    pub root: usize,
    pub dist: Vec<usize>,
}

impl LevelMap {
    /// r-level of an edge: the larger endpoint distance when the endpoints
    /// sit on consecutive levels; `None` for same-level edges.
    pub fn edge_level(&self, (u, v): (usize, usize)) -> Option<usize> {
        let (a, b) = (self.dist[u], self.dist[v]);
        (a.abs_diff(b) == 1).then(|| a.max(b))
    }
}

pub fn bfs_levels(graph: &Graph, root: usize) -> Result<LevelMap> {
    if root >= graph.num_vertices() {
        return Err(Error::InvalidSpec(format!("root {root} out of range 0..{}", graph.num_vertices())));
    }
    let mut dist = vec![usize::MAX; graph.num_vertices()];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    while let Some(u) = queue.pop_front() {
        for &(w, _) in graph.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(vertex) = dist.iter().position(|&d| d == usize::MAX) {
        return Err(Error::Disconnected { vertex });
    }
    Ok(LevelMap { root, dist })
}

pub fn edge_r_levels(graph: &Graph, levels: &LevelMap) -> Vec<Option<usize>> {
    graph.edges().iter().map(|&e| levels.edge_level(e)).collect()
}

/// A spanning subgraph: same vertices, a subset of the parent's edges.
#[derive(Debug, Clone)]
pub struct Subgraph<'g> {
    pub graph: &'g Graph,
    pub kept: Vec<bool>,
}

impl<'g> Subgraph<'g> {
    pub fn full(graph: &'g Graph) -> Self {
        Subgraph { graph, kept: vec![true; graph.num_edges()] }
    }

    pub fn removed_count(&self) -> usize {
        self.kept.iter().filter(|k| !**k).count()
    }
}

/// Drops every edge whose r-level is congruent to `j` modulo `k`.
/// Same-level edges have no r-level and are always kept.
pub fn delete_level_classes<'g>(graph: &'g Graph, levels: &LevelMap, k: usize, j: usize) -> Result<Subgraph<'g>> {
    if k == 0 || j >= k {
        return Err(Error::InvalidSpec(format!("need k >= 1 and 0 <= j < k, got k={k}, j={j}")));
    }
    let kept = graph
        .edges()
        .iter()
        .map(|&e| levels.edge_level(e).is_none_or(|d| d % k != j))
        .collect();
    Ok(Subgraph { graph, kept })
}

/// One connected piece of a subgraph; both lists ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Components ordered by their smallest vertex id.
pub fn connected_components(sub: &Subgraph<'_>) -> Vec<Component> {
    let g = sub.graph;
    let mut comp_of = vec![usize::MAX; g.num_vertices()];
    let mut comps: Vec<Component> = Vec::new();
    for start in 0..g.num_vertices() {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut vertices = vec![start];
        comp_of[start] = id;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &(w, e) in g.neighbors(u) {
                if sub.kept[e] && comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    vertices.push(w);
                    stack.push(w);
                }
            }
        }
        vertices.sort_unstable();
        comps.push(Component { vertices, edges: Vec::new() });
    }
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        if sub.kept[e] {
            comps[comp_of[u]].edges.push(e);
        }
    }
    comps
}
