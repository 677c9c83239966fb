use std::path::PathBuf;

use clap::Subcommand;
use mrf_ptas::graph::{grid_graph, Graph};
use mrf_ptas::mrf::{random_instance, GridInstanceSpec, ModelFile};
use mrf_ptas::reductions::{coloring_gadget, maxcut_gadget, random_cc_instance, CcFile};
use mrf_ptas::vision::standard_scene;

use crate::failure::{usage, write_atomic, write_json, CmdResult, Stage};

#[derive(Debug, Subcommand)]
pub enum Kind {
    /// Random connected grid subgraph with integer scores.
    Grid {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        labels: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        min: i64,
        #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
        max: i64,
        /// Keep a random connected set of this many cells.
        #[arg(long)]
        vertices: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Two-label model whose optimum is the maximum cut.
    Maxcut {
        /// cycle:N, path:N, complete:N or grid:WxH.
        #[arg(long)]
        graph: String,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Three-label model whose optimum is 0 exactly when 3-colorable.
    Coloring {
        #[arg(long)]
        graph: String,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Random correlation-clustering instance on a grid subgraph.
    Cc {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 10)]
        max_reward: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Synthetic stereo pair with ground truth.
    Scene {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        labels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Receives left.ppm, right.ppm and truth.pgm.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

pub fn parse_graph(text: &str) -> CmdResult<Graph> {
    let bad = || usage(format!("unknown graph {text:?}; expected cycle:N, path:N, complete:N or grid:WxH"));
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    let count = || arg.parse::<usize>().map_err(|_| bad());
    let edges: Vec<(usize, usize)> = match kind {
        "grid" => {
            let (w, h) = arg.split_once('x').ok_or_else(bad)?;
            let (w, h) = (w.parse().map_err(|_| bad())?, h.parse().map_err(|_| bad())?);
            return grid_graph(w, h).stage("building the grid");
        }
        "cycle" => {
            let n = count()?;
            if n < 3 {
                return Err(usage("a cycle needs at least 3 vertices"));
            }
            return Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).stage("building the cycle");
        }
        "path" => (1..count()?).map(|i| (i - 1, i)).collect(),
        "complete" => {
            let n = count()?;
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
        }
        _ => return Err(bad()),
    };
    let n = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(1);
    Graph::new(n, edges).stage("building the graph")
}

pub fn run(kind: Kind) -> CmdResult {
    match kind {
        Kind::Grid { width, height, labels, min, max, vertices, seed, out } => {
            let mut spec = GridInstanceSpec::new(width, height, labels, (min, max));
            if let Some(v) = vertices {
                spec = spec.with_vertices(v);
            }
            let inst = random_instance(&spec, seed).stage("generating the instance")?;
            write_atomic(&out, ModelFile::render(&inst).as_bytes())
        }
        Kind::Maxcut { graph, out } => {
            let inst = maxcut_gadget(&parse_graph(&graph)?);
            write_atomic(&out, ModelFile::render(&inst).as_bytes())
        }
        Kind::Coloring { graph, out } => {
            let inst = coloring_gadget(&parse_graph(&graph)?);
            write_atomic(&out, ModelFile::render(&inst).as_bytes())
        }
        Kind::Cc { width, height, vertices, max_reward, seed, out } => {
            let cc = random_cc_instance(width, height, vertices, max_reward, seed).stage("generating the instance")?;
            write_json(&out, &CcFile::from_instance(&cc))
        }
        Kind::Scene { width, height, labels, seed, out_dir } => {
            let scene = standard_scene(width, height, labels, seed).stage("generating the scene")?;
            std::fs::create_dir_all(&out_dir).internal(format!("creating {}", out_dir.display()))?;
            write_atomic(&out_dir.join("left.ppm"), &scene.left.to_ppm())?;
            write_atomic(&out_dir.join("right.ppm"), &scene.right.to_ppm())?;
            write_atomic(&out_dir.join("truth.pgm"), &scene.truth.to_gray().to_pgm())
        }
    }
}
