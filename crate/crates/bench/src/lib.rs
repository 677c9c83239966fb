//! Fixed inputs shared by the benchmarks in `benches/`.

use mrf_ptas::mrf::{random_instance, GridInstanceSpec};
use mrf_ptas::vision::{build_stereo_instance, standard_scene, StereoParams};
use mrf_ptas::MrfInstance;

/// Full `side` x `side` grid with scores in 0..=9.
pub fn grid(side: usize, labels: usize, seed: u64) -> MrfInstance {
    let spec = GridInstanceSpec::new(side, side, labels, (0, 9)).with_extra_edge_prob(1.0);
    random_instance(&spec, seed).expect("valid grid spec")
}

/// Stereo model of the synthetic scene.
pub fn stereo(width: usize, height: usize, labels: usize) -> MrfInstance {
    let scene = standard_scene(width, height, labels, 1).expect("valid scene");
    build_stereo_instance(&scene.left, &scene.right, &StereoParams::new(labels)).expect("valid stereo model")
}
