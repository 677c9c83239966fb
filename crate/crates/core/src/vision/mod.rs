//! Stereo matching on the pixel grid: CIELUV match costs, a PTAS solve
//! with boundary seeding, optional second pass and median smoothing.

mod color;
mod disparity;
mod pnm;
mod scene;
mod seed;
mod stereo;

pub use color::{rgb_to_cieluv, squared_distance};
pub use disparity::{median_smooth, mislabel_rate, DisparityMap};
pub use pnm::{GrayImage, Image};
pub use scene::{noise_image, shift_scene, standard_plan, standard_scene, DisparityPlan, Region, StereoScene};
pub use seed::{boundary_seed, sweep_order, BoundaryPin, SeedHint, SweepDirection};
pub use stereo::{auto_beta, build_stereo_instance, two_pass_combine, PairwiseModel, StereoParams, DEFAULT_SMOOTHNESS};

use crate::error::Result;
use crate::mrf::{evaluate, MrfInstance, Score};
use crate::ptas::{solve_ptas, PtasConfig, PtasDiagnostics};

#[derive(Debug, Clone)]
pub struct StereoOutput {
    pub instance: MrfInstance,
    /// Labels after the combine step, before smoothing.
    pub raw: DisparityMap,
    pub disparity: DisparityMap,
    /// Objective of `raw`.
    pub score: Score,
    /// One entry per pass.
    pub passes: Vec<PtasDiagnostics>,
}

/// Builds the instance, runs a left-to-right seeded PTAS pass (and a
/// right-to-left one when `two_pass` is set), keeps the better of the two
/// and smooths it. `ptas.seed_sweep` is overridden per pass.
pub fn run_stereo(left: &Image, right: &Image, params: &StereoParams, ptas: &PtasConfig) -> Result<StereoOutput> {
    let instance = build_stereo_instance(left, right, params)?;
    let first = solve_ptas(&instance, &ptas.clone().seed_sweep(SweepDirection::LeftToRight))?;
    let mut passes = vec![first.diagnostics];
    let mut best = first.assignment;
    if params.two_pass {
        let second = solve_ptas(&instance, &ptas.clone().seed_sweep(SweepDirection::RightToLeft))?;
        passes.push(second.diagnostics);
        best = two_pass_combine(best, second.assignment, &instance)?;
    }
    let score = evaluate(&instance, &best)?;
    let raw = DisparityMap::from_assignment(left.width, left.height, params.num_labels, &best)?;
    let disparity = median_smooth(&raw, params.smooth_radius);
    Ok(StereoOutput { instance, raw, disparity, score, passes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images_give_zero_disparity() {
        let img = noise_image(12, 8, 5);
        let out = run_stereo(&img, &img, &StereoParams::new(4), &PtasConfig::from_epsilon(0.5).unwrap()).unwrap();
        assert!(out.disparity.labels.iter().all(|&a| a == 1));
        assert!(out.disparity.to_gray().pixels.iter().all(|&g| g == 0));
    }

    #[test]
    fn two_pass_never_scores_lower() {
        let scene = standard_scene(20, 14, 3, 2).unwrap();
        let cfg = PtasConfig::from_epsilon(0.5).unwrap();
        let one = run_stereo(&scene.left, &scene.right, &StereoParams::new(3), &cfg).unwrap();
        let two = run_stereo(&scene.left, &scene.right, &StereoParams { two_pass: true, ..StereoParams::new(3) }, &cfg).unwrap();
        assert!(two.score >= one.score);
        assert_eq!(two.passes.len(), 2);
    }
}
