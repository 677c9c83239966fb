//! Synthetic stereo pairs with known disparities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::disparity::DisparityMap;
use super::pnm::Image;
use crate::error::{Error, Result};

/// Axis-aligned block of the left image moved by `disparity` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub col: usize,
    pub row: usize,
    pub width: usize,
    pub height: usize,
    pub disparity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisparityPlan {
    pub num_labels: usize,
    pub background: usize,
    /// Later regions are drawn over earlier ones in the truth map.
    pub regions: Vec<Region>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StereoScene {
    pub left: Image,
    pub right: Image,
    pub truth: DisparityMap,
}

/// Independent uniform RGB per pixel.
pub fn noise_image(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..width * height).map(|_| rng.gen::<[u8; 3]>()).collect();
    Image { width, height, pixels }
}

/// The left image is `base`. Each left pixel is copied into the right image
/// `d` columns to the left, nearer (larger `d`) pixels painted last so they
/// occlude; right pixels nothing lands on keep the base texture.
pub fn shift_scene(base: &Image, plan: &DisparityPlan) -> Result<StereoScene> {
    let (w, h) = (base.width, base.height);
    let limit = plan.num_labels.min(w);
    let check = |d: usize, what: &str| {
        if d >= limit {
            Err(Error::InvalidSpec(format!("{what} disparity {d} needs to be below {limit}")))
        } else {
            Ok(())
        }
    };
    check(plan.background, "background")?;
    let mut truth = vec![plan.background; w * h];
    for (i, r) in plan.regions.iter().enumerate() {
        check(r.disparity, "region")?;
        if r.width == 0 || r.height == 0 || r.col + r.width > w || r.row + r.height > h || r.col < r.disparity {
            return Err(Error::InvalidSpec(format!("region {i} does not fit a {w}x{h} frame at disparity {}", r.disparity)));
        }
        for row in r.row..r.row + r.height {
            truth[row * w + r.col..row * w + r.col + r.width].fill(r.disparity);
        }
    }

    let mut right = base.clone();
    let mut order: Vec<usize> = (0..w * h).filter(|&p| p % w >= truth[p]).collect();
    order.sort_by_key(|&p| (truth[p], p));
    for p in order {
        right.pixels[p - truth[p]] = base.pixels[p];
    }
    let labels = truth.iter().map(|d| d + 1).collect();
    Ok(StereoScene { left: base.clone(), right, truth: DisparityMap::new(w, h, plan.num_labels, labels)? })
}

/// Three regions at disparities 1, 2 and 3 (clamped to `num_labels - 1`)
/// over a zero-disparity background, laid out proportionally to the frame.
pub fn standard_plan(width: usize, height: usize, num_labels: usize) -> DisparityPlan {
    let top = num_labels.saturating_sub(1);
    let at = |fx: f64, fy: f64, fw: f64, fh: f64, d: usize| Region {
        col: (fx * width as f64) as usize,
        row: (fy * height as f64) as usize,
        width: ((fw * width as f64) as usize).max(1),
        height: ((fh * height as f64) as usize).max(1),
        disparity: d.min(top),
    };
    DisparityPlan {
        num_labels,
        background: 0,
        regions: vec![
            at(0.15, 0.12, 0.25, 0.3, 1),
            at(0.55, 0.2, 0.3, 0.4, 3),
            at(0.25, 0.6, 0.35, 0.3, 2),
        ],
    }
}

/// Noise-textured scene over [`standard_plan`].
pub fn standard_scene(width: usize, height: usize, num_labels: usize, seed: u64) -> Result<StereoScene> {
    shift_scene(&noise_image(width, height, seed), &standard_plan(width, height, num_labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_plan_copies_the_image() {
        let base = noise_image(8, 5, 3);
        let plan = DisparityPlan { num_labels: 4, background: 0, regions: vec![] };
        let s = shift_scene(&base, &plan).unwrap();
        assert_eq!(s.left, s.right);
        assert!(s.truth.labels.iter().all(|&a| a == 1));
    }

    #[test]
    fn shifted_region_is_label_three() {
        let base = noise_image(10, 6, 1);
        let r = Region { col: 4, row: 1, width: 3, height: 2, disparity: 2 };
        let plan = DisparityPlan { num_labels: 4, background: 0, regions: vec![r] };
        let s = shift_scene(&base, &plan).unwrap();
        for row in 0..6 {
            for col in 0..10 {
                let inside = (4..7).contains(&col) && (1..3).contains(&row);
                assert_eq!(s.truth.labels[row * 10 + col], if inside { 3 } else { 1 });
                if inside {
                    assert_eq!(s.right.get(col - 2, row), base.get(col, row));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_regions() {
        let base = noise_image(6, 4, 0);
        let plan = |r: Region| DisparityPlan { num_labels: 4, background: 0, regions: vec![r] };
        assert!(shift_scene(&base, &plan(Region { col: 4, row: 0, width: 3, height: 1, disparity: 1 })).is_err());
        assert!(shift_scene(&base, &plan(Region { col: 0, row: 0, width: 2, height: 1, disparity: 1 })).is_err());
        assert!(shift_scene(&base, &plan(Region { col: 2, row: 0, width: 2, height: 1, disparity: 4 })).is_err());
    }

    #[test]
    fn standard_scene_is_deterministic() {
        let a = standard_scene(64, 48, 4, 11).unwrap();
        let b = standard_scene(64, 48, 4, 11).unwrap();
        assert_eq!(a, b);
        let mut used: Vec<usize> = a.truth.labels.clone();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used, vec![1, 2, 3, 4]);
    }
}
