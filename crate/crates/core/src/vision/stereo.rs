use serde::{Deserialize, Serialize};

use super::color::{rgb_to_cieluv, squared_distance};
use super::pnm::Image;
use crate::error::{Error, Result};
use crate::graph::grid_graph;
use crate::mrf::{evaluate, Assignment, MrfInstance};

/// Shape of the smoothness term between 4-neighbours `u`, `v`, with
/// `d = |LUV(u) - LUV(v)|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PairwiseModel {
    /// `psi(i, j) = 0` if `i == j`, else `beta - d`.
    AsPublished,
    /// `psi(i, i) = beta - d`, zero off the diagonal: similar neighbours are
    /// rewarded for sharing a disparity.
    #[default]
    Agreement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StereoParams {
    pub num_labels: usize,
    /// Score offset; `None` uses [`auto_beta`].
    pub beta: Option<f64>,
    pub two_pass: bool,
    pub smooth_radius: usize,
    pub pairwise: PairwiseModel,
    /// Scale applied to every pairwise entry. At full weight the agreement
    /// term swamps the data term and flattens the map.
    pub smoothness: f64,
}

impl StereoParams {
    pub fn new(num_labels: usize) -> Self {
        StereoParams { num_labels, beta: None, two_pass: false, smooth_radius: 0, pairwise: PairwiseModel::default(), smoothness: DEFAULT_SMOOTHNESS }
    }
}

pub const DEFAULT_SMOOTHNESS: f64 = 0.1;

/// Squared CIELUV distances feeding every table entry.
struct Costs {
    /// `data[u * L + a]`: left pixel `u` against the right pixel `a` columns
    /// to its left, `None` when that falls outside the frame.
    data: Vec<Option<f64>>,
    /// Per grid edge, in `grid_graph` edge order.
    pair: Vec<f64>,
}

fn check_dims(left: &Image, right: &Image) -> Result<()> {
    if (left.width, left.height) != (right.width, right.height) {
        return Err(Error::DimensionMismatch {
            left: (left.width, left.height),
            right: (right.width, right.height),
        });
    }
    Ok(())
}

fn costs(left: &Image, right: &Image, num_labels: usize) -> Result<Costs> {
    check_dims(left, right)?;
    let lu: Vec<[f64; 3]> = left.pixels.iter().map(|&p| rgb_to_cieluv(p)).collect();
    let ru: Vec<[f64; 3]> = right.pixels.iter().map(|&p| rgb_to_cieluv(p)).collect();
    let w = left.width;
    let mut data = Vec::with_capacity(lu.len() * num_labels);
    for (u, &l) in lu.iter().enumerate() {
        let (row, col) = (u / w, u % w);
        for shift in 0..num_labels {
            data.push((col >= shift).then(|| squared_distance(l, ru[row * w + col - shift])));
        }
    }
    let graph = grid_graph(left.width, left.height)?;
    let pair = graph.edges().iter().map(|&(u, v)| squared_distance(lu[u], lu[v])).collect();
    Ok(Costs { data, pair })
}

/// Largest squared distance that appears in any table, which is the
/// smallest offset keeping every entry nonnegative.
pub fn auto_beta(left: &Image, right: &Image, num_labels: usize) -> Result<f64> {
    let c = costs(left, right, num_labels)?;
    Ok(c.data.iter().flatten().chain(&c.pair).fold(0.0, |m: f64, &d| m.max(d)))
}

/// Grid MRF over the left image. Label `a` (0-based) is a shift of `a`
/// columns; matches that fall off the frame score 0.
pub fn build_stereo_instance(left: &Image, right: &Image, params: &StereoParams) -> Result<MrfInstance> {
    let l = params.num_labels;
    if l == 0 {
        return Err(Error::InvalidSpec("stereo needs at least one disparity label".into()));
    }
    let c = costs(left, right, l)?;
    let required = c.data.iter().flatten().chain(&c.pair).fold(0.0, |m: f64, &d| m.max(d));
    let beta = params.beta.unwrap_or(required);
    if beta.is_nan() || beta < required {
        return Err(Error::BetaTooSmall { beta, required });
    }
    if !(params.smoothness >= 0.0 && params.smoothness.is_finite()) {
        return Err(Error::InvalidSpec(format!("smoothness {} must be finite and >= 0", params.smoothness)));
    }
    let phi = c.data.chunks(l).map(|row| row.iter().map(|d| d.map_or(0.0, |d| beta - d)).collect()).collect();
    let psi = c
        .pair
        .iter()
        .map(|&d| {
            let mut t = vec![0.0; l * l];
            for i in 0..l {
                for j in 0..l {
                    let hit = match params.pairwise {
                        PairwiseModel::AsPublished => i != j,
                        PairwiseModel::Agreement => i == j,
                    };
                    if hit {
                        t[i * l + j] = params.smoothness * (beta - d);
                    }
                }
            }
            t
        })
        .collect();
    MrfInstance::checked(grid_graph(left.width, left.height)?, l, phi, psi)
}

/// Higher-scoring of two assignments; `x_a` on ties.
pub fn two_pass_combine(x_a: Assignment, x_b: Assignment, instance: &MrfInstance) -> Result<Assignment> {
    let (a, b) = (evaluate(instance, &x_a)?, evaluate(instance, &x_b)?);
    Ok(if b > a { x_b } else { x_a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(w: usize, h: usize) -> Image {
        let px = (0..w * h).map(|i| if (i % w + i / w).is_multiple_of(2) { [0, 0, 0] } else { [255, 255, 255] }).collect();
        Image::new(w, h, px).unwrap()
    }

    #[test]
    fn identical_images_match_at_zero_shift() {
        let img = checker(5, 4);
        let beta = auto_beta(&img, &img, 3).unwrap() + 7.0;
        let inst = build_stereo_instance(&img, &img, &StereoParams { beta: Some(beta), ..StereoParams::new(3) }).unwrap();
        for v in 0..inst.num_vertices() {
            assert_eq!(inst.phi(v, 0), beta);
        }
        // column 0 has no match at shift 1
        assert_eq!(inst.phi(0, 1), 0.0);
    }

    #[test]
    fn uniform_images_give_flat_pairwise_tables() {
        let img = Image::filled(4, 3, [30, 60, 90]);
        assert_eq!(auto_beta(&img, &img, 4).unwrap(), 0.0);
        let params = StereoParams { beta: Some(2.5), pairwise: PairwiseModel::AsPublished, smoothness: 1.0, ..StereoParams::new(3) };
        let inst = build_stereo_instance(&img, &img, &params).unwrap();
        for e in 0..inst.graph().num_edges() {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(inst.psi(e, i, j), if i == j { 0.0 } else { 2.5 });
                }
            }
        }
    }

    #[test]
    fn black_white_neighbours_set_beta() {
        let img = Image::new(2, 1, vec![[0, 0, 0], [255, 255, 255]]).unwrap();
        let beta = auto_beta(&img, &img, 1).unwrap();
        assert!((beta - 10000.0).abs() < 100.0, "{beta}");
    }

    #[test]
    fn auto_beta_instances_are_nonnegative() {
        let img = checker(6, 5);
        let mut right = img.clone();
        right.set(2, 2, [200, 10, 10]);
        for model in [PairwiseModel::AsPublished, PairwiseModel::Agreement] {
            let inst = build_stereo_instance(&img, &right, &StereoParams { pairwise: model, ..StereoParams::new(4) }).unwrap();
            assert!(inst.validate().is_empty());
            assert!(inst.is_nonnegative());
        }
    }

    #[test]
    fn rejects_small_beta_and_mismatched_sizes() {
        let img = checker(3, 3);
        let err = build_stereo_instance(&img, &img, &StereoParams { beta: Some(1.0), ..StereoParams::new(2) }).unwrap_err();
        assert!(matches!(err, Error::BetaTooSmall { required, .. } if required > 9000.0));
        let other = checker(4, 3);
        assert!(matches!(auto_beta(&img, &other, 2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn combine_prefers_higher_then_first() {
        let img = checker(3, 1);
        let inst = build_stereo_instance(&img, &img, &StereoParams::new(2)).unwrap();
        let zero = Assignment::new(vec![0, 0, 0]);
        let ones = Assignment::new(vec![1, 1, 1]);
        assert_eq!(two_pass_combine(zero.clone(), ones.clone(), &inst).unwrap(), zero);
        assert_eq!(two_pass_combine(ones.clone(), zero.clone(), &inst).unwrap(), zero);
        assert_eq!(two_pass_combine(ones.clone(), ones.clone(), &inst).unwrap(), ones);
        // uniform images with auto beta score every assignment 0
        let flat = Image::filled(2, 1, [9, 9, 9]);
        let inst = build_stereo_instance(&flat, &flat, &StereoParams::new(2)).unwrap();
        let (a, b) = (Assignment::new(vec![0, 0]), Assignment::new(vec![1, 0]));
        assert_eq!(two_pass_combine(a.clone(), b, &inst).unwrap(), a);
    }
}
