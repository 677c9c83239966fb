use rayon::prelude::*;

use super::pnm::GrayImage;
use crate::error::{Error, Result};
use crate::mrf::Assignment;

/// Per-pixel disparity labels in `1..=num_labels`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisparityMap {
    pub width: usize,
    pub height: usize,
    pub num_labels: usize,
    pub labels: Vec<usize>,
}

impl DisparityMap {
    pub fn new(width: usize, height: usize, num_labels: usize, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::InvalidSpec(format!("{} labels for a {width}x{height} map", labels.len())));
        }
        if let Some(p) = labels.iter().position(|&a| a == 0 || a > num_labels) {
            return Err(Error::InvalidSpec(format!("pixel {p} has label {}, expected 1..={num_labels}", labels[p])));
        }
        Ok(DisparityMap { width, height, num_labels, labels })
    }

    pub fn from_assignment(width: usize, height: usize, num_labels: usize, x: &Assignment) -> Result<Self> {
        Self::new(width, height, num_labels, x.to_one_based())
    }

    pub fn gray_level(&self, label: usize) -> u8 {
        if self.num_labels <= 1 {
            return 255;
        }
        ((label - 1) as f64 * 255.0 / (self.num_labels - 1) as f64).round() as u8
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.labels.iter().map(|&a| self.gray_level(a)).collect(),
        }
    }

    /// Inverse of [`to_gray`](Self::to_gray); each gray value must be one
    /// of the `num_labels` levels exactly.
    pub fn from_gray(img: &GrayImage, num_labels: usize) -> Result<Self> {
        if num_labels == 0 {
            return Err(Error::InvalidSpec("a disparity map needs at least one label".into()));
        }
        let probe = DisparityMap { width: 0, height: 0, num_labels, labels: Vec::new() };
        let levels: Vec<u8> = (1..=num_labels).map(|a| probe.gray_level(a)).collect();
        let labels = img
            .pixels
            .iter()
            .enumerate()
            .map(|(p, g)| {
                levels
                    .iter()
                    .position(|l| l == g)
                    .map(|i| i + 1)
                    .ok_or_else(|| Error::InvalidSpec(format!("pixel {p} has gray {g}, not a level for {num_labels} labels")))
            })
            .collect::<Result<_>>()?;
        Self::new(img.width, img.height, num_labels, labels)
    }
}

/// Median over the `(2r+1)^2` window clipped to the frame. Even-sized
/// clipped windows take the lower median.
pub fn median_smooth(disp: &DisparityMap, radius: usize) -> DisparityMap {
    if radius == 0 {
        return disp.clone();
    }
    let (w, h) = (disp.width, disp.height);
    let labels = (0..w * h)
        .into_par_iter()
        .map(|p| {
            let (row, col) = (p / w, p % w);
            let mut window = Vec::with_capacity((2 * radius + 1).pow(2));
            for r in row.saturating_sub(radius)..(row + radius + 1).min(h) {
                for c in col.saturating_sub(radius)..(col + radius + 1).min(w) {
                    window.push(disp.labels[r * w + c]);
                }
            }
            window.sort_unstable();
            window[(window.len() - 1) / 2]
        })
        .collect();
    DisparityMap { labels, ..disp.clone() }
}

/// Fraction of pixels whose label differs from the truth by more than
/// `tolerance`.
pub fn mislabel_rate(pred: &DisparityMap, truth: &DisparityMap, tolerance: usize) -> Result<f64> {
    if (pred.width, pred.height) != (truth.width, truth.height) {
        return Err(Error::DimensionMismatch { left: (pred.width, pred.height), right: (truth.width, truth.height) });
    }
    if pred.labels.is_empty() {
        return Ok(0.0);
    }
    let wrong = pred.labels.iter().zip(&truth.labels).filter(|(a, b)| a.abs_diff(**b) > tolerance).count();
    Ok(wrong as f64 / pred.labels.len() as f64)
}
