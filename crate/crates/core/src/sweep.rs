//! Score and runtime as a function of epsilon.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mrf::{MrfInstance, Score};
use crate::ptas::{choose_k, solve_ptas, PtasConfig};

pub const SWEEP_CSV_HEADER: &str = "epsilon,k,score,wall_ms,max_width";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub k: usize,
    pub score: Score,
    pub wall_ms: f64,
    pub max_width: usize,
}

/// One PTAS run per epsilon, all sharing `base` apart from `k`. Only the
/// solve itself is timed.
pub fn run_sweep(instance: &MrfInstance, epsilons: &[f64], base: &PtasConfig) -> Result<Vec<SweepRecord>> {
    if epsilons.len() < 2 {
        return Err(Error::InvalidSpec(format!("a sweep needs at least two epsilon values, got {}", epsilons.len())));
    }
    epsilons
        .iter()
        .map(|&epsilon| {
            let config = PtasConfig { k: choose_k(epsilon)?, ..base.clone() };
            let started = Instant::now();
            let solution = solve_ptas(instance, &config)?;
            let wall_ms = started.elapsed().as_secs_f64() * 1e3;
            Ok(SweepRecord {
                epsilon,
                k: config.k,
                score: solution.score,
                wall_ms,
                max_width: solution.diagnostics.max_width(),
            })
        })
        .collect()
}

/// Cost model `(1/eps) * L^(1/eps)`.
pub fn predicted_cost(epsilon: f64, num_labels: usize) -> f64 {
    let inv = 1.0 / epsilon;
    inv * (num_labels as f64).powf(inv)
}

/// Predicted runtime ratio going from `eps_a` to `eps_b`.
pub fn predicted_ratio(eps_a: f64, eps_b: f64, num_labels: usize) -> f64 {
    predicted_cost(eps_b, num_labels) / predicted_cost(eps_a, num_labels)
}

/// `(observed, predicted)` wall-time ratio for each consecutive pair.
pub fn consecutive_ratios(records: &[SweepRecord], num_labels: usize) -> Vec<(f64, f64)> {
    records
        .windows(2)
        .map(|w| (w[1].wall_ms / w[0].wall_ms, predicted_ratio(w[0].epsilon, w[1].epsilon, num_labels)))
        .collect()
}

/// Running maximum of the scores.
pub fn prefix_best(records: &[SweepRecord]) -> Vec<Score> {
    records
        .iter()
        .scan(f64::NEG_INFINITY, |best, r| {
            *best = best.max(r.score);
            Some(*best)
        })
        .collect()
}

pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for r in records {
        // `{}` on f64 prints the shortest string that round-trips
        let _ = writeln!(out, "{},{},{},{},{}", r.epsilon, r.k, r.score, r.wall_ms, r.max_width);
    }
    out
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(SWEEP_CSV_HEADER) {
        return Err(Error::Parse { offset: 0, message: format!("expected header {SWEEP_CSV_HEADER}") });
    }
    let mut offset = SWEEP_CSV_HEADER.len() + 1;
    let mut out = Vec::new();
    for line in lines {
        let bad = |what: &str| Error::Parse { offset, message: format!("bad {what} in row {line:?}") };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(bad("field count"));
        }
        out.push(SweepRecord {
            epsilon: f[0].parse().map_err(|_| bad("epsilon"))?,
            k: f[1].parse().map_err(|_| bad("k"))?,
            score: f[2].parse().map_err(|_| bad("score"))?,
            wall_ms: f[3].parse().map_err(|_| bad("wall_ms"))?,
            max_width: f[4].parse().map_err(|_| bad("max_width"))?,
        });
        offset += line.len() + 1;
    }
    Ok(out)
}
