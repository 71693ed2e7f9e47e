//! Random multigraph generation from a fixed degree sequence.
//!
//! Sampling uses the configuration model: each vertex contributes as many
//! points as its degree and the points are paired uniformly at random. We
//! pair sequentially (first unpaired point gets a uniform partner from the
//! remaining points) and restart the whole configuration as soon as a
//! self-loop is revealed. Restarting at the first loop draws from exactly the
//! same distribution as sampling complete configurations and rejecting the
//! ones with loops, but skips the wasted tail work. Parallel edges are kept;
//! [`sample_simple`] additionally rejects configurations with parallel edges.

use std::io::BufRead;

use rand::Rng;

use crate::multigraph::{MultiGraph, VertexId};
use thiserror::Error;

/// Cap on configuration resampling attempts used by the CLI defaults.
pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("degree sum {0} is odd, cannot pair half-edges")]
    OddDegreeSum(usize),
    #[error("no admissible configuration after {0} attempts")]
    ResampleLimitExceeded(usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for GenError {
    fn from(e: std::io::Error) -> Self {
        GenError::Io(e.to_string())
    }
}

/// The k-regular sequence on n vertices.
pub fn regular_sequence(n: usize, k: usize) -> Result<Vec<usize>, GenError> {
    if n * k % 2 != 0 {
        return Err(GenError::OddDegreeSum(n * k));
    }
    Ok(vec![k; n])
}

/// Parses a degree file: one non-negative integer per line, `#` comments and
/// blank lines ignored.
pub fn read_degrees<R: BufRead>(input: R) -> Result<Vec<usize>, GenError> {
    let mut out = Vec::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let d = t.parse::<usize>().map_err(|_| GenError::Parse {
            line: no + 1,
            reason: format!("not a degree: {t:?}"),
        })?;
        out.push(d);
    }
    Ok(out)
}

/// Samples a uniform loop-free configuration multigraph with the given
/// degrees. Parallel edges are allowed.
pub fn sample_configuration<R: Rng + ?Sized>(
    degrees: &[usize],
    rng: &mut R,
    max_attempts: usize,
) -> Result<MultiGraph, GenError> {
    sample_inner(degrees, rng, max_attempts, false)
}

/// Like [`sample_configuration`] but also rejects parallel edges, yielding a
/// uniform simple graph with the given degrees.
pub fn sample_simple<R: Rng + ?Sized>(
    degrees: &[usize],
    rng: &mut R,
    max_attempts: usize,
) -> Result<MultiGraph, GenError> {
    sample_inner(degrees, rng, max_attempts, true)
}

fn sample_inner<R: Rng + ?Sized>(
    degrees: &[usize],
    rng: &mut R,
    max_attempts: usize,
    simple: bool,
) -> Result<MultiGraph, GenError> {
    let total: usize = degrees.iter().sum();
    if total % 2 != 0 {
        return Err(GenError::OddDegreeSum(total));
    }
    let mut template: Vec<u32> = Vec::with_capacity(total);
    for (v, &d) in degrees.iter().enumerate() {
        for _ in 0..d {
            template.push(v as u32);
        }
    }

    let mut points = vec![0u32; total];
    'attempt: for _ in 0..max_attempts {
        points.copy_from_slice(&template);
        let mut i = 0;
        while i < total {
            let j = rng.random_range(i + 1..total);
            if points[i] == points[j] {
                continue 'attempt; // self-loop revealed
            }
            points.swap(i + 1, j);
            i += 2;
        }
        if simple {
            let mut pairs: Vec<(u32, u32)> = points
                .chunks_exact(2)
                .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
                .collect();
            pairs.sort_unstable();
            if pairs.windows(2).any(|w| w[0] == w[1]) {
                continue 'attempt;
            }
        }
        let mut g = MultiGraph::new_graph(degrees.len());
        for c in points.chunks_exact(2) {
            g.add_edge(VertexId(c[0]), VertexId(c[1]))
                .expect("pairing produced a loop");
        }
        return Ok(g);
    }
    Err(GenError::ResampleLimitExceeded(max_attempts))
}

/// Per-degree slack in the dominance condition: `(ln^2 n0 - k) * n0^0.8 / 2^j`
/// for the original vertex count `n0`. The strict variant uses zero slack.
pub fn dominance_slack(j: usize, k: usize, n0: usize) -> f64 {
    let n0 = n0 as f64;
    let l = n0.ln();
    (l * l - k as f64) * n0.powf(0.8) / 2f64.powi(j as i32)
}

/// All dominance slacks for order `k` at once: entry `j` is
/// `dominance_slack(j, k, n0)` scaled by 100 to match the integer-scaled
/// comparison, zero below `j = 4`. Computing them once avoids repeated
/// transcendental math when a run checks dominance at every boundary.
pub fn dominance_slacks(k: usize, n0: usize) -> Vec<f64> {
    (0..=k)
        .map(|j| {
            if j < 4 {
                0.0
            } else {
                100.0 * dominance_slack(j, k, n0)
            }
        })
        .collect()
}

/// Whether a degree histogram is k-dominant: for every j with 3 < j <= k,
/// `n_j >= 1.17 * n_{j-1} - slack_j`. With `strict` the slack term is zero.
/// The comparison is done in integers (scaled by 100) to keep it exact.
pub fn dominant_histogram(hist: &[u32], k: usize, n0: usize, strict: bool) -> bool {
    if strict {
        dominant_with_slacks(hist, k, &[], true)
    } else {
        dominant_with_slacks(hist, k, &dominance_slacks(k, n0), false)
    }
}

/// [`dominant_histogram`] against precomputed [`dominance_slacks`]. The
/// slacks are ignored in strict mode.
pub fn dominant_with_slacks(hist: &[u32], k: usize, slacks: &[f64], strict: bool) -> bool {
    let nj = |j: usize| -> u64 { hist.get(j).copied().unwrap_or(0) as u64 };
    for j in 4..=k {
        let lhs = 100 * nj(j);
        let rhs = 117 * nj(j - 1);
        if strict {
            if lhs < rhs {
                return false;
            }
        } else if (lhs as f64) < rhs as f64 - slacks[j] {
            return false;
        }
    }
    true
}

/// Dominance check on a graph's current histogram; `n0` is the vertex count
/// the slack is calibrated against (the original input size).
pub fn check_dominance(g: &mut MultiGraph, k: usize, n0: usize) -> bool {
    dominant_histogram(&g.degree_histogram(), k, n0, false)
}
