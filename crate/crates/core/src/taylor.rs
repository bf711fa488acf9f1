//! Segment counting, per-word moments and the log-log least-squares fit of
//! Taylor's law `sigma = c * mu^alpha`.
//!
//! A sequence of `N` tokens is cut into `M = floor(N / dt)` segments of `dt`
//! tokens; the trailing `N mod dt` tokens are dropped. For every word the
//! per-segment counts give a mean `mu` and a population standard deviation
//! `sigma` (divisor `M`). Words whose counts are constant (`sigma = 0`) have
//! no logarithm and are left out of the fit, but are counted in
//! [`TaylorFit::points_excluded_sigma_zero`].
//!
//! All logarithms are base 10, so the reported `epsilon` is a log10 RMS
//! residual. `alpha` and `c` do not depend on the base.

use std::cmp::Ordering;

use serde::Serialize;

use crate::corpus::TokenSequence;
use crate::error::{Error, Result};

/// Segment length used throughout unless configured otherwise.
pub const DEFAULT_DT: usize = 5620;

/// Sparse per-word segment counts `n_{k,j}`.
///
/// Row `k` holds `(segment, count)` pairs for the segments where word `k`
/// occurs, in increasing segment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCountMatrix {
    dt: usize,
    num_segments: usize,
    rows: Vec<Vec<(u32, u32)>>,
}

impl SegmentCountMatrix {
    pub fn dt(&self) -> usize {
        self.dt
    }

    pub fn num_segments(&self) -> usize {
        self.num_segments
    }

    /// Number of rows (the vocabulary size of the source sequence).
    pub fn num_words(&self) -> usize {
        self.rows.len()
    }

    /// Non-zero entries of row `word`.
    pub fn nonzero(&self, word: u32) -> &[(u32, u32)] {
        &self.rows[word as usize]
    }

    /// Dense count vector of length `M` for `word`.
    pub fn counts(&self, word: u32) -> Vec<u32> {
        let mut dense = vec![0; self.num_segments];
        for &(j, n) in self.nonzero(word) {
            dense[j as usize] = n;
        }
        dense
    }

    /// Sum of all counts; equals `M * dt`.
    pub fn total(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|&(_, n)| n as u64)
            .sum()
    }
}

/// Counts occurrences of every word in every full segment of length `dt`.
pub fn segment_counts(seq: &TokenSequence, dt: usize) -> Result<SegmentCountMatrix> {
    segment_counts_ids(seq.ids(), seq.vocab_size(), dt)
}

/// Like [`segment_counts`] over a raw ID slice (e.g. a prefix of a sequence).
/// Every ID must be below `vocab_size`.
pub fn segment_counts_ids(ids: &[u32], vocab_size: usize, dt: usize) -> Result<SegmentCountMatrix> {
    if dt == 0 {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let num_segments = ids.len() / dt;
    if num_segments < 2 {
        return Err(Error::TooFewSegments {
            n_tokens: ids.len(),
            dt,
            segments: num_segments,
        });
    }

    let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); vocab_size];
    let mut scratch = vec![0u32; vocab_size];
    let mut touched = Vec::new();
    for (j, segment) in ids[..num_segments * dt].chunks_exact(dt).enumerate() {
        for &w in segment {
            let slot = &mut scratch[w as usize];
            if *slot == 0 {
                touched.push(w);
            }
            *slot += 1;
        }
        for w in touched.drain(..) {
            let slot = &mut scratch[w as usize];
            rows[w as usize].push((j as u32, *slot));
            *slot = 0;
        }
    }
    Ok(SegmentCountMatrix {
        dt,
        num_segments,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WordMoment {
    pub word: u32,
    pub mu: f64,
    pub sigma: f64,
    pub total_count: u64,
}

/// Per-word `(mu, sigma)` pairs, in word-ID order.
#[derive(Debug, Clone, PartialEq)]
pub struct WordMoments {
    pub dt: usize,
    pub num_segments: usize,
    pub entries: Vec<WordMoment>,
}

impl WordMoments {
    /// `(mu, sigma)` for every word, including `sigma = 0` words.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.entries.iter().map(|m| (m.mu, m.sigma))
    }
}

/// Mean and population standard deviation of each word's counts.
///
/// The variance is computed exactly in integers as
/// `(M * sum(n^2) - sum(n)^2) / M^2`, so `sigma` is zero exactly when all
/// counts are equal. Words absent from every retained segment are omitted.
pub fn moments(matrix: &SegmentCountMatrix) -> WordMoments {
    let m = matrix.num_segments as u128;
    let mf = matrix.num_segments as f64;
    let entries = matrix
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| !row.is_empty())
        .map(|(k, row)| {
            let (s1, s2) = row.iter().fold((0u128, 0u128), |(s1, s2), &(_, n)| {
                let n = n as u128;
                (s1 + n, s2 + n * n)
            });
            let numer = m * s2 - s1 * s1;
            WordMoment {
                word: k as u32,
                mu: s1 as f64 / mf,
                sigma: (numer as f64).sqrt() / mf,
                total_count: s1 as u64,
            }
        })
        .collect();
    WordMoments {
        dt: matrix.dt,
        num_segments: matrix.num_segments,
        entries,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorFit {
    pub alpha: f64,
    pub c: f64,
    /// RMS residual of `log10 sigma` around the fitted line.
    pub epsilon: f64,
    pub points_used: usize,
    pub points_excluded_sigma_zero: usize,
}

/// Log10 RMS error of `sigma = c * mu^alpha` over the points with `sigma > 0`.
pub fn fit_error(points: &[(f64, f64)], c: f64, alpha: f64) -> f64 {
    let log_c = c.log10();
    let (sum, n) =
        points
            .iter()
            .filter(|&&(_, s)| s > 0.0)
            .fold((0.0, 0usize), |(acc, n), &(mu, sigma)| {
                let r = sigma.log10() - (log_c + alpha * mu.log10());
                (acc + r * r, n + 1)
            });
    (sum / n as f64).sqrt()
}

/// Ordinary least squares of `log10 sigma` on `log10 mu` over `(mu, sigma)`
/// points, skipping those with `sigma = 0`.
///
/// Points are put in a canonical order before summation, so any permutation
/// of the input gives a bit-identical result.
pub fn fit_points(points: &[(f64, f64)]) -> Result<TaylorFit> {
    let mut usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(mu, sigma)| sigma > 0.0 && mu > 0.0)
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < 2 {
        return Err(Error::TooFewPoints {
            usable: usable.len(),
        });
    }
    usable.sort_by(|a, b| match a.0.total_cmp(&b.0) {
        Ordering::Equal => a.1.total_cmp(&b.1),
        o => o,
    });
    if usable[0].0 == usable[usable.len() - 1].0 {
        return Err(Error::DegenerateRegression);
    }

    let n = usable.len() as f64;
    let logs: Vec<(f64, f64)> = usable
        .iter()
        .map(|&(m, s)| (m.log10(), s.log10()))
        .collect();
    let x_mean = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxx, sxy) = logs.iter().fold((0.0, 0.0), |(sxx, sxy), &(x, y)| {
        let dx = x - x_mean;
        (sxx + dx * dx, sxy + dx * (y - y_mean))
    });
    let alpha = sxy / sxx;
    let intercept = y_mean - alpha * x_mean;
    let sse: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + alpha * x);
            r * r
        })
        .sum();

    Ok(TaylorFit {
        alpha,
        c: 10f64.powf(intercept),
        epsilon: (sse / n).sqrt(),
        points_used: usable.len(),
        points_excluded_sigma_zero: excluded,
    })
}

/// Fits Taylor's law to the scatter in `moments`.
pub fn fit_taylor(moments: &WordMoments) -> Result<TaylorFit> {
    let points: Vec<(f64, f64)> = moments.points().collect();
    fit_points(&points)
}

/// Segment, compute moments and fit in one go.
pub fn taylor_analysis(seq: &TokenSequence, dt: usize) -> Result<(WordMoments, TaylorFit)> {
    analyze_ids(seq.ids(), seq.vocab_size(), dt)
}

pub(crate) fn analyze_ids(
    ids: &[u32],
    vocab_size: usize,
    dt: usize,
) -> Result<(WordMoments, TaylorFit)> {
    let matrix = segment_counts_ids(ids, vocab_size, dt)?;
    let moments = moments(&matrix);
    let fit = fit_taylor(&moments)?;
    Ok((moments, fit))
}
