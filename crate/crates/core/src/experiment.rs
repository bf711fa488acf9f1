//! Parameter sweeps over segment length and data size, and batch runs over
//! many texts with per-group summaries.
//!
//! Sweep points and batch files are evaluated on the current rayon pool;
//! results always come back in input order.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{read_document, TokenSequence, TokenizerConfig};
use crate::error::{Error, Result};
use crate::stats::{quantile_summary, BoxStats};
use crate::taylor::{analyze_ids, TaylorFit};

/// dt sweeps on large corpora only look at this many leading tokens.
pub const DT_SWEEP_TOKEN_CAP: usize = 4_000_000;

const GRID_POINTS_PER_DECADE: f64 = 10.0;
const GRID_MAX_POINTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Dt,
    Size,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PointOutcome {
    Ok(TaylorFit),
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub x: usize,
    #[serde(flatten)]
    pub outcome: PointOutcome,
}

impl SweepPoint {
    pub fn fit(&self) -> Option<&TaylorFit> {
        match &self.outcome {
            PointOutcome::Ok(fit) => Some(fit),
            PointOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// `(x, alpha)` for the points that fitted.
    pub fn alphas(&self) -> Vec<(usize, f64)> {
        self.points
            .iter()
            .filter_map(|p| p.fit().map(|f| (p.x, f.alpha)))
            .collect()
    }
}

fn outcome(r: Result<TaylorFit>) -> PointOutcome {
    match r {
        Ok(fit) => PointOutcome::Ok(fit),
        Err(e) => PointOutcome::Failed {
            error: e.to_string(),
        },
    }
}

/// Integer grid from `lo` to `hi` (inclusive), evenly spaced in log scale:
/// ten points per decade, at most twenty points, rounded and de-duplicated
/// so the result is strictly increasing.
pub fn log_grid(lo: usize, hi: usize) -> Vec<usize> {
    if lo == 0 || hi <= lo {
        return if lo > 0 && hi == lo {
            vec![lo]
        } else {
            Vec::new()
        };
    }
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let decades = (lhi - llo) / std::f64::consts::LN_10;
    let n = ((GRID_POINTS_PER_DECADE * decades).ceil() as usize + 1).clamp(2, GRID_MAX_POINTS);
    let mut grid: Vec<usize> = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            (llo + t * (lhi - llo)).exp().round() as usize
        })
        .collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    grid.dedup();
    grid
}

/// Default dt grid for a sequence of `n_tokens`: from 10 up to
/// `min(10_000, n_tokens / 10)`.
pub fn default_dt_grid(n_tokens: usize) -> Vec<usize> {
    log_grid(10, (n_tokens / 10).min(10_000))
}

/// Default prefix-size grid at segment length `dt`: from ten segments (or
/// two, for short inputs) up to the full length.
pub fn default_size_grid(n_tokens: usize, dt: usize) -> Vec<usize> {
    let lo = if n_tokens >= 10 * dt { 10 * dt } else { 2 * dt };
    log_grid(lo, n_tokens)
}

/// One Taylor fit per segment length, all on the same sequence. Failing
/// points are recorded and the sweep continues.
pub fn dt_sweep(seq: &TokenSequence, dts: &[usize]) -> SweepResult {
    let points = dts
        .par_iter()
        .map(|&dt| SweepPoint {
            x: dt,
            outcome: outcome(analyze_ids(seq.ids(), seq.vocab_size(), dt).map(|(_, f)| f)),
        })
        .collect();
    SweepResult {
        axis: SweepAxis::Dt,
        points,
    }
}

/// One Taylor fit per prefix length at fixed `dt`.
pub fn size_sweep(seq: &TokenSequence, dt: usize, sizes: &[usize]) -> SweepResult {
    let points = sizes
        .par_iter()
        .map(|&size| {
            let r = if size > seq.len() {
                Err(Error::InvalidArgument(format!(
                    "prefix size {size} exceeds sequence length {}",
                    seq.len()
                )))
            } else {
                analyze_ids(&seq.ids()[..size], seq.vocab_size(), dt).map(|(_, f)| f)
            };
            SweepPoint {
                x: size,
                outcome: outcome(r),
            }
        })
        .collect();
    SweepResult {
        axis: SweepAxis::Size,
        points,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchInput {
    pub id: String,
    pub path: PathBuf,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextRow {
    pub id: String,
    pub group: String,
    pub alpha: f64,
    pub c: f64,
    pub epsilon: f64,
    pub n_tokens: usize,
    pub vocab: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn of(values: &[f64]) -> Range {
        Range {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: String,
    pub n_texts: usize,
    /// Unweighted mean of the member exponents.
    pub mean_alpha: f64,
    pub length: Range,
    pub vocab: Range,
    pub alpha_box: BoxStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchFailure {
    pub id: String,
    pub group: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub dt: usize,
    pub texts: Vec<TextRow>,
    pub groups: Vec<GroupSummary>,
    pub failures: Vec<BatchFailure>,
}

/// Per-group aggregates of already-computed rows; groups appear in order of
/// first occurrence.
pub fn summarize_groups(rows: &[TextRow]) -> Vec<GroupSummary> {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.group.as_str()) {
            labels.push(&r.group);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let members: Vec<&TextRow> = rows.iter().filter(|r| r.group == label).collect();
            let alphas: Vec<f64> = members.iter().map(|r| r.alpha).collect();
            let lengths: Vec<f64> = members.iter().map(|r| r.n_tokens as f64).collect();
            let vocabs: Vec<f64> = members.iter().map(|r| r.vocab as f64).collect();
            GroupSummary {
                group: label.to_owned(),
                n_texts: members.len(),
                mean_alpha: alphas.iter().sum::<f64>() / alphas.len() as f64,
                length: Range::of(&lengths),
                vocab: Range::of(&vocabs),
                alpha_box: quantile_summary(&alphas).expect("group has members"),
            }
        })
        .collect()
}

fn assemble(dt: usize, results: Vec<(String, String, Result<TextRow>)>) -> BatchSummary {
    let mut texts = Vec::new();
    let mut failures = Vec::new();
    for (id, group, r) in results {
        match r {
            Ok(row) => texts.push(row),
            Err(e) => failures.push(BatchFailure {
                id,
                group,
                error: e.to_string(),
            }),
        }
    }
    BatchSummary {
        dt,
        groups: summarize_groups(&texts),
        texts,
        failures,
    }
}

fn analyze_row(id: &str, group: &str, seq: &TokenSequence, dt: usize) -> Result<TextRow> {
    let (_, fit) = analyze_ids(seq.ids(), seq.vocab_size(), dt)?;
    Ok(TextRow {
        id: id.to_owned(),
        group: group.to_owned(),
        alpha: fit.alpha,
        c: fit.c,
        epsilon: fit.epsilon,
        n_tokens: seq.len(),
        vocab: seq.vocab_size(),
    })
}

/// Analyzes every file; unreadable or unfittable files land in `failures`.
pub fn batch(inputs: &[BatchInput], dt: usize, config: &TokenizerConfig) -> BatchSummary {
    let results = inputs
        .par_iter()
        .map(|inp| {
            let r = read_document(&inp.path, config)
                .and_then(|seq| analyze_row(&inp.id, &inp.group, &seq, dt));
            (inp.id.clone(), inp.group.clone(), r)
        })
        .collect();
    assemble(dt, results)
}

/// [`batch`] over sequences already in memory, as `(id, group, sequence)`.
pub fn batch_sequences(inputs: &[(String, String, TokenSequence)], dt: usize) -> BatchSummary {
    let results = inputs
        .par_iter()
        .map(|(id, group, seq)| (id.clone(), group.clone(), analyze_row(id, group, seq, dt)))
        .collect();
    assemble(dt, results)
}
