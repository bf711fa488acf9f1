//! Group comparison: the Brunner-Munzel rank test and box-plot summaries.

pub mod special;

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest per-sample size accepted by [`brunner_munzel`].
pub const BM_MIN_SAMPLE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BmResult {
    /// Studentized rank statistic; positive when `b` tends to be larger.
    pub statistic: f64,
    pub df: f64,
    /// Two-sided p-value from Student's t with `df` degrees of freedom.
    pub p_value: f64,
    /// Estimate of `P(A < B) + P(A = B) / 2`.
    pub superiority: f64,
    pub n_a: usize,
    pub n_b: usize,
}

fn check_finite(values: &[f64], what: &'static str) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::InvalidArgument(format!("{what} contains {v}"))),
        None => Ok(()),
    }
}

/// Midranks (1-based, ties get the average of their positions).
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Brunner-Munzel test of `H0: P(A < B) + P(A = B)/2 = 1/2`.
///
/// Each observation's placement is its rank in the pooled sample minus its
/// rank within its own sample, i.e. the number of observations of the other
/// sample below it (ties count one half). With `s_a^2`, `s_b^2` the sample
/// variances of the placements,
///
/// ```text
/// W  = n_a n_b (mean_rank_b - mean_rank_a) / ((n_a + n_b) sqrt(n_a s_a^2 + n_b s_b^2))
/// df = (n_a s_a^2 + n_b s_b^2)^2 / ((n_a s_a^2)^2 / (n_a - 1) + (n_b s_b^2)^2 / (n_b - 1))
/// ```
///
/// Both placement variances vanish only when the samples are completely
/// separated or all values coincide. The latter is reported as
/// [`Error::DegenerateTest`]. For complete separation the pooled variance
/// term is floored at `n_a n_b / 2` and `df` set to `min(n_a, n_b) - 1`, the
/// lower end of the range the Satterthwaite formula can take.
pub fn brunner_munzel(a: &[f64], b: &[f64]) -> Result<BmResult> {
    let (n_a, n_b) = (a.len(), b.len());
    if n_a < BM_MIN_SAMPLE || n_b < BM_MIN_SAMPLE {
        return Err(Error::SampleTooSmall {
            n_a,
            n_b,
            min: BM_MIN_SAMPLE,
        });
    }
    check_finite(a, "sample a")?;
    check_finite(b, "sample b")?;

    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let pooled_ranks = midranks(&pooled);
    let own_a = midranks(a);
    let own_b = midranks(b);
    let place_a: Vec<f64> = (0..n_a).map(|i| pooled_ranks[i] - own_a[i]).collect();
    let place_b: Vec<f64> = (0..n_b).map(|j| pooled_ranks[n_a + j] - own_b[j]).collect();

    let (na, nb) = (n_a as f64, n_b as f64);
    let superiority = mean(&place_b) / na;
    let rank_diff = mean(&pooled_ranks[n_a..]) - mean(&pooled_ranks[..n_a]);
    let va = na * sample_variance(&place_a);
    let vb = nb * sample_variance(&place_b);

    let (spread, df) = if va + vb > 0.0 {
        let df = (va + vb).powi(2) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
        (va + vb, df)
    } else if superiority == 0.5 {
        return Err(Error::DegenerateTest);
    } else {
        (na * nb / 2.0, (n_a.min(n_b) - 1) as f64)
    };

    let statistic = na * nb * rank_diff / ((na + nb) * spread.sqrt());
    Ok(BmResult {
        statistic,
        df,
        p_value: special::student_t_two_sided(statistic, df),
        superiority,
        n_a,
        n_b,
    })
}

/// Five-number summary plus count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

/// Quantile of sorted data by linear interpolation between order statistics:
/// position `h = (n - 1) p`, value `x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Median, quartiles and range of `values`.
pub fn quantile_summary(values: &[f64]) -> Result<BoxStats> {
    if values.is_empty() {
        return Err(Error::EmptyInput("quantile summary of no values"));
    }
    check_finite(values, "values")?;
    let mut sorted = values.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    Ok(BoxStats {
        median: quantile_sorted(&sorted, 0.5),
        q1: quantile_sorted(&sorted, 0.25),
        q3: quantile_sorted(&sorted, 0.75),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        n: sorted.len(),
    })
}
