//! Sample statistics, histogramming, and chi-square goodness-of-fit.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Histogram with explicit bin edges; the last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Freedman-Diaconis binning with a floor on the bin count.
///
/// Falls back to the floor when the IQR degenerates (constant samples).
pub fn histogram_fd(samples: &[f64], min_bins: usize) -> Histogram {
    assert!(!samples.is_empty(), "cannot histogram an empty sample");
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = sorted[0];
    let hi = sorted[sorted.len() - 1];
    let range = (hi - lo).max(f64::MIN_POSITIVE);
    let q = |f: f64| -> f64 {
        let idx = f * (sorted.len() - 1) as f64;
        let i = idx.floor() as usize;
        let frac = idx - i as f64;
        if i + 1 < sorted.len() {
            sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
        } else {
            sorted[i]
        }
    };
    let iqr = q(0.75) - q(0.25);
    let width = 2.0 * iqr / (sorted.len() as f64).cbrt();
    let n_bins = if width > 0.0 {
        ((range / width).ceil() as usize).clamp(min_bins, 10_000)
    } else {
        min_bins
    };
    let edges: Vec<f64> = (0..=n_bins)
        .map(|i| lo + range * i as f64 / n_bins as f64)
        .collect();
    let mut counts = vec![0u64; n_bins];
    for &x in samples {
        let mut bin = ((x - lo) / range * n_bins as f64) as usize;
        if bin >= n_bins {
            bin = n_bins - 1;
        }
        counts[bin] += 1;
    }
    Histogram { edges, counts }
}

/// Chi-square goodness-of-fit result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub p_value: f64,
    pub dof: usize,
    pub bins_used: usize,
}

/// Merges adjacent bins until every expected count reaches 5 (the standard
/// validity condition), then evaluates the chi-square statistic.
fn chi_square_merged(observed: &[f64], expected: &[f64]) -> GofResult {
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        acc_obs += o;
        acc_exp += e;
        if acc_exp >= 5.0 {
            merged.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    if acc_exp > 0.0 || acc_obs > 0.0 {
        if let Some(last) = merged.last_mut() {
            last.0 += acc_obs;
            last.1 += acc_exp;
        } else {
            merged.push((acc_obs, acc_exp));
        }
    }

    let statistic: f64 = merged.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let bins_used = merged.len();
    let dof = bins_used.saturating_sub(1).max(1);
    let p_value = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic);
    GofResult {
        statistic,
        p_value,
        dof,
        bins_used,
    }
}

/// Chi-square test of a histogram against a closed-form CDF; tails beyond
/// the histogram range fold into the outermost bins.
pub fn chi_square_gof(hist: &Histogram, cdf: impl Fn(f64) -> f64) -> GofResult {
    let n = hist.total() as f64;
    let n_bins = hist.n_bins();
    let mut expected: Vec<f64> = (0..n_bins)
        .map(|i| n * (cdf(hist.edges[i + 1]) - cdf(hist.edges[i])))
        .collect();
    expected[0] += n * cdf(hist.edges[0]);
    expected[n_bins - 1] += n * (1.0 - cdf(hist.edges[n_bins]));
    let observed: Vec<f64> = hist.counts.iter().map(|&c| c as f64).collect();
    chi_square_merged(&observed, &expected)
}

/// Chi-square test of discrete counts against given cell probabilities.
pub fn chi_square_counts(counts: &[u64], probs: &[f64]) -> GofResult {
    assert_eq!(counts.len(), probs.len());
    let n: f64 = counts.iter().sum::<u64>() as f64;
    let observed: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let expected: Vec<f64> = probs.iter().map(|p| p * n).collect();
    chi_square_merged(&observed, &expected)
}

/// Mean, variance, standard error, histogram, and optional goodness-of-fit
/// of one sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub mean: f64,
    pub variance: f64,
    pub standard_error: f64,
    pub histogram: Histogram,
    pub gof_statistic: Option<f64>,
    pub gof_pvalue: Option<f64>,
}

/// Summarizes samples; when a CDF is supplied the histogram is chi-square
/// tested against it.
pub fn summarize(samples: &[f64], cdf: Option<&dyn Fn(f64) -> f64>) -> StatSummary {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = if samples.len() > 1 {
        samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let histogram = histogram_fd(samples, 20);
    let gof = cdf.map(|f| chi_square_gof(&histogram, f));
    StatSummary {
        mean,
        variance,
        standard_error: (variance / n).sqrt(),
        histogram,
        gof_statistic: gof.map(|g| g.statistic),
        gof_pvalue: gof.map(|g| g.p_value),
    }
}
