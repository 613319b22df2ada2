//! Descriptive and inferential statistics for comparing rule sets and
//! frequency profiles: five-number summaries with fence-based outliers, the
//! h-point and thematic concentration of a rank-frequency profile, and the
//! two-sample Wilcoxon rank-sum test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::corpus::FrequencyProfile;
use crate::error::{Error, Result};

/// Five-number summary plus the upper fence used for outlier counting.
/// Quartiles interpolate linearly between order statistics at position
/// `(n - 1) * q` (the convention spreadsheet PERCENTILE and NumPy default
/// to), so they agree with those tools digit for digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub upper_fence: f64,
    pub lower_fence: f64,
    pub n_outliers_high: usize,
    pub n_outliers_low: usize,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Summary of a sample; fences sit 1.5 interquartile ranges beyond the
/// quartiles and outliers lie strictly beyond a fence.
pub fn boxplot_summary(values: &[f64]) -> Result<BoxplotSummary> {
    if values.is_empty() {
        return Err(Error::domain("cannot summarize an empty sample"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("sample contains a non-finite value"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.total_cmp(b));
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let upper_fence = q3 + 1.5 * iqr;
    let lower_fence = q1 - 1.5 * iqr;
    Ok(BoxplotSummary {
        n: sorted.len(),
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        upper_fence,
        lower_fence,
        n_outliers_high: sorted.iter().filter(|&&v| v > upper_fence).count(),
        n_outliers_low: sorted.iter().filter(|&&v| v < lower_fence).count(),
    })
}

/// The h-point of a rank-frequency profile `freqs` (descending counts for
/// ranks 1, 2, ...): the fixed point f(r) = r, interpolated between the
/// neighbouring ranks i and j = i + 1 when no rank hits it exactly, namely
/// (f(i)*j - f(j)*i) / (j - i + f(i) - f(j)). Profiles whose frequencies
/// stay above the rank everywhere get the list length.
pub fn h_point(freqs: &[u64]) -> Result<f64> {
    if freqs.is_empty() {
        return Err(Error::domain("cannot take the h-point of an empty profile"));
    }
    if freqs.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain("profile frequencies must be non-increasing"));
    }
    for (idx, &f) in freqs.iter().enumerate() {
        let rank = (idx + 1) as u64;
        if f == rank {
            return Ok(rank as f64);
        }
        if f < rank {
            if idx == 0 {
                // f(1) < 1 means a zero frequency in first position
                return Err(Error::domain("profile frequencies must be positive"));
            }
            let i = idx as f64; // previous rank
            let j = i + 1.0;
            let fi = freqs[idx - 1] as f64;
            let fj = f as f64;
            return Ok((fi * j - fj * i) / (j - i + fi - fj));
        }
    }
    Ok(freqs.len() as f64)
}

/// One pre-h-point word with its contribution inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcWord {
    pub lemma: String,
    pub rank: u64,
    pub freq: u64,
}

/// Thematic concentration of a frequency profile: the h-point of the full
/// profile and the summed weights 2(h - r)f(r) / (h(h - 1)f(1)) of the
/// thematic words among ranks 1..=floor(h).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThematicConcentration {
    pub h: f64,
    pub tc: f64,
    pub contributing: Vec<TcWord>,
}

/// Compute thematic concentration over `profile`, counting only lemmas for
/// which `is_thematic` holds (typically content words). Ranks come from the
/// full profile sorted by descending frequency with lexicographic
/// tie-breaking; the sum is clamped to 1 because fractional h-points with
/// tied top frequencies can push the raw sum slightly past it.
pub fn thematic_concentration<F>(
    profile: &FrequencyProfile,
    is_thematic: F,
) -> Result<ThematicConcentration>
where
    F: Fn(&str) -> bool,
{
    let ranked = profile.ranked();
    if ranked.is_empty() {
        return Err(Error::domain("cannot take thematic concentration of an empty profile"));
    }
    let freqs: Vec<u64> = ranked.iter().map(|&(_, f)| f).collect();
    let h = h_point(&freqs)?;
    if h <= 1.0 {
        return Ok(ThematicConcentration { h, tc: 0.0, contributing: Vec::new() });
    }
    let f1 = freqs[0] as f64;
    let cutoff = h.floor() as u64;
    let mut sum = 0.0;
    let mut contributing = Vec::new();
    for (idx, &(lemma, freq)) in ranked.iter().enumerate() {
        let rank = (idx + 1) as u64;
        if rank > cutoff {
            break;
        }
        if is_thematic(lemma) {
            sum += 2.0 * (h - rank as f64) * freq as f64 / (h * (h - 1.0) * f1);
            contributing.push(TcWord { lemma: lemma.to_string(), rank, freq });
        }
    }
    Ok(ThematicConcentration { h, tc: sum.min(1.0), contributing })
}

/// Which computational path produced a rank-sum p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankSumMethod {
    /// Exact permutation distribution of the rank sum.
    Exact,
    /// Large-sample normal approximation with tie correction and
    /// continuity correction.
    NormalApproximation,
}

/// Two-sided Wilcoxon rank-sum result. `u` counts, over all cross pairs,
/// wins of the first sample plus half its ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSumResult {
    pub u: f64,
    pub p: f64,
    pub n1: usize,
    pub n2: usize,
    pub method: RankSumMethod,
}

/// Combined-sample sizes up to this bound take the exact permutation path;
/// 16 values mean at most 12870 subsets, far below any runtime concern.
const EXACT_LIMIT: usize = 16;

/// Midranks of the combined sample in input order, plus the size of each
/// tie group (needed by the variance correction).
fn midranks(combined: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..combined.len()).collect();
    order.sort_unstable_by(|&a, &b| combined[a].total_cmp(&combined[b]));
    let mut ranks = vec![0.0; combined.len()];
    let mut tie_sizes = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && combined[order[j]] == combined[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j averaged
        let midrank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = midrank;
        }
        tie_sizes.push(j - i);
        i = j;
    }
    (ranks, tie_sizes)
}

/// Exact two-sided p-value: enumerate every n1-subset of the midranks,
/// compare its rank sum against the observed one, and double the smaller
/// tail. Midranks are halves of integers, so sums compare exactly in f64.
fn exact_p(ranks: &[f64], n1: usize, observed_r1: f64) -> f64 {
    let n = ranks.len();
    let mut c_le: u64 = 0;
    let mut c_ge: u64 = 0;
    let mut total: u64 = 0;
    // iterative subset walker over combinations of indices
    let mut idx: Vec<usize> = (0..n1).collect();
    loop {
        let sum: f64 = idx.iter().map(|&i| ranks[i]).sum();
        total += 1;
        if sum <= observed_r1 {
            c_le += 1;
        }
        if sum >= observed_r1 {
            c_ge += 1;
        }
        // advance to next combination
        let mut pos = n1;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + n - n1 {
                idx[pos] += 1;
                for k in pos + 1..n1 {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                let tail = (2 * c_le.min(c_ge)) as f64 / total as f64;
                return tail.min(1.0);
            }
        }
    }
}

fn normal_p(u_small: f64, n1: usize, n2: usize, tie_sizes: &[usize]) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let nf = n1f + n2f;
    let mu = n1f * n2f / 2.0;
    let tie_term: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let sigma2 = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if sigma2 <= 0.0 {
        // every value tied: no evidence of a shift
        return 1.0;
    }
    let z = (u_small - mu + 0.5) / sigma2.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * normal.cdf(z)).min(1.0)
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Ties get midranks.
/// Small designs (combined size <= 16) are evaluated against the exact
/// permutation distribution even in the presence of ties; larger ones use
/// the tie-corrected normal approximation with continuity correction.
pub fn wilcoxon_rank_sum(sample1: &[f64], sample2: &[f64]) -> Result<RankSumResult> {
    if sample1.is_empty() || sample2.is_empty() {
        return Err(Error::domain("rank-sum test requires two non-empty samples"));
    }
    if sample1.iter().chain(sample2).any(|v| !v.is_finite()) {
        return Err(Error::domain("rank-sum test requires finite values"));
    }
    let (n1, n2) = (sample1.len(), sample2.len());
    let combined: Vec<f64> = sample1.iter().chain(sample2).copied().collect();
    let (ranks, tie_sizes) = midranks(&combined);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;

    let (p, method) = if n1 + n2 <= EXACT_LIMIT {
        (exact_p(&ranks, n1, r1), RankSumMethod::Exact)
    } else {
        (normal_p(u1.min(u2), n1, n2, &tie_sizes), RankSumMethod::NormalApproximation)
    };
    Ok(RankSumResult { u: u1, p, n1, n2, method })
}
