//! Rank statistics for comparing samples of runs.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{contract, Result};

/// Combined sample size up to which the exact null distribution is enumerated.
pub const EXACT_LIMIT: usize = 16;

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// Ranks starting at 1; ties get the mean of the ranks they span.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 2 || b.len() < 2 {
        return Err(contract(format!("rank test needs at least 2 values per sample, got {} and {}", a.len(), b.len())));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(contract("rank test samples contain NaN"));
    }
    Ok(())
}

/// Mann-Whitney U statistic of `a` against `b`.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n1 = a.len() as f64;
    ranks[..a.len()].iter().sum::<f64>() - n1 * (n1 + 1.0) / 2.0
}

/// Two-sided p-value by enumerating every split of the pooled midranks.
pub fn mann_whitney_exact(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let (n1, n) = (a.len(), pooled.len());
    if n > 30 {
        return Err(contract(format!("exact enumeration over {n} values is too large")));
    }
    let mean = n1 as f64 * (n as f64 + 1.0) / 2.0;
    let observed = (ranks[..n1].iter().sum::<f64>() - mean).abs();
    let tol = 1e-9 * (1.0 + observed);
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let sum: f64 = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        total += 1;
        if (sum - mean).abs() >= observed - tol {
            extreme += 1;
        }
    }
    Ok(extreme as f64 / total as f64)
}

/// Two-sided p-value from the normal approximation with tie and continuity
/// corrections.
pub fn mann_whitney_normal(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return Ok(1.0);
    }
    let dev = (mann_whitney_u(a, b) - n1 * n2 / 2.0).abs();
    let z = (dev - 0.5).max(0.0) / variance.sqrt();
    let normal = Normal::standard();
    Ok((2.0 * (1.0 - normal.cdf(z))).min(1.0))
}

/// Two-sided Mann-Whitney p-value: exact for combined size up to
/// [`EXACT_LIMIT`], normal approximation above. All-equal samples give 1.
pub fn mann_whitney_p(a: &[f64], b: &[f64]) -> Result<f64> {
    check_samples(a, b)?;
    let first = a[0];
    if a.iter().chain(b).all(|&v| v == first) {
        return Ok(1.0);
    }
    if a.len() + b.len() <= EXACT_LIMIT {
        mann_whitney_exact(a, b)
    } else {
        mann_whitney_normal(a, b)
    }
}

/// Spearman rank correlation; `None` when either side is constant or the
/// lengths differ.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (midranks(x), midranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
