//! Small shared statistics helpers.

/// Linear-interpolation percentile on an already ascending-sorted slice.
///
/// Rank `r = (p/100)·(n-1)`; the value is `s[⌊r⌋] + frac(r)·(s[⌊r⌋+1] - s[⌊r⌋])`.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty slice");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let r = (p / 100.0) * (n - 1) as f64;
    let lo = (r.floor() as usize).min(n - 1);
    let hi = (lo + 1).min(n - 1);
    let frac = r - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Percentile of an unsorted slice (sorts a copy).
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in percentile"));
    percentile_sorted(&v, p)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population variance (divides by n).
pub fn population_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}
