//! Order-fixed pairwise reductions for reproducible ensemble statistics.

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// slice length, so results are bit-identical across runs and thread
/// counts as long as element order is fixed.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 32;
    if values.len() <= BASE {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    pairwise_sum(values) / values.len() as f64
}

/// Two-pass sample mean and standard error of the mean. A slice of
/// exactly-duplicate values reports zero standard error (the rounded
/// mean would otherwise inject ulp-level spread).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if values.windows(2).all(|w| w[0] == w[1]) {
        return (values[0], 0.0);
    }
    let m = mean(values);
    if n < 2 {
        return (m, 0.0);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - m) * (v - m)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (m, (var / n as f64).sqrt())
}
