//! Small empirical-distribution helpers shared by the report command and
//! the test suites.

/// Sorted `(value, cumulative fraction)` pairs of the empirical CDF.
pub fn empirical_cdf(values: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(k, v)| (v, (k + 1) as f64 / n))
        .collect()
}

/// Two-sample Kolmogorov–Smirnov statistic: the largest vertical gap
/// between the two empirical CDFs.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let x = xs[i];
        let y = ys[j];
        if x <= y {
            i += 1;
        }
        if y <= x {
            j += 1;
        }
        let fa = i as f64 / xs.len() as f64;
        let fb = j as f64 / ys.len() as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

/// One-sample KS statistic against a reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        let f = cdf(v);
        d = d.max((f - k as f64 / n).abs());
        d = d.max(((k + 1) as f64 / n - f).abs());
    }
    d
}

/// Asymptotic p-value of the one-sample KS statistic (Kolmogorov series
/// with the small-sample correction).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    let mut sum = 0.0;
    for j in 1..=100 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * (-2.0 * (j as f64 * lambda).powi(2)).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_samples_have_zero_ks() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [4.0, 3.0, 2.0, 1.0];
        assert!(ks_two_sample(&a, &b) < 1e-12);
    }

    #[test]
    fn disjoint_supports_have_ks_one() {
        let a = [1.0, 2.0, 3.0];
        let b = [10.0, 11.0];
        assert!((ks_two_sample(&a, &b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_two_sample_value() {
        // classic textbook example: D = 0.25
        let a = [1.0, 1.0, 4.0, 4.0];
        let b = [1.0, 1.0, 1.0, 4.0];
        assert!((ks_two_sample(&a, &b) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn uniform_sample_has_high_p() {
        let values: Vec<f64> = (0..1000).map(|k| (k as f64 + 0.5) / 1000.0).collect();
        let d = ks_one_sample(&values, |x| x.clamp(0.0, 1.0));
        assert!(ks_p_value(d, values.len()) > 0.9);
    }

    #[test]
    fn shifted_sample_has_low_p() {
        let values: Vec<f64> = (0..1000).map(|k| 0.2 + 0.8 * (k as f64 + 0.5) / 1000.0).collect();
        let d = ks_one_sample(&values, |x| x.clamp(0.0, 1.0));
        assert!(ks_p_value(d, values.len()) < 1e-6);
    }
}
