//! Interval estimates for binomial proportions.

use statrs::function::beta::beta_reg;

/// Invert the regularized incomplete beta function `I_x(a, b) = target` by
/// bisection. `I_x` is increasing in `x`.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Exact two-sided Clopper–Pearson interval for `k` successes in `n` trials
/// with total miscoverage `alpha` split evenly between the tails.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    assert!(k <= n && n > 0, "need 0 ≤ k ≤ n, n > 0");
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        beta_quantile(kf, nf - kf + 1.0, alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        beta_quantile(kf + 1.0, nf - kf, 1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Standard-normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf(p)
}

/// Poisson-counting error bar on `k / n`: `± z·√k / n`, clipped to `[0,1]`.
/// Only for reproducing plots with counting-statistics error bars.
pub fn poisson_interval(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    assert!(k <= n && n > 0);
    let z = normal_quantile(1.0 - alpha / 2.0);
    let p = k as f64 / n as f64;
    let half = z * (k as f64).sqrt() / n as f64;
    ((p - half).max(0.0), (p + half).min(1.0))
}

/// One-sided Hoeffding deviation for a mean of `n` bounded samples at the
/// given confidence.
pub fn hoeffding_margin(confidence: f64, n: u64) -> f64 {
    ((1.0 / (1.0 - confidence)).ln() / (2.0 * n as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Binomial CDF by direct summation in log space.
    fn binom_cdf(k: u64, n: u64, p: f64) -> f64 {
        use statrs::function::gamma::ln_gamma;
        let lc = |i: u64| ln_gamma(n as f64 + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma((n - i) as f64 + 1.0);
        (0..=k)
            .map(|i| (lc(i) + i as f64 * p.ln() + (n - i) as f64 * (1.0 - p).ln()).exp())
            .sum()
    }

    #[test]
    fn clopper_pearson_matches_binomial_tails() {
        let alpha = 0.01;
        for &(k, n) in &[(3u64, 20u64), (85, 100), (8536, 10_000), (1, 1000)] {
            let (lo, hi) = clopper_pearson(k, n, alpha);
            // P(X ≥ k | lo) = α/2 and P(X ≤ k | hi) = α/2
            assert_abs_diff_eq!(1.0 - binom_cdf(k - 1, n, lo), alpha / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(binom_cdf(k, n, hi), alpha / 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn boundaries() {
        assert_eq!(clopper_pearson(0, 50, 0.05).0, 0.0);
        assert_eq!(clopper_pearson(50, 50, 0.05).1, 1.0);
    }

    #[test]
    fn width_at_ten_thousand() {
        // 8 cells at joint 0.99 confidence: per-cell α = 0.01/8
        let (lo, hi) = clopper_pearson(8536, 10_000, 0.01 / 8.0);
        let approx = 2.0 * normal_quantile(1.0 - 0.01 / 16.0) * (0.8536f64 * 0.1464 / 1e4).sqrt();
        assert!((hi - lo - approx).abs() < 5e-4, "{} vs {}", hi - lo, approx);
        assert!(hi - lo > 0.0195 && hi - lo < 0.0235);
    }

    #[test]
    fn hoeffding_value() {
        assert_abs_diff_eq!(hoeffding_margin(0.99, 60_000), 0.006_194_870_314_749_7, epsilon = 1e-12);
    }
}
