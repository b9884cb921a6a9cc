//! Tiny statistics helpers for scaling measurements.

/// Least-squares slope of `ln y` against `ln x`.
///
/// Fitting on log-log axes turns a power law `y = c * x^a` into a straight
/// line with slope `a`, which is how convergence orders and cost exponents
/// are estimated from measurements. Needs at least two points with
/// distinct positive `x` and positive `y`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope needs at least two points");
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| {
            assert!(x > 0.0 && y > 0.0, "log-log fit needs positive coordinates");
            (x.ln(), y.ln())
        })
        .collect();
    let n = logs.len() as f64;
    let mean_x: f64 = logs.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let mean_y: f64 = logs.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|&(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let var: f64 = logs.iter().map(|&(x, _)| (x - mean_x).powi(2)).sum();
    assert!(var > 0.0, "slope needs at least two distinct x values");
    cov / var
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_laws() {
        let quadratic: Vec<(f64, f64)> =
            (1..=6).map(|i| (i as f64, 3.0 * (i as f64).powi(2))).collect();
        assert!((log_log_slope(&quadratic) - 2.0).abs() < 1e-12);

        let inverse: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64, 5.0 / i as f64)).collect();
        assert!((log_log_slope(&inverse) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn tolerates_noise_around_a_trend() {
        let points = [(1.0, 2.1), (2.0, 3.9), (4.0, 8.2), (8.0, 15.8)];
        let slope = log_log_slope(&points);
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn rejects_nonpositive_values() {
        let _ = log_log_slope(&[(1.0, 0.0), (2.0, 1.0)]);
    }
}
