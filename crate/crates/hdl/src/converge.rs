//! Refinement studies.

/// Least-squares slope `p` of `log e ≈ log c + p log h` with the grid
/// spacing `h ∝ 1/(M + 1)`. Needs at least two positive errors.
pub fn fit_order(ms: &[usize], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ms
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > 0.0 && e.is_finite())
        .map(|(&m, &e)| ((1.0 / (m as f64 + 1.0)).ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Each value is at most `(1 + slack)` times its predecessor, or already
/// below `floor`, where further decrease is not resolvable.
pub fn decreasing_with_slack(values: &[f64], slack: f64, floor: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack) || w[1] <= floor)
}
