//! Ordinary least squares on (x, y) pairs, used for every log-log scaling
//! fit in the toolkit (decay exponents, Knapp ratio slopes).

/// Result of a 1D least-squares line fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub slope_stderr: f64,
    pub n: usize,
}

/// Fits a line to the given points. Requires at least two distinct x values.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let stderr = if n > 2 {
        let ss_res: f64 = points
            .iter()
            .map(|p| {
                let r = p.1 - (intercept + slope * p.0);
                r * r
            })
            .sum();
        (ss_res / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit { slope, intercept, slope_stderr: stderr, n })
}

/// Convenience for scaling laws: fits log(y) against log(x); points with a
/// non-positive coordinate are rejected by returning None.
pub fn fit_loglog(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.iter().any(|p| p.0 <= 0.0 || p.1 <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    fit_line(&logs)
}
