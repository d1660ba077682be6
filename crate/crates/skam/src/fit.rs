//! Log-log least squares used by every scaling check: fit `value ~ C hbar^s`
//! over a dyadic hbar sweep and report the exponent with its residual.

#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    /// Fitted exponent s in value ~ C hbar^s.
    pub slope: f64,
    /// log2 of the prefactor C.
    pub log2_prefactor: f64,
    /// Largest absolute residual of log2(value) against the fit.
    pub max_residual: f64,
    /// Number of points used.
    pub points: usize,
}

/// Least squares of log2(value) against log2(hbar). Nonpositive values are
/// rejected (returns `None`) since they carry no scaling information.
pub fn fit_log2_slope(samples: &[(f64, f64)]) -> Option<SlopeFit> {
    if samples.len() < 2 || samples.iter().any(|&(h, v)| h <= 0.0 || v <= 0.0) {
        return None;
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(h, v)| (h.log2(), v.log2()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Some(SlopeFit {
        slope,
        log2_prefactor: intercept,
        max_residual,
        points: pts.len(),
    })
}

/// Standard dyadic sweep 2^-lo ..= 2^-hi (inclusive, lo <= hi).
pub fn dyadic_hbars(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|j| 0.5f64.powi(j as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let samples: Vec<(f64, f64)> = dyadic_hbars(3, 8)
            .into_iter()
            .map(|h| (h, 3.5 * h.powf(1.25)))
            .collect();
        let fit = fit_log2_slope(&samples).unwrap();
        assert!((fit.slope - 1.25).abs() < 1e-12);
        assert!(fit.max_residual < 1e-12);
        assert!((fit.log2_prefactor - 3.5f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_values() {
        assert!(fit_log2_slope(&[(0.5, 1.0), (0.25, 0.0)]).is_none());
        assert!(fit_log2_slope(&[(0.5, 1.0)]).is_none());
    }

    #[test]
    fn mixture_slope_sits_between_orders() {
        // v = h^0.7 + h^1.1 must fit between the two exponents.
        let samples: Vec<(f64, f64)> = dyadic_hbars(3, 8)
            .into_iter()
            .map(|h| (h, h.powf(0.7) + h.powf(1.1)))
            .collect();
        let fit = fit_log2_slope(&samples).unwrap();
        assert!(fit.slope > 0.7 && fit.slope < 1.1);
    }
}
