//! Deterministic sample grids used for pruning, norm estimation and
//! identity checks: uniform x-points on the torus and uniform xi-points in a
//! configurable momentum window.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Momentum window per axis.
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// xi points per axis.
    pub xi_pts: usize,
    /// x points per axis over [0, 2pi).
    pub x_pts: usize,
}

impl GridSpec {
    /// Standard validation grid: 17^d x-points, 33 xi-points per axis over
    /// [-2, 2]^d.
    pub fn standard() -> Self {
        Self {
            xi_lo: -2.0,
            xi_hi: 2.0,
            xi_pts: 33,
            x_pts: 17,
        }
    }

    /// Same window, finer xi resolution; used for scaling fits where the
    /// coefficients vary on scale hbar^delta.
    pub fn fine(xi_pts: usize) -> Self {
        Self {
            xi_pts,
            ..Self::standard()
        }
    }

    pub fn with_window(mut self, lo: f64, hi: f64) -> Self {
        self.xi_lo = lo;
        self.xi_hi = hi;
        self
    }

    fn axis_xi(&self, i: usize) -> f64 {
        if self.xi_pts == 1 {
            return 0.5 * (self.xi_lo + self.xi_hi);
        }
        self.xi_lo + (self.xi_hi - self.xi_lo) * i as f64 / (self.xi_pts - 1) as f64
    }

    /// All xi grid points in dimension `d` (row-major cartesian product).
    pub fn xi_points(&self, d: usize) -> Vec<Vec<f64>> {
        cartesian(d, self.xi_pts, |i| self.axis_xi(i))
    }

    /// All x grid points in dimension `d`, uniform over [0, 2pi)^d.
    pub fn x_points(&self, d: usize) -> Vec<Vec<f64>> {
        let n = self.x_pts;
        cartesian(d, n, |i| 2.0 * PI * i as f64 / n as f64)
    }
}

fn cartesian(d: usize, n: usize, axis: impl Fn(usize) -> f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        out.push(idx.iter().map(|&i| axis(i)).collect());
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
        }
    }
}
