//! Scaling parameters shared by every operation: dimension, the small
//! parameter `hbar`, and the three exponents (kappa, gamma, delta) that
//! control perturbation size, resonance amount and zone width.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default cap on the number of Fourier modes a symbol may hold after an
/// algebraic operation.
pub const DEFAULT_SUPPORT_CAP: usize = 8192;

/// Coefficients whose sup-norm on the validation grid falls below this are
/// dropped when pruning.
pub const PRUNE_TOL: f64 = 1e-14;

/// Relative slack used when comparing vector norms against `hbar^-gamma`
/// style bounds, so that mathematically exact ties (e.g. |(1,1)| vs 2^0.5)
/// do not depend on floating-point rounding.
pub const NORM_CMP_RELATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalContext {
    /// Torus dimension d >= 1.
    pub dim: usize,
    /// Semiclassical parameter in (0, 1].
    pub hbar: f64,
    /// Perturbation exponent kappa > 0.
    pub kappa: f64,
    /// Resonance-amount exponent gamma >= 0.
    pub gamma: f64,
    /// Zone-width exponent delta >= 0.
    pub delta: f64,
    /// Cap on symbol support size.
    #[serde(default = "default_cap")]
    pub support_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_SUPPORT_CAP
}

impl SemiclassicalContext {
    pub fn new(dim: usize, hbar: f64, kappa: f64, gamma: f64, delta: f64) -> Result<Self> {
        let ctx = Self {
            dim,
            hbar,
            kappa,
            gamma,
            delta,
            support_cap: DEFAULT_SUPPORT_CAP,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Checks every exponent constraint, naming the violated inequality.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidContext(msg));
        if self.dim == 0 {
            return fail("d >= 1 violated".into());
        }
        if !(self.hbar > 0.0 && self.hbar <= 1.0) {
            return fail(format!("0 < hbar <= 1 violated (hbar = {})", self.hbar));
        }
        if !(self.kappa > 0.0) {
            return fail(format!("kappa > 0 violated (kappa = {})", self.kappa));
        }
        if !(self.gamma >= 0.0) {
            return fail(format!("gamma >= 0 violated (gamma = {})", self.gamma));
        }
        if !(self.delta >= 0.0) {
            return fail(format!("delta >= 0 violated (delta = {})", self.delta));
        }
        if !(self.delta < 1.0 - self.gamma) {
            return fail(format!(
                "delta < 1 - gamma violated (delta = {}, gamma = {})",
                self.delta, self.gamma
            ));
        }
        if !(self.delta < self.kappa / 3.0) {
            return fail(format!(
                "delta < kappa/3 violated (delta = {}, kappa = {})",
                self.delta, self.kappa
            ));
        }
        Ok(())
    }

    /// alpha = min(1 - delta, kappa - 3 delta); positive whenever the context
    /// is valid. Always recomputed from (kappa, delta).
    pub fn alpha(&self) -> f64 {
        (1.0 - self.delta).min(self.kappa - 3.0 * self.delta)
    }

    /// Same context at a different `hbar` (sweeps).
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        let mut c = *self;
        c.hbar = hbar;
        c.validate()?;
        Ok(c)
    }

    /// hbar^delta, the zone-width scale.
    pub fn hbar_delta(&self) -> f64 {
        self.hbar.powf(self.delta)
    }

    /// hbar^-gamma, the resonance-lattice norm bound.
    pub fn lattice_bound(&self) -> f64 {
        self.hbar.powf(-self.gamma)
    }

    /// Step used by finite-difference derivative fallbacks; delta-class
    /// coefficients vary on scale hbar^delta.
    pub fn fd_step(&self) -> f64 {
        (self.hbar_delta() * 1e-3).max(1e-5)
    }

    /// Two contexts are compatible when every scaling field agrees.
    pub fn same_scaling(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.hbar == other.hbar
            && self.kappa == other.kappa
            && self.gamma == other.gamma
            && self.delta == other.delta
    }
}

/// `|v| <= bound` with a relative slack so exact mathematical ties are kept.
pub fn norm_within(norm: f64, bound: f64) -> bool {
    norm <= bound * (1.0 + NORM_CMP_RELATIVE_SLACK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_preset_is_valid() {
        let ctx = SemiclassicalContext::new(2, 0.015625, 2.0, 0.05, 0.3).unwrap();
        assert!((ctx.alpha() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn violations_name_the_inequality() {
        let err = SemiclassicalContext::new(2, 0.1, 2.0, 0.5, 0.6).unwrap_err();
        assert!(err.to_string().contains("delta < 1 - gamma"));
        let err = SemiclassicalContext::new(2, 0.1, 0.6, 0.0, 0.3).unwrap_err();
        assert!(err.to_string().contains("delta < kappa/3"));
        let err = SemiclassicalContext::new(2, 1.5, 2.0, 0.05, 0.3).unwrap_err();
        assert!(err.to_string().contains("hbar"));
    }

    #[test]
    fn alpha_tracks_both_branches() {
        // kappa large: alpha = 1 - delta.
        let c = SemiclassicalContext::new(1, 0.5, 5.0, 0.0, 0.25).unwrap();
        assert_eq!(c.alpha(), 0.75);
        // kappa small: alpha = kappa - 3 delta.
        let c = SemiclassicalContext::new(1, 0.5, 1.0, 0.0, 0.25).unwrap();
        assert_eq!(c.alpha(), 0.25);
    }
}
