//! Finite Fourier sums P(x, xi) = sum_k ptilde(k, xi) e^{ikx} with evaluable
//! coefficient fields, and the exact calculus on them: averages, adjoint,
//! Moyal product, commutators, the Poisson pairing with an x-independent
//! Hamiltonian, and seminorm estimation.
//!
//! Every operation is a pure function; symbols are immutable after
//! construction and cheap to clone (coefficients are shared).

use crate::context::{SemiclassicalContext, PRUNE_TOL};
use crate::error::{Error, Result};
use crate::expr::CoefField;
use crate::grid::GridSpec;
use crate::hamiltonian::{Hamiltonian, HamiltonianForm};
use crate::lattice::ResonanceLattice;
use num_complex::Complex64;
use std::collections::BTreeMap;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    ctx: SemiclassicalContext,
    modes: BTreeMap<Vec<i64>, CoefField>,
}

impl FourierSymbol {
    pub fn zero(ctx: SemiclassicalContext) -> Self {
        Self {
            ctx,
            modes: BTreeMap::new(),
        }
    }

    pub fn from_modes(
        ctx: SemiclassicalContext,
        modes: impl IntoIterator<Item = (Vec<i64>, CoefField)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in modes {
            assert_eq!(k.len(), ctx.dim, "mode dimension mismatch");
            if !c.is_const_zero() {
                map.entry(k)
                    .and_modify(|e: &mut CoefField| *e = e.add(&c))
                    .or_insert(c);
            }
        }
        Self { ctx, modes: map }
    }

    /// x-independent symbol with the given k = 0 coefficient.
    pub fn x_independent(ctx: SemiclassicalContext, coeff: CoefField) -> Self {
        Self::from_modes(ctx, [(vec![0; ctx.dim], coeff)])
    }

    pub fn constant(ctx: SemiclassicalContext, z: Complex64) -> Self {
        Self::x_independent(ctx, CoefField::constant(z))
    }

    /// 2 cos(<k, x>): unit coefficients at +/- k.
    pub fn two_cos(ctx: SemiclassicalContext, k: &[i64]) -> Self {
        let neg: Vec<i64> = k.iter().map(|&c| -c).collect();
        Self::from_modes(
            ctx,
            [
                (k.to_vec(), CoefField::one()),
                (neg, CoefField::one()),
            ],
        )
    }

    /// The symbol of an x-independent Hamiltonian.
    pub fn from_hamiltonian(ctx: SemiclassicalContext, h: &Hamiltonian) -> Self {
        assert_eq!(h.dim, ctx.dim);
        let coeff = match &h.form {
            HamiltonianForm::Quadratic { m, b } => {
                let d = h.dim;
                let lin = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                let quad: Vec<Complex64> = (0..d * d)
                    .map(|idx| Complex64::new(0.5 * m[idx / d][idx % d], 0.0))
                    .collect();
                CoefField::poly_quadratic(Complex64::default(), lin, quad)
            }
            HamiltonianForm::Linear { omega } => CoefField::poly_affine(
                Complex64::default(),
                omega.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            ),
        };
        Self::x_independent(ctx, coeff)
    }

    pub fn ctx(&self) -> &SemiclassicalContext {
        &self.ctx
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Vec<i64>, &CoefField)> {
        self.modes.iter()
    }

    pub fn coeff(&self, k: &[i64]) -> Option<&CoefField> {
        self.modes.get(k)
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.modes.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.modes.len()
    }

    pub fn is_x_independent(&self) -> bool {
        self.modes.keys().all(|k| k.iter().all(|&c| c == 0))
    }

    /// Largest |k|_inf over the support (0 for x-independent symbols).
    pub fn bandwidth(&self) -> i64 {
        self.modes
            .keys()
            .map(|k| k.iter().map(|c| c.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Largest Euclidean |k| over the support.
    pub fn support_radius(&self) -> f64 {
        self.modes
            .keys()
            .map(|k| crate::expr::euclid(k))
            .fold(0.0, f64::max)
    }

    /// P(x, xi) = sum_k ptilde(k, xi) e^{ik.x}.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        let mut acc = Complex64::default();
        for (k, c) in &self.modes {
            let phase: f64 = k.iter().zip(x).map(|(&ki, &xj)| ki as f64 * xj).sum();
            acc += c.eval(xi) * Complex64::new(phase.cos(), phase.sin());
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ctx.same_scaling(&other.ctx), "context mismatch");
        let mut modes = self.modes.clone();
        for (k, c) in &other.modes {
            modes
                .entry(k.clone())
                .and_modify(|e| *e = e.add(c))
                .or_insert_with(|| c.clone());
        }
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            ctx: self.ctx,
            modes: self
                .modes
                .iter()
                .map(|(k, c)| (k.clone(), c.scale(z)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Drops modes whose coefficient sup-norm on the validation grid falls
    /// below the pruning tolerance.
    pub fn prune(&self) -> Self {
        self.prune_with(&GridSpec::standard())
    }

    pub fn prune_with(&self, grid: &GridSpec) -> Self {
        let pts = grid.xi_points(self.ctx.dim);
        let modes = self
            .modes
            .iter()
            .filter(|(_, c)| !c.is_const_zero() && c.sup_on(&pts) >= PRUNE_TOL)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    /// Average over the whole torus: keeps only the k = 0 mode.
    pub fn torus_average(&self) -> Self {
        let zero = vec![0i64; self.ctx.dim];
        let modes = self
            .modes
            .iter()
            .filter(|(k, _)| **k == zero)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    /// Lattice average: keeps exactly the modes with k in R.
    pub fn lattice_average(&self, r: &ResonanceLattice) -> Self {
        let modes = self
            .modes
            .iter()
            .filter(|(k, _)| r.contains(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    /// Adjoint symbol: coefficient at k is conj(ptilde(-k, xi + hbar k)).
    pub fn adjoint(&self) -> Self {
        let hbar = self.ctx.hbar;
        let modes = self
            .modes
            .iter()
            .map(|(k, c)| {
                let neg: Vec<i64> = k.iter().map(|&c| -c).collect();
                let shift: Vec<f64> = neg.iter().map(|&c| hbar * c as f64).collect();
                (neg, c.shift(&shift).conj())
            })
            .collect();
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    /// Left Moyal product: coefficient at m is
    /// sum_k atilde(m - k, xi + hbar k) btilde(k, xi).
    pub fn moyal(&self, other: &Self) -> Result<Self> {
        assert!(self.ctx.same_scaling(&other.ctx), "context mismatch");
        let hbar = self.ctx.hbar;
        let mut out: BTreeMap<Vec<i64>, CoefField> = BTreeMap::new();
        for (kb, cb) in &other.modes {
            let shift: Vec<f64> = kb.iter().map(|&c| hbar * c as f64).collect();
            for (ka, ca) in &self.modes {
                let m: Vec<i64> = ka.iter().zip(kb).map(|(&a, &b)| a + b).collect();
                let term = ca.shift(&shift).mul(cb);
                out.entry(m)
                    .and_modify(|e| *e = e.add(&term))
                    .or_insert(term);
                if out.len() > self.ctx.support_cap {
                    return Err(Error::SupportCap {
                        cap: self.ctx.support_cap,
                        needed: out.len(),
                        stage: "moyal product".into(),
                    });
                }
            }
        }
        Ok(Self {
            ctx: self.ctx,
            modes: out,
        }
        .prune())
    }

    /// j-th term of the Moyal expansion:
    /// C_j = (hbar/i)^j sum_{|alpha|=j} (1/alpha!) d_xi^alpha A d_x^alpha B.
    pub fn moyal_expansion_term(&self, other: &Self, j: u32) -> Result<Self> {
        assert!(self.ctx.same_scaling(&other.ctx), "context mismatch");
        let d = self.ctx.dim;
        let fd = self.ctx.fd_step();
        let pref = (Complex64::new(0.0, -self.ctx.hbar)).powu(j); // (hbar/i)^j
        let mut out = Self::zero(self.ctx);
        for alpha in multi_indices(d, j) {
            let fact: f64 = alpha.iter().map(|&a| factorial(a)).product();
            // d_xi^alpha of each coefficient of A
            let da: Vec<(Vec<i64>, CoefField)> = self
                .modes
                .iter()
                .map(|(k, c)| {
                    let mut dc = c.clone();
                    for (axis, &reps) in alpha.iter().enumerate() {
                        for _ in 0..reps {
                            dc = dc.deriv(axis, fd);
                        }
                    }
                    (k.clone(), dc)
                })
                .collect();
            let mut modes: BTreeMap<Vec<i64>, CoefField> = BTreeMap::new();
            for (kb, cb) in &other.modes {
                // d_x^alpha B picks up (i kb)^alpha
                let mut factor = Complex64::new(1.0, 0.0);
                for (axis, &reps) in alpha.iter().enumerate() {
                    factor *= (I * kb[axis] as f64).powu(reps);
                }
                if factor == Complex64::default() {
                    continue;
                }
                for (ka, ca) in &da {
                    let m: Vec<i64> = ka.iter().zip(kb).map(|(&a, &b)| a + b).collect();
                    let term = ca.mul(cb).scale(factor * pref / fact);
                    modes
                        .entry(m)
                        .and_modify(|e| *e = e.add(&term))
                        .or_insert(term);
                }
            }
            out = out.add(&Self {
                ctx: self.ctx,
                modes,
            });
        }
        Ok(out.prune())
    }

    /// Moyal commutator A # B - B # A.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.moyal(other)?.sub(&other.moyal(self)?).prune())
    }

    /// Poisson pairing with an x-independent Hamiltonian: the coefficient at
    /// k is i Omega_k(xi) ptilde(k, xi); the k = 0 coefficient vanishes.
    pub fn poisson_with_h(&self, h: &Hamiltonian) -> Self {
        let modes = self
            .modes
            .iter()
            .filter(|(k, _)| k.iter().any(|&c| c != 0))
            .map(|(k, c)| {
                let (c0, lin) = h.omega_affine(k);
                let omega = CoefField::poly_affine(
                    Complex64::new(c0, 0.0),
                    lin.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
                );
                (k.clone(), omega.mul(c).scale(I))
            })
            .collect();
        Self {
            ctx: self.ctx,
            modes,
        }
    }

    /// Grid sup-norm sup_{x, xi} |P(x, xi)|.
    pub fn sup_norm(&self, grid: &GridSpec) -> f64 {
        let d = self.ctx.dim;
        let xi_pts = grid.xi_points(d);
        let x_pts = grid.x_points(d);
        let mut sup: f64 = 0.0;
        for xi in &xi_pts {
            let vals: Vec<(Complex64, &Vec<i64>)> = self
                .modes
                .iter()
                .map(|(k, c)| (c.eval(xi), k))
                .collect();
            for x in &x_pts {
                let mut acc = Complex64::default();
                for (v, k) in &vals {
                    let phase: f64 = k.iter().zip(x).map(|(&ki, &xj)| ki as f64 * xj).sum();
                    acc += v * Complex64::new(phase.cos(), phase.sin());
                }
                sup = sup.max(acc.norm());
            }
        }
        sup
    }

    /// Largest coefficient deviation from `other` over the xi grid and the
    /// union of supports.
    pub fn coeff_sup_dev(&self, other: &Self, grid: &GridSpec) -> f64 {
        let pts = grid.xi_points(self.ctx.dim);
        let zero = CoefField::zero();
        let mut keys: Vec<&Vec<i64>> = self.modes.keys().collect();
        for k in other.modes.keys() {
            if !self.modes.contains_key(k) {
                keys.push(k);
            }
        }
        let mut dev: f64 = 0.0;
        for k in keys {
            let a = self.modes.get(k).unwrap_or(&zero);
            let b = other.modes.get(k).unwrap_or(&zero);
            for xi in &pts {
                dev = dev.max((a.eval(xi) - b.eval(xi)).norm());
            }
        }
        dev
    }

    /// Deviation from self-adjointness: coefficient distance to the adjoint.
    pub fn self_adjoint_dev(&self, grid: &GridSpec) -> f64 {
        self.coeff_sup_dev(&self.adjoint(), grid)
    }

    pub fn require_self_adjoint(&self, grid: &GridSpec, tol: f64) -> Result<()> {
        let dev = self.self_adjoint_dev(grid);
        if dev > tol {
            Err(Error::NotSelfAdjoint { dev, tol })
        } else {
            Ok(())
        }
    }

    /// 1/2 (P + P*).
    pub fn self_adjoint_part(&self) -> Self {
        self.add(&self.adjoint()).scale(Complex64::new(0.5, 0.0))
    }

    /// Deviation from the real-function property ptilde(-k) = conj ptilde(k).
    pub fn real_symmetry_dev(&self, grid: &GridSpec) -> f64 {
        let pts = grid.xi_points(self.ctx.dim);
        let zero = CoefField::zero();
        let mut dev: f64 = 0.0;
        for (k, c) in &self.modes {
            let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
            let cneg = self.modes.get(&neg).unwrap_or(&zero);
            for xi in &pts {
                dev = dev.max((cneg.eval(xi) - c.eval(xi).conj()).norm());
            }
        }
        dev
    }

    /// Estimates sup-norms of d_x^alpha d_xi^beta P on the grid for all
    /// |alpha|, |beta| <= max_order and the implied constants
    /// C = sup / hbar^(m - delta |beta|).
    pub fn seminorm_estimate(&self, max_order: u32, grid: &GridSpec, m: f64) -> SeminormReport {
        let d = self.ctx.dim;
        let fd = self.ctx.fd_step();
        let mut entries = Vec::new();
        for total_b in 0..=max_order {
            for beta in multi_indices(d, total_b) {
                // differentiate coefficients in xi
                let dcoeffs: Vec<(Vec<i64>, CoefField)> = self
                    .modes
                    .iter()
                    .map(|(k, c)| {
                        let mut dc = c.clone();
                        for (axis, &reps) in beta.iter().enumerate() {
                            for _ in 0..reps {
                                dc = dc.deriv(axis, fd);
                            }
                        }
                        (k.clone(), dc)
                    })
                    .collect();
                for total_a in 0..=max_order {
                    for alpha in multi_indices(d, total_a) {
                        let sym = Self {
                            ctx: self.ctx,
                            modes: dcoeffs
                                .iter()
                                .map(|(k, c)| {
                                    let mut factor = Complex64::new(1.0, 0.0);
                                    for (axis, &reps) in alpha.iter().enumerate() {
                                        factor *= (I * k[axis] as f64).powu(reps);
                                    }
                                    (k.clone(), c.scale(factor))
                                })
                                .collect(),
                        };
                        let sup = sym.sup_norm(grid);
                        let denom = self.ctx.hbar.powf(m - self.ctx.delta * total_b as f64);
                        entries.push(SeminormEntry {
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            sup,
                            constant: sup / denom,
                        });
                    }
                }
            }
        }
        SeminormReport {
            m,
            delta: self.ctx.delta,
            entries,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeminormEntry {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub sup: f64,
    pub constant: f64,
}

#[derive(Debug, Clone)]
pub struct SeminormReport {
    pub m: f64,
    pub delta: f64,
    pub entries: Vec<SeminormEntry>,
}

impl SeminormReport {
    pub fn entry(&self, alpha: &[u32], beta: &[u32]) -> Option<&SeminormEntry> {
        self.entries
            .iter()
            .find(|e| e.alpha == alpha && e.beta == beta)
    }

    pub fn max_constant(&self) -> f64 {
        self.entries.iter().map(|e| e.constant).fold(0.0, f64::max)
    }
}

/// All multi-indices of dimension d with |alpha| = total.
pub fn multi_indices(d: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, total: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=total {
            cur.push(first);
            rec(d - 1, total - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, total, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
