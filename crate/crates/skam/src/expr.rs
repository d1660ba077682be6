//! Evaluable complex scalar fields over momentum space, built as expression
//! trees with exact shifts and analytic derivative rules.
//!
//! The node set is deliberately small: constants, affine/quadratic
//! polynomials, trigonometric functions of linear forms, cutoff and quotient
//! compositions `chi(Omega_k(xi)/scale)` / `phi(Omega_k(xi)/scale)`, sums,
//! products, scalar multiples, conjugation and exact argument shifts
//! `xi -> xi + v`. Shifts compose additively and conjugation pushes through
//! every node, so round trips like adjoint-of-adjoint cancel structurally
//! instead of accumulating wrappers.

use crate::cutoff::{chi_deriv, phi_deriv};
use crate::hamiltonian::Hamiltonian;
use num_complex::Complex64;
use std::sync::Arc;

const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    /// c0 + <lin, xi> + <xi, Q xi> with Q symmetric (row-major d*d).
    Poly {
        c0: Complex64,
        lin: Vec<Complex64>,
        quad: Option<Vec<Complex64>>,
    },
    /// cos/sin(<freq, xi> + phase).
    Trig {
        cos: bool,
        freq: Vec<f64>,
        phase: f64,
    },
    /// chi^(order)(Omega_k(xi) / scale).
    Chi {
        h: Hamiltonian,
        k: Vec<i64>,
        scale: f64,
        order: u32,
    },
    /// phi^(order)(Omega_k(xi) / scale).
    Phi {
        h: Hamiltonian,
        k: Vec<i64>,
        scale: f64,
        order: u32,
    },
    Sum(Vec<CoefField>),
    Mul(CoefField, CoefField),
    Scale(Complex64, CoefField),
    Conj(CoefField),
    Shift(Vec<f64>, CoefField),
    /// 4th-order central finite difference along `axis` with step `step`;
    /// fallback for primitives whose analytic derivatives stop at order 2.
    NumDeriv {
        axis: usize,
        step: f64,
        inner: CoefField,
    },
}

/// A shared, immutable coefficient field. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefField(Arc<Expr>);

impl CoefField {
    fn new(e: Expr) -> Self {
        Self(Arc::new(e))
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(z: Complex64) -> Self {
        Self::new(Expr::Const(z))
    }

    pub fn real_constant(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    pub fn poly_affine(c0: Complex64, lin: Vec<Complex64>) -> Self {
        Self::new(Expr::Poly {
            c0,
            lin,
            quad: None,
        })
    }

    /// quad is the full symmetric matrix Q; the value includes <xi, Q xi>.
    pub fn poly_quadratic(c0: Complex64, lin: Vec<Complex64>, quad: Vec<Complex64>) -> Self {
        Self::new(Expr::Poly {
            c0,
            lin,
            quad: Some(quad),
        })
    }

    pub fn cos_form(freq: Vec<f64>, phase: f64) -> Self {
        Self::new(Expr::Trig {
            cos: true,
            freq,
            phase,
        })
    }

    pub fn sin_form(freq: Vec<f64>, phase: f64) -> Self {
        Self::new(Expr::Trig {
            cos: false,
            freq,
            phase,
        })
    }

    /// chi(Omega_k(xi) / (|k| hbar^delta)).
    pub fn chi_comp(h: &Hamiltonian, k: &[i64], hbar_delta: f64) -> Self {
        let scale = euclid(k) * hbar_delta;
        Self::new(Expr::Chi {
            h: h.clone(),
            k: k.to_vec(),
            scale,
            order: 0,
        })
    }

    /// phi(Omega_k(xi) / (|k| hbar^delta)).
    pub fn phi_comp(h: &Hamiltonian, k: &[i64], hbar_delta: f64) -> Self {
        let scale = euclid(k) * hbar_delta;
        Self::new(Expr::Phi {
            h: h.clone(),
            k: k.to_vec(),
            scale,
            order: 0,
        })
    }

    pub fn is_const_zero(&self) -> bool {
        matches!(self.expr(), Expr::Const(z) if z.re == 0.0 && z.im == 0.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_const_zero() {
            return other.clone();
        }
        if other.is_const_zero() {
            return self.clone();
        }
        if let (Expr::Const(a), Expr::Const(b)) = (self.expr(), other.expr()) {
            return Self::constant(a + b);
        }
        let mut terms = Vec::new();
        for side in [self, other] {
            match side.expr() {
                Expr::Sum(items) => terms.extend(items.iter().cloned()),
                _ => terms.push(side.clone()),
            }
        }
        Self::new(Expr::Sum(terms))
    }

    pub fn sum(terms: impl IntoIterator<Item = Self>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, t| acc.add(&t))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_const_zero() || other.is_const_zero() {
            return Self::zero();
        }
        if let Expr::Const(a) = self.expr() {
            return other.scale(*a);
        }
        if let Expr::Const(b) = other.expr() {
            return self.scale(*b);
        }
        Self::new(Expr::Mul(self.clone(), other.clone()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(1.0, 0.0) {
            return self.clone();
        }
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        match self.expr() {
            Expr::Const(z) => Self::constant(c * z),
            Expr::Scale(c2, f) => Self::new(Expr::Scale(c * c2, f.clone())),
            _ => Self::new(Expr::Scale(c, self.clone())),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Complex conjugate, pushed through every node so that double
    /// conjugation cancels structurally.
    pub fn conj(&self) -> Self {
        match self.expr() {
            Expr::Const(z) => Self::constant(z.conj()),
            Expr::Poly { c0, lin, quad } => Self::new(Expr::Poly {
                c0: c0.conj(),
                lin: lin.iter().map(|z| z.conj()).collect(),
                quad: quad
                    .as_ref()
                    .map(|q| q.iter().map(|z| z.conj()).collect()),
            }),
            Expr::Trig { .. } | Expr::Chi { .. } | Expr::Phi { .. } => self.clone(),
            Expr::Sum(items) => Self::new(Expr::Sum(items.iter().map(|f| f.conj()).collect())),
            Expr::Mul(a, b) => Self::new(Expr::Mul(a.conj(), b.conj())),
            Expr::Scale(c, f) => Self::new(Expr::Scale(c.conj(), f.conj())),
            Expr::Conj(f) => f.clone(),
            Expr::Shift(v, f) => Self::new(Expr::Shift(v.clone(), f.conj())),
            Expr::NumDeriv { axis, step, inner } => Self::new(Expr::NumDeriv {
                axis: *axis,
                step: *step,
                inner: inner.conj(),
            }),
        }
    }

    /// Exact argument shift xi -> xi + v. Consecutive shifts merge, so a
    /// shift by v followed by -v cancels exactly.
    pub fn shift(&self, v: &[f64]) -> Self {
        if v.iter().all(|&x| x == 0.0) {
            return self.clone();
        }
        match self.expr() {
            Expr::Const(_) => self.clone(),
            Expr::Shift(w, f) => {
                let merged: Vec<f64> = w.iter().zip(v).map(|(a, b)| a + b).collect();
                if merged.iter().all(|&x| x == 0.0) {
                    f.clone()
                } else {
                    Self::new(Expr::Shift(merged, f.clone()))
                }
            }
            _ => Self::new(Expr::Shift(v.to_vec(), self.clone())),
        }
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        debug_assert!(xi.len() <= MAX_DIM);
        match self.expr() {
            Expr::Const(z) => *z,
            Expr::Poly { c0, lin, quad } => {
                let mut acc = *c0;
                for (l, &x) in lin.iter().zip(xi) {
                    acc += l * x;
                }
                if let Some(q) = quad {
                    let d = xi.len();
                    for i in 0..d {
                        for j in 0..d {
                            acc += q[i * d + j] * (xi[i] * xi[j]);
                        }
                    }
                }
                acc
            }
            Expr::Trig { cos, freq, phase } => {
                let arg: f64 = freq.iter().zip(xi).map(|(f, x)| f * x).sum::<f64>() + phase;
                Complex64::new(if *cos { arg.cos() } else { arg.sin() }, 0.0)
            }
            Expr::Chi {
                h,
                k,
                scale,
                order,
            } => {
                let t = h.omega(k, xi) / scale;
                Complex64::new(chi_deriv(t, *order), 0.0)
            }
            Expr::Phi {
                h,
                k,
                scale,
                order,
            } => {
                let t = h.omega(k, xi) / scale;
                Complex64::new(phi_deriv(t, *order), 0.0)
            }
            Expr::Sum(items) => items.iter().map(|f| f.eval(xi)).sum(),
            Expr::Mul(a, b) => a.eval(xi) * b.eval(xi),
            Expr::Scale(c, f) => c * f.eval(xi),
            Expr::Conj(f) => f.eval(xi).conj(),
            Expr::Shift(v, f) => {
                let mut s = [0.0f64; MAX_DIM];
                for i in 0..xi.len() {
                    s[i] = xi[i] + v[i];
                }
                f.eval(&s[..xi.len()])
            }
            Expr::NumDeriv { axis, step, inner } => {
                let h = *step;
                let at = |off: f64| {
                    let mut s = [0.0f64; MAX_DIM];
                    s[..xi.len()].copy_from_slice(xi);
                    s[*axis] += off;
                    inner.eval(&s[..xi.len()])
                };
                (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h)
            }
        }
    }

    /// Partial derivative in xi_axis. Analytic for every primitive up to
    /// second order of the cutoff/quotient compositions; beyond that a
    /// central-difference node with step `fd_step` is substituted.
    pub fn deriv(&self, axis: usize, fd_step: f64) -> Self {
        match self.expr() {
            Expr::Const(_) => Self::zero(),
            Expr::Poly { lin, quad, .. } => {
                let d = lin.len();
                let c0 = lin.get(axis).copied().unwrap_or_default();
                match quad {
                    None => Self::constant(c0),
                    Some(q) => {
                        let dlin: Vec<Complex64> = (0..d)
                            .map(|j| q[axis * d + j] + q[j * d + axis])
                            .collect();
                        if dlin.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                            Self::constant(c0)
                        } else {
                            Self::poly_affine(c0, dlin)
                        }
                    }
                }
            }
            Expr::Trig { cos, freq, phase } => {
                let f = freq[axis];
                if f == 0.0 {
                    return Self::zero();
                }
                let node = Self::new(Expr::Trig {
                    cos: !cos,
                    freq: freq.clone(),
                    phase: *phase,
                });
                node.scale(Complex64::new(if *cos { -f } else { f }, 0.0))
            }
            Expr::Chi {
                h,
                k,
                scale,
                order,
            } => {
                let factor = h.omega_grad(k)[axis] / scale;
                if factor == 0.0 {
                    return Self::zero();
                }
                if *order < 2 {
                    Self::new(Expr::Chi {
                        h: h.clone(),
                        k: k.clone(),
                        scale: *scale,
                        order: order + 1,
                    })
                    .scale(Complex64::new(factor, 0.0))
                } else {
                    Self::new(Expr::NumDeriv {
                        axis,
                        step: fd_step,
                        inner: self.clone(),
                    })
                }
            }
            Expr::Phi {
                h,
                k,
                scale,
                order,
            } => {
                let factor = h.omega_grad(k)[axis] / scale;
                if factor == 0.0 {
                    return Self::zero();
                }
                if *order < 2 {
                    Self::new(Expr::Phi {
                        h: h.clone(),
                        k: k.clone(),
                        scale: *scale,
                        order: order + 1,
                    })
                    .scale(Complex64::new(factor, 0.0))
                } else {
                    Self::new(Expr::NumDeriv {
                        axis,
                        step: fd_step,
                        inner: self.clone(),
                    })
                }
            }
            Expr::Sum(items) => Self::sum(items.iter().map(|f| f.deriv(axis, fd_step))),
            Expr::Mul(a, b) => a
                .deriv(axis, fd_step)
                .mul(b)
                .add(&a.mul(&b.deriv(axis, fd_step))),
            Expr::Scale(c, f) => f.deriv(axis, fd_step).scale(*c),
            Expr::Conj(f) => f.deriv(axis, fd_step).conj(),
            Expr::Shift(v, f) => f.deriv(axis, fd_step).shift(v),
            Expr::NumDeriv { .. } => Self::new(Expr::NumDeriv {
                axis,
                step: fd_step,
                inner: self.clone(),
            }),
        }
    }

    /// max |f(xi)| over the given points.
    pub fn sup_on<'a>(&self, points: impl IntoIterator<Item = &'a Vec<f64>>) -> f64 {
        points
            .into_iter()
            .map(|p| self.eval(p).norm())
            .fold(0.0, f64::max)
    }

    /// Rough node count (shared subtrees counted each time they appear).
    pub fn size(&self) -> usize {
        match self.expr() {
            Expr::Const(_) | Expr::Poly { .. } | Expr::Trig { .. } | Expr::Chi { .. }
            | Expr::Phi { .. } => 1,
            Expr::Sum(items) => 1 + items.iter().map(|f| f.size()).sum::<usize>(),
            Expr::Mul(a, b) => 1 + a.size() + b.size(),
            Expr::Scale(_, f) | Expr::Conj(f) | Expr::Shift(_, f) => 1 + f.size(),
            Expr::NumDeriv { inner, .. } => 1 + inner.size(),
        }
    }
}

pub(crate) fn euclid(k: &[i64]) -> f64 {
    (k.iter().map(|&c| (c * c) as f64).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_poly_quadratic() {
        // 1 + 2 xi_0 + xi_0 xi_1 (Q = [[0, .5], [.5, 0]]).
        let q = vec![c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)];
        let f = CoefField::poly_quadratic(c(1.0, 0.0), vec![c(2.0, 0.0), c(0.0, 0.0)], q);
        let v = f.eval(&[3.0, 4.0]);
        assert!((v - c(1.0 + 6.0 + 12.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn shift_is_exact_and_merges() {
        let f = CoefField::sin_form(vec![1.0], 0.3);
        let g = f.shift(&[0.25]);
        assert_eq!(g.eval(&[1.0]), f.eval(&[1.25]));
        // shift by v then -v cancels structurally
        let back = g.shift(&[-0.25]);
        assert_eq!(back, f);
    }

    #[test]
    fn conj_pushdown_cancels() {
        let f = CoefField::poly_affine(c(1.0, 2.0), vec![c(0.0, -1.0)])
            .mul(&CoefField::cos_form(vec![2.0], 0.0))
            .shift(&[0.125]);
        assert_eq!(f.conj().conj(), f);
        let xi = [0.7];
        assert!((f.conj().eval(&xi) - f.eval(&xi).conj()).norm() < 1e-15);
    }

    #[test]
    fn derivative_rules_match_finite_differences() {
        let h = Hamiltonian::harmonic(2);
        let q = vec![c(1.0, 0.0), c(0.3, 0.0), c(0.3, 0.0), c(-0.5, 0.2)];
        let parts = [
            CoefField::poly_quadratic(c(0.2, -0.1), vec![c(1.0, 0.5), c(0.0, 2.0)], q),
            CoefField::cos_form(vec![1.5, -0.7], 0.2),
            CoefField::sin_form(vec![0.4, 1.1], -0.5),
            CoefField::chi_comp(&h, &[1, -2], 0.35),
            CoefField::phi_comp(&h, &[2, 1], 0.35),
        ];
        let f = parts[0]
            .mul(&parts[1])
            .add(&parts[2].mul(&parts[3]))
            .add(&parts[4].scale(c(0.0, 1.0)))
            .shift(&[0.0625, -0.125]);
        let step = 1e-5;
        for axis in 0..2 {
            let df = f.deriv(axis, step);
            for xi in [[0.4, 0.3], [0.21, -0.77], [0.9, 0.05]] {
                let mut p = xi;
                let mut m = xi;
                p[axis] += step;
                m[axis] -= step;
                let mut p2 = xi;
                let mut m2 = xi;
                p2[axis] += 2.0 * step;
                m2[axis] -= 2.0 * step;
                let fd = (-f.eval(&p2) + f.eval(&p) * 8.0 - f.eval(&m) * 8.0 + f.eval(&m2))
                    / (12.0 * step);
                assert!(
                    (df.eval(&xi) - fd).norm() < 1e-7,
                    "axis {axis} at {xi:?}: {} vs {}",
                    df.eval(&xi),
                    fd
                );
            }
        }
    }

    #[test]
    fn second_derivatives_of_cutoff_composition() {
        let h = Hamiltonian::harmonic(1);
        let f = CoefField::chi_comp(&h, &[1], 0.5);
        let step = 1e-5;
        let d2 = f.deriv(0, step).deriv(0, step);
        // chi(xi/0.5): second derivative = chi''(t)/0.25 at t = 2 xi.
        for xi in [[0.31], [0.38], [0.45]] {
            let expect = chi_deriv(2.0 * xi[0], 2) * 4.0;
            assert!((d2.eval(&xi).re - expect).abs() < 1e-10);
        }
        // third derivative falls back to finite differences, still usable
        let d3 = d2.deriv(0, step);
        let fd = (d2.eval(&[0.36 + step]).re - d2.eval(&[0.36 - step]).re) / (2.0 * step);
        assert!((d3.eval(&[0.36]).re - fd).abs() < 1e-3 * fd.abs().max(1.0));
    }

    #[test]
    fn scale_folding_keeps_value() {
        let f = CoefField::cos_form(vec![1.0], 0.0);
        let g = f.scale(c(2.0, 0.0)).scale(c(0.0, 1.0));
        assert!((g.eval(&[0.5]) - c(0.0, 2.0) * (0.5f64).cos()).norm() < 1e-15);
        // folded into a single Scale node
        assert_eq!(g.size(), 2);
    }
}
