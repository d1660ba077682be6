//! Completely integrable (x-independent) Hamiltonians H(xi) with evaluable
//! gradients, and the frequency pairings Omega_k(xi) = <grad H(xi), k> that
//! define resonances.

use crate::context::norm_within;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum HamiltonianForm {
    /// H(xi) = 1/2 <xi, M xi> + <b, xi> with M symmetric.
    Quadratic { m: Vec<Vec<f64>>, b: Vec<f64> },
    /// H(xi) = <omega, xi>; degenerate, kept for negative tests.
    Linear { omega: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hamiltonian {
    pub dim: usize,
    pub form: HamiltonianForm,
}

impl Hamiltonian {
    pub fn quadratic(m: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let d = b.len();
        if m.len() != d || m.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m.len(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                if (m[i][j] - m[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "quadratic form not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self {
            dim: d,
            form: HamiltonianForm::Quadratic { m, b },
        })
    }

    /// H(xi) = a |xi|^2 / 2.
    pub fn isotropic(dim: usize, a: f64) -> Self {
        let m = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { a } else { 0.0 }).collect())
            .collect();
        Self {
            dim,
            form: HamiltonianForm::Quadratic {
                m,
                b: vec![0.0; dim],
            },
        }
    }

    /// H(xi) = |xi|^2 / 2.
    pub fn harmonic(dim: usize) -> Self {
        Self::isotropic(dim, 1.0)
    }

    pub fn linear(omega: Vec<f64>) -> Self {
        Self {
            dim: omega.len(),
            form: HamiltonianForm::Linear { omega },
        }
    }

    pub fn value(&self, xi: &[f64]) -> f64 {
        match &self.form {
            HamiltonianForm::Quadratic { m, b } => {
                let mut acc = 0.0;
                for i in 0..self.dim {
                    let mut row = 0.0;
                    for j in 0..self.dim {
                        row += m[i][j] * xi[j];
                    }
                    acc += 0.5 * xi[i] * row + b[i] * xi[i];
                }
                acc
            }
            HamiltonianForm::Linear { omega } => {
                omega.iter().zip(xi).map(|(w, x)| w * x).sum()
            }
        }
    }

    pub fn grad(&self, xi: &[f64]) -> Vec<f64> {
        match &self.form {
            HamiltonianForm::Quadratic { m, b } => (0..self.dim)
                .map(|i| {
                    b[i]
                        + (0..self.dim)
                            .map(|j| m[i][j] * xi[j])
                            .sum::<f64>()
                })
                .collect(),
            HamiltonianForm::Linear { omega } => omega.clone(),
        }
    }

    /// Constant Hessian matrix.
    pub fn hess(&self) -> Vec<Vec<f64>> {
        match &self.form {
            HamiltonianForm::Quadratic { m, .. } => m.clone(),
            HamiltonianForm::Linear { .. } => vec![vec![0.0; self.dim]; self.dim],
        }
    }

    /// Omega_k(xi) = <grad H(xi), k>; zero for k = 0.
    pub fn omega(&self, k: &[i64], xi: &[f64]) -> f64 {
        self.grad(xi)
            .iter()
            .zip(k)
            .map(|(g, &ki)| g * ki as f64)
            .sum()
    }

    /// Omega_k as an affine function of xi: returns (c0, lin) with
    /// Omega_k(xi) = c0 + <lin, xi>. Exact for the built-in forms.
    pub fn omega_affine(&self, k: &[i64]) -> (f64, Vec<f64>) {
        match &self.form {
            HamiltonianForm::Quadratic { m, b } => {
                let c0 = b.iter().zip(k).map(|(bi, &ki)| bi * ki as f64).sum();
                let lin = (0..self.dim)
                    .map(|j| (0..self.dim).map(|i| m[i][j] * k[i] as f64).sum())
                    .collect();
                (c0, lin)
            }
            HamiltonianForm::Linear { omega } => {
                let c0 = omega.iter().zip(k).map(|(w, &ki)| w * ki as f64).sum();
                (c0, vec![0.0; self.dim])
            }
        }
    }

    /// Gradient of Omega_k (constant for the built-in forms): M k, or 0.
    pub fn omega_grad(&self, k: &[i64]) -> Vec<f64> {
        self.omega_affine(k).1
    }

    /// Smallest |d(Omega_k)| over nonzero integer k with |k| <= bound.
    /// A Hamiltonian is accepted as non-degenerate when this exceeds 1e-8.
    pub fn nondegeneracy_margin(&self, bound: f64) -> f64 {
        let reach = bound.ceil() as i64;
        let mut min = f64::INFINITY;
        let mut k = vec![-reach; self.dim];
        loop {
            let norm2: f64 = k.iter().map(|&c| (c * c) as f64).sum();
            if k.iter().any(|&c| c != 0) && norm_within(norm2.sqrt(), bound) {
                let g = self.omega_grad(&k);
                let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                min = min.min(n);
            }
            let mut j = self.dim;
            loop {
                if j == 0 {
                    return if min.is_finite() { min } else { 0.0 };
                }
                j -= 1;
                k[j] += 1;
                if k[j] <= reach {
                    break;
                }
                k[j] = -reach;
            }
        }
    }

    pub fn is_nondegenerate(&self, bound: f64) -> bool {
        self.nondegeneracy_margin(bound) > 1e-8
    }
}
