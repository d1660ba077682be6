//! Sub-lattices of the Fourier lattice Z^d in a canonical form: row-style
//! Hermite normal form with positive pivots and reduced entries above them.
//! Two bases of the same lattice canonicalize to the same matrix, which makes
//! deduplication and membership tests exact integer computations.

use crate::context::norm_within;
use crate::error::{Error, Result};
use crate::expr::euclid;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResonanceLattice {
    ambient: usize,
    /// Canonical basis rows (may be empty for the trivial lattice).
    basis: Vec<Vec<i64>>,
}

impl ResonanceLattice {
    /// The trivial lattice {0}; by convention rank 0 and covolume 1.
    pub fn trivial(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
        }
    }

    /// Builds from any generating rows; rows must be linearly independent.
    pub fn from_basis(ambient: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                got: rows.first().map(|r| r.len()).unwrap_or(0),
            });
        }
        let n = rows.len();
        let hnf = hermite_normal_form(&rows);
        if hnf.len() != n {
            return Err(Error::InvalidConfig(
                "basis rows are linearly dependent".into(),
            ));
        }
        Ok(Self {
            ambient,
            basis: hnf,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Largest Euclidean norm among canonical basis rows.
    pub fn max_basis_norm(&self) -> f64 {
        self.basis.iter().map(|r| euclid(r)).fold(0.0, f64::max)
    }

    /// Covolume sqrt(det(B B^T)); 1 for the trivial lattice.
    pub fn covolume(&self) -> f64 {
        let n = self.rank();
        if n == 0 {
            return 1.0;
        }
        let mut gram = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.basis[i]
                    .iter()
                    .zip(&self.basis[j])
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum();
            }
        }
        (int_det(&gram) as f64).sqrt()
    }

    /// Integer membership test via HNF back-substitution.
    pub fn contains(&self, k: &[i64]) -> bool {
        if self.is_trivial() {
            return k.iter().all(|&c| c == 0);
        }
        let mut rem: Vec<i64> = k.to_vec();
        for row in &self.basis {
            let p = pivot_col(row).expect("canonical rows are nonzero");
            if rem[p] != 0 {
                if rem[p] % row[p] != 0 {
                    return false;
                }
                let q = rem[p] / row[p];
                for (r, &b) in rem.iter_mut().zip(row) {
                    *r -= q * b;
                }
            }
        }
        rem.iter().all(|&c| c == 0)
    }

    /// A lattice is pure (saturated) when it equals the integer points of its
    /// span, i.e. the gcd of its n x n basis minors is 1.
    pub fn is_pure(&self) -> bool {
        let n = self.rank();
        if n == 0 {
            return true;
        }
        let mut g: i128 = 0;
        for cols in combinations(self.ambient, n) {
            let sub: Vec<Vec<i128>> = self
                .basis
                .iter()
                .map(|row| cols.iter().map(|&c| row[c] as i128).collect())
                .collect();
            g = gcd_i128(g, int_det(&sub).abs());
            if g == 1 {
                return true;
            }
        }
        g == 1
    }

    /// Euclidean norm of the orthogonal projection of `v` onto span(R);
    /// equals sup over nonzero X in span(R) of |<v, X>| / |X|.
    pub fn projection_norm(&self, v: &[f64]) -> f64 {
        let n = self.rank();
        if n == 0 {
            return 0.0;
        }
        // Solve (B B^T) c = B v, then |proj|^2 = <B v, c>.
        let mut gram = vec![vec![0.0f64; n]; n];
        let mut rhs = vec![0.0f64; n];
        for i in 0..n {
            rhs[i] = self.basis[i]
                .iter()
                .zip(v)
                .map(|(&b, &x)| b as f64 * x)
                .sum();
            for j in 0..n {
                gram[i][j] = self.basis[i]
                    .iter()
                    .zip(&self.basis[j])
                    .map(|(&a, &b)| (a * b) as f64)
                    .sum();
            }
        }
        let c = solve_small(&mut gram, &mut rhs);
        let p2: f64 = (0..n)
            .map(|i| {
                c[i] * self.basis[i]
                    .iter()
                    .zip(v)
                    .map(|(&b, &x)| b as f64 * x)
                    .sum::<f64>()
            })
            .sum();
        p2.max(0.0).sqrt()
    }
}

fn pivot_col(row: &[i64]) -> Option<usize> {
    row.iter().position(|&c| c != 0)
}

/// Row-style Hermite normal form of the row span: unimodular row operations
/// only, positive pivots, entries above each pivot reduced into [0, pivot).
/// Zero rows are dropped, so the output length is the rank.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let d = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = a.len();
    let mut r = 0usize;
    for c in 0..d {
        // Euclid out every nonzero entry below position r in column c.
        loop {
            let mut idx: Option<usize> = None;
            for i in r..m {
                if a[i][c] != 0 {
                    idx = match idx {
                        None => Some(i),
                        Some(j) => {
                            if a[i][c].abs() < a[j][c].abs() {
                                Some(i)
                            } else {
                                Some(j)
                            }
                        }
                    };
                }
            }
            let Some(p) = idx else { break };
            a.swap(r, p);
            let mut others = false;
            for i in (r + 1)..m {
                if a[i][c] != 0 {
                    let q = div_floor(a[i][c], a[r][c]);
                    for j in 0..d {
                        let arj = a[r][j];
                        a[i][j] -= q * arj;
                    }
                    if a[i][c] != 0 {
                        others = true;
                    }
                }
            }
            if !others {
                break;
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for j in 0..d {
                a[r][j] = -a[r][j];
            }
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = div_floor(a[i][c], a[r][c]);
            if q != 0 {
                for j in 0..d {
                    let arj = a[r][j];
                    a[i][j] -= q * arj;
                }
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    a.truncate(r);
    a.iter()
        .map(|row| row.iter().map(|&x| x as i64).collect())
        .collect()
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by fraction-free Gaussian elimination (Bareiss); exact for the
/// small integer matrices used here.
fn int_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn solve_small(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            for j in col..n {
                let v = a[col][j];
                a[i][j] -= f * v;
            }
            b[i] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    x
}

/// All primitive integer vectors with Euclidean norm <= bound, one per sign
/// class (first nonzero component positive), sorted.
pub fn primitive_vectors(d: usize, bound: f64) -> Vec<Vec<i64>> {
    let reach = bound.ceil() as i64;
    let mut out = BTreeSet::new();
    let mut k = vec![-reach; d];
    loop {
        if k.iter().any(|&c| c != 0) && norm_within(euclid(&k), bound) {
            let g = k.iter().fold(0i64, |acc, &c| gcd_i128(acc as i128, c as i128) as i64);
            if g == 1 {
                let mut v = k.clone();
                if v.iter().find(|&&c| c != 0).map(|&c| c < 0).unwrap_or(false) {
                    v.iter_mut().for_each(|c| *c = -*c);
                }
                out.insert(v);
            }
        }
        let mut j = d;
        loop {
            if j == 0 {
                return out.into_iter().collect();
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

/// All distinct pure rank-n sub-lattices of Z^d admitting a basis with every
/// row of Euclidean norm <= bound, in canonical form. Zones of non-pure
/// sub-lattices are contained in the zone of their saturation, so coverings
/// built from this enumeration are unchanged by the purity restriction.
pub fn enumerate_lattices(d: usize, n: usize, bound: f64, cap: usize) -> Result<Vec<ResonanceLattice>> {
    if n == 0 {
        return Ok(vec![ResonanceLattice::trivial(d)]);
    }
    if n > d {
        return Ok(Vec::new());
    }
    if n == 1 {
        return primitive_vectors(d, bound)
            .into_iter()
            .map(|v| ResonanceLattice::from_basis(d, vec![v]))
            .collect();
    }
    // Brute force: span all n-tuples of bounded vectors, deduplicate by HNF.
    let vectors = bounded_vectors(d, bound);
    let tuples = n_choose_k_count(vectors.len(), n);
    if tuples > cap as u128 {
        return Err(Error::EnumerationCap { cap, bound });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..n).collect();
    if vectors.len() < n {
        return Ok(out);
    }
    loop {
        let rows: Vec<Vec<i64>> = pick.iter().map(|&i| vectors[i].clone()).collect();
        let hnf = hermite_normal_form(&rows);
        if hnf.len() == n {
            let lat = ResonanceLattice {
                ambient: d,
                basis: hnf,
            };
            if lat.is_pure() && seen.insert(lat.basis.clone()) {
                out.push(lat);
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if pick[i] != i + vectors.len() - n {
                break;
            }
            if i == 0 {
                out.sort();
                return Ok(out);
            }
        }
        pick[i] += 1;
        for j in i + 1..n {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn bounded_vectors(d: usize, bound: f64) -> Vec<Vec<i64>> {
    let reach = bound.ceil() as i64;
    let mut out = Vec::new();
    let mut k = vec![-reach; d];
    loop {
        if k.iter().any(|&c| c != 0)
            && norm_within(euclid(&k), bound)
            && k.iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false)
        {
            out.push(k.clone());
        }
        let mut j = d;
        loop {
            if j == 0 {
                return out;
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

fn n_choose_k_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hnf_canonical_examples() {
        // Rows (2,4) and (1,1) span the same lattice as (1,1),(0,2).
        let h = hermite_normal_form(&[vec![2, 4], vec![1, 1]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        let h2 = hermite_normal_form(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(h, h2);
    }

    #[test]
    fn unimodular_rebasing_canonicalizes_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let d = 3;
            let rows: Vec<Vec<i64>> = (0..2)
                .map(|_| (0..d).map(|_| rng.gen_range(-5i64..=5)).collect())
                .collect();
            let Ok(lat) = ResonanceLattice::from_basis(d, rows.clone()) else {
                continue;
            };
            // random unimodular 2x2 transform of the rows
            let (a, b) = (1i64, rng.gen_range(-3i64..=3));
            let (c0, d0) = (0i64, 1i64);
            let swap = rng.gen_bool(0.5);
            let (r0, r1) = (&rows[0], &rows[1]);
            let mut new0: Vec<i64> = r0.iter().zip(r1).map(|(x, y)| a * x + b * y).collect();
            let mut new1: Vec<i64> = r0.iter().zip(r1).map(|(x, y)| c0 * x + d0 * y).collect();
            if swap {
                std::mem::swap(&mut new0, &mut new1);
            }
            let lat2 = ResonanceLattice::from_basis(d, vec![new0, new1]).unwrap();
            assert_eq!(lat, lat2);
        }
    }

    #[test]
    fn membership() {
        let lat = ResonanceLattice::from_basis(2, vec![vec![1, 1], vec![0, 2]]).unwrap();
        assert!(lat.contains(&[1, 1]));
        assert!(lat.contains(&[2, 4]));
        assert!(lat.contains(&[1, 3]));
        assert!(!lat.contains(&[1, 0]));
        assert!(!lat.contains(&[0, 1]));
        assert!(ResonanceLattice::trivial(2).contains(&[0, 0]));
        assert!(!ResonanceLattice::trivial(2).contains(&[1, 0]));
    }

    #[test]
    fn covolume_and_norms() {
        let lat = ResonanceLattice::from_basis(2, vec![vec![1, 1]]).unwrap();
        assert!((lat.covolume() - 2f64.sqrt()).abs() < 1e-15);
        assert!((lat.max_basis_norm() - 2f64.sqrt()).abs() < 1e-15);
        let z2 = ResonanceLattice::from_basis(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(z2.covolume(), 1.0);
        assert_eq!(ResonanceLattice::trivial(2).covolume(), 1.0);
    }

    #[test]
    fn purity() {
        assert!(ResonanceLattice::from_basis(2, vec![vec![1, 0]])
            .unwrap()
            .is_pure());
        assert!(!ResonanceLattice::from_basis(2, vec![vec![2, 0]])
            .unwrap()
            .is_pure());
        assert!(!ResonanceLattice::from_basis(2, vec![vec![1, 0], vec![0, 2]])
            .unwrap()
            .is_pure());
    }

    #[test]
    fn enumeration_small_cases() {
        // d=2, n=1, Euclidean bound 1: generators (0,1) and (1,0) only.
        let lats = enumerate_lattices(2, 1, 1.0, 1 << 20).unwrap();
        assert_eq!(lats.len(), 2);
        assert_eq!(lats[0].basis(), &[vec![0, 1]]);
        assert_eq!(lats[1].basis(), &[vec![1, 0]]);
        // d=2, n=2, bound 1: only Z^2 itself.
        let lats = enumerate_lattices(2, 2, 1.0, 1 << 20).unwrap();
        assert_eq!(lats.len(), 1);
        assert_eq!(lats[0].basis(), &[vec![1, 0], vec![0, 1]]);
        // d=1, n=1: exactly Z for any bound >= 1.
        for bound in [1.0, 3.0, 7.9] {
            let lats = enumerate_lattices(1, 1, bound, 1 << 20).unwrap();
            assert_eq!(lats.len(), 1);
            assert_eq!(lats[0].basis(), &[vec![1]]);
        }
        // bound sqrt(2): the diagonals join.
        let lats = enumerate_lattices(2, 1, 2f64.powf(0.5), 1 << 20).unwrap();
        assert_eq!(lats.len(), 4);
    }

    #[test]
    fn projection_norm_matches_random_directions() {
        let lat = ResonanceLattice::from_basis(3, vec![vec![1, 0, 1], vec![0, 2, 1]]).unwrap();
        let v = [0.3, -1.2, 0.8];
        let exact = lat.projection_norm(&v);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut best: f64 = 0.0;
        for _ in 0..10_000 {
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let x: Vec<f64> = (0..3)
                .map(|i| a * lat.basis()[0][i] as f64 + b * lat.basis()[1][i] as f64)
                .collect();
            let nx = (x.iter().map(|t| t * t).sum::<f64>()).sqrt();
            if nx > 1e-12 {
                let dot: f64 = x.iter().zip(&v).map(|(xi, vi)| xi * vi).sum();
                best = best.max(dot.abs() / nx);
            }
        }
        assert!(best <= exact + 1e-9);
        assert!(exact - best < 1e-3 * exact.max(1.0));
    }

    #[test]
    fn enumeration_cap_errors() {
        let err = enumerate_lattices(3, 2, 40.0, 10).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { cap: 10, .. }));
    }
}
