//! Sparse Dirichlet polynomials with nonnegative real coefficients.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::dpoly::pairwise_sum_complex;
use crate::error::{Error, Result};
use crate::smooth::primes_in;
use crate::weights::WeightWindow;

/// A finite sum `sum_n a_n n^{-s}` stored sparsely.
///
/// Support indices are sorted and unique; only strictly positive
/// coefficients are stored. `ln n` and `a_n / n` are precomputed because
/// every evaluation needs them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletPoly {
    ns: Vec<u64>,
    coeffs: Vec<f64>,
    #[serde(skip)]
    logs: Vec<f64>,
    #[serde(skip)]
    scaled: Vec<f64>,
}

impl DirichletPoly {
    /// Builds from `(n, a_n)` pairs. Duplicate `n` have their
    /// coefficients summed; zero coefficients are dropped; negative or
    /// non-finite coefficients and `n = 0` are rejected.
    pub fn new(pairs: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut map: BTreeMap<u64, f64> = BTreeMap::new();
        for (n, a) in pairs {
            if n == 0 {
                return Err(Error::Domain("polynomial support must start at 1".into()));
            }
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::Domain(format!(
                    "coefficient at n = {n} must be finite and nonnegative, got {a}"
                )));
            }
            *map.entry(n).or_insert(0.0) += a;
        }
        map.retain(|_, a| *a > 0.0);
        Ok(Self::from_sorted(map))
    }

    fn from_sorted(map: BTreeMap<u64, f64>) -> Self {
        let ns: Vec<u64> = map.keys().copied().collect();
        let coeffs: Vec<f64> = map.into_values().collect();
        let logs = ns.iter().map(|&n| (n as f64).ln()).collect();
        let scaled = ns
            .iter()
            .zip(&coeffs)
            .map(|(&n, &a)| a / n as f64)
            .collect();
        DirichletPoly {
            ns,
            coeffs,
            logs,
            scaled,
        }
    }

    /// The multiplicative identity `{1: 1}`.
    pub fn unit() -> Self {
        Self::new([(1, 1.0)]).expect("unit polynomial is valid")
    }

    /// Coefficient 1 at each prime in `(lo, hi]`.
    pub fn from_primes(lo: f64, hi: f64) -> Result<Self> {
        let ps = primes_in(lo, hi)?;
        Self::new(ps.into_iter().map(|p| (p, 1.0)))
    }

    /// Coefficient 1 at each member (a smooth-set polynomial).
    pub fn from_members(members: &[u64]) -> Result<Self> {
        Self::new(members.iter().map(|&n| (n, 1.0)))
    }

    /// The polynomial of a weight window: `a_n = w_n`.
    pub fn from_weights(w: &WeightWindow) -> Self {
        let map: BTreeMap<u64, f64> = w
            .entries
            .iter()
            .map(|(&n, &wn)| (n, wn as f64))
            .collect();
        Self::from_sorted(map)
    }

    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    pub fn ns(&self) -> &[u64] {
        &self.ns
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn coeff(&self, n: u64) -> f64 {
        match self.ns.binary_search(&n) {
            Ok(i) => self.coeffs[i],
            Err(_) => 0.0,
        }
    }

    pub fn n_min(&self) -> Option<u64> {
        self.ns.first().copied()
    }

    pub fn n_max(&self) -> Option<u64> {
        self.ns.last().copied()
    }

    /// The scale `N` of a polynomial supported on a dyadic block
    /// `(N, 2N]`, taken as `n_max / 2`. Errors unless the support is
    /// nonempty and fits one dyadic block (`2 n_min > n_max`).
    pub fn dyadic_anchor(&self) -> Result<f64> {
        let (min, max) = match (self.n_min(), self.n_max()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidInput(
                    "dyadic anchor of an empty polynomial".into(),
                ))
            }
        };
        if 2 * min <= max {
            return Err(Error::InvalidInput(format!(
                "support [{min}, {max}] spans more than one dyadic block"
            )));
        }
        Ok(max as f64 / 2.0)
    }

    /// `sum a_n^2`.
    pub fn coeff_l2(&self) -> f64 {
        let sq: Vec<f64> = self.coeffs.iter().map(|a| a * a).collect();
        crate::dpoly::pairwise_sum(&sq)
    }

    /// `max a_n` (zero for the empty polynomial).
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().copied().fold(0.0, f64::max)
    }

    /// `sum over pairs n < n' with n' - n <= kmax of a_n a_{n'}`: the
    /// near-diagonal mass entering the sparse mean-value bound.
    pub fn near_diagonal_sum(&self, kmax: u64) -> f64 {
        let mut acc = Vec::new();
        for i in 0..self.ns.len() {
            let limit = self.ns[i].saturating_add(kmax);
            for j in (i + 1)..self.ns.len() {
                if self.ns[j] > limit {
                    break;
                }
                acc.push(self.coeffs[i] * self.coeffs[j]);
            }
        }
        crate::dpoly::pairwise_sum(&acc)
    }

    /// Evaluates `sum a_n n^{-1} e^{-i t ln n}` (the line `s = 1 + it`)
    /// by fixed-order pairwise summation.
    pub fn eval(&self, t: f64) -> Complex64 {
        Self::eval_weighted(&self.scaled, &self.logs, t)
    }

    /// Evaluates `sum a_n e^{-i t ln n}` (the line `s = it`), the shape
    /// the mean-value inequalities are stated for.
    pub fn eval_unnormalized(&self, t: f64) -> Complex64 {
        Self::eval_weighted(&self.coeffs, &self.logs, t)
    }

    /// Per-term weights `a_n n^{-sigma}` for evaluation on the line
    /// `sigma + it`. The two common lines avoid `powf` so closed-form
    /// tests see exact weights.
    pub(crate) fn line_weights(&self, sigma: f64) -> Vec<f64> {
        if sigma == 0.0 {
            self.coeffs.clone()
        } else if sigma == 1.0 {
            self.scaled.clone()
        } else {
            self.ns
                .iter()
                .zip(&self.coeffs)
                .map(|(&n, &a)| a * (n as f64).powf(-sigma))
                .collect()
        }
    }

    fn eval_weighted(weights: &[f64], logs: &[f64], t: f64) -> Complex64 {
        let terms: Vec<Complex64> = weights
            .iter()
            .zip(logs)
            .map(|(&w, &lg)| w * Complex64::from_polar(1.0, -t * lg))
            .collect();
        pairwise_sum_complex(&terms)
    }

    /// Exact sparse Dirichlet convolution: the coefficient of `nm` in the
    /// product accumulates `a_n b_m`.
    pub fn multiply(&self, other: &DirichletPoly) -> Result<DirichletPoly> {
        let mut map: BTreeMap<u64, f64> = BTreeMap::new();
        for (&n, &a) in self.ns.iter().zip(&self.coeffs) {
            for (&m, &b) in other.ns.iter().zip(&other.coeffs) {
                let nm = n.checked_mul(m).ok_or_else(|| {
                    Error::Overflow(format!("product support {n} * {m} exceeds 64 bits"))
                })?;
                *map.entry(nm).or_insert(0.0) += a * b;
            }
        }
        Ok(Self::from_sorted(map))
    }

    /// `j`-fold product with itself; `j = 0` gives the unit. Exponents
    /// above 8 are refused (the dense product grows too fast to stay
    /// meaningful in exact arithmetic).
    pub fn pow(&self, j: u64) -> Result<DirichletPoly> {
        if j > 8 {
            return Err(Error::InvalidInput(format!(
                "polynomial exponent {j} exceeds 8"
            )));
        }
        let mut acc = Self::unit();
        for _ in 0..j {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickman::RhoTable;
    use crate::params::ParamSet;
    use crate::smooth::SmoothSet;

    #[test]
    fn construction_normalizes() {
        let p = DirichletPoly::new([(4, 1.0), (2, 0.5), (4, 2.0), (9, 0.0)]).unwrap();
        assert_eq!(p.ns(), &[2, 4]);
        assert_eq!(p.coeffs(), &[0.5, 3.0]);
        assert!(DirichletPoly::new([(0, 1.0)]).is_err());
        assert!(DirichletPoly::new([(3, -1.0)]).is_err());
        assert!(DirichletPoly::new([(3, f64::NAN)]).is_err());
    }

    #[test]
    fn prime_range_polys() {
        let p = DirichletPoly::from_primes(2.0, 4.0).unwrap();
        assert_eq!(p.ns(), &[3]);
        let q = DirichletPoly::from_primes(10.0, 20.0).unwrap();
        assert_eq!(q.ns(), &[11, 13, 17, 19]);
    }

    #[test]
    fn prime_count_over_a_large_dyadic_block() {
        let p = DirichletPoly::from_primes(1e6, 2e6).unwrap();
        // pi(2e6) - pi(1e6) = 148933 - 78498.
        assert_eq!(p.len(), 70_435);
    }

    #[test]
    fn eval_closed_forms() {
        let single = DirichletPoly::new([(2, 1.0)]).unwrap();
        for t in [0.0, 1.0, -3.5, 100.0] {
            assert!((single.eval(t).norm() - 0.5).abs() < 1e-15);
        }
        // At t = pi / ln 2 the terms 2 and 4 land at angles pi and 2 pi.
        let two = DirichletPoly::new([(2, 1.0), (4, 1.0)]).unwrap();
        let t = std::f64::consts::PI / std::f64::consts::LN_2;
        let v = two.eval(t);
        assert!((v.re - (-0.25)).abs() < 1e-12 && v.im.abs() < 1e-12);
        // t = 0 sums the real series.
        let r = two.eval(0.0);
        assert!((r.re - 0.75).abs() < 1e-15 && r.im == 0.0);
    }

    #[test]
    fn eval_conjugate_symmetry() {
        let p = DirichletPoly::new([(3, 0.7), (10, 1.2), (41, 2.0)]).unwrap();
        for t in [0.3, 2.0, 17.5] {
            let plus = p.eval(t);
            let minus = p.eval(-t);
            assert!((plus.conj() - minus).norm() < 1e-13);
            let up = p.eval_unnormalized(t);
            let um = p.eval_unnormalized(-t);
            assert!((up.conj() - um).norm() < 1e-13);
        }
    }

    #[test]
    fn multiply_identity_and_hand_convolutions() {
        let p = DirichletPoly::new([(3, 1.0), (5, 2.0)]).unwrap();
        let u = DirichletPoly::unit();
        assert_eq!(p.multiply(&u).unwrap(), p);
        let q = DirichletPoly::from_primes(10.0, 16.0).unwrap(); // {11, 13}
        let sq = q.pow(2).unwrap();
        assert_eq!(sq.ns(), &[121, 143, 169]);
        assert_eq!(sq.coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn multiply_is_commutative_and_associative() {
        let a = DirichletPoly::new([(2, 1.0), (3, 2.0)]).unwrap();
        let b = DirichletPoly::new([(5, 1.0), (7, 3.0)]).unwrap();
        let c = DirichletPoly::new([(11, 2.0)]).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn multiply_overflow_is_detected() {
        let big = DirichletPoly::new([(1 << 40, 1.0)]).unwrap();
        assert!(matches!(
            big.multiply(&big).unwrap_err(),
            Error::Overflow(_)
        ));
        assert!(DirichletPoly::unit().pow(9).is_err());
    }

    #[test]
    fn factorization_matches_weight_enumeration() {
        let rho = RhoTable::build(12.0, 32, 1e-12).unwrap();
        let p = ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 2, 2.0, 4.0, 8.0, &rho).unwrap();
        let m = SmoothSet {
            lo: 1,
            hi: 2,
            y: 2,
            members: vec![1, 2],
        };
        let w = crate::weights::enumerate(&p, &m, 1, 1 << 40).unwrap();
        let poly = DirichletPoly::from_primes(p.p1, 2.0 * p.p1)
            .unwrap()
            .multiply(&DirichletPoly::from_primes(p.p2, 2.0 * p.p2).unwrap())
            .unwrap()
            .multiply(
                &DirichletPoly::from_primes(p.p3, 2.0 * p.p3)
                    .unwrap()
                    .pow(p.j)
                    .unwrap(),
            )
            .unwrap()
            .multiply(&DirichletPoly::from_members(&m.members).unwrap())
            .unwrap();
        let from_weights = DirichletPoly::from_weights(&w);
        assert_eq!(poly, from_weights);
    }

    #[test]
    fn dyadic_anchor_detects_block_support() {
        let p = DirichletPoly::new([(257, 1.0), (400, 1.0), (512, 1.0)]).unwrap();
        assert_eq!(p.dyadic_anchor().unwrap(), 256.0);
        let wide = DirichletPoly::new([(10, 1.0), (100, 1.0)]).unwrap();
        assert!(wide.dyadic_anchor().is_err());
        assert!(DirichletPoly::new(Vec::<(u64, f64)>::new())
            .unwrap()
            .dyadic_anchor()
            .is_err());
    }

    #[test]
    fn near_diagonal_pairs() {
        let p = DirichletPoly::new([(100, 1.0), (101, 2.0), (103, 1.0), (200, 5.0)]).unwrap();
        // kmax = 3: pairs (100,101), (100,103), (101,103).
        assert_eq!(p.near_diagonal_sum(3), 2.0 + 1.0 + 2.0);
        assert_eq!(p.near_diagonal_sum(0), 0.0);
        // kmax large enough reaches (*,200) pairs too.
        assert_eq!(p.near_diagonal_sum(100), 5.0 + 10.0 + 5.0 + 2.0 + 1.0 + 2.0);
    }
}
