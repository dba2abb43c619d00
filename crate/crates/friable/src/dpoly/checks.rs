//! Measured forms of the classical Dirichlet-polynomial inequalities.
//!
//! Each check computes its left-hand side by quadrature or direct
//! evaluation and the structural right-hand side exactly from the
//! coefficients, then reports `ratio = lhs / sum(rhs_terms)` — the
//! measured stand-in for the inequality's implicit constant.
//!
//! Two checks are asserted ([`mvt_check`] and
//! [`halasz_montgomery_check`]): their inequalities are clean enough
//! that a generous constant (default 8) should never be exceeded, and a
//! violation returns an assertion error. The remaining checks carry
//! genuinely unquantified implicit constants and only report.
//!
//! A caution on the asserted constant: the measured ratio depends on the
//! coefficient pattern. Dense blocks of equal coefficients push the
//! mean-value ratio above 8 once the support is long and `T` is small
//! (the integral concentrates its diagonal plus coherent off-diagonal
//! mass); the batteries that assert therefore use random sparse
//! coefficients, and the dense coherent case is pinned by its own test.

use std::collections::BTreeMap;

use crate::dpoly::grid::{mean_value_at, TGrid};
use crate::dpoly::poly::DirichletPoly;
use crate::dpoly::regions::WellSpacedSet;
use crate::dpoly::{pairwise_sum, pairwise_sum_complex};
use crate::error::{Error, Result};
use crate::report::CheckReport;

/// Default scaled-envelope constant for the asserted checks.
pub const DEFAULT_C_CHECK: f64 = 8.0;

/// Relative tolerance for the quadratures inside checks.
const QUAD_TOL: f64 = 1e-6;

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Mean-value bound on a dyadic block: quadrature of
/// `int_{-T}^{T} |sum a_n n^{-it}|^2 dt` against `(T + X) sum a_n^2`.
/// Asserted: errors if the measured ratio exceeds `c_check`.
pub fn mvt_check(poly: &DirichletPoly, t: f64, c_check: f64) -> Result<CheckReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let x = poly.dyadic_anchor()?;
    let lhs = mean_value_at(poly, 0.0, -t, t, QUAD_TOL)?;
    let l2 = poly.coeff_l2();
    let rhs_terms = vec![t * l2, x * l2];
    let ratio = safe_ratio(lhs, rhs_terms.iter().sum());
    let pass = ratio <= c_check;
    let report = CheckReport {
        lemma: "mean-value".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: true,
        pass,
        flags: BTreeMap::new(),
    };
    if !pass {
        return Err(Error::AssertionFailed(format!(
            "mean-value ratio {ratio:.4} exceeds the constant {c_check}"
        )));
    }
    Ok(report)
}

/// Sparse variant: the right-hand side replaces `X sum a_n^2` with the
/// exact near-diagonal mass `T sum over 1 <= k <= 2X/T of a_n a_{n+k}`.
/// Report-only (the constant is implicit); the `within-scaled-envelope`
/// flag records the comparison against `c_check` anyway.
pub fn improved_mvt_check(poly: &DirichletPoly, t: f64, c_check: f64) -> Result<CheckReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let x = poly.dyadic_anchor()?;
    let lhs = mean_value_at(poly, 0.0, -t, t, QUAD_TOL)?;
    let l2 = poly.coeff_l2();
    let kmax = (2.0 * x / t).floor() as u64;
    let off = poly.near_diagonal_sum(kmax);
    let rhs_terms = vec![t * l2, t * off];
    let ratio = safe_ratio(lhs, rhs_terms.iter().sum());
    let mut flags = BTreeMap::new();
    flags.insert("within-scaled-envelope".into(), ratio <= c_check);
    Ok(CheckReport {
        lemma: "sparse-mean-value".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: false,
        pass: ratio.is_finite(),
        flags,
    })
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Moment amplification: `int_{-T}^{T} |P(1+it)^ell A(1+it)|^2 dt`
/// against `(T/X + 2^ell P1) ((ell+1)!)^2 max a_n^2`, where `P1` is the
/// dyadic scale of `p` and `x` the product scale the caller amplified
/// from. Report-only.
pub fn moment_check(
    p: &DirichletPoly,
    a: &DirichletPoly,
    ell: u64,
    t: f64,
    x: f64,
) -> Result<CheckReport> {
    if ell == 0 || ell > 8 {
        return Err(Error::Overflow(format!(
            "moment exponent {ell} outside [1, 8]"
        )));
    }
    if !(t > 0.0 && t.is_finite() && x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("need positive finite t, x; got {t}, {x}")));
    }
    let p1_scale = p.dyadic_anchor()?;
    let product = p.pow(ell)?.multiply(a)?;
    let lhs = mean_value_at(&product, 1.0, -t, t, QUAD_TOL)?;
    let amax = a.max_coeff();
    let fact_sq = factorial(ell + 1).powi(2);
    let rhs_terms = vec![
        (t / x) * fact_sq * amax * amax,
        (2f64.powi(ell as i32) * p1_scale) * fact_sq * amax * amax,
    ];
    let ratio = safe_ratio(lhs, rhs_terms.iter().sum());
    Ok(CheckReport {
        lemma: "moment".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: false,
        pass: ratio.is_finite(),
        flags: BTreeMap::new(),
    })
}

/// Large-value count: `|ws|` against
/// `T^{2 ln V / ln P} V^2 exp(2 (ln T / ln P) ln ln T)`, for a prime
/// polynomial of dyadic scale `P` with `|P(1+it)| >= 1/V` on every
/// point. The size precondition is verified; the bound is report-only.
pub fn large_values_check(
    p: &DirichletPoly,
    ws: &WellSpacedSet,
    v: f64,
    t: f64,
) -> Result<CheckReport> {
    if !(t >= 3.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "t must be at least 3 (the bound takes ln ln T), got {t}"
        )));
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("V must be positive, got {v}")));
    }
    if p.coeffs().iter().any(|&a| a > 1.0) {
        return Err(Error::InvalidInput(
            "large-value bound needs coefficients at most 1".into(),
        ));
    }
    let scale = p.dyadic_anchor()?;
    let floor = (1.0 / v) * (1.0 - 1e-9);
    for &pt in ws.points() {
        if pt.abs() > t {
            return Err(Error::InvalidInput(format!(
                "point {pt} lies outside [-{t}, {t}]"
            )));
        }
        let modulus = p.eval(pt).norm();
        if modulus < floor {
            return Err(Error::InvalidInput(format!(
                "|P(1 + i {pt})| = {modulus} is below the required 1/V = {}",
                1.0 / v
            )));
        }
    }
    let ln_p = scale.ln();
    let ln_t = t.ln();
    let log_rhs = 2.0 * (v.ln() / ln_p) * ln_t + 2.0 * v.ln() + 2.0 * (ln_t / ln_p) * ln_t.ln();
    let rhs = log_rhs.exp();
    let lhs = ws.len() as f64;
    let ratio = safe_ratio(lhs, rhs);
    Ok(CheckReport {
        lemma: "large-values".into(),
        lhs,
        rhs_terms: vec![rhs],
        ratio,
        asserted: false,
        pass: ratio.is_finite(),
        flags: BTreeMap::new(),
    })
}

/// Discrete mean value over a well-spaced set:
/// `sum_{t in ws} |G(it)|^2` against
/// `(X + |ws| sqrt(T)) ln T sum a_n^2`. Asserted with `c_check`.
pub fn halasz_montgomery_check(
    g: &DirichletPoly,
    ws: &WellSpacedSet,
    t: f64,
    c_check: f64,
) -> Result<CheckReport> {
    if !(t >= 2.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "t must be at least 2 (the bound takes ln T), got {t}"
        )));
    }
    let x = g.dyadic_anchor()?;
    if let Some(&worst) = ws
        .points()
        .iter()
        .find(|&&pt| pt.abs() > t)
    {
        return Err(Error::InvalidInput(format!(
            "point {worst} lies outside [-{t}, {t}]"
        )));
    }
    let norms: Vec<f64> = ws
        .points()
        .iter()
        .map(|&pt| g.eval_unnormalized(pt).norm_sqr())
        .collect();
    let lhs = pairwise_sum(&norms);
    let l2 = g.coeff_l2();
    let k = ws.len() as f64;
    let rhs_terms = vec![x * t.ln() * l2, k * t.sqrt() * t.ln() * l2];
    let ratio = safe_ratio(lhs, rhs_terms.iter().sum());
    let pass = ratio <= c_check;
    let report = CheckReport {
        lemma: "discrete-mean-value".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: true,
        pass,
        flags: BTreeMap::new(),
    };
    if !pass {
        return Err(Error::AssertionFailed(format!(
            "discrete mean-value ratio {ratio:.4} exceeds the constant {c_check}"
        )));
    }
    Ok(report)
}

/// Pointwise prime-polynomial bound: the max over grid nodes of
/// `|P(1 + it)| / (P^{-sigma0} + (ln X)^3 / (1 + |t|))`. Report-only;
/// the `scale-meets-precondition` flag records whether the polynomial is
/// long enough for the zero-free-region argument (desk scales usually
/// are not — the ratio is still measured).
pub fn pointwise_bound_check(
    p: &DirichletPoly,
    grid: &TGrid,
    x: f64,
    sigma0: f64,
) -> Result<CheckReport> {
    if !(x >= 16.0 && x.is_finite()) {
        return Err(Error::Domain(format!("x must be at least 16, got {x}")));
    }
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::Domain(format!("sigma0 must be positive, got {sigma0}")));
    }
    let scale = p.dyadic_anchor()?;
    let first_term = scale.powf(-sigma0);
    let log_x_cubed = x.ln().powi(3);
    let values = grid.power_values(p, 1.0);
    let mut best = (0.0f64, 0usize);
    for (i, &v) in values.iter().enumerate() {
        let tt = grid.node(i);
        let bound = first_term + log_x_cubed / (1.0 + tt.abs());
        let r = v.sqrt() / bound;
        if r > best.0 {
            best = (r, i);
        }
    }
    let (ratio, at) = best;
    let t_at = grid.node(at);
    let lhs = values[at].sqrt();
    let rhs_terms = vec![first_term, log_x_cubed / (1.0 + t_at.abs())];
    let mut flags = BTreeMap::new();
    let precondition = x.ln().powf(2.0 / 3.0) * x.ln().ln().powf(4.0 / 3.0);
    flags.insert(
        "scale-meets-precondition".into(),
        scale.ln() >= precondition,
    );
    flags.insert(
        "t-range-within-x".into(),
        grid.t_start.abs().max(grid.t_end.abs()) <= x,
    );
    Ok(CheckReport {
        lemma: "pointwise-prime-sum".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: false,
        pass: ratio.is_finite(),
        flags,
    })
}

/// Shared helper for tests and batteries: evaluates `|G(it)|^2` directly
/// on a set of points (no grid).
pub fn discrete_power_sum(g: &DirichletPoly, points: &[f64]) -> f64 {
    let terms: Vec<num_complex::Complex64> = points
        .iter()
        .map(|&t| {
            let v = g.eval_unnormalized(t);
            num_complex::Complex64::new(v.norm_sqr(), 0.0)
        })
        .collect();
    pairwise_sum_complex(&terms).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_equal_block(n: u64) -> DirichletPoly {
        DirichletPoly::new(((n + 1)..=(2 * n)).map(|k| (k, 1.0))).unwrap()
    }

    #[test]
    fn single_term_mean_value_ratio() {
        // LHS = 2 T a^2; envelope (T + X) a^2 with X = n/2.
        let p = DirichletPoly::new([(2, 1.0)]).unwrap();
        let r = mvt_check(&p, 10.0, DEFAULT_C_CHECK).unwrap();
        let expect = 20.0 / 11.0;
        assert!((r.ratio - expect).abs() < 1e-4, "ratio {}", r.ratio);
        assert!(r.pass && r.asserted);
    }

    #[test]
    fn coherent_block_stays_under_constant_at_long_t() {
        // 256 equal coefficients, T = 1024: the measured constant sits
        // near 1.89, comfortably under 8.
        let p = all_equal_block(256);
        let r = mvt_check(&p, 1024.0, DEFAULT_C_CHECK).unwrap();
        assert!((r.ratio - 1.89).abs() < 0.05, "ratio {}", r.ratio);
    }

    #[test]
    fn coherent_block_exceeds_constant_at_short_t() {
        // The same shape at N = 1024, T = 64 concentrates enough
        // coherent mass to push the measured constant near 8.7.
        let p = all_equal_block(1024);
        let err = mvt_check(&p, 64.0, DEFAULT_C_CHECK).unwrap_err();
        match err {
            Error::AssertionFailed(msg) => {
                assert!(msg.contains("exceeds"), "{msg}");
            }
            other => panic!("expected assertion failure, got {other:?}"),
        }
    }

    #[test]
    fn sparse_mean_value_empty_near_diagonal() {
        // T >= 2X empties the near-diagonal range: envelope is T l2.
        let p = DirichletPoly::new([(9, 1.0), (12, 2.0), (16, 1.0)]).unwrap();
        let r = improved_mvt_check(&p, 40.0, DEFAULT_C_CHECK).unwrap();
        assert_eq!(r.rhs_terms[1], 0.0);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert!(!r.asserted);
    }

    #[test]
    fn sparse_mean_value_uses_near_diagonal_mass() {
        let p = all_equal_block(64);
        let r = improved_mvt_check(&p, 16.0, DEFAULT_C_CHECK).unwrap();
        // kmax = 2 * 64 / 16 = 8 pairs per point, so the off-diagonal
        // term is positive.
        assert!(r.rhs_terms[1] > 0.0);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }

    #[test]
    fn moment_single_prime_closed_form() {
        // P = {3}, A = {5: 2}: LHS = 2T * (2 / 15)^2.
        let p = DirichletPoly::new([(3, 1.0)]).unwrap();
        let a = DirichletPoly::new([(5, 2.0)]).unwrap();
        let t = 12.0;
        let r = moment_check(&p, &a, 1, t, 100.0).unwrap();
        let expect_lhs = 2.0 * t * (2.0 / 15.0) * (2.0 / 15.0);
        assert!((r.lhs - expect_lhs).abs() < 1e-6 * expect_lhs);
        // RHS terms: (T/X) * 4 * 4 and 2 * 1.5 * 4 * 4.
        assert!((r.rhs_terms[0] - (t / 100.0) * 16.0).abs() < 1e-12);
        assert!((r.rhs_terms[1] - 2.0 * 1.5 * 16.0).abs() < 1e-12);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }

    #[test]
    fn moment_empty_amplified_poly() {
        let p = DirichletPoly::new([(3, 1.0)]).unwrap();
        let a = DirichletPoly::new(Vec::<(u64, f64)>::new()).unwrap();
        let r = moment_check(&p, &a, 2, 5.0, 50.0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.ratio, 0.0);
        assert!(moment_check(&p, &a, 0, 5.0, 50.0).is_err());
        assert!(moment_check(&p, &a, 9, 5.0, 50.0).is_err());
    }

    #[test]
    fn large_values_precondition_and_report() {
        let p = DirichletPoly::from_primes(16.0, 32.0).unwrap();
        // V chosen from the actual modulus at the chosen points.
        let pts = vec![0.0, 2.0, 4.5];
        let min_mod = pts
            .iter()
            .map(|&t| p.eval(t).norm())
            .fold(f64::INFINITY, f64::min);
        let ws = WellSpacedSet::new(pts).unwrap();
        let v = 1.0 / min_mod;
        let r = large_values_check(&p, &ws, v, 10.0).unwrap();
        assert_eq!(r.lhs, 3.0);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);

        // An overly small V violates the verified precondition.
        let too_strict = v / 1e6;
        assert!(matches!(
            large_values_check(&p, &ws, too_strict, 10.0),
            Err(Error::InvalidInput(_))
        ));
        // Empty set is trivially consistent.
        let empty = WellSpacedSet::new(vec![]).unwrap();
        let r2 = large_values_check(&p, &empty, v, 10.0).unwrap();
        assert_eq!(r2.lhs, 0.0);
    }

    #[test]
    fn discrete_mean_value_singleton() {
        let g = DirichletPoly::new([(4, 1.0)]).unwrap();
        let ws = WellSpacedSet::new(vec![1.5]).unwrap();
        let r = halasz_montgomery_check(&g, &ws, 4.0, DEFAULT_C_CHECK).unwrap();
        // LHS = 1; envelope (2 + sqrt(4)) ln 4 * 1.
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.ratio <= 1.0);
        assert!(r.pass);
        // Empty set passes with zero mass.
        let empty = WellSpacedSet::new(vec![]).unwrap();
        let r2 = halasz_montgomery_check(&g, &empty, 4.0, DEFAULT_C_CHECK).unwrap();
        assert_eq!(r2.lhs, 0.0);
        // Points outside the range are rejected.
        let outside = WellSpacedSet::new(vec![10.0]).unwrap();
        assert!(halasz_montgomery_check(&g, &outside, 4.0, DEFAULT_C_CHECK).is_err());
    }

    #[test]
    fn pointwise_bound_report_shape() {
        let p = DirichletPoly::from_primes(8.0, 16.0).unwrap();
        let grid = TGrid::for_poly(0.0, 50.0, &p, 128).unwrap();
        let r = pointwise_bound_check(&p, &grid, 256.0, 0.2).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert_eq!(r.rhs_terms.len(), 2);
        // Desk scales fail the length precondition; the flag says so.
        assert_eq!(r.flags["scale-meets-precondition"], false);
        assert_eq!(r.flags["t-range-within-x"], true);
        // At t = 0 the prime sum is sum 1/p over (8, 16], well under the
        // bound, so the ratio is below 1 on this toy.
        assert!(r.ratio < 1.0);
    }
}
