//! Sieve-weight systems built by exact lattice enumeration.
//!
//! The weight of an integer `n` counts its factorizations
//! `n = q1 * q2 * p_1 ... p_J * m` with `q1` a prime in `(P1, 2 P1]`,
//! `q2` a prime in `(P2, 2 P2]`, each `p_i` a prime in `(P3, 2 P3]`
//! (ordered tuples, repetition allowed), and `m` drawn from a supplied
//! set of smooth cofactors. The tilde variant inserts one more factor
//! `r` ranging over the smooth integers in `(R, 2 R]`.
//!
//! Ordered-tuple counting is what makes the weight table equal a product
//! of sparse Dirichlet polynomials coefficient by coefficient; the
//! `dpoly` module exploits that identity.
//!
//! Enumeration is exact and intended for toy and desk scales only: the
//! lattice size `#Q1 * #Q2 * #Q3^J * |M|` is estimated up front and a
//! capacity error is returned when it is out of reach.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::smooth::{primes_in, smooth_set, SieveConfig, SmoothSet};

/// Enumerated-tuple budget for one window.
const MAX_LATTICE_POINTS: f64 = 1e8;

/// A sparse weight table on an inclusive window `[lo, hi]`.
#[derive(Debug, Clone, Serialize)]
pub struct WeightWindow {
    pub lo: u64,
    pub hi: u64,
    /// `n -> w_n` for every `n` with positive weight.
    pub entries: BTreeMap<u64, u64>,
    /// The parameter set the window was enumerated from.
    pub provenance: ParamSet,
    /// Scale `R` of the extra smooth factor, for tilde windows.
    pub tilde_r: Option<f64>,
}

impl WeightWindow {
    /// `w_n`, zero off the support.
    pub fn weight(&self, n: u64) -> u64 {
        self.entries.get(&n).copied().unwrap_or(0)
    }

    /// Number of integers with positive weight.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Total mass: the number of factorization tuples landing in the
    /// window.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

/// Builds the prime lists for the three dyadic ranges of a parameter set.
fn prime_ranges(p: &ParamSet) -> Result<(Vec<u64>, Vec<u64>, Vec<u64>)> {
    let q1 = primes_in(p.p1, 2.0 * p.p1)?;
    let q2 = primes_in(p.p2, 2.0 * p.p2)?;
    let q3 = if p.j > 0 {
        primes_in(p.p3, 2.0 * p.p3)?
    } else {
        Vec::new()
    };
    Ok((q1, q2, q3))
}

/// Core enumeration. `extra` is an additional ascending factor list;
/// `[1]` makes it a no-op.
fn enumerate_core(
    p: &ParamSet,
    m: &SmoothSet,
    lo: u64,
    hi: u64,
    extra: &[u64],
    tilde_r: Option<f64>,
) -> Result<WeightWindow> {
    if lo < 1 || hi < lo {
        return Err(Error::Domain(format!(
            "weights: need 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let (q1s, q2s, q3s) = prime_ranges(p)?;
    let lattice = q1s.len() as f64
        * q2s.len() as f64
        * extra.len() as f64
        * (q3s.len() as f64).powf(p.j as f64)
        * (m.members.len().max(1)) as f64;
    if !lattice.is_finite() || lattice > MAX_LATTICE_POINTS {
        return Err(Error::Capacity(format!(
            "weights: estimated lattice of {lattice:.3e} tuples exceeds {MAX_LATTICE_POINTS:.0e}"
        )));
    }

    // Walks the ordered (p_1, .., p_J) tuples, accumulating the product,
    // and resolves the m-range at each leaf by binary search.
    fn descend(
        premul: u64,
        level: u64,
        q3s: &[u64],
        members: &[u64],
        lo: u64,
        hi: u64,
        out: &mut BTreeMap<u64, u64>,
    ) {
        if level == 0 {
            let min_m = lo.div_ceil(premul);
            let start = members.partition_point(|&v| v < min_m);
            for &mv in &members[start..] {
                match premul.checked_mul(mv) {
                    Some(n) if n <= hi => *out.entry(n).or_insert(0) += 1,
                    _ => break,
                }
            }
            return;
        }
        for &q in q3s {
            match premul.checked_mul(q) {
                Some(next) if next <= hi => {
                    descend(next, level - 1, q3s, members, lo, hi, out)
                }
                _ => {}
            }
        }
    }

    let partials: Vec<BTreeMap<u64, u64>> = q1s
        .par_iter()
        .map(|&q1| {
            let mut local = BTreeMap::new();
            for &q2 in &q2s {
                let Some(base) = q1.checked_mul(q2) else {
                    continue;
                };
                for &r in extra {
                    match base.checked_mul(r) {
                        Some(pre) if pre <= hi => {
                            descend(pre, p.j, &q3s, &m.members, lo, hi, &mut local)
                        }
                        _ => {}
                    }
                }
            }
            local
        })
        .collect();

    let mut entries = BTreeMap::new();
    for partial in partials {
        for (n, w) in partial {
            *entries.entry(n).or_insert(0) += w;
        }
    }
    Ok(WeightWindow {
        lo,
        hi,
        entries,
        provenance: p.clone(),
        tilde_r,
    })
}

/// Enumerates the weight table on `[lo, hi]`. The cofactor set `m` is
/// supplied by the caller: genuine runs pass the window from
/// [`crate::smooth::enumerate_m`], toy runs a hand-built set.
pub fn enumerate(p: &ParamSet, m: &SmoothSet, lo: u64, hi: u64) -> Result<WeightWindow> {
    enumerate_core(p, m, lo, hi, &[1], None)
}

/// Enumerates the tilde variant: one extra factor `r` over the smooth
/// integers in `(r_scale, 2 r_scale]`.
pub fn tilde_enumerate(
    p: &ParamSet,
    r_scale: f64,
    m: &SmoothSet,
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
) -> Result<WeightWindow> {
    if !(r_scale >= 1.0 && r_scale.is_finite()) {
        return Err(Error::Domain(format!(
            "tilde_enumerate: r scale must be >= 1, got {r_scale}"
        )));
    }
    let r_lo = r_scale.floor() as u64 + 1;
    let r_hi = (2.0 * r_scale).floor() as u64;
    let rs = if r_hi >= r_lo {
        smooth_set(r_lo, r_hi, p.y.floor() as u64, cfg)?.members
    } else {
        Vec::new()
    };
    if rs.is_empty() {
        return Ok(WeightWindow {
            lo,
            hi,
            entries: BTreeMap::new(),
            provenance: p.clone(),
            tilde_r: Some(r_scale),
        });
    }
    enumerate_core(p, m, lo, hi, &rs, Some(r_scale))
}

/// The default scale for the extra tilde factor, `sqrt(x / P1)`.
pub fn tilde_r_default(p: &ParamSet) -> f64 {
    (p.x / p.p1).sqrt()
}

/// Interval average of the weights with the lower-bound reference value.
#[derive(Debug, Clone, Serialize)]
pub struct AverageReport {
    pub x: u64,
    pub h: u64,
    /// `(1/h) * sum of w_n over x <= n <= x + h`.
    pub average: f64,
    /// `rho(u - v) / (ln P1 * ln P2 * (2 ln P3)^J)`: the scale the
    /// average is guaranteed to reach (up to a constant) when `h` is in
    /// the admissible range.
    pub reference: f64,
    /// Whether `2 X y^{-5/12} <= h <= X`, the range the lower bound
    /// needs.
    pub h_in_average_range: bool,
    /// Whether `h >= X y^{-3/8}`, the window scale used by the
    /// discrepancy argument. Tracked separately because the two
    /// thresholds do not coincide.
    pub h_at_discrepancy_scale: bool,
}

/// Averages `w_n` over the inclusive interval `[x, x + h]`, which must
/// lie inside the window.
pub fn average(w: &WeightWindow, x: u64, h: u64) -> Result<AverageReport> {
    if h < 1 {
        return Err(Error::Domain("average: h must be >= 1".into()));
    }
    let end = x
        .checked_add(h)
        .ok_or_else(|| Error::Overflow(format!("average: x + h overflows ({x} + {h})")))?;
    if x < w.lo || end > w.hi {
        return Err(Error::Range(format!(
            "average: [{x}, {end}] is not contained in the window [{}, {}]",
            w.lo, w.hi
        )));
    }
    let sum: u64 = w.entries.range(x..=end).map(|(_, &v)| v).sum();
    let p = &w.provenance;
    let log_reference = p.rho_log_u_minus_v
        - p.p1.ln().ln()
        - p.p2.ln().ln()
        - p.j as f64 * (2.0 * p.p3.ln()).ln();
    let h_f = h as f64;
    Ok(AverageReport {
        x,
        h,
        average: sum as f64 / h_f,
        reference: log_reference.exp(),
        h_in_average_range: h_f >= 2.0 * p.x * p.y.powf(-5.0 / 12.0) && h_f <= p.x,
        h_at_discrepancy_scale: h_f >= p.x * p.y.powf(-3.0 / 8.0),
    })
}

/// Result of checking the pointwise weight bound
/// `w_n <= (ln n)^{J+2} / (ln P1 * ln P2 * (ln P3)^J)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    /// Number of support points checked.
    pub checked: usize,
    /// Largest observed `w_n / bound(n)`.
    pub max_ratio: f64,
    /// Where the maximum occurs.
    pub argmax: Option<u64>,
}

/// Verifies the pointwise bound on every support point. An empty window
/// passes vacuously; violations produce an assertion failure naming the
/// offenders.
pub fn bound_check(w: &WeightWindow) -> Result<BoundReport> {
    let p = &w.provenance;
    let log_denom = p.p1.ln().ln() + p.p2.ln().ln() + p.j as f64 * p.p3.ln().ln();
    let exponent = p.j as f64 + 2.0;
    let mut max_ratio = 0.0f64;
    let mut argmax = None;
    let mut offenders = Vec::new();
    for (&n, &wn) in &w.entries {
        let log_bound = exponent * (n as f64).ln().ln() - log_denom;
        let ratio = wn as f64 / log_bound.exp();
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = Some(n);
        }
        if ratio > 1.0 + 1e-12 {
            offenders.push((n, wn, ratio));
        }
    }
    if !offenders.is_empty() {
        let shown: Vec<String> = offenders
            .iter()
            .take(8)
            .map(|(n, wn, r)| format!("n = {n} (w = {wn}, ratio {r:.3})"))
            .collect();
        return Err(Error::AssertionFailed(format!(
            "pointwise weight bound fails at {} support points: {}",
            offenders.len(),
            shown.join(", ")
        )));
    }
    Ok(BoundReport {
        checked: w.entries.len(),
        max_ratio,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickman::RhoTable;

    fn rho() -> RhoTable {
        RhoTable::build(12.0, 32, 1e-12).unwrap()
    }

    fn unit_m() -> SmoothSet {
        SmoothSet {
            lo: 1,
            hi: 1,
            y: 2,
            members: vec![1],
        }
    }

    /// J = 0, primes {3} x {5, 7}, m = 1: exactly 15 and 21.
    fn toy_a(rho: &RhoTable) -> ParamSet {
        ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 0, 2.0, 4.0, 8.0, rho).unwrap()
    }

    #[test]
    fn two_prime_products() {
        let r = rho();
        let w = enumerate(&toy_a(&r), &unit_m(), 1, 1000).unwrap();
        assert_eq!(
            w.entries,
            BTreeMap::from([(15, 1), (21, 1)]),
        );
        assert_eq!(w.weight(16), 0);
        assert_eq!(w.support_len(), 2);
        assert_eq!(w.total(), 2);
    }

    #[test]
    fn one_inner_prime_level() {
        let r = rho();
        let p = ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 1, 2.0, 4.0, 8.0, &r).unwrap();
        let w = enumerate(&p, &unit_m(), 1, 10_000).unwrap();
        // {3} x {5,7} x {11,13}.
        assert_eq!(
            w.entries,
            BTreeMap::from([(165, 1), (195, 1), (231, 1), (273, 1)]),
        );
    }

    #[test]
    fn ordered_tuples_count_with_multiplicity() {
        let r = rho();
        let p = ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 2, 2.0, 4.0, 8.0, &r).unwrap();
        let m = SmoothSet {
            lo: 1,
            hi: 2,
            y: 2,
            members: vec![1, 2],
        };
        let w = enumerate(&p, &m, 1, 100_000).unwrap();
        // 3 * 5 * 11 * 13 arises as (11, 13) and (13, 11).
        assert_eq!(w.weight(2145), 2);
        // 3 * 5 * 11 * 11 only as (11, 11).
        assert_eq!(w.weight(1815), 1);
        // Full span: every tuple lands, so the mass is the lattice size
        // 1 * 2 * 2^2 * 2.
        assert_eq!(w.total(), 16);
    }

    #[test]
    fn cofactor_collisions_accumulate() {
        let r = rho();
        let m = SmoothSet {
            lo: 5,
            hi: 7,
            y: 7,
            members: vec![5, 6, 7],
        };
        let w = enumerate(&toy_a(&r), &m, 1, 1000).unwrap();
        // 3*5*7 and 3*7*5 collide at 105.
        assert_eq!(
            w.entries,
            BTreeMap::from([(75, 1), (90, 1), (105, 2), (126, 1), (147, 1)]),
        );
        assert_eq!(w.total(), 6);
    }

    #[test]
    fn window_clipping_drops_tuples() {
        let r = rho();
        let w = enumerate(&toy_a(&r), &unit_m(), 16, 1000).unwrap();
        assert_eq!(w.entries, BTreeMap::from([(21, 1)]));
        let empty = enumerate(&toy_a(&r), &unit_m(), 400, 500).unwrap();
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn empty_cofactor_set_gives_empty_window() {
        let r = rho();
        let m = SmoothSet {
            lo: 1,
            hi: 0,
            y: 2,
            members: vec![],
        };
        let w = enumerate(&toy_a(&r), &m, 1, 1000).unwrap();
        assert!(w.entries.is_empty());
    }

    #[test]
    fn average_over_toy_window() {
        let r = rho();
        let w = enumerate(&toy_a(&r), &unit_m(), 1, 100).unwrap();
        let rep = average(&w, 10, 20).unwrap();
        // Window [10, 30] holds both 15 and 21.
        assert!((rep.average - 2.0 / 20.0).abs() < 1e-15);
        // X = 20, y = 8: 2 X y^{-5/12} = 16.87.. <= 20 <= X.
        assert!(rep.h_in_average_range);
        assert!(rep.h_at_discrepancy_scale);
        let small = average(&w, 10, 5).unwrap();
        assert!(!small.h_in_average_range);
        assert_eq!(small.average, 1.0 / 5.0);
        assert!(rep.reference > 0.0 && rep.reference.is_finite());
        // Dead stretch averages to zero.
        assert_eq!(average(&w, 25, 50).unwrap().average, 0.0);
        assert!(matches!(average(&w, 90, 20), Err(Error::Range(_))));
    }

    #[test]
    fn pointwise_bound_holds_on_toys() {
        let r = rho();
        let w = enumerate(&toy_a(&r), &unit_m(), 1, 1000).unwrap();
        let rep = bound_check(&w).unwrap();
        assert_eq!(rep.checked, 2);
        assert!(rep.max_ratio > 0.0 && rep.max_ratio <= 1.0);
        // (ln 15)^2 / (ln 2 ln 4) = 7.63..; w = 1 sits well inside.
        assert_eq!(rep.argmax, Some(15));

        let empty = enumerate(&toy_a(&r), &unit_m(), 400, 500).unwrap();
        let rep2 = bound_check(&empty).unwrap();
        assert_eq!(rep2.checked, 0);
        assert_eq!(rep2.max_ratio, 0.0);
    }

    #[test]
    fn inflated_weight_fails_bound() {
        let r = rho();
        let mut w = enumerate(&toy_a(&r), &unit_m(), 1, 1000).unwrap();
        // Bound at n = 4 with J = 0 is (ln 4)^2 / (ln 2 ln 4) = 2.
        w.entries.insert(4, 1000);
        let err = bound_check(&w).unwrap_err();
        match err {
            Error::AssertionFailed(msg) => assert!(msg.contains("n = 4"), "{msg}"),
            other => panic!("expected assertion failure, got {other:?}"),
        }
    }

    #[test]
    fn tilde_adds_one_smooth_factor() {
        let r = rho();
        // y = 2 so (2, 4] cap S(y) = {4}.
        let p = ParamSet::toy(20.0, 2.0, 0.1, 0.05, 2.0, 0.05, 0, 2.0, 4.0, 8.0, &r).unwrap();
        let w = tilde_enumerate(&p, 2.0, &unit_m(), 1, 1000, &SieveConfig::default()).unwrap();
        assert_eq!(w.entries, BTreeMap::from([(60, 1), (84, 1)]));
        assert_eq!(w.tilde_r, Some(2.0));

        // A scale whose doubled range holds no smooth integer.
        let none = tilde_enumerate(&p, 2.4, &unit_m(), 1, 1000, &SieveConfig::default()).unwrap();
        // (2.4, 4.8]: {3, 4} intersect S(2) = {4}.
        assert_eq!(none.entries, BTreeMap::from([(60, 1), (84, 1)]));
        let p3 = ParamSet::toy(20.0, 2.0, 0.1, 0.05, 2.0, 0.05, 0, 2.0, 4.0, 8.0, &r).unwrap();
        let empty = tilde_enumerate(&p3, 4.5, &unit_m(), 1, 1000, &SieveConfig::default()).unwrap();
        // (4.5, 9]: smooth members of S(2) are {8}; 8 * 15 = 120 <= 1000 stays.
        assert_eq!(empty.entries, BTreeMap::from([(120, 1), (168, 1)]));
    }

    #[test]
    fn oversized_lattice_is_rejected() {
        let r = rho();
        let p = ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 500, 2.0, 4.0, 8.0, &r).unwrap();
        assert!(matches!(
            enumerate(&p, &unit_m(), 1, 1000),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn enumeration_is_reproducible() {
        let r = rho();
        let p = ParamSet::toy(20.0, 8.0, 0.1, 0.05, 2.0, 0.05, 2, 2.0, 4.0, 8.0, &r).unwrap();
        let m = SmoothSet {
            lo: 1,
            hi: 2,
            y: 2,
            members: vec![1, 2],
        };
        let a = enumerate(&p, &m, 1, 100_000).unwrap();
        let b = enumerate(&p, &m, 1, 100_000).unwrap();
        assert_eq!(a.entries, b.entries);
    }
}
