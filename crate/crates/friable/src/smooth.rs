//! Segmented sieves and counts for `y`-smooth numbers.
//!
//! An integer is `y`-smooth when its greatest prime factor is at most `y`,
//! with the convention that `1` is smooth for every `y >= 1`. The module's
//! workhorse is a segmented greatest-prime-factor sieve: each segment keeps
//! a residual per integer, divides out the full power of every base prime
//! in ascending order, and whatever survives above `1` is the greatest
//! prime factor itself. One sieve pass therefore answers smoothness queries
//! for *all* `y` at once.
//!
//! On top of it sit [`psi`] (the counting function `Psi(x, y)`), interval
//! and pairwise variants, explicit [`smooth_set`] enumeration, and
//! [`enumerate_m`], which materializes the window of smooth cofactors a
//! [`ParamSet`] prescribes.
//!
//! All ranges of integers are inclusive `[lo, hi]` unless a window is
//! written `(x, x + h]`, which excludes its left endpoint. Work is split
//! over segments and parallelized; every result is an exact integer count
//! or list, so outputs are identical at any thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::dickman::RhoTable;
use crate::error::{Error, Result};
use crate::params::ParamSet;

/// Resource limits for sieve operations.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    /// Integers per segment; bounds peak memory per worker.
    pub segment_len: usize,
    /// Largest total range any single operation may sieve.
    pub max_window: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_len: 1 << 18,
            max_window: 1 << 28,
        }
    }
}

/// Integers above this bound would need a base-prime sieve past 2^22.
const MAX_SIEVE_VALUE: u64 = 1 << 44;

impl SieveConfig {
    fn check(&self) -> Result<()> {
        if self.segment_len < 1024 || self.segment_len > (1 << 24) {
            return Err(Error::InvalidInput(format!(
                "segment_len must lie in [2^10, 2^24], got {}",
                self.segment_len
            )));
        }
        if self.max_window < self.segment_len as u64 {
            return Err(Error::InvalidInput(format!(
                "max_window {} is below segment_len {}",
                self.max_window, self.segment_len
            )));
        }
        Ok(())
    }

    fn check_window(&self, lo: u64, hi: u64, what: &str) -> Result<()> {
        self.check()?;
        if lo < 1 || hi < lo {
            return Err(Error::Domain(format!(
                "{what}: need 1 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if hi > MAX_SIEVE_VALUE {
            return Err(Error::Capacity(format!(
                "{what}: hi = {hi} exceeds the sieveable bound 2^44"
            )));
        }
        let span = hi - lo + 1;
        if span > self.max_window {
            return Err(Error::Capacity(format!(
                "{what}: window of {span} integers exceeds max_window = {}",
                self.max_window
            )));
        }
        Ok(())
    }
}

/// Floor of the square root, exact for all `u64`.
fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|rr| rr <= n) {
        r += 1;
    }
    r
}

/// Primes in `[2, limit]` by a plain Eratosthenes sieve.
pub fn base_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Primes `p` with `lo < p <= hi` (real bounds, dyadic-window convention).
pub fn primes_in(lo: f64, hi: f64) -> Result<Vec<u64>> {
    if !(lo.is_finite() && hi.is_finite()) || hi < 0.0 {
        return Err(Error::Domain(format!("primes_in: bad bounds ({lo}, {hi}]")));
    }
    if hi > (1u64 << 32) as f64 {
        return Err(Error::Capacity(format!(
            "primes_in: hi = {hi} exceeds 2^32"
        )));
    }
    let hi_int = hi.floor() as u64;
    Ok(base_primes(hi_int)
        .into_iter()
        .filter(|&p| p as f64 > lo)
        .collect())
}

/// Greatest prime factors for one segment `[seg_lo, seg_hi]` (inclusive).
/// `primes` must contain every prime up to `sqrt(seg_hi)`, ascending.
fn segment_gpf(seg_lo: u64, seg_hi: u64, primes: &[u64]) -> Vec<u64> {
    let len = (seg_hi - seg_lo + 1) as usize;
    let mut residual: Vec<u64> = (seg_lo..=seg_hi).collect();
    let mut gpf = vec![1u64; len];
    for &p in primes {
        if p * p > seg_hi {
            break;
        }
        let mut m = seg_lo.div_ceil(p) * p;
        if m < p {
            m = p;
        }
        while m <= seg_hi {
            let i = (m - seg_lo) as usize;
            while residual[i] % p == 0 {
                residual[i] /= p;
            }
            // Ascending order: the last prime written here is the greatest
            // one below sqrt(seg_hi).
            gpf[i] = p;
            m += p;
        }
    }
    for (g, r) in gpf.iter_mut().zip(&residual) {
        // A residual above 1 is a single prime exceeding sqrt(seg_hi),
        // necessarily the greatest factor.
        if *r > 1 {
            *g = *r;
        }
    }
    gpf
}

/// Applies `f` to each sieved segment of `[lo, hi]` in parallel and returns
/// the per-segment results in segment order.
fn map_segments<R: Send>(
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
    f: impl Fn(u64, &[u64]) -> R + Sync,
) -> Vec<R> {
    let primes = base_primes(isqrt(hi));
    let seg = cfg.segment_len as u64;
    let n_segs = (hi - lo + 1).div_ceil(seg);
    (0..n_segs)
        .into_par_iter()
        .map(|s| {
            let a = lo + s * seg;
            let b = (a + seg - 1).min(hi);
            f(a, &segment_gpf(a, b, &primes))
        })
        .collect()
}

/// Materialized greatest-prime-factor table on `[lo, hi]` (inclusive).
#[derive(Debug, Clone)]
pub struct GpfTable {
    pub lo: u64,
    pub hi: u64,
    values: Vec<u64>,
}

impl GpfTable {
    /// Sieves the table. Subject to the config's window budget.
    pub fn build(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<Self> {
        cfg.check_window(lo, hi, "gpf table")?;
        let chunks = map_segments(lo, hi, cfg, |_, gpf| gpf.to_vec());
        Ok(GpfTable {
            lo,
            hi,
            values: chunks.concat(),
        })
    }

    /// Greatest prime factor of `n` (with `gpf(1) = 1`).
    pub fn gpf(&self, n: u64) -> Result<u64> {
        if n < self.lo || n > self.hi {
            return Err(Error::Range(format!(
                "gpf: n = {n} outside table range [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(self.values[(n - self.lo) as usize])
    }

    /// Whether `n` is `y`-smooth.
    pub fn is_smooth(&self, n: u64, y: u64) -> Result<bool> {
        Ok(self.gpf(n)? <= y)
    }
}

/// `Psi(x, y)`: the number of `y`-smooth integers in `[1, x]`.
pub fn psi(x: u64, y: u64, cfg: &SieveConfig) -> Result<u64> {
    if y < 1 {
        return Err(Error::Domain("psi: y must be >= 1".into()));
    }
    cfg.check_window(1, x, "psi")?;
    let counts = map_segments(1, x, cfg, |_, gpf| {
        gpf.iter().filter(|&&g| g <= y).count() as u64
    });
    Ok(counts.iter().sum())
}

/// [`psi`] together with the smooth-density prediction `x rho(u)`.
#[derive(Debug, Clone, Serialize)]
pub struct PsiReport {
    pub x: u64,
    pub y: u64,
    pub count: u64,
    /// `x rho(ln x / ln y)`, when a table covering `u` was supplied.
    pub prediction: Option<f64>,
    /// `count / prediction`.
    pub ratio: Option<f64>,
}

/// Counts and, when `rho` is given and covers `u = ln x / ln y`, compares
/// against the density prediction.
pub fn psi_report(x: u64, y: u64, cfg: &SieveConfig, rho: Option<&RhoTable>) -> Result<PsiReport> {
    let count = psi(x, y, cfg)?;
    let prediction = smooth_prediction(x as f64, x as f64, y as f64, rho);
    let ratio = prediction.map(|p| count as f64 / p);
    Ok(PsiReport {
        x,
        y,
        count,
        prediction,
        ratio,
    })
}

/// Density prediction `len * rho(ln x / ln y)` for a window near `x`, if
/// the table covers `u`.
fn smooth_prediction(len: f64, x: f64, y: f64, rho: Option<&RhoTable>) -> Option<f64> {
    let rho = rho?;
    if y < 2.0 {
        return None;
    }
    let u = x.ln() / y.ln();
    match rho.rho(u) {
        Ok(r) => Some(len * r),
        Err(_) => None,
    }
}

/// Smooth count in a short window `(x, x + h]`.
#[derive(Debug, Clone, Serialize)]
pub struct IntervalReport {
    pub x: u64,
    pub h: u64,
    pub y: u64,
    pub count: u64,
    /// `h rho(ln x / ln y)`, when available.
    pub prediction: Option<f64>,
}

/// Counts `y`-smooth integers in `(x, x + h]`.
pub fn psi_interval(
    x: u64,
    h: u64,
    y: u64,
    cfg: &SieveConfig,
    rho: Option<&RhoTable>,
) -> Result<IntervalReport> {
    if y < 1 {
        return Err(Error::Domain("psi_interval: y must be >= 1".into()));
    }
    if h < 1 {
        return Err(Error::Domain("psi_interval: h must be >= 1".into()));
    }
    let hi = x
        .checked_add(h)
        .ok_or_else(|| Error::Overflow(format!("psi_interval: x + h overflows ({x} + {h})")))?;
    cfg.check_window(x + 1, hi, "psi_interval")?;
    let counts = map_segments(x + 1, hi, cfg, |_, gpf| {
        gpf.iter().filter(|&&g| g <= y).count() as u64
    });
    Ok(IntervalReport {
        x,
        h,
        y,
        count: counts.iter().sum(),
        prediction: smooth_prediction(h as f64, x as f64, y as f64, rho),
    })
}

/// Count of `n` in `(x, 2x]` with both `n` and `a n + b` smooth.
#[derive(Debug, Clone, Serialize)]
pub struct PairwiseReport {
    pub x: u64,
    pub y: u64,
    pub a: u64,
    pub b: i64,
    pub count: u64,
    /// `ln(count / x) / ln rho(u)`: the empirical analogue of the exponent
    /// in the independence heuristic `count ~ x rho(u)^2`. `None` when the
    /// count is zero or no covering table was supplied.
    pub sampled_exponent: Option<f64>,
}

/// Counts `n` in `(x, 2x]` such that `n` and the image `a n + b` are both
/// `y`-smooth. Images below `1` never count as smooth.
pub fn pairwise_smooth_count(
    x: u64,
    y: u64,
    a: u64,
    b: i64,
    cfg: &SieveConfig,
    rho: Option<&RhoTable>,
) -> Result<PairwiseReport> {
    if y < 1 {
        return Err(Error::Domain("pairwise: y must be >= 1".into()));
    }
    if a < 1 {
        return Err(Error::Domain("pairwise: a must be >= 1".into()));
    }
    if x < 1 {
        return Err(Error::Domain("pairwise: x must be >= 1".into()));
    }
    let two_x = x
        .checked_mul(2)
        .ok_or_else(|| Error::Overflow("pairwise: 2x overflows".into()))?;
    cfg.check_window(x + 1, two_x, "pairwise source window")?;

    // Image window [a(x+1) + b, 2ax + b], clipped below at 1.
    let image_at = |n: u64| -> Result<i64> {
        let an = a
            .checked_mul(n)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or_else(|| Error::Overflow(format!("pairwise: a * {n} overflows")))?;
        an.checked_add(b)
            .ok_or_else(|| Error::Overflow(format!("pairwise: a * {n} + b overflows")))
    };
    let img_lo_raw = image_at(x + 1)?;
    let img_hi_raw = image_at(two_x)?;
    let img_lo = img_lo_raw.max(1) as u64;
    let img_hi = img_hi_raw.max(1) as u64;
    if img_hi_raw >= 1 {
        cfg.check_window(img_lo, img_hi, "pairwise image window")?;
    }

    let source: Vec<bool> = map_segments(x + 1, two_x, cfg, |_, gpf| {
        gpf.iter().map(|&g| g <= y).collect::<Vec<bool>>()
    })
    .concat();
    let image: Vec<bool> = if img_hi_raw >= 1 {
        map_segments(img_lo, img_hi, cfg, |_, gpf| {
            gpf.iter().map(|&g| g <= y).collect::<Vec<bool>>()
        })
        .concat()
    } else {
        Vec::new()
    };

    let mut count = 0u64;
    for n in (x + 1)..=two_x {
        if !source[(n - x - 1) as usize] {
            continue;
        }
        let t = image_at(n)?;
        if t < 1 {
            continue;
        }
        if image[(t as u64 - img_lo) as usize] {
            count += 1;
        }
    }

    let sampled_exponent = match (count, rho) {
        (0, _) | (_, None) => None,
        (c, Some(table)) => {
            if y >= 2 {
                let u = (x as f64).ln() / (y as f64).ln();
                table
                    .rho_log(u)
                    .ok()
                    .map(|lr| (c as f64 / x as f64).ln() / lr)
            } else {
                None
            }
        }
    };
    Ok(PairwiseReport {
        x,
        y,
        a,
        b,
        count,
        sampled_exponent,
    })
}

/// The `y`-smooth integers in an inclusive range.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothSet {
    pub lo: u64,
    pub hi: u64,
    pub y: u64,
    /// Ascending members. Empty iff `hi < lo` or no member exists.
    pub members: Vec<u64>,
}

impl SmoothSet {
    /// Binary-search membership test.
    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

/// Enumerates the `y`-smooth integers in `[lo, hi]`.
pub fn smooth_set(lo: u64, hi: u64, y: u64, cfg: &SieveConfig) -> Result<SmoothSet> {
    if y < 1 {
        return Err(Error::Domain("smooth_set: y must be >= 1".into()));
    }
    if hi < lo {
        return Ok(SmoothSet {
            lo,
            hi,
            y,
            members: Vec::new(),
        });
    }
    cfg.check_window(lo, hi, "smooth_set")?;
    let members = map_segments(lo, hi, cfg, |seg_lo, gpf| {
        gpf.iter()
            .enumerate()
            .filter(|(_, &g)| g <= y)
            .map(|(i, _)| seg_lo + i as u64)
            .collect::<Vec<u64>>()
    })
    .concat();
    Ok(SmoothSet { lo, hi, y, members })
}

/// Materializes the smooth cofactor window a parameter set prescribes:
/// `S(y)` intersected with `[X / (2^{J+5} P1 P2 P3^J), 8X / (P1 P2 P3^J)]`.
///
/// Endpoints are computed in log space, then snapped to the nearest integer
/// when within `1e-9` relative distance (the endpoints are ratios of exact
/// quantities, so near-integers are integers blurred by round-off). An
/// upper endpoint below `1` yields an empty set; endpoints beyond 2^52
/// error with [`Error::Capacity`] since the integer window would be
/// ambiguous in doubles.
pub fn enumerate_m(p: &ParamSet, cfg: &SieveConfig) -> Result<SmoothSet> {
    let y = p.y.floor() as u64;
    let ln_denom = p.p1.ln() + p.p2.ln() + p.j as f64 * p.p3.ln();
    let ln_x = p.x.ln();
    let ln_lo = ln_x - (p.j as f64 + 5.0) * std::f64::consts::LN_2 - ln_denom;
    let ln_hi = ln_x + 3.0 * std::f64::consts::LN_2 - ln_denom;
    if !ln_hi.is_finite() || !ln_lo.is_finite() {
        return Err(Error::Capacity(format!(
            "enumerate_m: window endpoints are not finite (ln bounds {ln_lo}, {ln_hi})"
        )));
    }
    if ln_hi < 0.0 {
        return Ok(SmoothSet {
            lo: 1,
            hi: 0,
            y,
            members: Vec::new(),
        });
    }
    if ln_hi > 36.0 {
        return Err(Error::Capacity(format!(
            "enumerate_m: upper endpoint exp({ln_hi:.3}) exceeds the exact-integer range"
        )));
    }
    let snap = |v: f64| -> f64 {
        let r = v.round();
        if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
            r
        } else {
            v
        }
    };
    let lo = snap(ln_lo.exp()).ceil().max(1.0) as u64;
    let hi = snap(ln_hi.exp()).floor() as u64;
    if hi < lo {
        return Ok(SmoothSet {
            lo: 1,
            hi: 0,
            y,
            members: Vec::new(),
        });
    }
    smooth_set(lo, hi, y, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamSet;

    fn cfg() -> SieveConfig {
        SieveConfig::default()
    }

    #[test]
    fn isqrt_exact() {
        for n in [0u64, 1, 2, 3, 4, 8, 9, 15, 16, 1 << 40, (1 << 40) + 1] {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "isqrt({n}) = {r}");
        }
    }

    #[test]
    fn base_primes_small() {
        assert_eq!(base_primes(1), Vec::<u64>::new());
        assert_eq!(base_primes(13), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(base_primes(30).len(), 10);
    }

    #[test]
    fn primes_in_dyadic() {
        assert_eq!(primes_in(2.0, 4.0).unwrap(), vec![3]);
        assert_eq!(primes_in(4.0, 8.0).unwrap(), vec![5, 7]);
        assert_eq!(primes_in(8.0, 16.0).unwrap(), vec![11, 13]);
        assert_eq!(primes_in(2.5, 3.0).unwrap(), vec![3]);
    }

    #[test]
    fn gpf_spot_values() {
        let t = GpfTable::build(1, 100, &cfg()).unwrap();
        for (n, g) in [(1, 1), (2, 2), (12, 3), (16, 2), (30, 5), (97, 97), (100, 5)] {
            assert_eq!(t.gpf(n).unwrap(), g, "gpf({n})");
        }
        assert!(t.is_smooth(30, 5).unwrap());
        assert!(!t.is_smooth(30, 4).unwrap());
        assert!(matches!(t.gpf(101), Err(Error::Range(_))));
    }

    /// Frozen counts from an independent brute-force implementation.
    #[test]
    fn psi_reference_counts() {
        let c = cfg();
        assert_eq!(psi(100, 5, &c).unwrap(), 34);
        assert_eq!(psi(16, 2, &c).unwrap(), 5);
        assert_eq!(psi(1_000, 10, &c).unwrap(), 141);
        assert_eq!(psi(10_000, 100, &c).unwrap(), 3716);
        assert_eq!(psi(5_000, 20, &c).unwrap(), 818);
        assert_eq!(psi(5_000, 40, &c).unwrap(), 1294);
        // Degenerate edges: only n = 1 is 1-smooth.
        assert_eq!(psi(1_000, 1, &c).unwrap(), 1);
        assert_eq!(psi(1, 100, &c).unwrap(), 1);
    }

    #[test]
    fn psi_million_matches_density() {
        let c = cfg();
        assert_eq!(psi(1_000_000, 1_000, &c).unwrap(), 344_299);
        let rho = RhoTable::build(10.0, 32, 1e-12).unwrap();
        let rep = psi_report(1_000_000, 1_000, &c, Some(&rho)).unwrap();
        // u = 2: prediction x * (1 - ln 2).
        let pred = rep.prediction.unwrap();
        assert!((pred - 1e6 * (1.0 - std::f64::consts::LN_2)).abs() < 1e-3);
        let ratio = rep.ratio.unwrap();
        assert!((ratio - 1.0).abs() < 0.2, "ratio = {ratio}");
    }

    #[test]
    fn segmented_equals_monolithic() {
        let tiny = SieveConfig {
            segment_len: 1024,
            max_window: 1 << 28,
        };
        let big = SieveConfig {
            segment_len: 1 << 20,
            max_window: 1 << 28,
        };
        assert_eq!(psi(65_536, 7, &tiny).unwrap(), psi(65_536, 7, &big).unwrap());
        let a = smooth_set(2, 65_536, 7, &tiny).unwrap();
        let b = smooth_set(2, 65_536, 7, &big).unwrap();
        assert_eq!(a.members, b.members);
    }

    #[test]
    fn interval_counts() {
        let c = cfg();
        // (96, 104]: 5-smooth members are 96 excluded; 100 = 2^2 5^2,
        // 97..104: 100 and 98 = 2 7^2 no, 104 = 8*13 no... exactly {100}.
        let r = psi_interval(96, 8, 5, &c, None).unwrap();
        assert_eq!(r.count, 1);
        // Whole-range consistency: (0, x] equals psi.
        let r2 = psi_interval(0, 1_000, 10, &c, None).unwrap();
        assert_eq!(r2.count, 141);
        assert!(matches!(
            psi_interval(10, 0, 5, &c, None),
            Err(Error::Domain(_))
        ));
    }

    /// Frozen from brute force: (x, y, a, b) -> count.
    #[test]
    fn pairwise_reference_counts() {
        let c = cfg();
        let cases: &[(u64, u64, u64, i64, u64)] = &[
            (10, 3, 1, 1, 0),
            (2, 2, 1, 2, 0),
            (2, 3, 1, 1, 1),
            (100, 7, 2, 3, 1),
            (1_000, 11, 1, 1, 0),
        ];
        for &(x, y, a, b, expect) in cases {
            let r = pairwise_smooth_count(x, y, a, b, &c, None).unwrap();
            assert_eq!(r.count, expect, "pairwise({x}, {y}, {a}, {b})");
        }
        // Negative offsets clip below 1 rather than crash.
        let r = pairwise_smooth_count(4, 3, 1, -20, &c, None).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn smooth_set_reference_members() {
        let c = cfg();
        let s = smooth_set(4, 40, 5, &c).unwrap();
        assert_eq!(
            s.members,
            vec![4, 5, 6, 8, 9, 10, 12, 15, 16, 18, 20, 24, 25, 27, 30, 32, 36, 40]
        );
        assert!(s.contains(27));
        assert!(!s.contains(7));
    }

    #[test]
    fn smooth_sets_nest_in_y() {
        let c = cfg();
        let s5 = smooth_set(1, 5_000, 5, &c).unwrap();
        let s11 = smooth_set(1, 5_000, 11, &c).unwrap();
        assert!(s5.members.iter().all(|n| s11.contains(*n)));
        assert!(s5.members.len() < s11.members.len());
    }

    #[test]
    fn capacity_guards() {
        let c = cfg();
        assert!(matches!(psi(1 << 30, 5, &c), Err(Error::Capacity(_))));
        assert!(matches!(
            smooth_set(1, 1 << 50, 5, &c),
            Err(Error::Capacity(_))
        ));
        let bad = SieveConfig {
            segment_len: 16,
            max_window: 1 << 28,
        };
        assert!(matches!(psi(100, 5, &bad), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn enumerate_m_window() {
        let rho = RhoTable::build(10.0, 32, 1e-12).unwrap();
        let c = cfg();
        // J = 0, P1 = 2, P2 = 2: window [40/128, 80] -> [1, 80] in S(5).
        let p = ParamSet::toy(40.0, 5.0, 0.1, 0.05, 2.0, 0.05, 0, 2.0, 2.0, 2.5, &rho).unwrap();
        let m = enumerate_m(&p, &c).unwrap();
        assert_eq!(m.lo, 1);
        assert_eq!(m.hi, 80);
        assert_eq!(m.members.len(), 30);
        assert!(m.contains(1) && m.contains(80));
        assert!(!m.contains(7));

        // A huge J pushes the window below 1: empty set, not an error.
        let p2 =
            ParamSet::toy(40.0, 5.0, 0.1, 0.05, 2.0, 0.05, 40, 2.0, 2.0, 2.5, &rho).unwrap();
        let m2 = enumerate_m(&p2, &c).unwrap();
        assert!(m2.members.is_empty());
    }
}
