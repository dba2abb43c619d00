//! Empirical short-interval study: how often `[x, x+h]` contains a
//! smooth number, the exact gap structure of the smooth sequence, and
//! measured interval-length thresholds against the analytic formulas.
//!
//! Everything is exact in exhaustive mode. Sampled mode draws one point
//! per equal-width stratum of `[X, 2X]` with the counter-based
//! generator, so results are reproducible for a given seed at any
//! thread count and the sample never repeats a point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params;
use crate::prng;
use crate::smooth::{smooth_set, GpfTable, SieveConfig};

/// Cap on retained exception exemplars in a scan report.
const MAX_EXEMPLARS: usize = 100;

/// How the scan picks its base points from `[X, 2X]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScanMode {
    /// Every integer in `[X, 2X]`.
    Exhaustive,
    /// `n` stratified points, one uniform draw per stratum.
    Sampled { n: u64, seed: u64 },
}

/// Outcome of a short-interval existence scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub x: u64,
    pub y: u64,
    pub h: u64,
    pub sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Number of base points examined.
    pub scanned: u64,
    /// Base points whose interval holds no smooth number.
    pub exceptions: u64,
    /// `1 - exceptions / scanned`.
    pub fraction: f64,
    /// Up to 100 smallest exceptional base points, ascending.
    pub exemplars: Vec<u64>,
}

/// Exact consecutive-gap statistics of the smooth sequence in a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub lo: u64,
    pub hi: u64,
    pub y: u64,
    /// Smooth members found in the window.
    pub members: u64,
    /// Largest gap between consecutive members (0 when degenerate).
    pub max_gap: u64,
    /// Left endpoint of the first maximal gap.
    pub argmax: Option<u64>,
    /// gap length -> count; sums to `members - 1` when not degenerate.
    pub histogram: BTreeMap<u64, u64>,
    /// Fewer than two members: no gap exists.
    pub degenerate: bool,
}

/// Result of the minimal-interval-length search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub x: u64,
    pub y: u64,
    pub target: f64,
    /// Minimal `h` whose scan fraction reaches the target, or the cap.
    pub h_star: u64,
    /// The target was not reached at `h = x`; `h_star` holds the cap.
    pub capped: bool,
    /// Scan fraction measured at `h_star`.
    pub fraction_at_h: f64,
    pub sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One row of the measured-versus-formula comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryRow {
    pub y: u64,
    pub h_star: u64,
    pub capped: bool,
    /// Formula interval length for the almost-all guarantee.
    pub theory_h: f64,
    pub log_theory_h: f64,
    /// `h_star / theory_h` (0 when the formula overflows).
    pub ratio: f64,
    /// The formula value exceeds the window length, so it asserts
    /// nothing at this scale.
    pub vacuous: bool,
}

/// Measured thresholds against the analytic formula across a `y` list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryComparison {
    pub x: u64,
    pub epsilon: f64,
    pub target: f64,
    /// Rows ascending in `y`.
    pub rows: Vec<TheoryRow>,
    /// Whether the measured threshold never increases as `y` grows.
    pub empirical_nonincreasing: bool,
}

fn check_scan_inputs(x: u64, y: u64) -> Result<()> {
    if x < 2 {
        return Err(Error::Domain(format!("x must be at least 2, got {x}")));
    }
    if y < 2 {
        return Err(Error::Domain(format!("y must be at least 2, got {y}")));
    }
    Ok(())
}

/// Ascending stratified sample of `n` points from `[x, 2x]`: the range
/// splits into `n` near-equal strata and each contributes one uniform
/// draw. Falls back to the full range when `n` covers it.
fn sample_points(x: u64, n: u64, seed: u64) -> Vec<u64> {
    let pop = x + 1;
    if n >= pop {
        return (x..=2 * x).collect();
    }
    let mut pts = Vec::with_capacity(n as usize);
    for k in 0..n {
        let lo = (k as u128 * pop as u128 / n as u128) as u64;
        let hi = ((k + 1) as u128 * pop as u128 / n as u128) as u64;
        pts.push(x + lo + prng::below(seed, k, hi - lo));
    }
    pts
}

/// Two-pointer pass: counts ascending base points whose `[x, x+h]`
/// window misses `members`, keeping the first exemplars.
fn count_exceptions<I>(points: I, members: &[u64], h: u64) -> (u64, u64, Vec<u64>)
where
    I: IntoIterator<Item = u64>,
{
    let mut ptr = 0usize;
    let mut scanned = 0u64;
    let mut exceptions = 0u64;
    let mut exemplars = Vec::new();
    for p in points {
        scanned += 1;
        while ptr < members.len() && members[ptr] < p {
            ptr += 1;
        }
        let hit = ptr < members.len() && members[ptr] - p <= h;
        if !hit {
            exceptions += 1;
            if exemplars.len() < MAX_EXEMPLARS {
                exemplars.push(p);
            }
        }
    }
    (scanned, exceptions, exemplars)
}

/// Measures the share of base points `x' in [x, 2x]` whose interval
/// `[x', x'+h]` contains a `y`-smooth number. Exhaustive mode is exact.
pub fn scan_almost_all(
    x: u64,
    y: u64,
    h: u64,
    mode: ScanMode,
    cfg: &SieveConfig,
) -> Result<ScanReport> {
    check_scan_inputs(x, y)?;
    let hi = x
        .checked_mul(2)
        .and_then(|v| v.checked_add(h))
        .ok_or_else(|| Error::Overflow(format!("window end 2*{x}+{h} overflows")))?;
    let set = smooth_set(x, hi, y, cfg)?;
    let (scanned, exceptions, exemplars, sampled, sample_size, seed) = match mode {
        ScanMode::Exhaustive => {
            let (s, e, ex) = count_exceptions(x..=2 * x, &set.members, h);
            (s, e, ex, false, None, None)
        }
        ScanMode::Sampled { n, seed } => {
            if n == 0 {
                return Err(Error::Domain("sample size must be positive".into()));
            }
            let pts = sample_points(x, n, seed);
            let (s, e, ex) = count_exceptions(pts, &set.members, h);
            (s, e, ex, true, Some(n.min(x + 1)), Some(seed))
        }
    };
    Ok(ScanReport {
        x,
        y,
        h,
        sampled,
        sample_size,
        seed,
        scanned,
        exceptions,
        fraction: 1.0 - exceptions as f64 / scanned as f64,
        exemplars,
    })
}

/// Exact maximal gap between consecutive `y`-smooth numbers in
/// `[lo, hi]`, streamed one sieve segment at a time; only the previous
/// member is carried across segments.
pub fn max_gap(lo: u64, hi: u64, y: u64, cfg: &SieveConfig) -> Result<GapReport> {
    if lo < 1 || hi < lo {
        return Err(Error::Domain(format!(
            "need 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if y < 1 {
        return Err(Error::Domain(format!("y must be at least 1, got {y}")));
    }
    let mut prev: Option<u64> = None;
    let mut members = 0u64;
    let mut best = 0u64;
    let mut argmax = None;
    let mut histogram = BTreeMap::new();
    let mut seg_lo = lo;
    while seg_lo <= hi {
        let seg_hi = hi.min(seg_lo + cfg.segment_len as u64 - 1);
        let table = GpfTable::build(seg_lo, seg_hi, cfg)?;
        for n in seg_lo..=seg_hi {
            if table.gpf(n)? <= y {
                members += 1;
                if let Some(p) = prev {
                    let gap = n - p;
                    *histogram.entry(gap).or_insert(0) += 1;
                    if gap > best {
                        best = gap;
                        argmax = Some(p);
                    }
                }
                prev = Some(n);
            }
        }
        seg_lo = seg_hi + 1;
    }
    Ok(GapReport {
        lo,
        hi,
        y,
        members,
        max_gap: best,
        argmax,
        histogram,
        degenerate: members < 2,
    })
}

/// Binary-searches the minimal `h <= x` whose scan fraction reaches
/// `target`; the scan fraction is nondecreasing in `h`, and sampled
/// mode reuses one fixed point set across the search, so the search is
/// valid in both modes.
pub fn empirical_threshold(
    x: u64,
    y: u64,
    target: f64,
    mode: ScanMode,
    cfg: &SieveConfig,
) -> Result<ThresholdReport> {
    check_scan_inputs(x, y)?;
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::Domain(format!(
            "target fraction must lie in (0, 1], got {target}"
        )));
    }
    let cap = x;
    let hi = x
        .checked_mul(2)
        .and_then(|v| v.checked_add(cap))
        .ok_or_else(|| Error::Overflow(format!("window end 3*{x} overflows")))?;
    let set = smooth_set(x, hi, y, cfg)?;
    let (points, sampled, sample_size, seed): (Option<Vec<u64>>, bool, Option<u64>, Option<u64>) =
        match mode {
            ScanMode::Exhaustive => (None, false, None, None),
            ScanMode::Sampled { n, seed } => {
                if n == 0 {
                    return Err(Error::Domain("sample size must be positive".into()));
                }
                (
                    Some(sample_points(x, n, seed)),
                    true,
                    Some(n.min(x + 1)),
                    Some(seed),
                )
            }
        };
    let eval = |h: u64| -> f64 {
        let (scanned, exceptions, _) = match &points {
            Some(pts) => count_exceptions(pts.iter().copied(), &set.members, h),
            None => count_exceptions(x..=2 * x, &set.members, h),
        };
        1.0 - exceptions as f64 / scanned as f64
    };
    let at_cap = eval(cap);
    if at_cap < target {
        return Ok(ThresholdReport {
            x,
            y,
            target,
            h_star: cap,
            capped: true,
            fraction_at_h: at_cap,
            sampled,
            sample_size,
            seed,
        });
    }
    let (mut lo_h, mut hi_h) = (0u64, cap);
    while lo_h < hi_h {
        let mid = lo_h + (hi_h - lo_h) / 2;
        if eval(mid) >= target {
            hi_h = mid;
        } else {
            lo_h = mid + 1;
        }
    }
    Ok(ThresholdReport {
        x,
        y,
        target,
        h_star: lo_h,
        capped: false,
        fraction_at_h: eval(lo_h),
        sampled,
        sample_size,
        seed,
    })
}

/// Runs the threshold search across a `y` list and sets the measured
/// values against the almost-all formula length.
pub fn compare_with_theory(
    x: u64,
    y_list: &[u64],
    epsilon: f64,
    target: f64,
    mode: ScanMode,
    cfg: &SieveConfig,
) -> Result<TheoryComparison> {
    if y_list.is_empty() {
        return Err(Error::Domain("need at least one y value".into()));
    }
    let mut ys: Vec<u64> = y_list.to_vec();
    ys.sort_unstable();
    ys.dedup();
    let mut rows = Vec::with_capacity(ys.len());
    for &y in &ys {
        let t = empirical_threshold(x, y, target, mode, cfg)?;
        let log_theory_h = params::log_threshold_h_almost_all(x as f64, y as f64, epsilon)?;
        let theory_h = log_theory_h.exp();
        let ratio = if theory_h.is_finite() && theory_h > 0.0 {
            t.h_star as f64 / theory_h
        } else {
            0.0
        };
        rows.push(TheoryRow {
            y,
            h_star: t.h_star,
            capped: t.capped,
            theory_h,
            log_theory_h,
            ratio,
            vacuous: !(theory_h <= x as f64),
        });
    }
    let empirical_nonincreasing = rows.windows(2).all(|w| w[1].h_star <= w[0].h_star);
    Ok(TheoryComparison {
        x,
        epsilon,
        target,
        rows,
        empirical_nonincreasing,
    })
}
