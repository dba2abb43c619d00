//! Window-discrepancy identity: the variance of short-window averages
//! of the weights against the spectral mass of their Dirichlet series.
//!
//! For a weight window `w` with base scale `X`, the left-hand side is
//! the sampled mean over `x in [X, 2X]` of
//! `|S_{h1}(x)/h1 - S_{h2}(x)/h2|^2`, where `S_h(x)` sums the weights
//! over `[x, x+h]`. The right-hand side has three terms: a low-frequency
//! truncation floor `(J max w)^2 / T0`, the spectral mass
//! `int_{T0}^{X/h1} |G(1+it)|^2 dt`, and the worst dyadic tail
//! `max_T (X/(T h1)) int_T^{2T} |G(1+it)|^2 dt`.

use crate::dpoly::grid::mean_value_at;
use crate::dpoly::pairwise_sum;
use crate::dpoly::poly::DirichletPoly;
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::weights::WeightWindow;
use std::collections::BTreeMap;

/// Relative quadrature tolerance for the spectral terms.
const QUAD_TOL: f64 = 1e-6;

/// Dyadic tail levels probed for the third right-hand term.
const TAIL_LEVELS: u32 = 6;

/// Inclusive weighted count over `[a, b]` via prefix sums.
struct PrefixWindow {
    ns: Vec<u64>,
    prefix: Vec<f64>,
}

impl PrefixWindow {
    fn new(w: &WeightWindow) -> Self {
        let mut ns = Vec::with_capacity(w.entries.len());
        let mut prefix = Vec::with_capacity(w.entries.len() + 1);
        prefix.push(0.0);
        for (&n, &c) in &w.entries {
            ns.push(n);
            prefix.push(prefix.last().unwrap() + c as f64);
        }
        PrefixWindow { ns, prefix }
    }

    fn sum(&self, a: u64, b: u64) -> f64 {
        if a > b {
            return 0.0;
        }
        let lo = self.ns.partition_point(|&n| n < a);
        let hi = self.ns.partition_point(|&n| n <= b);
        self.prefix[hi] - self.prefix[lo]
    }
}

/// Measures the short-window discrepancy of a weight window against its
/// spectral envelope. `h1 <= h2` are the two window lengths, `t0` the
/// low-frequency cutoff, and `nx` the number of midpoint samples used
/// for the left-hand average. The window must cover `[X, 2X + h2]`.
/// Report-only: the implicit constant is not asserted.
pub fn parseval_discrepancy(
    w: &WeightWindow,
    h1: u64,
    h2: u64,
    t0: f64,
    nx: usize,
) -> Result<CheckReport> {
    let x = w.provenance.x;
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::Domain(format!("t0 must be positive, got {t0}")));
    }
    if h1 < 2 || h1 > h2 {
        return Err(Error::Domain(format!(
            "window lengths must satisfy 2 <= h1 <= h2, got {h1}, {h2}"
        )));
    }
    if (h2 as f64) > x / t0.powi(3) {
        return Err(Error::Domain(format!(
            "h2 = {h2} exceeds X / t0^3 = {}",
            x / t0.powi(3)
        )));
    }
    if nx == 0 {
        return Err(Error::Domain("need at least one sample point".into()));
    }
    let needed_hi = 2.0 * x + h2 as f64;
    if (w.lo as f64) > x || (w.hi as f64) < needed_hi {
        return Err(Error::Range(format!(
            "window [{}, {}] does not cover [{x}, {needed_hi}]",
            w.lo, w.hi
        )));
    }

    let prefix = PrefixWindow::new(w);
    let h1f = h1 as f64;
    let h2f = h2 as f64;
    let mut sq = Vec::with_capacity(nx);
    for i in 0..nx {
        let xi = x + (i as f64 + 0.5) * x / nx as f64;
        let a = xi.ceil() as u64;
        let s1 = prefix.sum(a, (xi + h1f).floor() as u64) / h1f;
        let s2 = prefix.sum(a, (xi + h2f).floor() as u64) / h2f;
        let d = s1 - s2;
        sq.push(d * d);
    }
    let lhs = pairwise_sum(&sq) / nx as f64;

    let g = DirichletPoly::from_weights(w);
    let max_w = w.entries.values().copied().max().unwrap_or(0) as f64;
    let j = w.provenance.j as f64;
    let term_floor = (j * max_w).powi(2) / t0;

    let t_hi = x / h1f;
    let term_bulk = if t0 < t_hi {
        mean_value_at(&g, 1.0, t0, t_hi, QUAD_TOL)?
    } else {
        0.0
    };

    let mut term_tail = 0.0f64;
    for k in 0..TAIL_LEVELS {
        let t_k = t_hi * 2f64.powi(k as i32);
        let mass = mean_value_at(&g, 1.0, t_k, 2.0 * t_k, QUAD_TOL)?;
        let scaled = (x / (t_k * h1f)) * mass;
        if scaled > term_tail {
            term_tail = scaled;
        }
    }

    let rhs_terms = vec![term_floor, term_bulk, term_tail];
    let rhs: f64 = rhs_terms.iter().sum();
    let ratio = if lhs == 0.0 && rhs == 0.0 { 0.0 } else { lhs / rhs };
    let mut flags = BTreeMap::new();
    flags.insert("x-at-least-2t0-cubed".into(), x >= 2.0 * t0.powi(3));
    Ok(CheckReport {
        lemma: "window-discrepancy".into(),
        lhs,
        rhs_terms,
        ratio,
        asserted: false,
        pass: ratio.is_finite(),
        flags,
    })
}
