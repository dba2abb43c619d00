//! The end-to-end acceptance suite: ten numbered criteria binding every
//! module to closed forms, brute-force oracles, and frozen reference
//! values.
//!
//! Each criterion is a pure function of its inputs (and, where it draws
//! anything, of the run seed), so the whole suite is reproducible: the
//! final criterion reruns the other nine on thread pools of different
//! sizes and demands byte-identical reports.
//!
//! [`run_all`] executes the numbered criteria in order and never panics
//! on a failure; a criterion that fails (or errors) is recorded with the
//! failure text in its [`CriterionResult::details`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::dickman::RhoTable;
use crate::dpoly::{
    halasz_montgomery_check, improved_mvt_check, large_values_check, mean_value_at, moment_check,
    mvt_check, parseval_discrepancy, partition_regions, pointwise_bound_check,
    region_contributions, DirichletPoly, TGrid, WellSpacedSet, DEFAULT_C_CHECK,
};
use crate::error::{Error, Result};
use crate::mellin::{eta_mellin, eta_mellin_by_quadrature, mellin_inversion_check, SmoothingParams};
use crate::params::ParamSet;
use crate::prng;
use crate::scanner::{self, ScanMode};
use crate::smooth::{psi, smooth_set, GpfTable, SieveConfig};
use crate::weights;

/// Seed used when the caller has no preference.
pub const DEFAULT_SEED: u64 = 1729;

/// Number of criteria in the suite.
pub const N_CRITERIA: usize = 10;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    /// 1-based criterion number.
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    /// Measured quantities on success, the failure text otherwise.
    pub details: Vec<String>,
    /// Wall time; excluded from [`AcceptanceReport::canonical`].
    pub runtime_ms: u128,
}

/// Results of a full or partial suite run.
#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
    pub all_passed: bool,
}

impl AcceptanceReport {
    /// Timing-free JSON rendering. Two runs with the same seed must
    /// produce identical bytes regardless of thread count; the
    /// reproducibility criterion compares exactly this string.
    pub fn canonical(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "index": r.index,
                    "name": r.name,
                    "passed": r.passed,
                    "details": r.details,
                })
            })
            .collect();
        serde_json::json!({
            "seed": self.seed,
            "all_passed": self.all_passed,
            "criteria": rows,
        })
        .to_string()
    }

    /// One line per criterion plus an overall verdict, with timings.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            writeln!(
                out,
                "criterion {:>2}  {:<24} {}  [{} ms]",
                r.index,
                r.name,
                if r.passed { "PASS" } else { "FAIL" },
                r.runtime_ms
            )
            .unwrap();
            for d in &r.details {
                writeln!(out, "    {d}").unwrap();
            }
        }
        writeln!(
            out,
            "overall: {}",
            if self.all_passed { "PASS" } else { "FAIL" }
        )
        .unwrap();
        out
    }
}

pub fn criterion_name(index: usize) -> &'static str {
    match index {
        1 => "dickman-closed-form",
        2 => "sieve-exactness",
        3 => "smooth-density-ratio",
        4 => "weight-factorization",
        5 => "mean-value-quadrature",
        6 => "inequality-batteries",
        7 => "smoothing-transform",
        8 => "scan-monotonicity",
        9 => "threshold-trend",
        10 => "reproducibility",
        _ => "unknown",
    }
}

/// Runs one criterion; failures are captured, not propagated.
pub fn run_criterion(index: usize, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = match index {
        1 => dickman_closed_form(),
        2 => sieve_exactness(criterion_seed(seed, 2)),
        3 => smooth_density_ratio(),
        4 => weight_factorization(),
        5 => mean_value_quadrature(),
        6 => inequality_batteries(criterion_seed(seed, 6)),
        7 => smoothing_transform(),
        8 => scan_monotonicity(),
        9 => threshold_trend(),
        10 => reproducibility(seed),
        _ => Err(Error::InvalidInput(format!(
            "no criterion numbered {index}; valid numbers are 1..={N_CRITERIA}"
        ))),
    };
    let runtime_ms = start.elapsed().as_millis();
    match outcome {
        Ok(details) => CriterionResult {
            index,
            name: criterion_name(index),
            passed: true,
            details,
            runtime_ms,
        },
        Err(e) => CriterionResult {
            index,
            name: criterion_name(index),
            passed: false,
            details: vec![e.to_string()],
            runtime_ms,
        },
    }
}

/// Runs the full suite in order.
pub fn run_all(seed: u64) -> AcceptanceReport {
    run_indices(seed, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
}

fn run_indices(seed: u64, indices: &[usize]) -> AcceptanceReport {
    let results: Vec<CriterionResult> = indices.iter().map(|&i| run_criterion(i, seed)).collect();
    let all_passed = results.iter().all(|r| r.passed);
    AcceptanceReport {
        seed,
        results,
        all_passed,
    }
}

/// Per-criterion seed, so criteria draw from disjoint streams even
/// though they share the run seed.
fn criterion_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::AssertionFailed(msg()))
    }
}

/// Criterion 1: the table reproduces the closed form (1 on [0,1],
/// 1 - ln u on [1,2]) to 1e-10 at 1000 points, and the delay identity
/// u rho(u) = int_{u-1}^{u} rho holds to 1e-9 at 1000 points of [1, 30].
fn dickman_closed_form() -> Result<Vec<String>> {
    let table = RhoTable::build(31.0, 32, 1e-10)?;
    let mut worst_closed = 0.0f64;
    for i in 0..1000u32 {
        let u = 2.0 * f64::from(i) / 999.0;
        let closed = if u <= 1.0 { 1.0 } else { 1.0 - u.ln() };
        worst_closed = worst_closed.max((table.rho(u)? - closed).abs());
    }
    ensure(worst_closed <= 1e-10, || {
        format!("closed-form deviation {worst_closed:.3e} exceeds 1e-10")
    })?;
    let mut worst_delay = 0.0f64;
    for i in 0..1000u32 {
        let u = 1.0 + 29.0 * f64::from(i) / 999.0;
        worst_delay = worst_delay.max(table.delay_residual(u)?.abs());
    }
    ensure(worst_delay <= 1e-9, || {
        format!("delay-identity residual {worst_delay:.3e} exceeds 1e-9")
    })?;
    Ok(vec![
        format!("closed-form deviation on [0, 2]: {worst_closed:.3e} (limit 1e-10)"),
        format!("delay-identity residual on [1, 30]: {worst_delay:.3e} (limit 1e-9)"),
    ])
}

fn trial_division_gpf(n: u64) -> u64 {
    let mut rest = n;
    let mut largest = 1;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            largest = p;
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        largest = rest;
    }
    largest
}

/// Criterion 2: hand-countable Psi values, sieve vs trial division on
/// random n up to 1e8, and segment-size independence.
fn sieve_exactness(seed: u64) -> Result<Vec<String>> {
    let cfg = SieveConfig::default();
    let p100 = psi(100, 5, &cfg)?;
    ensure(p100 == 34, || format!("Psi(100, 5) = {p100}, expected 34"))?;
    let p16 = psi(16, 2, &cfg)?;
    ensure(p16 == 5, || format!("Psi(16, 2) = {p16}, expected 5"))?;

    let draws = 10_000u64;
    for i in 0..draws {
        let n = 2 + prng::below(seed, i, 99_999_999);
        let sieved = GpfTable::build(n, n, &cfg)?.gpf(n)?;
        let divided = trial_division_gpf(n);
        ensure(sieved == divided, || {
            format!("largest prime factor of {n}: sieve says {sieved}, trial division {divided}")
        })?;
    }

    let fine = SieveConfig {
        segment_len: 1024,
        max_window: cfg.max_window,
    };
    let coarse_count = psi(200_000, 50, &cfg)?;
    let fine_count = psi(200_000, 50, &fine)?;
    ensure(coarse_count == fine_count, || {
        format!("Psi(2e5, 50) depends on segmentation: {coarse_count} vs {fine_count}")
    })?;
    let a = smooth_set(10_000, 30_000, 13, &fine)?;
    let b = smooth_set(10_000, 30_000, 13, &cfg)?;
    ensure(a.members == b.members, || {
        "13-smooth enumeration differs between segment sizes".into()
    })?;

    Ok(vec![
        "Psi(100, 5) = 34 and Psi(16, 2) = 5".into(),
        format!("sieve matches trial division on {draws} random n in [2, 1e8]"),
        format!(
            "1024-wide and default segments agree on Psi(2e5, 50) = {coarse_count} \
             and on the 13-smooth set in [1e4, 3e4] ({} members)",
            a.members.len()
        ),
    ])
}

/// Criterion 3: the smooth count at u = 2 sits within 20% of the
/// density prediction x (1 - ln 2).
fn smooth_density_ratio() -> Result<Vec<String>> {
    let cfg = SieveConfig::default();
    let count = psi(1_000_000, 1_000, &cfg)?;
    let prediction = 1e6 * (1.0 - std::f64::consts::LN_2);
    let deviation = (count as f64 / prediction - 1.0).abs();
    ensure(deviation <= 0.2, || {
        format!("|Psi(1e6, 1e3) / (1e6 (1 - ln 2)) - 1| = {deviation:.4} exceeds 0.2")
    })?;
    Ok(vec![format!(
        "Psi(1e6, 1e3) = {count}; prediction {prediction:.1}; |ratio - 1| = {deviation:.4} (limit 0.2)"
    )])
}

/// Criterion 4: on toy parameter sets with J = 0, 1, 2 the sparse
/// polynomial product P1 P2 P3^J M has exactly the integer coefficients
/// of the ordered-factorization enumeration.
fn weight_factorization() -> Result<Vec<String>> {
    let rho = RhoTable::build(8.0, 32, 1e-10)?;
    let cfg = SieveConfig::default();
    let m = smooth_set(1, 40, 8, &cfg)?;
    let m_poly = DirichletPoly::from_members(&m.members)?;
    let mut details = Vec::new();
    for j in [0u64, 1, 2] {
        let p = ParamSet::toy(64.0, 8.0, 0.1, 0.01, 2.0, 0.05, j, 2.0, 3.0, 4.0, &rho)?;
        let w = weights::enumerate(&p, &m, 1, 1 << 30)?;
        let product = DirichletPoly::from_primes(2.0, 4.0)?
            .multiply(&DirichletPoly::from_primes(3.0, 6.0)?)?
            .multiply(&DirichletPoly::from_primes(4.0, 8.0)?.pow(j)?)?
            .multiply(&m_poly)?;
        ensure(product.len() == w.entries.len(), || {
            format!(
                "J = {j}: product support {} vs enumeration support {}",
                product.len(),
                w.entries.len()
            )
        })?;
        for (&n, &c) in product.ns().iter().zip(product.coeffs()) {
            let wn = w.weight(n);
            ensure(c == wn as f64, || {
                format!("J = {j}: coefficient at n = {n} is {c} in the product, {wn} enumerated")
            })?;
        }
        details.push(format!(
            "J = {j}: {} support points, integer coefficients identical",
            product.len()
        ));
    }
    Ok(details)
}

/// Criterion 5: the adaptive quadrature reproduces the one-term and
/// two-term closed forms to relative 1e-6 and is additive over a split
/// range to twice its tolerance.
fn mean_value_quadrature() -> Result<Vec<String>> {
    let single = DirichletPoly::new([(3u64, 0.7)])?;
    let t_single = 12.5;
    let got_single = mean_value_at(&single, 1.0, -t_single, t_single, 1e-9)?;
    let want_single = 2.0 * t_single * (0.7f64 / 3.0).powi(2);
    let rel_single = ((got_single - want_single) / want_single).abs();
    ensure(rel_single <= 1e-6, || {
        format!("one-term mean value off by relative {rel_single:.3e}")
    })?;

    let double = DirichletPoly::new([(2u64, 1.0), (3u64, 1.0)])?;
    let t_double = 3.7;
    let beat = 1.5f64.ln();
    let want_double =
        2.0 * t_double * (0.25 + 1.0 / 9.0) + (2.0 / 3.0) * (t_double * beat).sin() / beat;
    // Guard against drift in the constant itself; the reference was
    // evaluated independently in extended precision.
    ensure((want_double - 4.312331433704856).abs() <= 1e-12, || {
        format!("two-term closed form evaluates to {want_double}, expected 4.312331433704856")
    })?;
    let got_double = mean_value_at(&double, 1.0, -t_double, t_double, 1e-9)?;
    let rel_double = ((got_double - want_double) / want_double).abs();
    ensure(rel_double <= 1e-6, || {
        format!("two-term mean value off by relative {rel_double:.3e}")
    })?;

    let members = smooth_set(50, 120, 7, &SieveConfig::default())?;
    let poly = DirichletPoly::from_members(&members.members)?;
    let tol = 1e-8;
    let full = mean_value_at(&poly, 1.0, -8.0, 13.0, tol)?;
    let left = mean_value_at(&poly, 1.0, -8.0, 2.6, tol)?;
    let right = mean_value_at(&poly, 1.0, 2.6, 13.0, tol)?;
    let gap = (full - (left + right)).abs();
    let allowed = 2.0 * tol * full.abs().max(1.0);
    ensure(gap <= allowed, || {
        format!("split-range additivity off by {gap:.3e} (allowed {allowed:.3e})")
    })?;

    Ok(vec![
        format!("one-term closed form matched to relative {rel_single:.3e} (limit 1e-6)"),
        format!("two-term beat integral matched to relative {rel_double:.3e} (limit 1e-6)"),
        format!("split-range additivity gap {gap:.3e} (allowed {allowed:.3e})"),
    ])
}

/// Deterministic stream of draws for the battery polynomials.
struct Stream {
    seed: u64,
    ctr: u64,
}

impl Stream {
    fn new(seed: u64) -> Self {
        Stream { seed, ctr: 0 }
    }

    fn below(&mut self, bound: u64) -> u64 {
        let v = prng::below(self.seed, self.ctr, bound);
        self.ctr += 1;
        v
    }

    fn uniform(&mut self) -> f64 {
        let v = prng::uniform(self.seed, self.ctr);
        self.ctr += 1;
        v
    }
}

/// Sparse polynomial on a dyadic block (N, 2N], N in [16, 1e4], with 8
/// to 64 distinct support points (at most half the block) and
/// coefficients in (0, 1].
fn random_sparse(s: &mut Stream) -> Result<DirichletPoly> {
    let scale = 16 + s.below(9985);
    let m_max = 64.min(scale / 2);
    let m = (8 + s.below(m_max - 8 + 1)) as usize;
    let mut support = BTreeSet::new();
    while support.len() < m {
        support.insert(scale + 1 + s.below(scale));
    }
    DirichletPoly::new(support.into_iter().map(|n| (n, 1.0 - s.uniform())))
}

/// Criterion 6: the two asserted inequalities hold with the default
/// constant over a seeded battery (50 random polynomials, 20 well-spaced
/// sets), and the six report-only comparisons produce finite positive
/// ratios on fixed toy inputs.
fn inequality_batteries(seed: u64) -> Result<Vec<String>> {
    let mut st = Stream::new(seed);

    let mut worst_mvt = 0.0f64;
    for _ in 0..50 {
        let poly = random_sparse(&mut st)?;
        let span = 1e4f64.ln() - 4f64.ln();
        let t = (4f64.ln() + st.uniform() * span).exp();
        let rep = mvt_check(&poly, t, DEFAULT_C_CHECK)?;
        worst_mvt = worst_mvt.max(rep.ratio);
    }

    let mut worst_hm = 0.0f64;
    for _ in 0..20 {
        let g = random_sparse(&mut st)?;
        let k = (4 + st.below(13)) as usize;
        let mut ts = Vec::with_capacity(k);
        let mut cur = -1.5 * k as f64;
        for _ in 0..k {
            cur += 1.0 + 2.0 * st.uniform();
            ts.push(cur);
        }
        let t_cap = ts.iter().fold(2.0f64, |a, &t| a.max(t.abs())) + 1.0;
        let ws = WellSpacedSet::new(ts)?;
        let rep = halasz_montgomery_check(&g, &ws, t_cap, DEFAULT_C_CHECK)?;
        worst_hm = worst_hm.max(rep.ratio);
    }

    // Report-only battery on fixed toy inputs. Each comparison must
    // produce a finite positive ratio; none is asserted against a
    // constant.
    let rho = RhoTable::build(12.0, 32, 1e-10)?;
    let cfg = SieveConfig::default();
    let mut reported = Vec::new();

    let block = DirichletPoly::from_members(&smooth_set(257, 512, 11, &cfg)?.members)?;
    reported.push(improved_mvt_check(&block, 12.0, DEFAULT_C_CHECK)?);

    let p_small = DirichletPoly::from_primes(8.0, 16.0)?;
    let a_small = DirichletPoly::from_members(&[2, 3, 5])?;
    let amp_scale = p_small.dyadic_anchor()?.powi(2) * 5.0;
    reported.push(moment_check(&p_small, &a_small, 2, 20.0, amp_scale)?);

    let prime_poly = DirichletPoly::from_primes(64.0, 128.0)?;
    let lv_points = WellSpacedSet::new(vec![0.0, 2.0, 5.5, 9.0])?;
    let min_abs = lv_points
        .points()
        .iter()
        .map(|&t| prime_poly.eval(t).norm())
        .fold(f64::INFINITY, f64::min);
    let v = (1.0 / min_abs) * (1.0 + 1e-6);
    reported.push(large_values_check(&prime_poly, &lv_points, v, 10.0)?);

    let pw_grid = TGrid::for_poly(-30.0, 30.0, &prime_poly, 64)?;
    reported.push(pointwise_bound_check(&prime_poly, &pw_grid, 256.0, 0.2)?);

    let window_set = ParamSet::toy(64.0, 8.0, 0.1, 0.01, 2.0, 0.05, 0, 2.0, 3.0, 4.0, &rho)?;
    let m = smooth_set(1, 40, 8, &cfg)?;
    let w = weights::enumerate(&window_set, &m, 1, 500)?;
    reported.push(parseval_discrepancy(&w, 2, 8, 2.0, 64)?);

    let region_set =
        ParamSet::toy(256.0, 60.0, 0.1, 1.0 / 256.0, 2.0, 0.05, 1, 16.0, 32.0, 4.0, &rho)?;
    let p1 = DirichletPoly::from_primes(16.0, 32.0)?;
    let p2 = DirichletPoly::from_primes(32.0, 64.0)?;
    let f = p1
        .multiply(&p2)?
        .multiply(&DirichletPoly::from_primes(4.0, 8.0)?)?
        .multiply(&DirichletPoly::from_members(&[1, 2, 3])?)?;
    let region_grid = TGrid::for_poly(1.0, 20.0, &f, 256)?;
    let parts = partition_regions(&p1, &p2, &region_grid, 1.0 / 32.0)?;
    let regions = region_contributions(&f, &parts, &region_grid, &region_set)?;
    ensure(regions.ratio.is_finite() && regions.ratio > 0.0, || {
        format!("region envelope ratio {} is not finite positive", regions.ratio)
    })?;

    let mut slugs = Vec::new();
    for rep in &reported {
        ensure(rep.ratio.is_finite() && rep.ratio > 0.0, || {
            format!("{} ratio {} is not finite positive", rep.lemma, rep.ratio)
        })?;
        slugs.push(format!("{} {:.3e}", rep.lemma, rep.ratio));
    }
    slugs.push(format!("regions {:.3e}", regions.ratio));

    Ok(vec![
        format!(
            "50 random polynomials asserted at C = {DEFAULT_C_CHECK}: worst mean-value ratio {worst_mvt:.4}"
        ),
        format!(
            "20 well-spaced sets asserted at C = {DEFAULT_C_CHECK}: worst discrete ratio {worst_hm:.4}"
        ),
        format!("report-only ratios: {}", slugs.join(", ")),
    ])
}

/// Criterion 7: closed-form transform vs quadrature at 20 points for 5
/// parameter pairs (1e-8), the plateau identity at s = 1 (1e-12), and
/// contour inversion within 1e-3 at 10 off-knot points.
fn smoothing_transform() -> Result<Vec<String>> {
    let pairs = [(0.2, 0.15), (0.1, 0.05), (0.3, 0.0), (0.15, 0.3), (0.4, 0.25)];
    let mut worst_quad = 0.0f64;
    let mut worst_plateau = 0.0f64;
    for &(xi, kappa) in &pairs {
        let sp = SmoothingParams::new(xi, kappa)?;
        for k in 0..20 {
            let s = Complex64::new(1.0, -50.0 + 100.0 * k as f64 / 19.0);
            let closed = eta_mellin(s, &sp);
            let quad = eta_mellin_by_quadrature(s, &sp, 4096)?;
            worst_quad = worst_quad.max((closed - quad).norm());
        }
        let expected = 2.0 * kappa + xi;
        let one = Complex64::new(1.0, 0.0);
        worst_plateau = worst_plateau.max((eta_mellin(one, &sp) - expected).norm());
        worst_plateau =
            worst_plateau.max((eta_mellin_by_quadrature(one, &sp, 4096)? - expected).norm());
    }
    ensure(worst_quad <= 1e-8, || {
        format!("transform quadrature deviation {worst_quad:.3e} exceeds 1e-8")
    })?;
    ensure(worst_plateau <= 1e-12, || {
        format!("plateau identity deviation {worst_plateau:.3e} exceeds 1e-12")
    })?;

    let sp = SmoothingParams::new(0.2, 0.15)?;
    let t_max = 5000.0;
    let zs = [0.5, 0.7, 0.75, 0.94, 1.0, 1.05, 1.21, 1.25, 1.3, 1.5];
    let mut worst_inv = 0.0f64;
    for &z in &zs {
        let rep = mellin_inversion_check(z, &sp, t_max)?;
        let miss = (rep.reconstructed - rep.eta_exact).abs();
        worst_inv = worst_inv.max(miss);
        ensure(miss <= 1e-3, || {
            format!("inversion at z = {z} reconstructs {} vs {} (miss {miss:.3e})",
                rep.reconstructed, rep.eta_exact)
        })?;
        ensure(rep.imaginary_residual <= 1e-9, || {
            format!("inversion at z = {z} left imaginary residual {:.3e}", rep.imaginary_residual)
        })?;
    }

    Ok(vec![
        format!("closed form vs quadrature over 5 pairs x 20 points: worst {worst_quad:.3e} (limit 1e-8)"),
        format!("plateau value at s = 1: worst deviation {worst_plateau:.3e} (limit 1e-12)"),
        format!("contour inversion at 10 off-knot z: worst miss {worst_inv:.3e} (limit 1e-3)"),
    ])
}

/// Criterion 8: hitting fractions reproduce frozen references and are
/// monotone in both window length and smoothness bound; maximal gaps
/// match hand-checked and sieve-frozen values and shrink as y grows.
fn scan_monotonicity() -> Result<Vec<String>> {
    const YS: [u64; 4] = [20, 50, 100, 200];
    const HS: [u64; 4] = [10, 50, 250, 1250];
    // Exhaustive fractions at X = 1e5, frozen from an independent
    // numpy sieve (6 decimal places).
    const FROZEN: [[f64; 4]; 4] = [
        [0.126489, 0.495725, 0.98794, 1.0],
        [0.427636, 0.95551, 1.0, 1.0],
        [0.724003, 0.99953, 1.0, 1.0],
        [0.929261, 1.0, 1.0, 1.0],
    ];
    let cfg = SieveConfig::default();
    let mut fractions = [[0.0f64; 4]; 4];
    for (yi, &y) in YS.iter().enumerate() {
        for (hi, &h) in HS.iter().enumerate() {
            let rep = scanner::scan_almost_all(100_000, y, h, ScanMode::Exhaustive, &cfg)?;
            fractions[yi][hi] = rep.fraction;
            ensure((rep.fraction - FROZEN[yi][hi]).abs() <= 1e-6, || {
                format!(
                    "fraction at (y = {y}, h = {h}) is {}, frozen reference {}",
                    rep.fraction, FROZEN[yi][hi]
                )
            })?;
        }
    }
    for (yi, &y) in YS.iter().enumerate() {
        for hi in 1..HS.len() {
            ensure(fractions[yi][hi] >= fractions[yi][hi - 1], || {
                format!("fraction not monotone in h at y = {y}")
            })?;
        }
    }
    for (hi, &h) in HS.iter().enumerate() {
        for yi in 1..YS.len() {
            ensure(fractions[yi][hi] >= fractions[yi - 1][hi], || {
                format!("fraction not monotone in y at h = {h}")
            })?;
        }
    }

    let small = scanner::max_gap(1, 100, 5, &cfg)?;
    ensure(small.max_gap == 9 && small.argmax == Some(81), || {
        format!(
            "max gap on [1, 100] at y = 5: got {} at {:?}, expected 9 at 81",
            small.max_gap, small.argmax
        )
    })?;

    const GAPS: [(u64, u64, u64); 4] =
        [(2, 4096, 4096), (3, 864, 6912), (5, 448, 8192), (7, 200, 9800)];
    let mut prev = u64::MAX;
    for &(y, want_gap, want_at) in &GAPS {
        let rep = scanner::max_gap(1, 10_000, y, &cfg)?;
        ensure(rep.max_gap == want_gap && rep.argmax == Some(want_at), || {
            format!(
                "max gap on [1, 1e4] at y = {y}: got {} at {:?}, expected {want_gap} at {want_at}",
                rep.max_gap, rep.argmax
            )
        })?;
        ensure(rep.max_gap <= prev, || {
            format!("max gap grew from {prev} to {} at y = {y}", rep.max_gap)
        })?;
        prev = rep.max_gap;
    }

    Ok(vec![
        "16 exhaustive fractions at X = 1e5 match frozen references to 1e-6".into(),
        "fractions monotone in h and in y across the 4 x 4 grid".into(),
        "max gaps: 9 at 81 on [1, 100] (y = 5); 4096, 864, 448, 200 on [1, 1e4] for y = 2, 3, 5, 7".into(),
    ])
}

/// Criterion 9: empirical 0.99-thresholds at X = 1e6 match frozen
/// references and do not increase with y; the theoretical envelope is
/// attached per row for comparison, not asserted.
fn threshold_trend() -> Result<Vec<String>> {
    let cfg = SieveConfig::default();
    let cmp = scanner::compare_with_theory(
        1_000_000,
        &[50, 100, 200, 400],
        0.1,
        0.99,
        ScanMode::Exhaustive,
        &cfg,
    )?;
    ensure(cmp.empirical_nonincreasing, || {
        "empirical thresholds are not nonincreasing in y".into()
    })?;
    const WANT: [(u64, u64); 4] = [(50, 248), (100, 96), (200, 41), (400, 24)];
    let mut details = Vec::new();
    for (row, &(y, h_star)) in cmp.rows.iter().zip(&WANT) {
        ensure(row.y == y && row.h_star == h_star && !row.capped, || {
            format!(
                "threshold row (y = {}, h* = {}, capped {}) does not match frozen (y = {y}, h* = {h_star})",
                row.y, row.h_star, row.capped
            )
        })?;
        details.push(format!(
            "y = {}: empirical h* = {}, envelope log h = {:.3} (h = {:.3e}), ratio {:.3e}{}",
            row.y,
            row.h_star,
            row.log_theory_h,
            row.theory_h,
            row.ratio,
            if row.vacuous { ", envelope vacuous at this scale" } else { "" }
        ));
    }
    details.push("empirical thresholds nonincreasing in y; envelope column report-only".into());
    Ok(details)
}

/// Criterion 10: criteria 1 through 9 rerun on a single-thread pool and
/// on a four-thread pool produce byte-identical canonical reports.
fn reproducibility(seed: u64) -> Result<Vec<String>> {
    let build = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Capacity(format!("could not build a {threads}-thread pool: {e}")))
    };
    let first = build(1)?.install(|| run_indices(seed, &[1, 2, 3, 4, 5, 6, 7, 8, 9]));
    let second = build(4)?.install(|| run_indices(seed, &[1, 2, 3, 4, 5, 6, 7, 8, 9]));
    ensure(first.all_passed && second.all_passed, || {
        format!(
            "rerun failed before comparison (1-thread pass = {}, 4-thread pass = {})",
            first.all_passed, second.all_passed
        )
    })?;
    let a = first.canonical();
    let b = second.canonical();
    ensure(a == b, || {
        format!(
            "canonical reports differ between thread counts ({} vs {} bytes)",
            a.len(),
            b.len()
        )
    })?;
    Ok(vec![format!(
        "criteria 1-9 rerun twice with seed {seed}: 1-thread and 4-thread canonical reports \
         are byte-identical ({} bytes)",
        a.len()
    )])
}
