//! The Dickman function `rho(u)` as a piecewise-Chebyshev table.
//!
//! `rho` is the continuous solution of the delay differential equation
//! `u rho'(u) = -rho(u-1)` with `rho(u) = 1` on `[0, 1]`. Integrating the
//! equation gives two equivalent per-interval recurrences:
//!
//! ```text
//! rho(u) = rho(k) - integral_k^u rho(t - 1) / t dt      (difference form)
//! u rho(u) = integral_{u-1}^u rho(t) dt                 (averaged form)
//! ```
//!
//! The difference form is the textbook definition but is useless as a
//! double-precision forward scheme: `rho(k+1)` emerges as the small
//! difference of two order-`rho(k)` quantities, losing a factor
//! `rho(k)/rho(k+1) ~ k ln k` of relative accuracy *per piece* (measured:
//! garbage by `u = 15`). [`RhoTable::build`] therefore solves the averaged
//! form, whose right-hand side is a sum of positive terms with no
//! cancellation: on each unit interval it is a Volterra equation
//!
//! ```text
//! q(u) = (1/u) [ A(u) + integral_k^u q(t) dt ],   A(u) = integral_{u-1}^k rho / rho(k),
//! ```
//!
//! solved by fixed-point iteration (the integral operator contracts with
//! rate `(u-k)/u <= 1/k`), doubling the working node count until successive
//! refinements agree below `tol / 10`.
//!
//! # Scaling
//!
//! `rho` decays roughly like `u^{-u}`: by `u = 15` it is already `7.6e-20`,
//! far below the absolute noise floor any fixed-scale table accumulates.
//! Each piece is therefore stored as the Chebyshev expansion of
//! `ln (rho(u) / rho(k))` — log scale keeps errors *relative* — alongside
//! the anchor `ln rho(k)`. [`RhoTable::rho`] rescales by `exp`, which
//! underflows to `0` only when the true value is below the smallest positive
//! double (around `u = 170`); [`RhoTable::rho_log`] never rescales and stays
//! fully accurate to `u_max`, which is why the decay-rate diagnostics use
//! it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Chebyshev primitives on `[-1, 1]` (Lobatto nodes, cosine-transform fit,
/// Clenshaw evaluation, coefficient-space antiderivative).
mod cheb {
    /// Chebyshev-Lobatto nodes `x_i = cos(pi i / n)`, `i = 0..=n`.
    pub fn nodes(n: usize) -> Vec<f64> {
        (0..=n)
            .map(|i| (std::f64::consts::PI * i as f64 / n as f64).cos())
            .collect()
    }

    /// Interpolation coefficients `c` with `f(x) = sum_j c_j T_j(x)` at the
    /// Lobatto nodes, from values `v_i = f(x_i)`.
    pub fn fit(values: &[f64]) -> Vec<f64> {
        let n = values.len() - 1;
        let mut coeffs = vec![0.0; n + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.5 * (values[0] + if j % 2 == 0 { values[n] } else { -values[n] });
            for (i, v) in values.iter().enumerate().take(n).skip(1) {
                acc += v * (std::f64::consts::PI * (i * j) as f64 / n as f64).cos();
            }
            *c = 2.0 * acc / n as f64;
        }
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;
        coeffs
    }

    /// Clenshaw evaluation of `sum_j c_j T_j(x)`.
    pub fn eval(coeffs: &[f64], x: f64) -> f64 {
        match coeffs.len() {
            0 => 0.0,
            1 => coeffs[0],
            _ => {
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for &c in coeffs.iter().skip(1).rev() {
                    let b = c + 2.0 * x * b1 - b2;
                    b2 = b1;
                    b1 = b;
                }
                coeffs[0] + x * b1 - b2
            }
        }
    }

    /// Coefficients of the antiderivative `F(x) = integral_{-1}^x f`, scaled
    /// by the halfwidth `hw` of the target interval.
    ///
    /// Uses `2 T_j = T_{j+1}'/(j+1) - T_{j-1}'/(j-1)`; the `j = 1` output
    /// coefficient is `hw (c_0 - c_2 / 2)` because `T_0` integrates to `T_1`
    /// with weight one, unlike every later term.
    pub fn antiderivative(coeffs: &[f64], hw: f64) -> Vec<f64> {
        let n = coeffs.len();
        let c = |j: usize| if j < n { coeffs[j] } else { 0.0 };
        let mut out = vec![0.0; n + 1];
        out[1] = hw * (c(0) - c(2) / 2.0);
        for j in 2..=n {
            out[j] = hw * (c(j - 1) - c(j + 1)) / (2.0 * j as f64);
        }
        let mut at_left = 0.0;
        for (j, a) in out.iter().enumerate().skip(1) {
            at_left += if j % 2 == 0 { *a } else { -*a };
        }
        out[0] = -at_left;
        out
    }
}

/// Piecewise-Chebyshev table for `rho` on `[0, u_max]`.
///
/// Construction is deterministic: the same `(u_max, degree, tol)` always
/// produces bit-identical coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTable {
    pieces: usize,
    degree: usize,
    tol: f64,
    /// `log_coeffs[k]`: Chebyshev coefficients of
    /// `l_k(u) = ln (rho(u) / rho(k))` on `[k, k+1]`, mapped to `[-1, 1]`.
    log_coeffs: Vec<Vec<f64>>,
    /// Antiderivative coefficients of the normalized piece
    /// `q_k = exp(l_k)`, vanishing at the piece's left endpoint.
    antiderivs: Vec<Vec<f64>>,
    /// `log_anchor[k] = ln rho(k)`.
    log_anchor: Vec<f64>,
}

const MAX_NODES: usize = 4096;
const MAX_VOLTERRA_ITERS: usize = 500;

impl RhoTable {
    /// Builds the table on `[0, ceil(u_max)]`.
    ///
    /// `degree` is the stored coefficient count per piece minus one
    /// (default choice 32); `tol` the sup-norm accuracy target per
    /// normalized piece. Refinement doubles the working node count until
    /// two successive constructions agree below `tol / 10`.
    pub fn build(u_max: f64, degree: usize, tol: f64) -> Result<Self> {
        if !u_max.is_finite() || !(2.0..=10_000.0).contains(&u_max) {
            return Err(Error::Domain(format!(
                "u_max must lie in [2, 10000], got {u_max}"
            )));
        }
        if !(8..=256).contains(&degree) {
            return Err(Error::Domain(format!(
                "degree must lie in [8, 256], got {degree}"
            )));
        }
        if !tol.is_finite() || !(1e-15..=1e-3).contains(&tol) {
            return Err(Error::Domain(format!(
                "tol must lie in [1e-15, 1e-3], got {tol}"
            )));
        }

        let pieces = u_max.ceil() as usize;
        let mut table = RhoTable {
            pieces,
            degree,
            tol,
            log_coeffs: Vec::with_capacity(pieces),
            antiderivs: Vec::with_capacity(pieces),
            log_anchor: Vec::with_capacity(pieces),
        };

        // Piece 0: rho = 1 on [0, 1], so l_0 = 0.
        table.log_coeffs.push(vec![0.0]);
        table.antiderivs.push(cheb::antiderivative(&[1.0], 0.5));
        table.log_anchor.push(0.0);

        for k in 1..pieces {
            table.extend_piece(k)?;
        }
        Ok(table)
    }

    /// Builds piece `k >= 1` from piece `k - 1` by solving the averaged-form
    /// Volterra equation, with node doubling.
    fn extend_piece(&mut self, k: usize) -> Result<()> {
        // rho(k) / rho(k-1): the previous normalized piece at its right end.
        let ratio_prev = if k == 1 {
            1.0
        } else {
            cheb::eval(&self.log_coeffs[k - 1], 1.0).exp()
        };

        let candidate = |n_nodes: usize| -> Result<Vec<f64>> {
            let xs = cheb::nodes(n_nodes);
            let us: Vec<f64> = xs.iter().map(|&x| k as f64 + (x + 1.0) / 2.0).collect();

            // Tail of the previous piece: A_i = integral_{u_i - 1}^{k} q_{k-1},
            // where u_i - 1 sits at the same Chebyshev abscissa on [k-1, k].
            let prev_vals: Vec<f64> = xs
                .iter()
                .map(|&x| cheb::eval(&self.log_coeffs[k - 1], x).exp())
                .collect();
            let prev_int = cheb::antiderivative(&cheb::fit(&prev_vals), 0.5);
            let prev_total = cheb::eval(&prev_int, 1.0);
            let a_vals: Vec<f64> = xs
                .iter()
                .map(|&x| (prev_total - cheb::eval(&prev_int, x)) / ratio_prev)
                .collect();

            // Fixed-point iteration for q(u) = (A(u) + integral_k^u q) / u.
            // Every term is positive: no cancellation, so node values keep
            // full relative accuracy. Contraction rate is at most 1/k.
            let mut q = vec![1.0; n_nodes + 1];
            let mut prev_err = f64::INFINITY;
            let mut converged = false;
            for _ in 0..MAX_VOLTERRA_ITERS {
                let s = cheb::antiderivative(&cheb::fit(&q), 0.5);
                let mut err = 0.0f64;
                for i in 0..=n_nodes {
                    let val = (a_vals[i] + cheb::eval(&s, xs[i])) / us[i];
                    err = err.max((val - q[i]).abs());
                    q[i] = val;
                }
                // Done at machine accuracy, or at the rounding plateau.
                if err < 1e-15 || (err >= prev_err && err < 1e-9) {
                    converged = true;
                    break;
                }
                prev_err = err;
            }
            if !converged {
                return Err(Error::NonConvergence(format!(
                    "piece {k}: fixed-point iteration still moving after {MAX_VOLTERRA_ITERS} rounds"
                )));
            }
            let log_vals: Vec<f64> = q.iter().map(|v| v.ln()).collect();
            Ok(cheb::fit(&log_vals))
        };

        let sample_xs: Vec<f64> = (0..=32).map(|i| -1.0 + i as f64 / 16.0).collect();
        let mut n_nodes = self.degree.max(16);
        let mut prev = candidate(n_nodes)?;
        let accepted = loop {
            n_nodes *= 2;
            if n_nodes > MAX_NODES {
                return Err(Error::Tolerance(format!(
                    "piece {k} did not stabilize below {} within {MAX_NODES} nodes",
                    self.tol / 10.0
                )));
            }
            let cur = candidate(n_nodes)?;
            let err = sample_xs
                .iter()
                .map(|&x| (cheb::eval(&cur, x) - cheb::eval(&prev, x)).abs())
                .fold(0.0f64, f64::max);
            if err < self.tol / 10.0 {
                break cur;
            }
            prev = cur;
        };

        // Truncate to the stored degree; the dropped tail must be negligible.
        let keep = self.degree + 1;
        let tail: f64 = accepted.iter().skip(keep).map(|c| c.abs()).sum();
        if tail >= self.tol / 10.0 {
            return Err(Error::Tolerance(format!(
                "piece {k}: coefficient tail {tail:.3e} exceeds {:.3e}; raise degree",
                self.tol / 10.0
            )));
        }
        let mut stored = accepted;
        stored.truncate(keep);

        // Antiderivative of q_k = exp(l_k) for interval integrals of rho.
        let q_vals: Vec<f64> = cheb::nodes(self.degree)
            .iter()
            .map(|&x| cheb::eval(&stored, x).exp())
            .collect();
        self.antiderivs
            .push(cheb::antiderivative(&cheb::fit(&q_vals), 0.5));
        self.log_anchor
            .push(self.log_anchor[k - 1] + ratio_prev.ln());
        self.log_coeffs.push(stored);
        Ok(())
    }

    /// Upper end of the tabulated range.
    pub fn u_max(&self) -> f64 {
        self.pieces as f64
    }

    /// Stored Chebyshev degree per piece.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Per-piece sup-norm accuracy target.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn piece_index(&self, u: f64) -> usize {
        (u.floor() as usize).min(self.pieces - 1)
    }

    /// `rho(u)`.
    ///
    /// Returns `0` for `u < 0` (the standard extension), errors with
    /// [`Error::Range`] past `u_max`, and [`Error::Domain`] on NaN.
    pub fn rho(&self, u: f64) -> Result<f64> {
        if u.is_nan() {
            return Err(Error::Domain("rho: u is NaN".into()));
        }
        if u < 0.0 {
            return Ok(0.0);
        }
        if u > self.u_max() {
            return Err(Error::Range(format!(
                "rho: u = {u} exceeds table range [0, {}]",
                self.u_max()
            )));
        }
        let k = self.piece_index(u);
        let x = 2.0 * (u - k as f64) - 1.0;
        Ok((self.log_anchor[k] + cheb::eval(&self.log_coeffs[k], x)).exp())
    }

    /// `ln rho(u)`, exact in log scale even where `rho` itself would
    /// underflow a double.
    ///
    /// Returns `-inf` for `u < 0`, consistent with `rho = 0` there.
    pub fn rho_log(&self, u: f64) -> Result<f64> {
        if u.is_nan() {
            return Err(Error::Domain("rho_log: u is NaN".into()));
        }
        if u < 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if u > self.u_max() {
            return Err(Error::Range(format!(
                "rho_log: u = {u} exceeds table range [0, {}]",
                self.u_max()
            )));
        }
        let k = self.piece_index(u);
        let x = 2.0 * (u - k as f64) - 1.0;
        Ok(self.log_anchor[k] + cheb::eval(&self.log_coeffs[k], x))
    }

    /// `integral_a^b rho(t) dt` with `a <= b <= u_max`, by exact
    /// piece-by-piece Chebyshev integration (`rho = 0` below `0`
    /// contributes nothing).
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a.is_nan() || b.is_nan() {
            return Err(Error::Domain("integral: NaN bound".into()));
        }
        if a > b {
            return Err(Error::Domain(format!(
                "integral: bounds out of order, a = {a} > b = {b}"
            )));
        }
        if b > self.u_max() {
            return Err(Error::Range(format!(
                "integral: b = {b} exceeds table range [0, {}]",
                self.u_max()
            )));
        }
        let a = a.max(0.0);
        let b = b.max(0.0);
        let mut total = 0.0;
        let mut k = self.piece_index(a);
        while (k as f64) < b {
            let lo = a.max(k as f64);
            let hi = b.min(k as f64 + 1.0);
            if hi > lo {
                let x_lo = 2.0 * (lo - k as f64) - 1.0;
                let x_hi = 2.0 * (hi - k as f64) - 1.0;
                total += self.log_anchor[k].exp()
                    * (cheb::eval(&self.antiderivs[k], x_hi)
                        - cheb::eval(&self.antiderivs[k], x_lo));
            }
            k += 1;
        }
        Ok(total)
    }

    /// Residual of the delay identity `u rho(u) = integral_{u-1}^u rho`,
    /// for `u` in `[1, u_max]`. Vanishes identically for the true function;
    /// the construction enforces it at its working nodes, so the residual at
    /// arbitrary `u` measures the consistency of the stored interpolants and
    /// integrals.
    pub fn delay_residual(&self, u: f64) -> Result<f64> {
        if !(1.0..=self.u_max()).contains(&u) {
            return Err(Error::Domain(format!(
                "delay_residual: u = {u} outside [1, {}]",
                self.u_max()
            )));
        }
        Ok(u * self.rho(u)? - self.integral(u - 1.0, u)?)
    }

    /// Compares the exact ratio `rho(u - v) / rho(u)` against the first-order
    /// law `exp(v xi(u))`, where `xi(u) = ln u + ln ln (u + 2)`.
    ///
    /// Requires `u > 2`, `|v| <= u / 2`, and both `u` and `u - v` within the
    /// table. The discrepancy is reported, not asserted: it shrinks like
    /// `(1 + v^2) / u`, and [`RatioReport::scale`] records that yardstick.
    pub fn rho_ratio(&self, u: f64, v: f64) -> Result<RatioReport> {
        if !(u > 2.0) {
            return Err(Error::Domain(format!("rho_ratio: need u > 2, got {u}")));
        }
        if !(v.abs() <= u / 2.0) {
            return Err(Error::Domain(format!(
                "rho_ratio: need |v| <= u/2, got v = {v} at u = {u}"
            )));
        }
        if u > self.u_max() || u - v > self.u_max() {
            return Err(Error::Range(format!(
                "rho_ratio: u = {u}, u - v = {} must lie within [0, {}]",
                u - v,
                self.u_max()
            )));
        }
        let log_exact = self.rho_log(u - v)? - self.rho_log(u)?;
        let predicted_log = v * xi(u)?;
        Ok(RatioReport {
            u,
            v,
            exact: log_exact.exp(),
            predicted: predicted_log.exp(),
            log_discrepancy: (log_exact - predicted_log).abs(),
            scale: (1.0 + v * v) / u,
        })
    }

    /// Examines the normalized decay exponent `r(u) = -ln rho(u) / (u ln u)`
    /// on a grid.
    ///
    /// For each grid point with `u >= 5` the report asserts
    /// `r(u) in (0.5, 1.5)`; smaller points are informational. A final entry
    /// asserts that `r` is nondecreasing across the `u >= 5` tail of the
    /// grid, the direction the decay exponent moves on any desk-scale range.
    /// Evaluated through [`RhoTable::rho_log`], so large `u` costs no
    /// accuracy.
    pub fn asymptotic_check(&self, grid: &[f64]) -> Result<ValidationReport> {
        if grid.is_empty() {
            return Err(Error::InvalidInput("asymptotic_check: empty grid".into()));
        }
        let mut us: Vec<f64> = grid.to_vec();
        for &u in &us {
            if !(u > 1.0) {
                return Err(Error::Domain(format!(
                    "asymptotic_check: grid point {u} must exceed 1"
                )));
            }
            if u > self.u_max() {
                return Err(Error::Range(format!(
                    "asymptotic_check: grid point {u} exceeds u_max = {}",
                    self.u_max()
                )));
            }
        }
        us.sort_by(|a, b| a.partial_cmp(b).expect("grid points are finite"));
        us.dedup();

        let mut report = ValidationReport::default();
        let mut tail = Vec::new();
        for &u in &us {
            let r = -self.rho_log(u)? / (u * u.ln());
            let name = format!("decay-exponent-u{u}");
            if u >= 5.0 {
                report.push(&name, r > 0.5 && r < 1.5, r, "in (0.5, 1.5)");
                tail.push(r);
            } else {
                report.push_reported(&name, r > 0.5 && r < 1.5, r, "in (0.5, 1.5) once u >= 5");
            }
        }
        if tail.len() >= 2 {
            let min_step = tail
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            report.push(
                "decay-exponent-trend",
                min_step >= -1e-12,
                min_step,
                "nondecreasing across the u >= 5 tail",
            );
        }
        Ok(report)
    }
}

/// Exact-vs-predicted ratio data from [`RhoTable::rho_ratio`].
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub u: f64,
    pub v: f64,
    /// `rho(u - v) / rho(u)`.
    pub exact: f64,
    /// `exp(v xi(u))`.
    pub predicted: f64,
    /// `| ln exact - v xi(u) |`.
    pub log_discrepancy: f64,
    /// The yardstick `(1 + v^2) / u` the discrepancy is expected to track.
    pub scale: f64,
}

/// The logarithmic derivative scale `xi(u) = ln u + ln ln (u + 2)`.
///
/// Domain error for `u <= 1`.
pub fn xi(u: f64) -> Result<f64> {
    if !(u > 1.0) {
        return Err(Error::Domain(format!("xi: need u > 1, got {u}")));
    }
    Ok(u.ln() + (u + 2.0).ln().ln())
}
