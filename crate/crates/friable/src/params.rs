//! The parameter cascade for weighted smooth-number constructions in short
//! intervals.
//!
//! Starting from an anchor scale `X` and a smoothness bound `y`, every
//! downstream quantity is determined:
//!
//! ```text
//! u      = ln X / ln y
//! sigma0 = A / ( (ln X)^{2/3} (ln ln X)^{1/3} )
//! J      = ceil( 200 u ln u / (sigma0 ln y) )
//! v      = J ln(y/2) / ln y
//! P3     = y / 2
//! P1     = ( (ln X)^{2+eps} / rho(u-v)^{2-phi+2eps} )^{2/(1-2eps)}
//! P2     = ( P1 (ln X)^J )^{1/eta}
//! ```
//!
//! [`ParamSet::derive`] computes the cascade; [`ParamSet::validate`] reports
//! which working-range constraints the result satisfies. The two are
//! deliberately separate: at desk scales the constraints essentially never
//! hold (`u - v` is hugely negative, so `rho(u - v) = 0` and `P1 = inf`),
//! and the point is to *see* that, not to be refused. [`ParamSet::toy`]
//! builds a set with `J, P1, P2, P3` overridden directly, for small exact
//! experiments.
//!
//! The module also provides the short-interval length thresholds
//! ([`threshold_h_almost_all`], [`threshold_h_all`]) and their log-space
//! variants, which stay finite long after the direct values overflow.

use serde::{Deserialize, Serialize};

use crate::dickman::RhoTable;
use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Exponent constant in the `P1` formula. Overridable per set via
/// [`ParamSet::with_phi`].
pub const PHI: f64 = 13.0 / 8.0;

/// A fully derived parameter set.
///
/// Non-finite values (`P1 = inf` when `rho(u - v) = 0`, underflowed
/// references) are legitimate states: they record that the asymptotic
/// regime is out of reach at this scale, and validation reports it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSet {
    pub x: f64,
    pub y: f64,
    pub epsilon: f64,
    pub eta: f64,
    /// Working-range constant `C`.
    pub c: f64,
    /// Numerator constant of `sigma0`.
    pub a: f64,
    /// Exponent constant used in the `P1` formula.
    pub phi: f64,
    pub u: f64,
    pub sigma0: f64,
    pub j: u64,
    pub v: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// `rho(u)`.
    pub rho_u: f64,
    /// `rho(u - v)` (zero when `u < v`).
    pub rho_u_minus_v: f64,
    /// `ln rho(u - v)` (`-inf` when `u < v`); kept separately so log-space
    /// formulas survive underflow of the direct value.
    pub rho_log_u_minus_v: f64,
    /// True for sets built by [`ParamSet::toy`].
    pub toy_mode: bool,
}

fn check_inputs(x: f64, y: f64, epsilon: f64, eta: f64, c: f64, a: f64) -> Result<()> {
    if !x.is_finite() || x < 16.0 {
        return Err(Error::Domain(format!("x must be finite and >= 16, got {x}")));
    }
    if !y.is_finite() || y < 2.0 || y > x {
        return Err(Error::Domain(format!(
            "y must lie in [2, x] = [2, {x}], got {y}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1/4), got {epsilon}"
        )));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Domain(format!("eta must be positive, got {eta}")));
    }
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c must be >= 1, got {c}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("a must be positive, got {a}")));
    }
    Ok(())
}

impl ParamSet {
    /// Derives the full cascade from `(x, y)` and the tuning constants.
    ///
    /// `rho` must cover `u = ln x / ln y`. Derivation always succeeds on
    /// valid inputs; whether the result satisfies the working-range
    /// constraints is [`ParamSet::validate`]'s business.
    pub fn derive(
        x: f64,
        y: f64,
        epsilon: f64,
        eta: f64,
        c: f64,
        a: f64,
        rho: &RhoTable,
    ) -> Result<Self> {
        check_inputs(x, y, epsilon, eta, c, a)?;
        let u = x.ln() / y.ln();
        if u > rho.u_max() {
            return Err(Error::Range(format!(
                "u = {u} exceeds the rho table range [0, {}]; rebuild the table or raise y",
                rho.u_max()
            )));
        }
        let sigma0 = a / (x.ln().powf(2.0 / 3.0) * x.ln().ln().powf(1.0 / 3.0));
        let j_real = (200.0 * u * u.ln().max(0.0) / (sigma0 * y.ln())).ceil();
        if !j_real.is_finite() || j_real >= 9.0e15 {
            return Err(Error::Capacity(format!(
                "derived J = {j_real} is beyond integer range"
            )));
        }
        let j = j_real as u64;
        Self::finish(x, y, epsilon, eta, c, a, u, sigma0, j, None, rho, false)
    }

    /// Builds a set with `J` and the prime scales overridden, keeping the
    /// derived `u` and `sigma0`. For small exact experiments.
    #[allow(clippy::too_many_arguments)]
    pub fn toy(
        x: f64,
        y: f64,
        epsilon: f64,
        eta: f64,
        c: f64,
        a: f64,
        j: u64,
        p1: f64,
        p2: f64,
        p3: f64,
        rho: &RhoTable,
    ) -> Result<Self> {
        check_inputs(x, y, epsilon, eta, c, a)?;
        for (name, p) in [("p1", p1), ("p2", p2), ("p3", p3)] {
            if !(p > 1.0 && p.is_finite()) {
                return Err(Error::Domain(format!("{name} must exceed 1, got {p}")));
            }
        }
        let u = x.ln() / y.ln();
        if u > rho.u_max() {
            return Err(Error::Range(format!(
                "u = {u} exceeds the rho table range [0, {}]",
                rho.u_max()
            )));
        }
        let sigma0 = a / (x.ln().powf(2.0 / 3.0) * x.ln().ln().powf(1.0 / 3.0));
        Self::finish(x, y, epsilon, eta, c, a, u, sigma0, j, Some((p1, p2, p3)), rho, true)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        x: f64,
        y: f64,
        epsilon: f64,
        eta: f64,
        c: f64,
        a: f64,
        u: f64,
        sigma0: f64,
        j: u64,
        overrides: Option<(f64, f64, f64)>,
        rho: &RhoTable,
        toy_mode: bool,
    ) -> Result<Self> {
        let v = j as f64 * (y / 2.0).ln() / y.ln();
        let rho_u = rho.rho(u)?;
        let (rho_umv, rho_log_umv) = if u - v >= 0.0 {
            (rho.rho(u - v)?, rho.rho_log(u - v)?)
        } else {
            (0.0, f64::NEG_INFINITY)
        };
        let (p1, p2, p3) = match overrides {
            Some(ps) => ps,
            None => {
                let p3 = y / 2.0;
                // Log-space: ln P1 = (2/(1-2eps)) [ (2+eps) lnln x - (2-phi+2eps) ln rho(u-v) ].
                let ln_p1 = 2.0 / (1.0 - 2.0 * epsilon)
                    * ((2.0 + epsilon) * x.ln().ln() - (2.0 - PHI + 2.0 * epsilon) * rho_log_umv);
                let p1 = ln_p1.exp();
                let ln_p2 = (ln_p1 + j as f64 * x.ln().ln()) / eta;
                (p1, ln_p2.exp(), p3)
            }
        };
        Ok(ParamSet {
            x,
            y,
            epsilon,
            eta,
            c,
            a,
            phi: PHI,
            u,
            sigma0,
            j,
            v,
            p1,
            p2,
            p3,
            rho_u,
            rho_u_minus_v: rho_umv,
            rho_log_u_minus_v: rho_log_umv,
            toy_mode,
        })
    }

    /// Returns a copy with `phi` overridden and `P1`, `P2` recomputed from
    /// it (no-op on toy sets, whose prime scales are pinned).
    pub fn with_phi(mut self, phi: f64) -> Result<Self> {
        if !(phi.is_finite() && phi > 0.0 && phi < 2.0) {
            return Err(Error::Domain(format!("phi must lie in (0, 2), got {phi}")));
        }
        self.phi = phi;
        if !self.toy_mode {
            let ln_p1 = 2.0 / (1.0 - 2.0 * self.epsilon)
                * ((2.0 + self.epsilon) * self.x.ln().ln()
                    - (2.0 - phi + 2.0 * self.epsilon) * self.rho_log_u_minus_v);
            self.p1 = ln_p1.exp();
            self.p2 = ((ln_p1 + self.j as f64 * self.x.ln().ln()) / self.eta).exp();
        }
        Ok(self)
    }

    /// Checks the working-range constraints, one entry each, in fixed
    /// order:
    ///
    /// 1. `y >= exp(C ln ln X / sigma0)`
    /// 2. `y <= X^{1/C}`
    /// 3. `C <= u <= sigma0 ln X / (C ln ln X)`
    /// 4. `u > 3 v`
    /// 5. `(ln X)^4 / rho(u-v)^{2/3} <= P1 <= (ln X)^{20} / rho(u-v)^{14/3}`
    /// 6. `P1 <= P2 <= P3 <= y/2`
    ///
    /// Never errors: failures (including non-finite bounds from
    /// `rho(u-v) = 0`) are reported as failed entries. Bounds that are
    /// themselves computed through `exp`/`ln` carry `1e-12` relative slack,
    /// so inputs sitting exactly on a boundary (like `y = X^{1/C}`) are not
    /// flipped by round-off.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let lnx = self.x.ln();
        let lnlnx = lnx.ln();
        const SLACK: f64 = 1e-12;

        let y_lo = (self.c * lnlnx / self.sigma0).exp();
        r.push(
            "y-range-lower",
            self.y >= y_lo * (1.0 - SLACK),
            self.y,
            &format!(">= exp(C lnln X / sigma0) = {y_lo:.6e}"),
        );
        let y_hi = (lnx / self.c).exp();
        r.push(
            "y-range-upper",
            self.y <= y_hi * (1.0 + SLACK),
            self.y,
            &format!("<= X^(1/C) = {y_hi:.6e}"),
        );
        let u_hi = self.sigma0 * lnx / (self.c * lnlnx);
        r.push(
            "u-range",
            self.u >= self.c && self.u <= u_hi,
            self.u,
            &format!("in [C, sigma0 ln X / (C lnln X)] = [{}, {u_hi:.6e}]", self.c),
        );
        r.push(
            "u-over-3v",
            self.u > 3.0 * self.v,
            self.u - 3.0 * self.v,
            "u - 3v > 0",
        );
        // Window bounds in log space; rho(u-v) = 0 pushes both to +inf and
        // the entry fails with the measured value on record.
        let p1_lo = (4.0 * lnlnx - (2.0 / 3.0) * self.rho_log_u_minus_v).exp();
        let p1_hi = (20.0 * lnlnx - (14.0 / 3.0) * self.rho_log_u_minus_v).exp();
        r.push(
            "p1-window",
            p1_lo.is_finite()
                && p1_hi.is_finite()
                && self.p1.is_finite()
                && self.p1 >= p1_lo * (1.0 - SLACK)
                && self.p1 <= p1_hi * (1.0 + SLACK),
            self.p1,
            &format!("in [(ln X)^4 rho^(-2/3), (ln X)^20 rho^(-14/3)] = [{p1_lo:.6e}, {p1_hi:.6e}]"),
        );
        let chain_margin = (self.p2 - self.p1)
            .min(self.p3 - self.p2)
            .min(self.y / 2.0 - self.p3);
        r.push(
            "prime-ordering",
            chain_margin >= 0.0,
            chain_margin,
            "P1 <= P2 <= P3 <= y/2 (smallest pairwise margin >= 0)",
        );
        r
    }

    /// Two bookkeeping identities tied to the ratio scale `a`:
    ///
    /// * `rho-ratio-monotone` (asserted entry): `rho(u) <= rho(u - v)`.
    /// * `growth-term-log` (informational): the size of
    ///   `J ln(a ln X) + eps ln rho(u-v) - lnln X` in log scale, the
    ///   exponent balance the `P2` choice is supposed to keep negative.
    pub fn notational_checks(&self, a_scale: f64) -> Result<ValidationReport> {
        if !(a_scale > 0.0 && a_scale.is_finite()) {
            return Err(Error::Domain(format!(
                "scale must be positive, got {a_scale}"
            )));
        }
        let mut r = ValidationReport::default();
        let ratio = self.rho_u / self.rho_u_minus_v;
        r.push(
            "rho-ratio-monotone",
            ratio <= 1.0,
            ratio,
            "rho(u) / rho(u-v) <= 1",
        );
        let growth = self.j as f64 * (a_scale * self.x.ln()).ln()
            + self.epsilon * self.rho_log_u_minus_v
            - self.x.ln().ln();
        r.push_reported(
            "growth-term-log",
            growth <= 0.0,
            growth,
            "J ln(a ln X) + eps ln rho(u-v) - lnln X <= 0",
        );
        Ok(r)
    }
}

fn check_threshold_inputs(x: f64, y: f64, epsilon: f64) -> Result<()> {
    if !x.is_finite() || x < 16.0 {
        return Err(Error::Domain(format!("x must be finite and >= 16, got {x}")));
    }
    if !y.is_finite() || y < 2.0 || y > x {
        return Err(Error::Domain(format!("y must lie in [2, {x}], got {y}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// Natural log of the interval length beyond which almost all windows
/// `[x, x + h]` contain a smooth number:
/// `ln h = (1 + eps) ( (11/8) u ln u + 4 lnln X )` with `u = ln X / ln y`.
pub fn log_threshold_h_almost_all(x: f64, y: f64, epsilon: f64) -> Result<f64> {
    check_threshold_inputs(x, y, epsilon)?;
    let u = x.ln() / y.ln();
    Ok((1.0 + epsilon) * ((11.0 / 8.0) * u * u.ln().max(0.0) + 4.0 * x.ln().ln()))
}

/// Direct value of [`log_threshold_h_almost_all`]; overflows to `inf` where
/// the exponent exceeds ~709.
pub fn threshold_h_almost_all(x: f64, y: f64, epsilon: f64) -> Result<f64> {
    Ok(log_threshold_h_almost_all(x, y, epsilon)?.exp())
}

/// Natural log of the interval length beyond which *every* window
/// `[x, x + h]` with `x` near the anchor contains a smooth number:
/// `ln h = (1/2) ln x + (1 + eps) ( (11/16) u ln u + 2 lnln x )`.
pub fn log_threshold_h_all(x: f64, y: f64, epsilon: f64) -> Result<f64> {
    check_threshold_inputs(x, y, epsilon)?;
    let u = x.ln() / y.ln();
    Ok(0.5 * x.ln() + (1.0 + epsilon) * ((11.0 / 16.0) * u * u.ln().max(0.0) + 2.0 * x.ln().ln()))
}

/// Direct value of [`log_threshold_h_all`]; overflows to `inf` where the
/// exponent exceeds ~709.
pub fn threshold_h_all(x: f64, y: f64, epsilon: f64) -> Result<f64> {
    Ok(log_threshold_h_all(x, y, epsilon)?.exp())
}
