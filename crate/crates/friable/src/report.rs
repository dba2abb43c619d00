//! Structured reports shared across modules.
//!
//! Two shapes cover everything the crate measures:
//!
//! * [`ValidationReport`] — a list of named pass/fail constraint entries,
//!   used by parameter validation and asymptotic checks. Entries marked
//!   `reported_only` never affect [`ValidationReport::all_passed`].
//! * [`CheckReport`] — one measured inequality `lhs <= C * sum(rhs_terms)`,
//!   used by the mean-value and large-value checks. `ratio` is always
//!   `lhs / sum(rhs_terms)` so a report is interpretable without knowing the
//!   constant; `pass` records the comparison against the constant that was
//!   actually applied, and `asserted` records whether a failure is treated
//!   as an error by the caller.
//!
//! Both serialize to stable JSON (field order fixed, maps sorted). Note that
//! non-finite measured values serialize as JSON `null`; the text renderings
//! print them as `inf`/`-inf`/`NaN`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One named constraint with its measured value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintCheck {
    /// Stable kebab-case identifier.
    pub name: String,
    /// Whether the constraint held.
    pub passed: bool,
    /// The quantity the constraint inspects.
    pub measured: f64,
    /// Human-readable statement of the requirement.
    pub required: String,
    /// True for entries that are informational and excluded from
    /// [`ValidationReport::all_passed`].
    #[serde(default)]
    pub reported_only: bool,
}

/// Ordered list of constraint entries.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ValidationReport {
    /// Appends an entry.
    pub fn push(&mut self, name: &str, passed: bool, measured: f64, required: &str) {
        self.checks.push(ConstraintCheck {
            name: name.to_string(),
            passed,
            measured,
            required: required.to_string(),
            reported_only: false,
        });
    }

    /// Appends an informational entry.
    pub fn push_reported(&mut self, name: &str, passed: bool, measured: f64, required: &str) {
        self.checks.push(ConstraintCheck {
            name: name.to_string(),
            passed,
            measured,
            required: required.to_string(),
            reported_only: true,
        });
    }

    /// True when every non-informational entry passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.reported_only)
    }

    /// Fixed-width text rendering, one line per entry.
    pub fn text(&self) -> String {
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed {
                "pass"
            } else if c.reported_only {
                "info"
            } else {
                "FAIL"
            };
            let _ = writeln!(
                out,
                "{:<name_w$}  {}  measured={:<24} required: {}",
                c.name,
                status,
                fmt_f64(c.measured),
                c.required,
            );
        }
        out
    }
}

/// One measured inequality of the form `lhs <= C * sum(rhs_terms)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    /// Stable slug naming the inequality being checked.
    pub lemma: String,
    /// Measured left-hand side.
    pub lhs: f64,
    /// The structural right-hand side terms, before the constant.
    pub rhs_terms: Vec<f64>,
    /// `lhs / sum(rhs_terms)`.
    pub ratio: f64,
    /// Whether a failure of `pass` is an error for the caller.
    pub asserted: bool,
    /// Whether the inequality held under the constant applied.
    pub pass: bool,
    /// Auxiliary named conditions (range memberships, preconditions).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, bool>,
}

impl CheckReport {
    /// Sum of the right-hand side terms.
    pub fn rhs_total(&self) -> f64 {
        self.rhs_terms.iter().sum()
    }

    /// One-line text rendering.
    pub fn text(&self) -> String {
        let mut out = format!(
            "{:<10} {}  lhs={} rhs={} ratio={}",
            self.lemma,
            if self.pass {
                "pass"
            } else if self.asserted {
                "FAIL"
            } else {
                "info"
            },
            fmt_f64(self.lhs),
            fmt_f64(self.rhs_total()),
            fmt_f64(self.ratio),
        );
        if !self.rhs_terms.is_empty() {
            let terms: Vec<String> = self.rhs_terms.iter().map(|t| fmt_f64(*t)).collect();
            let _ = write!(out, " terms=[{}]", terms.join(", "));
        }
        for (k, v) in &self.flags {
            let _ = write!(out, " {k}={v}");
        }
        out
    }
}

/// Renders an `f64` for text reports (shortest round-trip form; explicit
/// `inf`/`NaN` spellings).
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_passed_ignores_reported_entries() {
        let mut r = ValidationReport::default();
        r.push("a", true, 1.0, ">= 0");
        r.push_reported("b", false, -1.0, "informational");
        assert!(r.all_passed());
        r.push("c", false, 2.0, "<= 1");
        assert!(!r.all_passed());
    }

    #[test]
    fn text_marks_failures() {
        let mut r = ValidationReport::default();
        r.push("alpha", false, f64::INFINITY, "finite");
        let t = r.text();
        assert!(t.contains("FAIL"));
        assert!(t.contains("inf"));
    }

    #[test]
    fn check_report_totals() {
        let c = CheckReport {
            lemma: "mvt".into(),
            lhs: 6.0,
            rhs_terms: vec![1.0, 2.0],
            ratio: 2.0,
            asserted: true,
            pass: true,
            flags: BTreeMap::new(),
        };
        assert_eq!(c.rhs_total(), 3.0);
        assert!(c.text().contains("mvt"));
    }

    #[test]
    fn json_round_trip() {
        let mut r = ValidationReport::default();
        r.push("x", true, 0.5, "in (0,1)");
        let s = serde_json::to_string(&r).unwrap();
        let back: ValidationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.checks.len(), 1);
        assert_eq!(back.checks[0].name, "x");
    }
}
