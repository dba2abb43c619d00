//! Region decomposition of a `t`-range by prime-polynomial size, and
//! well-spaced node extraction.
//!
//! The mean-value argument splits the integration range into three
//! regions: nodes where the first prime polynomial is already small
//! enough to win, nodes where it is not but the second one is, and the
//! remainder where neither is small and sparser tools (large-value and
//! discrete mean-value bounds) take over. The thresholds are powers of
//! the polynomials' dyadic scales with exponents `alpha1 = 1/4 - 4 beta`
//! and `alpha2 = 1/4 - 2 beta`.

use num_complex::Complex64;
use serde::Serialize;

use crate::dpoly::{pairwise_sum, DirichletPoly, TGrid};
use crate::error::{Error, Result};
use crate::params::ParamSet;

/// Node classification by which prime polynomial is small there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `|P1(1 + it)| <= P1^{-alpha1}`.
    FirstSmall,
    /// Not `FirstSmall`, and `|P2(1 + it)| <= P2^{-alpha2}`.
    SecondSmall,
    /// Neither polynomial is small.
    Neither,
}

/// Per-node labels with the thresholds that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct RegionPartition {
    pub labels: Vec<Region>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    /// `P1^{-alpha1}`: the modulus threshold for the first region.
    pub threshold1: f64,
    /// `P2^{-alpha2}`.
    pub threshold2: f64,
}

impl RegionPartition {
    /// Node counts as `[first_small, second_small, neither]`.
    pub fn counts(&self) -> [usize; 3] {
        let mut c = [0usize; 3];
        for l in &self.labels {
            c[*l as usize] += 1;
        }
        c
    }
}

/// Labels every grid node. `beta` must lie in `(0, 1/16)` so both
/// exponents stay positive; both polynomials must sit on dyadic blocks
/// (their scales come from [`DirichletPoly::dyadic_anchor`]).
pub fn partition_regions(
    p1: &DirichletPoly,
    p2: &DirichletPoly,
    grid: &TGrid,
    beta: f64,
) -> Result<RegionPartition> {
    if !(beta > 0.0 && beta < 1.0 / 16.0) {
        return Err(Error::Domain(format!(
            "beta must lie in (0, 1/16), got {beta}"
        )));
    }
    let alpha1 = 0.25 - 4.0 * beta;
    let alpha2 = 0.25 - 2.0 * beta;
    let scale1 = p1.dyadic_anchor()?;
    let scale2 = p2.dyadic_anchor()?;
    let threshold1 = scale1.powf(-alpha1);
    let threshold2 = scale2.powf(-alpha2);
    let v1 = grid.power_values(p1, 1.0);
    let v2 = grid.power_values(p2, 1.0);
    let labels = v1
        .iter()
        .zip(&v2)
        .map(|(&a, &b)| {
            if a <= threshold1 * threshold1 {
                Region::FirstSmall
            } else if b <= threshold2 * threshold2 {
                Region::SecondSmall
            } else {
                Region::Neither
            }
        })
        .collect();
    Ok(RegionPartition {
        labels,
        alpha1,
        alpha2,
        beta,
        threshold1,
        threshold2,
    })
}

/// Mean-value mass split by region, with the envelope the full-range
/// integral is expected to obey.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub node_counts: [usize; 3],
    /// Quadrature mass of `|F(1 + it)|^2` per region, in label order.
    pub contributions: [f64; 3],
    /// Sum of the three contributions: the whole-grid Simpson integral.
    pub total: f64,
    /// Reference envelope terms (first-region scale, second/third-region
    /// scale, and the trivial-tail term), evaluated from the parameter
    /// set in log space. Informational: the inequality carries implicit
    /// constants.
    pub reference_terms: [f64; 3],
    /// `total / sum(reference_terms)`.
    pub ratio: f64,
}

/// Splits the Simpson mass of `|f|^2` over the partition labels and
/// evaluates the reference envelope from `params`. The per-region values
/// sum to the whole-grid Simpson integral exactly (each node's mass goes
/// to its label).
pub fn region_contributions(
    f: &DirichletPoly,
    parts: &RegionPartition,
    grid: &TGrid,
    params: &ParamSet,
) -> Result<RegionReport> {
    if parts.labels.len() != grid.n_nodes() {
        return Err(Error::InvalidInput(format!(
            "partition has {} labels for a grid of {} nodes",
            parts.labels.len(),
            grid.n_nodes()
        )));
    }
    let values = grid.power_values(f, 1.0);
    let mut per_label: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (i, (&v, &l)) in values.iter().zip(&parts.labels).enumerate() {
        per_label[l as usize].push(grid.quadrature_weight(i) * v);
    }
    let contributions = [
        pairwise_sum(&per_label[0]),
        pairwise_sum(&per_label[1]),
        pairwise_sum(&per_label[2]),
    ];
    let total = contributions.iter().sum();

    let lr = params.rho_log_u_minus_v;
    let eps = params.epsilon;
    let ln_p1 = params.p1.ln();
    // Common prefactor P1^{-1/2 + 64 eta} (ln X)^2 / (ln P2 (ln P3)^J)^2.
    let common = (-0.5 + 64.0 * params.eta) * ln_p1 + 2.0 * params.x.ln().ln()
        - 2.0 * (params.p2.ln().ln() + params.j as f64 * params.p3.ln().ln());
    let t_end = grid.t_end;
    let term1 = (common + ln_p1 + t_end.ln() - params.x.ln() + (1.0 - eps) * lr).exp();
    let term2 = (common + (params.phi - eps) * lr).exp();
    let term3 = (25.0 * (lr - params.j as f64 * params.x.ln().ln())).exp();
    let rhs = term1 + term2 + term3;
    let ratio = if total == 0.0 && rhs == 0.0 {
        0.0
    } else {
        total / rhs
    };
    Ok(RegionReport {
        beta: parts.beta,
        alpha1: parts.alpha1,
        alpha2: parts.alpha2,
        node_counts: parts.counts(),
        contributions,
        total,
        reference_terms: [term1, term2, term3],
        ratio,
    })
}

/// Reals with pairwise distance at least 1, sorted ascending.
#[derive(Debug, Clone, Serialize)]
pub struct WellSpacedSet {
    ts: Vec<f64>,
}

impl WellSpacedSet {
    /// Validates spacing on construction.
    pub fn new(mut ts: Vec<f64>) -> Result<Self> {
        if ts.iter().any(|t| !t.is_finite()) {
            return Err(Error::Domain("well-spaced points must be finite".into()));
        }
        ts.sort_by(f64::total_cmp);
        for pair in ts.windows(2) {
            if pair[1] - pair[0] < 1.0 {
                return Err(Error::InvalidInput(format!(
                    "points {} and {} are closer than 1",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(WellSpacedSet { ts })
    }

    pub fn points(&self) -> &[f64] {
        &self.ts
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }
}

/// Greedy extraction of a well-spaced subset of the grid nodes whose
/// value meets `threshold`: nodes are taken in decreasing value order
/// (ties to smaller `t`), each kept iff at distance >= 1 from every kept
/// node. Every discarded above-threshold node therefore lies within
/// distance 1 of a kept one.
pub fn extract_well_spaced(grid: &TGrid, values: &[f64], threshold: f64) -> Result<WellSpacedSet> {
    if values.len() != grid.n_nodes() {
        return Err(Error::InvalidInput(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.n_nodes()
        )));
    }
    let mut candidates: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= threshold)
        .map(|(i, &v)| (v, grid.node(i)))
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let mut kept: Vec<f64> = Vec::new();
    for (_, t) in candidates {
        if kept.iter().all(|&k| (k - t).abs() >= 1.0) {
            kept.push(t);
        }
    }
    WellSpacedSet::new(kept)
}

/// Evaluation of a polynomial over a well-spaced set on the `it` line;
/// the carrier for discrete mean-value sums.
pub fn eval_on_set(poly: &DirichletPoly, ws: &WellSpacedSet) -> Vec<Complex64> {
    ws.points()
        .iter()
        .map(|&t| poly.eval_unnormalized(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickman::RhoTable;
    use crate::dpoly::mean_value;
    use crate::params::ParamSet;

    fn toy_partition() -> (DirichletPoly, DirichletPoly, TGrid, RegionPartition) {
        let p1 = DirichletPoly::from_primes(16.0, 32.0).unwrap();
        let p2 = DirichletPoly::from_primes(32.0, 64.0).unwrap();
        let grid = TGrid::build(1.0, 20.0, (64.0f64).ln(), 64).unwrap();
        let parts = partition_regions(&p1, &p2, &grid, 1.0 / 32.0).unwrap();
        (p1, p2, grid, parts)
    }

    #[test]
    fn threshold_exponents() {
        let (_, _, grid, parts) = toy_partition();
        assert!((parts.alpha1 - 0.125).abs() < 1e-15);
        assert!((parts.alpha2 - 0.1875).abs() < 1e-15);
        assert_eq!(parts.labels.len(), grid.n_nodes());
        // Exhaustive and disjoint by construction: counts add up.
        let c = parts.counts();
        assert_eq!(c[0] + c[1] + c[2], grid.n_nodes());
    }

    #[test]
    fn labels_follow_direct_comparison() {
        let (p1, p2, grid, parts) = toy_partition();
        for i in (0..grid.n_nodes()).step_by(97) {
            let t = grid.node(i);
            let a = p1.eval(t).norm();
            let b = p2.eval(t).norm();
            let expect = if a <= parts.threshold1 {
                Region::FirstSmall
            } else if b <= parts.threshold2 {
                Region::SecondSmall
            } else {
                Region::Neither
            };
            assert_eq!(parts.labels[i], expect, "node {i}");
        }
    }

    #[test]
    fn beta_domain_is_enforced() {
        let p1 = DirichletPoly::from_primes(4.0, 8.0).unwrap();
        let grid = TGrid::build(0.0, 4.0, 2.0, 8).unwrap();
        assert!(partition_regions(&p1, &p1, &grid, 0.0).is_err());
        assert!(partition_regions(&p1, &p1, &grid, 0.0625).is_err());
    }

    #[test]
    fn contributions_sum_to_whole_integral() {
        let rho = RhoTable::build(12.0, 32, 1e-12).unwrap();
        let params =
            ParamSet::toy(256.0, 60.0, 0.1, 1.0 / 256.0, 2.0, 0.05, 1, 16.0, 32.0, 4.0, &rho)
                .unwrap();
        let p1 = DirichletPoly::from_primes(16.0, 32.0).unwrap();
        let p2 = DirichletPoly::from_primes(32.0, 64.0).unwrap();
        let m = DirichletPoly::from_members(&[1, 2, 3]).unwrap();
        let f = p1
            .multiply(&p2)
            .unwrap()
            .multiply(&DirichletPoly::from_primes(4.0, 8.0).unwrap())
            .unwrap()
            .multiply(&m)
            .unwrap();
        let grid = TGrid::for_poly(1.0, 20.0, &f, 256).unwrap();
        let parts = partition_regions(&p1, &p2, &grid, 1.0 / 32.0).unwrap();
        let rep = region_contributions(&f, &parts, &grid, &params).unwrap();
        let direct = grid.simpson(&grid.power_values(&f, 1.0)).unwrap();
        assert!((rep.total - direct).abs() <= 1e-12 * direct.max(1e-300));
        // The same grid integral agrees with the refined mean value to
        // quadrature accuracy.
        let refined = mean_value(&f, 1.0, 20.0, 1e-8).unwrap();
        assert!((rep.total - refined).abs() <= 1e-3 * refined);
        assert!(rep.ratio.is_finite() && rep.ratio > 0.0);
        for term in rep.reference_terms {
            assert!(term.is_finite() && term >= 0.0);
        }
    }

    #[test]
    fn zero_polynomial_contributes_nothing() {
        let rho = RhoTable::build(12.0, 32, 1e-12).unwrap();
        let params =
            ParamSet::toy(256.0, 60.0, 0.1, 1.0 / 256.0, 2.0, 0.05, 1, 16.0, 32.0, 4.0, &rho)
                .unwrap();
        let (_, _, grid, parts) = toy_partition();
        let zero = DirichletPoly::new(Vec::<(u64, f64)>::new()).unwrap();
        let rep = region_contributions(&zero, &parts, &grid, &params).unwrap();
        assert_eq!(rep.contributions, [0.0, 0.0, 0.0]);
        assert_eq!(rep.total, 0.0);
    }

    #[test]
    fn well_spaced_invariant() {
        assert!(WellSpacedSet::new(vec![3.0, 1.0, 2.5]).is_err());
        let ok = WellSpacedSet::new(vec![5.0, 1.0, 3.0]).unwrap();
        assert_eq!(ok.points(), &[1.0, 3.0, 5.0]);
        assert!(WellSpacedSet::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn greedy_extraction_cases() {
        let grid = TGrid::build(0.0, 4.0, 1.0, 8).unwrap();
        let n = grid.n_nodes();
        // Below threshold everywhere: empty.
        let low = vec![0.1; n];
        assert!(extract_well_spaced(&grid, &low, 0.5).unwrap().is_empty());
        // Single spike: singleton at its node.
        let mut spike = vec![0.0; n];
        spike[2] = 9.0;
        let s = extract_well_spaced(&grid, &spike, 0.5).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.points()[0] - grid.node(2)).abs() < 1e-12);
        // Two spikes half a unit apart: only the larger survives.
        let i = 0;
        let j = grid.n_intervals / 8; // node at t = 0.5
        let mut two = vec![0.0; n];
        two[i] = 1.0;
        two[j] = 2.0;
        let t = extract_well_spaced(&grid, &two, 0.5).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t.points()[0] - grid.node(j)).abs() < 1e-12);
        // Discarded above-threshold nodes are within 1 of a kept node.
        let vals: Vec<f64> = (0..n).map(|k| ((k * 37) % 100) as f64 / 100.0).collect();
        let ws = extract_well_spaced(&grid, &vals, 0.4).unwrap();
        for (k, &v) in vals.iter().enumerate() {
            if v >= 0.4 {
                let t = grid.node(k);
                assert!(ws.points().iter().any(|&p| (p - t).abs() < 1.0 + 1e-12));
            }
        }
    }
}
