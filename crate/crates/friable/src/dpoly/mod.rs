//! Sparse Dirichlet polynomials and their mean-value machinery.
//!
//! The submodules split along the data flow:
//!
//! * [`poly`]: the [`DirichletPoly`] type — sorted sparse nonnegative
//!   coefficients, line evaluation, and exact sparse multiplication.
//! * [`grid`]: uniform `t`-grids whose step resolves the fastest
//!   oscillation of the polynomial, Simpson quadrature, and the refining
//!   [`mean_value`] integrator.
//! * [`regions`]: splitting a `t`-range by where the two outer prime
//!   polynomials are small, per-region mean-value contributions, and
//!   greedy extraction of well-spaced node sets.
//! * [`checks`]: measured forms of the classical mean-value, moment,
//!   large-value, discrete mean-value, and pointwise inequalities.
//! * [`parseval`]: the short-interval discrepancy identity that converts
//!   averages of a weight window into an `L^2` integral of its
//!   polynomial.
//!
//! Everything here is deterministic at any thread count: node evaluation
//! is chunked at a fixed width, and every floating-point reduction is a
//! fixed-order pairwise tree.

pub mod checks;
pub mod grid;
pub mod parseval;
pub mod poly;
pub mod regions;

pub use checks::{
    halasz_montgomery_check, improved_mvt_check, large_values_check, moment_check, mvt_check,
    pointwise_bound_check, DEFAULT_C_CHECK,
};
pub use grid::{mean_value, mean_value_at, TGrid};
pub use parseval::parseval_discrepancy;
pub use poly::DirichletPoly;
pub use regions::{
    extract_well_spaced, partition_regions, region_contributions, Region, RegionPartition,
    RegionReport, WellSpacedSet,
};

/// Fixed-order pairwise (tree) summation. Reduction order depends only on
/// the slice layout, so results are bit-identical run to run.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise summation for complex accumulators.
pub(crate) fn pairwise_sum_complex(xs: &[num_complex::Complex64]) -> num_complex::Complex64 {
    if xs.len() <= 8 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_sequential_on_smooth_data() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let seq: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - seq).abs() < 1e-9);
    }

    #[test]
    fn pairwise_is_exact_on_integers() {
        let xs: Vec<f64> = (1..=4096).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), (4096.0 * 4097.0) / 2.0);
    }
}
