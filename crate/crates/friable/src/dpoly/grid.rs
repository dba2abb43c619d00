//! Uniform `t`-grids and mean-value quadrature.
//!
//! A polynomial term `n^{-it}` oscillates with angular rate `ln n`, so a
//! grid whose step is at most `pi / (4 ln n_max)` samples the fastest
//! term at least eight times per period. [`mean_value_at`] starts there
//! and keeps halving the step until Simpson's rule stabilizes to the
//! requested relative tolerance.
//!
//! Node evaluation walks each polynomial term across a fixed 1024-node
//! chunk with one complex rotation per step instead of a sine/cosine per
//! (term, node) pair. Chunks are aligned to absolute node indices, so the
//! result is independent of how many threads process them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dpoly::{pairwise_sum, DirichletPoly};
use crate::error::{Error, Result};

/// Nodes per evaluation chunk; also the bound on incremental-rotation
/// drift, which stays near 1024 ulps, far below quadrature tolerances.
const CHUNK: usize = 1024;
/// Hard cap on nodes of a single grid.
const MAX_NODES: usize = 1 << 22;
/// Step-halving rounds before giving up.
const MAX_REFINES: u32 = 14;

/// A uniform quadrature grid on `[t_start, t_end]` with an even number of
/// intervals (Simpson's rule needs node pairs).
#[derive(Debug, Clone, Serialize)]
pub struct TGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_intervals: usize,
}

impl TGrid {
    /// Builds a grid whose step is at most `pi / (4 * log_n_max)` and
    /// which has at least `min_intervals` intervals. `log_n_max` below 1
    /// imposes no oscillation constraint.
    pub fn build(
        t_start: f64,
        t_end: f64,
        log_n_max: f64,
        min_intervals: usize,
    ) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_end <= t_start {
            return Err(Error::Domain(format!(
                "grid range [{t_start}, {t_end}] must be finite and increasing"
            )));
        }
        let span = t_end - t_start;
        let max_step = std::f64::consts::PI / (4.0 * log_n_max.max(1.0));
        let needed = (span / max_step).ceil() as usize;
        let mut n = needed.max(min_intervals).max(2);
        n += n & 1;
        if n + 1 > MAX_NODES {
            return Err(Error::Capacity(format!(
                "grid needs {} nodes, above the cap {MAX_NODES}",
                n + 1
            )));
        }
        Ok(TGrid {
            t_start,
            t_end,
            n_intervals: n,
        })
    }

    /// Grid for evaluating `poly`, step bound from its largest support
    /// point.
    pub fn for_poly(
        t_start: f64,
        t_end: f64,
        poly: &DirichletPoly,
        min_intervals: usize,
    ) -> Result<Self> {
        let log_max = poly.n_max().map_or(1.0, |n| (n as f64).ln());
        Self::build(t_start, t_end, log_max, min_intervals)
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / self.n_intervals as f64
    }

    pub fn n_nodes(&self) -> usize {
        self.n_intervals + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.step()
    }

    /// `|sum_n a_n n^{-sigma} e^{-i t ln n}|^2` at every node.
    pub fn power_values(&self, poly: &DirichletPoly, sigma: f64) -> Vec<f64> {
        let weights = poly.line_weights(sigma);
        let logs = poly.logs();
        let n_nodes = self.n_nodes();
        let step = self.step();
        let n_chunks = n_nodes.div_ceil(CHUNK);
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let len = CHUNK.min(n_nodes - start);
                let t0 = self.node(start);
                let mut acc = vec![Complex64::new(0.0, 0.0); len];
                for (&w, &lg) in weights.iter().zip(logs) {
                    let mut phase = Complex64::from_polar(1.0, -t0 * lg);
                    let rot = Complex64::from_polar(1.0, -step * lg);
                    for a in acc.iter_mut() {
                        *a += w * phase;
                        phase *= rot;
                    }
                }
                acc.into_iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>()
            })
            .collect::<Vec<Vec<f64>>>()
            .concat()
    }

    /// Composite Simpson weights applied to per-node values; the values
    /// slice must match the grid.
    pub fn simpson(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.n_nodes() {
            return Err(Error::InvalidInput(format!(
                "simpson: {} values for a grid of {} nodes",
                values.len(),
                self.n_nodes()
            )));
        }
        let weighted: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let c = if i == 0 || i == self.n_intervals {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * v
            })
            .collect();
        Ok(pairwise_sum(&weighted) * self.step() / 3.0)
    }

    /// The Simpson coefficient (including the `step / 3` factor) of node
    /// `i`, for quadratures that split one grid's mass by node labels.
    pub fn quadrature_weight(&self, i: usize) -> f64 {
        let c = if i == 0 || i == self.n_intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        c * self.step() / 3.0
    }
}

/// `int_{t0}^{t1} |sum_n a_n n^{-sigma - it}|^2 dt` by Simpson quadrature
/// with step halving until two successive estimates agree to relative
/// `tol`.
pub fn mean_value_at(
    poly: &DirichletPoly,
    sigma: f64,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<f64> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!(
            "quadrature tolerance must lie in (0, 1), got {tol}"
        )));
    }
    if t0 == t1 || poly.is_empty() {
        if t1 < t0 {
            return Err(Error::Domain(format!("empty t-range [{t0}, {t1}]")));
        }
        return Ok(0.0);
    }
    let mut grid = TGrid::for_poly(t0, t1, poly, 64)?;
    let mut prev = grid.simpson(&grid.power_values(poly, sigma))?;
    for _ in 0..MAX_REFINES {
        grid = TGrid::for_poly(t0, t1, poly, grid.n_intervals * 2)?;
        let cur = grid.simpson(&grid.power_values(poly, sigma))?;
        if (cur - prev).abs() <= tol * cur.abs().max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "mean value on [{t0}, {t1}] still moving after {MAX_REFINES} refinements (last {prev})"
    )))
}

/// Mean value on the line `1 + it`, the normalization the factored
/// polynomial is integrated on.
pub fn mean_value(poly: &DirichletPoly, t0: f64, t1: f64, tol: f64) -> Result<f64> {
    mean_value_at(poly, 1.0, t0, t1, tol)
}
