//! Numerical workbench for the distribution of smooth (friable) numbers in
//! short intervals.
//!
//! The crate bundles the ingredients that show up when one studies how many
//! integers free of large prime factors land in a window `[x, x+h]`:
//!
//! * [`dickman`] — a piecewise-Chebyshev table for the Dickman function
//!   `rho(u)`, with a log-scale evaluation path that stays accurate far past
//!   the point where `rho` underflows naive arithmetic.
//! * [`smooth`] — segmented least-prime-factor sieves, smooth counting
//!   `Psi(x, y)`, interval and pairwise variants, and smooth-set enumeration.
//! * [`params`] — the parameter cascade `(X, y) -> (u, sigma0, J, v, P1, P2,
//!   P3)` used by the weighted constructions, with validation and threshold
//!   formulas for the short-interval regime.
//! * [`weights`] — counts of ordered factorizations `n = q1 q2 p_1 ... p_J m`
//!   over prescribed prime windows, their envelope bound and average.
//! * [`dpoly`] — sparse Dirichlet polynomials, deterministic grid evaluation,
//!   mean values by adaptive quadrature, region partitions, and a family of
//!   mean-value/large-value inequality checks.
//! * [`mellin`] — a trapezoid smoothing weight, its closed-form Mellin
//!   transform, and an inversion self-test.
//! * [`scanner`] — exhaustive and seeded-sample scans measuring how often
//!   short windows miss smooth numbers, with gap statistics and empirical
//!   thresholds compared against the theoretical ones.
//! * [`acceptance`] — the end-to-end acceptance suite binding all of the
//!   above to frozen reference values.
//!
//! Everything is deterministic: given the same inputs (including seeds and
//! thread counts), every report is byte-identical. Randomized paths use a
//! counter-based generator ([`prng`]) so results do not depend on call order.
//!
//! ```
//! use friable::dickman::RhoTable;
//!
//! let table = RhoTable::build(10.0, 32, 1e-12).unwrap();
//! let rho2 = table.rho(2.0).unwrap();
//! assert!((rho2 - (1.0 - 2f64.ln())).abs() < 1e-12);
//! ```

pub mod acceptance;
pub mod dickman;
pub mod dpoly;
pub mod error;
pub mod mellin;
pub mod params;
pub mod prng;
pub mod report;
pub mod scanner;
pub mod smooth;
pub mod weights;

pub use error::{Error, Result};
