//! Minimum-diameter augmentation of a metric path by one edge.
//!
//! Given vertices `v_1 .. v_n` in a metric space, joined in order into a
//! path, find the edge `(v_i, v_j)` whose addition minimises the diameter
//! of the resulting graph. [`solve`] does this in O(n log n) time on top of
//! a linear-time threshold test, [`decide`].
//!
//! Everything is generic over the distance type through [`Scalar`]: `f64`
//! and `f32` for Euclidean inputs, `i64` and [`Rational64`] for exact
//! distance matrices.
//!
//! ```
//! use doap::{solve, Path64};
//!
//! let square = Path64::from_points(&[
//!     vec![0.0, 0.0],
//!     vec![1.0, 0.0],
//!     vec![1.0, 1.0],
//!     vec![0.0, 1.0],
//! ])
//! .unwrap();
//! let best = solve(&square);
//! assert_eq!(best.lambda_star, 2.0);
//! assert_eq!((best.edge.i, best.edge.j), (1, 4));
//! ```

pub mod decision;
pub mod error;
pub mod instances;
pub mod matrix_search;
pub mod metric;
pub mod optimize;
pub mod oracle;
pub mod rmq;
pub mod scalar;

pub use num_rational::Rational64;

pub use decision::{decide, DecisionOutcome};
pub use error::{Error, Result};
pub use metric::{CandidateEdge, DiagnosticProfile, MetricPath};
pub use optimize::{solve, SolveResult, SolveStats};
pub use scalar::{RealScalar, Scalar, Threshold};

pub type Path64 = MetricPath<f64>;
pub type Path32 = MetricPath<f32>;
pub type IntegerPath = MetricPath<i64>;
pub type ExactPath = MetricPath<Rational64>;
