//! Numerical engine for the pq-calculus, where the difference quotient is
//! taken between the power points `x^p` and `x^q` instead of shifted or
//! scaled points.
//!
//! * [`deriv`]: the pq-derivative, its higher orders and limits at 0 and 1.
//! * [`integral`]: series antiderivatives, definite, Stieltjes and improper
//!   integrals, with hypothesis checks for convergence.
//! * [`laws`]: residual checks for the product, quotient, inverse and
//!   fundamental-theorem identities.
//! * [`cli`]: expression parser and command runner behind the `pqcalc` binary.
//!
//! ```
//! use pqcalc::{definite_integral, PqParams, RealFunction, SeriesConfig};
//!
//! let params = PqParams::integration(0.8, 0.4).unwrap();
//! let five = RealFunction::constant(5.0);
//! let r = definite_integral(1.0, 4.0, &five, &params, &SeriesConfig::default()).unwrap();
//! assert!((r.value - 15.0).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod deriv;
pub mod error;
pub mod function;
pub mod integral;
pub mod lattice;
pub mod laws;
pub mod series;

pub use deriv::{
    derivative_function, pq_derivative, pq_derivative_n, pq_differential, LimitPolicy,
};
pub use error::{LimitEstimates, PqError, Result};
pub use function::{Interval, RealFunction};
pub use integral::{
    antiderivative_series, definite_integral, definite_outcome, improper_integral, integral_n,
    integral_with_dg, stieltjes_integral, Bound, CaseTag, IntegralOutcome, IntegralRequest,
};
pub use lattice::{Mode, PqParams};
pub use laws::{LawReport, Sample};
pub use series::{sum_series, SeriesConfig, SeriesResult, Status};
