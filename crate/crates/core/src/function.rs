//! Real functions with an explicit domain.
//!
//! Every evaluation goes through [`RealFunction::eval`], which refuses points
//! outside the declared [`Interval`] instead of silently extrapolating.

use std::fmt;
use std::sync::Arc;

use crate::error::{PqError, Result};

/// An interval of the extended non-negative reals. Endpoints may be `0` or
/// `f64::INFINITY`; an infinite endpoint is always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    pub lower_closed: bool,
    pub upper_closed: bool,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, lower_closed: bool, upper_closed: bool) -> Self {
        Self {
            lower,
            upper,
            lower_closed: lower_closed && lower.is_finite(),
            upper_closed: upper_closed && upper.is_finite(),
        }
    }

    pub fn closed(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, true, true)
    }

    pub fn open(lower: f64, upper: f64) -> Self {
        Self::new(lower, upper, false, false)
    }

    /// `[0, ∞)`, the default domain of the calculus.
    pub fn non_negative() -> Self {
        Self::new(0.0, f64::INFINITY, true, false)
    }

    /// `(0, ∞)`.
    pub fn positive() -> Self {
        Self::open(0.0, f64::INFINITY)
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lower_closed {
            x >= self.lower
        } else {
            x > self.lower
        };
        let below = if self.upper_closed {
            x <= self.upper
        } else {
            x < self.upper
        };
        above && below
    }

    /// Whether every point of `other` lies in `self`.
    pub fn covers(&self, other: &Interval) -> bool {
        let lower_ok = self.lower < other.lower
            || (self.lower == other.lower && (self.lower_closed || !other.lower_closed));
        let upper_ok = self.upper > other.upper
            || (self.upper == other.upper && (self.upper_closed || !other.upper_closed));
        lower_ok && upper_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lower_closed { '[' } else { '(' };
        let close = if self.upper_closed { ']' } else { ')' };
        let upper = if self.upper.is_infinite() {
            "inf".to_string()
        } else {
            self.upper.to_string()
        };
        write!(f, "{open}{}, {upper}{close}", self.lower)
    }
}

type Evaluator = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// An evaluable real function of one positive variable.
///
/// Cloning is cheap; the evaluator is shared.
#[derive(Clone)]
pub struct RealFunction {
    eval: Arc<Evaluator>,
    domain: Interval,
}

impl RealFunction {
    /// Wraps an infallible closure.
    pub fn new<F>(domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(move |x| Ok(f(x))),
            domain,
        }
    }

    /// Wraps a closure that can report its own evaluation faults.
    pub fn fallible<F>(domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            domain,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Interval::non_negative(), move |_| c)
    }

    pub fn identity() -> Self {
        Self::new(Interval::non_negative(), |x| x)
    }

    /// `x ↦ x^n` on `[0, ∞)`.
    pub fn power(n: f64) -> Self {
        Self::new(Interval::non_negative(), move |x| x.powf(n))
    }

    /// Natural logarithm on `(0, ∞)`.
    pub fn ln() -> Self {
        Self::new(Interval::positive(), f64::ln)
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    /// Evaluates at `x`, rejecting points outside the domain and non-finite
    /// results.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(PqError::OutsideDomain {
                x,
                domain: self.domain,
            });
        }
        let value = (self.eval)(x)?;
        if !value.is_finite() {
            return Err(PqError::NonFiniteValue { x, value });
        }
        Ok(value)
    }

    /// Fails early when `required` is not contained in the domain.
    pub fn require(&self, required: Interval) -> Result<()> {
        if self.domain.covers(&required) {
            Ok(())
        } else {
            Err(PqError::DomainTooNarrow {
                required,
                domain: self.domain,
            })
        }
    }

    /// Pointwise `a·f + b·g` on the intersection of both domains.
    pub fn linear_combination(a: f64, f: &RealFunction, b: f64, g: &RealFunction) -> Self {
        let (f, g) = (f.clone(), g.clone());
        let domain = intersect(f.domain, g.domain);
        Self::fallible(domain, move |x| Ok(a * f.eval(x)? + b * g.eval(x)?))
    }

    pub fn product(f: &RealFunction, g: &RealFunction) -> Self {
        let (f, g) = (f.clone(), g.clone());
        let domain = intersect(f.domain, g.domain);
        Self::fallible(domain, move |x| Ok(f.eval(x)? * g.eval(x)?))
    }

    /// Pointwise `f / g`; a zero denominator is reported, not turned into ∞.
    pub fn quotient(f: &RealFunction, g: &RealFunction) -> Self {
        let (f, g) = (f.clone(), g.clone());
        let domain = intersect(f.domain, g.domain);
        Self::fallible(domain, move |x| {
            let den = g.eval(x)?;
            if den == 0.0 {
                return Err(PqError::DivisionByZero { at: x });
            }
            Ok(f.eval(x)? / den)
        })
    }

    /// `x ↦ f(x^e)`, defined wherever `x^e` lands in the domain of `f`.
    pub fn compose_power(f: &RealFunction, e: f64) -> Self {
        let f = f.clone();
        Self::fallible(Interval::non_negative(), move |x| f.eval(x.powf(e)))
    }
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

fn intersect(a: Interval, b: Interval) -> Interval {
    let (lower, lower_closed) = match a.lower.partial_cmp(&b.lower) {
        Some(std::cmp::Ordering::Greater) => (a.lower, a.lower_closed),
        Some(std::cmp::Ordering::Less) => (b.lower, b.lower_closed),
        _ => (a.lower, a.lower_closed && b.lower_closed),
    };
    let (upper, upper_closed) = match a.upper.partial_cmp(&b.upper) {
        Some(std::cmp::Ordering::Less) => (a.upper, a.upper_closed),
        Some(std::cmp::Ordering::Greater) => (b.upper, b.upper_closed),
        _ => (a.upper, a.upper_closed && b.upper_closed),
    };
    Interval::new(lower, upper, lower_closed, upper_closed)
}
