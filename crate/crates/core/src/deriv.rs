//! The pq-differential and pq-derivative.
//!
//! `D f(x) = (f(x^p) − f(x^q)) / (x^p − x^q)` away from the fixed points
//! `0` and `1`; at those points the value is the limit of the quotient,
//! which is estimated numerically along a geometric approach sequence.

use crate::error::{LimitEstimates, PqError, Result};
use crate::function::RealFunction;
use crate::lattice::PqParams;

/// Numerical policy for the limits `D f(0) = lim_{x→0+}` and
/// `D f(1) = lim_{x→1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitPolicy {
    /// First offset from the limit point.
    pub seq_start: f64,
    /// Ratio between successive offsets, in `(0, 1)`.
    pub shrink: f64,
    pub max_steps: usize,
    /// Successive estimates that must agree before the limit is accepted.
    pub stability_window: usize,
    pub tol: f64,
}

impl Default for LimitPolicy {
    fn default() -> Self {
        Self {
            seq_start: 0.5,
            shrink: 0.5,
            max_steps: 60,
            stability_window: 3,
            tol: 1e-9,
        }
    }
}

impl LimitPolicy {
    fn validate(&self) -> Result<()> {
        let ok = self.seq_start > 0.0
            && self.seq_start < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.max_steps > 0
            && self.stability_window >= 2
            && self.tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(PqError::InvalidArgument(format!(
                "invalid limit policy {self:?}"
            )))
        }
    }
}

// Deeper Richardson levels amplify rounding noise more than they help.
const MAX_RICHARDSON_LEVEL: usize = 6;

/// `d_pq f(x) = f(x^p) − f(x^q)`.
pub fn pq_differential(f: &RealFunction, x: f64, params: &PqParams) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(PqError::InvalidArgument(format!(
            "pq-differential needs x > 0, got {x}"
        )));
    }
    Ok(f.eval(x.powf(params.p()))? - f.eval(x.powf(params.q()))?)
}

/// The difference quotient at a point off the fixed points. The denominator
/// is formed from the same two evaluation points passed to `f`.
fn quotient(f: &RealFunction, x: f64, params: &PqParams) -> Result<f64> {
    let xp = x.powf(params.p());
    let xq = x.powf(params.q());
    let den = xp - xq;
    if den == 0.0 || !den.is_finite() {
        return Err(PqError::Range(format!(
            "x^p and x^q are numerically indistinguishable at x = {x}"
        )));
    }
    let value = (f.eval(xp)? - f.eval(xq)?) / den;
    if !value.is_finite() {
        return Err(PqError::NonFiniteValue { x, value });
    }
    Ok(value)
}

/// `D f(x)`, with the fixed points `0` (right limit) and `1` (two-sided
/// limit) handled by `policy`.
pub fn pq_derivative(
    f: &RealFunction,
    x: f64,
    params: &PqParams,
    policy: &LimitPolicy,
) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(PqError::InvalidArgument(format!(
            "pq-derivative needs x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return one_sided_limit(f, 0.0, 1.0, params, policy).map_err(|window| {
            PqError::LimitDidNotConverge {
                at: 0.0,
                estimates: LimitEstimates {
                    window,
                    ..LimitEstimates::default()
                },
            }
        });
    }
    if x == 1.0 {
        return limit_at_one(f, params, policy);
    }
    quotient(f, x, params)
}

fn limit_at_one(f: &RealFunction, params: &PqParams, policy: &LimitPolicy) -> Result<f64> {
    let below = one_sided_limit(f, 1.0, -1.0, params, policy);
    let above = one_sided_limit(f, 1.0, 1.0, params, policy);
    match (below, above) {
        (Ok(lo), Ok(hi)) => {
            let mid = 0.5 * (lo + hi);
            if (lo - hi).abs() <= policy.tol * mid.abs().max(1.0) {
                Ok(mid)
            } else {
                Err(PqError::LimitDidNotConverge {
                    at: 1.0,
                    estimates: LimitEstimates {
                        window: vec![lo, hi],
                        from_below: Some(lo),
                        from_above: Some(hi),
                    },
                })
            }
        }
        (Err(window), Ok(hi)) => Err(PqError::LimitDidNotConverge {
            at: 1.0,
            estimates: LimitEstimates {
                window,
                from_below: None,
                from_above: Some(hi),
            },
        }),
        (Ok(lo), Err(window)) => Err(PqError::LimitDidNotConverge {
            at: 1.0,
            estimates: LimitEstimates {
                window,
                from_below: Some(lo),
                from_above: None,
            },
        }),
        (Err(window), Err(_)) => Err(PqError::LimitDidNotConverge {
            at: 1.0,
            estimates: LimitEstimates {
                window,
                ..LimitEstimates::default()
            },
        }),
    }
}

/// Limit of the quotient along `at + direction·seq_start·shrink^k`.
///
/// The raw sequence is fed through a Richardson tableau assuming an error
/// expansion in integer powers of the offset; the limit is accepted as soon
/// as either the extrapolated diagonal or the raw sequence is stable over
/// `stability_window` entries. On failure the last window is returned.
fn one_sided_limit(
    f: &RealFunction,
    at: f64,
    direction: f64,
    params: &PqParams,
    policy: &LimitPolicy,
) -> std::result::Result<f64, Vec<f64>> {
    if policy.validate().is_err() {
        return Err(Vec::new());
    }
    let mut raw: Vec<f64> = Vec::new();
    let mut diagonal: Vec<f64> = Vec::new();
    let mut prev_row: Vec<f64> = Vec::new();
    let mut h = policy.seq_start;

    let stable = |seq: &[f64]| -> Option<f64> {
        let w = policy.stability_window;
        if seq.len() < w {
            return None;
        }
        let tail = &seq[seq.len() - w..];
        let last = *tail.last()?;
        let scale = last.abs().max(1.0);
        tail.windows(2)
            .all(|pair| (pair[1] - pair[0]).abs() <= policy.tol * scale)
            .then_some(last)
    };

    for _ in 0..policy.max_steps {
        let point = at + direction * h;
        if point == at || point <= 0.0 {
            break;
        }
        let value = match quotient(f, point, params) {
            Ok(v) => v,
            Err(_) => break,
        };
        raw.push(value);

        let mut row = Vec::with_capacity(prev_row.len() + 1);
        row.push(value);
        let mut factor = 1.0;
        for m in 1..=prev_row.len().min(MAX_RICHARDSON_LEVEL) {
            factor /= policy.shrink;
            let finer = row[m - 1];
            row.push(finer + (finer - prev_row[m - 1]) / (factor - 1.0));
        }
        diagonal.push(*row.last().expect("row is non-empty"));
        prev_row = row;

        if let Some(v) = stable(&diagonal) {
            return Ok(v);
        }
        if let Some(v) = stable(&raw) {
            return Ok(v);
        }
        h *= policy.shrink;
    }
    let w = policy.stability_window.min(diagonal.len());
    Err(diagonal[diagonal.len() - w..].to_vec())
}

/// `D^n f(x)` by direct recursion; evaluates `f` at `2^n` points.
pub fn pq_derivative_n(f: &RealFunction, x: f64, n: u32, params: &PqParams) -> Result<f64> {
    if n == 0 {
        return f.eval(x);
    }
    if !(x > 0.0) || x == 1.0 || !x.is_finite() {
        return Err(PqError::InvalidArgument(format!(
            "higher-order pq-derivative is defined only for x > 0, x != 1 (got x = {x})"
        )));
    }
    recurse(f, x, n, params)
}

fn recurse(f: &RealFunction, y: f64, n: u32, params: &PqParams) -> Result<f64> {
    if n == 0 {
        return f.eval(y);
    }
    if y == 1.0 || y <= 0.0 {
        return Err(PqError::InvalidArgument(format!(
            "recursion reached the fixed point {y}"
        )));
    }
    let yp = y.powf(params.p());
    let yq = y.powf(params.q());
    let den = yp - yq;
    if den == 0.0 {
        return Err(PqError::Range(format!(
            "x^p and x^q are numerically indistinguishable at x = {y}"
        )));
    }
    Ok((recurse(f, yp, n - 1, params)? - recurse(f, yq, n - 1, params)?) / den)
}

/// `D f` packaged as a function, with the default limit policy at the
/// fixed points.
pub fn derivative_function(f: &RealFunction, params: &PqParams) -> RealFunction {
    let f = f.clone();
    let params = *params;
    let domain = f.domain();
    RealFunction::fallible(domain, move |x| {
        pq_derivative(&f, x, &params, &LimitPolicy::default())
    })
}
