//! Parameters of the calculus and the geometry of the power orbit.
//!
//! For `0 < q < p < 1` and `r = q/p`, the orbit of `x > 0` is the sequence
//! of nodes `x^(r^j / p)`, `j ∈ ℤ`. Forward (`j → +∞`) it accumulates at the
//! fixed point `1`; backward it runs to `0` (for `x < 1`) or `∞` (for `x > 1`).
//! The weight attached to node `j` is `x^(r^j) − x^(r^(j+1))`, and the
//! forward weights telescope to `x − 1`.

use crate::error::{PqError, Result};
use crate::function::Interval;

/// Which set of standing assumptions a parameter pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `p ≠ 1`, `q ≠ 1`, `p ≠ q`.
    Derivative,
    /// `0 < q < p < 1`; implies the derivative constraints.
    Integration,
}

/// A validated deformation pair `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PqParams {
    p: f64,
    q: f64,
    mode: Mode,
}

impl PqParams {
    pub fn derivative(p: f64, q: f64) -> Result<Self> {
        if !p.is_finite() || !q.is_finite() {
            return Err(PqError::InvalidParams(format!(
                "p = {p}, q = {q} must be finite"
            )));
        }
        if p == 1.0 || q == 1.0 {
            return Err(PqError::InvalidParams(format!(
                "p = {p}, q = {q}: neither may equal 1"
            )));
        }
        if p == q {
            return Err(PqError::InvalidParams(format!("p = q = {p}")));
        }
        Ok(Self {
            p,
            q,
            mode: Mode::Derivative,
        })
    }

    pub fn integration(p: f64, q: f64) -> Result<Self> {
        if !(0.0 < q && q < p && p < 1.0) {
            return Err(PqError::InvalidParams(format!(
                "integration needs 0 < q < p < 1, got p = {p}, q = {q}"
            )));
        }
        Ok(Self {
            p,
            q,
            mode: Mode::Integration,
        })
    }

    /// Integration mode when the pair allows it, derivative mode otherwise.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Self::integration(p, q).or_else(|_| Self::derivative(p, q))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `q / p`, in `(0, 1)` under integration mode.
    pub fn ratio(&self) -> f64 {
        self.q / self.p
    }

    pub fn require_integration(&self) -> Result<()> {
        match self.mode {
            Mode::Integration => Ok(()),
            Mode::Derivative => Err(PqError::InvalidParams(format!(
                "operation needs integration mode (0 < q < p < 1), got p = {}, q = {}",
                self.p, self.q
            ))),
        }
    }
}

/// `x^e` for `x ≥ 0` in log space, exact at `x = 1` and `e = 0`.
pub(crate) fn pow(x: f64, e: f64) -> f64 {
    if x == 1.0 || e == 0.0 {
        1.0
    } else if x == 0.0 {
        if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (e * x.ln()).exp()
    }
}

/// `(q/p)^j` for any integer `j`.
pub fn exponent(j: i64, params: &PqParams) -> Result<f64> {
    params.require_integration()?;
    if j == 0 {
        return Ok(1.0);
    }
    let value = (j as f64 * (params.q.ln() - params.p.ln())).exp();
    if value.is_infinite() {
        return Err(PqError::Range(format!("(q/p)^{j} overflows")));
    }
    Ok(value)
}

/// The orbit node `x^((q/p)^j / p)`.
pub fn node(x: f64, j: i64, params: &PqParams) -> Result<f64> {
    check_positive(x)?;
    let e = exponent(j, params)? / params.p;
    let value = pow(x, e);
    if value.is_infinite() {
        return Err(PqError::Range(format!("node({x}, {j}) overflows")));
    }
    Ok(value)
}

/// The telescoping weight `x^((q/p)^j) − x^((q/p)^(j+1))`.
pub fn weight(x: f64, j: i64, params: &PqParams) -> Result<f64> {
    check_positive(x)?;
    let e = exponent(j, params)?;
    if x == 1.0 {
        return Ok(0.0);
    }
    let e_next = e * params.ratio();
    let ln_x = x.ln();
    let value = (e_next * ln_x).exp() * ((e - e_next) * ln_x).exp_m1();
    if !value.is_finite() {
        return Err(PqError::Range(format!("weight({x}, {j}) overflows")));
    }
    Ok(value)
}

/// Closure of the forward nodes `j ≥ 0` of `x`: `(1, x^(1/p)]` above one,
/// `[x^(1/p), 1)` below.
pub fn forward_orbit_range(x: f64, params: &PqParams) -> Result<Interval> {
    let first = node(x, 0, params)?;
    Ok(if x > 1.0 {
        Interval::new(1.0, first, false, true)
    } else if x < 1.0 {
        Interval::new(first, 1.0, true, false)
    } else {
        Interval::closed(1.0, 1.0)
    })
}

/// Closure of the backward nodes `j ≤ −1` of `x`: `[x^(1/q), ∞)` above one,
/// `(0, x^(1/q)]` below.
pub fn backward_orbit_range(x: f64, params: &PqParams) -> Result<Interval> {
    check_positive(x)?;
    params.require_integration()?;
    // Same arithmetic as `node(x, -1)` so the endpoint is the node itself.
    let first = pow(x, exponent(-1, params)? / params.p);
    Ok(if x > 1.0 {
        Interval::new(first, f64::INFINITY, true, false)
    } else if x < 1.0 {
        Interval::new(0.0, first, false, true)
    } else {
        Interval::closed(1.0, 1.0)
    })
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(PqError::InvalidArgument(format!(
            "orbit base must be a positive finite real, got {x}"
        )))
    }
}
