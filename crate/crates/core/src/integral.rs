//! Series pq-integrals: the antiderivative series, the definite integral in
//! all of its cases, `∫ f d_pq g`, higher-order and improper integrals, and
//! numeric advisories for the convergence hypotheses.
//!
//! Everything reduces to two one-sided orbit sums around a base `x`:
//!
//! * forward, `Σ_{j≥0} Δ_j · f(node(x, j))`, which is `∫_1^x` (signed);
//! * backward, `Σ_{j≤−1} Δ_j · f(node(x, j))`, which is `∫_x^∞` for `x > 1`
//!   and `−∫_0^x` for `x < 1`;
//!
//! where `Δ_j` is either the weight `x^(r^j) − x^(r^(j+1))` (integration
//! against `d_pq x`) or `g(x^(r^j)) − g(x^(r^(j+1)))` (against `d_pq g`).
//!
//! | region            | value                                   |
//! |-------------------|-----------------------------------------|
//! | `∫_1^b`, `b > 1`  | forward(b)                              |
//! | `∫_b^1`, `b < 1`  | −forward(b)                             |
//! | `∫_0^b`, `b < 1`  | −backward(b)                            |
//! | `∫_a^∞`, `a > 1`  | backward(a)                             |
//! | `∫_1^∞`           | forward(p/q) + backward(p/q)            |
//! | `∫_0^1`           | −forward(p) − backward(p)               |
//!
//! The node used below one is `b^(r^(−j)/q)`, i.e. `node(b, −(j+1))`. It is
//! the node for which `D` inverts `∫_0^b`; the nearby choice
//! `b^(p·r^(−j))` does not satisfy `∫_0^b D F = F(b) − F(0)`.
//!
//! For the `ln x / (x^p − x^q)` integrand on `(1, 3]` this gives
//! `ln 3 / (p − q)`. Evaluating the logarithm at `3^(r^j)` while cancelling
//! the denominator against the weight gives `p·ln 3 / (p − q)` instead; that
//! reading does not correspond to integrating the stated integrand at any
//! single node rule and is not implemented.

use std::collections::HashMap;

use crate::error::{PqError, Result};
use crate::function::{Interval, RealFunction};
use crate::lattice::{self, PqParams};
use crate::series::{sum_series, SeriesConfig, SeriesResult, Status};

/// Upper integration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinity,
}

impl Bound {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Bound::Finite(v) => Some(*v),
            Bound::Infinity => None,
        }
    }
}

impl From<f64> for Bound {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Bound::Infinity
        } else {
            Bound::Finite(v)
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `1 ≤ a < b < ∞`.
    AboveOne,
    /// `0 < a < 1 = b`.
    BelowOneToOne,
    /// `0 ≤ a < b < 1`.
    ZeroToB,
    /// `0 ≤ a < 1 < b < ∞`.
    SplitAcrossOne,
    /// `[1, ∞)`.
    ImproperFromOne,
    /// `[0, 1]`, a bilateral sum.
    ImproperZeroOne,
    /// `[0, ∞)`.
    ImproperZeroInf,
    /// `[a, ∞)` with `a ∉ {0, 1}`.
    ImproperFromA,
}

impl CaseTag {
    pub fn is_improper(&self) -> bool {
        matches!(
            self,
            CaseTag::ImproperFromOne
                | CaseTag::ImproperZeroOne
                | CaseTag::ImproperZeroInf
                | CaseTag::ImproperFromA
        )
    }
}

/// Integration bounds together with their case classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralRequest {
    lower: f64,
    upper: Bound,
    case_tag: CaseTag,
}

impl IntegralRequest {
    /// Classifies `[lower, upper]`. Requires `0 ≤ lower < upper`.
    pub fn new(lower: f64, upper: impl Into<Bound>) -> Result<Self> {
        let upper = upper.into();
        if !(lower >= 0.0) || !lower.is_finite() {
            return Err(PqError::InvalidArgument(format!(
                "lower bound must be a finite non-negative real, got {lower}"
            )));
        }
        let case_tag = match upper {
            Bound::Infinity => {
                if lower == 0.0 {
                    CaseTag::ImproperZeroInf
                } else if lower == 1.0 {
                    CaseTag::ImproperFromOne
                } else {
                    CaseTag::ImproperFromA
                }
            }
            Bound::Finite(b) => {
                if !(b > lower) || !b.is_finite() {
                    return Err(PqError::InvalidArgument(format!(
                        "bounds must satisfy 0 <= a < b, got a = {lower}, b = {b}"
                    )));
                }
                if lower >= 1.0 {
                    CaseTag::AboveOne
                } else if b == 1.0 {
                    if lower == 0.0 {
                        CaseTag::ImproperZeroOne
                    } else {
                        CaseTag::BelowOneToOne
                    }
                } else if b < 1.0 {
                    CaseTag::ZeroToB
                } else {
                    CaseTag::SplitAcrossOne
                }
            }
        };
        Ok(Self {
            lower,
            upper,
            case_tag,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> Bound {
        self.upper
    }

    pub fn case_tag(&self) -> CaseTag {
        self.case_tag
    }
}

/// Direction of a one-sided orbit sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `j = 0, 1, 2, …`, towards the fixed point 1.
    Forward,
    /// `j = −1, −2, …`, away from 1 (towards 0 or ∞).
    Backward,
}

/// One orbit sum contributing to an integral, with the sign it enters with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Part {
    pub base: f64,
    pub direction: Direction,
    pub sign: f64,
    pub result: SeriesResult,
}

/// A combined integral together with its directional components.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralOutcome {
    pub result: SeriesResult,
    pub parts: Vec<Part>,
}

impl IntegralOutcome {
    fn exact(value: f64) -> Self {
        Self {
            result: SeriesResult::exact(value),
            parts: Vec::new(),
        }
    }

    /// The first component that did not converge, if any.
    pub fn failed_part(&self) -> Option<&Part> {
        self.parts.iter().find(|p| !p.result.is_converged())
    }

    fn add(&mut self, sign: f64, part: Part) {
        self.result = self.result.combine(sign * part.sign, part.result);
        self.parts.push(Part {
            sign: sign * part.sign,
            ..part
        });
    }

    fn merge(&mut self, sign: f64, other: IntegralOutcome) {
        for part in other.parts {
            self.add(sign, part);
        }
    }
}

/// The measure increments `Δ_j`.
#[derive(Clone, Copy)]
enum Increment<'a> {
    X,
    Dg(&'a RealFunction),
}

impl Increment<'_> {
    fn at(&self, x: f64, j: i64, params: &PqParams) -> Result<f64> {
        match self {
            Increment::X => lattice::weight(x, j, params),
            Increment::Dg(g) => {
                let hi = lattice::pow(x, lattice::exponent(j, params)?);
                let lo = lattice::pow(x, lattice::exponent(j + 1, params)?);
                if hi == lo {
                    return Ok(0.0);
                }
                Ok(g.eval(hi)? - g.eval(lo)?)
            }
        }
    }

    /// Points where `g` is evaluated, for the domain pre-check.
    fn require(&self, x: f64, direction: Direction) -> Result<()> {
        let Increment::Dg(g) = self else {
            return Ok(());
        };
        let span = match (direction, x > 1.0) {
            (Direction::Forward, true) => Interval::new(1.0, x, false, true),
            (Direction::Forward, false) => Interval::new(x, 1.0, true, false),
            (Direction::Backward, true) => Interval::new(x, f64::INFINITY, true, false),
            (Direction::Backward, false) => Interval::new(0.0, x, false, true),
        };
        g.require(span)
    }
}

fn orbit_sum<E>(
    mut eval: E,
    domain: Option<Interval>,
    x: f64,
    direction: Direction,
    increment: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<Part>
where
    E: FnMut(f64) -> Result<f64>,
{
    params.require_integration()?;
    if x == 1.0 {
        return Ok(Part {
            base: x,
            direction,
            sign: 1.0,
            result: SeriesResult::exact(0.0),
        });
    }
    if let Some(domain) = domain {
        let required = match direction {
            Direction::Forward => lattice::forward_orbit_range(x, params)?,
            Direction::Backward => lattice::backward_orbit_range(x, params)?,
        };
        if !domain.covers(&required) {
            return Err(PqError::DomainTooNarrow { required, domain });
        }
    }
    increment.require(x, direction)?;

    let result = sum_series(
        |k| {
            let j = match direction {
                Direction::Forward => k as i64,
                Direction::Backward => -(k as i64) - 1,
            };
            let delta = increment.at(x, j, params)?;
            if delta == 0.0 {
                return Ok(0.0);
            }
            let t = delta * eval(lattice::node(x, j, params)?)?;
            if t.is_finite() {
                Ok(t)
            } else {
                Err(PqError::NonFiniteTerm { index: j })
            }
        },
        config,
    )?;
    Ok(Part {
        base: x,
        direction,
        sign: 1.0,
        result,
    })
}

fn forward(
    f: &RealFunction,
    x: f64,
    inc: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<Part> {
    orbit_sum(
        |y| f.eval(y),
        Some(f.domain()),
        x,
        Direction::Forward,
        inc,
        params,
        config,
    )
}

fn backward(
    f: &RealFunction,
    x: f64,
    inc: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<Part> {
    orbit_sum(
        |y| f.eval(y),
        Some(f.domain()),
        x,
        Direction::Backward,
        inc,
        params,
        config,
    )
}

/// `H(x) = Σ_{j≥0} (x^(r^j) − x^(r^(j+1))) f(x^(r^j/p))`, the series
/// pq-antiderivative with `H(1) = 0`.
pub fn antiderivative_series(
    f: &RealFunction,
    x: f64,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    check_base(x)?;
    Ok(forward(f, x, Increment::X, params, config)?.result)
}

/// `∫ f d_pq g`: from 1 to `b` when `b > 1`, from 0 to `b` when `b < 1`.
pub fn integral_with_dg(
    f: &RealFunction,
    g: &RealFunction,
    b: f64,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    check_base(b)?;
    if b == 1.0 {
        return Err(PqError::InvalidArgument(
            "integral_with_dg needs b != 1".into(),
        ));
    }
    let inc = Increment::Dg(g);
    if b > 1.0 {
        Ok(forward(f, b, inc, params, config)?.result)
    } else {
        Ok(backward(f, b, inc, params, config)?.result.negate())
    }
}

/// `∫_a^b f d_pq x` for `0 ≤ a ≤ b < ∞`; `a = b` is exactly zero.
pub fn definite_integral(
    a: f64,
    b: f64,
    f: &RealFunction,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    Ok(definite_outcome(a, b, f, params, config)?.result)
}

/// [`definite_integral`] with the directional components retained.
pub fn definite_outcome(
    a: f64,
    b: f64,
    f: &RealFunction,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    params.require_integration()?;
    if !b.is_finite() {
        return Err(PqError::InvalidArgument(
            "infinite upper bound: use improper_integral".into(),
        ));
    }
    if a == b && a >= 0.0 {
        return Ok(IntegralOutcome::exact(0.0));
    }
    let request = IntegralRequest::new(a, b)?;
    integrate(&request, f, Increment::X, params, config)
}

/// `∫_a^b f d_pq g` over any admissible bounds, including `b = ∞`.
pub fn stieltjes_integral(
    a: f64,
    b: impl Into<Bound>,
    f: &RealFunction,
    g: &RealFunction,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    params.require_integration()?;
    let b = b.into();
    if b == Bound::Finite(a) && a >= 0.0 {
        return Ok(IntegralOutcome::exact(0.0));
    }
    let request = IntegralRequest::new(a, b)?;
    integrate(&request, f, Increment::Dg(g), params, config)
}

/// Improper integrals: `[1, ∞)`, `[0, 1]`, `[0, ∞)` and `[a, ∞)`.
///
/// Bilateral sums run as two independent one-sided summations; the outcome
/// keeps each direction so a failing tail can be identified.
pub fn improper_integral(
    request: &IntegralRequest,
    f: &RealFunction,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    params.require_integration()?;
    if !request.case_tag().is_improper() {
        return Err(PqError::InvalidArgument(format!(
            "{:?} is a proper integral: use definite_integral",
            request.case_tag()
        )));
    }
    integrate(request, f, Increment::X, params, config)
}

fn integrate(
    request: &IntegralRequest,
    f: &RealFunction,
    inc: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    config.validate()?;
    let a = request.lower();
    let mut out = IntegralOutcome::exact(0.0);
    match request.case_tag() {
        CaseTag::AboveOne => {
            let b = request.upper().finite().expect("finite case");
            out.add(1.0, forward(f, b, inc, params, config)?);
            if a > 1.0 {
                out.add(-1.0, forward(f, a, inc, params, config)?);
            }
        }
        CaseTag::BelowOneToOne => {
            out.add(-1.0, forward(f, a, inc, params, config)?);
        }
        CaseTag::ZeroToB => {
            let b = request.upper().finite().expect("finite case");
            out.add(-1.0, backward(f, b, inc, params, config)?);
            if a > 0.0 {
                out.add(1.0, backward(f, a, inc, params, config)?);
            }
        }
        CaseTag::SplitAcrossOne => {
            let b = request.upper().finite().expect("finite case");
            if a == 0.0 {
                out.merge(1.0, zero_to_one(f, inc, params, config)?);
            } else {
                out.add(-1.0, forward(f, a, inc, params, config)?);
            }
            out.add(1.0, forward(f, b, inc, params, config)?);
        }
        CaseTag::ImproperZeroOne => {
            out.merge(1.0, zero_to_one(f, inc, params, config)?);
        }
        CaseTag::ImproperFromOne => {
            out.merge(1.0, one_to_infinity(f, inc, params, config)?);
        }
        CaseTag::ImproperZeroInf => {
            out.merge(1.0, zero_to_one(f, inc, params, config)?);
            out.merge(1.0, one_to_infinity(f, inc, params, config)?);
        }
        CaseTag::ImproperFromA => {
            if a > 1.0 {
                out.add(1.0, backward(f, a, inc, params, config)?);
            } else {
                out.add(-1.0, forward(f, a, inc, params, config)?);
                out.merge(1.0, one_to_infinity(f, inc, params, config)?);
            }
        }
    }
    Ok(out)
}

fn one_to_infinity(
    f: &RealFunction,
    inc: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    let base = params.p() / params.q();
    let mut out = IntegralOutcome::exact(0.0);
    out.add(1.0, forward(f, base, inc, params, config)?);
    out.add(1.0, backward(f, base, inc, params, config)?);
    Ok(out)
}

fn zero_to_one(
    f: &RealFunction,
    inc: Increment<'_>,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<IntegralOutcome> {
    let base = params.p();
    let mut out = IntegralOutcome::exact(0.0);
    out.add(-1.0, forward(f, base, inc, params, config)?);
    out.add(-1.0, backward(f, base, inc, params, config)?);
    Ok(out)
}

/// Smallest interval containing every point at which `f` is evaluated for
/// `request` (nodes overshoot the nominal bounds).
pub fn required_domain(request: &IntegralRequest, params: &PqParams) -> Result<Interval> {
    params.require_integration()?;
    let a = request.lower();
    let fwd = |x: f64| lattice::forward_orbit_range(x, params);
    let back = |x: f64| lattice::backward_orbit_range(x, params);
    let zero_one = || -> Result<Interval> { Ok(hull(fwd(params.p())?, back(params.p())?)) };
    let one_inf = || -> Result<Interval> {
        let base = params.p() / params.q();
        Ok(hull(fwd(base)?, back(base)?))
    };
    let b = request.upper().finite();
    Ok(match request.case_tag() {
        CaseTag::AboveOne => {
            let b = b.expect("finite case");
            if a > 1.0 {
                hull(fwd(b)?, fwd(a)?)
            } else {
                fwd(b)?
            }
        }
        CaseTag::BelowOneToOne => fwd(a)?,
        CaseTag::ZeroToB => back(b.expect("finite case"))?,
        CaseTag::SplitAcrossOne => {
            let upper = fwd(b.expect("finite case"))?;
            if a == 0.0 {
                hull(zero_one()?, upper)
            } else {
                hull(fwd(a)?, upper)
            }
        }
        CaseTag::ImproperZeroOne => zero_one()?,
        CaseTag::ImproperFromOne => one_inf()?,
        CaseTag::ImproperZeroInf => hull(zero_one()?, one_inf()?),
        CaseTag::ImproperFromA => {
            if a > 1.0 {
                back(a)?
            } else {
                hull(fwd(a)?, one_inf()?)
            }
        }
    })
}

fn hull(a: Interval, b: Interval) -> Interval {
    let (lower, lower_closed) = if a.lower < b.lower {
        (a.lower, a.lower_closed)
    } else if b.lower < a.lower {
        (b.lower, b.lower_closed)
    } else {
        (a.lower, a.lower_closed || b.lower_closed)
    };
    let (upper, upper_closed) = if a.upper > b.upper {
        (a.upper, a.upper_closed)
    } else if b.upper > a.upper {
        (b.upper, b.upper_closed)
    } else {
        (a.upper, a.upper_closed || b.upper_closed)
    };
    Interval::new(lower, upper, lower_closed, upper_closed)
}

/// `I^n f(b) = ∫_0^b` iterated `n` times, for `0 < b < 1`.
///
/// Inner integrals are memoised per call; an inner series that does not
/// converge aborts with its depth.
pub fn integral_n(
    f: &RealFunction,
    b: f64,
    n: u32,
    params: &PqParams,
    config: &SeriesConfig,
) -> Result<SeriesResult> {
    params.require_integration()?;
    if !(b > 0.0 && b < 1.0) {
        return Err(PqError::InvalidArgument(format!(
            "higher-order integral needs 0 < b < 1, got {b}"
        )));
    }
    if n == 0 {
        return Ok(SeriesResult::exact(f.eval(b)?));
    }
    let mut memo = HashMap::new();
    iterate_integral(f, b, n, params, config, &mut memo)
}

fn iterate_integral(
    f: &RealFunction,
    b: f64,
    n: u32,
    params: &PqParams,
    config: &SeriesConfig,
    memo: &mut HashMap<(u64, u32), f64>,
) -> Result<SeriesResult> {
    let inner_order = n - 1;
    let eval = |y: f64| -> Result<f64> {
        if inner_order == 0 {
            return f.eval(y);
        }
        if let Some(&v) = memo.get(&(y.to_bits(), inner_order)) {
            return Ok(v);
        }
        let inner = iterate_integral(f, y, inner_order, params, config, memo)?;
        if inner.status != Status::Converged {
            return Err(PqError::InnerNonConvergence {
                depth: inner_order as usize,
                at: y,
                status: inner.status,
            });
        }
        memo.insert((y.to_bits(), inner_order), inner.value);
        Ok(inner.value)
    };
    let domain = (inner_order == 0).then(|| f.domain());
    let part = orbit_sum(
        eval,
        domain,
        b,
        Direction::Backward,
        Increment::X,
        params,
        config,
    )?;
    Ok(part.result.negate())
}

fn check_base(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(PqError::InvalidArgument(format!(
            "integration bound must be a positive finite real, got {x}"
        )))
    }
}

/// Result of a sampled hypothesis check. Advisory only: a `true` verdict is
/// evidence from finitely many samples, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub alpha: f64,
    /// Exponent used for large `x` (improper check only).
    pub alpha_large_x: Option<f64>,
    /// Largest sampled `|f(x)·x^α|` when the verdict is positive.
    pub bound_m: Option<f64>,
    pub r: Option<f64>,
    pub sample_count: usize,
    pub verdict: bool,
    /// A sample point where the bound fails.
    pub witness: Option<f64>,
}

// Probes approach each accumulation point down to these distances.
const FINEST_DECADE_NEAR_ONE: i32 = 12;
const FINEST_DECADE_NEAR_ZERO: i32 = 15;

/// Samples `|f(x)·x^α|` on `(0, A^(1/p)]` and reports whether it looks
/// bounded.
///
/// Besides a log-spaced grid, the check probes `x = 10^(−d)`, `1 − 10^(−d)`
/// and `1 + 10^(−d)`; growth by more than 10× across the three finest
/// decades of any probe marks the function unbounded.
pub fn check_antiderivative_hypothesis(
    f: &RealFunction,
    alpha: f64,
    a_bound: f64,
    params: &PqParams,
    sample_count: usize,
) -> Result<HypothesisCheck> {
    params.require_integration()?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(PqError::InvalidArgument(format!(
            "alpha must lie in [0, 1), got {alpha}"
        )));
    }
    if !(a_bound > 1.0) || !a_bound.is_finite() {
        return Err(PqError::InvalidArgument(format!(
            "A must exceed 1, got {a_bound}"
        )));
    }
    if sample_count == 0 {
        return Err(PqError::InvalidArgument(
            "sample_count must be positive".into(),
        ));
    }
    let upper = a_bound.powf(1.0 / params.p());
    let scaled = |x: f64| f.eval(x).map(|v| (v * x.powf(alpha)).abs());
    let mut report = HypothesisCheck {
        alpha,
        alpha_large_x: None,
        bound_m: None,
        r: None,
        sample_count,
        verdict: false,
        witness: None,
    };

    let above: Vec<f64> = (1..=FINEST_DECADE_NEAR_ONE)
        .map(|d| 1.0 + 10f64.powi(-d))
        .filter(|&x| x <= upper)
        .collect();
    let below: Vec<f64> = (1..=FINEST_DECADE_NEAR_ONE)
        .map(|d| 1.0 - 10f64.powi(-d))
        .collect();
    let zero: Vec<f64> = (1..=FINEST_DECADE_NEAR_ZERO)
        .map(|d| 10f64.powi(-d))
        .collect();

    let mut max_seen = 0.0_f64;
    for probe in [&above, &below, &zero] {
        let mut values = Vec::with_capacity(probe.len());
        for &x in probe.iter() {
            match scaled(x) {
                Ok(v) => values.push(v),
                Err(_) => {
                    report.witness = Some(x);
                    return Ok(report);
                }
            }
        }
        if values.len() >= 4 {
            let finest = values[values.len() - 1];
            let coarser = values[values.len() - 4];
            if finest > 10.0 * coarser && finest > 0.0 {
                report.witness = probe.last().copied();
                return Ok(report);
            }
        }
        max_seen = values.iter().fold(max_seen, |m, &v| m.max(v));
    }

    let lo = 10f64.powi(-FINEST_DECADE_NEAR_ZERO);
    for x in log_grid(lo, upper, sample_count) {
        match scaled(x) {
            Ok(v) => max_seen = max_seen.max(v),
            Err(_) => {
                report.witness = Some(x);
                return Ok(report);
            }
        }
    }
    report.verdict = true;
    report.bound_m = Some(max_seen);
    Ok(report)
}

/// Bounds for [`check_improper_hypothesis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImproperBounds {
    /// Exponent near `x = 1`, in `[0, 1)`.
    pub alpha_near_one: f64,
    /// Exponent for large `x`, in `[−epsilon, 0)`.
    pub alpha_large_x: f64,
    pub r: f64,
    pub epsilon: f64,
}

impl ImproperBounds {
    pub fn new(alpha_near_one: f64, alpha_large_x: f64, r: f64) -> Self {
        Self {
            alpha_near_one,
            alpha_large_x,
            r,
            epsilon: 0.5,
        }
    }
}

/// Samples `|f(x)| < min{r·x^α, |x^(1/p) − x^(1/q)|^(−1)·(ln x)^(2α)}` just
/// above 1 (with `alpha_near_one`) and on a geometric grid from `p/q` to
/// `(p/q)^40` (with `alpha_large_x`).
pub fn check_improper_hypothesis(
    f: &RealFunction,
    bounds: &ImproperBounds,
    params: &PqParams,
    sample_count: usize,
) -> Result<HypothesisCheck> {
    params.require_integration()?;
    let ImproperBounds {
        alpha_near_one,
        alpha_large_x,
        r,
        epsilon,
    } = *bounds;
    if !(0.0..1.0).contains(&alpha_near_one) {
        return Err(PqError::InvalidArgument(format!(
            "alpha near 1 must lie in [0, 1), got {alpha_near_one}"
        )));
    }
    if !(epsilon > 0.0) || !(alpha_large_x < 0.0 && alpha_large_x >= -epsilon) {
        return Err(PqError::InvalidArgument(format!(
            "alpha for large x must lie in [-{epsilon}, 0), got {alpha_large_x}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(PqError::InvalidArgument(format!(
            "r must be positive, got {r}"
        )));
    }
    if sample_count < 2 {
        return Err(PqError::InvalidArgument(
            "sample_count must be at least 2".into(),
        ));
    }
    let (p, q) = (params.p(), params.q());
    let bound = |x: f64, alpha: f64| -> f64 {
        let growth = r * x.powf(alpha);
        let den = (x.powf(1.0 / p) - x.powf(1.0 / q)).abs();
        let decay = x.ln().powf(2.0 * alpha) / den;
        growth.min(decay)
    };
    let mut report = HypothesisCheck {
        alpha: alpha_near_one,
        alpha_large_x: Some(alpha_large_x),
        bound_m: None,
        r: Some(r),
        sample_count,
        verdict: false,
        witness: None,
    };

    let near: Vec<f64> = (0..sample_count)
        .map(|i| {
            let d =
                1.0 + (FINEST_DECADE_NEAR_ONE as f64 - 1.0) * i as f64 / (sample_count - 1) as f64;
            1.0 + 10f64.powf(-d)
        })
        .collect();
    let ratio = p / q;
    let far = log_grid(ratio, ratio.powi(40), sample_count);

    let mut max_seen = 0.0_f64;
    for (grid, alpha) in [(near, alpha_near_one), (far, alpha_large_x)] {
        for x in grid {
            let ok = match f.eval(x) {
                Ok(v) => {
                    max_seen = max_seen.max(v.abs());
                    v.abs() < bound(x, alpha)
                }
                Err(_) => false,
            };
            if !ok {
                report.witness = Some(x);
                return Ok(report);
            }
        }
    }
    report.verdict = true;
    report.bound_m = Some(max_seen);
    Ok(report)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PqParams {
        PqParams::integration(0.8, 0.4).unwrap()
    }

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn request_classification() {
        let tag = |a: f64, b: f64| IntegralRequest::new(a, b).unwrap().case_tag();
        assert_eq!(tag(1.0, 4.0), CaseTag::AboveOne);
        assert_eq!(tag(3.0, 4.0), CaseTag::AboveOne);
        assert_eq!(tag(1.0 / 3.0, 1.0), CaseTag::BelowOneToOne);
        assert_eq!(tag(0.0, 0.5), CaseTag::ZeroToB);
        assert_eq!(tag(0.25, 0.5), CaseTag::ZeroToB);
        assert_eq!(tag(0.5, 2.0), CaseTag::SplitAcrossOne);
        assert_eq!(tag(0.0, 2.0), CaseTag::SplitAcrossOne);
        assert_eq!(tag(0.0, 1.0), CaseTag::ImproperZeroOne);
        assert_eq!(tag(1.0, f64::INFINITY), CaseTag::ImproperFromOne);
        assert_eq!(tag(0.0, f64::INFINITY), CaseTag::ImproperZeroInf);
        assert_eq!(tag(2.0, f64::INFINITY), CaseTag::ImproperFromA);
        assert_eq!(tag(0.5, f64::INFINITY), CaseTag::ImproperFromA);
        assert!(IntegralRequest::new(2.0, 1.0).is_err());
        assert!(IntegralRequest::new(-1.0, 1.0).is_err());
        assert!(IntegralRequest::new(1.0, 1.0).is_err());
    }

    #[test]
    fn constant_integrand_examples() {
        let c = 5.0;
        let f = RealFunction::constant(c);
        let (p, cfg) = (params(), cfg());
        let check = |a: f64, b: f64, expected: f64| {
            let res = definite_integral(a, b, &f, &p, &cfg).unwrap();
            assert_eq!(res.status, Status::Converged);
            assert!(
                (res.value - expected).abs() < 1e-9,
                "[{a},{b}] {} vs {expected}",
                res.value
            );
        };
        check(1.0, 4.0, 3.0 * c);
        check(3.0, 4.0, c);
        check(1.0 / 3.0, 1.0, 2.0 * c / 3.0);
        check(0.0, 0.5, c / 2.0);
        check(0.25, 0.5, c / 4.0);
        check(0.5, 2.0, 1.5 * c);
        check(0.0, 1.0, c);
        check(0.0, 3.0, 3.0 * c);
    }

    #[test]
    fn degenerate_bounds_are_exact_zero() {
        let f = RealFunction::new(Interval::non_negative(), |_| panic!("must not evaluate"));
        let res = definite_integral(2.0, 2.0, &f, &params(), &cfg()).unwrap();
        assert_eq!(res, SeriesResult::exact(0.0));
    }

    #[test]
    fn antiderivative_at_one_is_zero() {
        let f = RealFunction::new(Interval::positive(), |x: f64| x.cos() + 3.0);
        let res = antiderivative_series(&f, 1.0, &params(), &cfg()).unwrap();
        assert_eq!(res.value, 0.0);
        assert_eq!(res.status, Status::Converged);
    }

    #[test]
    fn divergent_integrand_is_detected() {
        let (p, q) = (0.8, 0.4);
        let f = RealFunction::new(Interval::positive(), move |x: f64| {
            1.0 / (x.powf(p) - x.powf(q))
        });
        let res = antiderivative_series(&f, 3.0, &params(), &cfg()).unwrap();
        assert_eq!(res.status, Status::DivergenceDetected);
    }

    #[test]
    fn narrow_domain_is_reported_before_evaluation() {
        let f = RealFunction::new(Interval::closed(0.0, 4.0), |x| x);
        let err = definite_integral(1.0, 4.0, &f, &params(), &cfg()).unwrap_err();
        match err {
            PqError::DomainTooNarrow { required, .. } => {
                assert!((required.upper - 4f64.powf(1.25)).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn required_domain_covers_overshoot() {
        let p = params();
        let req = IntegralRequest::new(0.5, 2.0).unwrap();
        let dom = required_domain(&req, &p).unwrap();
        assert!((dom.lower - 0.5f64.powf(1.25)).abs() < 1e-12);
        assert!((dom.upper - 2f64.powf(1.25)).abs() < 1e-12);
        let inf = required_domain(&IntegralRequest::new(1.0, f64::INFINITY).unwrap(), &p).unwrap();
        assert!(inf.upper.is_infinite());
        assert!(!inf.lower_closed && inf.lower == 1.0);
    }

    #[test]
    fn improper_rejects_proper_requests() {
        let req = IntegralRequest::new(1.0, 2.0).unwrap();
        assert!(improper_integral(&req, &RealFunction::constant(1.0), &params(), &cfg()).is_err());
    }

    #[test]
    fn sub_interval_identity_matches_nested_case_one_difference() {
        // ∫ over [v^r, v] equals the single term (v − v^r) f(v^(1/p)).
        let p = params();
        let f = RealFunction::new(Interval::positive(), |x: f64| x.sin() / x + 2.0);
        for v in [2.0_f64, 4.0, 16.0] {
            let lo = v.powf(p.ratio());
            let nested = definite_integral(lo, v, &f, &p, &cfg()).unwrap();
            let single = (v - lo) * f.eval(v.powf(1.0 / p.p())).unwrap();
            assert!(
                (nested.value - single).abs() < 1e-10,
                "{v}: {} vs {single}",
                nested.value
            );
        }
    }

    #[test]
    fn integral_n_examples() {
        let p = params();
        let f = RealFunction::constant(3.0);
        assert_eq!(integral_n(&f, 0.5, 0, &p, &cfg()).unwrap().value, 3.0);
        let one = integral_n(&f, 0.5, 1, &p, &cfg()).unwrap();
        assert!((one.value - 1.5).abs() < 1e-12);
        assert!(integral_n(&f, 1.5, 1, &p, &cfg()).is_err());
    }

    #[test]
    fn antiderivative_hypothesis_examples() {
        let p = params();
        let c = check_antiderivative_hypothesis(&RealFunction::constant(-2.5), 0.0, 3.0, &p, 200)
            .unwrap();
        assert!(c.verdict);
        assert!((c.bound_m.unwrap() - 2.5).abs() < 1e-12);

        let sing = RealFunction::new(Interval::positive(), |x: f64| {
            1.0 / (x.powf(0.8) - x.powf(0.4))
        });
        for alpha in [0.0, 0.5, 0.9] {
            let c = check_antiderivative_hypothesis(&sing, alpha, 3.0, &p, 200).unwrap();
            assert!(!c.verdict);
            assert!((c.witness.unwrap() - 1.0).abs() < 1e-9);
        }

        let root = RealFunction::new(Interval::positive(), |x: f64| x.powf(-0.5));
        let c = check_antiderivative_hypothesis(&root, 0.5, 3.0, &p, 200).unwrap();
        assert!(c.verdict);
        assert!((c.bound_m.unwrap() - 1.0).abs() < 1e-9);

        assert!(check_antiderivative_hypothesis(&root, 1.0, 3.0, &p, 10).is_err());
        assert!(check_antiderivative_hypothesis(&root, 0.0, 0.5, &p, 10).is_err());
    }

    #[test]
    fn improper_hypothesis_examples() {
        let p = params();
        let b = ImproperBounds::new(0.0, -0.25, 10.0);
        assert!(
            check_improper_hypothesis(&RealFunction::constant(0.0), &b, &p, 100)
                .unwrap()
                .verdict
        );
        let one = check_improper_hypothesis(&RealFunction::constant(1.0), &b, &p, 100).unwrap();
        assert!(!one.verdict);
        assert!(one.witness.unwrap() > 1.5);
        assert!(check_improper_hypothesis(
            &RealFunction::constant(0.0),
            &ImproperBounds::new(0.0, -0.75, 1.0),
            &p,
            10
        )
        .is_err());
    }
}
