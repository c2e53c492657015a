//! Numerical verification of the structural identities of the calculus.
//!
//! Each check evaluates both sides of an identity independently and reports
//! the largest absolute residual together with the point where it occurred.

use crate::deriv::{derivative_function, pq_derivative, LimitPolicy};
use crate::error::{PqError, Result};
use crate::function::RealFunction;
use crate::integral::{
    antiderivative_series, definite_integral, improper_integral, integral_n, stieltjes_integral,
    Bound, IntegralRequest,
};
use crate::lattice::PqParams;
use crate::series::{SeriesConfig, SeriesResult};

/// A sample at which a law was checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sample {
    Point(f64),
    Pair(f64, Bound),
}

impl std::fmt::Display for Sample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sample::Point(x) => write!(f, "x = {x}"),
            Sample::Pair(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// A sample where one side of the identity could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct LawFailure {
    pub sample: Sample,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub law_name: String,
    pub sample_points: Vec<Sample>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub worst_point: Sample,
    /// Samples whose series did not converge; each counts as an infinite
    /// residual.
    pub failures: Vec<LawFailure>,
}

impl std::fmt::Display for LawReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<24} {} max residual {:.3e} (tol {:.1e}) at {}",
            self.law_name,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_residual,
            self.tolerance,
            self.worst_point
        )?;
        for failure in &self.failures {
            write!(f, "\n    {}: {}", failure.sample, failure.message)?;
        }
        Ok(())
    }
}

struct Accumulator {
    samples: Vec<Sample>,
    worst: Option<(f64, Sample)>,
    failures: Vec<LawFailure>,
}

impl Accumulator {
    fn new() -> Self {
        Self {
            samples: Vec::new(),
            worst: None,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, sample: Sample, residual: f64) {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if self.worst.is_none_or(|(r, _)| residual > r) {
            self.worst = Some((residual, sample));
        }
    }

    fn fail(&mut self, sample: Sample, message: String) {
        self.record(sample, f64::INFINITY);
        self.failures.push(LawFailure { sample, message });
    }

    fn finish(self, name: &str, tolerance: f64) -> Result<LawReport> {
        let (max_residual, worst_point) = self
            .worst
            .ok_or_else(|| PqError::InvalidArgument(format!("{name}: no sample points")))?;
        Ok(LawReport {
            law_name: name.to_string(),
            sample_points: self.samples,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            worst_point,
            failures: self.failures,
        })
    }
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x != 1.0 && x.is_finite() {
        Ok(())
    } else {
        Err(PqError::InvalidArgument(format!(
            "law sample points must avoid 0 and 1, got {x}"
        )))
    }
}

/// Both product rules:
/// `D(fg) = g(x^p) Df + f(x^q) Dg` and `D(fg) = g(x^q) Df + f(x^p) Dg`.
pub fn verify_product_rules(
    f: &RealFunction,
    g: &RealFunction,
    xs: &[f64],
    params: &PqParams,
    tol: f64,
) -> Result<LawReport> {
    let policy = LimitPolicy::default();
    let fg = RealFunction::product(f, g);
    let mut acc = Accumulator::new();
    for &x in xs {
        check_point(x)?;
        acc.samples.push(Sample::Point(x));
        let (xp, xq) = (x.powf(params.p()), x.powf(params.q()));
        let lhs = pq_derivative(&fg, x, params, &policy)?;
        let df = pq_derivative(f, x, params, &policy)?;
        let dg = pq_derivative(g, x, params, &policy)?;
        let first = g.eval(xp)? * df + f.eval(xq)? * dg;
        let second = g.eval(xq)? * df + f.eval(xp)? * dg;
        acc.record(
            Sample::Point(x),
            (lhs - first).abs().max((lhs - second).abs()),
        );
    }
    acc.finish("product_rules", tol)
}

/// Both quotient rules, with `g(x^p)` and `g(x^q)` required to be non-zero.
pub fn verify_quotient_rules(
    f: &RealFunction,
    g: &RealFunction,
    xs: &[f64],
    params: &PqParams,
    tol: f64,
) -> Result<LawReport> {
    let policy = LimitPolicy::default();
    let ratio = RealFunction::quotient(f, g);
    let mut acc = Accumulator::new();
    for &x in xs {
        check_point(x)?;
        acc.samples.push(Sample::Point(x));
        let (xp, xq) = (x.powf(params.p()), x.powf(params.q()));
        let (gp, gq) = (g.eval(xp)?, g.eval(xq)?);
        if gp == 0.0 {
            return Err(PqError::DivisionByZero { at: xp });
        }
        if gq == 0.0 {
            return Err(PqError::DivisionByZero { at: xq });
        }
        let lhs = pq_derivative(&ratio, x, params, &policy)?;
        let df = pq_derivative(f, x, params, &policy)?;
        let dg = pq_derivative(g, x, params, &policy)?;
        let first = (gq * df - f.eval(xq)? * dg) / (gq * gp);
        let second = (gp * df - f.eval(xp)? * dg) / (gq * gp);
        acc.record(
            Sample::Point(x),
            (lhs - first).abs().max((lhs - second).abs()),
        );
    }
    acc.finish("quotient_rules", tol)
}

fn converged(result: SeriesResult, what: &str) -> std::result::Result<f64, String> {
    if result.is_converged() {
        Ok(result.value)
    } else {
        Err(format!(
            "{what} ended with {} after {} terms",
            result.status, result.terms_used
        ))
    }
}

/// The integral as a function of its upper (or lower) limit; the series must
/// converge at every point the derivative asks for.
fn series_function<S>(domain_of: &RealFunction, series: S) -> RealFunction
where
    S: Fn(f64) -> Result<SeriesResult> + Send + Sync + 'static,
{
    RealFunction::fallible(domain_of.domain(), move |y| {
        let res = series(y)?;
        if res.is_converged() {
            Ok(res.value)
        } else {
            Err(PqError::InnerNonConvergence {
                depth: 1,
                at: y,
                status: res.status,
            })
        }
    })
}

/// The inverse identities between `D` and the three integral operators:
///
/// * `x > 1`: `D I⁺ f = f` and `I⁺ D f = f − f(1)`;
/// * `0 < x < 1`: `D I⁻⁻ f = −f` and `I⁻⁻ D f = f(1) − f`;
/// * `0 < x < 1`: `D I f = f` and `I D f = f − f(0)`.
pub fn verify_inverse_lemmas(
    f: &RealFunction,
    xs: &[f64],
    params: &PqParams,
    config: &SeriesConfig,
    tol: f64,
) -> Result<LawReport> {
    params.require_integration()?;
    let policy = LimitPolicy::default();
    let df = derivative_function(f, params);

    let (p, c) = (*params, *config);
    let upper = {
        let f = f.clone();
        series_function(&f.clone(), move |y| antiderivative_series(&f, y, &p, &c))
    };
    let to_one = {
        let f = f.clone();
        series_function(&f.clone(), move |y| definite_integral(y, 1.0, &f, &p, &c))
    };
    let from_zero = {
        let f = f.clone();
        series_function(&f.clone(), move |y| integral_n(&f, y, 1, &p, &c))
    };

    let mut acc = Accumulator::new();
    let f_one = f.eval(1.0)?;
    let needs_zero = xs.iter().any(|&x| x < 1.0);
    let f_zero = if needs_zero { Some(f.eval(0.0)?) } else { None };

    for &x in xs {
        check_point(x)?;
        let sample = Sample::Point(x);
        acc.samples.push(sample);
        let fx = f.eval(x)?;
        let residuals: std::result::Result<Vec<f64>, String> = if x > 1.0 {
            (|| {
                let d_of_int =
                    pq_derivative(&upper, x, params, &policy).map_err(|e| e.to_string())?;
                let int_of_d = converged(
                    antiderivative_series(&df, x, params, config).map_err(|e| e.to_string())?,
                    "I+ Df",
                )?;
                Ok(vec![(d_of_int - fx).abs(), (int_of_d - (fx - f_one)).abs()])
            })()
        } else {
            let f0 = f_zero.expect("evaluated when a point lies below one");
            (|| {
                let d_of_minus =
                    pq_derivative(&to_one, x, params, &policy).map_err(|e| e.to_string())?;
                let minus_of_d = converged(
                    definite_integral(x, 1.0, &df, params, config).map_err(|e| e.to_string())?,
                    "I-- Df",
                )?;
                let d_of_zero =
                    pq_derivative(&from_zero, x, params, &policy).map_err(|e| e.to_string())?;
                let zero_of_d = converged(
                    integral_n(&df, x, 1, params, config).map_err(|e| e.to_string())?,
                    "I Df",
                )?;
                Ok(vec![
                    (d_of_minus + fx).abs(),
                    (minus_of_d - (f_one - fx)).abs(),
                    (d_of_zero - fx).abs(),
                    (zero_of_d - (fx - f0)).abs(),
                ])
            })()
        };
        match residuals {
            Ok(rs) => acc.record(sample, rs.into_iter().fold(0.0, f64::max)),
            Err(message) => acc.fail(sample, message),
        }
    }
    acc.finish("inverse_lemmas", tol)
}

/// `∫_a^b D F d_pq x = F(b) − F(a)` for each pair; `b = ∞` uses
/// `limit_at_infinity` for `F(∞)`.
pub fn verify_fundamental_theorem(
    antiderivative: &RealFunction,
    pairs: &[(f64, Bound)],
    limit_at_infinity: Option<f64>,
    params: &PqParams,
    config: &SeriesConfig,
    tol: f64,
) -> Result<LawReport> {
    params.require_integration()?;
    let f = derivative_function(antiderivative, params);
    let mut acc = Accumulator::new();
    for &(a, b) in pairs {
        let sample = Sample::Pair(a, b);
        acc.samples.push(sample);
        let (integral, f_b) = match b {
            Bound::Finite(b) => (
                definite_integral(a, b, &f, params, config),
                antiderivative.eval(b)?,
            ),
            Bound::Infinity => {
                let limit = limit_at_infinity.ok_or_else(|| {
                    PqError::InvalidArgument("b = inf needs the limit of F at infinity".into())
                })?;
                let request = IntegralRequest::new(a, b)?;
                (
                    improper_integral(&request, &f, params, config).map(|o| o.result),
                    limit,
                )
            }
        };
        let expected = f_b - antiderivative.eval(a)?;
        match integral
            .map_err(|e| e.to_string())
            .and_then(|r| converged(r, "integral"))
        {
            Ok(value) => acc.record(sample, (value - expected).abs()),
            Err(message) => acc.fail(sample, message),
        }
    }
    acc.finish("fundamental_theorem", tol)
}

/// Both integration-by-parts formulas:
///
/// `∫ f(x^q) d_pq g + ∫ g(x^p) d_pq f = f(b)g(b) − f(a)g(a)` and the same
/// with `p` and `q` exchanged.
pub fn verify_integration_by_parts(
    f: &RealFunction,
    g: &RealFunction,
    pairs: &[(f64, f64)],
    params: &PqParams,
    config: &SeriesConfig,
    tol: f64,
) -> Result<LawReport> {
    params.require_integration()?;
    let (p, q) = (params.p(), params.q());
    let f_q = RealFunction::compose_power(f, q);
    let f_p = RealFunction::compose_power(f, p);
    let g_p = RealFunction::compose_power(g, p);
    let g_q = RealFunction::compose_power(g, q);

    let mut acc = Accumulator::new();
    for &(a, b) in pairs {
        let sample = Sample::Pair(a, Bound::Finite(b));
        acc.samples.push(sample);
        let boundary = f.eval(b)? * g.eval(b)? - f.eval(a)? * g.eval(a)?;
        let side = |h: &RealFunction, k: &RealFunction| -> std::result::Result<f64, String> {
            let out = stieltjes_integral(a, b, h, k, params, config).map_err(|e| e.to_string())?;
            converged(out.result, "Stieltjes integral")
        };
        let residual = (|| {
            let first = side(&f_q, g)? + side(&g_p, f)?;
            let second = side(&f_p, g)? + side(&g_q, f)?;
            Ok::<f64, String>((first - boundary).abs().max((second - boundary).abs()))
        })();
        match residual {
            Ok(r) => acc.record(sample, r),
            Err(message) => acc.fail(sample, message),
        }
    }
    acc.finish("integration_by_parts", tol)
}
