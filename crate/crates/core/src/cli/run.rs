use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::deriv::{pq_derivative, pq_derivative_n, LimitPolicy};
use crate::error::PqError;
use crate::function::RealFunction;
use crate::integral::{
    antiderivative_series, definite_outcome, improper_integral, Bound, IntegralRequest,
};
use crate::lattice::{Mode, PqParams};
use crate::laws::{self, LawReport};
use crate::series::{SeriesConfig, SeriesResult};

use super::expr::{parse_expr, to_function, Bindings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Deriv,
    #[value(name = "deriv-n")]
    DerivN,
    Integrate,
    Improper,
    Antideriv,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Deriv => "deriv",
            Command::DerivN => "deriv-n",
            Command::Integrate => "integrate",
            Command::Improper => "improper",
            Command::Antideriv => "antideriv",
            Command::Verify => "verify",
        }
    }
}

/// One invocation of the front end.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "pqcalc",
    version,
    about = "pq-calculus derivatives, integrals and law checks"
)]
pub struct CliRequest {
    #[arg(value_enum)]
    pub command: Command,
    /// Function of x.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    /// Second function, used by `verify` (default `x + 1`).
    #[arg(long, allow_hyphen_values = true)]
    pub expr2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Upper bound; `inf` is accepted by `integrate` and `improper`.
    #[arg(long, value_parser = parse_bound, allow_hyphen_values = true)]
    pub b: Option<Bound>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Series relative tolerance, or limit tolerance for `deriv`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    /// Value bound to the constant `c`.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long)]
    pub json: bool,
}

fn parse_bound(s: &str) -> Result<Bound, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Bound::Infinity);
    }
    s.parse::<f64>()
        .map(Bound::from)
        .map_err(|e| format!("expected a real or `inf`: {e}"))
}

impl CliRequest {
    /// A request with only the mandatory fields set.
    pub fn new(command: Command, expr: &str, p: f64, q: f64) -> Self {
        Self {
            command,
            expr: expr.to_string(),
            expr2: None,
            p,
            q,
            x: None,
            a: None,
            b: None,
            n: None,
            tol: None,
            max_terms: None,
            c: 1.0,
            json: false,
        }
    }

    /// Checks that the flags present are the ones the command uses.
    pub fn validate(&self) -> Result<(), String> {
        let has = |present: bool, flag: &str, allowed: bool| -> Result<(), String> {
            if present && !allowed {
                Err(format!("--{flag} is not used by `{}`", self.command.name()))
            } else {
                Ok(())
            }
        };
        let need = |present: bool, flag: &str| -> Result<(), String> {
            if present {
                Ok(())
            } else {
                Err(format!("`{}` requires --{flag}", self.command.name()))
            }
        };
        use Command::*;
        let cmd = self.command;
        has(self.expr2.is_some(), "expr2", cmd == Verify)?;
        has(
            self.x.is_some(),
            "x",
            matches!(cmd, Deriv | DerivN | Antideriv | Verify),
        )?;
        has(
            self.a.is_some(),
            "a",
            matches!(cmd, Integrate | Improper | Verify),
        )?;
        has(
            self.b.is_some(),
            "b",
            matches!(cmd, Integrate | Improper | Verify),
        )?;
        has(self.n.is_some(), "n", cmd == DerivN)?;
        has(
            self.max_terms.is_some(),
            "max-terms",
            !matches!(cmd, Deriv | DerivN),
        )?;
        match cmd {
            Deriv | Antideriv => need(self.x.is_some(), "x")?,
            DerivN => {
                need(self.x.is_some(), "x")?;
                need(self.n.is_some(), "n")?;
            }
            Integrate => {
                need(self.a.is_some(), "a")?;
                need(self.b.is_some(), "b")?;
            }
            Improper => need(self.a.is_some(), "a")?,
            Verify => {
                if self.a.is_some() != self.b.is_some() {
                    return Err("`verify` takes --a and --b together".into());
                }
                if self.b == Some(Bound::Infinity) {
                    return Err("`inf` is accepted only by `integrate` and `improper`".into());
                }
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(format!("--tol must be positive, got {tol}"));
            }
        }
        Ok(())
    }

    fn series_config(&self) -> SeriesConfig {
        let mut config = SeriesConfig::default();
        if let Some(tol) = self.tol {
            config = config.with_rel_tol(tol);
        }
        if let Some(max_terms) = self.max_terms {
            config = config.with_max_terms(max_terms);
        }
        config
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Status reported for a pointwise evaluation with no summation.
const EVALUATED: &str = "Evaluated";
/// Tolerance applied to law residuals by `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

struct Answer {
    value: f64,
    status: String,
    terms_used: Option<usize>,
    tail_estimate: Option<f64>,
    ok: bool,
    details: Vec<String>,
}

impl Answer {
    fn evaluated(value: f64) -> Self {
        Self {
            value,
            status: EVALUATED.to_string(),
            terms_used: None,
            tail_estimate: None,
            ok: true,
            details: Vec::new(),
        }
    }

    fn series(r: SeriesResult) -> Self {
        Self {
            value: r.value,
            status: r.status.to_string(),
            terms_used: Some(r.terms_used),
            tail_estimate: Some(r.tail_estimate),
            ok: r.is_converged(),
            details: Vec::new(),
        }
    }
}

enum Failure {
    Usage(String),
    Library(PqError),
}

impl From<PqError> for Failure {
    fn from(e: PqError) -> Self {
        Failure::Library(e)
    }
}

/// Runs one request. Exit codes: 0 on success, 2 on non-convergence or a
/// failed verification, 1 on usage, parse and other library errors.
pub fn run_cli(request: &CliRequest) -> CliOutput {
    match execute(request) {
        Ok(answer) => {
            let stdout = if request.json {
                render_json(request, &answer)
            } else {
                render_text(&answer)
            };
            CliOutput {
                exit_code: if answer.ok { 0 } else { 2 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Usage(message)) => CliOutput {
            exit_code: 1,
            stdout: String::new(),
            stderr: format!("error[E_USAGE]: {message}\n"),
        },
        Err(Failure::Library(e)) => CliOutput {
            exit_code: if e.is_non_convergence() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error[{}]: {}\n", e.code(), single_line(&e.to_string())),
        },
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn load(source: &str, bindings: Bindings) -> Result<RealFunction, Failure> {
    let expr = parse_expr(source).map_err(|e| Failure::Usage(format!("in `{source}`: {e}")))?;
    Ok(to_function(&expr, bindings))
}

fn execute(req: &CliRequest) -> Result<Answer, Failure> {
    req.validate().map_err(Failure::Usage)?;
    let bindings = Bindings { c: req.c };
    let f = load(&req.expr, bindings)?;
    let config = req.series_config();
    // `validate` guarantees the flags each arm unwraps.
    match req.command {
        Command::Deriv => {
            let params = PqParams::derivative(req.p, req.q)?;
            let mut policy = LimitPolicy::default();
            if let Some(tol) = req.tol {
                policy.tol = tol;
            }
            Ok(Answer::evaluated(pq_derivative(
                &f,
                req.x.unwrap(),
                &params,
                &policy,
            )?))
        }
        Command::DerivN => {
            let params = PqParams::derivative(req.p, req.q)?;
            let value = pq_derivative_n(&f, req.x.unwrap(), req.n.unwrap(), &params)?;
            Ok(Answer::evaluated(value))
        }
        Command::Antideriv => {
            let params = PqParams::integration(req.p, req.q)?;
            let r = antiderivative_series(&f, req.x.unwrap(), &params, &config)?;
            Ok(Answer::series(r))
        }
        Command::Integrate | Command::Improper => {
            let params = PqParams::integration(req.p, req.q)?;
            let a = req.a.unwrap();
            let b = req.b.unwrap_or(Bound::Infinity);
            let request = IntegralRequest::new(a, b)?;
            let outcome = match b {
                Bound::Finite(b) if !request.case_tag().is_improper() => {
                    if req.command == Command::Improper {
                        return Err(Failure::Usage(format!(
                            "[{a}, {b}] is a proper interval; use `integrate`"
                        )));
                    }
                    definite_outcome(a, b, &f, &params, &config)?
                }
                _ => improper_integral(&request, &f, &params, &config)?,
            };
            let mut answer = Answer::series(outcome.result);
            if let Some(part) = outcome.failed_part() {
                answer.details.push(format!(
                    "first failing part: {:?} sum from base {} ({})",
                    part.direction, part.base, part.result.status
                ));
            }
            Ok(answer)
        }
        Command::Verify => verify(req, &f, bindings, &config),
    }
}

fn verify(
    req: &CliRequest,
    f: &RealFunction,
    bindings: Bindings,
    config: &SeriesConfig,
) -> Result<Answer, Failure> {
    let g = load(req.expr2.as_deref().unwrap_or("x + 1"), bindings)?;
    let params = PqParams::new(req.p, req.q)?;
    let xs: Vec<f64> = match req.x {
        Some(x) => vec![x],
        None => vec![0.5, 2.0, 3.0],
    };
    let pairs: Vec<(f64, f64)> = match (req.a, req.b.and_then(|b| b.finite())) {
        (Some(a), Some(b)) => vec![(a, b)],
        _ => vec![(2.0, 4.0), (0.25, 0.5), (0.5, 2.0)],
    };
    let tol = VERIFY_TOLERANCE;

    let mut reports: Vec<LawReport> = vec![
        laws::verify_product_rules(f, &g, &xs, &params, tol)?,
        laws::verify_quotient_rules(f, &g, &xs, &params, tol)?,
    ];
    if params.mode() == Mode::Integration {
        let bounded: Vec<(f64, Bound)> =
            pairs.iter().map(|&(a, b)| (a, Bound::Finite(b))).collect();
        reports.push(laws::verify_inverse_lemmas(f, &xs, &params, config, tol)?);
        reports.push(laws::verify_fundamental_theorem(
            f, &bounded, None, &params, config, tol,
        )?);
        reports.push(laws::verify_integration_by_parts(
            f, &g, &pairs, &params, config, tol,
        )?);
    }

    let worst = reports.iter().fold(0.0_f64, |m, r| m.max(r.max_residual));
    let passed = reports.iter().all(|r| r.passed);
    Ok(Answer {
        value: worst,
        status: if passed { "Passed" } else { "Failed" }.to_string(),
        terms_used: None,
        tail_estimate: None,
        ok: passed,
        details: reports.iter().map(|r| r.to_string()).collect(),
    })
}

/// Rounds to 12 significant digits so summation noise below the default
/// tolerance does not show in text output. JSON keeps every digit.
fn display_value(v: f64) -> f64 {
    if v.is_finite() {
        format!("{v:.11e}").parse().unwrap_or(v)
    } else {
        v
    }
}

fn render_text(answer: &Answer) -> String {
    let mut out = String::new();
    for line in &answer.details {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("value: {}\n", display_value(answer.value)));
    out.push_str(&format!("status: {}\n", answer.status));
    match answer.terms_used {
        Some(n) => out.push_str(&format!("terms_used: {n}\n")),
        None => out.push_str("terms_used: -\n"),
    }
    out
}

/// A JSON number with 17 significant digits, or `null` when not finite.
fn number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

fn optional(v: Option<f64>) -> Box<RawValue> {
    number(v.unwrap_or(f64::NAN))
}

#[derive(Serialize)]
struct Inputs<'a> {
    expr: &'a str,
    expr2: Option<&'a str>,
    x: Box<RawValue>,
    a: Box<RawValue>,
    b: Box<RawValue>,
    n: Option<u32>,
    c: Box<RawValue>,
}

#[derive(Serialize)]
struct Record<'a> {
    command: &'a str,
    p: Box<RawValue>,
    q: Box<RawValue>,
    inputs: Inputs<'a>,
    value: Box<RawValue>,
    status: &'a str,
    terms_used: Option<usize>,
    tail_estimate: Box<RawValue>,
}

/// Top-level keys of every JSON record, in order.
pub const JSON_KEYS: [&str; 8] = [
    "command",
    "p",
    "q",
    "inputs",
    "value",
    "status",
    "terms_used",
    "tail_estimate",
];

/// Keys of the `inputs` object, in order.
pub const JSON_INPUT_KEYS: [&str; 7] = ["expr", "expr2", "x", "a", "b", "n", "c"];

fn render_json(req: &CliRequest, answer: &Answer) -> String {
    // `improper` defaults its upper bound to infinity; report what was used.
    let b = match (req.b, req.command) {
        (Some(Bound::Infinity), _) | (None, Command::Improper) => {
            RawValue::from_string("\"inf\"".into()).unwrap()
        }
        (Some(Bound::Finite(v)), _) => number(v),
        (None, _) => optional(None),
    };
    let record = Record {
        command: req.command.name(),
        p: number(req.p),
        q: number(req.q),
        inputs: Inputs {
            expr: &req.expr,
            expr2: req.expr2.as_deref(),
            x: optional(req.x),
            a: optional(req.a),
            b,
            n: req.n,
            c: number(req.c),
        },
        value: number(answer.value),
        status: &answer.status,
        terms_used: answer.terms_used,
        tail_estimate: optional(answer.tail_estimate),
    };
    let mut s = serde_json::to_string(&record).expect("record serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> CliRequest {
        CliRequest::try_parse_from(std::iter::once("pqcalc").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn constant_integrand() {
        let req = parse(&[
            "integrate",
            "--expr",
            "c",
            "--c",
            "5",
            "--p",
            "0.8",
            "--q",
            "0.4",
            "--a",
            "1",
            "--b",
            "4",
        ]);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 0, "{out:?}");
        assert!(out.stdout.contains("value: 15"), "{}", out.stdout);
        assert!(out.stdout.contains("status: Converged"));
    }

    #[test]
    fn derivative_of_square() {
        let req = parse(&["deriv", "--expr", "x^2", "--p", "2", "--q", "3", "--x", "2"]);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 0, "{out:?}");
        assert!(out.stdout.starts_with("value: 12\n"), "{}", out.stdout);
    }

    #[test]
    fn divergent_integrand_exits_two() {
        let req = parse(&[
            "integrate",
            "--expr",
            "1/(x^0.8 - x^0.4)",
            "--p",
            "0.8",
            "--q",
            "0.4",
            "--a",
            "1",
            "--b",
            "3",
        ]);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 2, "{out:?}");
        assert!(out.stdout.contains("status: DivergenceDetected"));
    }

    #[test]
    fn json_record_has_fixed_keys() {
        let mut req = CliRequest::new(Command::Deriv, "x^2", 2.0, 3.0);
        req.x = Some(2.0);
        req.json = true;
        let out = run_cli(&req);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.keys().count(), JSON_KEYS.len());
        for k in JSON_KEYS {
            assert!(obj.contains_key(k), "{k}");
        }
        assert_eq!(v["value"].as_f64().unwrap(), 12.0);
        assert!(v["terms_used"].is_null());
        assert_eq!(
            v["inputs"].as_object().unwrap().len(),
            JSON_INPUT_KEYS.len()
        );
        assert!(out.stdout.contains("\"value\":1.2000000000000000e1"));
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut req = CliRequest::new(Command::Deriv, "x^2", 2.0, 3.0);
        assert_eq!(run_cli(&req).exit_code, 1);
        req.x = Some(2.0);
        req.a = Some(1.0);
        assert_eq!(run_cli(&req).exit_code, 1);

        let mut req = CliRequest::new(Command::Integrate, "2 +", 0.8, 0.4);
        req.a = Some(1.0);
        req.b = Some(Bound::Finite(2.0));
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 1);
        assert!(out.stderr.contains("offset 3"), "{}", out.stderr);
    }

    #[test]
    fn library_errors_carry_codes() {
        let mut req = CliRequest::new(Command::Integrate, "x", 2.0, 3.0);
        req.a = Some(1.0);
        req.b = Some(Bound::Finite(2.0));
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 1);
        assert!(out.stderr.starts_with("error[E_PARAMS]"), "{}", out.stderr);
    }

    #[test]
    fn jump_at_one_reports_non_convergence() {
        let mut req = CliRequest::new(Command::Deriv, "sqrt((x - 1)^2)", 0.8, 0.4);
        req.x = Some(1.0);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 2, "{out:?}");
        assert!(out.stderr.starts_with("error[E_LIMIT]"));
    }

    #[test]
    fn improper_defaults_to_infinity() {
        let mut req = CliRequest::new(Command::Improper, "x^(-2)", 0.8, 0.4);
        req.a = Some(2.0);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 0, "{out:?}");
        let value: f64 = out.stdout.lines().next().unwrap()[7..].parse().unwrap();
        assert!(value > 0.0);
    }

    #[test]
    fn inf_only_where_allowed() {
        let req = parse(&[
            "verify", "--expr", "x^2", "--p", "0.8", "--q", "0.4", "--a", "1", "--b", "inf",
        ]);
        assert_eq!(run_cli(&req).exit_code, 1);
    }

    #[test]
    fn verify_passes_on_polynomials() {
        let req = parse(&[
            "verify", "--expr", "x^3", "--expr2", "x^2 + 1", "--p", "0.8", "--q", "0.4",
        ]);
        let out = run_cli(&req);
        assert_eq!(out.exit_code, 0, "{}{}", out.stdout, out.stderr);
        assert!(out.stdout.contains("status: Passed"));
    }
}
