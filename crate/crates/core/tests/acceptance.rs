//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;

use pqcalc::cli::run::{JSON_INPUT_KEYS, JSON_KEYS};
use pqcalc::cli::{run_cli, CliRequest, Command};
use pqcalc::laws::{
    verify_fundamental_theorem, verify_integration_by_parts, verify_inverse_lemmas,
    verify_product_rules, verify_quotient_rules,
};
use pqcalc::{
    definite_integral, derivative_function, improper_integral, lattice, pq_derivative, sum_series,
    Bound, IntegralRequest, Interval, LimitPolicy, PqParams, RealFunction, SeriesConfig, Status,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: f64 = 0.8;
const Q: f64 = 0.4;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params() -> PqParams {
    PqParams::integration(P, Q).unwrap()
}

fn config() -> SeriesConfig {
    SeriesConfig::default()
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!(
            "{label}: got {got}, want {want} (|diff| {:.3e} > {tol:e})",
            (got - want).abs()
        )
    })
}

fn positive(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFunction {
    RealFunction::new(Interval::positive(), f)
}

fn constant_integrands() -> Outcome {
    let c = 5.0;
    let f = RealFunction::constant(c);
    let cases = [
        (1.0, 4.0, 15.0),
        (3.0, 4.0, c),
        (1.0 / 3.0, 1.0, 2.0 * c / 3.0),
        (0.0, 0.5, c / 2.0),
        (0.25, 0.5, c / 4.0),
    ];
    for (a, b, want) in cases {
        let r = definite_integral(a, b, &f, &params(), &config()).map_err(|e| e.to_string())?;
        ensure(r.is_converged(), || format!("[{a}, {b}]: {}", r.status))?;
        close(&format!("[{a}, {b}]"), r.value, want, 1e-9)?;
    }
    Ok(format!("{} intervals within 1e-9", cases.len()))
}

fn divergence_detection() -> Outcome {
    let f = positive(|x| 1.0 / (x.powf(P) - x.powf(Q)));
    let config = config();
    let r = definite_integral(1.0, 3.0, &f, &params(), &config).map_err(|e| e.to_string())?;
    ensure(r.status == Status::DivergenceDetected, || {
        format!("status {}", r.status)
    })?;
    ensure(r.terms_used < config.max_terms, || {
        format!("used {} terms", r.terms_used)
    })?;
    Ok(format!(
        "DivergenceDetected after {} of {} terms",
        r.terms_used, config.max_terms
    ))
}

fn ln_example() -> Outcome {
    let ln3 = 3f64.ln();
    let r = Q / P;
    let definition_value = ln3 / (P - Q);

    // Definition summand with the true integrand, summed directly.
    let mut oracle = 0.0;
    for j in 0..10_000 {
        let e0 = r.powi(j);
        let e1 = r.powi(j + 1);
        let w = 3f64.powf(e0) - 3f64.powf(e1);
        if w == 0.0 {
            continue;
        }
        let y = 3f64.powf(e0 / P);
        oracle += w * (y.ln() / (y.powf(P) - y.powf(Q)));
    }
    close("oracle vs ln3/(p-q)", oracle, definition_value, 1e-8)?;

    let f = positive(|x| x.ln() / (x.powf(P) - x.powf(Q)));
    let got = definite_integral(1.0, 3.0, &f, &params(), &config()).map_err(|e| e.to_string())?;
    ensure(got.is_converged(), || format!("status {}", got.status))?;
    close("library vs oracle", got.value, oracle, 1e-8)?;

    // Alternate reading: the printed summand ln(3^(r^j)).
    let alternate_value = P * ln3 / (P - Q);
    let mut alt_oracle = 0.0;
    for j in 0..10_000 {
        alt_oracle += 3f64.powf(r.powi(j)).ln();
    }
    close(
        "alternate oracle vs p ln3/(p-q)",
        alt_oracle,
        alternate_value,
        1e-8,
    )?;
    let params = params();
    let alt = sum_series(
        |j| Ok(3f64.powf(lattice::exponent(j as i64, &params)?).ln()),
        &config(),
    )
    .map_err(|e| e.to_string())?;
    close("alternate series vs oracle", alt.value, alt_oracle, 1e-8)?;

    Ok(format!(
        "definition {:.10} (oracle {oracle:.10}); alternate {:.10} (oracle {alt_oracle:.10})",
        got.value, alt.value
    ))
}

fn telescoping_oracle() -> Outcome {
    let params = params();
    let policy = LimitPolicy::default();
    let fs = [
        ("x^2", RealFunction::power(2.0)),
        ("x^3", RealFunction::power(3.0)),
        ("ln x", RealFunction::ln()),
    ];
    let mut worst = 0.0_f64;
    for (name, big_f) in &fs {
        for x in [2.0, 4.0, 0.5] {
            let mut partial = 0.0;
            for n in 0..=30i64 {
                let node = lattice::node(x, n, &params).map_err(|e| e.to_string())?;
                let w = lattice::weight(x, n, &params).map_err(|e| e.to_string())?;
                let d = pq_derivative(big_f, node, &params, &policy).map_err(|e| e.to_string())?;
                partial += w * d;
                let end = x.powf((Q / P).powi(n as i32 + 1));
                let want = big_f.eval(x).unwrap() - big_f.eval(end).unwrap();
                let rel = (partial - want).abs() / want.abs();
                worst = worst.max(rel);
                ensure(rel <= 1e-12, || {
                    format!("{name} at x = {x}, N = {n}: {partial} vs {want} (rel {rel:.3e})")
                })?;
            }
        }
    }
    Ok(format!(
        "270 partial sums, worst relative error {worst:.2e}"
    ))
}

fn fundamental_theorem() -> Outcome {
    let cube = RealFunction::power(3.0);
    let df = derivative_function(&cube, &params());
    let cases = [(2.0, 4.0, 56.0), (0.25, 0.5, 0.109375), (0.5, 2.0, 7.875)];
    for (a, b, want) in cases {
        let r = definite_integral(a, b, &df, &params(), &config()).map_err(|e| e.to_string())?;
        ensure(r.is_converged(), || format!("[{a}, {b}]: {}", r.status))?;
        close(&format!("[{a}, {b}]"), r.value, want, 1e-8)?;
    }
    Ok("56, 0.109375, 7.875 within 1e-8".into())
}

fn improper_ftc() -> Outcome {
    let big_f = positive(|x| -1.0 / x);
    let df = derivative_function(&big_f, &params());
    let request = IntegralRequest::new(2.0, Bound::Infinity).map_err(|e| e.to_string())?;
    let out = improper_integral(&request, &df, &params(), &config()).map_err(|e| e.to_string())?;
    ensure(out.result.is_converged(), || {
        format!("status {}", out.result.status)
    })?;
    close("[2, inf)", out.result.value, 0.5, 1e-6)?;
    Ok(format!("{}", out.result.value))
}

const F_POOL: [&str; 6] = [
    "x^2",
    "x^3",
    "x^2 + 1",
    "exp(x)",
    "ln(1 + x)",
    "sqrt(x) + x",
];
const G_POOL: [&str; 5] = ["x^2 + 1", "exp(x)", "x + 2", "cos(x) + 2", "1/(1 + x)"];

fn expression(src: &str) -> RealFunction {
    let e = pqcalc::cli::parse_expr(src).unwrap();
    pqcalc::cli::to_function(&e, Default::default())
}

fn sample_point(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.5) {
        rng.gen_range(0.2..0.9)
    } else {
        rng.gen_range(1.1..3.0)
    }
}

fn law_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0017);
    let params = params();
    let config = config();
    let tol = 1e-8;
    let mut worst = (0.0_f64, String::new());
    for case in 0..20 {
        let f_src = F_POOL[rng.gen_range(0..F_POOL.len())];
        let g_src = G_POOL[rng.gen_range(0..G_POOL.len())];
        let x = sample_point(&mut rng);
        let a = sample_point(&mut rng);
        let b = a + rng.gen_range(0.2..1.5);
        let (f, g) = (expression(f_src), expression(g_src));
        let reports = [
            verify_product_rules(&f, &g, &[x], &params, tol),
            verify_quotient_rules(&f, &g, &[x], &params, tol),
            verify_inverse_lemmas(&f, &[x], &params, &config, tol),
            verify_fundamental_theorem(&f, &[(a, Bound::Finite(b))], None, &params, &config, tol),
            verify_integration_by_parts(&f, &g, &[(a, b)], &params, &config, tol),
        ];
        for report in reports {
            let report = report.map_err(|e| format!("case {case} ({f_src}, {g_src}): {e}"))?;
            let label = format!("case {case} f = {f_src}, g = {g_src}: {report}");
            ensure(report.passed && report.max_residual < tol, || label.clone())?;
            if report.max_residual >= worst.0 {
                worst = (report.max_residual, label);
            }
        }
    }
    Ok(format!(
        "20 seeded cases x 5 suites, worst residual {:.2e}",
        worst.0
    ))
}

fn closed_form_derivatives() -> Outcome {
    let policy = LimitPolicy::default();
    let mut checked = 0;
    for (p, q) in [(2.0, 3.0), (0.8, 0.4)] {
        let params = PqParams::derivative(p, q).unwrap();
        for x in [0.5f64, 2.0, 5.0] {
            let den = x.powf(p) - x.powf(q);
            for n in [2.0f64, 3.0, -1.0, 0.5] {
                let want = (x.powf(n * p) - x.powf(n * q)) / den;
                let got = pq_derivative(&RealFunction::power(n), x, &params, &policy)
                    .map_err(|e| e.to_string())?;
                close(
                    &format!("D x^{n} at {x}, ({p}, {q})"),
                    got,
                    want,
                    1e-10 * want.abs(),
                )?;
                checked += 1;
            }
            let want = (p - q) * x.ln() / den;
            let got = pq_derivative(&RealFunction::ln(), x, &params, &policy)
                .map_err(|e| e.to_string())?;
            close(
                &format!("D ln x at {x}, ({p}, {q})"),
                got,
                want,
                1e-10 * want.abs(),
            )?;
            checked += 1;
        }
    }
    let got = pq_derivative(&RealFunction::power(2.0), 1.0, &params(), &policy)
        .map_err(|e| e.to_string())?;
    close("D x^2 at 1", got, 2.0, 1e-6)?;
    Ok(format!(
        "{checked} closed forms within 1e-10 relative; D x^2(1) = {got}"
    ))
}

fn classical_limit() -> Outcome {
    let exp = RealFunction::new(Interval::non_negative(), f64::exp);
    let policy = LimitPolicy::default();
    let mut errors = Vec::new();
    for eps in [1e-2, 1e-3, 1e-4] {
        let params = PqParams::derivative(1.0 - eps, 1.0 - 2.0 * eps).unwrap();
        let d = pq_derivative(&exp, 2.0, &params, &policy).map_err(|e| e.to_string())?;
        errors.push((d - 2f64.exp()).abs());
    }
    for w in errors.windows(2) {
        ensure(w[1] * 5.0 <= w[0], || {
            format!("errors {errors:?} do not shrink 5x per step")
        })?;
    }
    Ok(format!(
        "errors {:.3e}, {:.3e}, {:.3e}",
        errors[0], errors[1], errors[2]
    ))
}

fn cli_args(args: &[&str]) -> CliRequest {
    use clap::Parser;
    CliRequest::try_parse_from(std::iter::once("pqcalc").chain(args.iter().copied())).unwrap()
}

fn cli_contract() -> Outcome {
    let runs = [
        (
            vec![
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
            ],
            "value: 15\n",
            0,
        ),
        (
            vec!["deriv", "--expr", "x^2", "--p", "2", "--q", "3", "--x", "2"],
            "value: 12\n",
            0,
        ),
        (
            vec![
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
            ],
            "status: DivergenceDetected\n",
            2,
        ),
    ];
    let binary = env!("CARGO_BIN_EXE_pqcalc");
    for (args, expected_line, code) in &runs {
        let out = run_cli(&cli_args(args));
        ensure(
            out.exit_code == *code && out.stdout.contains(expected_line),
            || format!("{args:?}: exit {} stdout {:?}", out.exit_code, out.stdout),
        )?;
        let proc = std::process::Command::new(binary)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let stdout = String::from_utf8_lossy(&proc.stdout);
        ensure(
            proc.status.code() == Some(*code) && stdout.contains(expected_line),
            || format!("binary {args:?}: {:?} stdout {stdout:?}", proc.status),
        )?;

        let mut json_args = args.clone();
        json_args.push("--json");
        let out = run_cli(&cli_args(&json_args));
        let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        let obj = v.as_object().ok_or("JSON output is not an object")?;
        let keys: BTreeSet<&str> = obj.keys().map(String::as_str).collect();
        ensure(keys == BTreeSet::from(JSON_KEYS), || {
            format!("keys {keys:?}")
        })?;
        let inputs: BTreeSet<&str> = v["inputs"]
            .as_object()
            .ok_or("inputs is not an object")?
            .keys()
            .map(String::as_str)
            .collect();
        ensure(inputs == BTreeSet::from(JSON_INPUT_KEYS), || {
            format!("input keys {inputs:?}")
        })?;
    }
    let mut request = CliRequest::new(Command::Deriv, "x^2", 2.0, 3.0);
    request.x = Some(2.0);
    request.json = true;
    let v: serde_json::Value = serde_json::from_str(&run_cli(&request).stdout).unwrap();
    ensure(v["value"].as_f64() == Some(12.0), || {
        format!("JSON value {}", v["value"])
    })?;
    Ok("3 runs in-process and via the binary; JSON key sets fixed".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("constant-integrand golden values", constant_integrands),
        ("divergence detection", divergence_detection),
        ("logarithmic integrand, both readings", ln_example),
        ("telescoping partial sums", telescoping_oracle),
        (
            "fundamental theorem on finite intervals",
            fundamental_theorem,
        ),
        ("fundamental theorem on [2, inf)", improper_ftc),
        ("law suites over seeded corpus", law_suites),
        (
            "closed-form derivatives and limit at 1",
            closed_form_derivatives,
        ),
        ("classical limit", classical_limit),
        ("command-line contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
