//! Improper integrals over [a, inf), [0, 1] and [0, inf).

use pqcalc::integral::{check_improper_hypothesis, required_domain, ImproperBounds};
use pqcalc::{
    derivative_function, improper_integral, Bound, IntegralRequest, Interval, PqParams,
    RealFunction, SeriesConfig,
};

fn main() -> pqcalc::Result<()> {
    let params = PqParams::integration(0.8, 0.4)?;
    let config = SeriesConfig::default();

    // D(-1/x) integrates to F(inf) - F(a) = 1/a.
    let antiderivative = RealFunction::fallible(Interval::positive(), |x| Ok(-1.0 / x));
    let f = derivative_function(&antiderivative, &params);
    for a in [2.0, 1.0, 0.5] {
        let request = IntegralRequest::new(a, Bound::Infinity)?;
        let out = improper_integral(&request, &f, &params, &config)?;
        println!(
            "[{a}, inf) {:?}: {} ({}), expected {}",
            request.case_tag(),
            out.result.value,
            out.result.status,
            1.0 / a
        );
    }

    let request = IntegralRequest::new(0.0, 1.0)?;
    let cube = RealFunction::power(3.0);
    println!(
        "required domain for [0, 1]: {}",
        required_domain(&request, &params)?
    );
    let out = improper_integral(
        &request,
        &derivative_function(&cube, &params),
        &params,
        &config,
    )?;
    println!(
        "[0, 1] D x^3 = {} ({})",
        out.result.value, out.result.status
    );

    let decaying = RealFunction::fallible(Interval::positive(), |x| Ok(1.0 / (1.0 + x * x)));
    let request = IntegralRequest::new(0.0, Bound::Infinity)?;
    let out = improper_integral(&request, &decaying, &params, &config)?;
    println!(
        "[0, inf) 1/(1+x^2) = {} ({})",
        out.result.value, out.result.status
    );
    for part in &out.parts {
        println!(
            "  {:?} from {} sign {}: {}",
            part.direction, part.base, part.sign, part.result.value
        );
    }

    // The condition is sufficient, not necessary: it fails here although the
    // integrals above converge.
    let check = check_improper_hypothesis(&f, &ImproperBounds::new(0.0, -0.5, 10.0), &params, 200)?;
    println!(
        "hypothesis for D(-1/x): verdict {} witness {:?}",
        check.verdict, check.witness
    );
    Ok(())
}
