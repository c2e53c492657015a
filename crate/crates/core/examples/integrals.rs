//! Series antiderivatives and definite integrals on each kind of interval.

use pqcalc::{
    antiderivative_series, definite_outcome, integral_n, integral_with_dg, PqParams, RealFunction,
    SeriesConfig,
};

fn main() -> pqcalc::Result<()> {
    let params = PqParams::integration(0.8, 0.4)?;
    let config = SeriesConfig::default();
    let five = RealFunction::constant(5.0);

    for (a, b) in [
        (1.0, 4.0),
        (3.0, 4.0),
        (1.0 / 3.0, 1.0),
        (0.0, 0.5),
        (0.25, 0.5),
        (0.5, 2.0),
    ] {
        let out = definite_outcome(a, b, &five, &params, &config)?;
        println!(
            "int_{a:.4}^{b} 5 = {:<20} {} after {} terms in {} part(s)",
            out.result.value,
            out.result.status,
            out.result.terms_used,
            out.parts.len()
        );
    }

    let ln_quotient = RealFunction::fallible(pqcalc::Interval::positive(), |x| {
        Ok(x.ln() / (x.powf(0.8) - x.powf(0.4)))
    });
    let r = definite_outcome(1.0, 3.0, &ln_quotient, &params, &config)?.result;
    println!("int_1^3 ln x/(x^p - x^q) = {} ({})", r.value, r.status);

    // Every term of this series equals 1, so summation stops with a verdict.
    let reciprocal = RealFunction::fallible(pqcalc::Interval::positive(), |x| {
        Ok(1.0 / (x.powf(0.8) - x.powf(0.4)))
    });
    let r = definite_outcome(1.0, 3.0, &reciprocal, &params, &config)?.result;
    println!(
        "int_1^3 1/(x^p - x^q): {} after {} terms",
        r.status, r.terms_used
    );

    let cube = RealFunction::power(3.0);
    let r = antiderivative_series(&cube, 2.0, &params, &config)?;
    println!("I+ x^3 at 2 = {} ({} terms)", r.value, r.terms_used);

    let square = RealFunction::power(2.0);
    let r = integral_with_dg(&RealFunction::identity(), &square, 0.5, &params, &config)?;
    println!("int_0^0.5 x d(x^2) = {}", r.value);

    let r = integral_n(&RealFunction::constant(1.0), 0.5, 2, &params, &config)?;
    println!("I^2 of 1 at 0.5 = {} ({})", r.value, r.status);
    Ok(())
}
