//! Sampled checks of the boundedness condition that makes the series
//! antiderivative converge.

use pqcalc::integral::check_antiderivative_hypothesis;
use pqcalc::{Interval, PqParams, RealFunction};

fn main() -> pqcalc::Result<()> {
    let params = PqParams::integration(0.8, 0.4)?;
    let candidates = [
        ("x^2", RealFunction::power(2.0), 0.0),
        ("ln x", RealFunction::ln(), 0.5),
        (
            "1/(x^p - x^q)",
            RealFunction::fallible(Interval::positive(), |x| {
                Ok(1.0 / (x.powf(0.8) - x.powf(0.4)))
            }),
            0.5,
        ),
    ];
    for (name, f, alpha) in candidates {
        let check = check_antiderivative_hypothesis(&f, alpha, 4.0, &params, 200)?;
        println!(
            "{name:<14} alpha {alpha}: verdict {:<5} bound {:?} witness {:?}",
            check.verdict, check.bound_m, check.witness
        );
    }
    Ok(())
}
