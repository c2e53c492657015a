//! Residual checks for the calculus identities.

use pqcalc::laws::{
    verify_fundamental_theorem, verify_integration_by_parts, verify_inverse_lemmas,
    verify_product_rules, verify_quotient_rules,
};
use pqcalc::{Bound, PqParams, RealFunction, SeriesConfig};

fn main() -> pqcalc::Result<()> {
    let params = PqParams::integration(0.8, 0.4)?;
    let config = SeriesConfig::default();
    let tol = 1e-8;
    let f = RealFunction::power(3.0);
    let g = RealFunction::linear_combination(
        1.0,
        &RealFunction::power(2.0),
        1.0,
        &RealFunction::constant(1.0),
    );
    let xs = [0.5, 2.0, 3.0];

    let reports = [
        verify_product_rules(&f, &g, &xs, &params, tol)?,
        verify_quotient_rules(&f, &g, &xs, &params, tol)?,
        verify_inverse_lemmas(&f, &xs, &params, &config, tol)?,
        verify_fundamental_theorem(
            &f,
            &[
                (2.0, Bound::Finite(4.0)),
                (0.25, Bound::Finite(0.5)),
                (0.5, Bound::Finite(2.0)),
            ],
            None,
            &params,
            &config,
            tol,
        )?,
        verify_integration_by_parts(&f, &g, &[(2.0, 4.0), (0.25, 0.5)], &params, &config, tol)?,
    ];
    for report in &reports {
        println!("{report}");
    }

    // The same rules hold for derivative-only parameters.
    let params = PqParams::derivative(2.0, 3.0)?;
    println!("{}", verify_product_rules(&f, &g, &xs, &params, tol)?);
    Ok(())
}
