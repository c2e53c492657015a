//! pq-derivatives of powers and the logarithm, higher orders, and the
//! limits taken at x = 1.

use pqcalc::{pq_derivative, pq_derivative_n, LimitPolicy, PqParams, RealFunction};

fn main() -> pqcalc::Result<()> {
    let policy = LimitPolicy::default();
    for (p, q) in [(2.0, 3.0), (0.8, 0.4)] {
        let params = PqParams::derivative(p, q)?;
        println!("p = {p}, q = {q}");
        for x in [0.5, 2.0, 5.0] {
            let square = pq_derivative(&RealFunction::power(2.0), x, &params, &policy)?;
            let log = pq_derivative(&RealFunction::ln(), x, &params, &policy)?;
            println!("  x = {x:<4} D x^2 = {square:<22} D ln x = {log}");
        }
    }

    // At x = 1 both evaluation points coincide and the value is a limit.
    let params = PqParams::integration(0.8, 0.4)?;
    let at_one = pq_derivative(&RealFunction::power(2.0), 1.0, &params, &policy)?;
    println!("D x^2 at 1 = {at_one} (classical 2)");

    let exp = RealFunction::new(pqcalc::Interval::non_negative(), f64::exp);
    let at_one = pq_derivative(&exp, 1.0, &params, &policy)?;
    println!("D exp at 1 = {at_one} (classical {})", std::f64::consts::E);

    // Approaching p = q = 1 recovers the classical derivative.
    for eps in [1e-2, 1e-3, 1e-4] {
        let params = PqParams::derivative(1.0 - eps, 1.0 - 2.0 * eps)?;
        let d = pq_derivative(&exp, 2.0, &params, &policy)?;
        println!(
            "eps = {eps:e}: |D exp(2) - exp(2)| = {:e}",
            (d - 2f64.exp()).abs()
        );
    }

    let params = PqParams::derivative(2.0, 3.0)?;
    for n in 0..=3 {
        let d = pq_derivative_n(&RealFunction::power(3.0), 2.0, n, &params)?;
        println!("D^{n} x^3 at 2 = {d}");
    }
    Ok(())
}
