use pqcalc::{pq_derivative, Interval, LimitPolicy, PqParams, RealFunction};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = PqParams> {
    (0.1f64..4.0, 0.1f64..4.0)
        .prop_filter("distinct, away from 1", |(p, q)| {
            (p - q).abs() > 0.05 && (p - 1.0).abs() > 0.05 && (q - 1.0).abs() > 0.05
        })
        .prop_map(|(p, q)| PqParams::derivative(p, q).unwrap())
}

fn point() -> impl Strategy<Value = f64> {
    prop_oneof![0.1f64..0.95, 1.05f64..5.0]
}

fn d(f: &RealFunction, x: f64, params: &PqParams) -> f64 {
    pq_derivative(f, x, params, &LimitPolicy::default()).unwrap()
}

proptest! {
    #[test]
    fn derivative_is_linear(params in params(), x in point(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let f = RealFunction::power(2.0);
        let g = RealFunction::ln();
        let combo = RealFunction::linear_combination(a, &f, b, &g);
        let lhs = d(&combo, x, &params);
        let rhs = a * d(&f, x, &params) + b * d(&g, x, &params);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn power_rule(params in params(), x in point(), n in -3.0f64..3.0) {
        let (p, q) = (params.p(), params.q());
        let want = (x.powf(n * p) - x.powf(n * q)) / (x.powf(p) - x.powf(q));
        let got = d(&RealFunction::power(n), x, &params);
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()), "{got} vs {want}");
    }

    #[test]
    fn log_rule(params in params(), x in point()) {
        let (p, q) = (params.p(), params.q());
        let want = (p - q) * x.ln() / (x.powf(p) - x.powf(q));
        let got = d(&RealFunction::ln(), x, &params);
        prop_assert!((got - want).abs() <= 1e-10 * want.abs(), "{got} vs {want}");
    }

    #[test]
    fn limit_at_one_is_classical(params in params(), n in 0.5f64..4.0) {
        let got = d(&RealFunction::power(n), 1.0, &params);
        prop_assert!((got - n).abs() < 1e-6, "{got} vs {n}");
    }
}

#[test]
fn classical_limit_for_exp() {
    let exp = RealFunction::new(Interval::non_negative(), f64::exp);
    let mut previous = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let params = PqParams::derivative(1.0 - eps, 1.0 - 2.0 * eps).unwrap();
        let err = (d(&exp, 2.0, &params) - 2f64.exp()).abs();
        assert!(err < previous, "eps {eps}: {err} not below {previous}");
        previous = err;
    }
    assert!(previous < 2e-3);
}
