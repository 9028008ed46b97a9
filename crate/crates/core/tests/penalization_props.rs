use proptest::prelude::*;
use vanish_core::penalization::make_penalized;
use vanish_core::problem::spec::fixtures::p1;
use vanish_core::problem::{Modulation, Nonlinearity, Potential, ProblemSpec};

const SLACK: f64 = 1.0 + 1e-8;

fn potential(radius: f64) -> impl Strategy<Value = Potential> {
    prop_oneof![
        (0.1..10.0f64).prop_map(|value| Potential::Constant { value }),
        (0.1..100.0f64, 0.0..4.0f64).prop_map(|(amplitude, exponent)| Potential::PowerDecay { amplitude, exponent }),
        (0.1..100.0f64, 0.0..2.0f64, 0.5..2.0f64)
            .prop_map(|(amplitude, rate, power)| Potential::ExpDecay { amplitude, rate, power }),
        (0.0..2.0f64, 0.1..5.0f64).prop_map(|(c2, c0)| Potential::Quadratic { c2, c0 }),
        (0.1..100.0f64, 0.0..3.0f64, 0.0..2.0f64, 0.05..0.95f64).prop_map(move |(amplitude, exponent, depth, w)| {
            Potential::Well {
                amplitude,
                exponent,
                depth,
                width: w * radius,
            }
        }),
    ]
}

fn nonlinearity() -> impl Strategy<Value = Nonlinearity> {
    let modulation = (0.0..2.0f64, 0.0..2.0f64).prop_map(|(amp, rate)| Modulation { amp, rate });
    prop_oneof![
        (0.1..5.0f64, 2.1..5.9f64, 0.0..2.0f64, 2.1..5.9f64, modulation.clone()).prop_map(
            |(c1, gamma1, c2, gamma2, modulation)| Nonlinearity::PowerSum {
                c1,
                gamma1,
                c2,
                gamma2,
                modulation,
            }
        ),
        (0.1..5.0f64, 2.5..5.0f64, 0.1..2.0f64, 0.5..3.0f64, modulation)
            .prop_map(|(c1, power, a, q, modulation)| Nonlinearity::ExpFlat { c1, power, a, q, modulation }),
    ]
}

fn spec() -> impl Strategy<Value = ProblemSpec> {
    (1.0..5.0f64, 2.5..6.0f64, any::<bool>())
        .prop_flat_map(|(radius, theta, odd)| {
            (potential(radius), nonlinearity()).prop_map(move |(potential, nonlinearity)| ProblemSpec {
                potential,
                nonlinearity,
                radius,
                theta,
                odd,
                ..p1(1.0)
            })
        })
        .prop_filter("valid spec", |s| s.validate().is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, ..ProptestConfig::default() })]

    #[test]
    fn clamps_hold(spec in spec(), r in 0.0..20.0f64, s in -30.0..30.0f64) {
        let pen = make_penalized(&spec).unwrap();
        let k = pen.k();
        let f = spec.f(r, s);
        let g = pen.g(r, s);
        prop_assert!(g.abs() <= f.abs() * SLACK + 1e-300, "|g| = {} > |f| = {}", g.abs(), f.abs());
        if r <= spec.radius {
            prop_assert_eq!(g.to_bits(), f.to_bits());
        } else {
            let v = spec.v(r);
            prop_assert!(g.abs() <= v * s.abs() / k * SLACK, "|g| = {} > V|s|/k = {}", g.abs(), v * s.abs() / k);
            let big_g = pen.big_g(r, s);
            prop_assert!(big_g <= v * s * s / (2.0 * k) * SLACK + 1e-14, "G = {big_g} > Vs²/2k = {}", v * s * s / (2.0 * k));
        }
        if spec.odd {
            let minus = pen.g(r, -s);
            prop_assert!((g + minus).abs() <= 1e-12 * g.abs().max(1e-300), "g(s) = {g}, g(-s) = {minus}");
        }
    }
}
