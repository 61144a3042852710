use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use superinfo_core::decision::game::{game_partition, payoff_observable};
use superinfo_core::ensembles::{deviant_weight, Probabilities};
use superinfo_core::label::{parse_rational, rational_to_f64, render_rational};
use superinfo_core::{
    derive_value, game_value, make_game, partition_of_unity, transform_game, Attribute, PureState, SubstrateSpec,
    Transform,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A unit vector and distinct integer payoffs of the same length.
fn game_input() -> impl Strategy<Value = (Vec<Complex64>, Vec<i64>)> {
    (2usize..=4)
        .prop_flat_map(|d| {
            (
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d),
                prop::collection::btree_set(-20i64..=20, d).prop_map(|s| s.into_iter().collect::<Vec<_>>()),
            )
        })
        .prop_filter_map("zero vector", |(v, payoffs)| {
            let v: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            (n > 1e-3).then(|| (v.into_iter().map(|c| c / n).collect(), payoffs))
        })
}

fn distribution() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(0i64..=6, 2..=3).prop_filter_map("all zero", |raw| {
        let total: i64 = raw.iter().sum();
        (total > 0).then(|| raw.iter().map(|w| q(*w, total)).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_render_and_parse_back(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(n, d);
        prop_assert_eq!(parse_rational(&render_rational(&r)).unwrap(), r);
    }

    #[test]
    fn deviant_and_typical_weights_sum_to_one(p in distribution(), n in 1usize..=30, e in 0i64..=40) {
        let row = deviant_weight(&Probabilities::exact(p).unwrap(), n, &q(e, 100)).unwrap();
        let w = row.exact.unwrap();
        prop_assert!(w.normalized());
        prop_assert_eq!(&w.numer + &w.typical_numer, w.denominator());
        prop_assert!((rational_to_f64(&w.value()) - row.float).abs() < 1e-12);
    }

    #[test]
    fn deviant_weight_shrinks_as_tolerance_grows(p in distribution(), n in 1usize..=30, e in 0i64..=40) {
        let probs = Probabilities::exact(p).unwrap();
        let tight = deviant_weight(&probs, n, &q(e, 100)).unwrap().exact.unwrap().value();
        let loose = deviant_weight(&probs, n, &q(e + 5, 100)).unwrap().exact.unwrap().value();
        prop_assert!(loose <= tight);
        prop_assert!(tight >= BigRational::zero() && tight <= BigRational::one());
    }

    #[test]
    fn game_value_is_born_weighted_payoff((v, payoffs) in game_input()) {
        let d = v.len();
        let sub = SubstrateSpec::quantum("g", d).unwrap();
        let xs: Vec<BigRational> = payoffs.iter().map(|p| q(*p, 1)).collect();
        let obs = payoff_observable(&sub, &xs).unwrap();
        let g = make_game(&obs, &Attribute::pure(&sub, PureState::new(v.clone()).unwrap()).unwrap()).unwrap();
        let expected: f64 = v.iter().zip(&payoffs).map(|(a, x)| a.norm_sqr() * *x as f64).sum();
        prop_assert!((game_value(&g).unwrap() - expected).abs() < 1e-9);

        // Cached span partition agrees with the general mixture partition.
        let cached = game_partition(&g).unwrap().values();
        let general = partition_of_unity(&g.state(), &obs).unwrap().values();
        for (a, b) in cached.iter().zip(&general) {
            prop_assert!((a - b).abs() < 1e-9);
        }

        let shifted = game_value(&transform_game(&g, &Transform::Shift(q(3, 2))).unwrap()).unwrap();
        prop_assert!((shifted - expected - 1.5).abs() < 1e-9);
    }

    #[test]
    fn derivation_reaches_weighted_payoff(n in 2u64..=9, m_frac in 0.0f64..1.0, a in -6i64..=6, b in -6i64..=6) {
        let m = ((n as f64) * m_frac) as u64;
        let (x1, x2) = (q(a, 1), q(b, 1));
        let trace = derive_value(m, n, &x1, &x2).unwrap();
        let f = q(m as i64, n as i64);
        prop_assert_eq!(&trace.final_value, &(&f * &x1 + (BigRational::one() - &f) * &x2));
        prop_assert!(trace.all_pass());
    }
}
