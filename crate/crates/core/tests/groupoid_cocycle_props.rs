mod common;

use std::sync::Arc;

use num_rational::Ratio;
use proptest::prelude::*;

use common::*;
use etale_twist::circle::CircleValue;
use etale_twist::cocycle::{
    sample_homotopy, try_trivialize, validate_cocycle, CocycleHomotopy, Lift, LiftValue, Trivialization, TwoCocycle,
};
use etale_twist::groupoid::{brute_force_isomorphic, make_pair_groupoid, validate_groupoid, DEFAULT_ISO_LIMIT};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_reverses_products(i in 0..FIXTURES) {
        let (g, _) = fixture(i);
        for (a, b) in g.composable_pairs().pairs {
            let ab = g.compose(a, b).unwrap();
            prop_assert_eq!(Some(g.inv(ab)), g.compose(g.inv(b), g.inv(a)));
        }
    }

    #[test]
    fn units_act_as_identities(i in 0..FIXTURES) {
        let (g, _) = fixture(i);
        for a in 0..g.len() {
            prop_assert_eq!(g.compose(g.dst(a), a), Some(a));
            prop_assert_eq!(g.compose(a, g.src(a)), Some(a));
        }
    }

    #[test]
    fn composable_pair_count(i in 0..FIXTURES) {
        let (g, _) = fixture(i);
        let expected: usize = g.units().iter().map(|&u| g.arrows_to(u).len() * g.arrows_from(u).len()).sum();
        prop_assert_eq!(g.composable_pairs().pairs.len(), expected);
    }

    #[test]
    fn pair_groupoid_counts(n in 1usize..7) {
        let g = make_pair_groupoid(n);
        prop_assert_eq!(g.len(), n * n);
        prop_assert_eq!(g.units().len(), n);
        prop_assert_eq!(g.composable_pairs().pairs.len(), n * n * n);
        prop_assert!(validate_groupoid(&g.to_file()).is_ok());
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(i in 0..FIXTURES, seed in any::<u64>()) {
        let (g, _) = fixture(i);
        let h = g.relabeled(&random_perm(g.len(), &mut rng(seed)));
        prop_assert!(validate_groupoid(&h.to_file()).is_ok());
        prop_assert!(brute_force_isomorphic(&g, &g, DEFAULT_ISO_LIMIT).unwrap().is_some());
        let forward = brute_force_isomorphic(&g, &h, DEFAULT_ISO_LIMIT).unwrap().is_some();
        let backward = brute_force_isomorphic(&h, &g, DEFAULT_ISO_LIMIT).unwrap().is_some();
        prop_assert!(forward && backward);
        let (other, _) = fixture(i + 1);
        let ab = brute_force_isomorphic(&g, &other, DEFAULT_ISO_LIMIT).unwrap().is_some();
        let ba = brute_force_isomorphic(&other, &g, DEFAULT_ISO_LIMIT).unwrap().is_some();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn coboundaries_validate_exactly(i in 0..FIXTURES, seed in any::<u64>(), den in 1i64..30) {
        let (g, _) = fixture(i);
        let d = cochain(&g, &mut rng(seed), den).coboundary();
        prop_assert!(d.is_exact());
        let report = validate_cocycle(&d, 0.0).unwrap();
        prop_assert_eq!(report.max_deviation.unwrap_or(0.0), 0.0);
    }

    #[test]
    fn linear_lift_samples_are_cocycles(i in 0..FIXTURES, seed in any::<u64>(), t in 0u32..=20) {
        let (g, w) = fixture(i);
        let mut r = rng(seed);
        let beta: Vec<Ratio<i64>> =
            (0..g.len()).map(|a| if g.is_unit(a) { Ratio::from_integer(0) } else { rational_turns(&mut r) }).collect();
        let entries = g.composable_pairs().pairs.into_iter().map(|(a, b)| {
            let ab = g.compose(a, b).unwrap();
            (a, b, LiftValue::PiMultiple((beta[a] + beta[b] - beta[ab]) * 2))
        });
        let lift = Lift::new(g.clone(), entries).unwrap();
        let h = CocycleHomotopy::linear_lift(lift, Some(w)).unwrap();
        let sample = sample_homotopy(&h, t as f64 / 20.0).unwrap();
        prop_assert!(validate_cocycle(&sample, 1e-9).is_ok());
    }

    #[test]
    fn multiplication_is_an_abelian_group_law(i in 0..FIXTURES, seed in any::<u64>()) {
        let (g, w) = fixture(i);
        let mut r = rng(seed);
        let a = w.multiply(&cochain(&g, &mut r, 12).coboundary()).unwrap();
        let b = cochain(&g, &mut r, 8).coboundary();
        let c = cochain(&g, &mut r, 5).coboundary();
        let one = TwoCocycle::trivial(g.clone());
        prop_assert!(a.multiply(&b).unwrap().multiply(&c).unwrap().table_eq(&a.multiply(&b.multiply(&c).unwrap()).unwrap()));
        prop_assert!(a.multiply(&b).unwrap().table_eq(&b.multiply(&a).unwrap()));
        prop_assert!(a.multiply(&one).unwrap().table_eq(&a));
        prop_assert!(a.multiply(&a.conj()).unwrap().is_constant_one());
    }

    #[test]
    fn trivialization_is_a_certificate(i in 0..FIXTURES, seed in any::<u64>()) {
        let (g, w) = fixture(i);
        let candidates = [cochain(&g, &mut rng(seed), 12).coboundary(), w.clone()];
        for v in candidates {
            if let Trivialization::Coboundary(b) = try_trivialize(&v, 12).unwrap() {
                prop_assert!(v.multiply(&b.coboundary().conj()).unwrap().is_constant_one());
            }
        }
    }

    #[test]
    fn coboundaries_are_always_trivialized(i in 0..FIXTURES, seed in any::<u64>()) {
        let (g, _) = fixture(i);
        let d = cochain(&g, &mut rng(seed), 12).coboundary();
        prop_assert!(try_trivialize(&d, 12).unwrap().is_coboundary());
    }

    #[test]
    fn circle_values_round_trip_through_text(num in -100i64..100, den in 1i64..50) {
        let v = CircleValue::turns(num, den);
        let back: CircleValue = v.to_string().parse().unwrap();
        prop_assert_eq!(back, v);
    }
}

#[test]
fn nontrivial_fixtures_stay_nontrivial() {
    for i in [1, 2] {
        let (_, w) = fixture(i);
        assert!(!try_trivialize(&w, 12).unwrap().is_coboundary());
    }
    let g = Arc::new(make_pair_groupoid(3));
    assert!(try_trivialize(&TwoCocycle::trivial(g), 12).unwrap().is_coboundary());
}
