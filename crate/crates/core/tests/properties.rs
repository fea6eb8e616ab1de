mod common;

use einstein4::berger::{BergerForm, BergerSampler};
use einstein4::hamilton::b_combination;
use einstein4::input::{self, Component, InputDocument};
use einstein4::predicates::{k_positive_margin, Condition};
use proptest::prelude::*;

fn form(seed: u64) -> BergerForm {
    BergerSampler::new(seed, 1.0).next().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn k_sums_match_enumeration(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let bf = form(seed).scaled(scale);
        let spectrum = common::berger_spectrum(bf.a(), bf.b());
        for k in 1..=6 {
            let got = k_positive_margin(&bf, k).unwrap().margin;
            prop_assert!((got - common::min_subset_sum(&spectrum, k)).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn margins_ignore_scale(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let bf = form(seed);
        for c in Condition::ALL {
            let (m0, m1) = (c.margin(&bf), c.margin(&bf.scaled(scale)));
            prop_assert!((m0 - m1).abs() <= 1e-12, "{c}: {m0} vs {m1}");
        }
    }

    #[test]
    fn berger_form_is_rotation_invariant(seed in any::<u64>(), rot in any::<u64>()) {
        let bf = form(seed);
        let q = common::random_rotation(&mut common::rng(rot));
        let back = BergerForm::from_tensor(&bf.tensor().rotated(&q), 1e-9).unwrap();
        for i in 0..3 {
            prop_assert!((back.a()[i] - bf.a()[i]).abs() < 1e-10);
            prop_assert!((back.b()[i] - bf.b()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn hamilton_combination_matches_direct_sum(
        seed in any::<u64>(),
        rot in any::<u64>(),
        idx in proptest::array::uniform4(0usize..4),
    ) {
        let rm = form(seed).tensor().rotated(&common::random_rotation(&mut common::rng(rot)));
        let [i, j, k, l] = idx;
        let got = b_combination(&rm, i, j, k, l).unwrap();
        let want = common::hamilton_combination(rm.components(), i, j, k, l);
        prop_assert!((got - want).abs() < 1e-11);
    }

    #[test]
    fn sectional_range_is_rotation_invariant(seed in any::<u64>(), rot in any::<u64>()) {
        let bf = form(seed);
        let rm = bf.tensor().rotated(&common::random_rotation(&mut common::rng(rot)));
        let (lo, hi) = common::sectional_extremes(&rm, 2000, seed ^ rot);
        prop_assert!((lo - bf.a()[0]).abs() < 1e-6);
        prop_assert!((hi - bf.a()[2]).abs() < 1e-6);
    }

    #[test]
    fn parser_round_trip(seed in any::<u64>(), rot in any::<u64>(), perm in proptest::collection::vec(0usize..8, 36)) {
        // a rotated tensor listed with arbitrary index orders
        let rm = form(seed).tensor().rotated(&common::random_rotation(&mut common::rng(rot)));
        let canonical = InputDocument::from_tensor(&rm);
        let mut scrambled = canonical.clone();
        let comps = &mut scrambled.riemann.as_mut().unwrap().components;
        for (c, &p) in comps.iter_mut().zip(&perm) {
            let [i, j, k, l] = c.indices;
            let (idx, sign) = match p % 4 {
                0 => ([i, j, k, l], 1.0),
                1 => ([j, i, k, l], -1.0),
                2 => ([k, l, j, i], -1.0),
                _ => ([l, k, j, i], 1.0),
            };
            *c = Component { indices: idx, value: sign * c.value };
        }
        comps.reverse();
        let text = input::emit(&scrambled);
        let parsed = input::parse(&text).unwrap();
        prop_assert_eq!(input::emit(&parsed), input::emit(&input::normalize(&scrambled)));
        prop_assert_eq!(input::normalize(&parsed), input::normalize(&canonical));
        let back = parsed.curvature(None).unwrap().tensor();
        // rotated components agree with their pair-swapped partners only to rounding
        prop_assert!((back - rm).max_abs() < 1e-14);
    }
}

#[test]
fn four_positive_root_by_bisection() {
    let root = common::bisect(|x| x * x - 8.0 * x - 1.0, -1.0, 0.0);
    assert!((root - (4.0 - 17f64.sqrt())).abs() < 1e-15);
    let r = einstein4::bounds::minimize(
        &einstein4::bounds::four_positive_chain_problem(),
        einstein4::bounds::DEFAULT_GRID,
        einstein4::bounds::DEFAULT_DEPTH,
    )
    .unwrap();
    assert!((r.best_value - root).abs() < 1e-3);
}
