//! Property-based tests for the compositional algebra and the operators.

mod common;

use common::brute_force_jwa;
use jwa_core::{jwa, lwa, owa, owawa, sdowa, Composition, Evidence};
use proptest::prelude::*;

fn positive_composition(n: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(0.01f64..1.0, n)
        .prop_map(|raw| Composition::closure(&raw).expect("positive parts"))
}

fn evidence_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, n)
}

type OpInstance = (Evidence, Composition, Composition);

fn op_instance() -> impl Strategy<Value = OpInstance> {
    (2usize..=12).prop_flat_map(|n| {
        (
            evidence_values(n),
            positive_composition(n),
            positive_composition(n),
        )
            .prop_map(|(x, w, v)| (Evidence::new(x).expect("finite"), w, v))
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

proptest! {
    // ----- compositional algebra -----

    #[test]
    fn perturbation_is_closed(
        (a, b) in (2usize..=12).prop_flat_map(|n| (positive_composition(n), positive_composition(n)))
    ) {
        let out = a.perturb(&b).unwrap();
        prop_assert!(out.parts().iter().all(|&p| p >= 0.0));
        prop_assert!((out.parts().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn perturbation_is_commutative(
        (a, b) in (2usize..=12).prop_flat_map(|n| (positive_composition(n), positive_composition(n)))
    ) {
        let ab = a.perturb(&b).unwrap();
        let ba = b.perturb(&a).unwrap();
        prop_assert!(max_abs_diff(ab.parts(), ba.parts()) <= 1e-12);
    }

    #[test]
    fn perturbation_is_associative(
        (a, b, c) in (2usize..=12).prop_flat_map(|n| {
            (positive_composition(n), positive_composition(n), positive_composition(n))
        })
    ) {
        let left = a.perturb(&b).unwrap().perturb(&c).unwrap();
        let right = a.perturb(&b.perturb(&c).unwrap()).unwrap();
        prop_assert!(max_abs_diff(left.parts(), right.parts()) <= 1e-9);
    }

    #[test]
    fn uniform_is_the_perturbation_identity(
        a in (2usize..=12).prop_flat_map(positive_composition)
    ) {
        let out = Composition::uniform(a.len()).unwrap().perturb(&a).unwrap();
        prop_assert!(max_abs_diff(out.parts(), a.parts()) <= 1e-12);
    }

    #[test]
    fn closure_is_scale_invariant(
        raw in (2usize..=12).prop_flat_map(|n| prop::collection::vec(0.01f64..1.0, n)),
        lambda in 0.001f64..1000.0,
    ) {
        let scaled: Vec<f64> = raw.iter().map(|&r| lambda * r).collect();
        let base = Composition::closure(&raw).unwrap();
        let rescaled = Composition::closure(&scaled).unwrap();
        prop_assert!(max_abs_diff(base.parts(), rescaled.parts()) <= 1e-9);
    }

    #[test]
    fn perturbation_is_permutation_equivariant(
        (a, b, order) in (2usize..=12).prop_flat_map(|n| {
            (
                positive_composition(n),
                positive_composition(n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
    ) {
        let permuted_then_perturbed = a
            .reordered(&order)
            .unwrap()
            .perturb(&b.reordered(&order).unwrap())
            .unwrap();
        let perturbed_then_permuted = a.perturb(&b).unwrap().reordered(&order).unwrap();
        prop_assert!(
            max_abs_diff(permuted_then_perturbed.parts(), perturbed_then_permuted.parts()) <= 1e-12
        );
    }

    #[test]
    fn self_perturbation_sharpens_the_largest_part(
        a in (2usize..=12)
            .prop_flat_map(positive_composition)
            .prop_filter("needs visible spread", |c| {
                let max = c.parts().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = c.parts().iter().cloned().fold(f64::INFINITY, f64::min);
                max - min >= 0.01
            })
    ) {
        let out = a.perturb(&a).unwrap();
        prop_assert!(out.max_part() > a.max_part() + 1e-9);
        prop_assert!(max_abs_diff(out.parts(), a.parts()) > 1e-9);
    }

    // ----- operator axioms -----

    #[test]
    fn every_operator_is_compensative((x, w, v) in op_instance()) {
        let lo = x.min() - 1e-9;
        let hi = x.max() + 1e-9;
        for value in [
            lwa(&x, &w).unwrap().value,
            owa(&x, &v).unwrap().value,
            owawa(&x, &w, &v, 0.37).unwrap().value,
            sdowa(&x, &w, &v).unwrap().value,
            jwa(&x, &w, &v).unwrap().value,
        ] {
            prop_assert!(value >= lo && value <= hi, "value {value} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn every_operator_is_idempotent(
        (n, c) in (2usize..=12).prop_flat_map(|n| (Just(n), -100.0f64..100.0)),
        alpha in 0.0f64..=1.0,
    ) {
        let x = Evidence::new(vec![c; n]).unwrap();
        let w = Composition::uniform(n).unwrap();
        let v = Composition::closure(&(1..=n).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
        for value in [
            lwa(&x, &v).unwrap().value,
            owa(&x, &v).unwrap().value,
            owawa(&x, &w, &v, alpha).unwrap().value,
            sdowa(&x, &w, &v).unwrap().value,
            jwa(&x, &w, &v).unwrap().value,
        ] {
            prop_assert!((value - c).abs() <= 1e-12, "value {value} vs constant {c}");
        }
    }

    #[test]
    fn lwa_and_owa_are_monotone(
        (x, w, v, bumps) in (2usize..=12).prop_flat_map(|n| {
            (
                evidence_values(n),
                positive_composition(n),
                positive_composition(n),
                prop::collection::vec(0.0f64..50.0, n),
            )
        })
    ) {
        let base = Evidence::new(x.clone()).unwrap();
        let raised = Evidence::new(
            x.iter().zip(&bumps).map(|(a, d)| a + d).collect::<Vec<_>>(),
        )
        .unwrap();
        prop_assert!(lwa(&raised, &w).unwrap().value >= lwa(&base, &w).unwrap().value - 1e-12);
        prop_assert!(owa(&raised, &v).unwrap().value >= owa(&base, &v).unwrap().value - 1e-12);
    }

    #[test]
    fn jwa_is_strictly_monotone_within_a_rank_regime(
        (x, w, v, pick) in (2usize..=10).prop_flat_map(|n| {
            (
                evidence_values(n),
                positive_composition(n),
                positive_composition(n),
                0..n,
            )
        })
    ) {
        let mut sorted = x.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min_gap = sorted
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(f64::INFINITY, f64::min);
        prop_assume!(min_gap >= 0.01);

        let base = Evidence::new(x.clone()).unwrap();
        let mut bumped = x;
        bumped[pick] += min_gap * 0.4;
        let raised = Evidence::new(bumped).unwrap();

        let before = jwa(&base, &w, &v).unwrap();
        let after = jwa(&raised, &w, &v).unwrap();
        // the bump is below every gap, so the ranking cannot change
        prop_assert_eq!(before.permutation.order(), after.permutation.order());
        prop_assert!(after.value > before.value);
    }

    #[test]
    fn jwa_collapses_onto_owa_and_lwa((x, w, v) in op_instance()) {
        let uniform = Composition::uniform(x.len()).unwrap();
        let against_owa =
            (jwa(&x, &uniform, &v).unwrap().value - owa(&x, &v).unwrap().value).abs();
        let against_lwa =
            (jwa(&x, &w, &uniform).unwrap().value - lwa(&x, &w).unwrap().value).abs();
        prop_assert!(against_owa <= 1e-12);
        prop_assert!(against_lwa <= 1e-12);
    }

    #[test]
    fn output_mixtures_stay_internally_bounded(
        (x, w, v) in op_instance(),
        alpha in 0.0f64..=1.0,
    ) {
        let l = lwa(&x, &w).unwrap().value;
        let o = owa(&x, &v).unwrap().value;
        let lo = l.min(o) - 1e-9;
        let hi = l.max(o) + 1e-9;
        let mix = owawa(&x, &w, &v, alpha).unwrap().value;
        let sd_mix = sdowa(&x, &w, &v).unwrap().value;
        prop_assert!(mix >= lo && mix <= hi);
        prop_assert!(sd_mix >= lo && sd_mix <= hi);
    }

    #[test]
    fn all_operators_ignore_joint_source_relabeling(
        (x, w, v, order) in (2usize..=10).prop_flat_map(|n| {
            (
                evidence_values(n),
                positive_composition(n),
                positive_composition(n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
    ) {
        // ties would re-pair weights under relabeling; random reals are
        // distinct essentially always, but guard anyway
        let mut sorted = x.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(sorted.windows(2).all(|p| p[0] != p[1]));

        let base = Evidence::new(x.clone()).unwrap();
        let shuffled_x: Vec<f64> = order.iter().map(|&i| x[i]).collect();
        let shuffled = Evidence::new(shuffled_x).unwrap();
        let w_shuffled = w.reordered(&order).unwrap();

        let pairs = [
            (lwa(&base, &w).unwrap().value, lwa(&shuffled, &w_shuffled).unwrap().value),
            (owa(&base, &v).unwrap().value, owa(&shuffled, &v).unwrap().value),
            (
                owawa(&base, &w, &v, 0.5).unwrap().value,
                owawa(&shuffled, &w_shuffled, &v, 0.5).unwrap().value,
            ),
            (
                sdowa(&base, &w, &v).unwrap().value,
                sdowa(&shuffled, &w_shuffled, &v).unwrap().value,
            ),
            (
                jwa(&base, &w, &v).unwrap().value,
                jwa(&shuffled, &w_shuffled, &v).unwrap().value,
            ),
        ];
        for (original, relabeled) in pairs {
            prop_assert!((original - relabeled).abs() <= 1e-12);
        }
    }

    #[test]
    fn jwa_matches_the_brute_force_oracle(
        (x, w, v) in (2usize..=6).prop_flat_map(|n| {
            (
                prop::collection::vec(0.0f64..100.0, n),
                positive_composition(n),
                positive_composition(n),
            )
        })
    ) {
        let expected = brute_force_jwa(&x, w.parts(), v.parts());
        let actual = jwa(&Evidence::new(x).unwrap(), &w, &v).unwrap().value;
        prop_assert!((expected - actual).abs() <= 1e-12);
    }

    #[test]
    fn joint_weight_exceeds_both_when_both_rank_it_first((x, w, v) in op_instance()) {
        let (perm, joint) = jwa_core::joint_weights(&x, &w, &v).unwrap();
        let w_pi = w.reordered(perm.order()).unwrap();

        let argmax = |parts: &[f64]| -> usize {
            parts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0
        };
        let argmin = |parts: &[f64]| -> usize {
            parts
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0
        };

        let top = argmax(w_pi.parts());
        if top == argmax(v.parts()) {
            let floor = w_pi.parts()[top].max(v.parts()[top]);
            prop_assert!(joint.parts()[top] >= floor - 1e-12);
        }
        let bottom = argmin(w_pi.parts());
        if bottom == argmin(v.parts()) {
            let ceiling = w_pi.parts()[bottom].min(v.parts()[bottom]);
            prop_assert!(joint.parts()[bottom] <= ceiling + 1e-12);
        }
    }
}
