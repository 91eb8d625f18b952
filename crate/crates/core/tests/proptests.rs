//! Property-based checks of the probability calculus against brute-force
//! subset oracles and of the Bayes machinery against a linear-space
//! joint-table oracle.

use std::sync::Arc;

use proptest::prelude::*;

use dpsem::bayes::{self, BeliefPrior};
use dpsem::mechanism::{Database, DatabaseSpace, Mechanism};
use dpsem::oracle;
use dpsem::prob::{
    pointwise_check, postprocess, statistical_difference, tight_delta_at, Channel, Distribution,
    IndistParams,
};

fn labels(k: usize) -> Arc<Vec<String>> {
    Arc::new((0..k).map(|i| format!("o{i}")).collect())
}

/// Two distributions over a shared label set of 2..=max_k outcomes; entries
/// are independently zeroed with probability 1/4 so zero/zero and one-sided
/// zero outcomes are exercised.
fn pair_strategy(max_k: usize) -> impl Strategy<Value = (Distribution, Distribution)> {
    (2..=max_k).prop_flat_map(|k| {
        let shared = labels(k);
        (
            proptest::collection::vec(0.0f64..1.0, k),
            proptest::collection::vec(0.0f64..1.0, k),
            proptest::collection::vec(proptest::bool::weighted(0.25), k),
            proptest::collection::vec(proptest::bool::weighted(0.25), k),
        )
            .prop_filter_map("positive total mass", move |(mut a, mut b, za, zb)| {
                for (x, z) in a.iter_mut().zip(&za) {
                    if *z {
                        *x = 0.0;
                    }
                }
                for (x, z) in b.iter_mut().zip(&zb) {
                    if *z {
                        *x = 0.0;
                    }
                }
                if a.iter().sum::<f64>() <= 1e-6 || b.iter().sum::<f64>() <= 1e-6 {
                    return None;
                }
                Some((
                    Distribution::from_weights(shared.clone(), a).unwrap(),
                    Distribution::from_weights(shared.clone(), b).unwrap(),
                ))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tight_delta_symmetric_bounded_and_sd_at_zero(
        (p, q) in pair_strategy(8),
        eps in 0.0f64..2.0,
    ) {
        let d = tight_delta_at(&p, &q, eps).unwrap();
        let d_rev = tight_delta_at(&q, &p, eps).unwrap();
        prop_assert_eq!(d, d_rev);
        prop_assert!((0.0..=1.0).contains(&d));
        let sd = statistical_difference(&p, &q);
        let d0 = tight_delta_at(&p, &q, 0.0).unwrap();
        prop_assert!((d0 - sd).abs() <= 1e-12);
    }

    #[test]
    fn tight_delta_matches_subset_oracle(
        (p, q) in pair_strategy(8),
        eps in 0.0f64..1.5,
    ) {
        let fast = tight_delta_at(&p, &q, eps).unwrap();
        let slow = oracle::tight_delta_subset(&p, &q, eps).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-12, "fast {fast} oracle {slow}");
    }

    #[test]
    fn sd_matches_subset_oracle((p, q) in pair_strategy(8)) {
        let fast = statistical_difference(&p, &q);
        let slow = oracle::sd_subset(&p, &q).unwrap();
        prop_assert!((fast - slow).abs() <= 1e-12, "fast {fast} oracle {slow}");
    }

    #[test]
    fn tight_delta_non_increasing_in_epsilon(
        (p, q) in pair_strategy(8),
        e1 in 0.0f64..1.0,
        gap in 0.0f64..1.0,
    ) {
        let lo = tight_delta_at(&p, &q, e1).unwrap();
        let hi = tight_delta_at(&p, &q, e1 + gap).unwrap();
        prop_assert!(hi <= lo + 1e-15);
    }

    #[test]
    fn pointwise_pass_implies_set_pass(
        (p, q) in pair_strategy(8),
        eps in 0.0f64..1.5,
    ) {
        let params = IndistParams::new(eps, 1.0).unwrap();
        let pw = pointwise_check(&p, &q, params);
        let d_pw = pw.bad_mass_x.max(pw.bad_mass_y);
        let tight = tight_delta_at(&p, &q, eps).unwrap();
        prop_assert!(tight <= d_pw + 1e-12, "tight {tight} pointwise {d_pw}");
    }

    #[test]
    fn sd_bounded_by_epsilon_bar_plus_tight_delta(
        (p, q) in pair_strategy(8),
        eps in 0.0f64..2.0,
    ) {
        let sd = statistical_difference(&p, &q);
        let bound = eps.exp_m1() + tight_delta_at(&p, &q, eps).unwrap();
        prop_assert!(sd <= bound + 1e-12, "sd {sd} bound {bound}");
    }

    #[test]
    fn postprocess_conserves_mass_and_never_increases_delta(
        (p, q) in pair_strategy(6),
        rows in proptest::collection::vec(
            proptest::collection::vec(1e-3f64..1.0, 4),
            6,
        ),
        eps in 0.0f64..1.5,
    ) {
        let src = labels(6);
        // pad the pair's label set up to 6 outcomes if the strategy drew fewer
        let k = p.len();
        let (p, q) = if k < 6 {
            let mut a = p.probs().to_vec();
            let mut b = q.probs().to_vec();
            a.resize(6, 0.0);
            b.resize(6, 0.0);
            (
                Distribution::from_shared(src.clone(), a).unwrap(),
                Distribution::from_shared(src.clone(), b).unwrap(),
            )
        } else {
            (p, q)
        };
        let tgt = labels(4);
        let channel_rows: Vec<Distribution> = rows
            .into_iter()
            .map(|w| Distribution::from_weights(tgt.clone(), w).unwrap())
            .collect();
        let channel = Channel::new(src.as_ref().clone(), channel_rows).unwrap();
        let gp = postprocess(&p, &channel).unwrap();
        let gq = postprocess(&q, &channel).unwrap();
        prop_assert!((gp.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let before = tight_delta_at(&p, &q, eps).unwrap();
        let after = tight_delta_at(&gp, &gq, eps).unwrap();
        prop_assert!(after <= before + 1e-12, "after {after} before {before}");
    }
}

/// A dense mechanism over binary databases of length 2 with 3 transcripts,
/// plus a prior over all four databases.
fn dense_mechanism_strategy() -> impl Strategy<Value = (Mechanism, BeliefPrior)> {
    (
        proptest::collection::vec(proptest::collection::vec(1e-6f64..1.0, 3), 4),
        proptest::collection::vec(1e-3f64..1.0, 4),
    )
        .prop_map(|(rows, prior_w)| {
            let space = DatabaseSpace::binary(2).unwrap();
            let dbs = space.enumerate(16).unwrap();
            let table: std::collections::BTreeMap<Database, Vec<f64>> = dbs
                .iter()
                .cloned()
                .zip(rows.into_iter().map(|w| {
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|x| x / s).collect::<Vec<f64>>()
                }))
                .collect();
            let m = Mechanism::new_dense(
                space.clone(),
                vec!["a".into(), "b".into(), "c".into()],
                table,
            )
            .unwrap();
            let prior = BeliefPrior::new(space, dbs.into_iter().zip(prior_w).collect()).unwrap();
            (m, prior)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posterior_matches_joint_table_oracle(
        (m, prior) in dense_mechanism_strategy(),
        t_idx in 0usize..3,
    ) {
        let t = m.transcripts()[t_idx].clone();
        let fast = bayes::posterior(&m, &prior, &t).unwrap();
        let slow = oracle::posterior_by_joint(&m, &prior, &t).unwrap();
        prop_assert!((fast.probs().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for (a, b) in fast.probs().iter().zip(slow.probs()) {
            prop_assert!((a - b).abs() <= 1e-12, "posterior {a} oracle {b}");
        }
    }

    #[test]
    fn semantic_loss_ignores_zero_weight_support(
        (m, _) in dense_mechanism_strategy(),
        w in proptest::collection::vec(1e-3f64..1.0, 3),
        t_idx in 0usize..3,
    ) {
        // adding an irrelevant database with weight 0 must not change any
        // per-game loss
        let space = m.space().clone();
        let dbs = space.enumerate(16).unwrap();
        let t = m.transcripts()[t_idx].clone();
        let base_entries: Vec<(Database, f64)> =
            dbs[..3].iter().cloned().zip(w.iter().copied()).collect();
        let base_prior = BeliefPrior::new(space.clone(), base_entries.clone()).unwrap();
        let base = bayes::semantic_loss(&m, &base_prior, &t).unwrap();
        let mut extended = base_entries;
        extended.push((dbs[3].clone(), 0.0));
        let ext_prior = BeliefPrior::new(space, extended).unwrap();
        let ext = bayes::semantic_loss(&m, &ext_prior, &t).unwrap();
        prop_assert_eq!(base.per_game.len(), ext.per_game.len());
        for (a, b) in base.per_game.iter().zip(&ext.per_game) {
            match (a, b) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-15),
                (None, None) => {}
                _ => prop_assert!(false, "skip pattern changed under a zero-weight entry"),
            }
        }
    }
}
