mod common;

use common::{int_points, uv};
use moid::dominance::{tradeoff_dominates, TradeoffSet};
use moid::generator::{generate_tradeoffs, TradeoffParams};
use moid::utility::{
    convex_equivalent, convex_set_dominates, maximal_set, pareto_dominates, set_max_union,
    set_scale, set_sum, UtilitySet,
};
use moid::{DominanceRelation, UtilityVector};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

fn theta_strategy(p: usize) -> impl Strategy<Value = TradeoffSet> {
    let max_triplets = if p >= 3 { 1 } else { 0 };
    (1usize..=2, 0usize..=max_triplets, any::<u64>()).prop_map(move |(pairs, triplets, seed)| {
        let params = TradeoffParams {
            pairs,
            triplets,
            range: (0.1, 0.9),
            strength: None,
            seed,
        };
        generate_tradeoffs(&params, p).unwrap()
    })
}

/// Pareto or a random consistent tradeoff relation in dimension `p`.
fn relation(p: usize) -> impl Strategy<Value = DominanceRelation> {
    prop_oneof![
        Just(DominanceRelation::Pareto),
        theta_strategy(p).prop_map(DominanceRelation::tradeoff),
    ]
}

fn strictly(rel: &DominanceRelation, u: &UtilityVector, v: &UtilityVector) -> bool {
    match rel {
        DominanceRelation::Pareto => pareto_dominates(u, v).unwrap() && u != v,
        DominanceRelation::Tradeoff(t) => {
            tradeoff_dominates(u, v, t).unwrap() && !tradeoff_dominates(v, u, t).unwrap()
        }
        DominanceRelation::Epsilon(_) => unreachable!(),
    }
}

fn pruned(points: &[UtilityVector], rel: &DominanceRelation) -> UtilitySet {
    maximal_set(points, rel).unwrap()
}

fn equivalent(a: &UtilitySet, b: &UtilitySet) -> bool {
    convex_set_dominates(a, b).unwrap() && convex_set_dominates(b, a).unwrap()
}

fn scale_factor() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.0, 0.25, 0.5, 1.0, 2.0, 3.0])
}

fn dim_and(
    max_len: usize,
) -> impl Strategy<Value = (usize, Vec<UtilityVector>, DominanceRelation)> {
    (2usize..=3).prop_flat_map(move |p| (Just(p), int_points(p, max_len), relation(p)))
}

fn dim_sets(n: usize) -> impl Strategy<Value = (Vec<Vec<UtilityVector>>, DominanceRelation)> {
    (2usize..=3).prop_flat_map(move |p| (prop::collection::vec(int_points(p, 5), n), relation(p)))
}

#[test]
fn documented_examples() {
    let u = [
        uv(&[1.0, 0.0]),
        uv(&[0.0, 1.0]),
        uv(&[0.5, 0.5]),
        uv(&[0.0, 0.0]),
    ];
    let m = maximal_set(&u, &DominanceRelation::Pareto).unwrap();
    assert!(m.same_elements(&pruned(&u[..3], &DominanceRelation::Pareto)));
    assert_eq!(m.len(), 3);

    let half = set_scale(0.5, &pruned(&u[..2], &DominanceRelation::Pareto)).unwrap();
    let sum = set_sum(&half, &half, &DominanceRelation::Pareto).unwrap();
    assert!(sum.same_elements(&pruned(&u[..3], &DominanceRelation::Pareto)));

    let zero = set_scale(0.0, &pruned(&[uv(&[3.0, 7.0])], &DominanceRelation::Pareto)).unwrap();
    assert_eq!(zero.elements(), &[uv(&[0.0, 0.0])]);

    let single = set_sum(
        &pruned(&[uv(&[1.0, 2.0])], &DominanceRelation::Pareto),
        &pruned(&[uv(&[3.0, 4.0])], &DominanceRelation::Pareto),
        &DominanceRelation::Pareto,
    )
    .unwrap();
    assert_eq!(single.elements(), &[uv(&[4.0, 6.0])]);

    let theta = TradeoffSet::new(2, vec![(uv(&[50.0, -12.0]), uv(&[0.0, 0.0]))]).unwrap();
    let both = set_max_union(
        &pruned(&[uv(&[22.5, -17.56])], &DominanceRelation::Pareto),
        &pruned(&[uv(&[20.0, -14.2])], &DominanceRelation::Pareto),
        &DominanceRelation::tradeoff(theta),
    )
    .unwrap();
    assert_eq!(both.len(), 2);

    let a = pruned(
        &[uv(&[1.0, 0.0]), uv(&[0.0, 1.0])],
        &DominanceRelation::Pareto,
    );
    let b = pruned(&[uv(&[0.5, 0.5])], &DominanceRelation::Pareto);
    assert!(convex_set_dominates(&a, &b).unwrap());
    assert!(!convex_set_dominates(
        &pruned(&[uv(&[1.0, 0.0])], &DominanceRelation::Pareto),
        &pruned(&[uv(&[0.0, 1.0])], &DominanceRelation::Pareto)
    )
    .unwrap());
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn maximal_set_is_idempotent((_p, points, rel) in dim_and(8)) {
        let once = pruned(&points, &rel);
        let twice = pruned(once.elements(), &rel);
        prop_assert!(once.same_elements(&twice));
    }

    #[test]
    fn maximal_set_is_sound((_p, points, rel) in dim_and(8)) {
        let kept = pruned(&points, &rel);
        for k in kept.elements() {
            prop_assert!(points.contains(k));
        }
        for v in &points {
            if kept.elements().contains(v) {
                continue;
            }
            prop_assert!(kept.elements().iter().any(|k| strictly(&rel, k, v)));
        }
    }

    #[test]
    fn set_sum_commutes((sets, rel) in dim_sets(2)) {
        let u = pruned(&sets[0], &rel);
        let v = pruned(&sets[1], &rel);
        prop_assert!(set_sum(&u, &v, &rel).unwrap().same_elements(&set_sum(&v, &u, &rel).unwrap()));
    }

    #[test]
    fn set_sum_associates((sets, rel) in dim_sets(3)) {
        let [u, v, w] = [0, 1, 2].map(|i| pruned(&sets[i], &rel));
        let left = set_sum(&set_sum(&u, &v, &rel).unwrap(), &w, &rel).unwrap();
        let right = set_sum(&u, &set_sum(&v, &w, &rel).unwrap(), &rel).unwrap();
        prop_assert!(left.same_elements(&right));
    }

    #[test]
    fn set_max_union_commutes((sets, rel) in dim_sets(2)) {
        let u = pruned(&sets[0], &rel);
        let v = pruned(&sets[1], &rel);
        prop_assert!(set_max_union(&u, &v, &rel).unwrap().same_elements(&set_max_union(&v, &u, &rel).unwrap()));
    }

    #[test]
    fn set_max_union_associates((sets, rel) in dim_sets(3)) {
        let [u, v, w] = [0, 1, 2].map(|i| pruned(&sets[i], &rel));
        let left = set_max_union(&set_max_union(&u, &v, &rel).unwrap(), &w, &rel).unwrap();
        let right = set_max_union(&u, &set_max_union(&v, &w, &rel).unwrap(), &rel).unwrap();
        prop_assert!(left.same_elements(&right));
    }

    #[test]
    fn scaling_distributes_over_sums((sets, rel) in dim_sets(2), q in scale_factor()) {
        let u = pruned(&sets[0], &rel);
        let v = pruned(&sets[1], &rel);
        let left = set_scale(q, &set_sum(&u, &v, &rel).unwrap()).unwrap();
        let right = set_sum(&set_scale(q, &u).unwrap(), &set_scale(q, &v).unwrap(), &rel).unwrap();
        prop_assert!(left.same_elements(&right));
    }

    #[test]
    fn scalings_compose((sets, rel) in dim_sets(1), q1 in scale_factor(), q2 in scale_factor()) {
        let u = pruned(&sets[0], &rel);
        let left = set_scale(q1, &set_scale(q2, &u).unwrap()).unwrap();
        let right = set_scale(q1 * q2, &u).unwrap();
        prop_assert!(left.same_elements(&right));
    }

    #[test]
    fn scaling_distributes_over_max((sets, rel) in dim_sets(2), q in scale_factor()) {
        let u = pruned(&sets[0], &rel);
        let v = pruned(&sets[1], &rel);
        let left = set_max_union(&set_scale(q, &u).unwrap(), &set_scale(q, &v).unwrap(), &rel).unwrap();
        let right = set_scale(q, &set_max_union(&u, &v, &rel).unwrap()).unwrap();
        prop_assert!(left.same_elements(&right));
    }

    #[test]
    fn split_scaling_is_equivalent((sets, _rel) in dim_sets(1), q1 in scale_factor(), q2 in scale_factor()) {
        let rel = DominanceRelation::Pareto;
        let u = pruned(&sets[0], &rel);
        let left = set_scale(q1 + q2, &u).unwrap();
        let right = set_sum(&set_scale(q1, &u).unwrap(), &set_scale(q2, &u).unwrap(), &rel).unwrap();
        prop_assert!(equivalent(&left, &right));
    }

    #[test]
    fn sum_distributes_over_max_up_to_equivalence((sets, _rel) in dim_sets(3)) {
        let rel = DominanceRelation::Pareto;
        let [u, v, w] = [0, 1, 2].map(|i| pruned(&sets[i], &rel));
        let left = set_max_union(&set_sum(&u, &w, &rel).unwrap(), &set_sum(&v, &w, &rel).unwrap(), &rel).unwrap();
        let right = set_sum(&set_max_union(&u, &v, &rel).unwrap(), &w, &rel).unwrap();
        prop_assert!(equivalent(&left, &right));
    }

    #[test]
    fn pruning_preserves_equivalence((_p, points, _rel) in dim_and(6)) {
        let kept = pruned(&points, &DominanceRelation::Pareto);
        prop_assert!(convex_equivalent(kept.elements(), &points, 1e-7).unwrap());
    }
}
