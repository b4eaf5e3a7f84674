#![allow(dead_code)]

use moid::generator::{generate_moid, MoidParams};
use moid::solver::{policy_count, SolverLimits};
use moid::{InfluenceDiagram, UtilityVector};
use proptest::prelude::*;
use std::time::Duration;

pub fn uv(c: &[f64]) -> UtilityVector {
    UtilityVector::new(c.to_vec()).unwrap()
}

pub fn coords(points: &[UtilityVector]) -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = points.iter().map(UtilityVector::to_vec).collect();
    v.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    v
}

/// Vectors with small integer coordinates, so sums and scalings stay exact.
pub fn int_points(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<UtilityVector>> {
    prop::collection::vec(prop::collection::vec(-6i32..=6, dim), 1..=max_len).prop_map(|rows| {
        rows.into_iter()
            .map(|r| uv(&r.into_iter().map(f64::from).collect::<Vec<_>>()))
            .collect()
    })
}

pub fn positive_points(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<UtilityVector>> {
    prop::collection::vec(prop::collection::vec(0.05f64..100.0, dim), 1..=max_len)
        .prop_map(|rows| rows.into_iter().map(|r| uv(&r)).collect())
}

pub fn positive_vector(dim: usize) -> impl Strategy<Value = UtilityVector> {
    prop::collection::vec(0.05f64..100.0, dim).prop_map(|r| uv(&r))
}

/// Parameters of diagrams small enough for exhaustive policy enumeration.
pub fn tiny_params() -> impl Strategy<Value = MoidParams> {
    (
        1usize..=4,
        1usize..=2,
        1usize..=2,
        1usize..=2,
        1usize..=3,
        1usize..=3,
        any::<u64>(),
    )
        .prop_map(
            |(chance, decisions, parents, roots, arity, objectives, seed)| MoidParams {
                chance,
                decisions,
                max_domain: 2,
                parents,
                roots,
                arity,
                objectives,
                seed,
            },
        )
}

pub fn tiny_diagram() -> impl Strategy<Value = InfluenceDiagram> {
    tiny_params().prop_map(|p| generate_moid(&p).unwrap())
}

pub fn enumerable(d: &InfluenceDiagram, cap: u64) -> bool {
    policy_count(d).is_some_and(|n| n <= cap)
}

pub fn limits() -> SolverLimits {
    SolverLimits {
        time_limit: Duration::from_secs(60),
        memory_limit: 1 << 30,
    }
}
