#![allow(dead_code)]

use measure_compression::{
    ExtRational, FiniteMetricMeasureSpace, Map, MeasurableMap, MetricSpace, Rational, Space,
};
use num_bigint::BigInt;

pub fn q(p: i64, d: i64) -> ExtRational {
    ExtRational::new(BigInt::from(p), BigInt::from(d)).unwrap()
}

pub fn rat(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn inf() -> ExtRational {
    ExtRational::infinity()
}

/// Atoms A={p1,p2}, B={p3}, C={p4} with weights 1/2, 1/3, 0.
pub fn s1() -> Space {
    Space::new(
        &["p1", "p2", "p3", "p4"],
        &[vec!["p1", "p2"], vec!["p3"], vec!["p4"]],
        vec![q(1, 2), q(1, 3), q(0, 1)],
    )
    .unwrap()
}

/// Atoms D={q1}, E={q2} with weights 1, 2.
pub fn s2() -> Space {
    Space::discrete(&["q1", "q2"], vec![q(1, 1), q(2, 1)]).unwrap()
}

/// Two atoms of weights 1 and 2.
pub fn s3() -> Space {
    Space::discrete(&["r1", "r2"], vec![q(1, 1), q(2, 1)]).unwrap()
}

pub fn phi() -> Map {
    MeasurableMap::new(&s1(), &s2(), [("p1", "q1"), ("p2", "q1"), ("p3", "q1"), ("p4", "q2")]).unwrap()
}

pub fn psi() -> Map {
    MeasurableMap::new(&s2(), &s1(), [("q1", "p4"), ("q2", "p1")]).unwrap()
}

/// Discrete space with the given weights and labels `{prefix}0, {prefix}1, ...`.
pub fn discrete(prefix: &str, weights: Vec<ExtRational>) -> Space {
    let labels: Vec<String> = (0..weights.len()).map(|i| format!("{prefix}{i}")).collect();
    Space::discrete(&labels, weights).unwrap()
}

/// Points on a line at the given integer positions.
pub fn on_line(space: &Space, positions: &[i64]) -> MetricSpace {
    let n = positions.len();
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            upper.push(rat((positions[i] - positions[j]).abs(), 1));
        }
    }
    FiniteMetricMeasureSpace::new(space, upper).unwrap()
}
