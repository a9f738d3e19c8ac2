//! Metric measure spaces, point-level Lipschitz constants, morphism
//! classification and functor-law checks for `φ ↦ φ•`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ext::format_ratio;
use crate::hom::{elem_json, BooleanHom, LawReport};
use crate::morphism::{CompressionResult, MeasurableMap};
use crate::scalar::Scalar;
use crate::space::FiniteMeasureSpace;

/// A finite measure space with a rational metric on its points.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMetricMeasureSpace<T: Scalar> {
    base: FiniteMeasureSpace<T>,
    dist: Vec<Vec<Ratio<T>>>,
}

impl<T: Scalar> fmt::Debug for FiniteMetricMeasureSpace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMetricMeasureSpace")
            .field("base", &self.base)
            .field("dist", &self.upper_triangle().iter().map(format_ratio).collect::<Vec<_>>())
            .finish()
    }
}

impl<T: Scalar> FiniteMetricMeasureSpace<T> {
    /// Attach a metric given as the upper triangle `d(x_i, x_j)`, `i < j`,
    /// row by row in canonical point order.
    pub fn new(base: &FiniteMeasureSpace<T>, upper: Vec<Ratio<T>>) -> Result<Self> {
        let n = base.num_points();
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::ArityMismatch {
                what: "distances",
                expected,
                found: upper.len(),
            });
        }
        let mut dist = vec![vec![Ratio::zero(); n]; n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let d = it.next().expect("length checked");
                let (x, y) = (base.point_label(i), base.point_label(j));
                if d <= Ratio::zero() {
                    return Err(Error::InvalidMetric(format!(
                        "d({x}, {y}) = {} must be positive",
                        format_ratio(&d)
                    )));
                }
                dist[i][j] = d.clone();
                dist[j][i] = d;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            base.point_label(i),
                            base.point_label(j),
                            base.point_label(k)
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricMeasureSpace {
            base: base.clone(),
            dist,
        })
    }

    pub fn base(&self) -> &FiniteMeasureSpace<T> {
        &self.base
    }

    pub fn dist(&self, i: usize, j: usize) -> &Ratio<T> {
        &self.dist[i][j]
    }

    pub fn dist_between(&self, x: &str, y: &str) -> Result<&Ratio<T>> {
        Ok(self.dist(self.base.point_index(x)?, self.base.point_index(y)?))
    }

    pub fn upper_triangle(&self) -> Vec<Ratio<T>> {
        let n = self.dist.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist[i][j].clone())
            .collect()
    }
}

/// Multiply every distance by `factor`; the measure is untouched.
pub fn rescale_space<T: Scalar>(
    space: &FiniteMetricMeasureSpace<T>,
    factor: &Ratio<T>,
) -> Result<FiniteMetricMeasureSpace<T>> {
    if *factor <= Ratio::zero() {
        return Err(Error::NonPositiveFactor(format_ratio(factor)));
    }
    Ok(FiniteMetricMeasureSpace {
        base: space.base.clone(),
        dist: space
            .dist
            .iter()
            .map(|row| row.iter().map(|d| d * factor).collect())
            .collect(),
    })
}

/// A measurable map between metric measure spaces.
#[derive(Clone, Debug)]
pub struct MetricMap<T: Scalar> {
    map: MeasurableMap<T>,
    source: FiniteMetricMeasureSpace<T>,
    target: FiniteMetricMeasureSpace<T>,
}

impl<T: Scalar> MetricMap<T> {
    pub fn new(
        source: &FiniteMetricMeasureSpace<T>,
        target: &FiniteMetricMeasureSpace<T>,
        map: MeasurableMap<T>,
    ) -> Result<Self> {
        if map.source() != source.base() || map.target() != target.base() {
            return Err(Error::SpaceMismatch);
        }
        Ok(MetricMap {
            map,
            source: source.clone(),
            target: target.clone(),
        })
    }

    pub fn map(&self) -> &MeasurableMap<T> {
        &self.map
    }

    pub fn source(&self) -> &FiniteMetricMeasureSpace<T> {
        &self.source
    }

    pub fn target(&self) -> &FiniteMetricMeasureSpace<T> {
        &self.target
    }

    /// The same point map with distances rescaled on either side.
    pub fn rescaled(&self, source_factor: &Ratio<T>, target_factor: &Ratio<T>) -> Result<Self> {
        Ok(MetricMap {
            map: self.map.clone(),
            source: rescale_space(&self.source, source_factor)?,
            target: rescale_space(&self.target, target_factor)?,
        })
    }
}

/// `max_{x ≠ y} d₂(φx, φy) / d₁(x, y)`; `0` when there is no pair.
pub fn lipschitz_point<T: Scalar>(map: &MetricMap<T>) -> CompressionResult<T> {
    let f = map.map.point_fn();
    let n = f.len();
    let mut best = Ratio::zero();
    for x in 0..n {
        for y in x + 1..n {
            let ratio = map.target.dist(f[x], f[y]) / map.source.dist(x, y);
            if ratio > best {
                best = ratio;
            }
        }
    }
    CompressionResult::Bounded(best)
}

/// Factors that turn a map into a short map by rescaling one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortRescale<T: Scalar> {
    /// Multiply source distances by this.
    pub source_factor: Ratio<T>,
    /// Or multiply target distances by this.
    pub target_factor: Ratio<T>,
}

/// Everything decidable about a morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismClassification<T: Scalar> {
    pub measurable: bool,
    pub inverse_nil_preserving: bool,
    pub compression: CompressionResult<T>,
    pub source_sigma_finite: bool,
    pub target_sigma_finite: bool,
    /// `None` when the spaces carry no metric.
    pub lipschitz_point: Option<CompressionResult<T>>,
    pub short: Option<bool>,
    pub bounded_deformation: Option<bool>,
    pub rescale: Option<ShortRescale<T>>,
}

/// Classification of a map between plain measure spaces.
pub fn classify<T: Scalar>(map: &MeasurableMap<T>) -> MorphismClassification<T> {
    MorphismClassification {
        measurable: true,
        inverse_nil_preserving: map.is_inverse_nil_preserving(),
        compression: map.compression(),
        source_sigma_finite: map.source().is_sigma_finite(),
        target_sigma_finite: map.target().is_sigma_finite(),
        lipschitz_point: None,
        short: None,
        bounded_deformation: None,
        rescale: None,
    }
}

/// Classification including the metric fields.
pub fn classify_metric<T: Scalar>(map: &MetricMap<T>) -> MorphismClassification<T> {
    let mut out = classify(&map.map);
    let lip = lipschitz_point(map);
    let constant = lip.value().expect("finite spaces give a finite constant").clone();
    let one = Ratio::one();
    out.short = Some(constant <= one);
    out.bounded_deformation = Some(lip.is_bounded() && out.compression.is_bounded());
    out.rescale = Some(if constant > one {
        ShortRescale {
            source_factor: constant.clone(),
            target_factor: constant.recip(),
        }
    } else {
        ShortRescale {
            source_factor: one.clone(),
            target_factor: one,
        }
    });
    out.lipschitz_point = Some(lip);
    out
}

/// `g ∘ f`.
pub fn compose<T: Scalar>(g: &MeasurableMap<T>, f: &MeasurableMap<T>) -> Result<MeasurableMap<T>> {
    f.then(g)
}

pub fn identity_map<T: Scalar>(space: &FiniteMeasureSpace<T>) -> MeasurableMap<T> {
    MeasurableMap::identity(space)
}

/// Check `id• = id` on the algebra of `space`.
fn identity_law<T: Scalar>(space: &FiniteMeasureSpace<T>, report: &mut LawReport) {
    let id = BooleanHom::induced(&identity_map(space)).expect("identity is inverse-nil-preserving");
    for e in id.domain().elements() {
        report.checked += 1;
        if id.apply(&e).unwrap() != e {
            report.fail("identity", json!({ "a": elem_json(&e) }));
        }
    }
}

/// Check `(g∘f)• = f• ∘ g•` on every element of the algebra of `g`'s target.
pub fn check_contravariance<T: Scalar>(
    composite: &BooleanHom<T>,
    f: &BooleanHom<T>,
    g: &BooleanHom<T>,
) -> Result<LawReport> {
    if g.codomain() != f.domain() || composite.domain() != g.domain() || composite.codomain() != f.codomain() {
        return Err(Error::SpaceMismatch);
    }
    let mut report = LawReport::default();
    for a in g.domain().elements() {
        report.checked += 1;
        let lhs = composite.apply(&a)?;
        let rhs = f.apply(&g.apply(&a)?)?;
        if lhs != rhs {
            report.fail(
                "contravariance",
                json!({ "a": elem_json(&a), "composite": elem_json(&lhs), "chained": elem_json(&rhs) }),
            );
        }
    }
    Ok(report)
}

/// Functor laws for a composable pair `f: X₁ → X₂`, `g: X₂ → X₃`.
pub fn contravariance_check<T: Scalar>(f: &MeasurableMap<T>, g: &MeasurableMap<T>) -> Result<LawReport> {
    let composite = compose(g, f)?;
    let f_hom = BooleanHom::induced(f)?;
    let g_hom = BooleanHom::induced(g)?;
    let composite_hom = BooleanHom::induced(&composite)?;
    let mut report = check_contravariance(&composite_hom, &f_hom, &g_hom)?;
    for space in [f.source(), f.target(), g.target()] {
        identity_law(space, &mut report);
    }
    Ok(report)
}

/// `C(g∘f) ≤ C(f)·C(g)`, with `Unbounded` absorbing on the right.
pub fn compression_submultiplicativity<T: Scalar>(f: &MeasurableMap<T>, g: &MeasurableMap<T>) -> Result<bool> {
    let composite = compose(g, f)?;
    Ok(composite.compression().le(&f.compression().compose(&g.compression())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ExtRatio;

    type E = ExtRatio<i64>;
    type C = CompressionResult<i64>;

    fn q(p: i64, d: i64) -> E {
        E::new(p, d).unwrap()
    }

    fn r(p: i64) -> Ratio<i64> {
        Ratio::from_integer(p)
    }

    fn two_point(labels: [&str; 2], weights: [E; 2], d: i64) -> FiniteMetricMeasureSpace<i64> {
        let base = FiniteMeasureSpace::discrete(&labels, weights.to_vec()).unwrap();
        FiniteMetricMeasureSpace::new(&base, vec![r(d)]).unwrap()
    }

    #[test]
    fn metric_validation() {
        let base = FiniteMeasureSpace::discrete(&["a", "b", "c"], vec![q(1, 1); 3]).unwrap();
        assert!(FiniteMetricMeasureSpace::new(&base, vec![r(1), r(2), r(1)]).is_ok());
        assert!(matches!(
            FiniteMetricMeasureSpace::new(&base, vec![r(1), r(3), r(1)]).unwrap_err(),
            Error::InvalidMetric(_)
        ));
        assert!(matches!(
            FiniteMetricMeasureSpace::new(&base, vec![r(0), r(1), r(1)]).unwrap_err(),
            Error::InvalidMetric(_)
        ));
        assert!(matches!(
            FiniteMetricMeasureSpace::new(&base, vec![r(1)]).unwrap_err(),
            Error::ArityMismatch { .. }
        ));
    }

    #[test]
    fn lipschitz_point_examples() {
        let src = two_point(["a", "b"], [q(1, 1), q(2, 1)], 1);
        let tgt = two_point(["x", "y"], [q(1, 1), q(1, 1)], 5);
        let constant = MetricMap::new(&src, &tgt, MeasurableMap::constant(src.base(), tgt.base(), "x").unwrap())
            .unwrap();
        assert_eq!(lipschitz_point(&constant), C::Bounded(r(0)));
        let id = MetricMap::new(&src, &src, identity_map(src.base())).unwrap();
        assert_eq!(lipschitz_point(&id), C::Bounded(r(1)));
        let single = FiniteMeasureSpace::discrete(&["s"], vec![q(1, 1)]).unwrap();
        let single = FiniteMetricMeasureSpace::new(&single, vec![]).unwrap();
        let id1 = MetricMap::new(&single, &single, identity_map(single.base())).unwrap();
        assert_eq!(lipschitz_point(&id1), C::Bounded(r(0)));
        let stretch = MeasurableMap::new(src.base(), tgt.base(), [("a", "x"), ("b", "y")]).unwrap();
        let stretch = MetricMap::new(&src, &tgt, stretch).unwrap();
        assert_eq!(lipschitz_point(&stretch), C::Bounded(r(5)));
    }

    #[test]
    fn classify_examples() {
        let src = two_point(["a", "b"], [q(1, 1), q(2, 1)], 1);
        let tgt = two_point(["x", "y"], [q(1, 1), E::zero()], 5);
        let constant = MetricMap::new(&src, &tgt, MeasurableMap::constant(src.base(), tgt.base(), "x").unwrap())
            .unwrap();
        let c = classify_metric(&constant);
        assert_eq!(c.lipschitz_point, Some(C::Bounded(r(0))));
        assert_eq!(c.compression, C::Bounded(r(3)));
        assert_eq!(c.bounded_deformation, Some(true));
        assert_eq!(c.short, Some(true));

        let to_null = MetricMap::new(&src, &tgt, MeasurableMap::constant(src.base(), tgt.base(), "y").unwrap())
            .unwrap();
        let c = classify_metric(&to_null);
        assert!(!c.inverse_nil_preserving);
        assert_eq!(c.compression, C::Unbounded);
        assert_eq!(c.bounded_deformation, Some(false));

        let id = classify_metric(&MetricMap::new(&src, &src, identity_map(src.base())).unwrap());
        assert!(id.inverse_nil_preserving && id.short == Some(true) && id.bounded_deformation == Some(true));
        assert_eq!(id.compression, C::Bounded(r(1)));
        assert_eq!(id.lipschitz_point, Some(C::Bounded(r(1))));

        let plain = classify(constant.map());
        assert_eq!(plain.lipschitz_point, None);
        assert_eq!(plain.bounded_deformation, None);
    }

    #[test]
    fn rescaling() {
        let src = two_point(["a", "b"], [q(1, 1), q(2, 1)], 1);
        let tgt = two_point(["x", "y"], [q(1, 1), q(1, 1)], 5);
        assert_eq!(rescale_space(&src, &r(1)).unwrap(), src);
        assert!(matches!(rescale_space(&src, &r(0)), Err(Error::NonPositiveFactor(_))));
        let stretch = MeasurableMap::new(src.base(), tgt.base(), [("a", "x"), ("b", "y")]).unwrap();
        let stretch = MetricMap::new(&src, &tgt, stretch).unwrap();
        let c = classify_metric(&stretch);
        assert_eq!(c.short, Some(false));
        let guide = c.rescale.unwrap();
        assert_eq!(guide.source_factor, r(5));
        assert_eq!(guide.target_factor, Ratio::new(1, 5));
        let fixed = stretch.rescaled(&guide.source_factor, &r(1)).unwrap();
        assert_eq!(lipschitz_point(&fixed), C::Bounded(r(1)));
        let fixed = stretch.rescaled(&r(1), &guide.target_factor).unwrap();
        assert_eq!(lipschitz_point(&fixed), C::Bounded(r(1)));
        assert_eq!(fixed.map().compression(), stretch.map().compression());
    }

    #[test]
    fn composition_laws() {
        let s1 = FiniteMeasureSpace::new(
            &["p1", "p2", "p3", "p4"],
            &[vec!["p1", "p2"], vec!["p3"], vec!["p4"]],
            vec![q(1, 2), q(1, 3), E::zero()],
        )
        .unwrap();
        let s2 = FiniteMeasureSpace::discrete(&["q1", "q2"], vec![q(1, 1), q(2, 1)]).unwrap();
        let f = MeasurableMap::new(&s1, &s2, [("p1", "q1"), ("p2", "q1"), ("p3", "q1"), ("p4", "q2")]).unwrap();
        assert_eq!(compose(&identity_map(&s2), &f).unwrap(), f);
        assert_eq!(compose(&f, &identity_map(&s1)).unwrap(), f);
        let swap = MeasurableMap::new(&s2, &s2, [("q1", "q2"), ("q2", "q1")]).unwrap();
        let report = contravariance_check(&f, &swap).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(contravariance_check(&identity_map(&s1), &f).unwrap().passed());
        assert!(compression_submultiplicativity(&f, &swap).unwrap());
        assert!(compression_submultiplicativity(&f, &identity_map(&s2)).unwrap());
        assert_eq!(
            compose(&identity_map(&s2), &f).unwrap().compression(),
            f.compression()
        );
        assert_eq!(compose(&f, &f).unwrap_err(), Error::SpaceMismatch);
        assert_eq!(contravariance_check(&f, &f).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn contravariance_detects_corrupted_hom() {
        let s2 = FiniteMeasureSpace::discrete(&["q1", "q2"], vec![q(1, 1), q(2, 1)]).unwrap();
        let s3 = FiniteMeasureSpace::discrete(&["a", "b", "c"], vec![q(1, 1), q(1, 1), q(1, 1)]).unwrap();
        let f = MeasurableMap::new(&s3, &s2, [("a", "q1"), ("b", "q2"), ("c", "q2")]).unwrap();
        let g = identity_map(&s2);
        let composite = BooleanHom::induced(&compose(&g, &f).unwrap()).unwrap();
        let f_hom = BooleanHom::induced(&f).unwrap();
        let g_hom = BooleanHom::induced(&g).unwrap();
        let mut action = composite.atom_action().to_vec();
        action.swap(0, 1);
        let broken = composite.with_atom_action(action).unwrap();
        let report = check_contravariance(&broken, &f_hom, &g_hom).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].law, "contravariance");
        assert_eq!(report.violations[0].witness["a"], json!([0]));
    }

    #[test]
    fn non_inp_pair_is_rejected() {
        let s2 = FiniteMeasureSpace::discrete(&["q1", "q2"], vec![q(1, 1), E::zero()]).unwrap();
        let f = MeasurableMap::constant(&s2, &s2, "q2").unwrap();
        assert!(matches!(
            contravariance_check(&f, &identity_map(&s2)).unwrap_err(),
            Error::NotInverseNilPreserving { .. }
        ));
    }

    #[test]
    fn submultiplicativity_with_zero_mass_source() {
        let zero = FiniteMeasureSpace::discrete(&["z"], vec![E::zero()]).unwrap();
        let s2 = FiniteMeasureSpace::discrete(&["q1", "q2"], vec![q(1, 1), q(2, 1)]).unwrap();
        let f = MeasurableMap::constant(&zero, &s2, "q1").unwrap();
        let g = MeasurableMap::constant(&s2, &s2, "q2").unwrap();
        assert_eq!(compose(&g, &f).unwrap().compression(), C::Bounded(r(0)));
        assert!(compression_submultiplicativity(&f, &g).unwrap());
    }
}
