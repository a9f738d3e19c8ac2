//! Measurable maps between finite measure spaces and the quantities that
//! depend only on the pushforward: inverse-nil-preservation, compression and
//! the density of the pushforward.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::ext::{format_ratio, ExtRatio};
use crate::scalar::Scalar;
use crate::space::{FiniteMeasureSpace, MeasurableSet};

/// A point function whose preimages of target atoms are unions of source atoms.
#[derive(Clone)]
pub struct MeasurableMap<T: Scalar> {
    source: FiniteMeasureSpace<T>,
    target: FiniteMeasureSpace<T>,
    point_fn: Vec<usize>,
    atom_image: Vec<usize>,
    atom_preimages: Vec<AtomSet>,
}

impl<T: Scalar> fmt::Debug for MeasurableMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.point_fn
                    .iter()
                    .enumerate()
                    .map(|(p, &q)| (self.source.point_label(p), self.target.point_label(q))),
            )
            .finish()
    }
}

impl<T: Scalar> PartialEq for MeasurableMap<T> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.point_fn == other.point_fn
    }
}

impl<T: Scalar> Eq for MeasurableMap<T> {}

impl<T: Scalar> MeasurableMap<T> {
    /// Build a map from `(source label, target label)` pairs covering every source point.
    pub fn new<I, S1, S2>(
        source: &FiniteMeasureSpace<T>,
        target: &FiniteMeasureSpace<T>,
        assignment: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S1, S2)>,
        S1: AsRef<str>,
        S2: AsRef<str>,
    {
        let mut point_fn: Vec<Option<usize>> = vec![None; source.num_points()];
        for (from, to) in assignment {
            let p = source.point_index(from.as_ref())?;
            let q = target.point_index(to.as_ref())?;
            if point_fn[p].replace(q).is_some() {
                return Err(Error::DuplicatePoint(from.as_ref().to_string()));
            }
        }
        let point_fn = point_fn
            .into_iter()
            .enumerate()
            .map(|(p, q)| q.ok_or_else(|| Error::IncompleteMap(source.point_label(p).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_point_indices(source, target, point_fn)
    }

    /// Build a map from a table of target point indices, one per source point.
    pub fn from_point_indices(
        source: &FiniteMeasureSpace<T>,
        target: &FiniteMeasureSpace<T>,
        point_fn: Vec<usize>,
    ) -> Result<Self> {
        if point_fn.len() != source.num_points() {
            return Err(Error::ArityMismatch {
                what: "point images",
                expected: source.num_points(),
                found: point_fn.len(),
            });
        }
        if let Some(&bad) = point_fn.iter().find(|&&q| q >= target.num_points()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        let mut atom_image = Vec::with_capacity(source.num_atoms());
        for s in 0..source.num_atoms() {
            let mut hit: Vec<usize> = source
                .atom_members(s)
                .iter()
                .map(|&p| target.atom_of_point(point_fn[p]))
                .collect();
            hit.sort_unstable();
            hit.dedup();
            if hit.len() > 1 {
                return Err(Error::NotMeasurable {
                    source_atom: s,
                    target_atoms: hit,
                });
            }
            atom_image.push(hit[0]);
        }
        let mut atom_preimages = vec![AtomSet::empty(source.num_atoms()); target.num_atoms()];
        for (s, &t) in atom_image.iter().enumerate() {
            atom_preimages[t].insert(s);
        }
        Ok(MeasurableMap {
            source: source.clone(),
            target: target.clone(),
            point_fn,
            atom_image,
            atom_preimages,
        })
    }

    pub fn identity(space: &FiniteMeasureSpace<T>) -> Self {
        Self::from_point_indices(space, space, (0..space.num_points()).collect())
            .expect("identity is measurable")
    }

    /// Constant map onto the point `label` of `target`.
    pub fn constant(source: &FiniteMeasureSpace<T>, target: &FiniteMeasureSpace<T>, label: &str) -> Result<Self> {
        let q = target.point_index(label)?;
        Self::from_point_indices(source, target, vec![q; source.num_points()])
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &MeasurableMap<T>) -> Result<Self> {
        if self.target != g.source {
            return Err(Error::SpaceMismatch);
        }
        let point_fn = self.point_fn.iter().map(|&q| g.point_fn[q]).collect();
        Self::from_point_indices(&self.source, &g.target, point_fn)
    }

    pub fn source(&self) -> &FiniteMeasureSpace<T> {
        &self.source
    }

    pub fn target(&self) -> &FiniteMeasureSpace<T> {
        &self.target
    }

    /// Target point index of each source point.
    pub fn point_fn(&self) -> &[usize] {
        &self.point_fn
    }

    pub fn image_of(&self, label: &str) -> Result<&str> {
        let p = self.source.point_index(label)?;
        Ok(self.target.point_label(self.point_fn[p]))
    }

    /// Source atoms whose points land in target atom `b`.
    pub fn atom_preimage(&self, b: usize) -> &AtomSet {
        &self.atom_preimages[b]
    }

    /// Target atom containing the image of source atom `s`.
    pub fn atom_image(&self, s: usize) -> usize {
        self.atom_image[s]
    }

    /// Point-level preimage of a target set.
    pub fn preimage(&self, set: &MeasurableSet<T>) -> Result<MeasurableSet<T>> {
        if set.space() != &self.target {
            return Err(Error::ForeignSet);
        }
        let mut atoms = AtomSet::empty(self.source.num_atoms());
        for (p, &q) in self.point_fn.iter().enumerate() {
            if set.atoms().contains(self.target.atom_of_point(q)) {
                atoms.insert(self.source.atom_of_point(p));
            }
        }
        Ok(self.source.set_from_bits(atoms))
    }

    pub fn pushforward(&self) -> PushforwardMeasure<T> {
        let masses = self
            .atom_preimages
            .iter()
            .map(|pre| self.source.measure_bits(pre))
            .collect();
        PushforwardMeasure {
            target: self.target.clone(),
            masses,
        }
    }

    /// First null target atom that receives positive pushforward mass.
    pub fn inp_violation(&self) -> Option<usize> {
        let push = self.pushforward();
        (0..self.target.num_atoms())
            .find(|&b| self.target.weight(b).is_zero() && !push.mass(b).is_zero())
    }

    /// `φ♯μ₁ ≪ μ₂`, checked atom by atom.
    pub fn is_inverse_nil_preserving(&self) -> bool {
        self.inp_violation().is_none()
    }

    /// The null-ideal formulation: the preimage of the largest null set is null.
    pub fn preimage_of_null_is_null(&self) -> bool {
        let nulls = self.target.set_from_bits(self.target.null_atoms());
        let pre = self.preimage(&nulls).expect("own target");
        self.source.is_null(&pre).expect("own source")
    }

    /// A pair of target sets equal modulo null sets whose preimages are not.
    ///
    /// Enumerates every target set `A` and every non-empty set `N` of null
    /// target atoms, comparing `φ⁻¹A` with `φ⁻¹(A △ N)`. Exponential in the
    /// number of target atoms.
    pub fn well_definedness_witness(&self) -> Option<(MeasurableSet<T>, MeasurableSet<T>)> {
        let m = self.target.num_atoms();
        assert!(m < 32, "too many target atoms to enumerate");
        let nulls: Vec<usize> = self.target.null_atoms().to_vec();
        let all: Vec<usize> = (0..m).collect();
        for a_mask in 0..1u64 << m {
            let a = self.target.set_from_bits(AtomSet::from_mask(m, &all, a_mask));
            let pre_a = self.preimage(&a).expect("own target");
            for n_mask in 1..1u64 << nulls.len() {
                let n = self.target.set_from_bits(AtomSet::from_mask(m, &nulls, n_mask));
                let a2 = a.symmetric_difference(&n).expect("same space");
                debug_assert!(self.target.is_null(&a.symmetric_difference(&a2).unwrap()).unwrap());
                let pre_a2 = self.preimage(&a2).expect("own target");
                let diff = pre_a.symmetric_difference(&pre_a2).expect("same space");
                if !self.source.is_null(&diff).expect("own source") {
                    return Some((a2, a));
                }
            }
        }
        None
    }

    /// Whether `[A] ↦ [φ⁻¹A]` is independent of the representative `A`.
    pub fn check_well_definedness(&self) -> bool {
        self.well_definedness_witness().is_none()
    }

    /// Infimal `C` with `φ♯μ₁ ≤ C·μ₂`, evaluated atom by atom.
    pub fn compression(&self) -> CompressionResult<T> {
        let push = self.pushforward();
        let mut best = Ratio::zero();
        for b in 0..self.target.num_atoms() {
            let mass = push.mass(b);
            let weight = self.target.weight(b);
            if mass.is_zero() || weight.is_infinite() {
                continue;
            }
            if weight.is_zero() || mass.is_infinite() {
                return CompressionResult::Unbounded;
            }
            let ratio = mass.finite().unwrap() / weight.finite().unwrap();
            if ratio > best {
                best = ratio;
            }
        }
        CompressionResult::Bounded(best)
    }

    /// Density of the pushforward with respect to the target measure, per target atom.
    ///
    /// `push/μ₂` on atoms of finite positive weight; `0` wherever the
    /// pushforward vanishes; on infinite atoms `0` for finite mass and `inf`
    /// for infinite mass.
    pub fn radon_nikodym(&self) -> Result<Vec<ExtRatio<T>>> {
        if let Some(b) = self.inp_violation() {
            return Err(Error::NotInverseNilPreserving { target_atom: b });
        }
        let push = self.pushforward();
        Ok((0..self.target.num_atoms())
            .map(|b| {
                let mass = push.mass(b);
                if mass.is_zero() {
                    ExtRatio::zero()
                } else {
                    mass.checked_div(self.target.weight(b))
                        .unwrap_or_else(|_| ExtRatio::infinity())
                }
            })
            .collect())
    }
}

/// `φ♯μ₁`, stored per target atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardMeasure<T: Scalar> {
    target: FiniteMeasureSpace<T>,
    masses: Vec<ExtRatio<T>>,
}

impl<T: Scalar> PushforwardMeasure<T> {
    pub fn target(&self) -> &FiniteMeasureSpace<T> {
        &self.target
    }

    pub fn mass(&self, atom: usize) -> &ExtRatio<T> {
        &self.masses[atom]
    }

    pub fn masses(&self) -> &[ExtRatio<T>] {
        &self.masses
    }

    pub fn total(&self) -> ExtRatio<T> {
        self.masses.iter().sum()
    }

    pub fn measure(&self, set: &MeasurableSet<T>) -> Result<ExtRatio<T>> {
        if set.space() != &self.target {
            return Err(Error::ForeignSet);
        }
        Ok(set.atoms().iter().map(|b| &self.masses[b]).sum())
    }
}

/// Either the infimal compression / Lipschitz constant, or `Unbounded`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CompressionResult<T: Scalar> {
    Bounded(Ratio<T>),
    Unbounded,
}

impl<T: Scalar> CompressionResult<T> {
    pub fn is_bounded(&self) -> bool {
        matches!(self, CompressionResult::Bounded(_))
    }

    pub fn value(&self) -> Option<&Ratio<T>> {
        match self {
            CompressionResult::Bounded(v) => Some(v),
            CompressionResult::Unbounded => None,
        }
    }

    /// `Bounded(0)`: the constant is an infimum but not a positive constant.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, CompressionResult::Bounded(v) if v.is_zero())
    }

    pub fn as_ext(&self) -> ExtRatio<T> {
        match self {
            CompressionResult::Bounded(v) => ExtRatio::from(v.clone()),
            CompressionResult::Unbounded => ExtRatio::infinity(),
        }
    }

    /// Product of two constants, `Unbounded` absorbing everything.
    pub fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (CompressionResult::Bounded(a), CompressionResult::Bounded(b)) => CompressionResult::Bounded(a * b),
            _ => CompressionResult::Unbounded,
        }
    }

    /// `self ≤ other` with `Unbounded` the largest value.
    pub fn le(&self, other: &Self) -> bool {
        match (self, other) {
            (_, CompressionResult::Unbounded) => true,
            (CompressionResult::Unbounded, _) => false,
            (CompressionResult::Bounded(a), CompressionResult::Bounded(b)) => a <= b,
        }
    }
}

impl<T: Scalar> fmt::Display for CompressionResult<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompressionResult::Bounded(v) => f.write_str(&format_ratio(v)),
            CompressionResult::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = ExtRatio<i64>;
    type C = CompressionResult<i64>;

    fn q(p: i64, d: i64) -> E {
        E::new(p, d).unwrap()
    }

    fn s1() -> FiniteMeasureSpace<i64> {
        FiniteMeasureSpace::new(
            &["p1", "p2", "p3", "p4"],
            &[vec!["p1", "p2"], vec!["p3"], vec!["p4"]],
            vec![q(1, 2), q(1, 3), E::zero()],
        )
        .unwrap()
    }

    fn s2() -> FiniteMeasureSpace<i64> {
        FiniteMeasureSpace::new(&["q1", "q2"], &[vec!["q1"], vec!["q2"]], vec![q(1, 1), q(2, 1)]).unwrap()
    }

    fn s3() -> FiniteMeasureSpace<i64> {
        FiniteMeasureSpace::new(&["r1", "r2"], &[vec!["r1"], vec!["r2"]], vec![q(1, 1), q(2, 1)]).unwrap()
    }

    fn phi() -> MeasurableMap<i64> {
        MeasurableMap::new(&s1(), &s2(), [("p1", "q1"), ("p2", "q1"), ("p3", "q1"), ("p4", "q2")]).unwrap()
    }

    fn psi() -> MeasurableMap<i64> {
        MeasurableMap::new(&s2(), &s1(), [("q1", "p4"), ("q2", "p1")]).unwrap()
    }

    #[test]
    fn make_map_examples() {
        let phi = phi();
        assert_eq!(phi.atom_preimage(0).to_vec(), vec![0, 1]);
        assert_eq!(phi.atom_preimage(1).to_vec(), vec![2]);
        let id = MeasurableMap::identity(&s2());
        assert_eq!(id.atom_preimage(0).to_vec(), vec![0]);
        assert_eq!(id.atom_preimage(1).to_vec(), vec![1]);
        assert!(MeasurableMap::new(&s2(), &s1(), [("q1", "p1"), ("q2", "p3")]).is_ok());
        let coarse = FiniteMeasureSpace::new(&["r1", "r2"], &[vec!["r1", "r2"]], vec![q(1, 1)]).unwrap();
        let split = MeasurableMap::new(&coarse, &s2(), [("r1", "q1"), ("r2", "q2")]);
        assert_eq!(
            split.unwrap_err(),
            Error::NotMeasurable {
                source_atom: 0,
                target_atoms: vec![0, 1]
            }
        );
    }

    #[test]
    fn make_map_errors() {
        assert_eq!(
            MeasurableMap::new(&s2(), &s1(), [("q1", "p1")]).unwrap_err(),
            Error::IncompleteMap("q2".into())
        );
        assert_eq!(
            MeasurableMap::new(&s2(), &s1(), [("q1", "p1"), ("q2", "zz")]).unwrap_err(),
            Error::UnknownPoint("zz".into())
        );
        assert_eq!(
            MeasurableMap::new(&s2(), &s1(), [("q1", "p1"), ("q1", "p1"), ("q2", "p1")]).unwrap_err(),
            Error::DuplicatePoint("q1".into())
        );
    }

    #[test]
    fn pushforward_examples() {
        assert_eq!(phi().pushforward().masses(), &[q(5, 6), E::zero()]);
        assert_eq!(MeasurableMap::identity(&s2()).pushforward().masses(), s2().weights());
        let c = MeasurableMap::constant(&s3(), &s2(), "q1").unwrap();
        assert_eq!(c.pushforward().masses(), &[q(3, 1), E::zero()]);
        assert_eq!(c.pushforward().total(), s3().total_measure());
    }

    #[test]
    fn inverse_nil_preserving_examples() {
        assert!(phi().is_inverse_nil_preserving());
        assert!(phi().preimage_of_null_is_null());
        assert!(!psi().is_inverse_nil_preserving());
        assert!(!psi().preimage_of_null_is_null());
        assert_eq!(psi().inp_violation(), Some(2));
        // target without null atoms
        let to_s3 = MeasurableMap::new(&s1(), &s3(), [("p1", "r2"), ("p2", "r2"), ("p3", "r1"), ("p4", "r1")])
            .unwrap();
        assert!(to_s3.is_inverse_nil_preserving());
    }

    #[test]
    fn well_definedness_examples() {
        assert!(phi().check_well_definedness());
        assert!(MeasurableMap::identity(&s1()).check_well_definedness());
        let (a, a2) = psi().well_definedness_witness().unwrap();
        assert_eq!(a.atoms().to_vec(), vec![2]);
        assert!(a2.is_empty());
    }

    #[test]
    fn compression_examples() {
        assert_eq!(phi().compression(), C::Bounded(Ratio::new(5, 6)));
        let c = MeasurableMap::constant(&s3(), &s2(), "q1").unwrap();
        assert_eq!(c.compression(), C::Bounded(Ratio::from_integer(3)));
        let to_null = MeasurableMap::constant(&s3(), &s1(), "p4").unwrap();
        assert_eq!(to_null.compression(), C::Unbounded);
        let zero = FiniteMeasureSpace::new(&["z"], &[vec!["z"]], vec![E::zero()]).unwrap();
        let from_zero = MeasurableMap::constant(&zero, &s1(), "p4").unwrap();
        assert_eq!(from_zero.compression(), C::Bounded(Ratio::zero()));
        assert!(from_zero.compression().is_degenerate());
        assert_eq!(psi().compression(), C::Unbounded);
    }

    #[test]
    fn compression_with_infinite_atoms() {
        let inf_src = FiniteMeasureSpace::new(&["a", "b"], &[vec!["a"], vec!["b"]], vec![E::infinity(), q(1, 1)])
            .unwrap();
        let inf_tgt = FiniteMeasureSpace::new(&["x", "y"], &[vec!["x"], vec!["y"]], vec![E::infinity(), q(2, 1)])
            .unwrap();
        let ok = MeasurableMap::new(&inf_src, &inf_tgt, [("a", "x"), ("b", "y")]).unwrap();
        assert_eq!(ok.compression(), C::Bounded(Ratio::new(1, 2)));
        let bad = MeasurableMap::new(&inf_src, &inf_tgt, [("a", "y"), ("b", "y")]).unwrap();
        assert_eq!(bad.compression(), C::Unbounded);
        assert_eq!(bad.radon_nikodym().unwrap(), vec![E::zero(), E::infinity()]);
        let fin_into_inf = MeasurableMap::new(&inf_src, &inf_tgt, [("a", "x"), ("b", "x")]).unwrap();
        assert_eq!(fin_into_inf.compression(), C::Bounded(Ratio::zero()));
        assert_eq!(fin_into_inf.radon_nikodym().unwrap(), vec![E::infinity(), E::zero()]);
        let only_finite = FiniteMeasureSpace::new(&["b"], &[vec!["b"]], vec![q(1, 1)]).unwrap();
        let finite_into_inf = MeasurableMap::new(&only_finite, &inf_tgt, [("b", "x")]).unwrap();
        assert_eq!(finite_into_inf.radon_nikodym().unwrap(), vec![E::zero(), E::zero()]);
    }

    #[test]
    fn radon_nikodym_examples() {
        assert_eq!(phi().radon_nikodym().unwrap(), vec![q(5, 6), E::zero()]);
        assert_eq!(
            MeasurableMap::identity(&s2()).radon_nikodym().unwrap(),
            vec![q(1, 1), q(1, 1)]
        );
        assert_eq!(
            psi().radon_nikodym().unwrap_err(),
            Error::NotInverseNilPreserving { target_atom: 2 }
        );
    }

    #[test]
    fn composition() {
        let swap = MeasurableMap::new(&s2(), &s2(), [("q1", "q2"), ("q2", "q1")]).unwrap();
        let composed = phi().then(&swap).unwrap();
        assert_eq!(composed.pushforward().masses(), &[E::zero(), q(5, 6)]);
        assert_eq!(phi().then(&MeasurableMap::identity(&s2())).unwrap(), phi());
        assert_eq!(MeasurableMap::identity(&s1()).then(&phi()).unwrap(), phi());
        assert_eq!(phi().then(&phi()).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn compression_result_ordering() {
        let one = C::Bounded(Ratio::from_integer(1));
        assert!(one.le(&C::Unbounded));
        assert!(!C::Unbounded.le(&one));
        assert!(C::Unbounded.le(&C::Unbounded));
        assert_eq!(one.compose(&C::Unbounded), C::Unbounded);
        assert_eq!(C::Bounded(Ratio::zero()).compose(&C::Unbounded), C::Unbounded);
        assert_eq!(C::Bounded(Ratio::new(5, 6)).to_string(), "5/6");
        assert_eq!(C::Unbounded.to_string(), "unbounded");
    }
}
