//! The measure algebra of a finite space: sets modulo null sets.
//!
//! An element is stored as its canonical representative, the set of non-null
//! atoms it contains. Two measurable sets that differ by a null set project
//! to the same representative, so element equality is bitset equality.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::ext::ExtRatio;
use crate::scalar::Scalar;
use crate::space::{FiniteMeasureSpace, MeasurableSet};

struct AlgebraData<T: Scalar> {
    space: FiniteMeasureSpace<T>,
    nonnull: Vec<usize>,
    nonnull_mask: AtomSet,
}

/// Boolean algebra of classes of measurable sets together with `mu_bar`.
pub struct MeasureAlgebra<T: Scalar>(Arc<AlgebraData<T>>);

impl<T: Scalar> Clone for MeasureAlgebra<T> {
    fn clone(&self) -> Self {
        MeasureAlgebra(Arc::clone(&self.0))
    }
}

impl<T: Scalar> PartialEq for MeasureAlgebra<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.space == other.0.space
    }
}

impl<T: Scalar> Eq for MeasureAlgebra<T> {}

impl<T: Scalar> fmt::Debug for MeasureAlgebra<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeasureAlgebra(nonnull atoms {:?})", self.0.nonnull)
    }
}

impl<T: Scalar> MeasureAlgebra<T> {
    pub fn build(space: &FiniteMeasureSpace<T>) -> Self {
        let nonnull: Vec<usize> = (0..space.num_atoms())
            .filter(|&a| !space.weight(a).is_zero())
            .collect();
        let nonnull_mask = AtomSet::from_indices(space.num_atoms(), nonnull.iter().copied());
        MeasureAlgebra(Arc::new(AlgebraData {
            space: space.clone(),
            nonnull,
            nonnull_mask,
        }))
    }

    pub fn space(&self) -> &FiniteMeasureSpace<T> {
        &self.0.space
    }

    /// Space atom indices of the algebra's atoms, ascending.
    pub fn nonnull_atoms(&self) -> &[usize] {
        &self.0.nonnull
    }

    pub fn num_atoms(&self) -> usize {
        self.0.nonnull.len()
    }

    /// Number of elements, `2^num_atoms`; `None` if that overflows `u128`.
    pub fn size(&self) -> Option<u128> {
        1u128.checked_shl(self.num_atoms() as u32)
    }

    /// Non-null atoms of finite weight; the atoms of the ideal of finite elements.
    pub fn fin_atoms(&self) -> Vec<usize> {
        self.0
            .nonnull
            .iter()
            .copied()
            .filter(|&a| self.space().weight(a).is_finite())
            .collect()
    }

    fn wrap(&self, atoms: AtomSet) -> AlgebraElement<T> {
        AlgebraElement {
            algebra: self.clone(),
            atoms,
        }
    }

    pub fn zero(&self) -> AlgebraElement<T> {
        self.wrap(AtomSet::empty(self.space().num_atoms()))
    }

    pub fn top(&self) -> AlgebraElement<T> {
        self.wrap(self.0.nonnull_mask.clone())
    }

    /// The element generated by a single non-null atom.
    pub fn atom(&self, atom: usize) -> Result<AlgebraElement<T>> {
        if !self.0.nonnull_mask.contains(atom) {
            return Err(Error::UnknownAtom(atom));
        }
        Ok(self.wrap(AtomSet::from_indices(self.space().num_atoms(), [atom])))
    }

    /// Element from space atom indices; every index must be a non-null atom.
    pub fn element<I: IntoIterator<Item = usize>>(&self, atoms: I) -> Result<AlgebraElement<T>> {
        let mut set = AtomSet::empty(self.space().num_atoms());
        for a in atoms {
            if !self.0.nonnull_mask.contains(a) {
                return Err(Error::UnknownAtom(a));
            }
            set.insert(a);
        }
        Ok(self.wrap(set))
    }

    /// The element whose atoms are `positions[i]` for each set bit `i` of `mask`.
    pub(crate) fn element_from_mask(&self, positions: &[usize], mask: u64) -> AlgebraElement<T> {
        self.wrap(AtomSet::from_mask(self.space().num_atoms(), positions, mask))
    }

    /// All `2^k` elements, ordered by bitmask over the non-null atoms.
    ///
    /// Panics for algebras with 64 or more atoms.
    pub fn elements(&self) -> impl Iterator<Item = AlgebraElement<T>> + '_ {
        let k = self.num_atoms();
        assert!(k < 64, "too many atoms to enumerate");
        (0..1u64 << k).map(move |m| self.element_from_mask(&self.0.nonnull, m))
    }

    /// All elements of finite measure.
    pub fn fin_elements(&self) -> Vec<AlgebraElement<T>> {
        let fin = self.fin_atoms();
        assert!(fin.len() < 64, "too many atoms to enumerate");
        (0..1u64 << fin.len())
            .map(|m| self.element_from_mask(&fin, m))
            .collect()
    }

    /// Canonical class of a measurable set: its non-null atoms.
    pub fn project(&self, set: &MeasurableSet<T>) -> Result<AlgebraElement<T>> {
        if set.space() != self.space() {
            return Err(Error::ForeignSet);
        }
        Ok(self.wrap(set.atoms().intersection(&self.0.nonnull_mask)))
    }

    /// Project a raw atom bitset of this space.
    pub(crate) fn project_bits(&self, atoms: &AtomSet) -> AlgebraElement<T> {
        self.wrap(atoms.intersection(&self.0.nonnull_mask))
    }

    /// The union of atoms of an element, as a measurable set.
    pub fn lift(&self, elem: &AlgebraElement<T>) -> Result<MeasurableSet<T>> {
        self.check(elem)?;
        Ok(self.space().set_from_bits(elem.atoms.clone()))
    }

    pub fn mu_bar(&self, elem: &AlgebraElement<T>) -> Result<ExtRatio<T>> {
        self.check(elem)?;
        Ok(elem.mu_bar())
    }

    pub fn is_fin(&self, elem: &AlgebraElement<T>) -> Result<bool> {
        self.check(elem)?;
        Ok(elem.is_fin())
    }

    /// Symmetric-difference distance `mu_bar(a △ b)`, defined on finite elements only.
    pub fn rho(&self, a: &AlgebraElement<T>, b: &AlgebraElement<T>) -> Result<Ratio<T>> {
        self.check(a)?;
        self.check(b)?;
        if !a.is_fin() || !b.is_fin() {
            return Err(Error::NotInFinIdeal);
        }
        Ok(a.symmetric_difference(b)?
            .mu_bar()
            .into_finite()
            .expect("finite elements have finite symmetric difference"))
    }

    /// Pseudometric `mu_bar((a △ b) ∧ c)` for a finite element `c`.
    pub fn rho_c(
        &self,
        a: &AlgebraElement<T>,
        b: &AlgebraElement<T>,
        c: &AlgebraElement<T>,
    ) -> Result<Ratio<T>> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        if !c.is_fin() {
            return Err(Error::NotInFinIdeal);
        }
        Ok(a.symmetric_difference(b)?
            .meet(c)?
            .mu_bar()
            .into_finite()
            .expect("bounded by a finite element"))
    }

    /// Indicator function of a finite element, as an atom-constant L¹ class.
    pub fn chi_embed(&self, elem: &AlgebraElement<T>) -> Result<L1Function<T>> {
        self.check(elem)?;
        if !elem.is_fin() {
            return Err(Error::NotInFinIdeal);
        }
        let coefficients = self
            .0
            .nonnull
            .iter()
            .map(|&a| {
                if elem.atoms.contains(a) {
                    Ratio::from_integer(T::one())
                } else {
                    Ratio::zero()
                }
            })
            .collect();
        Ok(L1Function {
            algebra: self.clone(),
            coefficients,
        })
    }

    /// `Σ |f_i - g_i| · w_i` over the non-null atoms.
    pub fn l1_distance(&self, f: &L1Function<T>, g: &L1Function<T>) -> Result<ExtRatio<T>> {
        if f.algebra != *self || g.algebra != *self {
            return Err(Error::ForeignFunction);
        }
        Ok(self
            .0
            .nonnull
            .iter()
            .zip(f.coefficients.iter().zip(&g.coefficients))
            .map(|(&atom, (x, y))| ExtRatio::from((x - y).abs()) * self.space().weight(atom).clone())
            .sum())
    }

    fn check(&self, elem: &AlgebraElement<T>) -> Result<()> {
        if elem.algebra == *self {
            Ok(())
        } else {
            Err(Error::ForeignElement)
        }
    }
}

/// A class `[A]`, represented by the non-null atoms of `A`.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement<T: Scalar> {
    algebra: MeasureAlgebra<T>,
    atoms: AtomSet,
}

impl<T: Scalar> fmt::Debug for AlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.atoms)
    }
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn algebra(&self) -> &MeasureAlgebra<T> {
        &self.algebra
    }

    /// Space atom indices, ascending.
    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn atom_indices(&self) -> Vec<usize> {
        self.atoms.to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn mu_bar(&self) -> ExtRatio<T> {
        self.algebra.space().measure_bits(&self.atoms)
    }

    pub fn is_fin(&self) -> bool {
        self.atoms
            .iter()
            .all(|a| self.algebra.space().weight(a).is_finite())
    }

    /// Canonical element order: lexicographic on sorted atom indices.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.atoms.lex_cmp(&other.atoms)
    }

    fn binary(&self, other: &Self, op: impl Fn(&AtomSet, &AtomSet) -> AtomSet) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::ForeignElement);
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            atoms: op(&self.atoms, &other.atoms),
        })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::intersection)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::union)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::symmetric_difference)
    }

    pub fn complement(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            atoms: self.algebra.0.nonnull_mask.difference(&self.atoms),
        }
    }

    pub fn is_below(&self, other: &Self) -> Result<bool> {
        if self.algebra != other.algebra {
            return Err(Error::ForeignElement);
        }
        Ok(self.atoms.is_subset(&other.atoms))
    }
}

/// An a.e.-class of functions constant on atoms, one coefficient per non-null atom.
#[derive(Clone, PartialEq, Eq)]
pub struct L1Function<T: Scalar> {
    algebra: MeasureAlgebra<T>,
    coefficients: Vec<Ratio<T>>,
}

impl<T: Scalar> fmt::Debug for L1Function<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coefficients.iter().map(|c| c.to_string())).finish()
    }
}

impl<T: Scalar> L1Function<T> {
    pub fn new(algebra: &MeasureAlgebra<T>, coefficients: Vec<Ratio<T>>) -> Result<Self> {
        if coefficients.len() != algebra.num_atoms() {
            return Err(Error::ArityMismatch {
                what: "coefficients",
                expected: algebra.num_atoms(),
                found: coefficients.len(),
            });
        }
        Ok(L1Function {
            algebra: algebra.clone(),
            coefficients,
        })
    }

    pub fn coefficients(&self) -> &[Ratio<T>] {
        &self.coefficients
    }

    pub fn scale(&self, factor: &Ratio<T>) -> Self {
        L1Function {
            algebra: self.algebra.clone(),
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }
}
