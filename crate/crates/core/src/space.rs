//! Finite measure spaces whose σ-algebra is generated by a partition.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::ext::ExtRatio;
use crate::scalar::Scalar;

struct SpaceData<T: Scalar> {
    points: Vec<String>,
    point_index: HashMap<String, usize>,
    atom_of_point: Vec<usize>,
    atoms: Vec<Vec<usize>>,
    weights: Vec<ExtRatio<T>>,
}

/// A finite point set, a partition of it into atoms, and a weight per atom.
///
/// Points are stored sorted by label and atoms sorted by their smallest
/// label, so two spaces built from the same data in any order are equal and
/// serialize identically. Cloning is cheap; the data is shared.
pub struct FiniteMeasureSpace<T: Scalar>(Arc<SpaceData<T>>);

impl<T: Scalar> Clone for FiniteMeasureSpace<T> {
    fn clone(&self) -> Self {
        FiniteMeasureSpace(Arc::clone(&self.0))
    }
}

impl<T: Scalar> PartialEq for FiniteMeasureSpace<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.points == other.0.points
                && self.0.atoms == other.0.atoms
                && self.0.weights == other.0.weights)
    }
}

impl<T: Scalar> Eq for FiniteMeasureSpace<T> {}

impl<T: Scalar> fmt::Debug for FiniteMeasureSpace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (i, atom) in self.0.atoms.iter().enumerate() {
            let labels: Vec<&str> = atom.iter().map(|&p| self.0.points[p].as_str()).collect();
            list.entry(&format_args!("{:?}: {}", labels, self.0.weights[i]));
        }
        list.finish()
    }
}

impl<T: Scalar> FiniteMeasureSpace<T> {
    /// Build a space from point labels, a partition of those labels and one
    /// weight per block (in the order the blocks are given).
    pub fn new<S: AsRef<str>>(
        points: &[S],
        partition: &[Vec<S>],
        weights: Vec<ExtRatio<T>>,
    ) -> Result<Self> {
        let mut labels: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].clone()));
        }
        if weights.len() != partition.len() {
            return Err(Error::ArityMismatch {
                what: "weights",
                expected: partition.len(),
                found: weights.len(),
            });
        }
        let point_index: HashMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();

        let mut owner: Vec<Option<usize>> = vec![None; labels.len()];
        let mut blocks: Vec<(Vec<usize>, ExtRatio<T>)> = Vec::with_capacity(partition.len());
        for (b, (block, weight)) in partition.iter().zip(weights).enumerate() {
            if block.is_empty() {
                return Err(Error::EmptyAtom(b));
            }
            let mut members = Vec::with_capacity(block.len());
            for label in block {
                let label = label.as_ref();
                let &idx = point_index
                    .get(label)
                    .ok_or_else(|| Error::UnknownPoint(label.to_string()))?;
                if owner[idx].is_some() {
                    return Err(Error::PartitionOverlap(label.to_string()));
                }
                owner[idx] = Some(b);
                members.push(idx);
            }
            members.sort_unstable();
            blocks.push((members, weight));
        }
        if let Some(gap) = owner.iter().position(Option::is_none) {
            return Err(Error::PartitionGap(labels[gap].clone()));
        }

        blocks.sort_by_key(|(members, _)| members[0]);
        let mut atom_of_point = vec![0; labels.len()];
        for (a, (members, _)) in blocks.iter().enumerate() {
            for &p in members {
                atom_of_point[p] = a;
            }
        }
        let (atoms, weights) = blocks.into_iter().unzip();
        Ok(FiniteMeasureSpace(Arc::new(SpaceData {
            points: labels,
            point_index,
            atom_of_point,
            atoms,
            weights,
        })))
    }

    /// Every point its own atom.
    pub fn discrete<S: AsRef<str>>(points: &[S], weights: Vec<ExtRatio<T>>) -> Result<Self> {
        let partition: Vec<Vec<&str>> = points.iter().map(|p| vec![p.as_ref()]).collect();
        let labels: Vec<&str> = points.iter().map(|p| p.as_ref()).collect();
        Self::new(&labels, &partition, weights)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self == other
    }

    pub fn num_points(&self) -> usize {
        self.0.points.len()
    }

    pub fn num_atoms(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn points(&self) -> &[String] {
        &self.0.points
    }

    pub fn point_label(&self, point: usize) -> &str {
        &self.0.points[point]
    }

    pub fn point_index(&self, label: &str) -> Result<usize> {
        self.0
            .point_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// Atom containing the point with the given index.
    pub fn atom_of_point(&self, point: usize) -> usize {
        self.0.atom_of_point[point]
    }

    pub fn atom_of(&self, label: &str) -> Result<usize> {
        Ok(self.atom_of_point(self.point_index(label)?))
    }

    /// Point indices of an atom, ascending.
    pub fn atom_members(&self, atom: usize) -> &[usize] {
        &self.0.atoms[atom]
    }

    pub fn atom_labels(&self, atom: usize) -> Vec<&str> {
        self.0.atoms[atom]
            .iter()
            .map(|&p| self.0.points[p].as_str())
            .collect()
    }

    pub fn weight(&self, atom: usize) -> &ExtRatio<T> {
        &self.0.weights[atom]
    }

    pub fn weights(&self) -> &[ExtRatio<T>] {
        &self.0.weights
    }

    pub fn total_measure(&self) -> ExtRatio<T> {
        self.0.weights.iter().sum()
    }

    /// False when some atom has infinite weight.
    pub fn is_sigma_finite(&self) -> bool {
        self.0.weights.iter().all(ExtRatio::is_finite)
    }

    pub fn null_atoms(&self) -> AtomSet {
        AtomSet::from_indices(
            self.num_atoms(),
            (0..self.num_atoms()).filter(|&a| self.weight(a).is_zero()),
        )
    }

    pub fn empty_set(&self) -> MeasurableSet<T> {
        MeasurableSet {
            space: self.clone(),
            atoms: AtomSet::empty(self.num_atoms()),
        }
    }

    pub fn full_set(&self) -> MeasurableSet<T> {
        MeasurableSet {
            space: self.clone(),
            atoms: AtomSet::full(self.num_atoms()),
        }
    }

    pub fn set_from_atoms<I: IntoIterator<Item = usize>>(&self, atoms: I) -> Result<MeasurableSet<T>> {
        let mut set = AtomSet::empty(self.num_atoms());
        for a in atoms {
            if a >= self.num_atoms() {
                return Err(Error::UnknownAtom(a));
            }
            set.insert(a);
        }
        Ok(MeasurableSet {
            space: self.clone(),
            atoms: set,
        })
    }

    /// Wrap an atom bitset; panics if its universe is not this space's atoms.
    pub fn set_from_bits(&self, atoms: AtomSet) -> MeasurableSet<T> {
        assert_eq!(atoms.universe(), self.num_atoms());
        MeasurableSet {
            space: self.clone(),
            atoms,
        }
    }

    /// The atoms touched by `labels` and whether they are covered entirely.
    fn cover<S: AsRef<str>>(&self, labels: &[S]) -> Result<(AtomSet, Option<usize>)> {
        let mut seen = vec![false; self.num_points()];
        let mut atoms = AtomSet::empty(self.num_atoms());
        for l in labels {
            let p = self.point_index(l.as_ref())?;
            seen[p] = true;
            atoms.insert(self.atom_of_point(p));
        }
        let split = atoms
            .iter()
            .find(|&a| self.atom_members(a).iter().any(|&p| !seen[p]));
        Ok((atoms, split))
    }

    /// True iff the point set is a union of atoms.
    pub fn is_measurable<S: AsRef<str>>(&self, labels: &[S]) -> Result<bool> {
        Ok(self.cover(labels)?.1.is_none())
    }

    pub fn set_from_points<S: AsRef<str>>(&self, labels: &[S]) -> Result<MeasurableSet<T>> {
        match self.cover(labels)? {
            (atoms, None) => Ok(self.set_from_bits(atoms)),
            (_, Some(split)) => Err(Error::SplitsAtom(split)),
        }
    }

    pub fn measure(&self, set: &MeasurableSet<T>) -> Result<ExtRatio<T>> {
        self.check_owns(set)?;
        Ok(self.measure_bits(&set.atoms))
    }

    pub(crate) fn measure_bits(&self, atoms: &AtomSet) -> ExtRatio<T> {
        atoms.iter().map(|a| self.weight(a)).sum()
    }

    pub fn is_null(&self, set: &MeasurableSet<T>) -> Result<bool> {
        Ok(self.measure(set)?.is_zero())
    }

    fn check_owns(&self, set: &MeasurableSet<T>) -> Result<()> {
        if set.space == *self {
            Ok(())
        } else {
            Err(Error::ForeignSet)
        }
    }
}

/// A union of atoms of a particular space.
#[derive(Clone, PartialEq, Eq)]
pub struct MeasurableSet<T: Scalar> {
    space: FiniteMeasureSpace<T>,
    atoms: AtomSet,
}

impl<T: Scalar> fmt::Debug for MeasurableSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeasurableSet{:?}", self.atoms)
    }
}

impl<T: Scalar> MeasurableSet<T> {
    pub fn space(&self) -> &FiniteMeasureSpace<T> {
        &self.space
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Labels of every point in the set, ascending.
    pub fn points(&self) -> Vec<&str> {
        let mut pts: Vec<usize> = self
            .atoms
            .iter()
            .flat_map(|a| self.space.atom_members(a).iter().copied())
            .collect();
        pts.sort_unstable();
        pts.into_iter().map(|p| self.space.point_label(p)).collect()
    }

    fn binary(&self, other: &Self, op: impl Fn(&AtomSet, &AtomSet) -> AtomSet) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::ForeignSet);
        }
        Ok(MeasurableSet {
            space: self.space.clone(),
            atoms: op(&self.atoms, &other.atoms),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::union)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::intersection)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.binary(other, AtomSet::symmetric_difference)
    }

    pub fn complement(&self) -> Self {
        MeasurableSet {
            space: self.space.clone(),
            atoms: self.atoms.complement(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::ForeignSet);
        }
        Ok(self.atoms.is_subset(&other.atoms))
    }
}
