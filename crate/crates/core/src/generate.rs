//! Seeded random spaces and maps.
//!
//! Uses ChaCha8 seeded with `seed_from_u64(seed)` and one stream per trial
//! index, and draws only integers, so instances are identical across runs and
//! platforms. Weights are `p/q` with `p ∈ [0, 16]`, `q ∈ [1, 16]`; an atom is
//! null with probability 10% and infinite with probability 5%.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ext::ExtRatio;
use crate::morphism::MeasurableMap;
use crate::scalar::Scalar;
use crate::space::FiniteMeasureSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub min_atoms: usize,
    pub max_atoms: usize,
    pub max_points_per_atom: usize,
    pub max_numer: u32,
    pub max_denom: u32,
    /// Chance, in percent, that an atom is null.
    pub null_percent: u32,
    /// Chance, in percent, that an atom has infinite weight.
    pub inf_percent: u32,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            min_atoms: 1,
            max_atoms: 8,
            max_points_per_atom: 3,
            max_numer: 16,
            max_denom: 16,
            null_percent: 10,
            inf_percent: 5,
        }
    }
}

pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    config: GeneratorConfig,
}

impl InstanceGenerator {
    /// Generator for trial `trial` of a run seeded with `seed`.
    pub fn new(seed: u64, trial: u64, config: GeneratorConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        InstanceGenerator { rng, config }
    }

    fn weight<T: Scalar>(&mut self) -> ExtRatio<T> {
        let roll = self.rng.random_range(0..100u32);
        if roll < self.config.inf_percent {
            ExtRatio::infinity()
        } else if roll < self.config.inf_percent + self.config.null_percent {
            ExtRatio::zero()
        } else {
            let p = self.rng.random_range(0..=self.config.max_numer);
            let q = self.rng.random_range(1..=self.config.max_denom);
            ExtRatio::new(T::from_u32(p).unwrap(), T::from_u32(q).unwrap()).expect("q >= 1")
        }
    }

    /// A space whose point labels start with `prefix`.
    pub fn space<T: Scalar>(&mut self, prefix: &str) -> FiniteMeasureSpace<T> {
        let atoms = self.rng.random_range(self.config.min_atoms..=self.config.max_atoms);
        let mut points = Vec::new();
        let mut partition = Vec::with_capacity(atoms);
        let mut weights = Vec::with_capacity(atoms);
        for a in 0..atoms {
            let size = self.rng.random_range(1..=self.config.max_points_per_atom);
            let block: Vec<String> = (0..size).map(|k| format!("{prefix}{a}.{k}")).collect();
            points.extend(block.iter().cloned());
            partition.push(block);
            weights.push(self.weight());
        }
        FiniteMeasureSpace::new(&points, &partition, weights).expect("generated partition is valid")
    }

    /// A space with at least one null atom.
    pub fn space_with_null<T: Scalar>(&mut self, prefix: &str) -> FiniteMeasureSpace<T> {
        let space: FiniteMeasureSpace<T> = self.space(prefix);
        if !space.null_atoms().is_empty() {
            return space;
        }
        let forced = self.rng.random_range(0..space.num_atoms());
        let mut weights = space.weights().to_vec();
        weights[forced] = ExtRatio::zero();
        let partition: Vec<Vec<&str>> = (0..space.num_atoms()).map(|a| space.atom_labels(a)).collect();
        let points: Vec<&str> = space.points().iter().map(String::as_str).collect();
        FiniteMeasureSpace::new(&points, &partition, weights).expect("same partition")
    }

    /// A space with at least one non-null atom.
    pub fn space_with_mass<T: Scalar>(&mut self, prefix: &str) -> FiniteMeasureSpace<T> {
        loop {
            let space: FiniteMeasureSpace<T> = self.space(prefix);
            if space.null_atoms().len() < space.num_atoms() {
                return space;
            }
        }
    }

    /// Pick a target atom for each source atom, then a target point inside it
    /// for each source point. With `inp`, non-null source atoms only land on
    /// non-null target atoms (the target must have one).
    pub fn map<T: Scalar>(
        &mut self,
        source: &FiniteMeasureSpace<T>,
        target: &FiniteMeasureSpace<T>,
        inp: bool,
    ) -> MeasurableMap<T> {
        let all: Vec<usize> = (0..target.num_atoms()).collect();
        let nonnull: Vec<usize> = all.iter().copied().filter(|&b| !target.weight(b).is_zero()).collect();
        let mut point_fn = vec![0; source.num_points()];
        for s in 0..source.num_atoms() {
            let choices = if inp && !source.weight(s).is_zero() { &nonnull } else { &all };
            let b = choices[self.rng.random_range(0..choices.len())];
            let members = target.atom_members(b);
            for &p in source.atom_members(s) {
                point_fn[p] = members[self.rng.random_range(0..members.len())];
            }
        }
        MeasurableMap::from_point_indices(source, target, point_fn).expect("atom-first maps are measurable")
    }

    /// Random source, target and map.
    pub fn instance<T: Scalar>(&mut self) -> MeasurableMap<T> {
        let source = self.space("s");
        let target = self.space("t");
        self.map(&source, &target, false)
    }

    /// Like [`instance`](Self::instance) but the target has a null atom.
    pub fn instance_with_null_target<T: Scalar>(&mut self) -> MeasurableMap<T> {
        let source = self.space("s");
        let target = self.space_with_null("t");
        self.map(&source, &target, false)
    }

    /// Composable inverse-nil-preserving `f: X₁ → X₂`, `g: X₂ → X₃`.
    pub fn composable_pair<T: Scalar>(&mut self) -> (MeasurableMap<T>, MeasurableMap<T>) {
        let x1 = self.space("s");
        let x2 = self.space_with_mass("m");
        let x3 = self.space_with_mass("t");
        let f = self.map(&x1, &x2, true);
        let g = self.map(&x2, &x3, true);
        (f, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::map_to_doc;

    #[test]
    fn reproducible() {
        let a: MeasurableMap<i64> = InstanceGenerator::new(7, 3, GeneratorConfig::default()).instance();
        let b: MeasurableMap<i64> = InstanceGenerator::new(7, 3, GeneratorConfig::default()).instance();
        assert_eq!(map_to_doc(&a), map_to_doc(&b));
        let c: MeasurableMap<i64> = InstanceGenerator::new(7, 4, GeneratorConfig::default()).instance();
        assert_ne!(map_to_doc(&a), map_to_doc(&c));
    }

    #[test]
    fn respects_bounds() {
        for trial in 0..200 {
            let mut g = InstanceGenerator::new(11, trial, GeneratorConfig::default());
            let m: MeasurableMap<i64> = g.instance_with_null_target();
            assert!((1..=8).contains(&m.source().num_atoms()));
            assert!(!m.target().null_atoms().is_empty());
            let (f, h): (MeasurableMap<i64>, MeasurableMap<i64>) = g.composable_pair();
            assert!(f.is_inverse_nil_preserving() && h.is_inverse_nil_preserving());
            assert_eq!(f.target(), h.source());
        }
    }
}
