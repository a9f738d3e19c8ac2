//! Lipschitz constant of `φ•` for the symmetric-difference metrics.
//!
//! Two independent routes. [`lipschitz_fast`] maximizes `μ̄₁(φ•a)/μ̄₂(a)`
//! over single atoms `a`. [`lipschitz_bruteforce`] evaluates
//! `ρ₁(φ•a, φ•b)/ρ₂(a, b)` on every pair of finite elements, computing `φ•`
//! from the point function and never consulting the pushforward, the induced
//! hom, or compression code.

use std::cmp::Ordering;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{AlgebraElement, MeasureAlgebra};
use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::hom::BooleanHom;
use crate::morphism::{CompressionResult, MeasurableMap};
use crate::scalar::Scalar;
use crate::space::FiniteMeasureSpace;

/// Default cap on non-null target atoms for the pair enumeration.
pub const DEFAULT_BUDGET: usize = 12;

/// Hard ceiling regardless of the requested budget.
pub const MAX_BUDGET: usize = 24;

/// `sup_{a ≠ 0 finite} μ̄₁(φ•a)/μ̄₂(a)`, attained on atoms.
pub fn lipschitz_fast<T: Scalar>(map: &MeasurableMap<T>) -> CompressionResult<T> {
    let hom = match BooleanHom::induced(map) {
        Ok(h) => h,
        Err(_) => return CompressionResult::Unbounded,
    };
    let domain = hom.domain();
    let mut best = Ratio::zero();
    for atom in domain.fin_atoms() {
        let a = domain.atom(atom).expect("non-null atom");
        let image = hom.apply(&a).expect("domain element");
        let (Some(num), Some(den)) = (image.mu_bar().into_finite(), a.mu_bar().into_finite()) else {
            return CompressionResult::Unbounded;
        };
        let ratio = num / den;
        if ratio > best {
            best = ratio;
        }
    }
    CompressionResult::Bounded(best)
}

/// What the exhaustive pair search found.
#[derive(Clone, Debug)]
pub struct BruteForceOutcome<T: Scalar> {
    pub result: CompressionResult<T>,
    /// Lexicographically first maximizing pair `(a, b)` with `a` after `b`.
    pub witness: Option<(AlgebraElement<T>, AlgebraElement<T>)>,
    /// Some maximizing pair has `b = [∅]`.
    pub attained_at_empty: bool,
    /// A finite target element whose image has infinite measure.
    pub fin_violation: Option<AlgebraElement<T>>,
    pub pairs_checked: u64,
}

/// Integer numerators of the atom weights over a common denominator.
struct Scaled<T> {
    numer: Vec<T>,
    denom: T,
}

fn scale_weights<T: Scalar>(space: &FiniteMeasureSpace<T>) -> Scaled<T> {
    let denom = space
        .weights()
        .iter()
        .filter_map(|w| w.finite())
        .fold(T::one(), |acc, w| acc.lcm(w.denom()));
    let numer = space
        .weights()
        .iter()
        .map(|w| match w.finite() {
            Some(r) => r.numer().clone() * (denom.clone() / r.denom().clone()),
            None => T::zero(),
        })
        .collect();
    Scaled { numer, denom }
}

#[derive(Clone)]
struct Best<T> {
    numer: T,
    denom: T,
    a: u64,
    b: u64,
    at_empty: bool,
    pairs: u64,
}

fn lex_masks(x: u64, y: u64) -> Ordering {
    let bits = |m: u64| {
        let mut m = m;
        std::iter::from_fn(move || {
            (m != 0).then(|| {
                let b = m.trailing_zeros();
                m &= m - 1;
                b
            })
        })
    };
    bits(x).cmp(bits(y))
}

impl<T: Scalar> Best<T> {
    fn consider(&mut self, numer: T, denom: T, a: u64, b: u64) {
        let (hi, lo) = if lex_masks(a, b) == Ordering::Greater { (a, b) } else { (b, a) };
        self.pairs += 1;
        let ord = (numer.clone() * self.denom.clone()).cmp(&(self.numer.clone() * denom.clone()));
        match ord {
            Ordering::Greater => {
                *self = Best {
                    numer,
                    denom,
                    a: hi,
                    b: lo,
                    at_empty: lo == 0,
                    pairs: self.pairs,
                };
            }
            Ordering::Equal => {
                self.at_empty |= lo == 0;
                if (hi, lo) != (self.a, self.b) && lex_pair(hi, lo, self.a, self.b) == Ordering::Less {
                    self.a = hi;
                    self.b = lo;
                }
            }
            Ordering::Less => {}
        }
    }

    fn combine(self, other: Self) -> Self {
        if other.pairs == 0 {
            return Best { pairs: self.pairs, ..self };
        }
        if self.pairs == 0 {
            return Best { pairs: other.pairs, ..other };
        }
        let pairs = self.pairs + other.pairs;
        let ord = (self.numer.clone() * other.denom.clone()).cmp(&(other.numer.clone() * self.denom.clone()));
        let mut out = match ord {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                let at_empty = self.at_empty || other.at_empty;
                let mut pick = if lex_pair(self.a, self.b, other.a, other.b) != Ordering::Greater {
                    self
                } else {
                    other
                };
                pick.at_empty = at_empty;
                pick
            }
        };
        out.pairs = pairs;
        out
    }
}

fn lex_pair(a1: u64, b1: u64, a2: u64, b2: u64) -> Ordering {
    lex_masks(a1, a2).then_with(|| lex_masks(b1, b2))
}

/// Exhaustive `max ρ₁(φ•a, φ•b)/ρ₂(a, b)` over pairs of distinct finite elements.
pub fn lipschitz_bruteforce<T: Scalar>(map: &MeasurableMap<T>, budget: usize) -> Result<BruteForceOutcome<T>> {
    let source = map.source();
    let target = map.target();
    let target_alg = MeasureAlgebra::build(target);
    let source_alg = MeasureAlgebra::build(source);
    let budget = budget.min(MAX_BUDGET);
    if target_alg.num_atoms() > budget {
        return Err(Error::BudgetExceeded {
            atoms: target_alg.num_atoms(),
            budget,
        });
    }

    let unbounded = |fin_violation| BruteForceOutcome {
        result: CompressionResult::Unbounded,
        witness: None,
        attained_at_empty: false,
        fin_violation,
        pairs_checked: 0,
    };

    // null ideal: the preimage of every null target point must be null
    let null_mass_hit = (0..source.num_points()).any(|p| {
        let t = target.atom_of_point(map.point_fn()[p]);
        target.weight(t).is_zero() && !source.weight(source.atom_of_point(p)).is_zero()
    });
    if null_mass_hit {
        return Ok(unbounded(None));
    }

    let fin = target_alg.fin_atoms();
    let n = fin.len();
    let mut position = vec![None; target.num_atoms()];
    for (i, &a) in fin.iter().enumerate() {
        position[a] = Some(i);
    }
    let point_pos: Vec<Option<usize>> = map
        .point_fn()
        .iter()
        .map(|&q| position[target.atom_of_point(q)])
        .collect();

    // φ•a for every finite a, straight from the point function
    let nonnull_src = source_alg.nonnull_atoms();
    let image_of = |mask: u64| {
        let mut atoms = AtomSet::empty(source.num_atoms());
        for (p, pos) in point_pos.iter().enumerate() {
            if let Some(i) = pos {
                if mask >> i & 1 == 1 {
                    atoms.insert(source.atom_of_point(p));
                }
            }
        }
        let nonnull = AtomSet::from_indices(source.num_atoms(), nonnull_src.iter().copied());
        atoms.intersection(&nonnull)
    };
    let size = 1u64 << n;
    let images: Vec<AtomSet> = (0..size).into_par_iter().map(image_of).collect();
    if let Some(bad) = (0..size).find(|&m| images[m as usize].iter().any(|s| source.weight(s).is_infinite())) {
        return Ok(unbounded(Some(target_alg.element_from_mask(&fin, bad))));
    }

    let w1 = scale_weights(source);
    let w2 = scale_weights(target);
    let target_measure: Vec<T> = (0..size)
        .map(|m| {
            (0..n)
                .filter(|i| m >> i & 1 == 1)
                .fold(T::zero(), |acc, i| acc + w2.numer[fin[i]].clone())
        })
        .collect();
    let source_distance = |x: &AtomSet, y: &AtomSet| {
        let mut sum = T::zero();
        for (wi, (wx, wy)) in x.words().iter().zip(y.words()).enumerate() {
            let mut bits = wx ^ wy;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                sum = sum + w1.numer[wi * 64 + b].clone();
            }
        }
        sum
    };

    let empty = Best {
        numer: T::zero(),
        denom: T::one(),
        a: 0,
        b: 0,
        at_empty: false,
        pairs: 0,
    };
    let best = (0..size)
        .into_par_iter()
        .map(|a| {
            let mut best = empty.clone();
            for b in 0..a {
                let numer = source_distance(&images[a as usize], &images[b as usize]);
                let denom = target_measure[(a ^ b) as usize].clone();
                best.consider(numer, denom, a, b);
            }
            best
        })
        .reduce(|| empty.clone(), Best::combine);

    if best.pairs == 0 {
        return Ok(BruteForceOutcome {
            result: CompressionResult::Bounded(Ratio::zero()),
            witness: None,
            attained_at_empty: false,
            fin_violation: None,
            pairs_checked: 0,
        });
    }
    let value = Ratio::new(best.numer * w2.denom, best.denom * w1.denom);
    Ok(BruteForceOutcome {
        result: CompressionResult::Bounded(value),
        witness: Some((
            target_alg.element_from_mask(&fin, best.a),
            target_alg.element_from_mask(&fin, best.b),
        )),
        attained_at_empty: best.at_empty,
        fin_violation: None,
        pairs_checked: best.pairs,
    })
}
