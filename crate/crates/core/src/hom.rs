//! The Boolean homomorphism `φ•: [A] ↦ [φ⁻¹A]` induced by a map.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, MeasureAlgebra};
use crate::error::{Error, Result};
use crate::morphism::MeasurableMap;
use crate::scalar::Scalar;

/// `φ•` from the target algebra to the source algebra.
///
/// The domain algebra is atomic, so the hom is stored as the image of each
/// domain atom and applied as a join over an element's atoms.
#[derive(Clone)]
pub struct BooleanHom<T: Scalar> {
    map: MeasurableMap<T>,
    domain: MeasureAlgebra<T>,
    codomain: MeasureAlgebra<T>,
    atom_action: Vec<AlgebraElement<T>>,
}

impl<T: Scalar> fmt::Debug for BooleanHom<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.domain.nonnull_atoms().iter().zip(&self.atom_action))
            .finish()
    }
}

impl<T: Scalar> BooleanHom<T> {
    /// Induce `φ•`; fails when some null target atom carries pushforward mass.
    pub fn induced(map: &MeasurableMap<T>) -> Result<Self> {
        if let Some(b) = map.inp_violation() {
            return Err(Error::NotInverseNilPreserving { target_atom: b });
        }
        let domain = MeasureAlgebra::build(map.target());
        let codomain = MeasureAlgebra::build(map.source());
        let atom_action = domain
            .nonnull_atoms()
            .iter()
            .map(|&b| codomain.project_bits(map.atom_preimage(b)))
            .collect();
        Ok(BooleanHom {
            map: map.clone(),
            domain,
            codomain,
            atom_action,
        })
    }

    /// Replace the atom images, e.g. to build a deliberately broken hom for testing checkers.
    pub fn with_atom_action(&self, atom_action: Vec<AlgebraElement<T>>) -> Result<Self> {
        if atom_action.len() != self.domain.num_atoms() {
            return Err(Error::ArityMismatch {
                what: "atom images",
                expected: self.domain.num_atoms(),
                found: atom_action.len(),
            });
        }
        if atom_action.iter().any(|e| e.algebra() != &self.codomain) {
            return Err(Error::ForeignElement);
        }
        Ok(BooleanHom {
            atom_action,
            ..self.clone()
        })
    }

    pub fn map(&self) -> &MeasurableMap<T> {
        &self.map
    }

    /// The target space's algebra.
    pub fn domain(&self) -> &MeasureAlgebra<T> {
        &self.domain
    }

    /// The source space's algebra.
    pub fn codomain(&self) -> &MeasureAlgebra<T> {
        &self.codomain
    }

    /// Image of each domain atom, in the order of `domain().nonnull_atoms()`.
    pub fn atom_action(&self) -> &[AlgebraElement<T>] {
        &self.atom_action
    }

    pub fn apply(&self, elem: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        if elem.algebra() != &self.domain {
            return Err(Error::ForeignElement);
        }
        let mut out = self.codomain.zero();
        for (pos, &atom) in self.domain.nonnull_atoms().iter().enumerate() {
            if elem.atoms().contains(atom) {
                out = out.join(&self.atom_action[pos])?;
            }
        }
        Ok(out)
    }

    /// `[φ⁻¹A]` for the lift `A` of `elem`, computed from the point function.
    pub fn preimage_class(&self, elem: &AlgebraElement<T>) -> Result<AlgebraElement<T>> {
        let set = self.domain.lift(elem)?;
        self.codomain.project(&self.map.preimage(&set)?)
    }
}

/// One failed law with the elements that witness the failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawViolation {
    pub law: String,
    pub witness: Value,
}

/// Outcome of an exhaustive law check.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LawReport {
    pub checked: u64,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Record the first witness of each law.
    pub(crate) fn fail(&mut self, law: &str, witness: Value) {
        if !self.violations.iter().any(|v| v.law == law) {
            self.violations.push(LawViolation {
                law: law.to_string(),
                witness,
            });
        }
    }
}

pub(crate) fn elem_json<T: Scalar>(e: &AlgebraElement<T>) -> Value {
    json!(e.atom_indices())
}

/// Exhaustively check that `hom` preserves `0`, `1`, joins, meets and
/// complements, and that it agrees with point-level preimages.
pub fn check_hom_laws<T: Scalar>(hom: &BooleanHom<T>) -> LawReport {
    let mut report = LawReport::default();
    let dom = hom.domain();
    let cod = hom.codomain();
    let elements: Vec<_> = dom.elements().collect();
    let images: Vec<_> = elements
        .iter()
        .map(|e| hom.apply(e).expect("domain element"))
        .collect();

    if !hom.apply(&dom.zero()).unwrap().is_zero() {
        report.fail("preserves_zero", json!({ "a": [] }));
    }
    if hom.apply(&dom.top()).unwrap() != cod.top() {
        report.fail("preserves_top", json!({ "a": elem_json(&dom.top()) }));
    }
    report.checked += 2;

    for (a, fa) in elements.iter().zip(&images) {
        if fa.complement() != hom.apply(&a.complement()).unwrap() {
            report.fail("preserves_complement", json!({ "a": elem_json(a) }));
        }
        if *fa != hom.preimage_class(a).unwrap() {
            report.fail("matches_preimage", json!({ "a": elem_json(a) }));
        }
        report.checked += 2;
        for (b, fb) in elements.iter().zip(&images) {
            let join = hom.apply(&a.join(b).unwrap()).unwrap();
            if join != fa.join(fb).unwrap() {
                report.fail("preserves_join", json!({ "a": elem_json(a), "b": elem_json(b) }));
            }
            let meet = hom.apply(&a.meet(b).unwrap()).unwrap();
            if meet != fa.meet(fb).unwrap() {
                report.fail("preserves_meet", json!({ "a": elem_json(a), "b": elem_json(b) }));
            }
            report.checked += 2;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ExtRatio;
    use crate::space::FiniteMeasureSpace;

    type E = ExtRatio<i64>;

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

    fn phi() -> MeasurableMap<i64> {
        MeasurableMap::new(&s1(), &s2(), [("p1", "q1"), ("p2", "q1"), ("p3", "q1"), ("p4", "q2")]).unwrap()
    }

    #[test]
    fn induced_examples() {
        let hom = BooleanHom::induced(&phi()).unwrap();
        assert_eq!(hom.atom_action()[0].atom_indices(), vec![0, 1]);
        assert!(hom.atom_action()[1].is_zero());
        let psi = MeasurableMap::new(&s2(), &s1(), [("q1", "p4"), ("q2", "p1")]).unwrap();
        assert_eq!(
            BooleanHom::induced(&psi).unwrap_err(),
            Error::NotInverseNilPreserving { target_atom: 2 }
        );
    }

    #[test]
    fn apply_examples() {
        let hom = BooleanHom::induced(&phi()).unwrap();
        let top = hom.domain().top();
        assert_eq!(hom.apply(&top).unwrap().atom_indices(), vec![0, 1]);
        assert!(hom.apply(&hom.domain().zero()).unwrap().is_zero());
        let id = BooleanHom::induced(&MeasurableMap::identity(&s1())).unwrap();
        for e in id.domain().elements() {
            assert_eq!(id.apply(&e).unwrap(), e);
        }
        assert_eq!(hom.apply(&id.domain().top()).unwrap_err(), Error::ForeignElement);
    }

    #[test]
    fn laws_hold_for_induced_homs() {
        assert!(check_hom_laws(&BooleanHom::induced(&phi()).unwrap()).passed());
        assert!(check_hom_laws(&BooleanHom::induced(&MeasurableMap::identity(&s2())).unwrap()).passed());
    }

    fn four_atoms() -> FiniteMeasureSpace<i64> {
        FiniteMeasureSpace::discrete(&["a", "b", "c", "d"], vec![q(1, 1), q(2, 1), q(3, 1), q(1, 4)]).unwrap()
    }

    #[test]
    fn swapped_images_break_preimage_agreement() {
        let t = s2();
        let map = MeasurableMap::new(&four_atoms(), &t, [("a", "q1"), ("b", "q1"), ("c", "q2"), ("d", "q2")])
            .unwrap();
        let hom = BooleanHom::induced(&map).unwrap();
        let mut action = hom.atom_action().to_vec();
        action.swap(0, 1);
        let broken = hom.with_atom_action(action).unwrap();
        let report = check_hom_laws(&broken);
        let laws: Vec<&str> = report.violations.iter().map(|v| v.law.as_str()).collect();
        assert_eq!(laws, vec!["matches_preimage"]);
        assert_eq!(report.violations[0].witness, json!({ "a": [0] }));
    }

    #[test]
    fn duplicated_image_breaks_complement_law() {
        let t = s2();
        let map = MeasurableMap::new(&four_atoms(), &t, [("a", "q1"), ("b", "q1"), ("c", "q2"), ("d", "q2")])
            .unwrap();
        let hom = BooleanHom::induced(&map).unwrap();
        let action = vec![hom.atom_action()[0].clone(), hom.atom_action()[0].clone()];
        let broken = hom.with_atom_action(action).unwrap();
        let report = check_hom_laws(&broken);
        let complement = report
            .violations
            .iter()
            .find(|v| v.law == "preserves_complement")
            .expect("complement law must fail");
        assert_eq!(complement.witness, json!({ "a": [] }));
        assert!(report.violations.iter().any(|v| v.law == "preserves_top"));
    }
}
