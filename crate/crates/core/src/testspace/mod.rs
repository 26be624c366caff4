//! Test spaces and testables over finite sets.
//!
//! A test space is a covered, irredundant family of subsets of a universe.
//! Its complement consists of the maximal partial transversals: subsets
//! meeting every test in at most one element, maximal with that property.
//! (For partitions these are exactly the one-per-block transversals; for
//! overlapping tests the maximal sets may miss some tests and have different
//! sizes.) A testable is a test space fixed by the double complement.
//!
//! Operationally the complement is a maximal-independent-set enumeration:
//! two elements conflict when some test contains both, and the admissible
//! subsets are exactly the independent sets of that conflict graph.

mod structure;

pub use structure::{
    complementary_bases, enumerate_vectors, par, star, tensor, unit_object, ComplementaryBases,
    StructureDiagnostic, VectorClass, VectorInfo,
};

use serde::{Deserialize, Serialize};

use crate::bitset::{maximal_cliques, BitSet};
use crate::error::{Error, Result};
use crate::finrel::{FinRel, FinSet};

// ---------------------------------------------------------------------------
// TestSpace
// ---------------------------------------------------------------------------

/// A covered, irredundant family of nonempty subsets of a finite universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSpace {
    universe: FinSet,
    /// Canonically sorted test bitsets over the universe order.
    tests: Vec<BitSet>,
}

impl TestSpace {
    pub fn new(universe: FinSet, mut tests: Vec<BitSet>) -> Result<Self> {
        tests.sort();
        tests.dedup();
        let n = universe.len();
        let mut cover = BitSet::new(n);
        for t in &tests {
            if t.len() != n {
                return Err(Error::invalid("test space", "test width differs from universe"));
            }
            if t.is_empty() {
                return Err(Error::invalid("test space", "empty test"));
            }
            cover.union_with(t);
        }
        if cover != BitSet::full(n) {
            let missing: Vec<&String> = cover
                .negate()
                .iter()
                .map(|i| &universe.elements[i])
                .collect();
            return Err(Error::invalid(
                "test space",
                format!("not covered: {missing:?} lie in no test"),
            ));
        }
        for (i, a) in tests.iter().enumerate() {
            for b in tests[i + 1..].iter() {
                if a.is_subset(b) || b.is_subset(a) {
                    return Err(Error::invalid(
                        "test space",
                        format!(
                            "not irredundant: {:?} and {:?} are nested",
                            names_of(&universe, a),
                            names_of(&universe, b)
                        ),
                    ));
                }
            }
        }
        Ok(TestSpace { universe, tests })
    }

    pub fn from_named(universe: FinSet, named_tests: &[Vec<String>]) -> Result<Self> {
        let mut tests = Vec::with_capacity(named_tests.len());
        for t in named_tests {
            let mut bits = BitSet::new(universe.len());
            for e in t {
                let i = universe.index_of(e).ok_or_else(|| Error::invalid(
                    "test space",
                    format!("test element {e:?} not in universe"),
                ))?;
                bits.insert(i);
            }
            tests.push(bits);
        }
        TestSpace::new(universe, tests)
    }

    pub fn universe(&self) -> &FinSet {
        &self.universe
    }

    pub fn tests(&self) -> &[BitSet] {
        &self.tests
    }

    pub fn named_tests(&self) -> Vec<Vec<String>> {
        self.tests
            .iter()
            .map(|t| names_of(&self.universe, t))
            .collect()
    }

    pub fn has_test(&self, t: &BitSet) -> bool {
        self.tests.binary_search(t).is_ok()
    }

    pub fn is_partition(&self) -> bool {
        let n = self.universe.len();
        self.tests.iter().map(|t| t.count()).sum::<usize>() == n
    }

    /// The complement family: maximal subsets meeting every test at most
    /// once. Always covered and irredundant over a guarded universe.
    pub fn complement(&self, guard: usize) -> Result<Vec<BitSet>> {
        let n = self.universe.len();
        if n > guard {
            return Err(Error::GuardExceeded {
                op: "complement",
                what: format!("universe {}", self.universe.name),
                size: n,
                guard,
            });
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        // conflict graph: x ~ y when some test contains both
        let mut conflicts = vec![BitSet::new(n); n];
        for t in &self.tests {
            for i in t.iter() {
                conflicts[i].union_with(t);
            }
        }
        // admissible subsets are the independent sets of the conflict graph,
        // i.e. the cliques of its complement
        let adj: Vec<BitSet> = (0..n)
            .map(|i| {
                let mut a = conflicts[i].negate();
                a.remove(i);
                a
            })
            .collect();
        Ok(maximal_cliques(&adj))
    }
}

fn names_of(universe: &FinSet, bits: &BitSet) -> Vec<String> {
    bits.iter().map(|i| universe.elements[i].clone()).collect()
}

// ---------------------------------------------------------------------------
// Testable
// ---------------------------------------------------------------------------

/// Evidence produced by `is_testable`: the complement, the double
/// complement, and which clauses held.
#[derive(Clone, Debug, Serialize)]
pub struct TestableCertificate {
    pub complement: Vec<Vec<String>>,
    pub double_complement: Vec<Vec<String>>,
    pub complement_is_test_space: bool,
    pub double_complement_equals_input: bool,
}

/// Check `α⊥⊥ = α` with the complement as a witness.
pub fn is_testable(space: &TestSpace, guard: usize) -> Result<(bool, TestableCertificate)> {
    let comp = space.complement(guard)?;
    let comp_space = TestSpace::new(space.universe().clone(), comp.clone());
    match comp_space {
        Err(_) if space.universe.is_empty() => {
            // the empty space is self-complementary by convention
            Ok((
                true,
                TestableCertificate {
                    complement: Vec::new(),
                    double_complement: Vec::new(),
                    complement_is_test_space: true,
                    double_complement_equals_input: true,
                },
            ))
        }
        Err(e) => Err(e),
        Ok(comp_space) => {
            let double = comp_space.complement(guard)?;
            let ok = double == space.tests;
            Ok((
                ok,
                TestableCertificate {
                    complement: comp_space.named_tests(),
                    double_complement: double
                        .iter()
                        .map(|t| names_of(&space.universe, t))
                        .collect(),
                    complement_is_test_space: true,
                    double_complement_equals_input: ok,
                },
            ))
        }
    }
}

/// A test space together with its cached complement, fixed by the double
/// complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Testable {
    space: TestSpace,
    complement: TestSpace,
}

impl Testable {
    pub fn try_new(space: TestSpace, guard: usize) -> Result<Self> {
        if space.universe.is_empty() {
            let complement = space.clone();
            return Ok(Testable { space, complement });
        }
        let (ok, cert) = is_testable(&space, guard)?;
        if !ok {
            return Err(Error::invalid(
                "testable",
                format!(
                    "double complement differs from input: got {:?}",
                    cert.double_complement
                ),
            ));
        }
        let complement = TestSpace::from_named(space.universe.clone(), &cert.complement)?;
        Ok(Testable { space, complement })
    }

    pub fn space(&self) -> &TestSpace {
        &self.space
    }

    pub fn complement_space(&self) -> &TestSpace {
        &self.complement
    }

    pub fn universe(&self) -> &FinSet {
        self.space.universe()
    }

    /// Swap a testable with its complement; valid by `α⊥⊥ = α`.
    pub fn dual(&self) -> Testable {
        Testable {
            space: self.complement.clone(),
            complement: self.space.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// TestableObject
// ---------------------------------------------------------------------------

/// An object `<X, α>`: a testable with optional product provenance used to
/// classify vectors of tensor/par objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestableObject {
    pub testable: Testable,
    pub factors: Option<Box<(TestableObject, TestableObject)>>,
}

impl TestableObject {
    pub fn plain(testable: Testable) -> Self {
        TestableObject {
            testable,
            factors: None,
        }
    }

    pub fn universe(&self) -> &FinSet {
        self.testable.universe()
    }

    pub fn tests(&self) -> &[BitSet] {
        self.testable.space().tests()
    }

    pub fn complement_tests(&self) -> &[BitSet] {
        self.testable.complement_space().tests()
    }
}

// ---------------------------------------------------------------------------
// Clique testables
// ---------------------------------------------------------------------------

/// The testable whose tests are the maximal cliques of a reflexive symmetric
/// relation.
pub fn clique_testable(r: &FinRel, guard: usize) -> Result<Testable> {
    if !r.dom().same_elements(r.cod()) {
        return Err(Error::BoundaryMismatch {
            op: "clique_testable",
            left: r.dom().name.clone(),
            right: r.cod().name.clone(),
        });
    }
    let n = r.dom().len();
    for i in 0..n {
        if !r.contains(i, i) {
            return Err(Error::invalid(
                "clique relation",
                format!("not reflexive at {:?}", r.dom().elements[i]),
            ));
        }
    }
    for &(i, j) in r.index_pairs() {
        if !r.contains(j, i) {
            return Err(Error::invalid(
                "clique relation",
                format!(
                    "not symmetric at ({:?},{:?})",
                    r.dom().elements[i],
                    r.dom().elements[j]
                ),
            ));
        }
    }
    let adj: Vec<BitSet> = (0..n)
        .map(|i| {
            let mut a = r.row(i).clone();
            a.remove(i);
            a
        })
        .collect();
    let cliques = maximal_cliques(&adj);
    let space = TestSpace::new(r.dom().clone(), cliques)?;
    Testable::try_new(space, guard)
}

// ---------------------------------------------------------------------------
// Morphism check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismCheck {
    pub pass: bool,
    /// First violating test on the forward side, if any.
    pub forward_violation: Option<Vec<String>>,
    /// First violating complement test on the converse side, if any.
    pub backward_violation: Option<Vec<String>>,
}

/// `α |r| β` iff every direct image of an α-test is a β-test and every
/// converse image of a β⊥-test is an α⊥-test.
pub fn morphism_check(r: &FinRel, a: &TestableObject, b: &TestableObject) -> Result<MorphismCheck> {
    if !r.dom().same_elements(a.universe()) {
        return Err(Error::BoundaryMismatch {
            op: "morphism_check",
            left: r.dom().name.clone(),
            right: a.universe().name.clone(),
        });
    }
    if !r.cod().same_elements(b.universe()) {
        return Err(Error::BoundaryMismatch {
            op: "morphism_check",
            left: r.cod().name.clone(),
            right: b.universe().name.clone(),
        });
    }
    let mut forward_violation = None;
    for t in a.tests() {
        let img = r.image(t);
        if !b.testable.space().has_test(&img) {
            forward_violation = Some(names_of(a.universe(), t));
            break;
        }
    }
    let rop = r.dagger();
    let mut backward_violation = None;
    for u in b.complement_tests() {
        let img = rop.image(u);
        if !a.testable.complement_space().has_test(&img) {
            backward_violation = Some(names_of(b.universe(), u));
            break;
        }
    }
    Ok(MorphismCheck {
        pass: forward_violation.is_none() && backward_violation.is_none(),
        forward_violation,
        backward_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_GUARD;

    pub(crate) fn universe(names: &[&str]) -> FinSet {
        FinSet::new("X", names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    pub(crate) fn space(names: &[&str], tests: &[&[&str]]) -> TestSpace {
        let u = universe(names);
        let named: Vec<Vec<String>> = tests
            .iter()
            .map(|t| t.iter().map(|s| s.to_string()).collect())
            .collect();
        TestSpace::from_named(u, &named).unwrap()
    }

    #[test]
    fn crudest_and_finest_are_dual() {
        let crudest = space(&["0", "1"], &[&["0", "1"]]);
        let comp = crudest.complement(DEFAULT_GUARD).unwrap();
        let names: Vec<Vec<String>> = comp
            .iter()
            .map(|t| names_of(crudest.universe(), t))
            .collect();
        assert_eq!(names, vec![vec!["0"], vec!["1"]]);
    }

    #[test]
    fn partition_complement_is_transversal_family() {
        let beta = space(&["0", "1", "2", "3"], &[&["0", "1"], &["2", "3"]]);
        let comp = beta.complement(DEFAULT_GUARD).unwrap();
        let names: Vec<Vec<String>> = comp.iter().map(|t| names_of(beta.universe(), t)).collect();
        assert_eq!(
            names,
            vec![
                vec!["0", "2"],
                vec!["0", "3"],
                vec!["1", "2"],
                vec!["1", "3"]
            ]
        );
    }

    #[test]
    fn overlapping_tests_give_uneven_complement() {
        let alpha = space(&["0", "1", "2"], &[&["0", "1"], &["1", "2"]]);
        let comp = alpha.complement(DEFAULT_GUARD).unwrap();
        let names: Vec<Vec<String>> = comp.iter().map(|t| names_of(alpha.universe(), t)).collect();
        assert_eq!(names, vec![vec!["0", "2"], vec!["1"]]);
        let (ok, cert) = is_testable(&alpha, DEFAULT_GUARD).unwrap();
        assert!(ok, "{cert:?}");
    }

    #[test]
    fn irredundancy_is_rejected_before_complementation() {
        let u = universe(&["0", "1"]);
        let err = TestSpace::from_named(u, &[vec!["0".into()], vec!["0".into(), "1".into()]])
            .unwrap_err();
        assert!(err.to_string().contains("irredundant"), "{err}");
    }

    #[test]
    fn empty_universe_is_self_complementary() {
        let u = FinSet::new("X", vec![]).unwrap();
        let s = TestSpace::new(u, vec![]).unwrap();
        assert!(s.complement(DEFAULT_GUARD).unwrap().is_empty());
        let t = Testable::try_new(s, DEFAULT_GUARD).unwrap();
        assert_eq!(t.space(), t.complement_space());
    }

    #[test]
    fn clique_testable_discrete_and_total() {
        let u = universe(&["0", "1", "2"]);
        let id = FinRel::identity(&u);
        let t = clique_testable(&id, DEFAULT_GUARD).unwrap();
        assert_eq!(t.space().named_tests(), vec![vec!["0"], vec!["1"], vec!["2"]]);

        let total_pairs: Vec<(String, String)> = u
            .elements
            .iter()
            .flat_map(|a| u.elements.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let total = FinRel::new(u.clone(), u.clone(), &total_pairs).unwrap();
        let t = clique_testable(&total, DEFAULT_GUARD).unwrap();
        assert_eq!(t.space().named_tests(), vec![vec!["0", "1", "2"]]);
    }

    #[test]
    fn clique_testable_path_graph() {
        let u = universe(&["0", "1", "2"]);
        let pairs: Vec<(String, String)> = [
            ("0", "0"), ("1", "1"), ("2", "2"),
            ("0", "1"), ("1", "0"), ("1", "2"), ("2", "1"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let r = FinRel::new(u.clone(), u.clone(), &pairs).unwrap();
        let t = clique_testable(&r, DEFAULT_GUARD).unwrap();
        assert_eq!(t.space().named_tests(), vec![vec!["0", "1"], vec!["1", "2"]]);
    }

    #[test]
    fn clique_testable_rejects_asymmetric() {
        let u = universe(&["0", "1"]);
        let pairs: Vec<(String, String)> = [("0", "0"), ("1", "1"), ("0", "1")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let r = FinRel::new(u.clone(), u.clone(), &pairs).unwrap();
        assert!(clique_testable(&r, DEFAULT_GUARD).is_err());
    }

    #[test]
    fn identity_is_a_morphism() {
        let t = Testable::try_new(space(&["0", "1", "2"], &[&["0", "1"], &["1", "2"]]), 16).unwrap();
        let obj = TestableObject::plain(t);
        let id = FinRel::identity(obj.universe());
        assert!(morphism_check(&id, &obj, &obj).unwrap().pass);
    }

    #[test]
    fn empty_relation_fails_with_diagnostic() {
        let t = Testable::try_new(space(&["0", "1"], &[&["0"], &["1"]]), 16).unwrap();
        let obj = TestableObject::plain(t);
        let r = FinRel::empty(obj.universe().clone(), obj.universe().clone());
        let check = morphism_check(&r, &obj, &obj).unwrap();
        assert!(!check.pass);
        assert_eq!(check.forward_violation, Some(vec!["0".to_string()]));
    }
}
