//! Multitestables: testables with positive integer multiplicities, their
//! étale presentations, and span-valued morphisms between them.
//!
//! A morphism over a base relation `r` is a pair of relations between étale
//! sets making two squares commute: the étale projection followed by the
//! direct image must agree with the relation followed by the projection,
//! and dually for complements against the converse of `r`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::finrel::{pair_name, FinRel, FinSet};
use crate::report::{Failure, VerificationReport};
use crate::testspace::{par, tensor, Testable, TestSpace, TestableObject};

// ---------------------------------------------------------------------------
// MultiTestable
// ---------------------------------------------------------------------------

/// A testable together with a positive multiplicity for each universe
/// element. Zero and negative multiplicities are rejected: coveredness
/// already forces every element to occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTestable {
    testable: Testable,
    multiplicity: BTreeMap<String, u32>,
}

impl MultiTestable {
    pub fn new(testable: Testable, multiplicity: BTreeMap<String, u32>) -> Result<Self> {
        for e in &testable.universe().elements {
            match multiplicity.get(e) {
                None => {
                    return Err(Error::Missing {
                        what: "multiplicity",
                        name: e.clone(),
                    })
                }
                Some(0) => {
                    return Err(Error::invalid(
                        "multitestable",
                        format!("multiplicity of {e:?} must be positive"),
                    ))
                }
                Some(_) => {}
            }
        }
        for e in multiplicity.keys() {
            if !testable.universe().contains(e) {
                return Err(Error::invalid(
                    "multitestable",
                    format!("multiplicity for unknown element {e:?}"),
                ));
            }
        }
        Ok(MultiTestable {
            testable,
            multiplicity,
        })
    }

    pub fn uniform(testable: Testable, weight: u32) -> Result<Self> {
        let multiplicity = testable
            .universe()
            .elements
            .iter()
            .map(|e| (e.clone(), weight))
            .collect();
        MultiTestable::new(testable, multiplicity)
    }

    pub fn testable(&self) -> &Testable {
        &self.testable
    }

    pub fn universe(&self) -> &FinSet {
        self.testable.universe()
    }

    pub fn multiplicity(&self) -> &BTreeMap<String, u32> {
        &self.multiplicity
    }

    pub fn weight_of(&self, element: &str) -> u32 {
        self.multiplicity[element]
    }

    /// `A⊥ = <α⊥, ω>`: complement the test space, keep the multiplicities.
    pub fn dual(&self) -> MultiTestable {
        MultiTestable {
            testable: self.testable.dual(),
            multiplicity: self.multiplicity.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Etale form
// ---------------------------------------------------------------------------

/// One point of the étale set: a test, an element of it, an occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EtaleTriple {
    pub test: usize,
    pub element: String,
    pub occurrence: u32,
}

/// The étale presentation `|A| -> ℘X`: the set of triples with its
/// projection to tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleSet {
    triples: Vec<EtaleTriple>,
    /// projection: triple index -> test bitset (over the universe order)
    tests: Vec<BitSet>,
}

impl EtaleSet {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[EtaleTriple] {
        &self.triples
    }

    /// Test of the triple at an index, as a subset of the universe.
    pub fn test_of(&self, index: usize) -> &BitSet {
        &self.tests[self.triples[index].test]
    }
}

/// `|A| = {<a,x,i> | a ∈ α, x ∈ a, i < ω(x)}` in canonical order.
pub fn etale(a: &MultiTestable) -> EtaleSet {
    let space = a.testable.space();
    let universe = a.universe();
    let mut triples = Vec::new();
    for (ti, t) in space.tests().iter().enumerate() {
        for e in t.iter() {
            let name = &universe.elements[e];
            for occ in 0..a.weight_of(name) {
                triples.push(EtaleTriple {
                    test: ti,
                    element: name.clone(),
                    occurrence: occ,
                });
            }
        }
    }
    EtaleSet {
        triples,
        tests: space.tests().to_vec(),
    }
}

/// Closed form for the étale size: `Σ_a Σ_{x∈a} ω(x)`.
pub fn etale_size(a: &MultiTestable) -> usize {
    let universe = a.universe();
    a.testable
        .space()
        .tests()
        .iter()
        .map(|t| {
            t.iter()
                .map(|i| a.weight_of(&universe.elements[i]) as usize)
                .sum::<usize>()
        })
        .sum()
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// A morphism `<r, R, R⊥>`: the base relation, a relation between étale
/// sets, and one between the complements' étale sets (reversed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMorphism {
    pub r: FinRel,
    /// pairs |A| -> |B| by étale index
    pub forward: BTreeSet<(usize, usize)>,
    /// pairs |B⊥| -> |A⊥| by étale index
    pub backward: BTreeSet<(usize, usize)>,
}

fn row_targets(pairs: &BTreeSet<(usize, usize)>, row: usize) -> Vec<usize> {
    pairs
        .iter()
        .filter(|&&(s, _)| s == row)
        .map(|&(_, t)| t)
        .collect()
}

/// Both commuting squares, compared as relations into the powerset: each
/// side is materialized as a set of (étale index, subset) pairs.
pub fn multimorphism_check(
    m: &MultiMorphism,
    a: &MultiTestable,
    b: &MultiTestable,
) -> Result<VerificationReport> {
    if !m.r.dom().same_elements(a.universe()) || !m.r.cod().same_elements(b.universe()) {
        return Err(Error::BoundaryMismatch {
            op: "multimorphism_check",
            left: format!("{} -> {}", m.r.dom().name, m.r.cod().name),
            right: format!("{} -> {}", a.universe().name, b.universe().name),
        });
    }
    let ea = etale(a);
    let eb = etale(b);
    let ea_dual = etale(&a.dual());
    let eb_dual = etale(&b.dual());
    for &(s, t) in &m.forward {
        if s >= ea.len() || t >= eb.len() {
            return Err(Error::invalid("multimorphism", "forward index out of range"));
        }
    }
    for &(s, t) in &m.backward {
        if s >= eb_dual.len() || t >= ea_dual.len() {
            return Err(Error::invalid("multimorphism", "backward index out of range"));
        }
    }

    let mut report = VerificationReport::passing();
    // square 1: A;℘r = R;B as relations |A| -> ℘Y
    for idx in 0..ea.len() {
        let lhs = m.r.image(ea.test_of(idx));
        let rhs: BTreeSet<BitSet> = row_targets(&m.forward, idx)
            .into_iter()
            .map(|t| eb.test_of(t).clone())
            .collect();
        let expected: BTreeSet<BitSet> = [lhs.clone()].into_iter().collect();
        if rhs != expected {
            report.push(Failure::new(
                "forward-square",
                vec![format!("{:?}", ea.triples()[idx])],
                format!(
                    "relation image {:?} vs projected targets {:?}",
                    lhs.indices(),
                    rhs.iter().map(|t| t.indices()).collect::<Vec<_>>()
                ),
            ));
        }
    }
    // square 2: B⊥;℘r^op = R⊥;A⊥ as relations |B⊥| -> ℘X
    let rop = m.r.dagger();
    for idx in 0..eb_dual.len() {
        let lhs = rop.image(eb_dual.test_of(idx));
        let rhs: BTreeSet<BitSet> = row_targets(&m.backward, idx)
            .into_iter()
            .map(|t| ea_dual.test_of(t).clone())
            .collect();
        let expected: BTreeSet<BitSet> = [lhs.clone()].into_iter().collect();
        if rhs != expected {
            report.push(Failure::new(
                "backward-square",
                vec![format!("{:?}", eb_dual.triples()[idx])],
                format!(
                    "converse image {:?} vs projected targets {:?}",
                    lhs.indices(),
                    rhs.iter().map(|t| t.indices()).collect::<Vec<_>>()
                ),
            ));
        }
    }
    Ok(report.finish())
}

/// The identity morphism `<id, id, id>`.
pub fn identity_multimorphism(a: &MultiTestable) -> MultiMorphism {
    let ea = etale(a);
    let ea_dual = etale(&a.dual());
    MultiMorphism {
        r: FinRel::identity(a.universe()),
        forward: (0..ea.len()).map(|i| (i, i)).collect(),
        backward: (0..ea_dual.len()).map(|i| (i, i)).collect(),
    }
}

/// The full canonical morphism over `r`, when one exists: each étale point
/// maps to every point of the matching target test. Returns `None` exactly
/// when `r` is not a testable morphism on the underlying spaces.
pub fn canonical_multimorphism(
    r: &FinRel,
    a: &MultiTestable,
    b: &MultiTestable,
) -> Option<MultiMorphism> {
    let ea = etale(a);
    let eb = etale(b);
    let mut forward = BTreeSet::new();
    for idx in 0..ea.len() {
        let want = r.image(ea.test_of(idx));
        let targets: Vec<usize> = (0..eb.len()).filter(|&t| *eb.test_of(t) == want).collect();
        if targets.is_empty() {
            return None;
        }
        for t in targets {
            forward.insert((idx, t));
        }
    }
    let rop = r.dagger();
    let ea_dual = etale(&a.dual());
    let eb_dual = etale(&b.dual());
    let mut backward = BTreeSet::new();
    for idx in 0..eb_dual.len() {
        let want = rop.image(eb_dual.test_of(idx));
        let targets: Vec<usize> = (0..ea_dual.len())
            .filter(|&t| *ea_dual.test_of(t) == want)
            .collect();
        if targets.is_empty() {
            return None;
        }
        for t in targets {
            backward.insert((idx, t));
        }
    }
    Some(MultiMorphism {
        r: r.clone(),
        forward,
        backward,
    })
}

fn compose_pairs(
    lhs: &BTreeSet<(usize, usize)>,
    rhs: &BTreeSet<(usize, usize)>,
) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(a, b) in lhs {
        for &(b2, c) in rhs {
            if b == b2 {
                out.insert((a, c));
            }
        }
    }
    out
}

/// `<r;s, R;S, S⊥;R⊥>`: the complement leg composes contravariantly.
pub fn compose_multimorphisms(m1: &MultiMorphism, m2: &MultiMorphism) -> Result<MultiMorphism> {
    Ok(MultiMorphism {
        r: m1.r.compose(&m2.r)?,
        forward: compose_pairs(&m1.forward, &m2.forward),
        backward: compose_pairs(&m2.backward, &m1.backward),
    })
}

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

/// `<X,α,ω>* = <X, α⊥, ω>`.
pub fn multi_star(a: &MultiTestable) -> MultiTestable {
    a.dual()
}

fn product_multiplicity(a: &MultiTestable, b: &MultiTestable) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for x in &a.universe().elements {
        for y in &b.universe().elements {
            out.insert(pair_name(x, y), a.weight_of(x) * b.weight_of(y));
        }
    }
    out
}

/// `<X,α,ω> ⊗ <Y,β,ϖ> = <X×Y, α⊗β, ω·ϖ>`.
pub fn multi_tensor(a: &MultiTestable, b: &MultiTestable, guard: usize) -> Result<MultiTestable> {
    let combined = tensor(
        &TestableObject::plain(a.testable.clone()),
        &TestableObject::plain(b.testable.clone()),
        guard,
    )?;
    MultiTestable::new(combined.testable, product_multiplicity(a, b))
}

/// `<X,α,ω> ⅋ <Y,β,ϖ> = <X×Y, (α⊥⊗β⊥)⊥, ω·ϖ>`.
pub fn multi_par(a: &MultiTestable, b: &MultiTestable, guard: usize) -> Result<MultiTestable> {
    let combined = par(
        &TestableObject::plain(a.testable.clone()),
        &TestableObject::plain(b.testable.clone()),
        guard,
    )?;
    MultiTestable::new(combined.testable, product_multiplicity(a, b))
}

/// `<1, {1}, 1>`, the unit for both tensors.
pub fn multi_unit() -> MultiTestable {
    let u = FinSet::unit();
    let space = TestSpace::new(u, vec![BitSet::full(1)]).unwrap();
    MultiTestable::uniform(Testable::try_new(space, 1).unwrap(), 1).unwrap()
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct MultiTestableJson {
    pub universe: Vec<String>,
    pub tests: Vec<Vec<String>>,
    pub omega: BTreeMap<String, u32>,
}

impl MultiTestable {
    pub fn to_json(&self) -> MultiTestableJson {
        MultiTestableJson {
            universe: self.universe().elements.clone(),
            tests: self.testable.space().named_tests(),
            omega: self.multiplicity.clone(),
        }
    }

    pub fn from_json(raw: &MultiTestableJson, guard: usize) -> Result<Self> {
        let universe = FinSet::new("X", raw.universe.clone())?;
        let space = TestSpace::from_named(universe, &raw.tests)?;
        let testable = Testable::try_new(space, guard)?;
        MultiTestable::new(testable, raw.omega.clone())
    }
}
