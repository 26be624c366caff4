//! Star, tensor, and par of testable objects, vector enumeration, and the
//! complementary-basis combinatorics of partitions.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::finrel::{pair_name, product_set, FinRel, FinSet};
use crate::testspace::{morphism_check, Testable, TestSpace, TestableObject};

/// The unit object `<1, {1}>`, the only testable over a point.
pub fn unit_object() -> TestableObject {
    let u = FinSet::unit();
    let tests = vec![BitSet::full(1)];
    let space = TestSpace::new(u, tests).unwrap();
    TestableObject::plain(Testable::try_new(space, 1).unwrap())
}

/// Star on objects: `<X, α>* = <X, α⊥>`.
pub fn star(a: &TestableObject) -> TestableObject {
    TestableObject::plain(a.testable.dual())
}

struct ProductUniverse {
    set: FinSet,
    /// `index[i][j]` is the product position of `(x_i, y_j)`.
    index: Vec<Vec<usize>>,
}

fn product_universe(x: &FinSet, y: &FinSet) -> ProductUniverse {
    let set = product_set(x, y);
    let index = x
        .elements
        .iter()
        .map(|a| {
            y.elements
                .iter()
                .map(|b| set.index_of(&pair_name(a, b)).unwrap())
                .collect()
        })
        .collect();
    ProductUniverse { set, index }
}

fn product_test(pu: &ProductUniverse, a: &BitSet, b: &BitSet) -> BitSet {
    let mut t = BitSet::new(pu.set.len());
    for i in a.iter() {
        for j in b.iter() {
            t.insert(pu.index[i][j]);
        }
    }
    t
}

/// Structured outcome of a tensor/par construction whose result failed the
/// testable re-check.
#[derive(Clone, Debug, Serialize)]
pub struct StructureDiagnostic {
    pub operation: &'static str,
    pub family: Vec<Vec<String>>,
    pub double_complement: Vec<Vec<String>>,
}

fn build_checked(
    op: &'static str,
    space: TestSpace,
    guard: usize,
    factors: (TestableObject, TestableObject),
) -> Result<TestableObject> {
    match Testable::try_new(space.clone(), guard) {
        Ok(testable) => Ok(TestableObject {
            testable,
            factors: Some(Box::new(factors)),
        }),
        Err(_) => {
            let (_, cert) = super::is_testable(&space, guard)?;
            let diag = StructureDiagnostic {
                operation: op,
                family: space.named_tests(),
                double_complement: cert.double_complement,
            };
            Err(Error::invalid(
                format!("{op} result"),
                serde_json::to_string(&diag).unwrap(),
            ))
        }
    }
}

/// `α ⊗ β = {a×b | a∈α, b∈β}` over `X×Y`, re-checked as a testable.
pub fn tensor(a: &TestableObject, b: &TestableObject, guard: usize) -> Result<TestableObject> {
    let pu = product_universe(a.universe(), b.universe());
    if pu.set.len() > guard {
        return Err(Error::GuardExceeded {
            op: "tensor",
            what: format!("product universe {}", pu.set.name),
            size: pu.set.len(),
            guard,
        });
    }
    let tests: Vec<BitSet> = a
        .tests()
        .iter()
        .flat_map(|s| b.tests().iter().map(|t| product_test(&pu, s, t)))
        .collect();
    let space = TestSpace::new(pu.set, tests)?;
    build_checked("tensor", space, guard, (a.clone(), b.clone()))
}

/// `<X,α> ⅋ <Y,β> = <X×Y, (α⊥ ⊗ β⊥)⊥>`, re-checked as a testable.
pub fn par(a: &TestableObject, b: &TestableObject, guard: usize) -> Result<TestableObject> {
    let pu = product_universe(a.universe(), b.universe());
    if pu.set.len() > guard {
        return Err(Error::GuardExceeded {
            op: "par",
            what: format!("product universe {}", pu.set.name),
            size: pu.set.len(),
            guard,
        });
    }
    let dual_tests: Vec<BitSet> = a
        .complement_tests()
        .iter()
        .flat_map(|s| b.complement_tests().iter().map(|t| product_test(&pu, s, t)))
        .collect();
    let dual_space = TestSpace::new(pu.set.clone(), dual_tests)?;
    let par_tests = dual_space.complement(guard)?;
    let space = TestSpace::new(pu.set, par_tests)?;
    build_checked("par", space, guard, (a.clone(), b.clone()))
}

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorClass {
    /// No product structure declared; no classification attempted.
    Plain,
    /// Equal to `a×b` for tests `a`, `b` of the declared factors.
    Separable,
    Entangled,
}

#[derive(Clone, Debug, Serialize)]
pub struct VectorInfo {
    pub elements: Vec<String>,
    pub class: VectorClass,
}

/// All relations `1 → X` that are morphisms from the unit object, classified
/// as separable or entangled when the object carries product structure.
pub fn enumerate_vectors(a: &TestableObject, guard: usize) -> Result<Vec<VectorInfo>> {
    let n = a.universe().len();
    if n > guard {
        return Err(Error::GuardExceeded {
            op: "enumerate_vectors",
            what: format!("universe {}", a.universe().name),
            size: n,
            guard,
        });
    }
    let unit = unit_object();
    let product_tests: Option<Vec<BitSet>> = a.factors.as_ref().map(|f| {
        let (left, right) = f.as_ref();
        let pu = product_universe(left.universe(), right.universe());
        left.tests()
            .iter()
            .flat_map(|s| right.tests().iter().map(|t| product_test(&pu, s, t)))
            .collect()
    });
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let subset = BitSet::from_indices(n, (0..n).filter(|i| mask & (1 << i) != 0));
        let pairs: Vec<(usize, usize)> = subset.iter().map(|i| (0, i)).collect();
        let v = FinRel::from_index_pairs(FinSet::unit(), a.universe().clone(), pairs);
        if !morphism_check(&v, &unit, a)?.pass {
            continue;
        }
        let class = match &product_tests {
            None => VectorClass::Plain,
            Some(prods) => {
                if prods.contains(&subset) {
                    VectorClass::Separable
                } else {
                    VectorClass::Entangled
                }
            }
        };
        out.push(VectorInfo {
            elements: subset
                .iter()
                .map(|i| a.universe().elements[i].clone())
                .collect(),
            class,
        });
    }
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Complementary bases
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ComplementaryBases {
    /// Whether all blocks share one size `s` with `|X| = s·|β|`.
    pub rectangular_criterion: bool,
    pub block_sizes: Vec<usize>,
    /// The complementary testable `β⊥`, always returned.
    pub complement: Vec<Vec<String>>,
    /// Every partition of the universe contained in `β⊥`.
    pub bases: Vec<Vec<Vec<String>>>,
    /// For each basis: (block count, uniform block size).
    pub basis_shapes: Vec<(usize, usize)>,
}

/// For a partition `β`, report the rectangular criterion, all complementary
/// bases inside `β⊥`, and `β⊥` itself.
pub fn complementary_bases(beta: &TestSpace, guard: usize) -> Result<ComplementaryBases> {
    if !beta.is_partition() {
        return Err(Error::invalid(
            "complementary_bases input",
            "tests are not pairwise disjoint",
        ));
    }
    let n = beta.universe().len();
    let block_sizes: Vec<usize> = beta.tests().iter().map(|t| t.count()).collect();
    let rectangular_criterion = match block_sizes.first() {
        None => true,
        Some(&s) => {
            block_sizes.iter().all(|&b| b == s) && n == s * block_sizes.len()
        }
    };
    let complement = beta.complement(guard)?;

    // exact covers of the universe by complement tests
    let mut bases = Vec::new();
    let mut chosen = Vec::new();
    exact_covers(&complement, BitSet::full(n), 0, &mut chosen, &mut bases);

    let universe = beta.universe();
    let name = |t: &BitSet| -> Vec<String> {
        t.iter().map(|i| universe.elements[i].clone()).collect()
    };
    let basis_shapes = bases
        .iter()
        .map(|basis: &Vec<BitSet>| {
            let count = basis.len();
            let size = basis.first().map(|t| t.count()).unwrap_or(0);
            (count, size)
        })
        .collect();
    Ok(ComplementaryBases {
        rectangular_criterion,
        block_sizes,
        complement: complement.iter().map(&name).collect(),
        bases: bases
            .iter()
            .map(|basis| basis.iter().map(&name).collect())
            .collect(),
        basis_shapes,
    })
}

fn exact_covers(
    tests: &[BitSet],
    uncovered: BitSet,
    start: usize,
    chosen: &mut Vec<BitSet>,
    out: &mut Vec<Vec<BitSet>>,
) {
    let Some(e) = uncovered.first() else {
        out.push(chosen.clone());
        return;
    };
    for (k, t) in tests.iter().enumerate().skip(start) {
        if t.contains(e) && t.is_subset(&uncovered) {
            chosen.push(t.clone());
            exact_covers(tests, uncovered.difference(t), k + 1, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testspace::is_testable;
    use crate::DEFAULT_GUARD;

    fn obj(names: &[&str], tests: &[&[&str]]) -> TestableObject {
        let u = FinSet::new("X", names.iter().map(|s| s.to_string()).collect()).unwrap();
        let named: Vec<Vec<String>> = tests
            .iter()
            .map(|t| t.iter().map(|s| s.to_string()).collect())
            .collect();
        let space = TestSpace::from_named(u, &named).unwrap();
        TestableObject::plain(Testable::try_new(space, DEFAULT_GUARD).unwrap())
    }

    fn crudest2() -> TestableObject {
        obj(&["0", "1"], &[&["0", "1"]])
    }

    fn finest2() -> TestableObject {
        obj(&["0", "1"], &[&["0"], &["1"]])
    }

    #[test]
    fn unit_is_neutral_for_tensor_and_par() {
        let a = obj(&["0", "1", "2"], &[&["0", "1"], &["1", "2"]]);
        let u = unit_object();
        for combined in [
            tensor(&u, &a, DEFAULT_GUARD).unwrap(),
            par(&u, &a, DEFAULT_GUARD).unwrap(),
        ] {
            // up to the product-with-point renaming (*,x) -> x
            let renamed: Vec<Vec<String>> = combined
                .testable
                .space()
                .named_tests()
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|e| e.trim_start_matches("(*,").trim_end_matches(')').to_string())
                        .collect()
                })
                .collect();
            assert_eq!(renamed, a.testable.space().named_tests());
        }
    }

    #[test]
    fn bell_instance_tensor_and_par() {
        let a = crudest2();
        let b = finest2();
        let t = tensor(&a, &b, DEFAULT_GUARD).unwrap();
        assert_eq!(
            t.testable.space().named_tests(),
            vec![
                vec!["(0,0)", "(1,0)"],
                vec!["(0,1)", "(1,1)"],
            ]
        );
        let p = par(&a, &b, DEFAULT_GUARD).unwrap();
        assert_eq!(
            p.testable.space().named_tests(),
            vec![
                vec!["(0,0)", "(1,0)"],
                vec!["(0,0)", "(1,1)"],
                vec!["(0,1)", "(1,0)"],
                vec!["(0,1)", "(1,1)"],
            ]
        );
    }

    #[test]
    fn star_of_tensor_is_par_of_stars() {
        let a = crudest2();
        let b = finest2();
        let lhs = star(&tensor(&a, &b, DEFAULT_GUARD).unwrap());
        let rhs = par(&star(&a), &star(&b), DEFAULT_GUARD).unwrap();
        assert_eq!(lhs.testable.space(), rhs.testable.space());
        // star is involutive
        let back = star(&star(&a));
        assert_eq!(back.testable.space(), a.testable.space());
    }

    #[test]
    fn bell_vectors_separate() {
        let a = crudest2();
        let b = finest2();
        let t = tensor(&a, &b, DEFAULT_GUARD).unwrap();
        let vt = enumerate_vectors(&t, DEFAULT_GUARD).unwrap();
        assert_eq!(vt.len(), 2);
        assert!(vt.iter().all(|v| v.class == VectorClass::Separable));

        let p = par(&a, &b, DEFAULT_GUARD).unwrap();
        let vp = enumerate_vectors(&p, DEFAULT_GUARD).unwrap();
        assert_eq!(vp.len(), 4);
        let entangled: Vec<&VectorInfo> = vp
            .iter()
            .filter(|v| v.class == VectorClass::Entangled)
            .collect();
        assert_eq!(entangled.len(), 2);
        let names: Vec<Vec<String>> = entangled.iter().map(|v| v.elements.clone()).collect();
        assert_eq!(
            names,
            vec![
                vec!["(0,0)".to_string(), "(1,1)".to_string()],
                vec!["(0,1)".to_string(), "(1,0)".to_string()],
            ]
        );
    }

    #[test]
    fn vectors_of_a_partition_are_its_tests() {
        let a = obj(&["0", "1", "2", "3"], &[&["0", "1"], &["2", "3"]]);
        let vs = enumerate_vectors(&a, DEFAULT_GUARD).unwrap();
        let got: Vec<Vec<String>> = vs.iter().map(|v| v.elements.clone()).collect();
        assert_eq!(got, a.testable.space().named_tests());
    }

    #[test]
    fn unit_object_has_one_vector() {
        let u = unit_object();
        let vs = enumerate_vectors(&u, DEFAULT_GUARD).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].elements, vec!["*"]);
    }

    #[test]
    fn complementary_bases_square_partition() {
        let beta = TestSpace::from_named(
            FinSet::new("X", vec!["0".into(), "1".into(), "2".into(), "3".into()]).unwrap(),
            &[
                vec!["0".into(), "1".into()],
                vec!["2".into(), "3".into()],
            ],
        )
        .unwrap();
        let report = complementary_bases(&beta, DEFAULT_GUARD).unwrap();
        assert!(report.rectangular_criterion);
        assert_eq!(report.bases.len(), 2);
        assert!(report.bases.contains(&vec![
            vec!["0".to_string(), "2".to_string()],
            vec!["1".to_string(), "3".to_string()]
        ]));
        assert!(report.basis_shapes.iter().all(|&(count, size)| count == 2 && size == 2));
    }

    #[test]
    fn complementary_bases_uneven_partition() {
        let beta = TestSpace::from_named(
            FinSet::new("X", vec!["0".into(), "1".into(), "2".into()]).unwrap(),
            &[vec!["0".into(), "1".into()], vec!["2".into()]],
        )
        .unwrap();
        let report = complementary_bases(&beta, DEFAULT_GUARD).unwrap();
        assert!(!report.rectangular_criterion);
        assert!(report.bases.is_empty());
        assert_eq!(
            report.complement,
            vec![
                vec!["0".to_string(), "2".to_string()],
                vec!["1".to_string(), "2".to_string()]
            ]
        );
        // the complement is still a testable
        let comp_space = TestSpace::from_named(
            beta.universe().clone(),
            &report.complement,
        )
        .unwrap();
        assert!(is_testable(&comp_space, DEFAULT_GUARD).unwrap().0);
    }

    #[test]
    fn complementary_bases_finest_partition() {
        let beta = TestSpace::from_named(
            FinSet::new("X", vec!["0".into(), "1".into(), "2".into()]).unwrap(),
            &[vec!["0".into()], vec!["1".into()], vec!["2".into()]],
        )
        .unwrap();
        let report = complementary_bases(&beta, DEFAULT_GUARD).unwrap();
        assert!(report.rectangular_criterion);
        assert_eq!(report.bases, vec![vec![vec!["0", "1", "2"]]]);
        assert_eq!(report.basis_shapes, vec![(1, 3)]);
    }
}
