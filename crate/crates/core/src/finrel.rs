//! Finite sets, binary relations, and set-valued spans.
//!
//! Everything is stored in canonical form: elements sorted lexicographically,
//! pairs sorted, span entries keyed and sorted. Structural equality is then
//! normal-form equality, which every law check in the crate relies on.
//! Relations additionally carry per-row bitsets over the canonical element
//! order; those are the operational representation for images and the
//! transversal searches downstream.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// FinSet
// ---------------------------------------------------------------------------

/// A named finite set with canonically ordered, pairwise distinct elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinSet {
    pub name: String,
    pub elements: Vec<String>,
}

impl FinSet {
    pub fn new(name: impl Into<String>, mut elements: Vec<String>) -> Result<Self> {
        let name = name.into();
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(
                    format!("set {name}"),
                    format!("duplicate element {:?}", w[0]),
                ));
            }
        }
        Ok(FinSet { name, elements })
    }

    pub fn from_iter(name: impl Into<String>, it: impl IntoIterator<Item = String>) -> Result<Self> {
        FinSet::new(name, it.into_iter().collect())
    }

    /// The one-element set used as the monoidal unit carrier.
    pub fn unit() -> Self {
        FinSet {
            name: "1".into(),
            elements: vec!["*".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_str().cmp(element)).ok()
    }

    pub fn contains(&self, element: &str) -> bool {
        self.index_of(element).is_some()
    }

    /// Same elements, ignoring the name.
    pub fn same_elements(&self, other: &FinSet) -> bool {
        self.elements == other.elements
    }
}

/// Canonical name for a product element.
pub fn pair_name(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// Cartesian product with pair-named elements.
pub fn product_set(a: &FinSet, b: &FinSet) -> FinSet {
    let elements = a
        .elements
        .iter()
        .flat_map(|x| b.elements.iter().map(move |y| pair_name(x, y)))
        .collect();
    // pair names of distinct pairs are distinct, so this cannot fail
    FinSet::new(format!("({}x{})", a.name, b.name), elements).unwrap()
}

// ---------------------------------------------------------------------------
// FinRel
// ---------------------------------------------------------------------------

/// A binary relation between two named finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinRel {
    dom: FinSet,
    cod: FinSet,
    /// Sorted, deduplicated index pairs.
    pairs: Vec<(usize, usize)>,
    /// Row bitsets over the codomain, one per domain element.
    rows: Vec<BitSet>,
}

impl FinRel {
    pub fn new(dom: FinSet, cod: FinSet, named_pairs: &[(String, String)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(named_pairs.len());
        for (x, y) in named_pairs {
            let i = dom.index_of(x).ok_or_else(|| Error::invalid(
                format!("relation {} -> {}", dom.name, cod.name),
                format!("pair component {x:?} not in domain"),
            ))?;
            let j = cod.index_of(y).ok_or_else(|| Error::invalid(
                format!("relation {} -> {}", dom.name, cod.name),
                format!("pair component {y:?} not in codomain"),
            ))?;
            pairs.push((i, j));
        }
        Ok(FinRel::from_index_pairs(dom, cod, pairs))
    }

    pub fn from_index_pairs(dom: FinSet, cod: FinSet, mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut rows = vec![BitSet::new(cod.len()); dom.len()];
        for &(i, j) in &pairs {
            rows[i].insert(j);
        }
        FinRel {
            dom,
            cod,
            pairs,
            rows,
        }
    }

    pub fn identity(s: &FinSet) -> Self {
        let pairs = (0..s.len()).map(|i| (i, i)).collect();
        FinRel::from_index_pairs(s.clone(), s.clone(), pairs)
    }

    pub fn empty(dom: FinSet, cod: FinSet) -> Self {
        FinRel::from_index_pairs(dom, cod, Vec::new())
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn index_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(i, j)| (self.dom.elements[i].clone(), self.cod.elements[j].clone()))
            .collect()
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn is_identity(&self) -> bool {
        self.dom.same_elements(&self.cod)
            && self.pairs.len() == self.dom.len()
            && self.pairs.iter().all(|&(i, j)| i == j)
    }

    /// Relational composition. Fails unless `cod(self)` and `dom(other)` are
    /// the same set.
    pub fn compose(&self, other: &FinRel) -> Result<FinRel> {
        if !self.cod.same_elements(&other.dom) {
            return Err(Error::BoundaryMismatch {
                op: "compose_rel",
                left: format!("{} (cod of left)", self.cod.name),
                right: format!("{} (dom of right)", other.dom.name),
            });
        }
        let mut rows = vec![BitSet::new(other.cod.len()); self.dom.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter() {
                rows[i].union_with(&other.rows[j]);
            }
        }
        let pairs = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
            .collect();
        Ok(FinRel::from_index_pairs(
            self.dom.clone(),
            other.cod.clone(),
            pairs,
        ))
    }

    /// Relational converse: pairs transposed, boundaries swapped.
    pub fn dagger(&self) -> FinRel {
        let pairs = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        FinRel::from_index_pairs(self.cod.clone(), self.dom.clone(), pairs)
    }

    /// Direct image of a subset of the domain.
    pub fn image(&self, subset: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.cod.len());
        for i in subset.iter() {
            out.union_with(&self.rows[i]);
        }
        out
    }

    /// Direct image by element names; errors if the subset leaves the domain.
    pub fn image_named(&self, subset: &[String]) -> Result<Vec<String>> {
        let mut bits = BitSet::new(self.dom.len());
        for x in subset {
            let i = self.dom.index_of(x).ok_or_else(|| Error::invalid(
                "powerset image argument",
                format!("{x:?} is not an element of {}", self.dom.name),
            ))?;
            bits.insert(i);
        }
        Ok(self
            .image(&bits)
            .iter()
            .map(|j| self.cod.elements[j].clone())
            .collect())
    }

    /// Image of a family of subsets, duplicates collapsed.
    pub fn family_image(&self, family: &[BitSet]) -> Vec<BitSet> {
        let set: BTreeSet<BitSet> = family.iter().map(|a| self.image(a)).collect();
        set.into_iter().collect()
    }

    /// Product relation: `(x,y) (r x s) (x',y')` iff `x r x'` and `y s y'`.
    pub fn product(&self, other: &FinRel) -> FinRel {
        let dom = product_set(&self.dom, &other.dom);
        let cod = product_set(&self.cod, &other.cod);
        let mut pairs = Vec::new();
        for &(i, j) in &self.pairs {
            for &(k, l) in &other.pairs {
                let x = pair_name(&self.dom.elements[i], &other.dom.elements[k]);
                let y = pair_name(&self.cod.elements[j], &other.cod.elements[l]);
                pairs.push((dom.index_of(&x).unwrap(), cod.index_of(&y).unwrap()));
            }
        }
        FinRel::from_index_pairs(dom, cod, pairs)
    }
}

/// The bijection `(x,(y,z)) -> ((x,y),z)` as a relation between the two
/// product orders.
pub fn associator(x: &FinSet, y: &FinSet, z: &FinSet) -> FinRel {
    let dom = product_set(x, &product_set(y, z));
    let cod = product_set(&product_set(x, y), z);
    let mut pairs = Vec::new();
    for a in &x.elements {
        for b in &y.elements {
            for c in &z.elements {
                let l = pair_name(a, &pair_name(b, c));
                let r = pair_name(&pair_name(a, b), c);
                pairs.push((dom.index_of(&l).unwrap(), cod.index_of(&r).unwrap()));
            }
        }
    }
    FinRel::from_index_pairs(dom, cod, pairs)
}

// ---------------------------------------------------------------------------
// SetSpan
// ---------------------------------------------------------------------------

/// A span of finite sets presented as a set-valued matrix: each entry
/// `(row, col)` holds a finite set of named cells. Cell names are globally
/// distinct within one span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSpan {
    dom: FinSet,
    cod: FinSet,
    entries: BTreeMap<(usize, usize), Vec<String>>,
    /// cell name -> entry position
    cells: BTreeMap<String, (usize, usize)>,
}

impl SetSpan {
    pub fn new(
        dom: FinSet,
        cod: FinSet,
        named_entries: &[(String, String, Vec<String>)],
    ) -> Result<Self> {
        let mut entries: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        let mut cells = BTreeMap::new();
        for (x, y, names) in named_entries {
            let i = dom.index_of(x).ok_or_else(|| Error::invalid(
                "span entry",
                format!("row {x:?} not in {}", dom.name),
            ))?;
            let j = cod.index_of(y).ok_or_else(|| Error::invalid(
                "span entry",
                format!("column {y:?} not in {}", cod.name),
            ))?;
            let slot = entries.entry((i, j)).or_default();
            for n in names {
                if cells.insert(n.clone(), (i, j)).is_some() {
                    return Err(Error::invalid(
                        "span",
                        format!("cell name {n:?} occurs twice"),
                    ));
                }
                slot.push(n.clone());
            }
        }
        for v in entries.values_mut() {
            v.sort();
        }
        entries.retain(|_, v| !v.is_empty());
        Ok(SetSpan {
            dom,
            cod,
            entries,
            cells,
        })
    }

    /// Identity span: a singleton cell on each diagonal entry.
    pub fn identity(s: &FinSet) -> SetSpan {
        let named: Vec<(String, String, Vec<String>)> = s
            .elements
            .iter()
            .map(|e| (e.clone(), e.clone(), vec![format!("id:{e}")]))
            .collect();
        SetSpan::new(s.clone(), s.clone(), &named).unwrap()
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Vec<String>> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &[String] {
        self.entries
            .get(&(row, col))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn cell_position(&self, cell: &str) -> Option<(usize, usize)> {
        self.cells.get(cell).copied()
    }

    pub fn cell_names(&self) -> impl Iterator<Item = &String> {
        self.cells.keys()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.len()
    }

    /// Span composition by pullback: the entry at `(a,c)` is the disjoint
    /// union over `b` of the products of constituent entries, with composed
    /// cells named as pairs of constituent names.
    pub fn compose(&self, other: &SetSpan) -> Result<SetSpan> {
        if !self.cod.same_elements(&other.dom) {
            return Err(Error::BoundaryMismatch {
                op: "compose_span",
                left: format!("{} (cod of left)", self.cod.name),
                right: format!("{} (dom of right)", other.dom.name),
            });
        }
        let mut named: Vec<(String, String, Vec<String>)> = Vec::new();
        for (&(a, b), left_cells) in &self.entries {
            for (&(b2, c), right_cells) in &other.entries {
                if b != b2 {
                    continue;
                }
                let names: Vec<String> = left_cells
                    .iter()
                    .flat_map(|p| right_cells.iter().map(move |q| format!("({p},{q})")))
                    .collect();
                named.push((
                    self.dom.elements[a].clone(),
                    other.cod.elements[c].clone(),
                    names,
                ));
            }
        }
        SetSpan::new(self.dom.clone(), other.cod.clone(), &named)
    }

    /// Image factorization: replace each nonempty entry with a single pair.
    pub fn factorize(&self) -> FinRel {
        let pairs = self.entries.keys().copied().collect();
        FinRel::from_index_pairs(self.dom.clone(), self.cod.clone(), pairs)
    }

    /// Same entry positions and entry sizes; cell names ignored.
    pub fn same_shape(&self, other: &SetSpan) -> bool {
        self.dom.same_elements(&other.dom)
            && self.cod.same_elements(&other.cod)
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((p, v), (q, w))| p == q && v.len() == w.len())
    }
}

// ---------------------------------------------------------------------------
// JSON encodings
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FinRelJson {
    dom: FinSet,
    cod: FinSet,
    pairs: Vec<(String, String)>,
}

impl Serialize for FinRel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FinRelJson {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            pairs: self.named_pairs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinRel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FinRelJson::deserialize(d)?;
        let dom = FinSet::new(raw.dom.name, raw.dom.elements).map_err(serde::de::Error::custom)?;
        let cod = FinSet::new(raw.cod.name, raw.cod.elements).map_err(serde::de::Error::custom)?;
        FinRel::new(dom, cod, &raw.pairs).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SpanCellJson {
    row: String,
    col: String,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SetSpanJson {
    dom: FinSet,
    cod: FinSet,
    cells: Vec<SpanCellJson>,
}

impl Serialize for SetSpan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cells = self
            .entries
            .iter()
            .map(|(&(i, j), names)| SpanCellJson {
                row: self.dom.elements[i].clone(),
                col: self.cod.elements[j].clone(),
                names: names.clone(),
            })
            .collect();
        SetSpanJson {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            cells,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetSpan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SetSpanJson::deserialize(d)?;
        let dom = FinSet::new(raw.dom.name, raw.dom.elements).map_err(serde::de::Error::custom)?;
        let cod = FinSet::new(raw.cod.name, raw.cod.elements).map_err(serde::de::Error::custom)?;
        let named: Vec<(String, String, Vec<String>)> = raw
            .cells
            .into_iter()
            .map(|c| (c.row, c.col, c.names))
            .collect();
        SetSpan::new(dom, cod, &named).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn rel(dom: &FinSet, cod: &FinSet, pairs: &[(&str, &str)]) -> FinRel {
        let named: Vec<(String, String)> = pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        FinRel::new(dom.clone(), cod.clone(), &named).unwrap()
    }

    #[test]
    fn compose_identity_is_neutral() {
        let x = set("X", &["a", "b"]);
        let y = set("Y", &["1", "2"]);
        let r = rel(&x, &y, &[("a", "1"), ("a", "2")]);
        assert_eq!(FinRel::identity(&x).compose(&r).unwrap(), r);
        assert_eq!(r.compose(&FinRel::identity(&y)).unwrap(), r);
    }

    #[test]
    fn compose_collapses_middle() {
        // r={(a,1),(a,2)}, s={(1,p),(2,p)} -> {(a,p)}
        let x = set("X", &["a"]);
        let y = set("Y", &["1", "2"]);
        let z = set("Z", &["p"]);
        let r = rel(&x, &y, &[("a", "1"), ("a", "2")]);
        let s = rel(&y, &z, &[("1", "p"), ("2", "p")]);
        let rs = r.compose(&s).unwrap();
        assert_eq!(rs.named_pairs(), vec![("a".to_string(), "p".to_string())]);
    }

    #[test]
    fn compose_with_empty_is_empty() {
        let x = set("X", &["a"]);
        let y = set("Y", &["1"]);
        let z = set("Z", &["p"]);
        let r = FinRel::empty(x, y.clone());
        let s = rel(&y, &z, &[("1", "p")]);
        assert!(r.compose(&s).unwrap().named_pairs().is_empty());
    }

    #[test]
    fn compose_rejects_boundary_mismatch() {
        let x = set("X", &["a"]);
        let y = set("Y", &["1"]);
        let z = set("Z", &["p"]);
        let r = rel(&x, &y, &[("a", "1")]);
        let s = rel(&z, &x, &[("p", "a")]);
        let err = r.compose(&s).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Y") && msg.contains("Z"), "{msg}");
    }

    #[test]
    fn dagger_transposes_and_involutes() {
        let x = set("X", &["a"]);
        let y = set("Y", &["1"]);
        let r = rel(&x, &y, &[("a", "1")]);
        assert_eq!(r.dagger().named_pairs(), vec![("1".to_string(), "a".to_string())]);
        assert_eq!(r.dagger().dagger(), r);
        let id = FinRel::identity(&x);
        assert_eq!(id.dagger(), id);
    }

    #[test]
    fn powerset_image_examples() {
        let x = set("X", &["0"]);
        let y = set("Y", &["1", "2"]);
        let r = rel(&x, &y, &[("0", "1"), ("0", "2")]);
        assert_eq!(
            r.image_named(&["0".into()]).unwrap(),
            vec!["1".to_string(), "2".to_string()]
        );
        assert!(r.image_named(&[]).unwrap().is_empty());
        assert!(r.image_named(&["bogus".into()]).is_err());
    }

    #[test]
    fn span_composition_counts_products() {
        let a = set("A", &["a"]);
        let b = set("B", &["b"]);
        let c = set("C", &["c"]);
        let f = SetSpan::new(
            a.clone(),
            b.clone(),
            &[("a".into(), "b".into(), vec!["phi1".into(), "phi2".into()])],
        )
        .unwrap();
        let g = SetSpan::new(
            b,
            c,
            &[("b".into(), "c".into(), vec!["psi".into()])],
        )
        .unwrap();
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.entry(0, 0), &["(phi1,psi)", "(phi2,psi)"]);
    }

    #[test]
    fn identity_span_is_neutral_up_to_renaming() {
        let a = set("A", &["a", "b"]);
        let f = SetSpan::new(
            a.clone(),
            a.clone(),
            &[("a".into(), "b".into(), vec!["u".into(), "v".into()])],
        )
        .unwrap();
        let left = SetSpan::identity(&a).compose(&f).unwrap();
        let right = f.compose(&SetSpan::identity(&a)).unwrap();
        assert!(left.same_shape(&f));
        assert!(right.same_shape(&f));
    }

    #[test]
    fn factorize_keeps_nonempty_entries() {
        let a = set("A", &["a", "b", "c"]);
        let f = SetSpan::new(
            a.clone(),
            a.clone(),
            &[
                ("a".into(), "a".into(), vec!["phi".into()]),
                ("b".into(), "b".into(), vec!["x".into(), "y".into()]),
            ],
        )
        .unwrap();
        let r = f.factorize();
        assert_eq!(
            r.named_pairs(),
            vec![
                ("a".to_string(), "a".to_string()),
                ("b".to_string(), "b".to_string())
            ]
        );
        // a span that is already a relation factorizes to itself
        let g = SetSpan::identity(&a);
        assert_eq!(g.factorize(), FinRel::identity(&a));
        // empty span -> empty relation
        let e = SetSpan::new(a.clone(), a.clone(), &[]).unwrap();
        assert!(e.factorize().named_pairs().is_empty());
    }
}
