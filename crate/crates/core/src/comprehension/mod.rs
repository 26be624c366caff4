//! Lax specifications into set-spans, the comprehension construction, and
//! the inverse (fibration) direction.
//!
//! A specification assigns a finite set to every object of a base category,
//! a set-span to every arrow, a compositor cell map to every composable pair
//! and a unitor cell to every object, subject to two coherence diagrams.
//! `verify_lax` checks those diagrams cell by cell; `build_comprehension`
//! assembles the total category of pairs and its projection; and
//! `specification_of_functor` goes the other way, from a functor to the
//! fiber-wise specification it induces.

mod category;

pub use category::{Arrow, FinCategory, FinFunctor};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finrel::{FinSet, SetSpan};
use crate::report::{Failure, VerificationReport};

// ---------------------------------------------------------------------------
// LaxSpec
// ---------------------------------------------------------------------------

/// A lax specification: object sets, arrow spans, compositor and unitor
/// tables, over a finitely presented base category.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxSpec {
    base: FinCategory,
    object_sets: BTreeMap<String, FinSet>,
    arrow_spans: BTreeMap<String, SetSpan>,
    /// (f, g, cell of |f|, cell of |g|) -> cell of |f;g|
    compositor: BTreeMap<(String, String, String, String), String>,
    /// (object, element of P A) -> cell of |id_A|
    unitor: BTreeMap<(String, String), String>,
}

impl LaxSpec {
    pub fn new(
        base: FinCategory,
        object_sets: BTreeMap<String, FinSet>,
        arrow_spans: BTreeMap<String, SetSpan>,
        compositor: BTreeMap<(String, String, String, String), String>,
        unitor: BTreeMap<(String, String), String>,
    ) -> Result<Self> {
        for obj in base.objects() {
            if !object_sets.contains_key(obj) {
                return Err(Error::Missing {
                    what: "object set",
                    name: obj.clone(),
                });
            }
        }
        for arrow in base.arrows() {
            let span = arrow_spans.get(&arrow.name).ok_or_else(|| Error::Missing {
                what: "arrow span",
                name: arrow.name.clone(),
            })?;
            if !span.dom().same_elements(&object_sets[&arrow.dom]) {
                return Err(Error::invalid(
                    "lax specification",
                    format!("span of {:?} has wrong domain set", arrow.name),
                ));
            }
            if !span.cod().same_elements(&object_sets[&arrow.cod]) {
                return Err(Error::invalid(
                    "lax specification",
                    format!("span of {:?} has wrong codomain set", arrow.name),
                ));
            }
        }
        Ok(LaxSpec {
            base,
            object_sets,
            arrow_spans,
            compositor,
            unitor,
        })
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn object_set(&self, object: &str) -> &FinSet {
        &self.object_sets[object]
    }

    pub fn arrow_span(&self, arrow: &str) -> &SetSpan {
        &self.arrow_spans[arrow]
    }

    pub fn compositor_at(&self, f: &str, g: &str, phi: &str, psi: &str) -> Option<&str> {
        self.compositor
            .get(&(f.to_string(), g.to_string(), phi.to_string(), psi.to_string()))
            .map(|s| s.as_str())
    }

    pub fn unitor_at(&self, object: &str, alpha: &str) -> Option<&str> {
        self.unitor
            .get(&(object.to_string(), alpha.to_string()))
            .map(|s| s.as_str())
    }

    /// Mutate one compositor entry; used to build coherence counterexample
    /// fixtures. Errors if the entry is absent.
    pub fn override_compositor(
        &mut self,
        key: (String, String, String, String),
        value: String,
    ) -> Result<()> {
        match self.compositor.get_mut(&key) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::Missing {
                what: "compositor entry",
                name: format!("{key:?}"),
            }),
        }
    }

    /// The terminal specification: every object set a point, every span a
    /// single cell.
    pub fn terminal(base: &FinCategory) -> LaxSpec {
        let object_sets: BTreeMap<String, FinSet> = base
            .objects()
            .iter()
            .map(|o| (o.clone(), FinSet::new(format!("P({o})"), vec!["*".into()]).unwrap()))
            .collect();
        let arrow_spans: BTreeMap<String, SetSpan> = base
            .arrows()
            .iter()
            .map(|a| {
                let span = SetSpan::new(
                    object_sets[&a.dom].clone(),
                    object_sets[&a.cod].clone(),
                    &[("*".into(), "*".into(), vec![format!("c:{}", a.name)])],
                )
                .unwrap();
                (a.name.clone(), span)
            })
            .collect();
        let mut compositor = BTreeMap::new();
        for (f, g) in base.composable_pairs() {
            let fg = base.compose(&f.name, &g.name).unwrap();
            compositor.insert(
                (
                    f.name.clone(),
                    g.name.clone(),
                    format!("c:{}", f.name),
                    format!("c:{}", g.name),
                ),
                format!("c:{fg}"),
            );
        }
        let unitor = base
            .objects()
            .iter()
            .map(|o| {
                (
                    (o.clone(), "*".to_string()),
                    format!("c:{}", base.identity_of(o)),
                )
            })
            .collect();
        LaxSpec::new(base.clone(), object_sets, arrow_spans, compositor, unitor).unwrap()
    }
}

// ---------------------------------------------------------------------------
// verify_lax
// ---------------------------------------------------------------------------

/// Check the two coherence diagrams plus table well-formedness, reporting
/// every located counterexample.
pub fn verify_lax(spec: &LaxSpec) -> VerificationReport {
    let mut report = VerificationReport::passing();
    let base = &spec.base;

    // unitor: total, landing on the diagonal of the identity span
    for obj in base.objects() {
        let id = base.identity_of(obj);
        let id_span = spec.arrow_span(id);
        for alpha in &spec.object_set(obj).elements {
            match spec.unitor_at(obj, alpha) {
                None => report.push(Failure::new(
                    "unitor-missing",
                    vec![obj.clone(), alpha.clone()],
                    "no unitor cell",
                )),
                Some(cell) => {
                    let a_idx = id_span.dom().index_of(alpha).unwrap();
                    if id_span.cell_position(cell) != Some((a_idx, a_idx)) {
                        report.push(Failure::new(
                            "unitor-entry",
                            vec![obj.clone(), alpha.clone()],
                            format!("cell {cell:?} is not in the ({alpha},{alpha}) entry of the identity span"),
                        ));
                    }
                }
            }
        }
    }

    // compositor: total on matching cell pairs, landing in the right entry
    for (f, g) in base.composable_pairs() {
        let fg = base.compose(&f.name, &g.name).unwrap();
        let span_f = spec.arrow_span(&f.name);
        let span_g = spec.arrow_span(&g.name);
        let span_fg = spec.arrow_span(fg);
        for phi in span_f.cell_names() {
            let (a, b) = span_f.cell_position(phi).unwrap();
            for psi in span_g.cell_names() {
                let (b2, c) = span_g.cell_position(psi).unwrap();
                if b != b2 {
                    continue;
                }
                match spec.compositor_at(&f.name, &g.name, phi, psi) {
                    None => report.push(Failure::new(
                        "compositor-missing",
                        vec![f.name.clone(), g.name.clone(), phi.clone(), psi.clone()],
                        "no compositor cell",
                    )),
                    Some(chi) => {
                        if span_fg.cell_position(chi) != Some((a, c)) {
                            report.push(Failure::new(
                                "compositor-entry",
                                vec![f.name.clone(), g.name.clone(), phi.clone(), psi.clone()],
                                format!("cell {chi:?} does not lie in the expected entry of |{fg}|"),
                            ));
                        }
                    }
                }
            }
        }
    }

    // associativity squares
    for (f, g) in base.composable_pairs() {
        let fg = base.compose(&f.name, &g.name).unwrap().to_string();
        let span_f = spec.arrow_span(&f.name);
        let span_g = spec.arrow_span(&g.name);
        for h in base.arrows() {
            if g.cod != h.dom {
                continue;
            }
            let gh = base.compose(&g.name, &h.name).unwrap().to_string();
            let span_h = spec.arrow_span(&h.name);
            for phi in span_f.cell_names() {
                let (_, b) = span_f.cell_position(phi).unwrap();
                for psi in span_g.cell_names() {
                    let (b2, c) = span_g.cell_position(psi).unwrap();
                    if b != b2 {
                        continue;
                    }
                    for chi in span_h.cell_names() {
                        let (c2, _) = span_h.cell_position(chi).unwrap();
                        if c != c2 {
                            continue;
                        }
                        let at = vec![
                            f.name.clone(),
                            g.name.clone(),
                            h.name.clone(),
                            format!("{phi},{psi},{chi}"),
                        ];
                        let left = spec
                            .compositor_at(&f.name, &g.name, phi, psi)
                            .and_then(|x| spec.compositor_at(&fg, &h.name, x, chi));
                        let right = spec
                            .compositor_at(&g.name, &h.name, psi, chi)
                            .and_then(|x| spec.compositor_at(&f.name, &gh, phi, x));
                        match (left, right) {
                            (Some(l), Some(r)) if l == r => {}
                            (l, r) => report.push(Failure::new(
                                "associativity",
                                at,
                                format!("paths disagree: {l:?} vs {r:?}"),
                            )),
                        }
                    }
                }
            }
        }
    }

    // unit triangles
    for f in base.arrows() {
        let id_dom = base.identity_of(&f.dom).to_string();
        let id_cod = base.identity_of(&f.cod).to_string();
        let span_f = spec.arrow_span(&f.name);
        for phi in span_f.cell_names() {
            let (a, b) = span_f.cell_position(phi).unwrap();
            let alpha = &span_f.dom().elements[a];
            let beta = &span_f.cod().elements[b];
            if let Some(eta) = spec.unitor_at(&f.dom, alpha) {
                let got = spec.compositor_at(&id_dom, &f.name, eta, phi);
                if got != Some(phi) {
                    report.push(Failure::new(
                        "left-unit",
                        vec![f.name.clone(), phi.clone()],
                        format!("compositor with the unitor gives {got:?}, expected {phi:?}"),
                    ));
                }
            }
            if let Some(eta) = spec.unitor_at(&f.cod, beta) {
                let got = spec.compositor_at(&f.name, &id_cod, phi, eta);
                if got != Some(phi) {
                    report.push(Failure::new(
                        "right-unit",
                        vec![f.name.clone(), phi.clone()],
                        format!("compositor with the unitor gives {got:?}, expected {phi:?}"),
                    ));
                }
            }
        }
    }

    report.finish()
}

// ---------------------------------------------------------------------------
// build_comprehension
// ---------------------------------------------------------------------------

/// The total category of a specification, its projection, and the canonical
/// naming tables relating both back to the input.
#[derive(Clone, Debug)]
pub struct Comprehension {
    pub category: FinCategory,
    pub projection: FinFunctor,
    /// total-category object name -> (base object, fiber element)
    pub object_pairs: BTreeMap<String, (String, String)>,
    /// total-category arrow name -> (base arrow, cell)
    pub arrow_pairs: BTreeMap<String, (String, String)>,
}

fn pair_object(a: &str, alpha: &str) -> String {
    format!("<{a},{alpha}>")
}

fn pair_arrow(f: &str, phi: &str) -> String {
    format!("<{f},{phi}>")
}

/// Assemble the category of pairs `<A, α>` / `<f, φ>` over a coherent
/// specification. Refuses with the coherence report when `verify_lax` fails.
pub fn build_comprehension(spec: &LaxSpec) -> Result<Comprehension> {
    let coherence = verify_lax(spec);
    if !coherence.pass {
        return Err(Error::invalid(
            "comprehension input",
            format!(
                "coherence failure; first counterexample: {:?}",
                coherence.failures.first()
            ),
        ));
    }
    let base = spec.base();

    let mut objects = Vec::new();
    let mut object_pairs = BTreeMap::new();
    for a in base.objects() {
        for alpha in &spec.object_set(a).elements {
            let name = pair_object(a, alpha);
            object_pairs.insert(name.clone(), (a.clone(), alpha.clone()));
            objects.push(name);
        }
    }

    let mut arrows = Vec::new();
    let mut arrow_pairs = BTreeMap::new();
    for f in base.arrows() {
        let span = spec.arrow_span(&f.name);
        for phi in span.cell_names() {
            let (a_idx, b_idx) = span.cell_position(phi).unwrap();
            let name = pair_arrow(&f.name, phi);
            arrow_pairs.insert(name.clone(), (f.name.clone(), phi.clone()));
            arrows.push(Arrow {
                name,
                dom: pair_object(&f.dom, &span.dom().elements[a_idx]),
                cod: pair_object(&f.cod, &span.cod().elements[b_idx]),
            });
        }
    }

    let mut identity = BTreeMap::new();
    for a in base.objects() {
        for alpha in &spec.object_set(a).elements {
            let eta = spec.unitor_at(a, alpha).unwrap();
            identity.insert(
                pair_object(a, alpha),
                pair_arrow(base.identity_of(a), eta),
            );
        }
    }

    let mut comp = BTreeMap::new();
    for lhs in &arrows {
        let (f, phi) = &arrow_pairs[&lhs.name];
        for rhs in &arrows {
            if lhs.cod != rhs.dom {
                continue;
            }
            let (g, psi) = &arrow_pairs[&rhs.name];
            let fg = base.compose(f, g).unwrap();
            let chi = spec.compositor_at(f, g, phi, psi).unwrap();
            comp.insert(
                (lhs.name.clone(), rhs.name.clone()),
                pair_arrow(fg, chi),
            );
        }
    }

    // the constructor re-verifies associativity and units independently
    let category = FinCategory::new(objects, arrows, identity, comp)?;

    let obmap = object_pairs
        .iter()
        .map(|(name, (a, _))| (name.clone(), a.clone()))
        .collect();
    let armap = arrow_pairs
        .iter()
        .map(|(name, (f, _))| (name.clone(), f.clone()))
        .collect();
    let projection = FinFunctor::new(category.clone(), base.clone(), obmap, armap)?;

    Ok(Comprehension {
        category,
        projection,
        object_pairs,
        arrow_pairs,
    })
}

// ---------------------------------------------------------------------------
// specification_of_functor
// ---------------------------------------------------------------------------

/// The fiber-wise specification induced by a functor: object sets are the
/// fibers, span cells are the arrows lying over each base arrow, the unitor
/// and compositor come from identities and composition upstairs.
pub fn specification_of_functor(e: &FinFunctor) -> LaxSpec {
    let base = e.cod();
    let upstairs = e.dom();

    let object_sets: BTreeMap<String, FinSet> = base
        .objects()
        .iter()
        .map(|a| {
            let fiber: Vec<String> = e.fiber_objects(a).into_iter().cloned().collect();
            (a.clone(), FinSet::new(format!("P({a})"), fiber).unwrap())
        })
        .collect();

    let arrow_spans: BTreeMap<String, SetSpan> = base
        .arrows()
        .iter()
        .map(|f| {
            let named: Vec<(String, String, Vec<String>)> = upstairs
                .arrows()
                .iter()
                .filter(|phi| e.on_arrow(&phi.name) == f.name)
                .map(|phi| (phi.dom.clone(), phi.cod.clone(), vec![phi.name.clone()]))
                .collect();
            let span = SetSpan::new(
                object_sets[&f.dom].clone(),
                object_sets[&f.cod].clone(),
                &named,
            )
            .unwrap();
            (f.name.clone(), span)
        })
        .collect();

    let unitor: BTreeMap<(String, String), String> = upstairs
        .objects()
        .iter()
        .map(|alpha| {
            (
                (e.on_object(alpha).to_string(), alpha.clone()),
                upstairs.identity_of(alpha).to_string(),
            )
        })
        .collect();

    let mut compositor = BTreeMap::new();
    for (phi, psi) in upstairs.composable_pairs() {
        let f = e.on_arrow(&phi.name).to_string();
        let g = e.on_arrow(&psi.name).to_string();
        let composed = upstairs.compose(&phi.name, &psi.name).unwrap().to_string();
        compositor.insert((f, g, phi.name.clone(), psi.name.clone()), composed);
    }

    LaxSpec::new(base.clone(), object_sets, arrow_spans, compositor, unitor).unwrap()
}

/// Faithfulness: no two distinct parallel arrows upstairs share an image.
pub fn is_faithful_spec(e: &FinFunctor) -> bool {
    let arrows = e.dom().arrows();
    for (i, phi) in arrows.iter().enumerate() {
        for psi in &arrows[i + 1..] {
            if phi.dom == psi.dom && phi.cod == psi.cod && e.on_arrow(&phi.name) == e.on_arrow(&psi.name)
            {
                return false;
            }
        }
    }
    true
}

/// Relationality: every span entry has at most one cell.
pub fn is_relational(spec: &LaxSpec) -> bool {
    spec.base.arrows().iter().all(|f| {
        spec.arrow_span(&f.name)
            .entries()
            .values()
            .all(|cells| cells.len() <= 1)
    })
}

// ---------------------------------------------------------------------------
// roundtrip_check
// ---------------------------------------------------------------------------

/// Build the comprehension of the induced specification and exhibit the
/// canonical isomorphism with the original domain category, commuting with
/// both projections.
pub fn roundtrip_check(e: &FinFunctor) -> VerificationReport {
    let spec = specification_of_functor(e);
    let mut report = verify_lax(&spec);
    if !report.pass {
        return report;
    }
    let comp = match build_comprehension(&spec) {
        Ok(c) => c,
        Err(err) => {
            report.push(Failure::new("comprehension", vec![], err.to_string()));
            return report.finish();
        }
    };
    let upstairs = e.dom();
    let total = &comp.category;

    // object bijection
    let mut object_witness = BTreeMap::new();
    for alpha in upstairs.objects() {
        let image = pair_object(e.on_object(alpha), alpha);
        if !total.objects().contains(&image) {
            report.push(Failure::new(
                "object-bijection",
                vec![alpha.clone()],
                format!("{image:?} is not a comprehension object"),
            ));
        }
        object_witness.insert(alpha.clone(), image);
    }
    if upstairs.objects().len() != total.objects().len() {
        report.push(Failure::new(
            "object-bijection",
            vec![],
            format!(
                "object counts differ: {} vs {}",
                upstairs.objects().len(),
                total.objects().len()
            ),
        ));
    }

    // arrow bijection with boundaries
    let mut arrow_witness = BTreeMap::new();
    for phi in upstairs.arrows() {
        let image = pair_arrow(e.on_arrow(&phi.name), &phi.name);
        match total.arrow(&image) {
            None => report.push(Failure::new(
                "arrow-bijection",
                vec![phi.name.clone()],
                format!("{image:?} is not a comprehension arrow"),
            )),
            Some(im) => {
                if im.dom != object_witness[&phi.dom] || im.cod != object_witness[&phi.cod] {
                    report.push(Failure::new(
                        "arrow-boundary",
                        vec![phi.name.clone()],
                        "image has wrong boundary",
                    ));
                }
            }
        }
        arrow_witness.insert(phi.name.clone(), image);
    }
    if upstairs.arrows().len() != total.arrows().len() {
        report.push(Failure::new(
            "arrow-bijection",
            vec![],
            format!(
                "arrow counts differ: {} vs {}",
                upstairs.arrows().len(),
                total.arrows().len()
            ),
        ));
    }

    // functoriality of the witness
    for alpha in upstairs.objects() {
        let lhs = &arrow_witness[upstairs.identity_of(alpha)];
        let rhs = total.identity_of(&object_witness[alpha]);
        if lhs != rhs {
            report.push(Failure::new(
                "identity-preservation",
                vec![alpha.clone()],
                format!("{lhs:?} vs {rhs:?}"),
            ));
        }
    }
    for (phi, psi) in upstairs.composable_pairs() {
        let composed = upstairs.compose(&phi.name, &psi.name).unwrap();
        let lhs = &arrow_witness[composed];
        let rhs = total
            .compose(&arrow_witness[&phi.name], &arrow_witness[&psi.name])
            .unwrap_or("<undefined>");
        if lhs != rhs {
            report.push(Failure::new(
                "composition-preservation",
                vec![phi.name.clone(), psi.name.clone()],
                format!("{lhs:?} vs {rhs:?}"),
            ));
        }
    }

    // the triangle with the two projections
    for alpha in upstairs.objects() {
        if comp.projection.on_object(&object_witness[alpha]) != e.on_object(alpha) {
            report.push(Failure::new(
                "projection-triangle",
                vec![alpha.clone()],
                "object projections disagree",
            ));
        }
    }
    for phi in upstairs.arrows() {
        if comp.projection.on_arrow(&arrow_witness[&phi.name]) != e.on_arrow(&phi.name) {
            report.push(Failure::new(
                "projection-triangle",
                vec![phi.name.clone()],
                "arrow projections disagree",
            ));
        }
    }

    let details = serde_json::json!({
        "object_witness": object_witness,
        "arrow_witness": arrow_witness,
    });
    report.finish().with_details(details)
}

/// Compare a specification with the one induced by its own comprehension
/// projection, identifying `<f,φ>` back with `φ` and `<A,α>` with `α`.
pub fn respec_matches(original: &LaxSpec, comp: &Comprehension) -> bool {
    let respec = specification_of_functor(&comp.projection);
    let base = original.base();
    for a in base.objects() {
        let orig: Vec<&String> = original.object_set(a).elements.iter().collect();
        let renamed: Vec<&String> = respec
            .object_set(a)
            .elements
            .iter()
            .map(|name| &comp.object_pairs[name].1)
            .collect();
        let mut renamed_sorted = renamed.clone();
        renamed_sorted.sort();
        if orig != renamed_sorted {
            return false;
        }
    }
    for f in base.arrows() {
        let span = original.arrow_span(&f.name);
        let respan = respec.arrow_span(&f.name);
        if span.total_cells() != respan.total_cells() {
            return false;
        }
        for name in respan.cell_names() {
            let (file, cell) = &comp.arrow_pairs[name];
            if file != &f.name {
                return false;
            }
            let (i, j) = respan.cell_position(name).unwrap();
            let alpha = &respan.dom().elements[i];
            let beta = &respan.cod().elements[j];
            let orig_alpha = &comp.object_pairs[alpha].1;
            let orig_beta = &comp.object_pairs[beta].1;
            let oi = span.dom().index_of(orig_alpha).unwrap();
            let oj = span.cod().index_of(orig_beta).unwrap();
            if span.cell_position(cell) != Some((oi, oj)) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LaxSpecJson {
    base: FinCategory,
    obmap: BTreeMap<String, FinSet>,
    armap: BTreeMap<String, SetSpan>,
    mu: Vec<(String, String, String, String, String)>,
    eta: Vec<(String, String, String)>,
}

impl Serialize for LaxSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaxSpecJson {
            base: self.base.clone(),
            obmap: self.object_sets.clone(),
            armap: self.arrow_spans.clone(),
            mu: self
                .compositor
                .iter()
                .map(|((f, g, p, q), v)| (f.clone(), g.clone(), p.clone(), q.clone(), v.clone()))
                .collect(),
            eta: self
                .unitor
                .iter()
                .map(|((a, al), v)| (a.clone(), al.clone(), v.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaxSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LaxSpecJson::deserialize(d)?;
        let compositor = raw
            .mu
            .into_iter()
            .map(|(f, g, p, q, v)| ((f, g, p, q), v))
            .collect();
        let unitor = raw.eta.into_iter().map(|(a, al, v)| ((a, al), v)).collect();
        LaxSpec::new(raw.base, raw.obmap, raw.armap, compositor, unitor)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FinCategory {
        let arrows = vec![
            Arrow { name: "f".into(), dom: "A".into(), cod: "B".into() },
            Arrow { name: "idA".into(), dom: "A".into(), cod: "A".into() },
            Arrow { name: "idB".into(), dom: "B".into(), cod: "B".into() },
        ];
        let identity: BTreeMap<String, String> = [("A", "idA"), ("B", "idB")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let comp: BTreeMap<(String, String), String> = [
            (("idA", "idA"), "idA"),
            (("idB", "idB"), "idB"),
            (("idA", "f"), "f"),
            (("f", "idB"), "f"),
        ]
        .iter()
        .map(|((a, b), c)| ((a.to_string(), b.to_string()), c.to_string()))
        .collect();
        FinCategory::new(vec!["A".into(), "B".into()], arrows, identity, comp).unwrap()
    }

    #[test]
    fn terminal_specification_is_coherent() {
        let spec = LaxSpec::terminal(&chain2());
        assert!(verify_lax(&spec).pass);
    }

    #[test]
    fn terminal_comprehension_recovers_the_base() {
        let base = chain2();
        let spec = LaxSpec::terminal(&base);
        let comp = build_comprehension(&spec).unwrap();
        assert_eq!(comp.category.objects().len(), base.objects().len());
        assert_eq!(comp.category.arrows().len(), base.arrows().len());
    }

    #[test]
    fn discrete_two_object_fiber() {
        // one object, identity arrow only; P = two elements with diagonal span
        let base = FinCategory::terminal();
        let pa = FinSet::new("P(*)", vec!["a".into(), "b".into()]).unwrap();
        let span = SetSpan::new(
            pa.clone(),
            pa.clone(),
            &[
                ("a".into(), "a".into(), vec!["ea".into()]),
                ("b".into(), "b".into(), vec!["eb".into()]),
            ],
        )
        .unwrap();
        let mut compositor = BTreeMap::new();
        compositor.insert(
            ("id".to_string(), "id".to_string(), "ea".to_string(), "ea".to_string()),
            "ea".to_string(),
        );
        compositor.insert(
            ("id".to_string(), "id".to_string(), "eb".to_string(), "eb".to_string()),
            "eb".to_string(),
        );
        let unitor: BTreeMap<(String, String), String> = [
            (("*".to_string(), "a".to_string()), "ea".to_string()),
            (("*".to_string(), "b".to_string()), "eb".to_string()),
        ]
        .into_iter()
        .collect();
        let spec = LaxSpec::new(
            base,
            [("*".to_string(), pa)].into_iter().collect(),
            [("id".to_string(), span)].into_iter().collect(),
            compositor,
            unitor,
        )
        .unwrap();
        assert!(verify_lax(&spec).pass);
        let comp = build_comprehension(&spec).unwrap();
        assert_eq!(comp.category.objects().len(), 2);
        assert_eq!(comp.category.arrows().len(), 2);
        // discrete: no cross arrows
        assert!(comp.category.arrows().iter().all(|a| a.dom == a.cod));
    }

    #[test]
    fn identity_functor_induces_singleton_fibers() {
        let base = chain2();
        let e = FinFunctor::identity(&base);
        let spec = specification_of_functor(&e);
        assert!(verify_lax(&spec).pass);
        for obj in base.objects() {
            assert_eq!(spec.object_set(obj).len(), 1);
        }
        assert!(is_faithful_spec(&e));
        assert!(is_relational(&spec));
        assert!(roundtrip_check(&e).pass);
    }

    #[test]
    fn parallel_fiber_arrows_break_faithfulness() {
        // upstairs: two parallel arrows u,v over f
        let arrows = vec![
            Arrow { name: "u".into(), dom: "X".into(), cod: "Y".into() },
            Arrow { name: "v".into(), dom: "X".into(), cod: "Y".into() },
            Arrow { name: "idX".into(), dom: "X".into(), cod: "X".into() },
            Arrow { name: "idY".into(), dom: "Y".into(), cod: "Y".into() },
        ];
        let identity: BTreeMap<String, String> = [("X", "idX"), ("Y", "idY")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let comp: BTreeMap<(String, String), String> = [
            (("idX", "idX"), "idX"),
            (("idY", "idY"), "idY"),
            (("idX", "u"), "u"),
            (("idX", "v"), "v"),
            (("u", "idY"), "u"),
            (("v", "idY"), "v"),
        ]
        .iter()
        .map(|((a, b), c)| ((a.to_string(), b.to_string()), c.to_string()))
        .collect();
        let upstairs =
            FinCategory::new(vec!["X".into(), "Y".into()], arrows, identity, comp).unwrap();
        let base = chain2();
        let obmap: BTreeMap<String, String> = [("X", "A"), ("Y", "B")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let armap: BTreeMap<String, String> = [
            ("u", "f"),
            ("v", "f"),
            ("idX", "idA"),
            ("idY", "idB"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let e = FinFunctor::new(upstairs, base, obmap, armap).unwrap();
        assert!(!is_faithful_spec(&e));
        let spec = specification_of_functor(&e);
        assert!(!is_relational(&spec));
        // the span over f has a two-cell entry
        assert_eq!(spec.arrow_span("f").entry(0, 0).len(), 2);
        assert!(roundtrip_check(&e).pass);
        let comp = build_comprehension(&spec).unwrap();
        assert!(respec_matches(&spec, &comp));
    }

    #[test]
    fn empty_fiber_is_allowed() {
        // upstairs has nothing over A
        let base = chain2();
        let upstairs = {
            let arrows = vec![Arrow { name: "idY".into(), dom: "Y".into(), cod: "Y".into() }];
            let identity: BTreeMap<String, String> =
                [("Y".to_string(), "idY".to_string())].into_iter().collect();
            let comp: BTreeMap<(String, String), String> =
                [(("idY".to_string(), "idY".to_string()), "idY".to_string())]
                    .into_iter()
                    .collect();
            FinCategory::new(vec!["Y".into()], arrows, identity, comp).unwrap()
        };
        let obmap: BTreeMap<String, String> =
            [("Y".to_string(), "B".to_string())].into_iter().collect();
        let armap: BTreeMap<String, String> =
            [("idY".to_string(), "idB".to_string())].into_iter().collect();
        let e = FinFunctor::new(upstairs, base, obmap, armap).unwrap();
        assert!(roundtrip_check(&e).pass);
        let comp = build_comprehension(&specification_of_functor(&e)).unwrap();
        assert_eq!(comp.category.objects().len(), 1);
    }

    #[test]
    fn broken_compositor_is_located() {
        let base = chain2();
        let mut spec = LaxSpec::terminal(&base);
        // redirect a compositor cell to a wrong value
        spec.override_compositor(
            (
                "idA".to_string(),
                "f".to_string(),
                "c:idA".to_string(),
                "c:f".to_string(),
            ),
            "c:idB".to_string(),
        )
        .unwrap();
        let report = verify_lax(&spec);
        assert!(!report.pass);
        assert!(report
            .failures
            .iter()
            .any(|f| f.at.first().map(String::as_str) == Some("idA")));
        assert!(build_comprehension(&spec).is_err());
    }
}
