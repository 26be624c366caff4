//! Object-level star/dagger/tensor/par structure for subspace propositions
//! and for Hilbert testables, with the separation analysis of product
//! dictionaries.
//!
//! Duals, conjugates and daggers of spaces are realized concretely on
//! coordinate space via conjugation; `SpaceVariant` tags record which
//! identification produced an object, for reports only.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fhilb::matrix::{rank, LinearMap};
use crate::fhilb::ray::{
    colinearity, is_hilb_testable, HilbCertificate, HilbTestable, Ray, RayDict,
};
use crate::fhilb::subspace::Subspace;

type C64 = Complex64;

// ---------------------------------------------------------------------------
// Space variants and the Riesz identification
// ---------------------------------------------------------------------------

/// Bookkeeping tag for which space a construction lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceVariant {
    Plain,
    Dual,
    Conjugate,
    DoubleDagger,
}

impl SpaceVariant {
    /// Tag algebra: dual and conjugate are involutions that commute, with
    /// their composite the double dagger.
    pub fn compose(self, other: SpaceVariant) -> SpaceVariant {
        use SpaceVariant::*;
        let code = |v: SpaceVariant| match v {
            Plain => (false, false),
            Dual => (true, false),
            Conjugate => (false, true),
            DoubleDagger => (true, true),
        };
        let (a1, b1) = code(self);
        let (a2, b2) = code(other);
        match (a1 ^ a2, b1 ^ b2) {
            (false, false) => Plain,
            (true, false) => Dual,
            (false, true) => Conjugate,
            (true, true) => DoubleDagger,
        }
    }
}

/// The canonical antilinear identification of a space with its conjugate,
/// realized as coordinate conjugation.
#[derive(Clone, Copy, Debug)]
pub struct RieszMap {
    pub dim: usize,
}

pub fn riesz(dim: usize) -> RieszMap {
    RieszMap { dim }
}

impl RieszMap {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        v.iter().map(|z| z.conj()).collect()
    }
}

// ---------------------------------------------------------------------------
// Proposition objects <χ ⊆ H>
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PropObject {
    pub variant: SpaceVariant,
    pub subspace: Subspace,
}

impl PropObject {
    pub fn plain(subspace: Subspace) -> Self {
        PropObject {
            variant: SpaceVariant::Plain,
            subspace,
        }
    }
}

/// `<χ ⊆ H>* = <χ⊥ ⊆ H*>`.
pub fn prop_star(a: &PropObject, tol: f64) -> PropObject {
    PropObject {
        variant: a.variant.compose(SpaceVariant::Dual),
        subspace: a.subspace.annihilator(tol),
    }
}

/// `<χ ⊆ H>_* = <χ⊥_* ⊆ H_*>`: the annihilator pulled through the Riesz
/// identification, i.e. its coordinate conjugate.
pub fn prop_lower_star(a: &PropObject, tol: f64) -> PropObject {
    PropObject {
        variant: a.variant.compose(SpaceVariant::Conjugate),
        subspace: a.subspace.annihilator(tol).conjugate(),
    }
}

/// `<χ ⊆ H>‡ = <χ ⊆ H‡>`: the same subspace in the doubly-twisted space.
pub fn prop_dagger(a: &PropObject) -> PropObject {
    PropObject {
        variant: a.variant.compose(SpaceVariant::DoubleDagger),
        subspace: a.subspace.clone(),
    }
}

/// Tensor of subspaces: the span of Kronecker products of basis vectors.
pub fn prop_tensor(a: &PropObject, b: &PropObject, tol: f64) -> Result<PropObject> {
    let dim = a.subspace.ambient_dim() * b.subspace.ambient_dim();
    let mut vectors = Vec::new();
    for u in a.subspace.basis() {
        for v in b.subspace.basis() {
            let mut w = Vec::with_capacity(dim);
            for x in u {
                for y in v {
                    w.push(x * y);
                }
            }
            vectors.push(w);
        }
    }
    Ok(PropObject::plain(Subspace::span(dim, &vectors, tol)?))
}

/// Par of subspaces: `(χ⊥ ⊗ κ⊥)⊥`.
pub fn prop_par(a: &PropObject, b: &PropObject, tol: f64) -> Result<PropObject> {
    let sa = prop_star(a, tol);
    let sb = prop_star(b, tol);
    let t = prop_tensor(&sa, &sb, tol)?;
    Ok(PropObject::plain(t.subspace.annihilator(tol)))
}

/// `⊤ = <C ⊆ C>`.
pub fn prop_top() -> PropObject {
    PropObject::plain(Subspace::full(1))
}

/// `⊥ = <0 ⊆ C>`.
pub fn prop_bottom() -> PropObject {
    PropObject::plain(Subspace::zero(1))
}

#[derive(Clone, Debug, Serialize)]
pub struct PropStructureReport {
    pub tensor_dim: usize,
    pub par_dim: usize,
    pub tensor_dim_formula_ok: bool,
    pub par_dim_formula_ok: bool,
    /// `χ⊗κ ⊆ χ⅋κ`, the comparison induced by the mix map `⊥ → ⊤`.
    pub mix_inclusion: bool,
    pub star_variant: SpaceVariant,
    pub lower_star_variant: SpaceVariant,
    pub dagger_variant: SpaceVariant,
}

/// Compute all object constructions for a pair of propositions and verify
/// the dimension formulas and the mix inclusion.
pub fn prop_structure(a: &PropObject, b: &PropObject, tol: f64) -> Result<PropStructureReport> {
    let dh = a.subspace.ambient_dim();
    let dk = b.subspace.ambient_dim();
    let dx = a.subspace.dim();
    let dy = b.subspace.dim();
    let tensor = prop_tensor(a, b, tol)?;
    let par = prop_par(a, b, tol)?;
    Ok(PropStructureReport {
        tensor_dim: tensor.subspace.dim(),
        par_dim: par.subspace.dim(),
        tensor_dim_formula_ok: tensor.subspace.dim() == dx * dy,
        par_dim_formula_ok: par.subspace.dim() == dh * dk - (dh - dx) * (dk - dy),
        mix_inclusion: par.subspace.contains(&tensor.subspace, tol),
        star_variant: prop_star(a, tol).variant,
        lower_star_variant: prop_lower_star(a, tol).variant,
        dagger_variant: prop_dagger(a).variant,
    })
}

// ---------------------------------------------------------------------------
// Hilbert testable structure
// ---------------------------------------------------------------------------

/// `<H,α,c>* = <H, α^c, c>`; valid by the testable invariants.
pub fn hilb_star(a: &HilbTestable, tol: f64) -> HilbTestable {
    HilbTestable::try_new(a.universe.clone(), a.complement_indices(tol), a.c, tol).unwrap()
}

/// `<H,α,c>_* = <H‡, α^c, c>`: the complement in the conjugated universe.
pub fn hilb_lower_star(a: &HilbTestable, tol: f64) -> (HilbTestable, SpaceVariant) {
    let conj = a.universe.conjugate(tol);
    (
        HilbTestable::try_new(conj, a.complement_indices(tol), a.c, tol).unwrap(),
        SpaceVariant::Conjugate,
    )
}

/// `<H,α,c>‡ = <H‡, α, c>`.
pub fn hilb_dagger(a: &HilbTestable, tol: f64) -> (HilbTestable, SpaceVariant) {
    let conj = a.universe.conjugate(tol);
    (
        HilbTestable::try_new(conj, a.alpha.clone(), a.c, tol).unwrap(),
        SpaceVariant::DoubleDagger,
    )
}

/// `I = <C, {C}, 1>`, the unit for both tensors.
pub fn hilb_unit(tol: f64) -> HilbTestable {
    let dict = RayDict::new(
        "unit",
        1,
        vec![Ray::new(vec![C64::new(1.0, 0.0)], tol).unwrap()],
        tol,
    )
    .unwrap();
    HilbTestable::try_new(dict, vec![0], 1.0, tol).unwrap()
}

#[derive(Clone, Debug, Serialize)]
pub struct ParMember {
    pub index: usize,
    pub schmidt_rank: usize,
    pub entangled: bool,
    /// Member of `α×β` (a Kronecker product of member rays).
    pub in_tensor: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbStructureReport {
    pub product_universe: String,
    pub c: f64,
    pub tensor_alpha: Vec<usize>,
    pub par_alpha: Vec<usize>,
    pub tensor_testable: bool,
    pub tensor_certificate: HilbCertificate,
    pub par_testable: bool,
    pub par_certificate: HilbCertificate,
    /// `α×β ⊆ (α^c×β^d)^{c·d}` within the product dictionary.
    pub mix_inclusion: bool,
    /// Every member of `α×β` is a product ray.
    pub tensor_members_separated: bool,
    pub par_members: Vec<ParMember>,
}

/// The product dictionary of two Hilbert testables: all pairwise Kronecker
/// rays (row-major) plus user-supplied extra rays.
pub fn product_dictionary(a: &RayDict, b: &RayDict, extra: &[Ray], tol: f64) -> Result<RayDict> {
    let mut rays = Vec::with_capacity(a.len() * b.len() + extra.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            rays.push(a.ray(i).kron(b.ray(j), tol));
        }
    }
    rays.extend_from_slice(extra);
    RayDict::new(format!("({}x{})", a.name, b.name), a.dim() * b.dim(), rays, tol)
}

/// Schmidt rank of a product-space ray: the rank of its coefficient matrix.
pub fn schmidt_rank(r: &Ray, dim_left: usize, dim_right: usize, tol: f64) -> Result<usize> {
    if r.dim() != dim_left * dim_right {
        return Err(Error::invalid("schmidt_rank", "dimension mismatch"));
    }
    let m = LinearMap::new(dim_left, dim_right, r.coords().to_vec())?;
    rank(&m, tol)
}

/// Tensor and par of two Hilbert testables within a shared product
/// dictionary, with testability re-checks, the mix inclusion, and the
/// separation classification of par members by Schmidt rank.
pub fn hilb_structure(
    a: &HilbTestable,
    b: &HilbTestable,
    extra: &[Ray],
    tol: f64,
) -> Result<HilbStructureReport> {
    let dict = product_dictionary(&a.universe, &b.universe, extra, tol)?;
    let cd = a.c * b.c;
    let nb = b.universe.len();

    let tensor_alpha: Vec<usize> = {
        let mut v: Vec<usize> = a
            .alpha
            .iter()
            .flat_map(|&i| b.alpha.iter().map(move |&j| i * nb + j))
            .collect();
        v.sort_unstable();
        v
    };
    let b_comp = b.complement_indices(tol);
    let constraints: Vec<usize> = a
        .complement_indices(tol)
        .iter()
        .flat_map(|&i| b_comp.iter().map(move |&j| i * nb + j))
        .collect();
    let par_alpha: Vec<usize> = (0..dict.len())
        .filter(|&k| {
            constraints
                .iter()
                .all(|&w| (colinearity(dict.ray(k), dict.ray(w)).unwrap() - cd).abs() <= tol)
        })
        .collect();

    let (tensor_testable, tensor_certificate) = is_hilb_testable(&tensor_alpha, cd, &dict, tol);
    let (par_testable, par_certificate) = is_hilb_testable(&par_alpha, cd, &dict, tol);
    let mix_inclusion = tensor_alpha.iter().all(|i| par_alpha.contains(i));

    let dl = a.universe.dim();
    let dr = b.universe.dim();
    let mut tensor_members_separated = true;
    for &i in &tensor_alpha {
        if schmidt_rank(dict.ray(i), dl, dr, tol)? != 1 {
            tensor_members_separated = false;
        }
    }
    let par_members = par_alpha
        .iter()
        .map(|&k| {
            let rank = schmidt_rank(dict.ray(k), dl, dr, tol)?;
            Ok(ParMember {
                index: k,
                schmidt_rank: rank,
                entangled: rank >= 2,
                in_tensor: tensor_alpha.contains(&k),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(HilbStructureReport {
        product_universe: dict.name.clone(),
        c: cd,
        tensor_alpha,
        par_alpha,
        tensor_testable,
        tensor_certificate,
        par_testable,
        par_certificate,
        mix_inclusion,
        tensor_members_separated,
        par_members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhilb::ray::c_complement;
    use crate::fhilb::dictionaries::{mub_w_pair, pauli_six, product_18};
    use std::f64::consts::FRAC_1_SQRT_2;

    const TOL: f64 = 1e-9;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn variant_tag_algebra() {
        use SpaceVariant::*;
        assert_eq!(Dual.compose(Dual), Plain);
        assert_eq!(Conjugate.compose(Conjugate), Plain);
        assert_eq!(Dual.compose(Conjugate), DoubleDagger);
        assert_eq!(DoubleDagger.compose(DoubleDagger), Plain);
    }

    #[test]
    fn riesz_is_coordinate_conjugation() {
        let r = riesz(2);
        let v = vec![c(1., 2.), c(0., -1.)];
        assert_eq!(r.apply(&v), vec![c(1., -2.), c(0., 1.)]);
    }

    #[test]
    fn prop_units_are_neutral() {
        let a = PropObject::plain(
            Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap(),
        );
        let ta = prop_tensor(&prop_top(), &a, TOL).unwrap();
        assert!(ta.subspace.approx_eq(&a.subspace, TOL));
        let pa = prop_par(&prop_bottom(), &a, TOL).unwrap();
        assert!(pa.subspace.approx_eq(&a.subspace, TOL));
    }

    #[test]
    fn prop_dimension_formulas() {
        let e0 = PropObject::plain(
            Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap(),
        );
        let report = prop_structure(&e0, &e0, TOL).unwrap();
        assert_eq!(report.tensor_dim, 1);
        assert_eq!(report.par_dim, 3);
        assert!(report.tensor_dim_formula_ok && report.par_dim_formula_ok);
        assert!(report.mix_inclusion);
    }

    #[test]
    fn hilb_star_is_involutive() {
        let z = HilbTestable::try_new(pauli_six(), vec![0, 1], FRAC_1_SQRT_2, TOL).unwrap();
        let star = hilb_star(&z, TOL);
        assert_eq!(star.alpha, vec![2, 3, 4, 5]);
        assert_eq!(hilb_star(&star, TOL).alpha, z.alpha);
    }

    #[test]
    fn unit_tensor_keeps_the_object() {
        let z = HilbTestable::try_new(mub_w_pair(), vec![0, 1], FRAC_1_SQRT_2, TOL).unwrap();
        let unit = hilb_unit(TOL);
        let report = hilb_structure(&unit, &z, &[], TOL).unwrap();
        assert_eq!(report.tensor_alpha, vec![0, 1]);
        assert!((report.c - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(report.tensor_testable);
    }

    #[test]
    fn bell_rays_live_in_the_par_but_not_the_tensor() {
        let z = HilbTestable::try_new(mub_w_pair(), vec![0, 1], FRAC_1_SQRT_2, TOL).unwrap();
        let bells: Vec<Ray> = product_18()
            .rays()
            .iter()
            .skip(16)
            .cloned()
            .collect();
        let report = hilb_structure(&z, &z, &bells, TOL).unwrap();
        assert_eq!(report.tensor_alpha, vec![0, 1, 4, 5]);
        assert_eq!(report.par_alpha, vec![0, 1, 4, 5, 16, 17]);
        assert!(report.mix_inclusion);
        assert!(report.tensor_members_separated);
        let bell_members: Vec<&ParMember> = report
            .par_members
            .iter()
            .filter(|m| m.index >= 16)
            .collect();
        assert_eq!(bell_members.len(), 2);
        assert!(bell_members.iter().all(|m| m.entangled && m.schmidt_rank == 2));
    }

    #[test]
    fn star_of_tensor_equals_par_of_stars_within_dictionary() {
        let z = HilbTestable::try_new(mub_w_pair(), vec![0, 1], FRAC_1_SQRT_2, TOL).unwrap();
        let report = hilb_structure(&z, &z, &[], TOL).unwrap();
        // (A ⊗ B)^* within the dictionary
        let dict = product_dictionary(&z.universe, &z.universe, &[], TOL).unwrap();
        let lhs = c_complement(&report.tensor_alpha, report.c, &dict, TOL);
        // A* ⅋ B* within the same dictionary
        let star = hilb_star(&z, TOL);
        let report2 = hilb_structure(&star, &star, &[], TOL).unwrap();
        assert_eq!(lhs, report2.par_alpha);
    }
}
