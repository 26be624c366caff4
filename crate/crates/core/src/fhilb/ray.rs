//! Rays, finite ray dictionaries, colinearity, and c-complements.
//!
//! The c-complement quantifies over a finite dictionary of rays, an explicit
//! stand-in for the full ray space; every testability verdict is therefore
//! relative to its universe dictionary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fhilb::matrix::{inner, norm, rank, vec_from_json, vec_to_json, LinearMap};

type C64 = Complex64;

/// A ray in `C^d`: a unit representative with canonical global phase (the
/// first coordinate of magnitude above tolerance is made real positive).
#[derive(Clone, Debug)]
pub struct Ray {
    coords: Vec<C64>,
}

impl Ray {
    pub fn new(coords: Vec<C64>, tol: f64) -> Result<Self> {
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("ray", "non-finite coordinate"));
        }
        let n = norm(&coords);
        if n <= tol {
            return Err(Error::invalid("ray", "zero vector has no ray"));
        }
        let mut v: Vec<C64> = coords.iter().map(|z| z / n).collect();
        if let Some(lead) = v.iter().find(|z| z.norm() > tol).copied() {
            let phase = lead.conj() / lead.norm();
            for z in v.iter_mut() {
                *z *= phase;
            }
        }
        Ok(Ray { coords: v })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn conjugate(&self, tol: f64) -> Ray {
        Ray::new(self.coords.iter().map(|z| z.conj()).collect(), tol).unwrap()
    }

    pub fn kron(&self, other: &Ray, tol: f64) -> Ray {
        let mut coords = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.coords {
            for b in &other.coords {
                coords.push(a * b);
            }
        }
        Ray::new(coords, tol).unwrap()
    }
}

/// `∠(a,b) = |⟨x|y⟩| / (|x||y|)`; representatives are unit vectors, so this
/// is the magnitude of the inner product.
pub fn colinearity(a: &Ray, b: &Ray) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::BoundaryMismatch {
            op: "colinearity",
            left: format!("dim {}", a.dim()),
            right: format!("dim {}", b.dim()),
        });
    }
    Ok(inner(a.coords(), b.coords()).norm().min(1.0))
}

pub fn rays_equal(a: &Ray, b: &Ray, tol: f64) -> bool {
    a.dim() == b.dim() && (colinearity(a, b).unwrap() - 1.0).abs() <= tol
}

/// A named finite dictionary of pairwise distinct rays.
#[derive(Clone, Debug)]
pub struct RayDict {
    pub name: String,
    dim: usize,
    rays: Vec<Ray>,
}

impl RayDict {
    pub fn new(name: impl Into<String>, dim: usize, rays: Vec<Ray>, tol: f64) -> Result<Self> {
        let name = name.into();
        for r in &rays {
            if r.dim() != dim {
                return Err(Error::invalid(
                    format!("dictionary {name}"),
                    "ray dimension differs from ambient",
                ));
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays_equal(&rays[i], &rays[j], tol) {
                    return Err(Error::invalid(
                        format!("dictionary {name}"),
                        format!("rays {i} and {j} coincide after canonicalization"),
                    ));
                }
            }
        }
        Ok(RayDict { name, dim, rays })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray(&self, i: usize) -> &Ray {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn index_of(&self, r: &Ray, tol: f64) -> Option<usize> {
        self.rays.iter().position(|x| rays_equal(x, r, tol))
    }

    pub fn conjugate(&self, tol: f64) -> RayDict {
        RayDict {
            name: format!("conj({})", self.name),
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.conjugate(tol)).collect(),
        }
    }
}

/// All dictionary rays whose colinearity to every member of `alpha` equals
/// `c` within tolerance. The result is a sorted index set; `alpha` indexes
/// into the same dictionary.
pub fn c_complement(alpha: &[usize], c: f64, universe: &RayDict, tol: f64) -> Vec<usize> {
    (0..universe.len())
        .filter(|&i| {
            alpha.iter().all(|&j| {
                (colinearity(universe.ray(i), universe.ray(j)).unwrap() - c).abs() <= tol
            })
        })
        .collect()
}

fn spans(indices: &[usize], universe: &RayDict, tol: f64) -> bool {
    let columns: Vec<Vec<C64>> = indices
        .iter()
        .map(|&i| universe.ray(i).coords().to_vec())
        .collect();
    let m = LinearMap::from_columns(universe.dim(), &columns);
    rank(&m, tol).map(|r| r == universe.dim()).unwrap_or(false)
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbCertificate {
    pub complement: Vec<usize>,
    pub double_complement: Vec<usize>,
    pub alpha_spans: bool,
    pub complement_spans: bool,
    pub double_complement_equals_alpha: bool,
}

/// `<α, c>` is a testable within the dictionary when both `α` and `α^c`
/// span the ambient space and `α^{cc} = α`.
pub fn is_hilb_testable(
    alpha: &[usize],
    c: f64,
    universe: &RayDict,
    tol: f64,
) -> (bool, HilbCertificate) {
    let mut alpha_sorted = alpha.to_vec();
    alpha_sorted.sort_unstable();
    alpha_sorted.dedup();
    let complement = c_complement(&alpha_sorted, c, universe, tol);
    let double_complement = c_complement(&complement, c, universe, tol);
    let alpha_spans = spans(&alpha_sorted, universe, tol);
    let complement_spans = spans(&complement, universe, tol);
    let double_ok = double_complement == alpha_sorted;
    let cert = HilbCertificate {
        complement,
        double_complement,
        alpha_spans,
        complement_spans,
        double_complement_equals_alpha: double_ok,
    };
    (alpha_spans && complement_spans && double_ok, cert)
}

/// A validated Hilbert testable `<H, α, c>` within a finite universe.
#[derive(Clone, Debug)]
pub struct HilbTestable {
    pub universe: RayDict,
    pub alpha: Vec<usize>,
    pub c: f64,
}

impl HilbTestable {
    pub fn try_new(universe: RayDict, mut alpha: Vec<usize>, c: f64, tol: f64) -> Result<Self> {
        alpha.sort_unstable();
        alpha.dedup();
        if alpha.iter().any(|&i| i >= universe.len()) {
            return Err(Error::invalid("Hilbert testable", "alpha index out of range"));
        }
        let (ok, cert) = is_hilb_testable(&alpha, c, &universe, tol);
        if !ok {
            return Err(Error::invalid(
                "Hilbert testable",
                format!(
                    "not a testable within {}: spans={}/{} double={:?}",
                    universe.name, cert.alpha_spans, cert.complement_spans, cert.double_complement
                ),
            ));
        }
        Ok(HilbTestable { universe, alpha, c })
    }

    pub fn complement_indices(&self, tol: f64) -> Vec<usize> {
        c_complement(&self.alpha, self.c, &self.universe, tol)
    }

    pub fn alpha_rays(&self) -> Vec<&Ray> {
        self.alpha.iter().map(|&i| self.universe.ray(i)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbMorphismCheck {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// `<α,c> |f| <β,d>` iff `f` carries every α-ray into β and `f†` carries
/// every `β^d`-ray into `α^c`. A ray annihilated by the map is a failure:
/// a zero image is not a ray.
pub fn hilb_morphism_check(
    f: &LinearMap,
    a: &HilbTestable,
    b: &HilbTestable,
    tol: f64,
) -> Result<HilbMorphismCheck> {
    if f.cols() != a.universe.dim() || f.rows() != b.universe.dim() {
        return Err(Error::BoundaryMismatch {
            op: "hilb_morphism_check",
            left: format!("map {}x{}", f.rows(), f.cols()),
            right: format!("objects {} -> {}", a.universe.dim(), b.universe.dim()),
        });
    }
    let mut failures = Vec::new();
    let beta_members: Vec<&Ray> = b.alpha.iter().map(|&i| b.universe.ray(i)).collect();
    for &i in &a.alpha {
        let image = f.apply(a.universe.ray(i).coords());
        match Ray::new(image, tol) {
            Err(_) => failures.push(format!("map annihilates alpha ray {i}")),
            Ok(r) => {
                if !beta_members.iter().any(|m| rays_equal(m, &r, tol)) {
                    failures.push(format!("image of alpha ray {i} is not a beta ray"));
                }
            }
        }
    }
    let fd = f.dagger();
    let alpha_c = a.complement_indices(tol);
    let alpha_c_members: Vec<&Ray> = alpha_c.iter().map(|&i| a.universe.ray(i)).collect();
    for &j in &b.complement_indices(tol) {
        let image = fd.apply(b.universe.ray(j).coords());
        match Ray::new(image, tol) {
            Err(_) => failures.push(format!("adjoint annihilates beta-complement ray {j}")),
            Ok(r) => {
                if !alpha_c_members.iter().any(|m| rays_equal(m, &r, tol)) {
                    failures.push(format!(
                        "adjoint image of beta-complement ray {j} is not an alpha-complement ray"
                    ));
                }
            }
        }
    }
    Ok(HilbMorphismCheck {
        pass: failures.is_empty(),
        failures,
    })
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RayDictJson {
    name: String,
    dim: usize,
    rays: Vec<Vec<[f64; 2]>>,
}

impl Serialize for RayDict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RayDictJson {
            name: self.name.clone(),
            dim: self.dim,
            rays: self.rays.iter().map(|r| vec_to_json(r.coords())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RayDict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RayDictJson::deserialize(d)?;
        let rays: Result<Vec<Ray>> = raw
            .rays
            .iter()
            .map(|r| Ray::new(vec_from_json(r), 1e-12))
            .collect();
        RayDict::new(raw.name, raw.dim, rays.map_err(serde::de::Error::custom)?, 1e-9)
            .map_err(serde::de::Error::custom)
    }
}
