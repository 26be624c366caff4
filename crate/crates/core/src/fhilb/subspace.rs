//! Subspaces of coordinate space represented by orthonormal bases:
//! annihilators, images, containment, and the subspace-preservation
//! morphism condition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fhilb::matrix::{inner, norm, orthonormalize, vec_from_json, vec_to_json, LinearMap};

type C64 = Complex64;

/// A subspace of `C^d`, held as an orthonormal column family (possibly empty).
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<C64>>,
}

impl Subspace {
    /// Span of arbitrary vectors, orthonormalized with rank truncation.
    pub fn span(ambient_dim: usize, vectors: &[Vec<C64>], tol: f64) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::invalid("subspace", "vector length differs from ambient"));
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::invalid("subspace", "non-finite coordinate"));
            }
        }
        Ok(Subspace {
            ambient_dim,
            basis: orthonormalize(vectors, tol),
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![C64::new(0.0, 0.0); ambient_dim];
                v[i] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// Residual of `v` against the subspace: `‖(I − P)v‖`.
    pub fn residual(&self, v: &[C64]) -> f64 {
        let mut w = v.to_vec();
        for b in &self.basis {
            let c = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        norm(&w)
    }

    /// `κ ⊇ σ` iff every basis vector of `σ` has residual at most `tol`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        other.basis.iter().all(|v| self.residual(v) <= tol)
    }

    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.contains(other, tol) && other.contains(self, tol)
    }

    /// Orthogonal complement; under the Riesz identification this realizes
    /// the annihilator of the subspace.
    pub fn annihilator(&self, tol: f64) -> Subspace {
        let mut seeds = self.basis.clone();
        for i in 0..self.ambient_dim {
            let mut v = vec![C64::new(0.0, 0.0); self.ambient_dim];
            v[i] = C64::new(1.0, 0.0);
            seeds.push(v);
        }
        let all = orthonormalize(&seeds, tol);
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: all[self.basis.len()..].to_vec(),
        }
    }

    /// Coordinate-wise conjugate of the subspace.
    pub fn conjugate(&self) -> Subspace {
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(|z| z.conj()).collect())
                .collect(),
        }
    }

    pub fn projector(&self) -> LinearMap {
        let mut p = LinearMap::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            for i in 0..self.ambient_dim {
                for j in 0..self.ambient_dim {
                    let v = p.get(i, j) + b[i] * b[j].conj();
                    p.set(i, j, v);
                }
            }
        }
        p
    }
}

/// Image of a subspace under a linear map, orthonormalized with rank
/// truncation at `tol`.
pub fn image_subspace(f: &LinearMap, chi: &Subspace, tol: f64) -> Result<Subspace> {
    if f.cols() != chi.ambient_dim() {
        return Err(Error::BoundaryMismatch {
            op: "image_subspace",
            left: format!("map domain {}", f.cols()),
            right: format!("subspace ambient {}", chi.ambient_dim()),
        });
    }
    let images: Vec<Vec<C64>> = chi.basis().iter().map(|v| f.apply(v)).collect();
    Subspace::span(f.rows(), &images, tol)
}

/// `χ |f| κ` iff `fχ ⊆ κ`.
pub fn prop_morphism_check(f: &LinearMap, chi: &Subspace, kappa: &Subspace, tol: f64) -> Result<bool> {
    if kappa.ambient_dim() != f.rows() {
        return Err(Error::BoundaryMismatch {
            op: "prop_morphism_check",
            left: format!("map codomain {}", f.rows()),
            right: format!("subspace ambient {}", kappa.ambient_dim()),
        });
    }
    Ok(kappa.contains(&image_subspace(f, chi, tol)?, tol))
}

// JSON: a subspace is its ambient dimension plus basis vectors
#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    basis: Vec<Vec<[f64; 2]>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|v| vec_to_json(v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(d)?;
        let vectors: Vec<Vec<C64>> = raw.basis.iter().map(|v| vec_from_json(v)).collect();
        Subspace::span(raw.ambient_dim, &vectors, 1e-12).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const TOL: f64 = 1e-9;

    #[test]
    fn annihilator_of_diagonal_line() {
        let chi = Subspace::span(2, &[vec![c(1., 0.), c(1., 0.)]], TOL).unwrap();
        let ann = chi.annihilator(TOL);
        assert_eq!(ann.dim(), 1);
        let expected = Subspace::span(2, &[vec![c(1., 0.), c(-1., 0.)]], TOL).unwrap();
        assert!(ann.approx_eq(&expected, TOL));
        assert!(ann.annihilator(TOL).approx_eq(&chi, TOL));
    }

    #[test]
    fn annihilator_extremes() {
        let z = Subspace::zero(3);
        assert!(z.annihilator(TOL).approx_eq(&Subspace::full(3), TOL));
        assert!(Subspace::full(3).annihilator(TOL).approx_eq(&z, TOL));
    }

    #[test]
    fn image_of_projection() {
        // f = projection onto e0; chi = span(e0+e1)
        let f = LinearMap::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let chi = Subspace::span(2, &[vec![c(1., 0.), c(1., 0.)]], TOL).unwrap();
        let img = image_subspace(&f, &chi, TOL).unwrap();
        let e0 = Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap();
        assert!(img.approx_eq(&e0, TOL));
        // identity image is the subspace itself, and contains(chi,chi)
        let id = LinearMap::identity(2);
        assert!(image_subspace(&id, &chi, TOL).unwrap().approx_eq(&chi, TOL));
        assert!(chi.contains(&chi, TOL));
    }

    #[test]
    fn containment_fails_across_lines() {
        let e0 = Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap();
        let diag = Subspace::span(2, &[vec![c(1., 0.), c(1., 0.)]], TOL).unwrap();
        assert!(!e0.contains(&diag, TOL));
        // residual of the unit diagonal against e0 is 1/sqrt(2)
        let r = e0.residual(&[c(1.0 / 2f64.sqrt(), 0.), c(1.0 / 2f64.sqrt(), 0.)]);
        assert!((r - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn morphism_check_examples() {
        let chi = Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap();
        // identity passes
        assert!(prop_morphism_check(&LinearMap::identity(2), &chi, &chi, TOL).unwrap());
        // zero map passes everywhere
        let zero = LinearMap::zeros(2, 2);
        assert!(prop_morphism_check(&zero, &chi, &Subspace::zero(2), TOL).unwrap());
        // swap moves e0 off itself
        let swap = LinearMap::new(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        assert!(!prop_morphism_check(&swap, &chi, &chi, TOL).unwrap());
    }

    #[test]
    fn projector_traces_dimension() {
        let chi = Subspace::span(
            3,
            &[
                vec![c(1., 0.), c(0., 0.), c(0., 0.)],
                vec![c(0., 0.), c(0., 1.), c(0., 0.)],
            ],
            TOL,
        )
        .unwrap();
        let p = chi.projector();
        assert!((p.trace().re - 2.0).abs() < 1e-12);
        assert!(p.mul(&p).unwrap().max_abs_diff(&p) < 1e-12);
    }
}
