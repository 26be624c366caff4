//! Quantum probability measures on finite subspace samples: Born measures
//! from density matrices, the measure axioms, and measure preservation
//! along linear maps.
//!
//! Measures are only ever verified on finite samples of the subspace
//! lattice; samples carry their declared orthogonal pairs explicitly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fhilb::{hermitian_eigenvalues, image_subspace, LinearMap, Subspace};
use crate::report::{Failure, VerificationReport};

type C64 = Complex64;

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, Serialize)]
pub struct DensityMatrix {
    dim: usize,
    matrix: LinearMap,
}

impl DensityMatrix {
    pub fn new(matrix: LinearMap, tol: f64) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::invalid("density matrix", "not square"));
        }
        if !matrix.is_hermitian(tol) {
            return Err(Error::invalid("density matrix", "not Hermitian"));
        }
        let eigs = hermitian_eigenvalues(&matrix, 1e-12)?;
        if eigs.iter().any(|&e| e < -tol) {
            return Err(Error::invalid(
                "density matrix",
                format!("negative eigenvalue {:?}", eigs.last()),
            ));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::invalid("density matrix", format!("trace {tr} is not 1")));
        }
        Ok(DensityMatrix {
            dim: matrix.rows(),
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &LinearMap {
        &self.matrix
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = LinearMap::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { dim, matrix: m }
    }

    /// A random density `AA†/tr(AA†)` with Gaussian-free uniform entries.
    pub fn random(dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let data: Vec<C64> = (0..dim * dim)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let a = LinearMap::new(dim, dim, data).unwrap();
        let aa = a.mul(&a.dagger()).unwrap();
        let tr = aa.trace().re;
        DensityMatrix {
            dim,
            matrix: aa.scale(C64::new(1.0 / tr, 0.0)),
        }
    }
}

/// `tr(ρ·P_χ)`, the Born value of a subspace. Raw (unclamped); reports
/// clamp to [0,1].
pub fn born_measure(rho: &DensityMatrix, chi: &Subspace) -> Result<f64> {
    if chi.ambient_dim() != rho.dim {
        return Err(Error::BoundaryMismatch {
            op: "born_measure",
            left: format!("density dim {}", rho.dim),
            right: format!("subspace ambient {}", chi.ambient_dim()),
        });
    }
    Ok(rho.matrix.mul(&chi.projector())?.trace().re)
}

// ---------------------------------------------------------------------------
// MeasureSample
// ---------------------------------------------------------------------------

/// A finite family of subspaces closed under a declared set of orthogonal
/// pairs, always containing the zero and full subspaces.
#[derive(Clone, Debug)]
pub struct MeasureSample {
    dim: usize,
    subspaces: BTreeMap<String, Subspace>,
    /// (chi, kappa, chi ⊕ kappa) by id
    orthogonal_pairs: Vec<(String, String, String)>,
    zero_id: String,
    full_id: String,
}

impl MeasureSample {
    pub fn new(
        dim: usize,
        subspaces: BTreeMap<String, Subspace>,
        orthogonal_pairs: Vec<(String, String, String)>,
        tol: f64,
    ) -> Result<Self> {
        for (id, s) in &subspaces {
            if s.ambient_dim() != dim {
                return Err(Error::invalid(
                    "measure sample",
                    format!("subspace {id:?} has wrong ambient dimension"),
                ));
            }
        }
        let zero_id = subspaces
            .iter()
            .find(|(_, s)| s.dim() == 0)
            .map(|(id, _)| id.clone())
            .ok_or_else(|| Error::invalid("measure sample", "zero subspace absent"))?;
        let full_id = subspaces
            .iter()
            .find(|(_, s)| s.dim() == dim)
            .map(|(id, _)| id.clone())
            .ok_or_else(|| Error::invalid("measure sample", "full subspace absent"))?;
        for (a, b, sum) in &orthogonal_pairs {
            let (sa, sb) = (
                subspaces.get(a).ok_or_else(|| Error::Missing { what: "subspace", name: a.clone() })?,
                subspaces.get(b).ok_or_else(|| Error::Missing { what: "subspace", name: b.clone() })?,
            );
            for u in sa.basis() {
                for v in sb.basis() {
                    let ip: C64 = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
                    if ip.norm() > tol {
                        return Err(Error::invalid(
                            "measure sample",
                            format!("pair ({a:?},{b:?}) is not orthogonal"),
                        ));
                    }
                }
            }
            let ssum = subspaces.get(sum).ok_or_else(|| Error::Missing {
                what: "subspace",
                name: sum.clone(),
            })?;
            let mut vectors: Vec<Vec<C64>> = sa.basis().to_vec();
            vectors.extend_from_slice(sb.basis());
            let direct = Subspace::span(dim, &vectors, tol)?;
            if !direct.approx_eq(ssum, tol) {
                return Err(Error::invalid(
                    "measure sample",
                    format!("registered sum {sum:?} differs from the direct sum of ({a:?},{b:?})"),
                ));
            }
        }
        Ok(MeasureSample {
            dim,
            subspaces,
            orthogonal_pairs,
            zero_id,
            full_id,
        })
    }

    /// Seeded random sample: `pair_count` orthogonal triples plus zero and
    /// the full space.
    pub fn generate(dim: usize, pair_count: usize, seed: u64, tol: f64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut subspaces = BTreeMap::new();
        subspaces.insert("zero".to_string(), Subspace::zero(dim));
        subspaces.insert("full".to_string(), Subspace::full(dim));
        let mut pairs = Vec::new();
        for k in 0..pair_count {
            let chi_dim = rng.gen_range(1..dim);
            let chi = random_subspace(dim, chi_dim, &mut rng, tol)?;
            let ann = chi.annihilator(tol);
            let kappa_dim = rng.gen_range(1..=ann.dim());
            let kappa = random_inside(&ann, kappa_dim, &mut rng, tol)?;
            let mut vectors = chi.basis().to_vec();
            vectors.extend_from_slice(kappa.basis());
            let sum = Subspace::span(dim, &vectors, tol)?;
            let (ida, idb, idsum) = (format!("chi{k}"), format!("kappa{k}"), format!("sum{k}"));
            subspaces.insert(ida.clone(), chi);
            subspaces.insert(idb.clone(), kappa);
            subspaces.insert(idsum.clone(), sum);
            pairs.push((ida, idb, idsum));
        }
        MeasureSample::new(dim, subspaces, pairs, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subspaces(&self) -> &BTreeMap<String, Subspace> {
        &self.subspaces
    }

    pub fn orthogonal_pairs(&self) -> &[(String, String, String)] {
        &self.orthogonal_pairs
    }

    pub fn zero_id(&self) -> &str {
        &self.zero_id
    }

    pub fn full_id(&self) -> &str {
        &self.full_id
    }

    /// Find a sample member equal (within tolerance) to the given subspace.
    pub fn find(&self, s: &Subspace, tol: f64) -> Option<&str> {
        self.subspaces
            .iter()
            .find(|(_, t)| t.approx_eq(s, tol))
            .map(|(id, _)| id.as_str())
    }
}

pub fn random_subspace(dim: usize, rank: usize, rng: &mut ChaCha8Rng, tol: f64) -> Result<Subspace> {
    loop {
        let vectors: Vec<Vec<C64>> = (0..rank)
            .map(|_| {
                (0..dim)
                    .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        let s = Subspace::span(dim, &vectors, tol)?;
        if s.dim() == rank {
            return Ok(s);
        }
    }
}

fn random_inside(ambient: &Subspace, rank: usize, rng: &mut ChaCha8Rng, tol: f64) -> Result<Subspace> {
    loop {
        let vectors: Vec<Vec<C64>> = (0..rank)
            .map(|_| {
                let coeffs: Vec<C64> = (0..ambient.dim())
                    .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect();
                let mut v = vec![C64::new(0.0, 0.0); ambient.ambient_dim()];
                for (c, b) in coeffs.iter().zip(ambient.basis()) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += c * bi;
                    }
                }
                v
            })
            .collect();
        let s = Subspace::span(ambient.ambient_dim(), &vectors, tol)?;
        if s.dim() == rank {
            return Ok(s);
        }
    }
}

// ---------------------------------------------------------------------------
// Measure axioms and morphisms
// ---------------------------------------------------------------------------

/// A measure assignment on a sample, by subspace id.
pub type MeasureTable = BTreeMap<String, f64>;

/// Tabulate the Born measure of a density on every sample member, clamped
/// to [0,1].
pub fn born_table(rho: &DensityMatrix, sample: &MeasureSample) -> Result<MeasureTable> {
    sample
        .subspaces()
        .iter()
        .map(|(id, s)| Ok((id.clone(), born_measure(rho, s)?.clamp(0.0, 1.0))))
        .collect()
}

/// Verify `μ(0) = 0`, `μ(H) = 1`, and additivity on every declared
/// orthogonal pair. Missing table entries are an error, not a failure.
pub fn check_measure_axioms(
    table: &MeasureTable,
    sample: &MeasureSample,
    tol: f64,
) -> Result<VerificationReport> {
    for id in sample.subspaces().keys() {
        if !table.contains_key(id) {
            return Err(Error::Missing {
                what: "measure table entry",
                name: id.clone(),
            });
        }
    }
    let mut report = VerificationReport::passing();
    let zero = table[sample.zero_id()];
    if zero.abs() > tol {
        report.push(Failure::new(
            "zero-subspace",
            vec![sample.zero_id().to_string()],
            format!("measure of the zero subspace is {zero}, not 0"),
        ));
    }
    let full = table[sample.full_id()];
    if (full - 1.0).abs() > tol {
        report.push(Failure::new(
            "normalization",
            vec![sample.full_id().to_string()],
            format!("measure of the full space is {full}, not 1"),
        ));
    }
    for (a, b, sum) in sample.orthogonal_pairs() {
        let gap = (table[sum] - table[a] - table[b]).abs();
        if gap > tol {
            report.push(Failure::new(
                "additivity",
                vec![a.clone(), b.clone(), sum.clone()],
                format!("additivity gap {gap:.3e}"),
            ));
        }
    }
    Ok(report.finish())
}

/// `μ |f| ν` iff `μ(χ) = ν(fχ)` for every sampled `χ`. The image of every
/// sampled subspace must itself be registered in the codomain sample.
pub fn measure_morphism_check(
    f: &LinearMap,
    mu: &MeasureTable,
    dom_sample: &MeasureSample,
    nu: &MeasureTable,
    cod_sample: &MeasureSample,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::passing();
    for (id, chi) in dom_sample.subspaces() {
        let image = image_subspace(f, chi, tol)?;
        let target = cod_sample.find(&image, tol).ok_or_else(|| Error::Missing {
            what: "image subspace in codomain sample",
            name: id.clone(),
        })?;
        let gap = (mu[id] - nu[target]).abs();
        if gap > tol {
            report.push(Failure::new(
                "preservation",
                vec![id.clone(), target.to_string()],
                format!("measures differ by {gap:.3e}"),
            ));
        }
    }
    Ok(report.finish())
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct MeasureSampleJson {
    pub dim: usize,
    pub subspaces: BTreeMap<String, Subspace>,
    pub orthogonal_pairs: Vec<(String, String, String)>,
}

impl MeasureSample {
    pub fn to_json(&self) -> MeasureSampleJson {
        MeasureSampleJson {
            dim: self.dim,
            subspaces: self.subspaces.clone(),
            orthogonal_pairs: self.orthogonal_pairs.clone(),
        }
    }

    pub fn from_json(raw: MeasureSampleJson, tol: f64) -> Result<Self> {
        MeasureSample::new(raw.dim, raw.subspaces, raw.orthogonal_pairs, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pure_zero() -> DensityMatrix {
        let m = LinearMap::new(
            2,
            2,
            vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)],
        )
        .unwrap();
        DensityMatrix::new(m, TOL).unwrap()
    }

    #[test]
    fn born_values_on_basis_lines() {
        let rho = pure_zero();
        let e0 = Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap();
        let e1 = Subspace::span(2, &[vec![c(0., 0.), c(1., 0.)]], TOL).unwrap();
        assert!((born_measure(&rho, &e0).unwrap() - 1.0).abs() < 1e-12);
        assert!(born_measure(&rho, &e1).unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        let diag = Subspace::span(2, &[vec![c(1., 0.), c(1., 0.)]], TOL).unwrap();
        assert!((born_measure(&mixed, &diag).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn density_validation_rejects_bad_inputs() {
        let not_herm = LinearMap::new(2, 2, vec![c(1., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(DensityMatrix::new(not_herm, TOL).is_err());
        let wrong_trace = LinearMap::identity(2);
        assert!(DensityMatrix::new(wrong_trace, TOL).is_err());
        let negative = LinearMap::new(
            2,
            2,
            vec![c(1.5, 0.), c(0., 0.), c(0., 0.), c(-0.5, 0.)],
        )
        .unwrap();
        assert!(DensityMatrix::new(negative, TOL).is_err());
    }

    #[test]
    fn born_measures_satisfy_the_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 2..=4 {
            let sample = MeasureSample::generate(dim, 4, 100 + dim as u64, TOL).unwrap();
            let rho = DensityMatrix::random(dim, &mut rng);
            let table = born_table(&rho, &sample).unwrap();
            let report = check_measure_axioms(&table, &sample, 1e-7).unwrap();
            assert!(report.pass, "{:?}", report.failures);
        }
    }

    #[test]
    fn constant_zero_fails_normalization() {
        let sample = MeasureSample::generate(3, 2, 42, TOL).unwrap();
        let table: MeasureTable = sample
            .subspaces()
            .keys()
            .map(|k| (k.clone(), 0.0))
            .collect();
        let report = check_measure_axioms(&table, &sample, TOL).unwrap();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.check == "normalization"));
    }

    #[test]
    fn perturbed_born_table_fails_additivity() {
        let sample = MeasureSample::generate(3, 3, 7, TOL).unwrap();
        let rho = DensityMatrix::maximally_mixed(3);
        let mut table = born_table(&rho, &sample).unwrap();
        let (a, _, _) = &sample.orthogonal_pairs()[0];
        *table.get_mut(a).unwrap() += 1e-3;
        let report = check_measure_axioms(&table, &sample, 1e-7).unwrap();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.check == "additivity"));
    }

    #[test]
    fn missing_entry_is_an_error() {
        let sample = MeasureSample::generate(2, 1, 5, TOL).unwrap();
        let table = MeasureTable::new();
        assert!(check_measure_axioms(&table, &sample, TOL).is_err());
    }

    #[test]
    fn identity_preserves_any_measure() {
        let sample = MeasureSample::generate(3, 3, 9, TOL).unwrap();
        let rho = DensityMatrix::random(3, &mut ChaCha8Rng::seed_from_u64(1));
        let table = born_table(&rho, &sample).unwrap();
        let id = LinearMap::identity(3);
        let report =
            measure_morphism_check(&id, &table, &sample, &table, &sample, 1e-7).unwrap();
        assert!(report.pass, "{:?}", report.failures);
    }

    #[test]
    fn rank_one_projection_breaks_preservation() {
        // explicit sample containing span(e1), whose image under the
        // projection is zero
        let e1 = Subspace::span(2, &[vec![c(0., 0.), c(1., 0.)]], TOL).unwrap();
        let e0 = Subspace::span(2, &[vec![c(1., 0.), c(0., 0.)]], TOL).unwrap();
        let mut subs = BTreeMap::new();
        subs.insert("zero".to_string(), Subspace::zero(2));
        subs.insert("full".to_string(), Subspace::full(2));
        subs.insert("e0".to_string(), e0);
        subs.insert("e1".to_string(), e1);
        let pairs = vec![("e0".to_string(), "e1".to_string(), "full".to_string())];
        let sample = MeasureSample::new(2, subs, pairs, TOL).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        let table = born_table(&mixed, &sample).unwrap();
        let proj = LinearMap::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        let report =
            measure_morphism_check(&proj, &table, &sample, &table, &sample, TOL).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn unitary_conjugation_preserves_born_measures() {
        // f unitary, mu = born(f† rho f), nu = born(rho); the domain sample
        // is the codomain sample pulled back through f
        let tol = 1e-7;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dim = 2;
        // a simple unitary: the phase-pi/2 rotation diag(1, i)
        let f = LinearMap::new(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)]).unwrap();
        let rho = DensityMatrix::random(dim, &mut rng);
        let cod_sample = MeasureSample::generate(dim, 3, 21, TOL).unwrap();
        // pull back: domain sample consists of preimages f†(kappa)
        let fd = f.dagger();
        let mut subs = BTreeMap::new();
        for (id, s) in cod_sample.subspaces() {
            subs.insert(id.clone(), image_subspace(&fd, s, TOL).unwrap());
        }
        let dom_sample = MeasureSample::new(
            dim,
            subs,
            cod_sample.orthogonal_pairs().to_vec(),
            tol,
        )
        .unwrap();
        let fr = f.dagger().mul(rho.matrix()).unwrap().mul(&f).unwrap();
        let pulled = DensityMatrix::new(fr, 1e-7).unwrap();
        let mu = born_table(&pulled, &dom_sample).unwrap();
        let nu = born_table(&rho, &cod_sample).unwrap();
        let report = measure_morphism_check(&f, &mu, &dom_sample, &nu, &cod_sample, tol).unwrap();
        assert!(report.pass, "{:?}", report.failures);
    }
}
