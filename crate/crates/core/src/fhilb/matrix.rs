//! Dense complex matrices with the handful of numerical routines the
//! Hilbert-space models need: products, adjoints, Kronecker products,
//! modified Gram-Schmidt, and a Jacobi eigensolver for Hermitian matrices
//! (ranks and singular values come from it). Dimensions are desk-scale, so
//! everything favours clarity and determinism over speed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A complex matrix, row-major. Also used for single vectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl LinearMap {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::invalid(
                "matrix",
                format!("expected {} entries, got {}", rows * cols, data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix", "non-finite entry"));
        }
        Ok(LinearMap { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearMap {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = LinearMap::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        LinearMap { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<C64>]) -> Self {
        LinearMap::from_fn(dim, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.cols != other.rows {
            return Err(Error::BoundaryMismatch {
                op: "matrix multiply",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = LinearMap::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> LinearMap {
        LinearMap::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> LinearMap {
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn kron(&self, other: &LinearMap) -> LinearMap {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        LinearMap::from_fn(rows, cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> LinearMap {
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        LinearMap {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LinearMap) -> LinearMap {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &LinearMap) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows == self.cols && self.max_abs_diff(&self.dagger()) <= tol
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    inner(a, a).re.max(0.0).sqrt()
}

/// Modified Gram-Schmidt with re-orthogonalization: an orthonormal basis of
/// the span, dropping vectors whose residual falls below `tol`.
pub fn orthonormalize(vectors: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = norm(&w);
        if n > tol {
            for wi in w.iter_mut() {
                *wi /= n;
            }
            basis.push(w);
        }
    }
    basis
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, sorted
/// descending. Convergence is quadratic; 50 sweeps is far beyond what the
/// dimensions here ever need.
pub fn hermitian_eigenvalues(m: &LinearMap, tol: f64) -> Result<Vec<f64>> {
    if m.rows != m.cols {
        return Err(Error::invalid("eigenvalue input", "not square"));
    }
    if !m.is_hermitian(tol.max(1e-7)) {
        return Err(Error::invalid("eigenvalue input", "not Hermitian"));
    }
    let n = m.rows;
    let mut h = m.clone();
    let off = |h: &LinearMap| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += h.get(p, q).norm_sqr();
            }
        }
        s.sqrt()
    };
    for _ in 0..50 {
        if off(&h) <= tol.max(1e-14) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let hpq = h.get(p, q);
                let habs = hpq.norm();
                if habs < 1e-300 {
                    continue;
                }
                let phase = hpq / habs;
                let a = h.get(p, p).re;
                let b = h.get(q, q).re;
                let tau = (b - a) / (2.0 * habs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: col_p' = c col_p - s phase* col_q ; col_q' = s col_p + c phase* col_q
                for i in 0..n {
                    let vp = h.get(i, p);
                    let vq = h.get(i, q);
                    h.set(i, p, vp * c - vq * phase.conj() * s);
                    h.set(i, q, vp * s + vq * phase.conj() * c);
                }
                // rows: row_p' = c row_p - s phase row_q ; row_q' = s row_p + c phase row_q
                for j in 0..n {
                    let vp = h.get(p, j);
                    let vq = h.get(q, j);
                    h.set(p, j, vp * c - vq * phase * s);
                    h.set(q, j, vp * s + vq * phase * c);
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| h.get(i, i).re).collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(eigs)
}

/// Singular values, descending, by one-sided Jacobi: rotate column pairs
/// until all are mutually orthogonal, then read off the column norms. This
/// keeps full precision on small singular values, which the rank threshold
/// depends on.
pub fn singular_values(m: &LinearMap, _tol: f64) -> Result<Vec<f64>> {
    let ncols = m.cols;
    let mut cols: Vec<Vec<C64>> = (0..ncols).map(|j| m.column(j)).collect();
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..ncols {
            for q in p + 1..ncols {
                let app = inner(&cols[p], &cols[p]).re;
                let aqq = inner(&cols[q], &cols[q]).re;
                let apq = inner(&cols[p], &cols[q]);
                let habs = apq.norm();
                if habs <= 1e-15 * (app * aqq).sqrt().max(1e-300) {
                    continue;
                }
                rotated = true;
                let phase = apq / habs;
                let tau = (aqq - app) / (2.0 * habs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..m.rows {
                    let vp = cols[p][i];
                    let vq = cols[q][i];
                    cols[p][i] = vp * c - vq * phase.conj() * s;
                    cols[q][i] = vp * s + vq * phase.conj() * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Numerical rank: the count of singular values above `tol * max`.
pub fn rank(m: &LinearMap, tol: f64) -> Result<usize> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(0);
    }
    let sv = singular_values(m, tol)?;
    let max = sv.first().copied().unwrap_or(0.0);
    if max <= tol {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * max).count())
}

// ---------------------------------------------------------------------------
// JSON: complex numbers as [re, im], matrices row-major
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LinearMapJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for LinearMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LinearMapJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LinearMapJson::deserialize(d)?;
        let data = raw.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        LinearMap::new(raw.rows, raw.cols, data).map_err(serde::de::Error::custom)
    }
}

pub fn vec_to_json(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vec_from_json(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}
