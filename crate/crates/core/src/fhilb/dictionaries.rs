//! Bundled ray dictionaries: the Pauli eigenray set, the four-ray pair of
//! mutually unbiased bases used for products, the 18-ray product dictionary
//! with its two Bell rays, and the dimension-3 quadruple of mutually
//! unbiased bases.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::fhilb::ray::{Ray, RayDict};

type C64 = Complex64;

const TOL: f64 = 1e-12;

fn ray(coords: Vec<C64>) -> Ray {
    Ray::new(coords, TOL).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The six eigenrays of the three Pauli observables:
/// indices 0,1 = Z basis; 2,3 = X basis; 4,5 = Y basis.
pub fn pauli_six() -> RayDict {
    let s = FRAC_1_SQRT_2;
    RayDict::new(
        "pauli6",
        2,
        vec![
            ray(vec![c(1., 0.), c(0., 0.)]),
            ray(vec![c(0., 0.), c(1., 0.)]),
            ray(vec![c(s, 0.), c(s, 0.)]),
            ray(vec![c(s, 0.), c(-s, 0.)]),
            ray(vec![c(s, 0.), c(0., s)]),
            ray(vec![c(s, 0.), c(0., -s)]),
        ],
        1e-9,
    )
    .unwrap()
}

/// Two mutually unbiased bases of `C^2`: the Z basis (indices 0,1) and the
/// basis with phases `±e^{iπ/4}` (indices 2,3). This is the component
/// dictionary of the 18-ray product fixture; its phase pair squares to `±i`,
/// which is what puts the Bell rays at colinearity exactly 1/2 from every
/// product of complement rays.
pub fn mub_w_pair() -> RayDict {
    let s = FRAC_1_SQRT_2;
    let w = C64::from_polar(1.0, PI / 4.0);
    RayDict::new(
        "zw4",
        2,
        vec![
            ray(vec![c(1., 0.), c(0., 0.)]),
            ray(vec![c(0., 0.), c(1., 0.)]),
            ray(vec![c(s, 0.), w * s]),
            ray(vec![c(s, 0.), -w * s]),
        ],
        1e-9,
    )
    .unwrap()
}

/// The 18-ray product dictionary over `C^4`: the 16 Kronecker products of
/// `mub_w_pair` with itself (row-major, so index `4i+j` is ray `i ⊗ j`),
/// followed by the Bell rays `(e00 ± e11)/√2` at indices 16 and 17.
pub fn product_18() -> RayDict {
    let base = mub_w_pair();
    let mut rays: Vec<Ray> = Vec::with_capacity(18);
    for i in 0..4 {
        for j in 0..4 {
            rays.push(base.ray(i).kron(base.ray(j), TOL));
        }
    }
    let s = FRAC_1_SQRT_2;
    rays.push(ray(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]));
    rays.push(ray(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(-s, 0.)]));
    RayDict::new("product18", 4, rays, 1e-9).unwrap()
}

/// The four mutually unbiased bases of `C^3`: the computational basis
/// (indices 0..3) and the three quadratic-phase bases with
/// `v_j^k[m] = ω^(km² + jm)/√3`, `ω = e^(2πi/3)`.
pub fn mub3_quadruple() -> RayDict {
    let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let s = 1.0 / 3f64.sqrt();
    let mut rays = Vec::with_capacity(12);
    for j in 0..3 {
        let mut v = vec![c(0., 0.); 3];
        v[j] = c(1., 0.);
        rays.push(ray(v));
    }
    for k in 0..3u32 {
        for j in 0..3u32 {
            let v = (0..3u32)
                .map(|m| omega.powu(k * m * m + j * m) * s)
                .collect();
            rays.push(ray(v));
        }
    }
    RayDict::new("mub3", 3, rays, 1e-9).unwrap()
}
