//! Direct O(n²) reference implementations.
#![allow(dead_code)]

use std::f64::consts::PI;

use kicklab::{Complex64, Grid1D, ProbDist, Representation, WaveFn1D};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `ψ̃(k_m) = dx/√(2π) Σ_j ψ(x_j) e^(−i k_m x_j)`.
pub fn direct_dft(psi: &WaveFn1D) -> Vec<Complex64> {
    let g = psi.grid();
    (0..g.len())
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..g.len() {
                acc += psi.amp()[j] * Complex64::from_polar(1.0, -g.k(m) * g.x(j));
            }
            acc * g.dx() / (2.0 * PI).sqrt()
        })
        .collect()
}

/// `ψ(x_j) = dk/√(2π) Σ_m ψ̃(k_m) e^(i k_m x_j)`.
pub fn direct_idft(phi: &WaveFn1D) -> Vec<Complex64> {
    let g = phi.grid();
    (0..g.len())
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..g.len() {
                acc += phi.amp()[m] * Complex64::from_polar(1.0, g.k(m) * g.x(j));
            }
            acc * g.dk() / (2.0 * PI).sqrt()
        })
        .collect()
}

/// `r_i = Σ_j p_j q_(i−j) · spacing` with `q` indexed relative to its own zero coordinate.
pub fn direct_convolution(p: &ProbDist, q: &ProbDist) -> Vec<f64> {
    let q0 = (-q.origin() / q.spacing()).round() as i64;
    (0..p.len())
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..p.len() {
                // coordinate of output i minus coordinate of p_j, as an index into q
                let t = i as i64 - j as i64 + q0;
                if (0..q.len() as i64).contains(&t) {
                    acc += p.values()[j] * q.values()[t as usize];
                }
            }
            acc * p.spacing()
        })
        .collect()
}

/// Bins every `(k_p, k_d)` cell at the grid point `k_p + k_d`, by coordinate lookup.
pub fn direct_total_momentum(density: &Array2<f64>, grid: &Grid1D) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    for ((i, j), p) in density.indexed_iter() {
        let kt = grid.k(i) + grid.k(j);
        let m = ((kt - grid.k(0)) / grid.dk()).round();
        if m >= 0.0 && (m as usize) < grid.len() {
            out[m as usize] += p * grid.dk();
        }
    }
    out
}

pub fn normalize(values: &mut [f64], spacing: f64) {
    let t: f64 = values.iter().sum::<f64>() * spacing;
    values.iter_mut().for_each(|v| *v /= t);
}

pub fn sup_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn random_wavefn(seed: u64, grid: Grid1D, repr: Representation) -> WaveFn1D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    WaveFn1D::new(grid, amp, repr).unwrap().normalized().unwrap()
}

/// Random density supported on the central `2·half_support` samples.
pub fn random_dist(seed: u64, grid: &Grid1D, half_support: usize) -> ProbDist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.len();
    let values = (0..n)
        .map(|j| if j.abs_diff(n / 2) < half_support { rng.random_range(0.0..1.0) } else { 0.0 })
        .collect();
    ProbDist::new(values, grid.k(0), grid.dk(), Representation::Momentum)
        .unwrap()
        .normalized()
        .unwrap()
}
