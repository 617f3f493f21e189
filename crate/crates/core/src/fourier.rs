//! Unitary discrete Fourier transforms with the symmetric convention
//!
//! ```text
//! ψ̃(k) = (2π)^(-1/2) ∫ ψ(x) e^(-ikx) dx,   ψ(x) = (2π)^(-1/2) ∫ ψ̃(k) e^(+ikx) dk
//! ```
//!
//! sampled on centered grids: `ψ̃(k_m) = dx/√(2π) Σ_j ψ(x_j) e^(-i k_m x_j)`.
//! Because `x_j` includes the grid center, the absolute phase of `ψ̃` matches
//! the continuum transform and the shift theorem holds exactly for on-grid
//! translations.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{KickError, Representation, Result};
use crate::grid::Grid1D;
use crate::wavefn::WaveFn1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Position → momentum.
    Forward,
    /// Momentum → position.
    Inverse,
}

/// A planned transform for one grid and direction, applied to contiguous lanes.
pub(crate) struct LaneTransform {
    fft: Arc<dyn Fft<f64>>,
    direction: Direction,
    scale: f64,
    // e^(∓ i k_m x_center); `None` when the grid is centered on the origin.
    phase: Option<Vec<Complex64>>,
}

impl LaneTransform {
    pub(crate) fn new(grid: &Grid1D, direction: Direction) -> Self {
        let mut planner = FftPlanner::new();
        let (fft, scale, sign) = match direction {
            Direction::Forward => (planner.plan_fft_forward(grid.len()), grid.dx(), -1.0),
            Direction::Inverse => (planner.plan_fft_inverse(grid.len()), grid.dk(), 1.0),
        };
        let phase = (grid.x_center() != 0.0).then(|| {
            (0..grid.len())
                .map(|m| Complex64::from_polar(1.0, sign * grid.k(m) * grid.x_center()))
                .collect()
        });
        Self {
            fft,
            direction,
            scale: scale / (2.0 * PI).sqrt(),
            phase,
        }
    }

    pub(crate) fn apply(&self, buf: &mut [Complex64]) {
        let half = buf.len() / 2;
        if self.direction == Direction::Inverse {
            if let Some(phase) = &self.phase {
                buf.iter_mut().zip(phase).for_each(|(a, p)| *a *= p);
            }
        }
        buf.rotate_left(half);
        self.fft.process(buf);
        buf.rotate_left(half);
        match (&self.phase, self.direction) {
            (Some(phase), Direction::Forward) => buf
                .iter_mut()
                .zip(phase)
                .for_each(|(a, p)| *a *= p * self.scale),
            _ => buf.iter_mut().for_each(|a| *a *= self.scale),
        }
    }
}

fn transform(psi: &WaveFn1D, direction: Direction) -> Result<WaveFn1D> {
    let (expected, produced) = match direction {
        Direction::Forward => (Representation::Position, Representation::Momentum),
        Direction::Inverse => (Representation::Momentum, Representation::Position),
    };
    if psi.representation() != expected {
        return Err(KickError::RepresentationMismatch {
            expected,
            found: psi.representation(),
        });
    }
    let mut buf = psi.amp().to_vec();
    LaneTransform::new(psi.grid(), direction).apply(&mut buf);
    WaveFn1D::new(*psi.grid(), buf, produced)
}

/// Position → momentum representation.
pub fn dft_forward(psi: &WaveFn1D) -> Result<WaveFn1D> {
    transform(psi, Direction::Forward)
}

/// Momentum → position representation.
pub fn dft_inverse(psi: &WaveFn1D) -> Result<WaveFn1D> {
    transform(psi, Direction::Inverse)
}

/// Transforms every lane of `arr` along `axis` in place.
///
/// Lanes are independent, so the parallel schedule does not affect results.
pub(crate) fn transform_axis(arr: &mut Array2<Complex64>, axis: Axis, grid: &Grid1D, direction: Direction) {
    debug_assert_eq!(arr.len_of(axis), grid.len());
    let plan = LaneTransform::new(grid, direction);
    Zip::from(arr.lanes_mut(axis)).par_for_each(|mut lane| {
        let mut buf: Vec<Complex64> = lane.iter().copied().collect();
        plan.apply(&mut buf);
        lane.iter_mut().zip(buf).for_each(|(dst, v)| *dst = v);
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_representation_is_a_contract_violation() {
        let g = Grid1D::centered(8, 1.0).unwrap();
        let psi = WaveFn1D::zeros(g, Representation::Momentum);
        assert!(matches!(
            dft_forward(&psi),
            Err(KickError::RepresentationMismatch { .. })
        ));
        let psi = WaveFn1D::zeros(g, Representation::Position);
        assert!(dft_inverse(&psi).is_err());
    }

    #[test]
    fn constant_maps_to_zero_frequency_spike() {
        let g = Grid1D::centered(64, 0.25).unwrap();
        let psi = WaveFn1D::from_fn(g, |_| Complex64::new(1.0, 0.0)).normalized().unwrap();
        let phi = dft_forward(&psi).unwrap();
        for (m, a) in phi.amp().iter().enumerate() {
            if m == g.mid() {
                assert!((a.norm_sqr() * g.dk() - 1.0).abs() < 1e-12);
            } else {
                assert!(a.norm() < 1e-13, "m = {m}: {a}");
            }
        }
        let back = dft_inverse(&phi).unwrap();
        assert!(back.sup_distance(&psi).unwrap() < 1e-13);
    }

    #[test]
    fn off_center_grid_keeps_continuum_phase() {
        // ψ(x) = δ at x = x_c on a grid centered at x_c → ψ̃(k) ∝ e^{-ik x_c}.
        let g = Grid1D::new(32, 0.5, 2.0).unwrap();
        let mut psi = WaveFn1D::zeros(g, Representation::Position);
        psi.amp_mut()[g.mid()] = Complex64::new(1.0, 0.0);
        let phi = dft_forward(&psi).unwrap();
        let c = g.dx() / (2.0 * PI).sqrt();
        for m in 0..g.len() {
            let want = Complex64::from_polar(c, -g.k(m) * 2.0);
            assert!((phi.amp()[m] - want).norm() < 1e-14);
        }
    }
}
