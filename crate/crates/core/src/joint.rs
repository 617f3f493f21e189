//! Two-body wavefunctions over (particle coordinate × device coordinate).

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use serde::Serialize;

use crate::dist::ProbDist;
use crate::error::{KickError, Representation, Result};
use crate::fourier::{transform_axis, Direction};
use crate::grid::Grid1D;
use crate::wavefn::WaveFn1D;

/// Probability bookkeeping of a post-selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelectionRecord {
    /// Norm² of the state before selection.
    pub initial: f64,
    /// Norm² of the retained (transmitted) component, before renormalization.
    pub kept: f64,
    /// `initial − kept`: blocked plus dropped probability.
    pub removed: f64,
    /// Norm² sitting in the slit-edge band, whose entangled remainder is dropped.
    pub edge: f64,
    /// Factor applied to the retained component to renormalize it, `kept^(-1/2)`.
    pub normalization: f64,
}

impl SelectionRecord {
    pub fn kept_fraction(&self) -> f64 {
        self.kept / self.initial
    }
}

/// Amplitudes `amp[[i_particle, i_device]]` on two grids sharing `dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    grid_p: Grid1D,
    grid_d: Grid1D,
    amp: Array2<Complex64>,
    repr_p: Representation,
    repr_d: Representation,
    selection: Option<SelectionRecord>,
}

impl JointState {
    pub fn new(
        grid_p: Grid1D,
        grid_d: Grid1D,
        amp: Array2<Complex64>,
        repr_p: Representation,
        repr_d: Representation,
    ) -> Result<Self> {
        if !grid_p.same_spacing(&grid_d) {
            return Err(KickError::GridMismatch(format!(
                "joint grids must share dx ({} vs {})",
                grid_p.dx(),
                grid_d.dx()
            )));
        }
        if amp.dim() != (grid_p.len(), grid_d.len()) {
            return Err(KickError::GridMismatch(format!(
                "amplitude shape {:?} does not match grids ({}, {})",
                amp.dim(),
                grid_p.len(),
                grid_d.len()
            )));
        }
        Ok(Self {
            grid_p,
            grid_d,
            amp,
            repr_p,
            repr_d,
            selection: None,
        })
    }

    /// `ψ(x_p) φ(x_d)`.
    pub fn product(particle: &WaveFn1D, device: &WaveFn1D) -> Result<Self> {
        let a = ndarray::ArrayView1::from(particle.amp());
        let b = ndarray::ArrayView1::from(device.amp());
        let amp = Array2::from_shape_fn((a.len(), b.len()), |(i, j)| a[i] * b[j]);
        Self::new(
            *particle.grid(),
            *device.grid(),
            amp,
            particle.representation(),
            device.representation(),
        )
    }

    pub fn grid_particle(&self) -> &Grid1D {
        &self.grid_p
    }

    pub fn grid_device(&self) -> &Grid1D {
        &self.grid_d
    }

    pub fn amp(&self) -> &Array2<Complex64> {
        &self.amp
    }

    pub fn representations(&self) -> (Representation, Representation) {
        (self.repr_p, self.repr_d)
    }

    pub fn selection(&self) -> Option<&SelectionRecord> {
        self.selection.as_ref()
    }

    fn spacing(grid: &Grid1D, repr: Representation) -> f64 {
        match repr {
            Representation::Position => grid.dx(),
            Representation::Momentum => grid.dk(),
        }
    }

    pub fn spacing_particle(&self) -> f64 {
        Self::spacing(&self.grid_p, self.repr_p)
    }

    pub fn spacing_device(&self) -> f64 {
        Self::spacing(&self.grid_d, self.repr_d)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spacing_particle() * self.spacing_device()
    }

    /// Renormalizes a retained component and records what was removed.
    pub(crate) fn select(mut self, initial: f64, edge: f64) -> Result<Self> {
        let kept = self.norm_sqr();
        if !(kept > 0.0) {
            return Err(KickError::ZeroNorm);
        }
        let normalization = kept.sqrt().recip();
        self.amp.mapv_inplace(|a| a * normalization);
        self.selection = Some(SelectionRecord {
            initial,
            kept,
            removed: initial - kept,
            edge,
            normalization,
        });
        Ok(self)
    }

    fn direction(from: Representation, to: Representation) -> Option<Direction> {
        match (from, to) {
            (Representation::Position, Representation::Momentum) => Some(Direction::Forward),
            (Representation::Momentum, Representation::Position) => Some(Direction::Inverse),
            _ => None,
        }
    }

    /// Same state with the particle axis in `repr`.
    pub fn with_particle_repr(&self, repr: Representation) -> JointState {
        let mut out = self.clone();
        if let Some(dir) = Self::direction(self.repr_p, repr) {
            transform_axis(&mut out.amp, Axis(0), &self.grid_p, dir);
            out.repr_p = repr;
        }
        out
    }

    /// Same state with the device axis in `repr`.
    pub fn with_device_repr(&self, repr: Representation) -> JointState {
        let mut out = self.clone();
        if let Some(dir) = Self::direction(self.repr_d, repr) {
            transform_axis(&mut out.amp, Axis(1), &self.grid_d, dir);
            out.repr_d = repr;
        }
        out
    }

    /// Both axes in `repr`.
    pub fn in_representation(&self, repr: Representation) -> JointState {
        self.with_particle_repr(repr).with_device_repr(repr)
    }

    /// `|amp|²` in the current representations.
    pub fn density(&self) -> Array2<f64> {
        self.amp.mapv(|a| a.norm_sqr())
    }

    fn axis_coord_origin(grid: &Grid1D, repr: Representation) -> f64 {
        match repr {
            Representation::Position => grid.x(0),
            Representation::Momentum => grid.k(0),
        }
    }

    /// Particle distribution along its current axis, traced over the device.
    pub fn particle_marginal(&self) -> Result<ProbDist> {
        let sd = self.spacing_device();
        let values = self
            .amp
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|a| a.norm_sqr()).sum::<f64>() * sd)
            .collect();
        ProbDist::new(
            values,
            Self::axis_coord_origin(&self.grid_p, self.repr_p),
            self.spacing_particle(),
            self.repr_p,
        )?
        .normalized()
    }

    /// Device distribution along its current axis, traced over the particle.
    pub fn device_marginal(&self) -> Result<ProbDist> {
        let sp = self.spacing_particle();
        let mut values = vec![0.0; self.grid_d.len()];
        for row in self.amp.rows() {
            values.iter_mut().zip(row).for_each(|(v, a)| *v += a.norm_sqr());
        }
        values.iter_mut().for_each(|v| *v *= sp);
        ProbDist::new(
            values,
            Self::axis_coord_origin(&self.grid_d, self.repr_d),
            self.spacing_device(),
            self.repr_d,
        )?
        .normalized()
    }

    /// `Prob(k_p)`, computed without transforming the device axis.
    pub fn particle_momentum_marginal(&self) -> Result<ProbDist> {
        self.with_particle_repr(Representation::Momentum).particle_marginal()
    }

    /// `Prob(k_d)`, computed without transforming the particle axis.
    pub fn device_momentum_marginal(&self) -> Result<ProbDist> {
        self.with_device_repr(Representation::Momentum).device_marginal()
    }

    /// `(Σ |a − b|² · spacing_p · spacing_d)^(1/2)` against a state in the same representations.
    pub fn l2_distance(&self, other: &JointState) -> Result<f64> {
        if self.amp.dim() != other.amp.dim() || (self.repr_p, self.repr_d) != (other.repr_p, other.repr_d) {
            return Err(KickError::GridMismatch("joint states are not comparable".into()));
        }
        let s: f64 = self
            .amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.spacing_particle() * self.spacing_device()).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::prob_dist;
    use crate::fourier::dft_forward;
    use crate::states::gaussian_packet;

    #[test]
    fn product_marginals_are_the_factors() {
        let gp = Grid1D::centered(256, 0.1).unwrap();
        let gd = Grid1D::centered(128, 0.1).unwrap();
        let psi = gaussian_packet(0.6, 0.5, 1.0, &gp).unwrap();
        let phi = gaussian_packet(0.3, -0.2, 0.0, &gd).unwrap();
        let st = JointState::product(&psi, &phi).unwrap();
        assert!((st.norm_sqr() - 1.0).abs() < 1e-12);
        let pm = st.particle_momentum_marginal().unwrap();
        let want = prob_dist(&dft_forward(&psi).unwrap()).unwrap();
        assert!(pm.sup_distance(&want).unwrap() < 1e-13);
        let dm = st.device_marginal().unwrap();
        assert!(dm.sup_distance(&prob_dist(&phi).unwrap()).unwrap() < 1e-13);
        // full transform preserves the norm
        let k = st.in_representation(Representation::Momentum);
        assert!((k.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_spacing_is_rejected() {
        let gp = Grid1D::centered(16, 0.1).unwrap();
        let gd = Grid1D::centered(16, 0.2).unwrap();
        let amp = Array2::zeros((16, 16));
        assert!(JointState::new(gp, gd, amp, Representation::Position, Representation::Position).is_err());
    }
}
