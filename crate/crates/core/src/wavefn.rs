//! Complex amplitudes on a [`Grid1D`].

use num_complex::Complex64;

use crate::error::{KickError, Representation, Result};
use crate::grid::Grid1D;
use crate::SUPPORT_THRESHOLD;

/// A single-body wavefunction sampled on a grid, in either representation.
///
/// Position amplitudes are normalized against `dx`, momentum amplitudes
/// against `dk`, so `norm_sqr` is the same number in both bases.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFn1D {
    grid: Grid1D,
    amp: Vec<Complex64>,
    repr: Representation,
}

/// Closed interval of grid indices whose amplitude reaches the support threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub first: usize,
    pub last: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.hi + self.lo)
    }
}

impl WaveFn1D {
    pub fn new(grid: Grid1D, amp: Vec<Complex64>, repr: Representation) -> Result<Self> {
        if amp.len() != grid.len() {
            return Err(KickError::GridMismatch(format!(
                "{} amplitudes for a grid of {} points",
                amp.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, amp, repr })
    }

    /// Samples `f(x)` at every position grid point.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        Self {
            grid,
            amp,
            repr: Representation::Position,
        }
    }

    pub fn zeros(grid: Grid1D, repr: Representation) -> Self {
        Self {
            grid,
            amp: vec![Complex64::new(0.0, 0.0); grid.len()],
            repr,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amp_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }

    pub fn into_amp(self) -> Vec<Complex64> {
        self.amp
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    /// `dx` in position representation, `dk` in momentum representation.
    pub fn spacing(&self) -> f64 {
        match self.repr {
            Representation::Position => self.grid.dx(),
            Representation::Momentum => self.grid.dk(),
        }
    }

    /// Coordinate of sample `j` in the current representation.
    pub fn coord(&self, j: usize) -> f64 {
        match self.repr {
            Representation::Position => self.grid.x(j),
            Representation::Momentum => self.grid.k(j),
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.amp.len()).map(|j| self.coord(j)).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spacing()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < crate::NORM_TOL
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(KickError::ZeroNorm);
        }
        let s = n2.sqrt().recip();
        self.amp.iter_mut().for_each(|a| *a *= s);
        Ok(self)
    }

    pub fn scaled(mut self, factor: Complex64) -> Self {
        self.amp.iter_mut().for_each(|a| *a *= factor);
        self
    }

    fn check_compatible(&self, other: &WaveFn1D) -> Result<()> {
        if !self.grid.matches(&other.grid) {
            return Err(KickError::GridMismatch("wavefunctions live on different grids".into()));
        }
        if self.repr != other.repr {
            return Err(KickError::RepresentationMismatch {
                expected: self.repr,
                found: other.repr,
            });
        }
        Ok(())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &WaveFn1D) -> Result<WaveFn1D> {
        self.check_compatible(other)?;
        let amp = self.amp.iter().zip(&other.amp).map(|(a, b)| a + b).collect();
        Ok(Self { amp, ..*self })
    }

    /// Pointwise product, e.g. applying a projector window.
    pub fn mul(&self, window: &WaveFn1D) -> Result<WaveFn1D> {
        self.check_compatible(window)?;
        let amp = self.amp.iter().zip(&window.amp).map(|(a, b)| a * b).collect();
        Ok(Self { amp, ..*self })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &WaveFn1D) -> Result<Complex64> {
        self.check_compatible(other)?;
        let s: Complex64 = self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.spacing())
    }

    /// Periodic translation by `steps` grid points (positive moves toward larger coordinates).
    pub fn rolled(&self, steps: i64) -> WaveFn1D {
        let n = self.amp.len() as i64;
        let shift = steps.rem_euclid(n) as usize;
        let mut amp = self.amp.clone();
        amp.rotate_right(shift);
        Self { amp, ..*self }
    }

    /// Sup-norm distance to another wavefunction on the same grid.
    pub fn sup_distance(&self, other: &WaveFn1D) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Indices spanned by amplitudes at or above [`SUPPORT_THRESHOLD`].
    pub fn support(&self) -> Option<Support> {
        self.support_at(SUPPORT_THRESHOLD)
    }

    pub fn support_at(&self, threshold: f64) -> Option<Support> {
        let first = self.amp.iter().position(|a| a.norm() >= threshold)?;
        let last = self.amp.iter().rposition(|a| a.norm() >= threshold)?;
        Some(Support {
            first,
            last,
            lo: self.coord(first),
            hi: self.coord(last),
        })
    }

    /// Mean and standard deviation of `|amp|²` along the current axis.
    pub fn mean_and_spread(&self) -> Result<(f64, f64)> {
        let w: Vec<f64> = self.amp.iter().map(|a| a.norm_sqr()).collect();
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return Err(KickError::ZeroNorm);
        }
        let mean = w.iter().enumerate().map(|(j, p)| p * self.coord(j)).sum::<f64>() / total;
        let var = w
            .iter()
            .enumerate()
            .map(|(j, p)| p * (self.coord(j) - mean).powi(2))
            .sum::<f64>()
            / total;
        Ok((mean, var.sqrt()))
    }
}
