//! Probability densities on uniform axes: normalization, moments,
//! convolution, modular folding and fringe visibility.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{KickError, Representation, Result};
use crate::grid::steps_of;
use crate::wavefn::WaveFn1D;

/// Default highest moment order compared by the moment checks.
///
/// Grid-truncated moments of sinc²-like tails grow with the truncation
/// radius, so higher orders stop being meaningful on finite grids.
pub const DEFAULT_MAX_MOMENT: u32 = 8;

/// Convolutions and diagonal sums that leak more than this much mass out of
/// the output window carry a warning.
pub const WRAP_MASS_TOL: f64 = 1e-12;

/// A nonnegative density sampled at `origin + j·spacing`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbDist {
    values: Vec<f64>,
    origin: f64,
    spacing: f64,
    axis: Representation,
}

/// Result of a convolution onto a finite window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvolutionOutcome {
    pub dist: ProbDist,
    /// Mass of the linear convolution that fell outside the output window.
    pub wrapped_mass: f64,
}

impl ConvolutionOutcome {
    /// True when the window cut away more than [`WRAP_MASS_TOL`].
    pub fn has_wrap_warning(&self) -> bool {
        self.wrapped_mass > WRAP_MASS_TOL
    }
}

impl ProbDist {
    pub fn new(values: Vec<f64>, origin: f64, spacing: f64, axis: Representation) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(KickError::InvalidParameter(format!("spacing must be positive, got {spacing}")));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(KickError::InvalidParameter(
                "densities must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            values,
            origin,
            spacing,
            axis,
        })
    }

    /// `|amp_j|²` on the wavefunction's current axis, renormalized to unit mass.
    pub fn from_wavefn(psi: &WaveFn1D) -> Result<Self> {
        let values = psi.amp().iter().map(Complex64::norm_sqr).collect();
        Self::new(values, psi.coord(0), psi.spacing(), psi.representation())?.normalized()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn axis(&self) -> Representation {
        self.axis
    }

    pub fn coord(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.coord(j)).collect()
    }

    /// `Σ values·spacing`.
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing
    }

    pub fn normalized(mut self) -> Result<Self> {
        let t = self.total();
        if !(t > 0.0) {
            return Err(KickError::ZeroNorm);
        }
        self.values.iter_mut().for_each(|v| *v /= t);
        Ok(self)
    }

    /// `Σ coord_j^N · p_j · spacing` over the (truncated) grid.
    pub fn moment(&self, order: u32) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, p)| self.coord(j).powi(order as i32) * p)
            .sum::<f64>()
            * self.spacing
    }

    pub fn mean(&self) -> f64 {
        self.moment(1) / self.total()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values
            .iter()
            .enumerate()
            .map(|(j, p)| (self.coord(j) - m).powi(2) * p)
            .sum::<f64>()
            * self.spacing
            / self.total()
    }

    pub fn rms_spread(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Largest |coordinate| on the grid; moments are truncated at this radius.
    pub fn truncation_radius(&self) -> f64 {
        self.coord(0).abs().max(self.coord(self.len() - 1).abs())
    }

    pub fn same_axis(&self, other: &ProbDist) -> bool {
        self.len() == other.len()
            && self.axis == other.axis
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
            && (self.origin - other.origin).abs() <= 1e-9 * self.spacing
    }

    fn require_same_axis(&self, other: &ProbDist) -> Result<()> {
        if self.same_axis(other) {
            Ok(())
        } else {
            Err(KickError::GridMismatch("distributions live on different axes".into()))
        }
    }

    pub fn sup_distance(&self, other: &ProbDist) -> Result<f64> {
        self.require_same_axis(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// `(Σ (p − q)² · spacing)^(1/2)`.
    pub fn l2_distance(&self, other: &ProbDist) -> Result<f64> {
        self.require_same_axis(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).powi(2)).sum();
        Ok((s * self.spacing).sqrt())
    }

    /// Periodic translation of the samples by `steps` grid points.
    pub fn rolled(&self, steps: i64) -> ProbDist {
        let mut values = self.values.clone();
        values.rotate_right(steps.rem_euclid(self.len() as i64) as usize);
        ProbDist { values, ..*self }
    }

    /// Equal-weight mixture of two distributions on the same axis.
    pub fn mix(&self, other: &ProbDist) -> Result<ProbDist> {
        self.require_same_axis(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(ProbDist { values, ..*self })
    }
}

/// `|amp|²` of a normalized wavefunction, as a distribution on its axis.
pub fn prob_dist(psi: &WaveFn1D) -> Result<ProbDist> {
    ProbDist::from_wavefn(psi)
}

/// Full linear convolution `c_t = Σ_j a_j b_(t−j)` of length `a.len() + b.len() − 1`.
pub(crate) fn linear_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let pad = |x: &[f64]| {
        let mut v = vec![Complex64::new(0.0, 0.0); size];
        v.iter_mut().zip(x).for_each(|(d, s)| d.re = *s);
        v
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    fa.iter_mut().zip(&fb).for_each(|(x, y)| *x *= y);
    inv.process(&mut fa);
    let scale = (size as f64).recip();
    fa[..out_len].iter().map(|c| c.re * scale).collect()
}

/// Offset `o` such that output index `i` of a convolution onto `p`'s axis
/// reads linear-convolution index `i + o`.
fn window_offset(q: &ProbDist) -> Result<usize> {
    let o = -steps_of("convolution kernel origin", q.origin(), q.spacing())?;
    usize::try_from(o).map_err(|_| {
        KickError::GridMismatch("kernel axis must contain the origin".into())
    })
}

/// Signed convolution of raw samples onto `p`'s window; returns window and spilled |mass|.
pub(crate) fn convolve_onto(p: &[f64], q: &[f64], offset: usize, spacing: f64) -> (Vec<f64>, f64) {
    let full = linear_convolution(p, q);
    let mut window = Vec::with_capacity(p.len());
    let mut spilled = 0.0;
    for (t, c) in full.iter().enumerate() {
        let v = c * spacing;
        if t >= offset && t < offset + p.len() {
            window.push(v);
        } else {
            spilled += v.abs();
        }
    }
    while window.len() < p.len() {
        window.push(0.0);
    }
    (window, spilled * spacing)
}

/// `r = p ⋆ q` sampled on `p`'s axis, renormalized.
///
/// `q` must share the spacing and axis type and contain the origin on its
/// lattice (true for every centered momentum grid). Mass of the linear
/// convolution falling outside the window is reported, not wrapped.
pub fn convolve(p: &ProbDist, q: &ProbDist) -> Result<ConvolutionOutcome> {
    if p.axis != q.axis || (p.spacing - q.spacing).abs() > 1e-12 * p.spacing {
        return Err(KickError::GridMismatch(
            "convolution needs identical spacing and axis type".into(),
        ));
    }
    let offset = window_offset(q)?;
    let (window, wrapped_mass) = convolve_onto(&p.values, &q.values, offset, p.spacing);
    let values = window.into_iter().map(|v| v.max(0.0)).collect();
    let dist = ProbDist::new(values, p.origin, p.spacing, p.axis)?.normalized()?;
    Ok(ConvolutionOutcome { dist, wrapped_mass })
}

/// Folds `p` onto `[0, κ)`: the distribution of `coordinate mod κ`.
///
/// `κ` must be a whole number of grid steps, between two steps and the full
/// grid range.
pub fn modular_momentum_dist(p: &ProbDist, kappa: f64) -> Result<ProbDist> {
    let bins = steps_of("kappa", kappa, p.spacing)?;
    if bins < 2 {
        return Err(KickError::InvalidParameter(format!(
            "kappa = {kappa} must exceed the grid spacing {}",
            p.spacing
        )));
    }
    if bins as usize > p.len() {
        return Err(KickError::InvalidParameter(format!(
            "kappa = {kappa} exceeds the grid range"
        )));
    }
    let o = steps_of("distribution origin", p.origin, p.spacing)?;
    let mut folded = vec![0.0; bins as usize];
    for (j, v) in p.values.iter().enumerate() {
        folded[(o + j as i64).rem_euclid(bins) as usize] += v;
    }
    ProbDist::new(folded, 0.0, p.spacing, p.axis)?.normalized()
}

/// `(max − min)/(max + min)` over a set of samples.
pub fn visibility(values: &[f64]) -> f64 {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if !(hi + lo > 0.0) {
        return 0.0;
    }
    (hi - lo) / (hi + lo)
}

/// Fringe visibility of `p` over one period `[center − period/2, center + period/2]`.
///
/// With an `envelope`, the visibility of the ratio `p/envelope` is measured
/// instead, which removes the slowly varying single-packet envelope and
/// leaves only the interference modulation.
pub fn fringe_visibility(
    p: &ProbDist,
    envelope: Option<&ProbDist>,
    center: f64,
    period: f64,
) -> Result<f64> {
    if let Some(env) = envelope {
        p.require_same_axis(env)?;
    }
    let tol = 1e-9 * p.spacing;
    let mut samples = Vec::new();
    for j in 0..p.len() {
        if (p.coord(j) - center).abs() <= 0.5 * period + tol {
            let v = match envelope {
                Some(env) if env.values[j] > 0.0 => p.values[j] / env.values[j],
                Some(_) => continue,
                None => p.values[j],
            };
            samples.push(v);
        }
    }
    if samples.len() < 2 {
        return Err(KickError::InvalidParameter(format!(
            "fringe period {period} spans fewer than two samples"
        )));
    }
    Ok(visibility(&samples))
}
