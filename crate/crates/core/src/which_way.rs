//! Which-way detection behind a double slit.
//!
//! A detector with a two-level internal register sits at the origin of the
//! detector coordinate `x_d`. Its interaction depends only on the relative
//! coordinate `x = x_p − x_d`: for `x ≥ δ_f` the register is flipped from
//! `|0⟩` to `|1⟩`, for `x ≤ −δ_f` it is left alone. When both packets stay
//! clear of the edge band the particle feels no transverse force, yet the
//! interference fringes disappear. The functions here check what does and
//! does not change in momentum space when that happens.

use std::f64::consts::PI;

use ndarray::{Array2, Axis, Zip};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dist::{fringe_visibility, ProbDist, ConvolutionOutcome};
use crate::error::{KickError, Representation, Result};
use crate::fourier::{dft_forward, transform_axis, Direction};
use crate::grid::Grid1D;
use crate::states::{DetectorSpec, DoubleSlitState};
use crate::wavefn::WaveFn1D;
use crate::SUPPORT_THRESHOLD;

/// A real 2×2 matrix acting on `(a0, a1)`; `m[row][col]`.
pub type Mat2 = [[f64; 2]; 2];

/// Particle ⊗ detector-position ⊗ internal register, in position representation.
#[derive(Debug, Clone, PartialEq)]
pub struct WhichWayState {
    grid_p: Grid1D,
    grid_d: Grid1D,
    amp0: Array2<Complex64>,
    amp1: Array2<Complex64>,
    imperfect: bool,
}

impl WhichWayState {
    /// `ψ(x_p) φ(x_d) |0⟩`.
    pub fn initial(psi: &WaveFn1D, phi: &WaveFn1D) -> Result<Self> {
        for w in [psi, phi] {
            if w.representation() != Representation::Position {
                return Err(KickError::RepresentationMismatch {
                    expected: Representation::Position,
                    found: w.representation(),
                });
            }
        }
        let (gp, gd) = (*psi.grid(), *phi.grid());
        if !gp.same_spacing(&gd) {
            return Err(KickError::GridMismatch("particle and detector grids must share dx".into()));
        }
        let amp0 = Array2::from_shape_fn((gp.len(), gd.len()), |(i, j)| psi.amp()[i] * phi.amp()[j]);
        Ok(Self {
            grid_p: gp,
            grid_d: gd,
            amp1: Array2::zeros(amp0.dim()),
            amp0,
            imperfect: false,
        })
    }

    /// `(ψ_A + ψ_B)/√2 ⊗ φ ⊗ |0⟩`.
    pub fn from_double_slit(ds: &DoubleSlitState, phi: &WaveFn1D) -> Result<Self> {
        Self::initial(&ds.combined(), phi)
    }

    pub fn grid_particle(&self) -> &Grid1D {
        &self.grid_p
    }

    pub fn grid_device(&self) -> &Grid1D {
        &self.grid_d
    }

    /// Amplitudes of the `|0⟩` branch.
    pub fn branch0(&self) -> &Array2<Complex64> {
        &self.amp0
    }

    /// Amplitudes of the `|1⟩` branch.
    pub fn branch1(&self) -> &Array2<Complex64> {
        &self.amp1
    }

    /// True when the detector was applied although the packets reached its edge band.
    pub fn is_imperfect(&self) -> bool {
        self.imperfect
    }

    fn cell(&self) -> f64 {
        self.grid_p.dx() * self.grid_d.dx()
    }

    /// Total norm² over both branches.
    pub fn norm_sqr(&self) -> f64 {
        let s: f64 = self.amp0.iter().chain(self.amp1.iter()).map(|a| a.norm_sqr()).sum();
        s * self.cell()
    }

    /// Norm² of a single branch.
    pub fn branch_norm_sqr(&self, branch: usize) -> f64 {
        let amp = if branch == 0 { &self.amp0 } else { &self.amp1 };
        amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.cell()
    }

    /// Smallest `|x_p − x_d|` between the numerical supports of the two marginals.
    ///
    /// Returns `None` when either marginal is empty.
    pub fn min_support_distance(&self) -> Option<f64> {
        let mut rows = vec![0.0; self.grid_p.len()];
        let mut cols = vec![0.0; self.grid_d.len()];
        for amp in [&self.amp0, &self.amp1] {
            for ((i, j), a) in amp.indexed_iter() {
                let p = a.norm_sqr();
                rows[i] += p;
                cols[j] += p;
            }
        }
        let thr = SUPPORT_THRESHOLD * SUPPORT_THRESHOLD;
        let sp: Vec<f64> = (0..rows.len())
            .filter(|i| rows[*i] * self.grid_d.dx() > thr)
            .map(|i| self.grid_p.x(i))
            .collect();
        let sd: Vec<f64> = (0..cols.len())
            .filter(|j| cols[*j] * self.grid_p.dx() > thr)
            .map(|j| self.grid_d.x(j))
            .collect();
        if sp.is_empty() || sd.is_empty() {
            return None;
        }
        // both lists are sorted, so a merge finds the closest pair
        let (mut a, mut b) = (0, 0);
        let mut best = f64::INFINITY;
        while a < sp.len() && b < sd.len() {
            best = best.min((sp[a] - sd[b]).abs());
            if sp[a] < sd[b] {
                a += 1;
            } else {
                b += 1;
            }
        }
        Some(best)
    }

    fn momentum_branches(&self, particle: bool, device: bool) -> [Array2<Complex64>; 2] {
        [&self.amp0, &self.amp1].map(|amp| {
            let mut a = amp.clone();
            if particle {
                transform_axis(&mut a, Axis(0), &self.grid_p, Direction::Forward);
            }
            if device {
                transform_axis(&mut a, Axis(1), &self.grid_d, Direction::Forward);
            }
            a
        })
    }

    /// Joint density `|Ψ̃(k_p, k_d)|²` summed over both branches.
    pub fn momentum_density(&self) -> Array2<f64> {
        let [b0, b1] = self.momentum_branches(true, true);
        let mut out = b0.mapv(|a| a.norm_sqr());
        Zip::from(&mut out).and(&b1).for_each(|o, a| *o += a.norm_sqr());
        out
    }
}

/// The transit unitary at relative coordinate `x`.
///
/// `cos θ·I + sin θ·(|1⟩⟨0| − |0⟩⟨1|)` with `θ` from the detector's edge ramp.
pub fn detector_unitary(spec: &DetectorSpec, x: f64) -> Mat2 {
    let (s, c) = spec.rotation_angle(x).sin_cos();
    [[c, -s], [s, c]]
}

/// Applies a pointwise 2×2 map `m(x_p − x_d)` to every joint sample.
pub(crate) fn apply_pointwise<F>(state: &WhichWayState, matrix: F) -> WhichWayState
where
    F: Fn(f64) -> Mat2 + Sync,
{
    let mut out = state.clone();
    let (gp, gd) = (state.grid_p, state.grid_d);
    Zip::indexed(&mut out.amp0)
        .and(&mut out.amp1)
        .par_for_each(|(i, j), a0, a1| {
            let m = matrix(gp.x(i) - gd.x(j));
            let (b0, b1) = (*a0, *a1);
            *a0 = b0 * m[0][0] + b1 * m[0][1];
            *a1 = b0 * m[1][0] + b1 * m[1][1];
        });
    out
}

/// Runs the particle through the detector.
///
/// The unitary is always applied. If the marginal supports come within
/// `δ_f` of each other the result is flagged as an imperfect which-way
/// measurement (see [`WhichWayState::is_imperfect`]).
pub fn apply_which_way(state: &WhichWayState, spec: &DetectorSpec) -> WhichWayState {
    let mut out = apply_pointwise(state, |x| detector_unitary(spec, x));
    out.imperfect = state.imperfect || !separation_holds(state, spec);
    out
}

fn separation_holds(state: &WhichWayState, spec: &DetectorSpec) -> bool {
    state.min_support_distance().is_some_and(|d| d > spec.delta_f)
}

/// `θ` takes no ramp values anywhere on the state's support.
///
/// On the support the rotation is then locally constant, so the
/// interaction exerts no transverse force on the particle.
pub fn no_transverse_forces(state: &WhichWayState, spec: &DetectorSpec) -> bool {
    state.min_support_distance().is_some_and(|d| d >= spec.delta_f)
}

fn axis_dist(values: Vec<f64>, grid: &Grid1D) -> Result<ProbDist> {
    ProbDist::new(values, grid.k(0), grid.dk(), Representation::Momentum)?.normalized()
}

/// `Prob(k_p)` traced over detector position and register.
pub fn particle_momentum_dist(state: &WhichWayState) -> Result<ProbDist> {
    let mut values = vec![0.0; state.grid_p.len()];
    for b in state.momentum_branches(true, false) {
        for (v, row) in values.iter_mut().zip(b.rows()) {
            *v += row.iter().map(|a| a.norm_sqr()).sum::<f64>();
        }
    }
    axis_dist(values, &state.grid_p)
}

/// `Prob(k_d)` traced over particle position and register.
pub fn detector_momentum_dist(state: &WhichWayState) -> Result<ProbDist> {
    let mut values = vec![0.0; state.grid_d.len()];
    for b in state.momentum_branches(false, true) {
        for row in b.rows() {
            values.iter_mut().zip(row).for_each(|(v, a)| *v += a.norm_sqr());
        }
    }
    axis_dist(values, &state.grid_d)
}

/// Sums a joint momentum density along anti-diagonals `k_p + k_d = k_T`.
///
/// Both axes must be the same centered momentum grid. The output axis is
/// that grid; `k_T` values beyond it are reported as `wrapped_mass`.
pub fn anti_diagonal_sum(density: &Array2<f64>, grid: &Grid1D) -> Result<ConvolutionOutcome> {
    let n = grid.len();
    if density.dim() != (n, n) {
        return Err(KickError::GridMismatch("anti-diagonal sum needs a square density".into()));
    }
    let half = (n / 2) as i64;
    let mut values = vec![0.0; n];
    let mut wrapped = 0.0;
    for ((i, j), p) in density.indexed_iter() {
        let m = i as i64 + j as i64 - half;
        if (0..n as i64).contains(&m) {
            values[m as usize] += p;
        } else {
            wrapped += p;
        }
    }
    let dk = grid.dk();
    let values: Vec<f64> = values.into_iter().map(|v| v * dk).collect();
    let dist = ProbDist::new(values, grid.k(0), dk, Representation::Momentum)?.normalized()?;
    Ok(ConvolutionOutcome {
        dist,
        wrapped_mass: wrapped * dk * dk,
    })
}

/// Distribution of total transverse momentum `k_T = k_p + k_d`.
///
/// Requires identical particle and detector grids.
pub fn total_momentum_dist(state: &WhichWayState) -> Result<ConvolutionOutcome> {
    if !state.grid_p.matches(&state.grid_d) {
        return Err(KickError::GridMismatch(
            "total momentum needs identical particle and detector grids".into(),
        ));
    }
    anti_diagonal_sum(&state.momentum_density(), &state.grid_p)
}

/// Whether the pointer wavefunction fits into the gap between the packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapCondition {
    pub holds: bool,
    /// Half-width of the empty gap between `ψ_A` and `ψ_B`.
    pub v: f64,
    /// Half-width of the pointer's numerical support.
    pub w: f64,
}

/// Compares the gap half-width `v` with the pointer half-width `w` at the support threshold.
pub fn gap_condition_check(ds: &DoubleSlitState, phi: &WaveFn1D) -> Result<GapCondition> {
    let w = phi.support().ok_or(KickError::ZeroNorm)?.half_width();
    let v = ds.gap_half_width;
    Ok(GapCondition { holds: v > w, v, w })
}

/// Size of the interference cross term after smearing by the pointer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTerm {
    /// `sup_k |(ψ̃_A*ψ̃_B + ψ̃_B*ψ̃_A) ⋆ |φ̃|²|`.
    pub momentum_sup: f64,
    /// `sup_x |packet cross-correlation(x)|·|pointer autocorrelation(x)|`.
    pub position_witness: f64,
}

fn correlation(f: &[Complex64], g: &[Complex64], lag: i64, dx: f64) -> Complex64 {
    // Σ_y f*(y) g(y + lag)
    let n = f.len() as i64;
    let lo = 0.max(-lag);
    let hi = n.min(g.len() as i64 - lag);
    (lo..hi)
        .map(|y| f[y as usize].conj() * g[(y + lag) as usize])
        .sum::<Complex64>()
        * dx
}

/// Momentum-space cross term `2 Re(ψ̃_A* ψ̃_B) ⋆ |φ̃|²` over one full period.
///
/// All three amplitudes are zero-padded to a common length of at least
/// twice the larger grid, so the periodic convolution of the sampled
/// spectra is exactly the transform of the product of the (unwrapped)
/// position-space correlations. Placement inside the padded buffer only
/// changes phases that cancel in both factors.
fn padded_cross_convolution(ds: &DoubleSlitState, phi: &WaveFn1D) -> Vec<f64> {
    let len = 2 * ds.grid().len().max(phi.grid().len());
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    let dx = ds.grid().dx();
    let spectrum = |w: &WaveFn1D| {
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        buf[..w.amp().len()].copy_from_slice(w.amp());
        fwd.process(&mut buf);
        let scale = dx / (2.0 * PI).sqrt();
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    };
    let (ka, kb, kf) = (spectrum(&ds.psi_a), spectrum(&ds.psi_b), spectrum(phi));
    let mut cross: Vec<Complex64> = ka
        .iter()
        .zip(&kb)
        .map(|(a, b)| Complex64::new(2.0 * (a.conj() * b).re, 0.0))
        .collect();
    let mut pointer: Vec<Complex64> = kf.iter().map(|c| Complex64::new(c.norm_sqr(), 0.0)).collect();
    fwd.process(&mut cross);
    fwd.process(&mut pointer);
    cross.iter_mut().zip(&pointer).for_each(|(x, y)| *x *= y);
    inv.process(&mut cross);
    let dk = 2.0 * PI / (len as f64 * dx);
    let scale = dk / len as f64;
    cross.iter().map(|c| c.re * scale).collect()
}

/// Evaluates both sides of the convolution identity behind total-momentum conservation.
///
/// The momentum-space value vanishes exactly when the two factors of the
/// position-space witness have disjoint supports, which is the case iff the
/// pointer fits into the gap.
pub fn cross_term_convolution(ds: &DoubleSlitState, phi: &WaveFn1D) -> Result<CrossTerm> {
    let (gp, gd) = (ds.grid(), phi.grid());
    if !gp.same_spacing(gd) {
        return Err(KickError::GridMismatch(
            "packet and pointer grids must share the position spacing".into(),
        ));
    }
    let window = padded_cross_convolution(ds, phi);
    let momentum_sup = window.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let (a, b, f) = (ds.psi_a.amp(), ds.psi_b.amp(), phi.amp());
    let max_lag = (gp.len().max(gd.len()) - 1) as i64;
    let dx = gp.dx();
    let position_witness = (-max_lag..=max_lag)
        .filter_map(|lag| {
            let auto = correlation(f, f, lag, dx).norm();
            if auto == 0.0 {
                return None;
            }
            let c = correlation(a, b, lag, dx) + correlation(b, a, lag, dx);
            Some(c.norm() * auto)
        })
        .fold(0.0_f64, f64::max);
    Ok(CrossTerm {
        momentum_sup,
        position_witness,
    })
}

/// One row of a moment comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRow {
    pub order: u32,
    pub initial: f64,
    #[serde(rename = "final")]
    pub final_: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

/// Compares `⟨k^N⟩` of two distributions for `N = 0..=n_max`.
///
/// Differences are scaled by `max(|⟨k^N⟩_i|, Δk^N)` with `Δk` the rms
/// spread of `p_i`, since raw high moments grow with the grid's truncation
/// radius.
pub fn moment_equality_check(p_i: &ProbDist, p_f: &ProbDist, n_max: u32) -> Result<Vec<MomentRow>> {
    if !p_i.same_axis(p_f) {
        return Err(KickError::GridMismatch("moment comparison needs a shared axis".into()));
    }
    let spread = p_i.rms_spread();
    Ok((0..=n_max)
        .map(|order| {
            let initial = p_i.moment(order);
            let final_ = p_f.moment(order);
            let abs_diff = (initial - final_).abs();
            let scale = initial.abs().max(spread.powi(order as i32));
            MomentRow {
                order,
                initial,
                final_,
                abs_diff,
                rel_diff: if scale > 0.0 { abs_diff / scale } else { abs_diff },
            }
        })
        .collect())
}

fn packet_spectra(ds: &DoubleSlitState) -> Result<(WaveFn1D, WaveFn1D)> {
    Ok((dft_forward(&ds.psi_a)?, dft_forward(&ds.psi_b)?))
}

/// `½|ψ̃_A|² + ½|ψ̃_B|²`: the fringe-free mixture.
pub fn analytic_mixture(ds: &DoubleSlitState) -> Result<ProbDist> {
    let (ka, kb) = packet_spectra(ds)?;
    let values = ka
        .amp()
        .iter()
        .zip(kb.amp())
        .map(|(a, b)| 0.5 * (a.norm_sqr() + b.norm_sqr()))
        .collect();
    axis_dist(values, ds.grid())
}

/// `½|ψ̃_A + ψ̃_B|²`: the fringed double-slit pattern.
pub fn analytic_fringed(ds: &DoubleSlitState) -> Result<ProbDist> {
    let (ka, kb) = packet_spectra(ds)?;
    let values = ka.amp().iter().zip(kb.amp()).map(|(a, b)| 0.5 * (a + b).norm_sqr()).collect();
    axis_dist(values, ds.grid())
}

/// Fringe spacing `2π/separation`, snapped to the nearest multiple of `dk`.
pub fn fringe_spacing(ds: &DoubleSlitState) -> f64 {
    let dk = ds.grid().dk();
    let kappa = 2.0 * std::f64::consts::PI / ds.separation();
    (kappa / dk).round().max(1.0) * dk
}

/// Visibility of `p` over the central fringe period after dividing out the
/// single-packet envelope `½|ψ̃_A|² + ½|ψ̃_B|²`.
pub fn fringe_contrast(p: &ProbDist, ds: &DoubleSlitState) -> Result<f64> {
    let envelope = analytic_mixture(ds)?;
    fringe_visibility(p, Some(&envelope), 0.0, fringe_spacing(ds))
}
