//! Diffraction by a single slit that is itself a quantum object.
//!
//! The incident particle is split into the force-free aperture component
//! (region I), the edge band (region II) and the blocked remainder
//! (region III). Post-selection keeps region I and records everything else
//! as removed probability. For a delocalized slit the same rule is applied
//! strip by strip, which entangles the particle window with the slit
//! position and produces a recoil of exactly `−k_p`.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::dist::ProbDist;
use crate::error::{KickError, Representation, Result};
use crate::fourier::dft_forward;
use crate::grid::{steps_of, Grid1D};
use crate::joint::JointState;
use crate::states::{SlitSpec, EDGE_TOL};
use crate::wavefn::WaveFn1D;

/// Conditional slices lighter than this are treated as empty.
pub const SLICE_FLOOR: f64 = 1e-9;

/// Unnormalized projections of a particle wavefunction onto the three regions.
#[derive(Debug, Clone)]
pub struct RegionDecomposition {
    pub psi_i: WaveFn1D,
    pub psi_ii: WaveFn1D,
    pub psi_iii: WaveFn1D,
    pub inner_boundary: f64,
    pub outer_boundary: f64,
}

impl RegionDecomposition {
    /// `ψ_I + ψ_II + ψ_III`.
    pub fn reconstruct(&self) -> WaveFn1D {
        self.psi_i
            .add(&self.psi_ii)
            .and_then(|s| s.add(&self.psi_iii))
            .expect("regions share a grid")
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Aperture,
    Edge,
    Blocked,
}

fn classify(relative_x: f64, slit: &SlitSpec, dx: f64) -> Region {
    let r = relative_x.abs();
    let tol = EDGE_TOL * dx;
    // boundary points belong to the inner region
    if r <= slit.d - slit.epsilon + tol {
        Region::Aperture
    } else if r <= slit.d + slit.epsilon + tol {
        Region::Edge
    } else {
        Region::Blocked
    }
}

fn require_position(psi: &WaveFn1D) -> Result<()> {
    if psi.representation() != Representation::Position {
        return Err(KickError::RepresentationMismatch {
            expected: Representation::Position,
            found: psi.representation(),
        });
    }
    Ok(())
}

/// Splits `ψ` at `d − ε` and `d + ε` around a slit centered on the origin.
pub fn decompose_regions(psi: &WaveFn1D, slit: &SlitSpec) -> Result<RegionDecomposition> {
    require_position(psi)?;
    slit.validate()?;
    let grid = *psi.grid();
    let mut parts = [
        WaveFn1D::zeros(grid, Representation::Position),
        WaveFn1D::zeros(grid, Representation::Position),
        WaveFn1D::zeros(grid, Representation::Position),
    ];
    for (j, a) in psi.amp().iter().enumerate() {
        let slot = match classify(grid.x(j), slit, grid.dx()) {
            Region::Aperture => 0,
            Region::Edge => 1,
            Region::Blocked => 2,
        };
        parts[slot].amp_mut()[j] = *a;
    }
    let [psi_i, psi_ii, psi_iii] = parts;
    Ok(RegionDecomposition {
        psi_i,
        psi_ii,
        psi_iii,
        inner_boundary: slit.d - slit.epsilon,
        outer_boundary: slit.d + slit.epsilon,
    })
}

/// Transmission through a sharply localized slit: `N ψ_I(x_p) φ(x_s)`.
///
/// The slit spread is measured from `φ` and checked against the region
/// margin `ε > Δx_s + δ_f + δ_s`. The retained probability (≈ `d'/L` for a
/// broad plane wave) is kept in the state's [`SelectionRecord`](crate::joint::SelectionRecord).
pub fn localized_transmit(psi: &WaveFn1D, phi: &WaveFn1D, slit: &SlitSpec) -> Result<JointState> {
    require_position(psi)?;
    require_position(phi)?;
    let (_, spread) = phi.mean_and_spread()?;
    slit.check_margin(spread)?;
    let regions = decompose_regions(psi, slit)?;
    let phi_norm = phi.norm_sqr();
    let initial = psi.norm_sqr() * phi_norm;
    let edge = regions.psi_ii.norm_sqr() * phi_norm;
    JointState::product(&regions.psi_i, phi)?.select(initial, edge)
}

/// Far-field pattern: the particle momentum marginal.
pub fn far_field_pattern(state: &JointState) -> Result<ProbDist> {
    state.particle_momentum_marginal()
}

/// `(d'/π)·(sin(k d')/(k d'))²`, the far-field density of an aperture of half-width `d'`.
pub fn sinc2_density(k: f64, d_prime: f64) -> f64 {
    let u = k * d_prime;
    let s = if u.abs() < 1e-8 { 1.0 - u * u / 6.0 } else { u.sin() / u };
    d_prime / std::f64::consts::PI * s * s
}

/// [`sinc2_density`] sampled on a grid's momentum axis.
pub fn sinc2_on_grid(grid: &Grid1D, d_prime: f64) -> Result<ProbDist> {
    let values = grid.ks().iter().map(|k| sinc2_density(*k, d_prime)).collect();
    ProbDist::new(values, grid.k(0), grid.dk(), Representation::Momentum)
}

/// Strip partition of the device grid into runs of `points` samples.
///
/// Strips tile the grid so that one representative sits on the grid center;
/// each strip is represented by its middle (lower-middle for even widths)
/// sample.
#[derive(Debug, Clone, Copy)]
struct Strips {
    points: usize,
    start: i64,
}

impl Strips {
    fn new(grid: &Grid1D, strip_half_width: f64) -> Result<Self> {
        let points = steps_of("strip width 2*eps_strip", 2.0 * strip_half_width, grid.dx())?;
        if points < 1 {
            return Err(KickError::InvalidParameter(format!(
                "strip half-width {strip_half_width} must be at least dx/2"
            )));
        }
        let lead = (points - 1) / 2;
        let start = (grid.mid() as i64 - lead).rem_euclid(points);
        Ok(Self {
            points: points as usize,
            start: start - if start > 0 { points } else { 0 },
        })
    }

    /// Representative grid index for sample `j`, clamped to the grid.
    fn representative(&self, j: usize, n: usize) -> usize {
        let p = self.points as i64;
        let strip = (j as i64 - self.start).div_euclid(p);
        let rep = self.start + strip * p + (p - 1) / 2;
        rep.clamp(0, n as i64 - 1) as usize
    }
}

/// Transmission through a delocalized slit decomposed into strips of width `2ε_strip`.
///
/// Builds `Σ_strips ψ(x_p)·χ_{d'}(x_p − x'_s)·χ_strip(x_s − x'_s)·φ_d(x'_s)`,
/// dropping edge-band terms, then renormalizes. With one sample per strip
/// (`ε_strip = dx/2`) this is the continuum-limit window
/// `ψ(x_p)·χ_{d'}(x_p − x_s)·φ_d(x_s)`.
///
/// The recorded `edge` probability bounds the dropped edge terms; the
/// region margin is not enforced here since coarse strips are a supported
/// (degraded) configuration.
pub fn delocalized_transmit(
    psi: &WaveFn1D,
    phi_d: &WaveFn1D,
    slit: &SlitSpec,
    strip_half_width: f64,
) -> Result<JointState> {
    require_position(psi)?;
    require_position(phi_d)?;
    slit.validate()?;
    let (gp, gd) = (*psi.grid(), *phi_d.grid());
    if !gp.same_spacing(&gd) {
        return Err(KickError::GridMismatch("particle and slit grids must share dx".into()));
    }
    if !(gp.is_lattice_aligned() && gd.is_lattice_aligned()) {
        return Err(KickError::GridMismatch(
            "joint grids must be centered on the dx lattice".into(),
        ));
    }
    let strips = Strips::new(&gd, strip_half_width)?;
    let dx = gp.dx();
    let (np, nd) = (gp.len(), gd.len());

    let reps: Vec<usize> = (0..nd).map(|j| strips.representative(j, nd)).collect();
    let mut amp = Array2::<Complex64>::zeros((np, nd));
    let mut edge = 0.0;
    let mut initial = 0.0;
    let psi_norm = psi.norm_sqr();
    for (j, &rep) in reps.iter().enumerate() {
        let centre = gd.x(rep);
        let weight = phi_d.amp()[rep];
        if weight.norm_sqr() == 0.0 {
            continue;
        }
        initial += weight.norm_sqr() * dx * psi_norm;
        let mut edge_here = 0.0;
        for i in 0..np {
            let a = psi.amp()[i];
            match classify(gp.x(i) - centre, slit, dx) {
                Region::Aperture => amp[[i, j]] = a * weight,
                Region::Edge => edge_here += a.norm_sqr(),
                Region::Blocked => {}
            }
        }
        edge += edge_here * dx * weight.norm_sqr() * dx;
    }
    JointState::new(gp, gd, amp, Representation::Position, Representation::Position)?.select(initial, edge)
}

/// Distances between a transmitted state and the recoil-factorized forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoilResidual {
    /// L² distance of `Ψ̃(k_p, k_s)` from `N ψ̃_I(k_p) φ̃(k_s + k_p)`.
    pub momentum: f64,
    /// L² distance of `Ψ̃(k_p, x_s)` from `N ψ̃_I(k_p) φ_d(x_s) e^(−i k_p x_s)`.
    pub mixed: f64,
}

/// `φ̃` sampled on the momentum grid of `n_fine` points (zero-padded transform).
fn padded_spectrum(phi: &WaveFn1D, n_fine: usize) -> Result<Vec<Complex64>> {
    let g = phi.grid();
    let fine = Grid1D::new(n_fine, g.dx(), g.x_center())?;
    let offset = (n_fine - g.len()) / 2;
    let mut amp = vec![Complex64::new(0.0, 0.0); n_fine];
    amp[offset..offset + g.len()].copy_from_slice(phi.amp());
    Ok(dft_forward(&WaveFn1D::new(fine, amp, Representation::Position)?)?.into_amp())
}

/// Checks the recoil factorization of a delocalized-slit state.
///
/// `psi_i` is the region-I projection of the incident wave about the origin
/// (on the particle grid) and `phi_d` the slit wavefunction used to build
/// `state`. The normalization `N = 1/(‖ψ_I‖‖φ_d‖)` is the one a
/// finest-strip state carries.
pub fn recoil_factorization_residual(
    state: &JointState,
    psi_i: &WaveFn1D,
    phi_d: &WaveFn1D,
) -> Result<RecoilResidual> {
    require_position(psi_i)?;
    require_position(phi_d)?;
    let (gp, gd) = (*state.grid_particle(), *state.grid_device());
    if !psi_i.grid().matches(&gp) || !phi_d.grid().matches(&gd) {
        return Err(KickError::GridMismatch("factors must live on the state's grids".into()));
    }
    let (np, nd) = (gp.len(), gd.len());
    let n_fine = np.max(nd);
    if n_fine % np != 0 || n_fine % nd != 0 || !(gp.is_lattice_aligned() && gd.is_lattice_aligned()) {
        return Err(KickError::GridMismatch(
            "grid sizes must divide each other and centers sit on the dx lattice".into(),
        ));
    }
    let norm = (psi_i.norm_sqr() * phi_d.norm_sqr()).sqrt().recip();
    let psi_i_k = dft_forward(psi_i)?;
    let phi_fine = padded_spectrum(phi_d, n_fine)?;
    let (rp, rd) = ((n_fine / np) as i64, (n_fine / nd) as i64);

    let mixed_state = state
        .with_device_repr(Representation::Position)
        .with_particle_repr(Representation::Momentum);
    let mut mixed = 0.0;
    for ((i, j), a) in mixed_state.amp().indexed_iter() {
        let k_p = gp.k(i);
        let want = norm * psi_i_k.amp()[i] * phi_d.amp()[j] * Complex64::from_polar(1.0, -k_p * gd.x(j));
        mixed += (a - want).norm_sqr();
    }
    let mixed = (mixed * gp.dk() * gd.dx()).sqrt();

    let full = mixed_state.with_device_repr(Representation::Momentum);
    drop(mixed_state);
    let half = (n_fine / 2) as i64;
    let mut momentum = 0.0;
    for ((i, j), a) in full.amp().indexed_iter() {
        let idx = half + (i as i64 - (np / 2) as i64) * rp + (j as i64 - (nd / 2) as i64) * rd;
        let phi_shifted = phi_fine[idx.rem_euclid(n_fine as i64) as usize];
        let want = norm * psi_i_k.amp()[i] * phi_shifted;
        momentum += (a - want).norm_sqr();
    }
    let momentum = (momentum * gp.dk() * gd.dk()).sqrt();
    Ok(RecoilResidual { momentum, mixed })
}

/// Joint momentum density of a transmitted state, with conditional queries.
#[derive(Debug, Clone)]
pub struct RecoilAnalysis {
    grid_p: Grid1D,
    grid_d: Grid1D,
    density: Array2<f64>,
}

/// Least-squares line through conditional slit momenta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoilFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    pub k_range: f64,
}

impl RecoilAnalysis {
    pub fn new(state: &JointState) -> Self {
        let k = state.in_representation(Representation::Momentum);
        Self {
            grid_p: *state.grid_particle(),
            grid_d: *state.grid_device(),
            density: k.density(),
        }
    }

    /// Marginal density `Prob(k_p)` at particle index `i`.
    fn slice_mass(&self, i: usize) -> f64 {
        self.density.row(i).sum() * self.grid_d.dk()
    }

    /// `E[k_s | k_p]` at the grid momentum nearest `k_p`.
    pub fn conditional_mean(&self, k_p: f64) -> Result<f64> {
        let i = self.grid_p.nearest_k_index(k_p).ok_or_else(|| {
            KickError::InvalidParameter(format!("k_p = {k_p} lies outside the momentum grid"))
        })?;
        self.conditional_mean_at(i)
    }

    fn conditional_mean_at(&self, i: usize) -> Result<f64> {
        let mass = self.slice_mass(i);
        if !(mass > SLICE_FLOOR) {
            return Err(KickError::EmptySlice {
                k_p: self.grid_p.k(i),
                mass,
            });
        }
        let row = self.density.row(i);
        let weighted: f64 = row.iter().enumerate().map(|(j, p)| self.grid_d.k(j) * p).sum();
        Ok(weighted / row.sum())
    }

    /// Fits `E[k_s | k_p]` against `k_p` over all grid momenta with `|k_p| ≤ k_range`.
    pub fn slope(&self, k_range: f64) -> Result<RecoilFit> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..self.grid_p.len() {
            let k = self.grid_p.k(i);
            if k.abs() <= k_range {
                if let Ok(m) = self.conditional_mean_at(i) {
                    xs.push(k);
                    ys.push(m);
                }
            }
        }
        if xs.len() < 2 {
            return Err(KickError::InvalidParameter(format!(
                "fewer than two usable momenta within |k_p| <= {k_range}"
            )));
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = sxy / sxx;
        Ok(RecoilFit {
            slope,
            intercept: my - slope * mx,
            points: xs.len(),
            k_range,
        })
    }
}

/// `E[k_s | k_p]` from the normalized conditional slice of the joint momentum density.
pub fn conditional_recoil(state: &JointState, k_p: f64) -> Result<f64> {
    RecoilAnalysis::new(state).conditional_mean(k_p)
}

/// Probability-weighted overlap `|⟨φ|φ_{k_p}⟩|` between the initial slit state
/// and the slit state conditioned on each particle momentum.
///
/// Equals 1 when the slit is left untouched and falls as the recoil kick
/// becomes resolvable against the slit's own momentum spread.
pub fn recoil_overlap(state: &JointState, phi: &WaveFn1D) -> Result<f64> {
    require_position(phi)?;
    if !phi.grid().matches(state.grid_device()) {
        return Err(KickError::GridMismatch("phi must live on the slit grid".into()));
    }
    let mixed = state
        .with_device_repr(Representation::Position)
        .with_particle_repr(Representation::Momentum);
    let phi_norm = phi.amp().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut total = 0.0;
    let mut weighted = 0.0;
    for row in mixed.amp().rows() {
        let p: f64 = row.iter().map(|a| a.norm_sqr()).sum();
        if p == 0.0 {
            continue;
        }
        let ov: Complex64 = row.iter().zip(phi.amp()).map(|(a, f)| f.conj() * a).sum();
        weighted += ov.norm() * p.sqrt() / phi_norm;
        total += p;
    }
    Ok(weighted / total)
}
