//! Wavefunction constructors and the slit/detector parameter sets.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KickError, Representation, Result};
use crate::grid::Grid1D;
use crate::wavefn::WaveFn1D;
use crate::SUPPORT_THRESHOLD;

/// Reduced Planck constant, J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;

/// Points within this fraction of `dx` of a window edge count as on the edge.
pub(crate) const EDGE_TOL: f64 = 1e-9;

/// Shape of the smooth potential ramp across an edge of half-width `δ_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeProfile {
    Linear,
    #[default]
    HalfCosine,
}

impl EdgeProfile {
    /// Rises from 0 at `x = −half_width` to 1 at `x = +half_width`, clamped outside.
    pub fn ramp(&self, x: f64, half_width: f64) -> f64 {
        let t = ((x + half_width) / (2.0 * half_width)).clamp(0.0, 1.0);
        match self {
            EdgeProfile::Linear => t,
            EdgeProfile::HalfCosine => 0.5 * (1.0 - (PI * t).cos()),
        }
    }
}

impl FromStr for EdgeProfile {
    type Err = KickError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(EdgeProfile::Linear),
            "half-cosine" => Ok(EdgeProfile::HalfCosine),
            other => Err(KickError::InvalidConfig(format!(
                "unknown edge profile `{other}` (expected `linear` or `half-cosine`)"
            ))),
        }
    }
}

impl fmt::Display for EdgeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeProfile::Linear => "linear",
            EdgeProfile::HalfCosine => "half-cosine",
        })
    }
}

/// Geometry of a single slit of half-width `d`.
///
/// Region I is `|x| ≤ d − ε`, region II the edge band out to `d + ε`,
/// region III the slit material beyond. `v0` is carried for reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitSpec {
    pub d: f64,
    pub epsilon: f64,
    pub delta_f: f64,
    /// Transverse spreading allowance during transit; 0 for an instantaneous interaction.
    pub delta_s: f64,
    pub v0: f64,
    pub edge_profile: EdgeProfile,
}

impl SlitSpec {
    pub fn new(d: f64, epsilon: f64, delta_f: f64, delta_s: f64) -> Result<Self> {
        let spec = Self {
            d,
            epsilon,
            delta_f,
            delta_s,
            v0: 1e6,
            edge_profile: EdgeProfile::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0) {
            return Err(KickError::InvalidParameter(format!("slit half-width d = {} must be positive", self.d)));
        }
        if !(self.epsilon > 0.0) || self.epsilon >= self.d {
            return Err(KickError::Precondition(format!(
                "0 < epsilon < d required (d' = d - epsilon > 0); got epsilon = {}, d = {}",
                self.epsilon, self.d
            )));
        }
        if !(self.delta_f > 0.0) || self.delta_f >= self.d {
            return Err(KickError::Precondition(format!(
                "0 < delta_f < d required; got delta_f = {}, d = {}",
                self.delta_f, self.d
            )));
        }
        if !(self.delta_s >= 0.0) {
            return Err(KickError::InvalidParameter(format!("delta_s = {} must be nonnegative", self.delta_s)));
        }
        Ok(())
    }

    /// Half-width `d' = d − ε` of the force-free aperture region.
    pub fn d_prime(&self) -> f64 {
        self.d - self.epsilon
    }

    /// Checks `ε > Δx_s + δ_f + δ_s` for a slit of position spread `slit_spread`.
    pub fn check_margin(&self, slit_spread: f64) -> Result<()> {
        let floor = slit_spread + self.delta_f + self.delta_s;
        if self.epsilon > floor {
            Ok(())
        } else {
            Err(KickError::Precondition(format!(
                "epsilon > dx_s + delta_f + delta_s violated: {} <= {} + {} + {} = {}",
                self.epsilon, slit_spread, self.delta_f, self.delta_s, floor
            )))
        }
    }

    /// Particle–slit potential as a function of the relative coordinate.
    pub fn potential(&self, relative_x: f64) -> f64 {
        let r = relative_x.abs();
        if r >= self.d + self.delta_f {
            self.v0
        } else if r <= self.d - self.delta_f {
            0.0
        } else {
            self.v0 * self.edge_profile.ramp(r - self.d, self.delta_f)
        }
    }
}

/// A two-level which-way detector with edge at relative coordinate 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub delta_f: f64,
    pub v1: f64,
    /// Thickness of the detection region along z; informational.
    pub thickness_w: f64,
    /// Transit time; informational.
    pub tau: f64,
    pub edge_profile: EdgeProfile,
}

impl DetectorSpec {
    pub fn new(delta_f: f64, edge_profile: EdgeProfile) -> Result<Self> {
        if !(delta_f > 0.0) {
            return Err(KickError::InvalidParameter(format!("delta_f = {delta_f} must be positive")));
        }
        Ok(Self {
            delta_f,
            v1: 1.0,
            thickness_w: 1.0,
            tau: PI / 2.0,
            edge_profile,
        })
    }

    /// `V(x)`: 0 for `x ≤ −δ_f`, `V₁` for `x ≥ δ_f`, the edge ramp between.
    pub fn potential(&self, x: f64) -> f64 {
        self.v1 * self.edge_profile.ramp(x, self.delta_f)
    }

    /// Rotation angle `θ = (π/2)·V(x)/V₁` of the transit unitary.
    ///
    /// The thickness is assumed tuned so that the plateau rotation is exactly
    /// a quarter turn, which makes the flip complete for `x ≥ δ_f`.
    pub fn rotation_angle(&self, x: f64) -> f64 {
        0.5 * PI * self.edge_profile.ramp(x, self.delta_f)
    }
}

/// Shape of each arm of a double-slit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum PacketShape {
    Gaussian { width: f64 },
    TopHat { half_width: f64 },
}

/// Two disjoint packets `ψ_A` (positive side) and `ψ_B` behind a double slit.
#[derive(Debug, Clone)]
pub struct DoubleSlitState {
    pub psi_a: WaveFn1D,
    pub psi_b: WaveFn1D,
    /// Half-width `v` of the empty gap between the numerical supports.
    pub gap_half_width: f64,
    pub gap_center: f64,
    pub center_a: f64,
    pub center_b: f64,
}

impl DoubleSlitState {
    /// Wraps two individually normalized, non-overlapping packets.
    ///
    /// `ψ_A` is whichever packet lies at larger x.
    pub fn from_packets(first: WaveFn1D, second: WaveFn1D) -> Result<Self> {
        let sa = first.support().ok_or(KickError::ZeroNorm)?;
        let sb = second.support().ok_or(KickError::ZeroNorm)?;
        let (psi_a, psi_b, sa, sb) = if sa.lo > sb.hi {
            (first, second, sa, sb)
        } else if sb.lo > sa.hi {
            (second, first, sb, sa)
        } else {
            return Err(KickError::OverlappingPackets);
        };
        let (center_a, _) = psi_a.mean_and_spread()?;
        let (center_b, _) = psi_b.mean_and_spread()?;
        Ok(Self {
            psi_a: psi_a.normalized()?,
            psi_b: psi_b.normalized()?,
            gap_half_width: 0.5 * (sa.lo - sb.hi),
            gap_center: 0.5 * (sa.lo + sb.hi),
            center_a,
            center_b,
        })
    }

    /// `(ψ_A + ψ_B)/√2`.
    pub fn combined(&self) -> WaveFn1D {
        self.psi_a
            .add(&self.psi_b)
            .expect("packets share a grid by construction")
            .scaled(Complex64::new(FRAC_1_SQRT_2, 0.0))
    }

    pub fn grid(&self) -> &Grid1D {
        self.psi_a.grid()
    }

    /// Distance between the packet centers.
    pub fn separation(&self) -> f64 {
        self.center_a - self.center_b
    }
}

fn inside(x: f64, center: f64, half_width: f64, dx: f64) -> bool {
    (x - center).abs() <= half_width + EDGE_TOL * dx
}

/// Uniform segment over `|x| ≤ L`, normalized on the grid.
///
/// The amplitude is `1/√(2L_eff)` where `2L_eff = M·dx` is the width covered
/// by the `M` included points; choosing `L` on a half-step makes `L_eff = L`.
pub fn plane_wave_segment(half_length: f64, grid: &Grid1D) -> Result<WaveFn1D> {
    if !(half_length > 0.0) {
        return Err(KickError::InvalidParameter(format!("L = {half_length} must be positive")));
    }
    if 2.0 * half_length > 0.5 * grid.domain_length() * (1.0 + 1e-12) {
        return Err(KickError::DoesNotFit(format!(
            "segment of width 2L = {} (must fit in half the domain {})",
            2.0 * half_length,
            grid.domain_length()
        )));
    }
    let dx = grid.dx();
    let psi = WaveFn1D::from_fn(*grid, |x| {
        if inside(x, 0.0, half_length, dx) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    psi.normalized()
}

/// Radius beyond which a normalized Gaussian of spread `width` falls below the support threshold.
pub fn gaussian_support_radius(width: f64) -> f64 {
    let peak = (2.0 * PI * width * width).powf(-0.25);
    if peak <= SUPPORT_THRESHOLD {
        0.0
    } else {
        2.0 * width * (peak / SUPPORT_THRESHOLD).ln().sqrt()
    }
}

/// `(2πΔx²)^(-1/4) exp(−(x−x0)²/4Δx²) e^(i k0 x)`, normalized on the grid.
pub fn gaussian_packet(width: f64, x0: f64, k0: f64, grid: &Grid1D) -> Result<WaveFn1D> {
    if width < 3.0 * grid.dx() * (1.0 - 1e-12) {
        return Err(KickError::UnderResolved {
            what: "gaussian width",
            have: width,
            need: 3.0 * grid.dx(),
        });
    }
    let r = gaussian_support_radius(width);
    if x0 - r < grid.x_min() || x0 + r > grid.x_max() {
        return Err(KickError::DoesNotFit(format!(
            "gaussian at {x0} with support radius {r:.3}"
        )));
    }
    let norm = (2.0 * PI * width * width).powf(-0.25);
    let psi = WaveFn1D::from_fn(*grid, |x| {
        let envelope = norm * (-(x - x0).powi(2) / (4.0 * width * width)).exp();
        Complex64::from_polar(envelope, k0 * x)
    });
    psi.normalized()
}

/// Indicator window `|x − center| ≤ half_width`; deliberately unnormalized.
pub fn top_hat(half_width: f64, center: f64, grid: &Grid1D) -> Result<WaveFn1D> {
    if 2.0 * half_width < 8.0 * grid.dx() {
        return Err(KickError::UnderResolved {
            what: "top-hat width",
            have: 2.0 * half_width,
            need: 8.0 * grid.dx(),
        });
    }
    let dx = grid.dx();
    Ok(WaveFn1D::from_fn(*grid, |x| {
        if inside(x, center, half_width, dx) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Normalized packet of the given shape centered at `center`.
pub fn packet(shape: PacketShape, center: f64, grid: &Grid1D) -> Result<WaveFn1D> {
    match shape {
        PacketShape::Gaussian { width } => gaussian_packet(width, center, 0.0, grid),
        PacketShape::TopHat { half_width } => top_hat(half_width, center, grid)?.normalized(),
    }
}

/// Packets of one shape at two centers, with the gap measured from their numerical supports.
pub fn double_slit_state(
    shape: PacketShape,
    center_a: f64,
    center_b: f64,
    grid: &Grid1D,
) -> Result<DoubleSlitState> {
    let a = packet(shape, center_a, grid)?;
    let b = packet(shape, center_b, grid)?;
    DoubleSlitState::from_packets(a, b)
}

/// Equipartition estimate of a macroscopic slit's localization, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSpread {
    /// `Δx_s = (ħ²/4MkT)^(1/2)` in meters.
    pub position_m: f64,
    /// `Δẋ_s = ħ/(2MΔx_s)` in meters per second.
    pub velocity_m_per_s: f64,
}

pub fn thermal_position_spread(mass_kg: f64, temperature_k: f64) -> Result<ThermalSpread> {
    if !(mass_kg > 0.0 && temperature_k > 0.0) {
        return Err(KickError::InvalidParameter(format!(
            "mass and temperature must be positive, got M = {mass_kg}, T = {temperature_k}"
        )));
    }
    let position_m = (HBAR_SI * HBAR_SI / (4.0 * mass_kg * BOLTZMANN_SI * temperature_k)).sqrt();
    let velocity_m_per_s = HBAR_SI / (2.0 * mass_kg * position_m);
    Ok(ThermalSpread {
        position_m,
        velocity_m_per_s,
    })
}

/// Helper for tests and scenarios: a one-point spike of unit norm at index `j`.
pub fn grid_spike(j: usize, grid: &Grid1D) -> WaveFn1D {
    let mut psi = WaveFn1D::zeros(*grid, Representation::Position);
    psi.amp_mut()[j] = Complex64::new(grid.dx().sqrt().recip(), 0.0);
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::prob_dist;
    use crate::fourier::dft_forward;

    #[test]
    fn ramps_hit_their_endpoints() {
        for p in [EdgeProfile::Linear, EdgeProfile::HalfCosine] {
            assert_eq!(p.ramp(-1.0, 0.5), 0.0);
            assert_eq!(p.ramp(1.0, 0.5), 1.0);
            assert!((p.ramp(0.0, 0.5) - 0.5).abs() < 1e-15);
        }
        assert_eq!("half-cosine".parse::<EdgeProfile>().unwrap(), EdgeProfile::HalfCosine);
        assert!("cubic".parse::<EdgeProfile>().is_err());
    }

    #[test]
    fn slit_spec_validation() {
        assert!(SlitSpec::new(1.0, 1.0, 0.01, 0.0).is_err());
        assert!(SlitSpec::new(1.0, 0.05, 0.0, 0.0).is_err());
        let s = SlitSpec::new(1.0, 0.05, 0.02, 0.0).unwrap();
        assert!((s.d_prime() - 0.95).abs() < 1e-15);
        assert!(s.check_margin(0.01).is_ok());
        let err = s.check_margin(0.04).unwrap_err().to_string();
        assert!(err.contains("epsilon > dx_s + delta_f + delta_s"), "{err}");
    }

    #[test]
    fn slit_potential_is_piecewise() {
        let s = SlitSpec::new(1.0, 0.05, 0.02, 0.0).unwrap();
        assert_eq!(s.potential(0.5), 0.0);
        assert_eq!(s.potential(-1.5), s.v0);
        assert!((s.potential(1.0) - 0.5 * s.v0).abs() < 1e-9 * s.v0);
    }

    #[test]
    fn plane_wave_segment_is_normalized_and_flat() {
        let g = Grid1D::centered(1024, 0.1).unwrap();
        let quarter = g.domain_length() / 4.0;
        let psi = plane_wave_segment(quarter, &g).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let p = prob_dist(&psi).unwrap();
        let inner: Vec<f64> = p.values().iter().copied().filter(|v| *v > 0.0).collect();
        assert!(inner.iter().all(|v| (v - inner[0]).abs() < 1e-15));
        assert!(plane_wave_segment(quarter * 1.01, &g).is_err());
    }

    #[test]
    fn plane_wave_on_half_step_has_exact_density() {
        let g = Grid1D::centered(1024, 0.1).unwrap();
        let l = 25.05;
        let psi = plane_wave_segment(l, &g).unwrap();
        let p = prob_dist(&psi).unwrap();
        assert!((p.values()[g.mid()] - 1.0 / (2.0 * l)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_parameters() {
        let g = Grid1D::centered(1024, 0.05).unwrap();
        let psi = gaussian_packet(1.0, 0.0, 0.0, &g).unwrap();
        let p = prob_dist(&psi).unwrap();
        assert!(p.moment(1).abs() < 1e-8);
        assert!((p.variance() - 1.0).abs() < 1e-8);
        let peak = p.values()[g.mid()];
        assert!((peak - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-10);

        let psi = gaussian_packet(1.0, 0.0, 2.0, &g).unwrap();
        let pk = prob_dist(&dft_forward(&psi).unwrap()).unwrap();
        assert!((pk.mean() - 2.0).abs() < 1e-8);

        let psi = gaussian_packet(0.5, 0.0, 0.0, &g).unwrap();
        let pk = prob_dist(&dft_forward(&psi).unwrap()).unwrap();
        assert!((pk.rms_spread() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gaussian_preconditions() {
        let g = Grid1D::centered(256, 0.1).unwrap();
        assert!(matches!(
            gaussian_packet(0.2, 0.0, 0.0, &g),
            Err(KickError::UnderResolved { .. })
        ));
        assert!(matches!(
            gaussian_packet(1.0, 10.0, 0.0, &g),
            Err(KickError::DoesNotFit(_))
        ));
    }

    #[test]
    fn top_hat_windows() {
        let g = Grid1D::centered(256, 0.1).unwrap();
        assert!(top_hat(0.3, 0.0, &g).is_err());
        let w = top_hat(1.0, 0.0, &g).unwrap();
        let shifted = top_hat(1.0, 0.7, &g).unwrap();
        assert!(shifted.sup_distance(&w.rolled(7)).unwrap() < 1e-15);
        // wider window than a packet acts as identity
        let psi = gaussian_packet(0.3, 0.0, 0.0, &g).unwrap();
        let wide = top_hat(5.0, 0.0, &g).unwrap();
        assert!(psi.mul(&wide).unwrap().sup_distance(&psi).unwrap() < 1e-15);
    }

    #[test]
    fn thermal_estimate_scales_as_inverse_root_mass() {
        let a = thermal_position_spread(1e-3, 300.0).unwrap();
        let b = thermal_position_spread(4e-3, 300.0).unwrap();
        assert!((a.position_m / b.position_m - 2.0).abs() < 1e-12);
        let product = a.position_m * 1e-3 * a.velocity_m_per_s;
        assert!((product / (HBAR_SI / 2.0) - 1.0).abs() < 1e-14);
        assert!(thermal_position_spread(0.0, 300.0).is_err());
    }

    #[test]
    fn double_slit_packets_are_orthogonal_and_ordered() {
        let g = Grid1D::centered(2048, 0.078125).unwrap();
        let ds = double_slit_state(PacketShape::Gaussian { width: 0.5 }, -10.0, 10.0, &g).unwrap();
        assert!(ds.center_a > 0.0 && ds.center_b < 0.0);
        assert!(ds.psi_a.inner(&ds.psi_b).unwrap().norm() < 1e-14);
        assert!((ds.combined().norm_sqr() - 1.0).abs() < 1e-12);
        let r = gaussian_support_radius(0.5);
        assert!((ds.gap_half_width - (10.0 - r)).abs() < 2.0 * g.dx());
        assert!(ds.gap_half_width > 0.0);
    }

    #[test]
    fn overlapping_packets_are_rejected() {
        let g = Grid1D::centered(1024, 0.05).unwrap();
        let res = double_slit_state(PacketShape::Gaussian { width: 0.8 }, -5.0, 5.0, &g);
        assert!(matches!(res, Err(KickError::OverlappingPackets)));
    }
}
