//! Longitudinal bookkeeping after diffraction, in closed form (ħ = 1).
//!
//! When the particle leaves the slit with transverse momentum `k_p` and the
//! slit's transverse momentum changes from `k_si` to `k_s = k_si − k_p`, the
//! extra transverse kinetic energy is paid for by a small change of the
//! particle's longitudinal momentum `P → P'`. The slit takes the opposite
//! longitudinal kick.

use serde::Serialize;

use crate::error::{KickError, Result};

/// Ratios above this trigger a regime warning.
pub const REGIME_LIMIT: f64 = 0.1;

/// Momenta and masses entering the longitudinal balance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LongitudinalParams {
    /// Incident longitudinal momentum `P`.
    pub p: f64,
    /// Particle mass.
    pub m: f64,
    /// Slit mass.
    pub big_m: f64,
    /// Particle transverse momentum after diffraction.
    pub k_p: f64,
    /// Slit transverse momentum after diffraction.
    pub k_s: f64,
    /// Transit time through the slit.
    pub tau: f64,
}

/// A regime assumption that does not hold for the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeWarning {
    /// `k_p/P` is not small.
    LargeTransverseMomentum,
    /// `m/M` is not small.
    LightSlit,
}

impl LongitudinalParams {
    pub fn new(p: f64, m: f64, big_m: f64, k_p: f64, k_s: f64, tau: f64) -> Result<Self> {
        let out = Self { p, m, big_m, k_p, k_s, tau };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0) {
            return Err(KickError::InvalidParameter(format!("P = {} must be positive", self.p)));
        }
        if !(self.m > 0.0 && self.big_m > 0.0) {
            return Err(KickError::InvalidParameter("masses must be positive".into()));
        }
        Ok(())
    }

    /// Slit transverse momentum before diffraction, `k_s + k_p`.
    pub fn k_si(&self) -> f64 {
        self.k_s + self.k_p
    }

    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut w = Vec::new();
        if (self.k_p / self.p).abs() > REGIME_LIMIT {
            w.push(RegimeWarning::LargeTransverseMomentum);
        }
        if self.m / self.big_m > REGIME_LIMIT {
            w.push(RegimeWarning::LightSlit);
        }
        w
    }

    /// Change of the particle's longitudinal momentum, `P' − P`.
    pub fn kick(&self) -> f64 {
        let k_si = self.k_si();
        -self.k_p * self.k_p / (2.0 * self.p)
            - self.m * (self.k_s * self.k_s - k_si * k_si) / (2.0 * self.big_m * self.p)
    }
}

/// Phase acquired between transit and detection at longitudinal positions `z_p`, `z_s`.
///
/// `−(k_si²/2M)τ − (P − P')(z_p − z_s)`, using `t_f ≈ (m/P)(z_p − z_s)`.
pub fn post_diffraction_phase(params: &LongitudinalParams, z_p: f64, z_s: f64) -> Result<f64> {
    params.validate()?;
    let k_si = params.k_si();
    Ok(-(k_si * k_si / (2.0 * params.big_m)) * params.tau + params.kick() * (z_p - z_s))
}

/// The particle's and the slit's longitudinal momentum changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZMomentum {
    /// `P'`.
    pub p_after: f64,
    /// `P' − P`.
    pub particle_kick: f64,
    /// `−(P' − P)`.
    pub slit_kick: f64,
}

pub fn z_momentum_after(params: &LongitudinalParams) -> Result<ZMomentum> {
    params.validate()?;
    let kick = params.kick();
    Ok(ZMomentum {
        p_after: params.p + kick,
        particle_kick: kick,
        slit_kick: -kick,
    })
}

/// Energy bookkeeping of the longitudinal kick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyBalance {
    /// `P(P' − P)/m`.
    pub longitudinal: f64,
    /// `k_p²/2m`.
    pub particle_transverse: f64,
    /// `(k_s² − k_si²)/2M`.
    pub slit_transverse: f64,
    /// Sum of the three terms.
    pub residual: f64,
    /// `|residual|` relative to the largest term (0 when all vanish).
    pub relative: f64,
    pub cancels: bool,
}

/// Checks that the longitudinal energy change cancels the transverse one.
pub fn energy_balance(params: &LongitudinalParams) -> Result<EnergyBalance> {
    let z = z_momentum_after(params)?;
    let k_si = params.k_si();
    let longitudinal = params.p * z.particle_kick / params.m;
    let particle_transverse = params.k_p * params.k_p / (2.0 * params.m);
    let slit_transverse = (params.k_s * params.k_s - k_si * k_si) / (2.0 * params.big_m);
    let residual = longitudinal + particle_transverse + slit_transverse;
    let scale = longitudinal.abs().max(particle_transverse.abs()).max(slit_transverse.abs());
    let relative = if scale > 0.0 { residual.abs() / scale } else { residual.abs() };
    Ok(EnergyBalance {
        longitudinal,
        particle_transverse,
        slit_transverse,
        residual,
        relative,
        cancels: relative < 1e-12,
    })
}
