//! A slit as wide in position as the aperture: it recoils by exactly −k_p.
use std::f64::consts::PI;

use kicklab::single_slit::{
    decompose_regions, delocalized_transmit, recoil_factorization_residual, recoil_overlap, RecoilAnalysis,
};
use kicklab::states::{gaussian_packet, plane_wave_segment, SlitSpec};
use kicklab::Grid1D;

fn main() -> kicklab::Result<()> {
    let dx = 0.95 / 30.5;
    let particle = Grid1D::centered(2048, dx)?;
    let slit_grid = Grid1D::centered(1024, dx)?;
    let slit = SlitSpec::new(1.0, 0.05, 0.02, 0.0)?;

    let psi = plane_wave_segment(15.0, &particle)?;
    let phi = gaussian_packet(1.0, 0.0, 0.0, &slit_grid)?;
    let state = delocalized_transmit(&psi, &phi, &slit, 0.5 * dx)?;

    let psi_i = decompose_regions(&psi, &slit)?.psi_i;
    let residual = recoil_factorization_residual(&state, &psi_i, &phi)?;
    println!("factorization residual: momentum {:.2e}, mixed {:.2e}", residual.momentum, residual.mixed);
    println!("overlap with the unperturbed slit state: {:.4}", recoil_overlap(&state, &phi)?);

    let analysis = RecoilAnalysis::new(&state);
    let lobe = PI / slit.d_prime();
    for frac in [0.0, 0.25, 0.5, 0.75] {
        let k_p = frac * lobe;
        println!("k_p = {k_p:>6.3}: E[k_s | k_p] = {:>8.4}", analysis.conditional_mean(k_p)?);
    }
    let fit = analysis.slope(lobe)?;
    println!("slope over the main lobe: {:.6} from {} points", fit.slope, fit.points);
    Ok(())
}
