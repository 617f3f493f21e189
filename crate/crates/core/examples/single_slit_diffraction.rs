//! Plane wave through a sharply localized slit: the far field is sinc².
use std::f64::consts::PI;

use kicklab::dist::prob_dist;
use kicklab::fourier::dft_forward;
use kicklab::single_slit::{far_field_pattern, localized_transmit, sinc2_on_grid};
use kicklab::states::{gaussian_packet, plane_wave_segment, SlitSpec};
use kicklab::Grid1D;

fn main() -> kicklab::Result<()> {
    let dx = 0.95 / 310.5;
    let particle = Grid1D::centered(65536, dx)?;
    let slit_grid = Grid1D::centered(128, dx)?;
    let slit = SlitSpec::new(1.0, 0.05, 0.02, 0.0)?;
    slit.check_margin(0.01)?;

    let psi = plane_wave_segment(50.0, &particle)?;
    let phi = gaussian_packet(0.01, 0.0, 0.0, &slit_grid)?;
    let state = localized_transmit(&psi, &phi, &slit)?;
    let sel = state.selection().expect("selection is recorded");
    println!("kept fraction {:.6} (estimate d'/L = {:.6})", sel.kept_fraction(), slit.d_prime() / 50.0);

    let pattern = far_field_pattern(&state)?;
    let sinc2 = sinc2_on_grid(&particle, slit.d_prime())?;
    println!("L2 distance to sinc²: {:.3e}", pattern.l2_distance(&sinc2)?);
    for n in 0..4 {
        let k = n as f64 * PI / slit.d_prime();
        let j = particle.nearest_k_index(k).expect("on grid");
        println!("k = {k:>7.4}: simulated {:.3e}, analytic {:.3e}", pattern.values()[j], sinc2.values()[j]);
    }

    let before = prob_dist(&dft_forward(&phi)?)?;
    let after = state.device_momentum_marginal()?;
    println!("slit momentum marginal change: {:.2e}", before.sup_distance(&after)?);
    Ok(())
}
