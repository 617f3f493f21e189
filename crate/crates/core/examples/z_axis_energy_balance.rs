//! The longitudinal kick pays exactly for the transverse kinetic energy.
use kicklab::z_axis::{energy_balance, post_diffraction_phase, z_momentum_after, LongitudinalParams};

fn main() -> kicklab::Result<()> {
    let params = LongitudinalParams::new(100.0, 1.0, 1e3, 2.0, -1.5, 1.0)?;
    println!("k_si = {}", params.k_si());
    let z = z_momentum_after(&params)?;
    println!("P' = {:.12}, particle kick {:.3e}, slit kick {:.3e}", z.p_after, z.particle_kick, z.slit_kick);

    let e = energy_balance(&params)?;
    println!(
        "terms: longitudinal {:.6e}, particle {:.6e}, slit {:.6e}",
        e.longitudinal, e.particle_transverse, e.slit_transverse
    );
    println!("residual {:.2e} (relative {:.2e}), cancels: {}", e.residual, e.relative, e.cancels);

    for z_p in [0.0, 1.0, 2.0] {
        println!("phase at z_p = {z_p}, z_s = 0: {:.9}", post_diffraction_phase(&params, z_p, 0.0)?);
    }
    let heavy_particle = LongitudinalParams::new(10.0, 1.0, 2.0, 5.0, 0.0, 0.0)?;
    println!("outside the regime: {:?}", heavy_particle.regime_warnings());
    Ok(())
}
