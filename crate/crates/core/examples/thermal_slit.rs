//! How delocalized is a macroscopic slit at room temperature?
use kicklab::states::thermal_position_spread;

fn main() -> kicklab::Result<()> {
    for (mass, temperature) in [(1e-3, 300.0), (1e-3, 4.0), (1e-15, 300.0), (1e-25, 1e-3)] {
        let s = thermal_position_spread(mass, temperature)?;
        println!(
            "M = {mass:.0e} kg, T = {temperature:>5} K: dx = {:.3e} m, dv = {:.3e} m/s",
            s.position_m, s.velocity_m_per_s
        );
    }
    Ok(())
}
