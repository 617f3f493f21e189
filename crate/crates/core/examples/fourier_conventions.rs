//! The symmetric unitary transform on a centered grid: widths, round trips, shifts.
use kicklab::dist::prob_dist;
use kicklab::fourier::{dft_forward, dft_inverse};
use kicklab::states::gaussian_packet;
use kicklab::Grid1D;

fn main() -> kicklab::Result<()> {
    let grid = Grid1D::centered(1024, 0.05)?;
    println!("n = {}, dx = {}, dk = {:.6}, k_max = {:.3}", grid.len(), grid.dx(), grid.dk(), grid.k_max());

    for width in [0.5, 1.0, 2.0] {
        let psi = gaussian_packet(width, 0.0, 0.0, &grid)?;
        let k = prob_dist(&dft_forward(&psi)?)?;
        println!("position width {width:>4}: momentum width {:.6} (1/2w = {:.6})", k.rms_spread(), 0.5 / width);
    }

    let psi = gaussian_packet(1.0, 3.0, 2.0, &grid)?;
    let back = dft_inverse(&dft_forward(&psi)?)?;
    println!("round-trip error: {:.2e}", back.sup_distance(&psi)?);
    let k = prob_dist(&dft_forward(&psi)?)?;
    println!("packet with k0 = 2 has momentum mean {:.6}", k.mean());

    // a position shift leaves |ψ̃|² untouched
    let shifted = prob_dist(&dft_forward(&psi.rolled(40))?)?;
    println!("shift by 40 steps changes |ψ̃|² by {:.2e}", k.sup_distance(&shifted)?);
    Ok(())
}
