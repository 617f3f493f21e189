//! Widening the pointer until it no longer fits between the packets.
use kicklab::states::{double_slit_state, top_hat, PacketShape};
use kicklab::which_way::{cross_term_convolution, gap_condition_check};
use kicklab::Grid1D;

fn main() -> kicklab::Result<()> {
    let grid = Grid1D::centered(1024, 0.078125)?;
    let ds = double_slit_state(PacketShape::TopHat { half_width: 1.5 }, 5.0, -5.0, &grid)?;
    println!("pointer   v       w       holds  cross term   witness");
    for half_width in [0.5, 1.0, 2.0, 3.0, 3.5, 4.0, 5.0] {
        let phi = top_hat(half_width, 0.0, &grid)?.normalized()?;
        let gap = gap_condition_check(&ds, &phi)?;
        let cross = cross_term_convolution(&ds, &phi)?;
        println!(
            "{half_width:>6.2}  {:>6.3}  {:>6.3}  {:>5}  {:>10.3e}  {:>10.3e}",
            gap.v, gap.w, gap.holds, cross.momentum_sup, cross.position_witness
        );
    }
    Ok(())
}
