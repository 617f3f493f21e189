//! A two-level detector marks which packet the particle is in; fringes vanish.
use kicklab::states::{double_slit_state, gaussian_packet, DetectorSpec, EdgeProfile, PacketShape};
use kicklab::which_way::{
    apply_which_way, detector_momentum_dist, fringe_contrast, moment_equality_check, particle_momentum_dist,
    total_momentum_dist, WhichWayState,
};
use kicklab::Grid1D;

fn main() -> kicklab::Result<()> {
    let grid = Grid1D::centered(2048, 0.078125)?;
    let ds = double_slit_state(PacketShape::Gaussian { width: 0.5 }, 10.0, -10.0, &grid)?;
    let phi = gaussian_packet(0.25, 0.0, 0.0, &grid)?;
    let detector = DetectorSpec::new(0.25, EdgeProfile::HalfCosine)?;

    let before = WhichWayState::from_double_slit(&ds, &phi)?;
    let after = apply_which_way(&before, &detector);
    println!("imperfect detection: {}", after.is_imperfect());

    let (pi, pf) = (particle_momentum_dist(&before)?, particle_momentum_dist(&after)?);
    println!("visibility before {:.4}, after {:.2e}", fringe_contrast(&pi, &ds)?, fringe_contrast(&pf, &ds)?);

    let (di, df) = (detector_momentum_dist(&before)?, detector_momentum_dist(&after)?);
    println!("detector momentum change: {:.2e}", di.sup_distance(&df)?);

    let (ti, tf) = (total_momentum_dist(&before)?, total_momentum_dist(&after)?);
    println!("total momentum change: {:.2e}", ti.dist.sup_distance(&tf.dist)?);

    println!("order  before        after         rel");
    for row in moment_equality_check(&pi, &pf, 6)? {
        println!("{:>5}  {:>12.6e}  {:>12.6e}  {:.1e}", row.order, row.initial, row.final_, row.rel_diff);
    }
    Ok(())
}
