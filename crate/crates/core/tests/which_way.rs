mod common;

use std::f64::consts::SQRT_2;

use common::{direct_total_momentum, normalize, sup};
use kicklab::dist::{convolve, modular_momentum_dist, prob_dist, visibility};
use kicklab::fourier::dft_forward;
use kicklab::states::*;
use kicklab::which_way::*;
use kicklab::{Complex64, Grid1D, WaveFn1D};
use ndarray::Zip;
use proptest::prelude::*;

const DX: f64 = 0.078125;

fn grid(n: usize) -> Grid1D {
    Grid1D::centered(n, DX).unwrap()
}

struct Run {
    ds: DoubleSlitState,
    phi: WaveFn1D,
    before: WhichWayState,
    after: WhichWayState,
}

fn run(n: usize, pointer: f64, profile: EdgeProfile) -> Run {
    let g = grid(n);
    let ds = double_slit_state(PacketShape::Gaussian { width: 0.5 }, 10.0, -10.0, &g).unwrap();
    let phi = gaussian_packet(pointer, 0.0, 0.0, &g).unwrap();
    let spec = DetectorSpec::new(0.25, profile).unwrap();
    let before = WhichWayState::from_double_slit(&ds, &phi).unwrap();
    let after = apply_which_way(&before, &spec);
    Run { ds, phi, before, after }
}

#[test]
fn branches_carry_the_unchanged_packets() {
    let r = run(1024, 0.25, EdgeProfile::HalfCosine);
    let a = WhichWayState::initial(&r.ds.psi_a, &r.phi).unwrap();
    let cell = DX * DX;
    let ov: Complex64 = Zip::from(r.after.branch1())
        .and(a.branch0())
        .fold(Complex64::new(0.0, 0.0), |acc, x, y| acc + y.conj() * x)
        * cell
        * SQRT_2;
    assert!((ov - 1.0).norm() < 1e-12);
    let b = WhichWayState::initial(&r.ds.psi_b, &r.phi).unwrap();
    let ov: Complex64 = Zip::from(r.after.branch0())
        .and(b.branch0())
        .fold(Complex64::new(0.0, 0.0), |acc, x, y| acc + y.conj() * x)
        * cell
        * SQRT_2;
    assert!((ov - 1.0).norm() < 1e-12);
}

#[test]
fn overlapping_packet_excites_both_branches_in_the_ramp() {
    let g = grid(1024);
    let psi = gaussian_packet(0.5, 0.0, 0.0, &g).unwrap();
    let phi = gaussian_packet(0.25, 0.0, 0.0, &g).unwrap();
    let spec = DetectorSpec::new(0.25, EdgeProfile::HalfCosine).unwrap();
    let before = WhichWayState::initial(&psi, &phi).unwrap();
    let after = apply_which_way(&before, &spec);
    assert!(after.is_imperfect());
    let (i, j) = (g.mid(), g.mid());
    assert!(after.branch0()[[i, j]].norm() > 1e-3 && after.branch1()[[i, j]].norm() > 1e-3);
    assert!((after.norm_sqr() - before.norm_sqr()).abs() < 1e-12);
}

#[test]
fn fringes_disappear_and_the_mixture_remains() {
    let r = run(2048, 0.25, EdgeProfile::HalfCosine);
    let pi = particle_momentum_dist(&r.before).unwrap();
    let pf = particle_momentum_dist(&r.after).unwrap();
    assert!(pi.sup_distance(&analytic_fringed(&r.ds).unwrap()).unwrap() < 1e-10);
    assert!(pf.sup_distance(&analytic_mixture(&r.ds).unwrap()).unwrap() < 1e-10);
    assert!(fringe_contrast(&pi, &r.ds).unwrap() > 0.9);
    assert!(fringe_contrast(&pf, &r.ds).unwrap() < 1e-6);
}

#[test]
fn single_packet_has_nothing_to_lose() {
    let g = grid(1024);
    let psi = gaussian_packet(0.5, 10.0, 0.0, &g).unwrap();
    let phi = gaussian_packet(0.25, 0.0, 0.0, &g).unwrap();
    let spec = DetectorSpec::new(0.25, EdgeProfile::HalfCosine).unwrap();
    let before = WhichWayState::initial(&psi, &phi).unwrap();
    let after = apply_which_way(&before, &spec);
    let pi = particle_momentum_dist(&before).unwrap();
    let pf = particle_momentum_dist(&after).unwrap();
    assert!(pi.sup_distance(&pf).unwrap() < 1e-12);
}

#[test]
fn detector_momentum_is_untouched() {
    let r = run(2048, 0.3, EdgeProfile::HalfCosine);
    let di = detector_momentum_dist(&r.before).unwrap();
    let df = detector_momentum_dist(&r.after).unwrap();
    assert!(di.sup_distance(&df).unwrap() < 1e-12);
    let direct = prob_dist(&dft_forward(&r.phi).unwrap()).unwrap();
    assert!(df.sup_distance(&direct).unwrap() < 1e-12);
    assert!((df.rms_spread() - 1.0 / 0.6).abs() < 1e-8);
}

#[test]
fn wide_pointer_changes_the_detector_momentum() {
    let r = run(2048, 4.0, EdgeProfile::HalfCosine);
    let di = detector_momentum_dist(&r.before).unwrap();
    let df = detector_momentum_dist(&r.after).unwrap();
    assert!(di.sup_distance(&df).unwrap() > 1e-4);
}

#[test]
fn total_momentum_is_conserved() {
    let r = run(2048, 0.25, EdgeProfile::HalfCosine);
    let ti = total_momentum_dist(&r.before).unwrap();
    let tf = total_momentum_dist(&r.after).unwrap();
    assert!(ti.dist.sup_distance(&tf.dist).unwrap() < 1e-10);

    let conv = convolve(
        &particle_momentum_dist(&r.before).unwrap(),
        &detector_momentum_dist(&r.before).unwrap(),
    )
    .unwrap();
    assert!(ti.dist.sup_distance(&conv.dist).unwrap() < 1e-10);

    let mut direct = direct_total_momentum(&r.after.momentum_density(), r.after.grid_particle());
    normalize(&mut direct, r.after.grid_particle().dk());
    assert!(sup(tf.dist.values(), &direct) < 1e-10);
}

#[test]
fn total_momentum_of_two_gaussians() {
    let g = grid(512);
    let psi = gaussian_packet(0.8, 0.0, 0.0, &g).unwrap();
    let phi = gaussian_packet(0.5, 0.0, 0.0, &g).unwrap();
    let st = WhichWayState::initial(&psi, &phi).unwrap();
    let t = total_momentum_dist(&st).unwrap().dist;
    let want = (1.0_f64 / (4.0 * 0.64) + 1.0 / (4.0 * 0.25)).sqrt();
    assert!((t.rms_spread() - want).abs() < 1e-9);
}

#[test]
fn total_momentum_needs_matching_grids() {
    let psi = gaussian_packet(0.8, 0.0, 0.0, &grid(512)).unwrap();
    let phi = gaussian_packet(0.5, 0.0, 0.0, &grid(256)).unwrap();
    let st = WhichWayState::initial(&psi, &phi).unwrap();
    assert!(total_momentum_dist(&st).is_err());
}

fn hard_pair(pointer_half_width: f64) -> (DoubleSlitState, WaveFn1D) {
    let g = grid(1024);
    let ds = double_slit_state(PacketShape::TopHat { half_width: 1.5 }, 5.0, -5.0, &g).unwrap();
    let phi = top_hat(pointer_half_width, 0.0, &g).unwrap().normalized().unwrap();
    (ds, phi)
}

#[test]
fn gap_condition_both_ways() {
    let (ds, phi) = hard_pair(1.0);
    let gap = gap_condition_check(&ds, &phi).unwrap();
    assert!(gap.holds && (gap.v - 3.5).abs() < DX && (gap.w - 1.0).abs() < DX, "{gap:?}");
    let cross = cross_term_convolution(&ds, &phi).unwrap();
    assert!(cross.momentum_sup < 1e-12 && cross.position_witness < 1e-12, "{cross:?}");

    let (ds, phi) = hard_pair(4.0);
    assert!(!gap_condition_check(&ds, &phi).unwrap().holds);
    let cross = cross_term_convolution(&ds, &phi).unwrap();
    assert!(cross.momentum_sup > 1e-4 && cross.position_witness > 1e-4, "{cross:?}");
}

#[test]
fn gaussian_pointer_width_is_its_cutoff_radius() {
    let r = run(1024, 0.25, EdgeProfile::HalfCosine);
    let gap = gap_condition_check(&r.ds, &r.phi).unwrap();
    assert!((gap.w - gaussian_support_radius(0.25)).abs() < DX);
}

#[test]
fn no_cross_term_without_a_second_packet() {
    let (mut ds, phi) = hard_pair(4.0);
    ds.psi_b = WaveFn1D::zeros(*ds.grid(), kicklab::Representation::Position);
    let cross = cross_term_convolution(&ds, &phi).unwrap();
    assert_eq!(cross.momentum_sup, 0.0);
    assert_eq!(cross.position_witness, 0.0);
}

#[test]
fn all_moments_agree() {
    let r = run(2048, 0.25, EdgeProfile::HalfCosine);
    let pi = particle_momentum_dist(&r.before).unwrap();
    let pf = particle_momentum_dist(&r.after).unwrap();
    let rows = moment_equality_check(&pi, &pf, 8).unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows[0].abs_diff < 1e-14);
    assert!(rows.iter().all(|m| m.rel_diff < 1e-6), "{rows:?}");

    let kappa = fringe_spacing(&r.ds);
    let mi = modular_momentum_dist(&pi, kappa).unwrap();
    let mf = modular_momentum_dist(&pf, kappa).unwrap();
    assert!(visibility(mi.values()) > 10.0 * visibility(mf.values()));
}

#[test]
fn results_do_not_depend_on_the_edge_profile() {
    let a = run(1024, 0.25, EdgeProfile::HalfCosine);
    let b = run(1024, 0.25, EdgeProfile::Linear);
    let pa = particle_momentum_dist(&a.after).unwrap();
    let pb = particle_momentum_dist(&b.after).unwrap();
    assert!(pa.sup_distance(&pb).unwrap() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn conservation_whenever_the_pointer_fits(
        width in 0.3f64..0.7,
        pointer in 0.25f64..0.45,
        extra in 0.5f64..10.0,
    ) {
        let g = grid(1024);
        let center = gaussian_support_radius(width) + gaussian_support_radius(pointer) + extra;
        prop_assume!(center + gaussian_support_radius(width) < 38.0);
        let ds = double_slit_state(PacketShape::Gaussian { width }, center, -center, &g).unwrap();
        let phi = gaussian_packet(pointer, 0.0, 0.0, &g).unwrap();
        prop_assert!(gap_condition_check(&ds, &phi).unwrap().holds);
        let spec = DetectorSpec::new(0.25, EdgeProfile::HalfCosine).unwrap();
        let before = WhichWayState::from_double_slit(&ds, &phi).unwrap();
        let after = apply_which_way(&before, &spec);
        let ti = total_momentum_dist(&before).unwrap();
        let tf = total_momentum_dist(&after).unwrap();
        prop_assert!(ti.dist.sup_distance(&tf.dist).unwrap() < 1e-10);
        prop_assert!((after.norm_sqr() - before.norm_sqr()).abs() < 1e-12);
    }
}
