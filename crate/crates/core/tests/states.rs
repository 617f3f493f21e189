use kicklab::dist::prob_dist;
use kicklab::fourier::dft_forward;
use kicklab::states::*;
use kicklab::{Grid1D, KickError};

fn grid() -> Grid1D {
    Grid1D::centered(2048, 0.025).unwrap()
}

#[test]
fn gaussian_parameters() {
    let g = grid();
    let x = prob_dist(&gaussian_packet(1.0, 0.0, 0.0, &g).unwrap()).unwrap();
    assert!(x.mean().abs() < 1e-12);
    assert!((x.variance() - 1.0).abs() < 1e-8);
    let k = prob_dist(&dft_forward(&gaussian_packet(1.0, 0.0, 2.0, &g).unwrap()).unwrap()).unwrap();
    assert!((k.mean() - 2.0).abs() < 1e-8);
    let k = prob_dist(&dft_forward(&gaussian_packet(0.5, 0.0, 0.0, &g).unwrap()).unwrap()).unwrap();
    assert!((k.rms_spread() - 1.0).abs() < 1e-8);
}

#[test]
fn gaussian_resolution_and_fit() {
    let g = grid();
    assert!(matches!(gaussian_packet(0.05, 0.0, 0.0, &g), Err(KickError::UnderResolved { .. })));
    assert!(matches!(gaussian_packet(1.0, 20.0, 0.0, &g), Err(KickError::DoesNotFit(_))));
}

#[test]
fn plane_wave_segment_normalization() {
    let g = grid();
    let l = g.domain_length() / 4.0;
    let psi = plane_wave_segment(l, &g).unwrap();
    assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    assert!(plane_wave_segment(0.3 * g.domain_length(), &g).is_err());
}

#[test]
fn top_hat_windows() {
    let g = grid();
    let w = top_hat(2.0, 0.0, &g).unwrap();
    let shifted = top_hat(2.0, 7.0 * g.dx(), &g).unwrap();
    assert!(shifted.sup_distance(&w.rolled(7)).unwrap() < 1e-15);
    let narrow = gaussian_packet(0.3, 0.0, 0.0, &g).unwrap();
    let wide = top_hat(5.0, 0.0, &g).unwrap();
    assert!(narrow.mul(&wide).unwrap().sup_distance(&narrow).unwrap() < 1e-14);
    assert!(top_hat(0.05, 0.0, &g).is_err());
}

#[test]
fn thermal_estimate() {
    let t = thermal_position_spread(1e-3, 300.0).unwrap();
    assert!(t.position_m > 1e-23 / 3.0 && t.position_m < 3e-23);
    assert!(t.velocity_m_per_s > 1e-9 / 3.0 && t.velocity_m_per_s < 3e-9);
    let heavier = thermal_position_spread(4e-3, 300.0).unwrap();
    assert!((heavier.position_m / t.position_m - 0.5).abs() < 1e-12);
    let product = t.position_m * 1e-3 * t.velocity_m_per_s;
    assert!((product / (HBAR_SI / 2.0) - 1.0).abs() < 1e-12);
    assert!(thermal_position_spread(0.0, 300.0).is_err());
}

#[test]
fn double_slit_geometry() {
    let g = Grid1D::centered(2048, 0.078125).unwrap();
    let ds = double_slit_state(PacketShape::Gaussian { width: 0.5 }, -10.0, 10.0, &g).unwrap();
    assert!(ds.center_a > 0.0);
    let r = gaussian_support_radius(0.5);
    assert!((ds.gap_half_width - (10.0 - r)).abs() < g.dx());
    assert!(ds.psi_a.inner(&ds.psi_b).unwrap().norm() < 1e-14);
    assert!((ds.combined().norm_sqr() - 1.0).abs() < 1e-12);

    // mirror symmetry gives a symmetric momentum density
    let k = prob_dist(&dft_forward(&ds.combined()).unwrap()).unwrap();
    let v = k.values();
    for m in 1..g.len() / 2 {
        assert!((v[g.mid() + m] - v[g.mid() - m]).abs() < 1e-12);
    }

    // fringe spacing 2π/separation: maxima of the density near k = 0
    let kappa = 2.0 * std::f64::consts::PI / 20.0;
    let steps = (kappa / g.dk()).round() as usize;
    assert!((steps as f64 * g.dk() - kappa).abs() < 1e-12);
    assert!(v[g.mid()] > v[g.mid() + steps / 2] && v[g.mid() + steps] > v[g.mid() + steps / 2]);

    let overlap = double_slit_state(PacketShape::Gaussian { width: 0.5 }, 1.0, -1.0, &g);
    assert!(matches!(overlap, Err(KickError::OverlappingPackets)));
}

#[test]
fn narrow_gaussian_pair_reports_a_positive_gap() {
    let g = Grid1D::centered(1024, 0.05).unwrap();
    let ds = double_slit_state(PacketShape::Gaussian { width: 0.4 }, 5.0, -5.0, &g).unwrap();
    assert!(ds.gap_half_width > 0.0);
    assert!((ds.gap_half_width - (5.0 - gaussian_support_radius(0.4))).abs() < g.dx());
}

#[test]
fn top_hat_packets() {
    let g = Grid1D::centered(1024, 0.05).unwrap();
    let ds = double_slit_state(PacketShape::TopHat { half_width: 1.0 }, 4.0, -4.0, &g).unwrap();
    assert!((ds.gap_half_width - 3.0).abs() < 1e-9);
    assert!((ds.psi_a.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn edge_ramps() {
    for p in [EdgeProfile::Linear, EdgeProfile::HalfCosine] {
        assert_eq!(p.ramp(-1.0, 0.5), 0.0);
        assert_eq!(p.ramp(1.0, 0.5), 1.0);
        assert!((p.ramp(0.0, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(p.to_string().parse::<EdgeProfile>().unwrap(), p);
    }
    let spec = DetectorSpec::new(0.2, EdgeProfile::HalfCosine).unwrap();
    assert!((spec.rotation_angle(0.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert_eq!(spec.potential(0.5), spec.v1);
}
