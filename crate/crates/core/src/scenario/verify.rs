//! One-shot verification of every invariant, with seeded random parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{convolve, prob_dist, ProbDist};
use crate::error::{Representation, Result};
use crate::fourier::{dft_forward, dft_inverse};
use crate::grid::Grid1D;
use crate::single_slit::{decompose_regions, delocalized_transmit, recoil_factorization_residual};
use crate::states::{
    double_slit_state, gaussian_packet, gaussian_support_radius, plane_wave_segment, top_hat,
    thermal_position_spread, DetectorSpec, EdgeProfile, PacketShape, SlitSpec, HBAR_SI,
};
use crate::wavefn::WaveFn1D;
use crate::which_way::{
    anti_diagonal_sum, apply_which_way, cross_term_convolution, detector_momentum_dist,
    total_momentum_dist, WhichWayState,
};

use super::config::{Experiment, ScenarioConfig};
use super::experiments::{run_scenario_with_fault, Fault};
use super::report::{Check, RunReport};

const DRAWS: usize = 3;

/// Runs every suite and every default scenario.
///
/// The report depends only on `seed` and `fault`.
pub fn verify_all(seed: u64, fault: Option<Fault>) -> Result<RunReport> {
    let mut config = BTreeMap::new();
    config.insert("seed".to_string(), seed.to_string());
    if let Some(f) = fault {
        config.insert("fault".to_string(), format!("{f:?}"));
    }
    let mut report = RunReport::new("verify", config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    report.absorb("numerics", numerics(&mut rng)?);
    report.absorb("states", states()?);
    for e in Experiment::ALL {
        let mut cfg = ScenarioConfig::defaults(e);
        cfg.seed = seed;
        let out = run_scenario_with_fault(&cfg, fault)?;
        report.absorb(e.name(), out.report);
    }
    report.absorb("which-way properties", which_way_properties(&mut rng)?);
    report.absorb("recoil properties", recoil_properties(&mut rng)?);
    Ok(report)
}

fn random_wavefn(rng: &mut ChaCha8Rng, grid: Grid1D, repr: Representation) -> Result<WaveFn1D> {
    let amp = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    WaveFn1D::new(grid, amp, repr)?.normalized()
}

fn direct_dft(psi: &WaveFn1D) -> Vec<Complex64> {
    let g = psi.grid();
    let scale = g.dx() / (2.0 * PI).sqrt();
    (0..g.len())
        .map(|m| {
            psi.amp()
                .iter()
                .enumerate()
                .map(|(j, a)| a * Complex64::from_polar(1.0, -g.k(m) * g.x(j)))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

fn sup(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_dist(rng: &mut ChaCha8Rng, grid: &Grid1D, support: usize) -> Result<ProbDist> {
    let n = grid.len();
    let values = (0..n)
        .map(|j| {
            if j.abs_diff(n / 2) < support {
                rng.random_range(0.0..1.0)
            } else {
                0.0
            }
        })
        .collect();
    ProbDist::new(values, grid.k(0), grid.dk(), Representation::Momentum)?.normalized()
}

fn numerics(rng: &mut ChaCha8Rng) -> Result<RunReport> {
    let mut r = RunReport::new("numerics", BTreeMap::new());
    let dx = rng.random_range(0.05..0.3);
    let offset = rng.random_range(-20i32..=20) as f64 * dx;
    let g = Grid1D::new(256, dx, offset)?;
    let psi = random_wavefn(rng, g, Representation::Position)?;
    let fast = dft_forward(&psi)?;
    r.check(Check::below("fast transform vs direct sum", sup(fast.amp(), &direct_dft(&psi)), 1e-10));
    r.check(Check::below(
        "round trip",
        sup(dft_inverse(&fast)?.amp(), psi.amp()),
        1e-12,
    ));
    r.check(Check::below("unitarity", (fast.norm_sqr() - psi.norm_sqr()).abs(), 1e-12));
    let steps = rng.random_range(-50i64..=50);
    let shifted = dft_forward(&psi.rolled(steps))?;
    let phased: Vec<Complex64> = fast
        .amp()
        .iter()
        .enumerate()
        .map(|(m, a)| a * Complex64::from_polar(1.0, -g.k(m) * steps as f64 * dx))
        .collect();
    r.check(Check::below("shift theorem", sup(shifted.amp(), &phased), 1e-10));

    let gk = Grid1D::centered(512, rng.random_range(0.05..0.3))?;
    let p = random_dist(rng, &gk, 100)?;
    let q = random_dist(rng, &gk, 60)?;
    let fast = convolve(&p, &q)?;
    let n = gk.len();
    let mut direct = vec![0.0; n];
    for (i, out) in direct.iter_mut().enumerate() {
        for j in 0..n {
            let t = i as i64 + n as i64 / 2 - j as i64;
            if (0..n as i64).contains(&t) {
                *out += p.values()[j] * q.values()[t as usize] * gk.dk();
            }
        }
    }
    let direct = ProbDist::new(direct, gk.k(0), gk.dk(), Representation::Momentum)?.normalized()?;
    r.check(Check::below("convolution vs direct sum", fast.dist.sup_distance(&direct)?, 1e-10));
    r.check(Check::below(
        "convolution adds means",
        (fast.dist.mean() - p.mean() - q.mean()).abs(),
        1e-9,
    ));
    let density = Array2::from_shape_fn((n, n), |(i, j)| p.values()[i] * q.values()[j]);
    let diag = anti_diagonal_sum(&density, &gk)?;
    r.check(Check::below("anti-diagonal sum vs convolution", diag.dist.sup_distance(&fast.dist)?, 1e-10));
    r.check(Check::below("zeroth moment", (p.moment(0) - 1.0).abs(), 1e-12));
    Ok(r)
}

fn states() -> Result<RunReport> {
    let mut r = RunReport::new("states", BTreeMap::new());
    let t = thermal_position_spread(1e-3, 300.0)?;
    r.observe("thermal", t);
    r.check(Check::below("thermal position spread within 3x of 1e-23 m", (t.position_m / 1e-23).ln().abs(), 3f64.ln()));
    r.check(Check::below("thermal velocity spread within 3x of 1e-9 m/s", (t.velocity_m_per_s / 1e-9).ln().abs(), 3f64.ln()));
    r.check(Check::below(
        "thermal minimum uncertainty",
        (t.position_m * 1e-3 * t.velocity_m_per_s / (HBAR_SI / 2.0) - 1.0).abs(),
        1e-12,
    ));
    let g = Grid1D::centered(1024, 0.05)?;
    let x = prob_dist(&gaussian_packet(1.0, 0.0, 0.0, &g)?)?;
    r.check(Check::below("gaussian variance", (x.variance() - 1.0).abs(), 1e-8));
    let k = prob_dist(&dft_forward(&gaussian_packet(0.5, 0.0, 0.0, &g)?)?)?;
    r.check(Check::below("gaussian uncertainty product", (k.rms_spread() - 1.0).abs(), 1e-8));
    let carrier = prob_dist(&dft_forward(&gaussian_packet(1.0, 0.0, 2.0, &g)?)?)?;
    r.check(Check::below("carrier momentum", (carrier.mean() - 2.0).abs(), 1e-8));
    let psi = plane_wave_segment(6.4, &g)?;
    r.check(Check::below("plane wave normalization", (psi.norm_sqr() - 1.0).abs(), 1e-12));
    let ds = double_slit_state(PacketShape::Gaussian { width: 0.8 }, 12.0, -12.0, &g)?;
    r.check(Check::below("packet orthogonality", ds.psi_a.inner(&ds.psi_b)?.norm(), 1e-14));
    r.check(Check::below("combined state normalized", (ds.combined().norm_sqr() - 1.0).abs(), 1e-12));
    Ok(r)
}

fn which_way_properties(rng: &mut ChaCha8Rng) -> Result<RunReport> {
    let mut r = RunReport::new("which-way properties", BTreeMap::new());
    let g = Grid1D::centered(1024, 0.078125)?;
    let profiles = [EdgeProfile::HalfCosine, EdgeProfile::Linear];
    for draw in 0..DRAWS {
        let width = rng.random_range(0.3..0.8);
        let pointer = rng.random_range(0.25..0.5);
        let lo = gaussian_support_radius(width) + gaussian_support_radius(pointer) + 0.5;
        let center = rng.random_range(lo..30.0);
        let ds = double_slit_state(PacketShape::Gaussian { width }, center, -center, &g)?;
        let phi = gaussian_packet(pointer, 0.0, 0.0, &g)?;
        let spec = DetectorSpec::new(0.25, profiles[draw % 2])?;
        let before = WhichWayState::from_double_slit(&ds, &phi)?;
        let after = apply_which_way(&before, &spec);
        let tag = format!("draw {draw}");
        let ti = total_momentum_dist(&before)?;
        let tf = total_momentum_dist(&after)?;
        r.check(Check::below(format!("{tag}: total momentum conserved"), ti.dist.sup_distance(&tf.dist)?, 1e-10));
        r.check(Check::below(
            format!("{tag}: detector momentum unchanged"),
            detector_momentum_dist(&before)?.sup_distance(&detector_momentum_dist(&after)?)?,
            1e-12,
        ));
        let cross = cross_term_convolution(&ds, &phi)?;
        r.check(Check::below(format!("{tag}: cross term"), cross.momentum_sup, 1e-12));
        r.check(Check::below(format!("{tag}: norm"), (after.norm_sqr() - 1.0).abs(), 1e-12));
    }
    Ok(r)
}

fn recoil_properties(rng: &mut ChaCha8Rng) -> Result<RunReport> {
    let mut r = RunReport::new("recoil properties", BTreeMap::new());
    let dx = 0.95 / 30.5;
    let gp = Grid1D::centered(1024, dx)?;
    let gd = Grid1D::centered(512, dx)?;
    let slit = SlitSpec::new(1.0, 0.05, 0.02, 0.0)?;
    let psi = plane_wave_segment(7.5, &gp)?;
    let psi_i = decompose_regions(&psi, &slit)?.psi_i;
    let mut patterns: Vec<ProbDist> = Vec::new();
    for draw in 0..DRAWS {
        let phi = if draw % 2 == 0 {
            gaussian_packet(rng.random_range(0.3..0.65), 0.0, 0.0, &gd)?
        } else {
            top_hat(rng.random_range(0.5..2.0), 0.0, &gd)?.normalized()?
        };
        let state = delocalized_transmit(&psi, &phi, &slit, 0.5 * dx)?;
        let res = recoil_factorization_residual(&state, &psi_i, &phi)?;
        let tag = format!("draw {draw}");
        r.check(Check::below(format!("{tag}: factorization residual"), res.momentum.max(res.mixed), 1e-6));
        let pattern = state.particle_momentum_marginal()?;
        if let Some(first) = patterns.first() {
            r.check(Check::below(format!("{tag}: pattern universality"), pattern.sup_distance(first)?, 1e-8));
        }
        patterns.push(pattern);
    }
    Ok(r)
}
