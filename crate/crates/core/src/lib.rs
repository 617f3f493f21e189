//! Momentum transfer in quantum position measurements, on a grid.
//!
//! `kicklab` simulates two measurement setups on discretized joint
//! wavefunctions with ħ = 1:
//!
//! * a single slit that localizes a broad incident particle, with the slit
//!   itself treated quantum mechanically (either sharply localized or
//!   delocalized over strips), and
//! * a which-way detector behind one arm of a double slit, whose internal
//!   two-level state is flipped by the particle without any transverse force.
//!
//! Every analytic momentum claim about these setups is checked numerically:
//! sinc² far field, slit recoil factorization, detector momentum invariance,
//! total-momentum conservation through the convolution identity, equality of
//! all integer moments, and the longitudinal energy balance.
//!
//! The crate is organized bottom-up:
//!
//! | module | contents |
//! |---|---|
//! | [`grid`], [`wavefn`], [`fourier`], [`dist`], [`csv`] | numerical substrate |
//! | [`states`] | wavefunction constructors and slit/detector parameters |
//! | [`joint`], [`single_slit`] | two-body states, post-selection, recoil |
//! | [`which_way`] | detector unitary, fringe loss, conservation checks |
//! | [`z_axis`] | closed-form longitudinal bookkeeping |
//! | [`scenario`] | config files, run reports, the verification suite |
//!
//! Runnable walkthroughs for each capability live in `examples/`.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod dist;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod joint;
pub mod parallel;
pub mod scenario;
pub mod single_slit;
pub mod states;
pub mod wavefn;
pub mod which_way;
pub mod z_axis;

pub use dist::{ConvolutionOutcome, ProbDist};
pub use error::{KickError, Representation, Result};
pub use grid::Grid1D;
pub use joint::JointState;
pub use num_complex::Complex64;
pub use wavefn::WaveFn1D;

/// Amplitudes with modulus below this value count as zero when scanning
/// numerical supports.
pub const SUPPORT_THRESHOLD: f64 = 1e-14;

/// Tolerance for "normalized" wavefunctions.
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance for distribution normalization.
pub const DIST_TOL: f64 = 1e-10;
