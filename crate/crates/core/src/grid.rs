//! Uniform position grids and their reciprocal momentum grids.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{KickError, Result};

/// A uniform grid of `n` points, `x_j = x_center + (j - n/2)·dx`.
///
/// The induced momentum grid is `k_j = (j - n/2)·dk` with `dk = 2π/(n·dx)`,
/// so `k = 0` always sits at index `n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_points: usize,
    dx: f64,
    x_center: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, dx: f64, x_center: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_multiple_of(2) {
            return Err(KickError::InvalidParameter(format!(
                "grid size must be even and at least 2, got {n_points}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(KickError::InvalidParameter(format!(
                "grid spacing must be positive, got {dx}"
            )));
        }
        if !x_center.is_finite() {
            return Err(KickError::InvalidParameter("grid center must be finite".into()));
        }
        Ok(Self {
            n_points,
            dx,
            x_center,
        })
    }

    /// Grid centered on the origin.
    pub fn centered(n_points: usize, dx: f64) -> Result<Self> {
        Self::new(n_points, dx, 0.0)
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n_points as f64 * self.dx)
    }

    pub fn x_center(&self) -> f64 {
        self.x_center
    }

    /// Index of the grid center (`x = x_center`, `k = 0`).
    pub fn mid(&self) -> usize {
        self.n_points / 2
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_center + (j as f64 - self.mid() as f64) * self.dx
    }

    pub fn k(&self, j: usize) -> f64 {
        (j as f64 - self.mid() as f64) * self.dk()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    pub fn ks(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.k(j)).collect()
    }

    /// Full periodic extent `n·dx`.
    pub fn domain_length(&self) -> f64 {
        self.n_points as f64 * self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n_points - 1)
    }

    /// Largest representable |k| (the Nyquist momentum π/dx).
    pub fn k_max(&self) -> f64 {
        PI / self.dx
    }

    /// Nearest grid index to a position, if it lies on the grid.
    pub fn nearest_x_index(&self, x: f64) -> Option<usize> {
        let j = ((x - self.x_center) / self.dx).round() + self.mid() as f64;
        (j >= 0.0 && j < self.n_points as f64).then_some(j as usize)
    }

    /// Nearest momentum grid index.
    pub fn nearest_k_index(&self, k: f64) -> Option<usize> {
        let j = (k / self.dk()).round() + self.mid() as f64;
        (j >= 0.0 && j < self.n_points as f64).then_some(j as usize)
    }

    /// Expresses `length` as a whole number of `dx` steps.
    pub fn steps(&self, what: &'static str, length: f64) -> Result<i64> {
        steps_of(what, length, self.dx)
    }

    pub fn same_spacing(&self, other: &Grid1D) -> bool {
        close(self.dx, other.dx)
    }

    /// Same size, spacing and center.
    pub fn matches(&self, other: &Grid1D) -> bool {
        self.n_points == other.n_points && self.same_spacing(other) && close(self.x_center, other.x_center)
    }

    /// The center lies on the lattice `m·dx`, so relative coordinates between
    /// two such grids are themselves grid steps.
    pub fn is_lattice_aligned(&self) -> bool {
        steps_of("x_center", self.x_center, self.dx).is_ok()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub(crate) fn steps_of(what: &'static str, length: f64, spacing: f64) -> Result<i64> {
    let ratio = length / spacing;
    let rounded = ratio.round();
    if (ratio - rounded).abs() > 1e-6 {
        return Err(KickError::OffGrid {
            what,
            value: length,
            spacing,
        });
    }
    Ok(rounded as i64)
}
