//! Equidistant 1-D grid.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Equidistant grid of `n_cells` cells covering `[x_left, x_right]`.
///
/// Cell `i` (0-based) spans `[x_left + i*dx, x_left + (i+1)*dx]`. Interface
/// `j` sits at `x_left + j*dx`, so interface `j` separates cells `j-1` and
/// `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    n_cells: usize,
    x_left: f64,
    x_right: f64,
    dx: f64,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_left: f64, x_right: f64) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::Config("grid needs at least one cell".into()));
        }
        if !(x_right > x_left) || !x_left.is_finite() || !x_right.is_finite() {
            return Err(Error::Config(format!(
                "invalid domain [{x_left}, {x_right}]"
            )));
        }
        let dx = (x_right - x_left) / n_cells as f64;
        Ok(Self {
            n_cells,
            x_left,
            x_right,
            dx,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Position of interface `j`, `j = 0..=n_cells`.
    pub fn interface(&self, j: usize) -> f64 {
        self.x_left + j as f64 * self.dx
    }

    /// Center of cell `i`, `i = 0..n_cells`.
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx
    }

    /// Bounds of cell `i`.
    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.interface(i), self.interface(i + 1))
    }
}
