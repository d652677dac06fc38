//! Paired cell averages and interface point values at one time level.

use crate::error::{Error, Result};

/// Point-value storage convention.
///
/// * `Periodic`: `points[i]` is the value at the right interface of cell `i`
///   (`n_cells` values, indices wrap mod N).
/// * `Bounded`: `points[j]` is the value at interface `j = 0..=n_cells`, so
///   `points[0]` sits on the inflow boundary (`n_cells + 1` values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Periodic,
    Bounded,
}

/// Active Flux state: cell averages plus interface point values.
#[derive(Debug, Clone, PartialEq)]
pub struct StateAF {
    pub averages: Vec<f64>,
    pub points: Vec<f64>,
    pub layout: Layout,
}

impl StateAF {
    pub fn new(averages: Vec<f64>, points: Vec<f64>, layout: Layout) -> Result<Self> {
        let n = averages.len();
        let expected = match layout {
            Layout::Periodic => n,
            Layout::Bounded => n + 1,
        };
        if points.len() != expected {
            return Err(Error::LayoutMismatch(format!(
                "{n} averages require {expected} point values, got {}",
                points.len()
            )));
        }
        if averages.iter().chain(points.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Config("state contains non-finite entries".into()));
        }
        Ok(Self {
            averages,
            points,
            layout,
        })
    }

    pub fn zeros(n_cells: usize, layout: Layout) -> Self {
        let n_pts = match layout {
            Layout::Periodic => n_cells,
            Layout::Bounded => n_cells + 1,
        };
        Self {
            averages: vec![0.0; n_cells],
            points: vec![0.0; n_pts],
            layout,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.averages.len()
    }

    /// Value at the left interface of cell `i`.
    pub fn point_left_of(&self, i: usize) -> f64 {
        match self.layout {
            Layout::Periodic => {
                let n = self.n_cells();
                self.points[(i + n - 1) % n]
            }
            Layout::Bounded => self.points[i],
        }
    }

    /// Value at the right interface of cell `i`.
    pub fn point_right_of(&self, i: usize) -> f64 {
        match self.layout {
            Layout::Periodic => self.points[i],
            Layout::Bounded => self.points[i + 1],
        }
    }

    /// Sum of cell averages (the conserved quantity up to a factor dx).
    pub fn total_average(&self) -> f64 {
        self.averages.iter().sum()
    }

    pub fn all_finite(&self) -> bool {
        self.averages
            .iter()
            .chain(self.points.iter())
            .all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_lengths_enforced() {
        assert!(StateAF::new(vec![0.0; 4], vec![0.0; 4], Layout::Periodic).is_ok());
        assert!(StateAF::new(vec![0.0; 4], vec![0.0; 5], Layout::Bounded).is_ok());
        assert!(StateAF::new(vec![0.0; 4], vec![0.0; 5], Layout::Periodic).is_err());
        assert!(StateAF::new(vec![0.0; 4], vec![0.0; 4], Layout::Bounded).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(StateAF::new(vec![f64::NAN], vec![1.0], Layout::Periodic).is_err());
    }

    #[test]
    fn neighbour_access_wraps_in_periodic_layout() {
        let s = StateAF::new(vec![0.0; 3], vec![10.0, 11.0, 12.0], Layout::Periodic).unwrap();
        assert_eq!(s.point_right_of(0), 10.0);
        assert_eq!(s.point_left_of(0), 12.0);
        let b = StateAF::new(vec![0.0; 3], vec![0.0, 1.0, 2.0, 3.0], Layout::Bounded).unwrap();
        assert_eq!(b.point_left_of(0), 0.0);
        assert_eq!(b.point_right_of(2), 3.0);
    }
}
