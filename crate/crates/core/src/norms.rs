//! Discrete error norms.

use crate::error::{Error, Result};
use crate::state::StateAF;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `dx * sum |avg_i - avg_i^exact|`
    pub l1_avg: f64,
    /// `(1/N) * sum |q_j - q_j^exact|` over point values
    pub l1_pts: f64,
    /// `max |q_j - q_j^exact|` over point values
    pub linf_pts: f64,
}

pub fn error_norms(state: &StateAF, exact: &StateAF, dx: f64) -> Result<ErrorNorms> {
    if state.layout != exact.layout
        || state.averages.len() != exact.averages.len()
        || state.points.len() != exact.points.len()
    {
        return Err(Error::LayoutMismatch(
            "error_norms requires identical layouts".into(),
        ));
    }
    let n = state.averages.len() as f64;
    let l1_avg = dx
        * state
            .averages
            .iter()
            .zip(&exact.averages)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    let diffs = state.points.iter().zip(&exact.points).map(|(a, b)| (a - b).abs());
    let l1_pts = diffs.clone().sum::<f64>() / n;
    let linf_pts = diffs.fold(0.0f64, f64::max);
    Ok(ErrorNorms {
        l1_avg,
        l1_pts,
        linf_pts,
    })
}
