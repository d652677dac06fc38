//! Initial-data profiles and their discretization.

use crate::error::Result;
use crate::grid::Grid1D;
use crate::quadrature;
use crate::state::{Layout, StateAF};
use serde::{Deserialize, Serialize};

/// Parameters of the four-feature composite test profile (Gaussian hump,
/// square wave, sharp triangle, half-ellipse) on the domain `[0, 2]`.
///
/// The features live in the classical coordinates `xi = x - 1` on `[-1, 1]`;
/// the constants are stored here so tests can pin them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositeParams {
    /// Half-ellipse center in `xi` coordinates.
    pub a: f64,
    /// Gaussian center in `xi` coordinates.
    pub z0: f64,
    pub delta: f64,
    pub alpha: f64,
    /// Gaussian decay rate, `ln 2 / (36 delta^2)`.
    pub beta_g: f64,
}

impl Default for CompositeParams {
    fn default() -> Self {
        let delta = 0.005;
        Self {
            a: 0.5,
            z0: -0.7,
            delta,
            alpha: 10.0,
            beta_g: 2.0f64.ln() / (36.0 * delta * delta),
        }
    }
}

/// Evaluable initial condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ProfileDescriptor {
    Zero,
    Constant { value: f64 },
    Sine { wavenumber: f64 },
    Gaussian { center: f64, width: f64 },
    JiangShuComposite { params: CompositeParams },
}

impl ProfileDescriptor {
    pub fn composite() -> Self {
        ProfileDescriptor::JiangShuComposite {
            params: CompositeParams::default(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ProfileDescriptor::Zero => 0.0,
            ProfileDescriptor::Constant { value } => *value,
            ProfileDescriptor::Sine { wavenumber } => (wavenumber * x).sin(),
            ProfileDescriptor::Gaussian { center, width } => {
                let t = (x - center) / width;
                (-t * t).exp()
            }
            ProfileDescriptor::JiangShuComposite { params } => composite_eval(params, x - 1.0),
        }
    }
}

fn composite_eval(p: &CompositeParams, xi: f64) -> f64 {
    let g = |z: f64| (-p.beta_g * (xi - z) * (xi - z)).exp();
    let f = |a: f64| (1.0 - p.alpha * p.alpha * (xi - a) * (xi - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&xi) {
        (g(p.z0 - p.delta) + g(p.z0 + p.delta) + 4.0 * g(p.z0)) / 6.0
    } else if (-0.4..=-0.2).contains(&xi) {
        1.0
    } else if (0.0..=0.2).contains(&xi) {
        1.0 - (10.0 * (xi - 0.1)).abs()
    } else if (0.4..=0.6).contains(&xi) {
        (f(p.a - p.delta) + f(p.a + p.delta) + 4.0 * f(p.a)) / 6.0
    } else {
        0.0
    }
}

/// Discretize a profile: point values are exact pointwise evaluations at the
/// interfaces, averages are per-cell Gauss–Legendre integrals.
pub fn init_state(grid: &Grid1D, profile: &ProfileDescriptor, layout: Layout) -> Result<StateAF> {
    init_from_fn(grid, |x| profile.eval(x), layout)
}

/// Same discretization for an arbitrary function.
pub fn init_from_fn<F: Fn(f64) -> f64>(grid: &Grid1D, f: F, layout: Layout) -> Result<StateAF> {
    let n = grid.n_cells();
    let averages: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = grid.cell(i);
            quadrature::average(&f, a, b)
        })
        .collect();
    let points: Vec<f64> = match layout {
        Layout::Periodic => (0..n).map(|i| f(grid.interface(i + 1))).collect(),
        Layout::Bounded => (0..=n).map(|j| f(grid.interface(j))).collect(),
    };
    StateAF::new(averages, points, layout)
}

/// Exact solution of the periodic advection problem at time `t`, sampled
/// like [`init_state`] (the profile is shifted by `u t` with periodic wrap).
pub fn exact_advection(
    profile: &ProfileDescriptor,
    u: f64,
    t: f64,
    grid: &Grid1D,
    layout: Layout,
) -> Result<StateAF> {
    let len = grid.length();
    let x_left = grid.x_left();
    let f = move |x: f64| {
        let mut y = x - u * t;
        y -= len * ((y - x_left) / len).floor();
        profile.eval(y)
    };
    init_from_fn(grid, f, layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_profile_discretizes_to_zeros() {
        let g = Grid1D::new(8, 0.0, 1.0).unwrap();
        let s = init_state(&g, &ProfileDescriptor::Zero, Layout::Periodic).unwrap();
        assert!(s.averages.iter().all(|&v| v == 0.0));
        assert!(s.points.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_profile_is_exact() {
        let g = Grid1D::new(8, -1.0, 3.0).unwrap();
        let s = init_state(&g, &ProfileDescriptor::Constant { value: 1.0 }, Layout::Bounded)
            .unwrap();
        for v in s.averages.iter().chain(s.points.iter()) {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-15);
        }
    }

    // Oracle: closed-form antiderivative of sin(2 pi x) per cell.
    #[test]
    fn sine_averages_match_antiderivative() {
        let g = Grid1D::new(20, 0.0, 1.0).unwrap();
        let s = init_state(
            &g,
            &ProfileDescriptor::Sine { wavenumber: 2.0 * PI },
            Layout::Periodic,
        )
        .unwrap();
        for i in 0..20 {
            let (a, b) = g.cell(i);
            let exact = ((2.0 * PI * a).cos() - (2.0 * PI * b).cos()) / (2.0 * PI * g.dx());
            assert!((s.averages[i] - exact).abs() <= 1e-12);
        }
    }

    #[test]
    fn exact_advection_reduces_to_init() {
        let g = Grid1D::new(16, 0.0, 1.0).unwrap();
        let p = ProfileDescriptor::Sine { wavenumber: 2.0 * PI };
        let s0 = init_state(&g, &p, Layout::Periodic).unwrap();
        let at0 = exact_advection(&p, 1.0, 0.0, &g, Layout::Periodic).unwrap();
        let full = exact_advection(&p, 1.0, 1.0, &g, Layout::Periodic).unwrap();
        for i in 0..16 {
            assert_abs_diff_eq!(s0.averages[i], at0.averages[i], epsilon = 1e-14);
            assert_abs_diff_eq!(s0.points[i], full.points[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn shifted_sine_point_value() {
        // q(t, x) = sin(2 pi (x - t)); at t = 1/4, x = 1/2 the value is 1.
        let g = Grid1D::new(10, 0.0, 1.0).unwrap();
        let p = ProfileDescriptor::Sine { wavenumber: 2.0 * PI };
        let s = exact_advection(&p, 1.0, 0.25, &g, Layout::Periodic).unwrap();
        // interface x = 0.5 is points[4] in the periodic layout
        assert_abs_diff_eq!(s.points[4], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn composite_features_present() {
        let p = ProfileDescriptor::composite();
        assert_abs_diff_eq!(p.eval(0.7), 1.0, epsilon = 1e-15); // square (xi = -0.3)
        assert_abs_diff_eq!(p.eval(1.1), 1.0, epsilon = 1e-15); // triangle peak
        assert!(p.eval(0.3) > 0.9); // Gaussian hump center
        assert!(p.eval(1.5) > 0.9); // ellipse center
        assert_eq!(p.eval(1.9), 0.0);
        assert_eq!(p.eval(0.0), 0.0);
    }
}
