//! Method-of-lines path: third-order semi-discrete right-hand side plus
//! implicit Runge–Kutta integration, for comparison against the
//! single-stage schemes.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg::{DenseLu, DenseMatrix};
use crate::state::{Layout, StateAF};

/// Implicit Runge–Kutta coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub name: String,
}

impl ButcherTableau {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>, name: &str) -> Result<Self> {
        let s = b.len();
        if a.len() != s || a.iter().any(|row| row.len() != s) || c.len() != s {
            return Err(Error::Config(format!("inconsistent tableau sizes for {name}")));
        }
        let bsum: f64 = b.iter().sum();
        if (bsum - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!("weights of {name} sum to {bsum}, not 1")));
        }
        for (k, row) in a.iter().enumerate() {
            let rsum: f64 = row.iter().sum();
            if (rsum - c[k]).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "row {k} of {name} sums to {rsum}, node is {}",
                    c[k]
                )));
            }
        }
        Ok(Self {
            a,
            b,
            c,
            name: name.into(),
        })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn backward_euler() -> Self {
        Self::new(vec![vec![1.0]], vec![1.0], vec![1.0], "backward-euler").unwrap()
    }

    pub fn crank_nicolson() -> Self {
        Self::new(
            vec![vec![0.0, 0.0], vec![0.5, 0.5]],
            vec![0.5, 0.5],
            vec![0.0, 1.0],
            "crank-nicolson",
        )
        .unwrap()
    }

    pub fn radau_ia() -> Self {
        Self::new(
            vec![vec![0.25, -0.25], vec![0.25, 5.0 / 12.0]],
            vec![0.25, 0.75],
            vec![0.0, 2.0 / 3.0],
            "radau-ia",
        )
        .unwrap()
    }

    pub fn radau_iia() -> Self {
        Self::new(
            vec![vec![5.0 / 12.0, -1.0 / 12.0], vec![0.75, 0.25]],
            vec![0.75, 0.25],
            vec![1.0 / 3.0, 1.0],
            "radau-iia",
        )
        .unwrap()
    }

    pub fn dirk_crouzeix() -> Self {
        let g = 0.5 + 3.0f64.sqrt() / 6.0;
        Self::new(
            vec![vec![g, 0.0], vec![-(3.0f64.sqrt()) / 3.0, g]],
            vec![0.5, 0.5],
            vec![g, 1.0 - g],
            "dirk-crouzeix",
        )
        .unwrap()
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "backward-euler" => Ok(Self::backward_euler()),
            "crank-nicolson" => Ok(Self::crank_nicolson()),
            "radau-ia" => Ok(Self::radau_ia()),
            "radau-iia" => Ok(Self::radau_iia()),
            "dirk-crouzeix" => Ok(Self::dirk_crouzeix()),
            other => Err(Error::Config(format!(
                "unknown integrator {other:?}; expected one of backward-euler, \
                 crank-nicolson, radau-ia, radau-iia, dirk-crouzeix"
            ))),
        }
    }

    pub const NAMES: [&'static str; 5] = [
        "backward-euler",
        "crank-nicolson",
        "radau-ia",
        "radau-iia",
        "dirk-crouzeix",
    ];
}

/// Semi-discrete right-hand side on a periodic grid:
/// `d/dt avg_i = -u (pt_i - pt_{i-1}) / dx` and
/// `d/dt pt_i = -u (2 pt_{i-1} - 6 avg_i + 4 pt_i) / dx`.
pub fn semidiscrete_rhs(state: &StateAF, u: f64, dx: f64) -> Result<StateAF> {
    if state.layout != Layout::Periodic {
        return Err(Error::LayoutMismatch(
            "the semi-discrete path supports periodic layouts only".into(),
        ));
    }
    let n = state.n_cells();
    let mut d = StateAF::zeros(n, Layout::Periodic);
    for i in 0..n {
        let left = state.points[(i + n - 1) % n];
        let right = state.points[i];
        d.averages[i] = -u * (right - left) / dx;
        d.points[i] = -u * (2.0 * left - 6.0 * state.averages[i] + 4.0 * right) / dx;
    }
    Ok(d)
}

fn pack(state: &StateAF) -> Vec<f64> {
    let n = state.n_cells();
    let mut y = Vec::with_capacity(2 * n);
    y.extend_from_slice(&state.points);
    y.extend_from_slice(&state.averages);
    debug_assert_eq!(y.len(), 2 * n);
    y
}

fn unpack(y: &[f64], n: usize) -> StateAF {
    StateAF {
        points: y[..n].to_vec(),
        averages: y[n..].to_vec(),
        layout: Layout::Periodic,
    }
}

/// Dense operator of the semi-discrete right-hand side in packed ordering
/// (points first, then averages).
pub fn rhs_operator(n: usize, u: f64, dx: f64) -> DenseMatrix {
    let mut l = DenseMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let prev = (i + n - 1) % n;
        // point row
        l.add(i, prev, -2.0 * u / dx);
        l.add(i, i, -4.0 * u / dx);
        l.add(i, n + i, 6.0 * u / dx);
        // average row
        l.add(n + i, i, -u / dx);
        l.add(n + i, prev, u / dx);
    }
    l
}

/// Implicit Runge–Kutta stepper for a linear system `y' = L y`. The stage
/// system is linear, so it is assembled once as one block matrix over all
/// stages, factored, and reused for every step.
pub struct IrkSolver {
    tableau: ButcherTableau,
    l: DenseMatrix,
    factor: DenseLu,
    dt: f64,
    n: usize,
}

impl IrkSolver {
    pub fn new(tableau: ButcherTableau, l: DenseMatrix, dt: f64) -> Result<Self> {
        assert_eq!(l.n_rows, l.n_cols);
        let n = l.n_rows;
        let s = tableau.stages();
        // stage matrix: I - dt (A (x) L)
        let mut m = DenseMatrix::zeros(s * n, s * n);
        for k in 0..s * n {
            m.set(k, k, 1.0);
        }
        for bi in 0..s {
            for bj in 0..s {
                let a = tableau.a[bi][bj];
                if a == 0.0 {
                    continue;
                }
                for r in 0..n {
                    for c in 0..n {
                        let v = l.get(r, c);
                        if v != 0.0 {
                            m.add(bi * n + r, bj * n + c, -dt * a * v);
                        }
                    }
                }
            }
        }
        let factor = DenseLu::factor(&m)
            .map_err(|_| Error::SingularSystem(format!("singular stage system for {}", tableau.name)))?;
        Ok(Self {
            tableau,
            l,
            factor,
            dt,
            n,
        })
    }

    /// One step of `y' = L y`: solve all stages monolithically, then
    /// `y += dt * sum b_k K_k`.
    pub fn step_vec(&self, y: &[f64]) -> Vec<f64> {
        let (s, n) = (self.tableau.stages(), self.n);
        let ly = self.l.matvec(y);
        let mut rhs = Vec::with_capacity(s * n);
        for _ in 0..s {
            rhs.extend_from_slice(&ly);
        }
        self.factor.solve_in_place(&mut rhs);
        let mut out = y.to_vec();
        for k in 0..s {
            let bk = self.tableau.b[k];
            for r in 0..n {
                out[r] += self.dt * bk * rhs[k * n + r];
            }
        }
        out
    }

    pub fn step(&self, state: &StateAF) -> Result<StateAF> {
        if state.layout != Layout::Periodic || 2 * state.n_cells() != self.n {
            return Err(Error::LayoutMismatch(
                "IRK step needs a periodic state matching the assembled operator".into(),
            ));
        }
        let y = self.step_vec(&pack(state));
        Ok(unpack(&y, state.n_cells()))
    }
}

/// Result of a semi-discrete run (same snapping rule as the single-stage
/// solver).
pub struct SemidiscreteRun {
    pub final_state: StateAF,
    pub n_steps: usize,
    pub dt: f64,
    pub cfl: f64,
}

pub fn run_semidiscrete(
    grid: &Grid1D,
    initial: &crate::profile::ProfileDescriptor,
    u: f64,
    tableau: ButcherTableau,
    target_cfl: f64,
    t_final: f64,
) -> Result<SemidiscreteRun> {
    let state0 = crate::profile::init_state(grid, initial, Layout::Periodic)?;
    if t_final <= 0.0 {
        return Ok(SemidiscreteRun {
            final_state: state0,
            n_steps: 0,
            dt: 0.0,
            cfl: target_cfl,
        });
    }
    let dx = grid.dx();
    let n_steps = crate::solver1d::snap_steps(u, t_final, target_cfl, dx);
    let dt = t_final / n_steps as f64;
    let solver = IrkSolver::new(tableau, rhs_operator(grid.n_cells(), u, dx), dt)?;
    let mut state = state0;
    for _ in 0..n_steps {
        state = solver.step(&state)?;
    }
    Ok(SemidiscreteRun {
        final_state: state,
        n_steps,
        dt,
        cfl: u * dt / dx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileDescriptor;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn published_tableaux() {
        let r = ButcherTableau::radau_iia();
        assert_eq!(r.a, vec![vec![5.0 / 12.0, -1.0 / 12.0], vec![0.75, 0.25]]);
        assert_eq!(r.b, vec![0.75, 0.25]);
        assert_eq!(r.c, vec![1.0 / 3.0, 1.0]);
        for name in ButcherTableau::NAMES {
            ButcherTableau::by_name(name).unwrap();
        }
        assert!(ButcherTableau::by_name("rk4").is_err());
    }

    #[test]
    fn rhs_of_constant_state_vanishes() {
        let mut s = StateAF::zeros(8, Layout::Periodic);
        s.averages.iter_mut().for_each(|v| *v = 2.0);
        s.points.iter_mut().for_each(|v| *v = 2.0);
        let d = semidiscrete_rhs(&s, 1.5, 0.1).unwrap();
        for v in d.averages.iter().chain(d.points.iter()) {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn rhs_sign_pattern_for_point_impulse() {
        // q-bar = 0, point impulse at interface 0: the flux difference hits
        // cell 0 with -u/dx and cell 1 with +u/dx
        let mut s = StateAF::zeros(6, Layout::Periodic);
        s.points[0] = 1.0;
        let (u, dx) = (2.0, 0.5);
        let d = semidiscrete_rhs(&s, u, dx).unwrap();
        assert_abs_diff_eq!(d.averages[0], -u / dx, epsilon = 1e-14);
        assert_abs_diff_eq!(d.averages[1], u / dx, epsilon = 1e-14);
        for i in 2..6 {
            assert_eq!(d.averages[i], 0.0);
        }
    }

    // Oracle: the Fourier symbol of the semi-discrete operator, built by
    // hand from the two finite-difference formulas.
    #[test]
    fn rhs_matches_symbol_on_fourier_mode() {
        let n = 32;
        let (u, dx) = (1.0, 1.0 / n as f64);
        let beta = 2.0 * PI / n as f64 * 3.0;
        let mut s = StateAF::zeros(n, Layout::Periodic);
        for i in 0..n {
            s.points[i] = (beta * i as f64).cos();
            s.averages[i] = 0.5 * (beta * i as f64).sin();
        }
        let d = semidiscrete_rhs(&s, u, dx).unwrap();
        let project = |vals: &[f64]| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in vals.iter().enumerate() {
                acc += Complex64::from_polar(1.0, -beta * i as f64) * *v;
            }
            acc / n as f64
        };
        let zp = project(&s.points);
        let za = project(&s.averages);
        let emb = Complex64::from_polar(1.0, -beta);
        let lp = -(u / dx) * (2.0 * emb + 4.0) * zp + (6.0 * u / dx) * za;
        let la = -(u / dx) * (1.0 - emb) * zp;
        assert!((project(&d.points) - lp).norm() < 1e-12);
        assert!((project(&d.averages) - la).norm() < 1e-12);
    }

    fn scalar_step(tab: ButcherTableau, lambda: f64, dt: f64) -> f64 {
        let mut l = DenseMatrix::zeros(1, 1);
        l.set(0, 0, lambda);
        let solver = IrkSolver::new(tab, l, dt).unwrap();
        solver.step_vec(&[1.0])[0]
    }

    #[test]
    fn scalar_amplification_identities() {
        let (lambda, dt) = (-2.0, 0.3);
        let z = lambda * dt;
        assert_abs_diff_eq!(
            scalar_step(ButcherTableau::backward_euler(), lambda, dt),
            1.0 / (1.0 - z),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            scalar_step(ButcherTableau::crank_nicolson(), lambda, dt),
            (1.0 + 0.5 * z) / (1.0 - 0.5 * z),
            epsilon = 1e-13
        );
    }

    #[test]
    fn average_sum_is_conserved() {
        let g = Grid1D::new(24, 0.0, 2.0).unwrap();
        let s0 = crate::profile::init_state(&g, &ProfileDescriptor::composite(), Layout::Periodic)
            .unwrap();
        for name in ButcherTableau::NAMES {
            let solver = IrkSolver::new(
                ButcherTableau::by_name(name).unwrap(),
                rhs_operator(24, 1.0, g.dx()),
                0.25,
            )
            .unwrap();
            let mut s = s0.clone();
            let sum0 = s.total_average();
            for _ in 0..10 {
                s = solver.step(&s).unwrap();
                assert!(
                    (s.total_average() - sum0).abs() / sum0.abs().max(1.0) < 1e-12,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn one_step_map_is_stable_at_cfl_three() {
        let n = 100;
        let dx = 1.0 / n as f64;
        let dt = 3.0 * dx;
        for name in ButcherTableau::NAMES {
            let solver = IrkSolver::new(
                ButcherTableau::by_name(name).unwrap(),
                rhs_operator(n, 1.0, dx),
                dt,
            )
            .unwrap();
            let dim = 2 * n;
            let mut m = nalgebra::DMatrix::<f64>::zeros(dim, dim);
            for j in 0..dim {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                let y = solver.step_vec(&e);
                for i in 0..dim {
                    m[(i, j)] = y[i];
                }
            }
            let radius = m
                .complex_eigenvalues()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(radius <= 1.0 + 1e-10, "{name}: spectral radius {radius}");
        }
    }

    #[test]
    fn radau_pair_coincides_on_linear_problems() {
        // both third-order Radau variants share the same stability function,
        // so on a linear problem their steps agree to rounding
        let g = Grid1D::new(50, 0.0, 2.0).unwrap();
        let p = ProfileDescriptor::composite();
        let a = run_semidiscrete(&g, &p, 1.0, ButcherTableau::radau_ia(), 3.0, 2.0).unwrap();
        let b = run_semidiscrete(&g, &p, 1.0, ButcherTableau::radau_iia(), 3.0, 2.0).unwrap();
        let e = crate::norms::error_norms(&a.final_state, &b.final_state, g.dx()).unwrap();
        assert!(e.l1_avg < 1e-10 && e.l1_pts < 1e-10);
    }
}
