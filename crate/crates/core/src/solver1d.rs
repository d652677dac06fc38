//! Implicit time stepping on an interval: global system assembly, periodic
//! and Dirichlet steps, and the run harness.
//!
//! Unknown ordering interleaves the two DOF families. Periodic:
//! `x[2i] = point_{i+1/2}, x[2i+1] = avg_i` for pairs `i = 0..N`. Bounded:
//! `x[2j] = point_j` for interfaces `j = 0..=N` and `x[2i+1] = avg_i`.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg::{BandedLu, BandedMatrix, CyclicBandedLu, SparseSystem};
use crate::problem::{AdvectionProblem, BoundaryCondition, BoundarySignal, ResolvedSignal};
use crate::stability;
use crate::state::{Layout, StateAF};
use crate::stencil::{build_weights, DofKind, SchemeId, SchemeWeights, TimeLevel};

/// Time-step configuration; checks the CFL consistency invariant.
#[derive(Debug, Clone)]
pub struct StepConfig {
    pub weights: SchemeWeights,
    pub u: f64,
    pub dx: f64,
    pub dt: f64,
}

impl StepConfig {
    pub fn new(weights: SchemeWeights, u: f64, dx: f64, dt: f64) -> Result<Self> {
        let c = u * dt / dx;
        if (c - weights.cfl).abs() > 1e-14 * weights.cfl.max(1.0) {
            return Err(Error::Config(format!(
                "weights built for c = {} but u dt / dx = {c}",
                weights.cfl
            )));
        }
        Ok(Self { weights, u, dx, dt })
    }
}

/// Factored global implicit system for one periodic grid. The matrix
/// depends only on (scheme, c, N), so the factorization is reused across
/// steps.
pub struct ImplicitSystem {
    n_cells: usize,
    factor: CyclicBandedLu,
    /// Right-hand-side builder: per row the explicit couplings (col, coeff).
    explicit_rows: Vec<Vec<(usize, f64)>>,
}

impl ImplicitSystem {
    pub fn assemble_periodic(weights: &SchemeWeights, n_cells: usize) -> Result<Self> {
        if n_cells < 3 {
            return Err(Error::Config(
                "periodic assembly needs at least 3 cells (compact stencil width)".into(),
            ));
        }
        let n = n_cells;
        let dim = 2 * n;
        let col = |pair: i64, kind: DofKind| -> usize {
            let p = pair.rem_euclid(n as i64) as usize;
            match kind {
                DofKind::Point => 2 * p,
                DofKind::Avg => 2 * p + 1,
            }
        };
        let mut sys = SparseSystem::new(dim);
        let mut explicit_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        let point_terms = weights.point_residual_terms();
        let avg_terms = weights.avg_residual_terms();
        for p in 0..n as i64 {
            // reconstruction at pair p updates the next point value
            let rows = [
                (col(p + 1, DofKind::Point), &point_terms),
                (col(p, DofKind::Avg), &avg_terms),
            ];
            for (row, terms) in rows {
                for t in terms.iter() {
                    let column = col(p + t.offset, t.kind);
                    match t.level {
                        TimeLevel::New => sys.add(row, column, t.coeff),
                        TimeLevel::Old => {
                            if t.coeff != 0.0 {
                                explicit_rows[row].push((column, -t.coeff));
                            }
                        }
                    }
                }
            }
        }
        let factor = CyclicBandedLu::factor(&sys, 3, 2)
            .map_err(|e| Error::SingularSystem(format!("periodic system: {e}")))?;
        Ok(Self {
            n_cells,
            factor,
            explicit_rows,
        })
    }

    /// One implicit step: direct solve of the factored cyclic system.
    pub fn step(&self, state: &StateAF) -> Result<StateAF> {
        if state.layout != Layout::Periodic || state.n_cells() != self.n_cells {
            return Err(Error::LayoutMismatch(
                "periodic step needs a periodic state on the assembled grid".into(),
            ));
        }
        let n = self.n_cells;
        let old = |c: usize| {
            if c % 2 == 0 {
                state.points[c / 2]
            } else {
                state.averages[c / 2]
            }
        };
        let rhs: Vec<f64> = self
            .explicit_rows
            .iter()
            .map(|row| row.iter().map(|&(c, w)| w * old(c)).sum())
            .collect();
        let x = self.factor.solve(&rhs);
        let mut next = StateAF::zeros(n, Layout::Periodic);
        for i in 0..n {
            next.points[i] = x[2 * i];
            next.averages[i] = x[2 * i + 1];
        }
        if !next.all_finite() {
            return Err(Error::SingularSystem("periodic solve produced non-finite values".into()));
        }
        Ok(next)
    }
}

/// Outflow treatment selected by the stencil shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutflowCase {
    /// No downwind averages in the stencil: average equations stay attached
    /// to their own cell and the system is triangular as-is.
    NoDownwind,
    /// The stencil uses the implicit downwind average: each average
    /// equation is re-attributed to its downwind-most implicit unknown,
    /// shifting the equations one cell left and freeing the outflow cell.
    ShiftImplicit,
}

/// Dirichlet stepper: inflow unknowns traced from the boundary signal, the
/// remaining system solved by left-to-right marching (the banded path is
/// kept as an independent cross-check).
pub struct DirichletStepper {
    config: StepConfig,
    n_cells: usize,
    case: OutflowCase,
}

/// Boundary data entering one Dirichlet step.
struct BoundaryData {
    /// b(t^{n+1}) -> point[0]
    point0: f64,
    /// mean of b over the traced window -> avg[0]
    avg0: f64,
    /// b(t^{n+1} - dx/u) -> point[1]
    point1: f64,
    /// mean of b over [t^n, t^{n+1}]: the boundary flux integral / (u dt)
    flux_mean: f64,
}

impl DirichletStepper {
    pub fn new(config: StepConfig, n_cells: usize) -> Result<Self> {
        let mask = config.weights.mask;
        let c = config.weights.cfl;
        if c < 1.0 - 1e-12 {
            return Err(Error::Config(format!(
                "Dirichlet stepping requires c >= 1 (traced boundary times must stay \
                 within one step); got c = {c}"
            )));
        }
        let case = if mask.uses_implicit_downwind_avg() {
            OutflowCase::ShiftImplicit
        } else if mask.uses_explicit_downwind_avg() {
            return Err(Error::UnsupportedBoundary {
                scheme: mask.to_string(),
                reason: "the stencil uses the explicit downwind average without its \
                         implicit counterpart, so the outflow equations cannot be \
                         re-attributed"
                    .into(),
            });
        } else {
            OutflowCase::NoDownwind
        };
        if n_cells < 3 {
            return Err(Error::Config("Dirichlet stepping needs at least 3 cells".into()));
        }
        Ok(Self {
            config,
            n_cells,
            case,
        })
    }

    fn boundary_data<S: BoundarySignal + ?Sized>(&self, signal: &S, t_n: f64) -> BoundaryData {
        let dt = self.config.dt;
        let trace = self.config.dx / self.config.u; // dt / c
        let t_next = t_n + dt;
        BoundaryData {
            point0: signal.value(t_next),
            avg0: signal.mean(t_next - trace, t_next),
            point1: signal.value(t_next - trace),
            flux_mean: signal.mean(t_n, t_next),
        }
    }

    /// Value of the six interface DOFs at interface `j` (cells j-1, j),
    /// skipping slots with zero weight so out-of-range cells are never read.
    fn weighted_sum(
        w: &[f64; 6],
        j: usize,
        avg_old: &[f64],
        pts_old: &[f64],
        avg_new: &[f64],
        pts_new: &[f64],
    ) -> f64 {
        let mut acc = 0.0;
        let fetch = |k: usize| -> f64 {
            match k {
                0 => avg_old[j - 1],
                1 => pts_old[j],
                2 => avg_old[j],
                3 => avg_new[j - 1],
                4 => pts_new[j],
                5 => avg_new[j],
                _ => unreachable!(),
            }
        };
        for k in 0..6 {
            if w[k] != 0.0 {
                acc += w[k] * fetch(k);
            }
        }
        acc
    }

    /// One step by spatial marching. With the outflow re-attribution the
    /// system is triangular, so this substitutes the linear solve.
    pub fn step_marching<S: BoundarySignal + ?Sized>(
        &self,
        state: &StateAF,
        signal: &S,
        t_n: f64,
    ) -> Result<StateAF> {
        self.check_state(state)?;
        let n = self.n_cells;
        let w = &self.config.weights.w_point;
        let v = &self.config.weights.w_flux;
        let c = self.config.weights.cfl;
        let bd = self.boundary_data(signal, t_n);
        let avg_old = &state.averages;
        let pts_old = &state.points;
        let mut avg_new = vec![0.0; n];
        let mut pts_new = vec![0.0; n + 1];
        pts_new[0] = bd.point0;
        avg_new[0] = bd.avg0;
        pts_new[1] = bd.point1;

        let flux = |j: usize, avg_new: &[f64], pts_new: &[f64]| -> f64 {
            Self::weighted_sum(v, j, avg_old, pts_old, avg_new, pts_new)
        };

        match self.case {
            OutflowCase::NoDownwind => {
                // cell i's own equation yields avg[i]; the new point ahead of
                // it only needs upwind data
                for i in 1..n {
                    pts_new[i + 1] =
                        Self::weighted_sum(w, i, avg_old, pts_old, &avg_new, &pts_new);
                    let left = flux(i, &avg_new, &pts_new);
                    // right flux with the avg_new[i] slot (weight v3) split off
                    let j = i + 1;
                    let mut right_known = 0.0;
                    if v[0] != 0.0 {
                        right_known += v[0] * avg_old[j - 1];
                    }
                    if v[1] != 0.0 {
                        right_known += v[1] * pts_old[j];
                    }
                    if v[4] != 0.0 {
                        right_known += v[4] * pts_new[j];
                    }
                    let diag = 1.0 + c * v[3];
                    if diag.abs() < 1e-12 {
                        return Err(Error::SingularSystem(format!(
                            "outflow average equation degenerates at c = {c}"
                        )));
                    }
                    avg_new[i] = (avg_old[i] + c * left - c * right_known) / diag;
                }
            }
            OutflowCase::ShiftImplicit => {
                // cell i's equation is solved for avg[i+1]
                for i in 0..n - 1 {
                    let left = if i == 0 {
                        bd.flux_mean
                    } else {
                        flux(i, &avg_new, &pts_new)
                    };
                    // right flux with the avg[i+1] slot (weight v5) split off
                    let mut right_known = 0.0;
                    let j = i + 1;
                    if v[0] != 0.0 {
                        right_known += v[0] * avg_old[j - 1];
                    }
                    if v[1] != 0.0 {
                        right_known += v[1] * pts_old[j];
                    }
                    if v[2] != 0.0 {
                        right_known += v[2] * avg_old[j];
                    }
                    if v[3] != 0.0 {
                        right_known += v[3] * avg_new[j - 1];
                    }
                    if v[4] != 0.0 {
                        right_known += v[4] * pts_new[j];
                    }
                    let diag = c * v[5];
                    if diag.abs() < 1e-300 {
                        return Err(Error::SingularSystem(format!(
                            "downwind flux weight vanishes at c = {c}; outflow \
                             re-attribution is singular"
                        )));
                    }
                    // residual: avg_new[i] - avg_old[i] + c (right - left) = 0
                    avg_new[i + 1] =
                        (avg_old[i] - avg_new[i] + c * left - c * right_known) / diag;
                    pts_new[i + 2] =
                        Self::weighted_sum(w, i + 1, avg_old, pts_old, &avg_new, &pts_new);
                }
            }
        }
        let next = StateAF::new(avg_new, pts_new, Layout::Bounded)?;
        Ok(next)
    }

    /// One step through the assembled banded system; independent of the
    /// marching path and used to cross-check it.
    pub fn step_banded<S: BoundarySignal + ?Sized>(
        &self,
        state: &StateAF,
        signal: &S,
        t_n: f64,
    ) -> Result<StateAF> {
        self.check_state(state)?;
        let n = self.n_cells;
        let dim = 2 * n + 1;
        let v = &self.config.weights.w_flux;
        let w = &self.config.weights.w_point;
        let c = self.config.weights.cfl;
        let bd = self.boundary_data(signal, t_n);
        let avg_col = |i: usize| 2 * i + 1;
        let pt_col = |j: usize| 2 * j;

        let mut mat = BandedMatrix::zeros(dim, 4, 1);
        let mut rhs = vec![0.0; dim];

        // prescribed inflow unknowns
        for (row, val) in [
            (pt_col(0), bd.point0),
            (avg_col(0), bd.avg0),
            (pt_col(1), bd.point1),
        ] {
            mat.set(row, row, 1.0);
            rhs[row] = val;
        }

        // point equations: reconstruction at interface j gives point[j+1]
        for j in 1..n {
            let row = pt_col(j + 1);
            mat.add(row, row, 1.0);
            // implicit couplings
            if w[3] != 0.0 {
                mat.add(row, avg_col(j - 1), -w[3]);
            }
            if w[4] != 0.0 {
                mat.add(row, pt_col(j), -w[4]);
            }
            if w[5] != 0.0 {
                mat.add(row, avg_col(j), -w[5]);
            }
            rhs[row] += w[0] * state.averages[j - 1]
                + w[1] * state.points[j]
                + w[2] * state.averages[j];
        }

        // average equations with outflow re-attribution
        let cells: Vec<usize> = match self.case {
            OutflowCase::NoDownwind => (1..n).collect(),
            OutflowCase::ShiftImplicit => (0..n - 1).collect(),
        };
        for &i in &cells {
            let row = match self.case {
                OutflowCase::NoDownwind => avg_col(i),
                OutflowCase::ShiftImplicit => avg_col(i + 1),
            };
            // avg_new[i] - avg_old[i] + c (flux_{i+1} - flux_i) = 0
            mat.add(row, avg_col(i), 1.0);
            rhs[row] += state.averages[i];
            // right interface j = i + 1
            let j = i + 1;
            if v[3] != 0.0 {
                mat.add(row, avg_col(j - 1), c * v[3]);
            }
            if v[4] != 0.0 {
                mat.add(row, pt_col(j), c * v[4]);
            }
            if v[5] != 0.0 {
                mat.add(row, avg_col(j), c * v[5]);
            }
            rhs[row] -= c * (v[0] * state.averages[j - 1]
                + v[1] * state.points[j]
                + v[2] * state.averages[j]);
            // left interface j = i (boundary flux for the first cell)
            if i == 0 {
                rhs[row] += c * bd.flux_mean;
            } else {
                let j = i;
                if v[3] != 0.0 {
                    mat.add(row, avg_col(j - 1), -c * v[3]);
                }
                if v[4] != 0.0 {
                    mat.add(row, pt_col(j), -c * v[4]);
                }
                if v[5] != 0.0 {
                    mat.add(row, avg_col(j), -c * v[5]);
                }
                rhs[row] += c * (v[0] * state.averages[j - 1]
                    + v[1] * state.points[j]
                    + v[2] * state.averages[j]);
            }
        }

        let lu = BandedLu::factor(&mat)
            .map_err(|e| Error::SingularSystem(format!("Dirichlet system: {e}")))?;
        let x = lu.solve(&rhs);
        let mut avg_new = vec![0.0; n];
        let mut pts_new = vec![0.0; n + 1];
        for i in 0..n {
            avg_new[i] = x[avg_col(i)];
        }
        for j in 0..=n {
            pts_new[j] = x[pt_col(j)];
        }
        StateAF::new(avg_new, pts_new, Layout::Bounded)
    }

    fn check_state(&self, state: &StateAF) -> Result<()> {
        if state.layout != Layout::Bounded || state.n_cells() != self.n_cells {
            return Err(Error::LayoutMismatch(
                "Dirichlet step needs a bounded state on the configured grid".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of a full run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_state: StateAF,
    pub actual_t: f64,
    pub n_steps: usize,
    pub dt: f64,
    pub cfl: f64,
    /// Relative drift of the average sum over the run (periodic runs only).
    pub conservation_drift: Option<f64>,
    /// Set when the scheme is von Neumann unstable at the realized CFL.
    pub stability_warning: Option<String>,
}

/// Number of steps for the time-snapping rule: `dt` is chosen once so the
/// final time is hit exactly with a CFL number at most the target.
pub fn snap_steps(u: f64, t_final: f64, target_cfl: f64, dx: f64) -> usize {
    ((u * t_final) / (target_cfl * dx)).ceil().max(1.0) as usize
}

/// Run a problem to `t_final` with one factorization.
pub fn run(
    problem: &AdvectionProblem,
    grid: &Grid1D,
    scheme: &SchemeId,
    target_cfl: f64,
    t_final: f64,
) -> Result<RunResult> {
    let mask = scheme.resolve()?;
    let layout = match problem.boundary {
        BoundaryCondition::Periodic => Layout::Periodic,
        BoundaryCondition::Dirichlet { .. } => Layout::Bounded,
    };
    let state0 = crate::profile::init_state(grid, &problem.initial, layout)?;
    if t_final <= 0.0 {
        return Ok(RunResult {
            final_state: state0,
            actual_t: 0.0,
            n_steps: 0,
            dt: 0.0,
            cfl: target_cfl,
            conservation_drift: None,
            stability_warning: None,
        });
    }
    let u = problem.speed;
    let dx = grid.dx();
    let n_steps = snap_steps(u, t_final, target_cfl, dx);
    let dt = t_final / n_steps as f64;
    let c = u * dt / dx;
    let weights = build_weights(mask, c)?;
    let stability_warning = match stability::classify_mask(mask, c) {
        stability::Verdict::Unstable => Some(format!(
            "scheme {scheme} is von Neumann unstable at c = {c:.6}; expect growth"
        )),
        _ => None,
    };

    match &problem.boundary {
        BoundaryCondition::Periodic => {
            let system = ImplicitSystem::assemble_periodic(&weights, grid.n_cells())?;
            let sum0 = state0.total_average();
            let mut state = state0;
            for _ in 0..n_steps {
                state = system.step(&state)?;
            }
            let drift = (state.total_average() - sum0).abs() / sum0.abs().max(1.0);
            Ok(RunResult {
                final_state: state,
                actual_t: t_final,
                n_steps,
                dt,
                cfl: c,
                conservation_drift: Some(drift),
                stability_warning,
            })
        }
        BoundaryCondition::Dirichlet { signal } => {
            let resolved = ResolvedSignal::new(
                signal.clone(),
                problem.initial.clone(),
                u,
                grid.x_left(),
                grid.length(),
            );
            let stepper = DirichletStepper::new(StepConfig::new(weights, u, dx, dt)?, grid.n_cells())?;
            let mut state = state0;
            for k in 0..n_steps {
                state = stepper.step_marching(&state, &resolved, k as f64 * dt)?;
            }
            Ok(RunResult {
                final_state: state,
                actual_t: t_final,
                n_steps,
                dt,
                cfl: c,
                conservation_drift: None,
                stability_warning,
            })
        }
    }
}
