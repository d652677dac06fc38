//! Scheme synthesis from stencil masks.
//!
//! A scheme is defined by which of the six interface-adjacent degrees of
//! freedom enter the reconstruction-in-time polynomial at an interface. In
//! normalized time `tau = (t - t^n) / dt` the six candidate interpolation
//! conditions at interface `i+1/2` are, in fixed DOF order:
//!
//! | k | DOF                  | condition on p(tau)                      |
//! |---|----------------------|------------------------------------------|
//! | 0 | avg_i^n              | c * int_{0}^{1/c} p = avg_i^n            |
//! | 1 | point_{i+1/2}^n      | p(0) = point^n                           |
//! | 2 | avg_{i+1}^n          | c * int_{-1/c}^{0} p = avg_{i+1}^n       |
//! | 3 | avg_i^{n+1}          | c * int_{1}^{1+1/c} p = avg_i^{n+1}      |
//! | 4 | point_{i+1/2}^{n+1}  | p(1) = point^{n+1}                       |
//! | 5 | avg_{i+1}^{n+1}      | c * int_{1-1/c}^{1} p = avg_{i+1}^{n+1}  |
//!
//! Selecting m of them pins a degree-(m-1) polynomial; the point update is
//! p(1 - 1/c) (the characteristic traced back from the next interface) and
//! the flux weight vector is int_0^1 p.

pub mod appendix;

use crate::error::{Error, Result};
use crate::linalg::{condition_inf, DenseLu, DenseMatrix};
use std::fmt;
use std::str::FromStr;

pub const N_DOFS: usize = 6;

/// Threshold on the interpolation-system condition number beyond which a
/// CFL number is treated as singular for the mask.
pub const SINGULAR_COND_LIMIT: f64 = 1e12;

/// Selection of interface DOFs, ordered
/// `[avg_i^n, point^n, avg_{i+1}^n, avg_i^{n+1}, point^{n+1}, avg_{i+1}^{n+1}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StencilMask {
    pub flags: [bool; N_DOFS],
}

impl StencilMask {
    pub fn new(flags: [bool; N_DOFS]) -> Result<Self> {
        let m = flags.iter().filter(|&&f| f).count();
        if !(3..=6).contains(&m) {
            return Err(Error::Config(format!(
                "stencil mask must select 3..=6 DOFs, got {m}"
            )));
        }
        Ok(Self { flags })
    }

    /// Number of selected DOFs; equals the scheme's order of accuracy.
    pub fn order(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn uses(&self, k: usize) -> bool {
        self.flags[k]
    }

    /// Explicit downwind average, condition (k = 2).
    pub fn uses_explicit_downwind_avg(&self) -> bool {
        self.flags[2]
    }

    /// Implicit downwind average, condition (k = 5).
    pub fn uses_implicit_downwind_avg(&self) -> bool {
        self.flags[5]
    }

    pub fn selected(&self) -> Vec<usize> {
        (0..N_DOFS).filter(|&k| self.flags[k]).collect()
    }
}

impl fmt::Display for StencilMask {
    /// Mask string `eee|iii`: explicit then implicit flags in DOF order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |v: bool| if v { '1' } else { '0' };
        write!(
            f,
            "{}{}{}|{}{}{}",
            b(self.flags[0]),
            b(self.flags[1]),
            b(self.flags[2]),
            b(self.flags[3]),
            b(self.flags[4]),
            b(self.flags[5])
        )
    }
}

impl FromStr for StencilMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes: Vec<char> = s.chars().collect();
        if bytes.len() != 7 || bytes[3] != '|' {
            return Err(Error::Config(format!(
                "mask string must look like 'eee|iii', got {s:?}"
            )));
        }
        let mut flags = [false; N_DOFS];
        for (slot, &ch) in [0, 1, 2].iter().zip(&bytes[0..3]) {
            flags[*slot] = parse_flag(ch, s)?;
        }
        for (slot, &ch) in [3, 4, 5].iter().zip(&bytes[4..7]) {
            flags[*slot] = parse_flag(ch, s)?;
        }
        StencilMask::new(flags)
    }
}

fn parse_flag(ch: char, s: &str) -> Result<bool> {
    match ch {
        '0' => Ok(false),
        '1' => Ok(true),
        _ => Err(Error::Config(format!("bad flag {ch:?} in mask {s:?}"))),
    }
}

/// All masks of the given order, in lexicographic order of the mask string.
pub fn enumerate_masks(order: usize) -> Result<Vec<StencilMask>> {
    if !(3..=6).contains(&order) {
        return Err(Error::Config(format!(
            "scheme order must be 3..=6, got {order}"
        )));
    }
    let mut out = Vec::new();
    for bits in 0..(1usize << N_DOFS) {
        if bits.count_ones() as usize != order {
            continue;
        }
        let mut flags = [false; N_DOFS];
        for (k, f) in flags.iter_mut().enumerate() {
            *f = bits & (1 << k) != 0;
        }
        out.push(StencilMask { flags });
    }
    out.sort_by_key(|m| m.to_string());
    Ok(out)
}

/// All 42 masks (orders 3 through 6).
pub fn all_masks() -> Vec<StencilMask> {
    (3..=6).flat_map(|o| enumerate_masks(o).unwrap()).collect()
}

/// Row of the interpolation matrix for condition `k`: the linear functional
/// applied to the monomials `tau^p`, `p = 0..m`.
fn condition_row(k: usize, c: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|p| {
            let pf = (p + 1) as f64;
            match k {
                0 => c.powi(-(p as i32)) / pf,
                1 => {
                    if p == 0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                2 => (-1.0f64).powi(p as i32) * c.powi(-(p as i32)) / pf,
                3 => c * ((1.0 + 1.0 / c).powi(p as i32 + 1) - 1.0) / pf,
                4 => 1.0,
                5 => c * (1.0 - (1.0 - 1.0 / c).powi(p as i32 + 1)) / pf,
                _ => unreachable!(),
            }
        })
        .collect()
}

/// Linear-functional weights of the six DOFs in the point update and the
/// interface flux, for one mask at one CFL number.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeWeights {
    pub mask: StencilMask,
    pub cfl: f64,
    /// Point update: `point_{i+3/2}^{n+1} = sum_k w_point[k] * dof_k`.
    pub w_point: [f64; N_DOFS],
    /// Flux: `(1/u) * fhat_{i+1/2} = sum_k w_flux[k] * dof_k`.
    pub w_flux: [f64; N_DOFS],
    pub condition_number: f64,
}

/// Solve the interpolation system and derive the update weights.
pub fn build_weights(mask: StencilMask, c: f64) -> Result<SchemeWeights> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Config(format!("CFL number must be positive, got {c}")));
    }
    let sel = mask.selected();
    let m = sel.len();
    let rows: Vec<Vec<f64>> = sel.iter().map(|&k| condition_row(k, c, m)).collect();
    let mat = DenseMatrix::from_rows(&rows);
    let singular = |cond: f64| Error::SingularCfl {
        mask: mask.to_string(),
        cfl: c,
        cond,
    };
    let cond = condition_inf(&mat).map_err(|_| singular(f64::INFINITY))?;
    if !cond.is_finite() || cond > SINGULAR_COND_LIMIT {
        return Err(singular(cond));
    }
    // weights solve M^T w = phi: w_k are coefficients of the DOFs in the
    // linear functional phi applied to the interpolant
    let mut mt = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            mt.set(i, j, mat.get(j, i));
        }
    }
    let lu = DenseLu::factor(&mt).map_err(|_| singular(cond))?;
    let tau_star = 1.0 - 1.0 / c;
    let phi: Vec<f64> = (0..m).map(|p| tau_star.powi(p as i32)).collect();
    let psi: Vec<f64> = (0..m).map(|p| 1.0 / (p + 1) as f64).collect();
    let wp = lu.solve(&phi);
    let wf = lu.solve(&psi);
    let mut w_point = [0.0; N_DOFS];
    let mut w_flux = [0.0; N_DOFS];
    for (slot, &k) in sel.iter().enumerate() {
        w_point[k] = wp[slot];
        w_flux[k] = wf[slot];
    }
    Ok(SchemeWeights {
        mask,
        cfl: c,
        w_point,
        w_flux,
        condition_number: cond,
    })
}

/// Which of the two DOF families a residual term touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Point,
    Avg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeLevel {
    Old,
    New,
}

/// One term of a residual row: `coeff * value(pair i + offset, kind, level)`,
/// where pair `i` couples `point_{i+1/2}` and `avg_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTerm {
    pub offset: i64,
    pub kind: DofKind,
    pub level: TimeLevel,
    pub coeff: f64,
}

fn term(offset: i64, kind: DofKind, level: TimeLevel, coeff: f64) -> ResidualTerm {
    ResidualTerm {
        offset,
        kind,
        level,
        coeff,
    }
}

impl SchemeWeights {
    /// Residual of the point update at interface `i+1/2`:
    /// `point_{i+3/2}^{n+1} - sum w_point * dofs = 0`.
    pub fn point_residual_terms(&self) -> Vec<ResidualTerm> {
        use DofKind::*;
        use TimeLevel::*;
        let w = &self.w_point;
        vec![
            term(1, Point, New, 1.0),
            term(0, Avg, Old, -w[0]),
            term(0, Point, Old, -w[1]),
            term(1, Avg, Old, -w[2]),
            term(0, Avg, New, -w[3]),
            term(0, Point, New, -w[4]),
            term(1, Avg, New, -w[5]),
        ]
    }

    /// Residual of the average update at cell `i`:
    /// `avg_i^{n+1} - avg_i^n + c * (flux_{i+1/2} - flux_{i-1/2}) = 0`.
    pub fn avg_residual_terms(&self) -> Vec<ResidualTerm> {
        use DofKind::*;
        use TimeLevel::*;
        let v = &self.w_flux;
        let c = self.cfl;
        let mut out = vec![term(0, Avg, New, 1.0), term(0, Avg, Old, -1.0)];
        for (sign, shift) in [(c, 0i64), (-c, -1i64)] {
            out.push(term(shift, Avg, Old, sign * v[0]));
            out.push(term(shift, Point, Old, sign * v[1]));
            out.push(term(shift + 1, Avg, Old, sign * v[2]));
            out.push(term(shift, Avg, New, sign * v[3]));
            out.push(term(shift, Point, New, sign * v[4]));
            out.push(term(shift + 1, Avg, New, sign * v[5]));
        }
        out
    }

    /// Point residual flattened to the 7-slot vector
    /// `[avg_i^n, pt^n, avg_{i+1}^n, avg_i^{n+1}, pt^{n+1}, avg_{i+1}^{n+1}, pt_{i+3/2}^{n+1}]`.
    pub fn point_residual_vector(&self) -> [f64; 7] {
        let mut out = [0.0; 7];
        for t in self.point_residual_terms() {
            let slot = match (t.offset, t.kind, t.level) {
                (0, DofKind::Avg, TimeLevel::Old) => 0,
                (0, DofKind::Point, TimeLevel::Old) => 1,
                (1, DofKind::Avg, TimeLevel::Old) => 2,
                (0, DofKind::Avg, TimeLevel::New) => 3,
                (0, DofKind::Point, TimeLevel::New) => 4,
                (1, DofKind::Avg, TimeLevel::New) => 5,
                (1, DofKind::Point, TimeLevel::New) => 6,
                other => unreachable!("unexpected point-residual slot {other:?}"),
            };
            out[slot] += t.coeff;
        }
        out
    }

    /// Average residual flattened to the 10-slot vector over
    /// `[avg_{i-1}, pt_{i-1/2}, avg_i, pt_{i+1/2}, avg_{i+1}]` at level n
    /// followed by the same five at level n+1.
    pub fn avg_residual_vector(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        for t in self.avg_residual_terms() {
            let base = match t.level {
                TimeLevel::Old => 0,
                TimeLevel::New => 5,
            };
            let slot = match (t.offset, t.kind) {
                (-1, DofKind::Avg) => 0,
                (-1, DofKind::Point) => 1,
                (0, DofKind::Avg) => 2,
                (0, DofKind::Point) => 3,
                (1, DofKind::Avg) => 4,
                other => unreachable!("unexpected avg-residual slot {other:?}"),
            };
            out[base + slot] += t.coeff;
        }
        out
    }
}

/// Scheme selector: a named identifier from the published tables or a raw
/// stencil mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeId {
    Named(String),
    Mask(StencilMask),
}

impl SchemeId {
    /// Resolve to a concrete mask, going through the matching-derived
    /// registry for named identifiers.
    pub fn resolve(&self) -> Result<StencilMask> {
        match self {
            SchemeId::Mask(m) => Ok(*m),
            SchemeId::Named(name) => appendix::named_mask(name),
        }
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.contains('|') {
            Ok(SchemeId::Mask(s.parse()?))
        } else {
            Ok(SchemeId::Named(s.to_ascii_uppercase()))
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeId::Named(n) => write!(f, "{n}"),
            SchemeId::Mask(m) => write!(f, "{m}"),
        }
    }
}
