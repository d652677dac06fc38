//! Von Neumann stability laboratory: Fourier symbols, amplification
//! eigenvalues, a Schur-type unit-disk test, stability classification over
//! (beta, c), diffusion/dispersion curves and half-widths, large-CFL decay
//! probes, and the update-matrix eigenvalue cross-check.

use crate::error::{Error, Result};
use crate::linalg::complex_quadratic_roots;
use crate::solver1d::ImplicitSystem;
use crate::state::{Layout, StateAF};
use crate::stencil::{build_weights, DofKind, SchemeWeights, StencilMask, TimeLevel};
use num_complex::Complex64;
use rayon::prelude::*;

/// 2x2 symbol matrices of a scheme at one spatial frequency: a Fourier mode
/// pair updates as `A q^{n+1} = B q^n`. Component order is (point, average).
#[derive(Debug, Clone, Copy)]
pub struct FourierSymbol {
    pub beta: f64,
    pub a: [[Complex64; 2]; 2],
    pub b: [[Complex64; 2]; 2],
}

/// Substitute the Fourier ansatz into the residual rows and collect the
/// implicit coefficients into A, the explicit ones into B.
pub fn fourier_symbol(weights: &SchemeWeights, beta: f64) -> FourierSymbol {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; 2]; 2];
    let mut b = [[zero; 2]; 2];
    for (row, terms) in [
        weights.point_residual_terms(),
        weights.avg_residual_terms(),
    ]
    .iter()
    .enumerate()
    {
        for t in terms {
            let phase = Complex64::from_polar(1.0, beta * t.offset as f64);
            let col = match t.kind {
                DofKind::Point => 0,
                DofKind::Avg => 1,
            };
            match t.level {
                TimeLevel::New => a[row][col] += t.coeff * phase,
                TimeLevel::Old => b[row][col] -= t.coeff * phase,
            }
        }
    }
    FourierSymbol { beta, a, b }
}

fn det2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Both amplification factors: the roots of `det(B - z A) = 0`.
pub fn amplification_eigs(sym: &FourierSymbol) -> Result<(Complex64, Complex64)> {
    let det_a = det2(&sym.a);
    let scale = sym
        .a
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        .powi(2);
    if det_a.norm() <= 1e-14 * scale.max(1e-300) {
        return Err(Error::SingularSymbol {
            beta: sym.beta,
            det_a: det_a.norm(),
        });
    }
    let a = &sym.a;
    let b = &sym.b;
    let mixed = a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1];
    Ok(complex_quadratic_roots(det_a, -mixed, det2(b)))
}

/// Closed-form amplification factor of the nonzero eigenvalue of scheme 3D,
/// kept as an independent reference for the symbol machinery. The sign is
/// fixed by consistency (z -> 1 as beta -> 0).
pub fn reference_symbol_3d(c: f64, beta: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let num = 2.0 + beta.cos() - i * c * beta.sin();
    let den = 2.0 - c * c + beta.cos() + c * c * beta.cos() + 2.0 * i * c * beta.sin();
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchurVerdict {
    /// All roots strictly inside the unit disk (beyond the tolerance band).
    pub inside: bool,
    /// Some reduction step was within tolerance of the boundary case, so a
    /// root may lie on (or within `strict_tol` of) the unit circle.
    pub marginal: bool,
}

/// Schur-type recursive unit-disk test: decides whether all roots of the
/// polynomial (coefficients low to high) lie in the unit disk without
/// computing them. Reduction: all roots of p are in the open disk iff
/// `|a_0| < |a_n|` and the same holds for
/// `q(z) = (conj(a_n) p(z) - a_0 p*(z)) / z` with `p*` the reversed
/// conjugate polynomial.
pub fn schur_unit_disk(coeffs: &[Complex64], strict_tol: f64) -> Result<SchurVerdict> {
    let mut p: Vec<Complex64> = coeffs.to_vec();
    // trim trailing (leading-degree) zeros
    while p.len() > 1 && p.last().unwrap().norm() == 0.0 {
        p.pop();
    }
    if p.is_empty() || (p.len() == 1 && p[0].norm() == 0.0) {
        return Err(Error::Config("zero polynomial has no root locus".into()));
    }
    let mut marginal = false;
    while p.len() > 1 {
        let n = p.len() - 1;
        let a0 = p[0];
        let an = p[n];
        let scale = p.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        let gap = an.norm_sqr() - a0.norm_sqr();
        if gap.abs() <= strict_tol * scale * scale {
            marginal = true;
        }
        if gap <= 0.0 {
            // a root on or outside the circle
            return Ok(SchurVerdict {
                inside: false,
                marginal,
            });
        }
        // q = (conj(an) * p - a0 * p*) / z
        let mut q = Vec::with_capacity(n);
        for k in 1..=n {
            q.push(an.conj() * p[k] - a0 * p[n - k].conj());
        }
        while q.len() > 1 && q.last().unwrap().norm() == 0.0 {
            q.pop();
        }
        if q.iter().all(|v| v.norm() == 0.0) {
            // self-inversive remainder: roots on the circle
            return Ok(SchurVerdict {
                inside: false,
                marginal: true,
            });
        }
        p = q;
    }
    Ok(SchurVerdict {
        inside: true,
        marginal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    /// `|z|` within tolerance of 1 on a set of positive measure (more than
    /// 10% of the sampled frequencies) without exceeding it.
    Marginal,
    Unstable,
    /// The interpolation system is singular at this CFL number.
    Singular,
}

pub const DEFAULT_TOL: f64 = 1e-10;

/// Default frequency grid: `pi * k / 1024`, `k = 0..=1024`.
pub fn default_beta_grid() -> Vec<f64> {
    (0..=1024)
        .map(|k| std::f64::consts::PI * k as f64 / 1024.0)
        .collect()
}

/// Fraction of frequency samples within tolerance of `|z| = 1` above which
/// a non-growing scheme is declared marginal.
const MARGINAL_FRACTION: f64 = 0.1;

/// Von Neumann classification of one scheme at one CFL number.
pub fn classify(weights: &SchemeWeights, beta_grid: &[f64], tol: f64) -> Result<Verdict> {
    let mut near_one = 0usize;
    for &beta in beta_grid {
        let sym = fourier_symbol(weights, beta);
        let (z1, z2) = amplification_eigs(&sym)?;
        let m = z1.norm().max(z2.norm());
        if m > 1.0 + tol {
            return Ok(Verdict::Unstable);
        }
        if (m - 1.0).abs() <= tol {
            near_one += 1;
        }
    }
    if near_one as f64 > MARGINAL_FRACTION * beta_grid.len() as f64 {
        Ok(Verdict::Marginal)
    } else {
        Ok(Verdict::Stable)
    }
}

/// Classification of a mask at one CFL number on the default grids.
pub fn classify_mask(mask: StencilMask, c: f64) -> Verdict {
    match build_weights(mask, c) {
        Err(_) => Verdict::Singular,
        Ok(w) => classify(&w, &default_beta_grid(), DEFAULT_TOL).unwrap_or(Verdict::Singular),
    }
}

/// Per-scheme scan result over a CFL grid.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub scheme: String,
    pub verdicts: Vec<(f64, Verdict)>,
    /// Smallest scanned c above which no sampled verdict is unstable or
    /// singular; 0 when that holds on the whole grid. Only reported for
    /// schemes that are not marginal overall.
    pub c_min: Option<f64>,
    /// Maximal non-growing (stable or marginal) intervals of the scan grid.
    pub windows: Vec<(f64, f64)>,
    /// Marginal at the majority of scanned CFL numbers.
    pub marginal: bool,
}

/// Default CFL grid: `0.05 * k`, `k = 1..=200`.
pub fn default_c_grid() -> Vec<f64> {
    (1..=200).map(|k| 0.05 * k as f64).collect()
}

pub fn scan_cmin(mask: StencilMask, c_grid: &[f64]) -> StabilityReport {
    let verdicts: Vec<(f64, Verdict)> = c_grid
        .par_iter()
        .map(|&c| (c, classify_mask(mask, c)))
        .collect();

    let n_checked = verdicts
        .iter()
        .filter(|(_, v)| *v != Verdict::Singular)
        .count();
    let n_marginal = verdicts
        .iter()
        .filter(|(_, v)| *v == Verdict::Marginal)
        .count();
    let marginal = n_checked > 0 && n_marginal * 2 > n_checked;

    let ok = |v: Verdict| matches!(v, Verdict::Stable | Verdict::Marginal);

    // windows of consecutive non-growing verdicts
    let mut windows = Vec::new();
    let mut start: Option<f64> = None;
    for &(c, v) in &verdicts {
        match (ok(v), start) {
            (true, None) => start = Some(c),
            (false, Some(s)) => {
                windows.push((s, c));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        windows.push((s, *c_grid.last().unwrap()));
    }

    let c_min = if marginal {
        None
    } else {
        let mut cm = None;
        for k in (0..verdicts.len()).rev() {
            if ok(verdicts[k].1) {
                cm = Some(verdicts[k].0);
            } else {
                break;
            }
        }
        // stable on the entire grid counts as unconditional
        cm.map(|c| if c == verdicts[0].0 { 0.0 } else { c })
    };

    StabilityReport {
        scheme: mask.to_string(),
        verdicts,
        c_min,
        windows,
        marginal,
    }
}

/// One scheme's diffusion and dispersion content at a fixed CFL number.
#[derive(Debug, Clone)]
pub struct DiffusionDispersionCurve {
    pub cfl: f64,
    pub beta: Vec<f64>,
    /// `|z|` of the physical eigenvalue (diffusion).
    pub abs_z: Vec<f64>,
    /// `arg(z) / (-beta c)` of the physical eigenvalue (dispersion); 1 at
    /// beta = 0 by the consistency limit.
    pub dispersion: Vec<f64>,
    /// `|z|` of the spurious eigenvalue.
    pub abs_z_spurious: Vec<f64>,
    /// Smallest frequency where the diffusion curve crosses the half-decay
    /// level; pi when it never does.
    pub beta_half: f64,
    /// Branch tracking hit an eigenvalue collision and fell back to the
    /// larger-magnitude branch.
    pub branch_fallback: bool,
}

/// Decay level whose half-width is measured: a mode at this `|z|` has
/// decayed by half after the reference run of 400/3 steps.
pub const HALF_DECAY_LEVEL: f64 = 0.995;

/// Trace the physical eigenvalue (the branch continuous from z = 1 at
/// beta = 0) across the frequency grid.
pub fn curves(weights: &SchemeWeights, beta_grid: &[f64]) -> Result<DiffusionDispersionCurve> {
    let c = weights.cfl;
    let mut abs_z = Vec::with_capacity(beta_grid.len());
    let mut abs_sp = Vec::with_capacity(beta_grid.len());
    let mut dispersion = Vec::with_capacity(beta_grid.len());
    let mut z_prev = Complex64::new(1.0, 0.0);
    let mut fallback = false;
    for &beta in beta_grid {
        let (z1, z2) = amplification_eigs(&fourier_symbol(weights, beta))?;
        let d1 = (z1 - z_prev).norm();
        let d2 = (z2 - z_prev).norm();
        let collision = (d1 - d2).abs() <= 1e-12 * (d1 + d2).max(1e-30) && z1 != z2;
        let (phys, spur) = if collision {
            fallback = true;
            if z1.norm() >= z2.norm() {
                (z1, z2)
            } else {
                (z2, z1)
            }
        } else if d1 <= d2 {
            (z1, z2)
        } else {
            (z2, z1)
        };
        z_prev = phys;
        abs_z.push(phys.norm());
        abs_sp.push(spur.norm());
        dispersion.push(if beta == 0.0 {
            1.0
        } else {
            phys.arg() / (-beta * c)
        });
    }
    // first downward crossing of the half-decay level, linearly interpolated
    let mut beta_half = std::f64::consts::PI;
    for k in 1..beta_grid.len() {
        if abs_z[k] < HALF_DECAY_LEVEL && abs_z[k - 1] >= HALF_DECAY_LEVEL {
            let t = (abs_z[k - 1] - HALF_DECAY_LEVEL) / (abs_z[k - 1] - abs_z[k]);
            beta_half = beta_grid[k - 1] + t * (beta_grid[k] - beta_grid[k - 1]);
            break;
        }
    }
    Ok(DiffusionDispersionCurve {
        cfl: c,
        beta: beta_grid.to_vec(),
        abs_z,
        dispersion,
        abs_z_spurious: abs_sp,
        beta_half,
        branch_fallback: fallback,
    })
}

/// Probe the large-CFL decay of the amplification eigenvalues at one
/// nonzero frequency: true when `max |z|` is below 1e-2 at c = 1e3 and
/// still smaller at c = 1e6.
pub fn l_stability_probe(mask: StencilMask, beta: f64) -> Result<bool> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Config(
            "decay probe needs a nonzero frequency (the constant mode never decays)".into(),
        ));
    }
    let mut mags = [0.0f64; 2];
    for (slot, c) in [(0usize, 1e3), (1usize, 1e6)] {
        let w = build_weights(mask, c)?;
        let (z1, z2) = amplification_eigs(&fourier_symbol(&w, beta))?;
        mags[slot] = z1.norm().max(z2.norm());
    }
    Ok(mags[0] < 1e-2 && mags[1] < 1e-2 && mags[1] < mags[0])
}

/// Spectral radius of the full periodic one-step update matrix on an
/// N-cell grid, built by applying the factorized solver to unit states.
pub fn matrix_stability(mask: StencilMask, c: f64, n_cells: usize) -> Result<f64> {
    let weights = build_weights(mask, c)?;
    let system = ImplicitSystem::assemble_periodic(&weights, n_cells)?;
    let dim = 2 * n_cells;
    let mut dense = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    for j in 0..dim {
        let mut state = StateAF::zeros(n_cells, Layout::Periodic);
        // unit vector in the solver's unknown ordering
        if j % 2 == 0 {
            state.points[j / 2] = 1.0;
        } else {
            state.averages[j / 2] = 1.0;
        }
        let next = system.step(&state)?;
        for i in 0..n_cells {
            dense[(2 * i, j)] = next.points[i];
            dense[(2 * i + 1, j)] = next.averages[i];
        }
    }
    let radius = dense
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn weights_for(mask: &str, c: f64) -> SchemeWeights {
        build_weights(mask.parse().unwrap(), c).unwrap()
    }

    #[test]
    fn constants_are_steady_at_beta_zero() {
        for mask in crate::stencil::all_masks() {
            let Ok(w) = build_weights(mask, 2.5) else {
                continue;
            };
            let sym = fourier_symbol(&w, 0.0);
            // A (1,1)^T = B (1,1)^T: constants solve the scheme exactly
            for row in 0..2 {
                let lhs = sym.a[row][0] + sym.a[row][1];
                let rhs = sym.b[row][0] + sym.b[row][1];
                assert!((lhs - rhs).norm() < 1e-12, "mask {mask} row {row}");
            }
            let (z1, z2) = amplification_eigs(&sym).unwrap();
            let close = (z1 - 1.0).norm().min((z2 - 1.0).norm());
            assert!(close < 1e-12, "mask {mask}: eigenvalue 1 missing at beta=0");
        }
    }

    #[test]
    fn diagonal_symbol_eigenvalues() {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let sym = FourierSymbol {
            beta: 0.3,
            a: [[o, z], [z, o]],
            b: [[0.5 * o, z], [z, 0.25 * o]],
        };
        let (z1, z2) = amplification_eigs(&sym).unwrap();
        let mut got = [z1.re, z2.re];
        got.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(got[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(got[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn scheme_3d_has_zero_spurious_eigenvalue_and_reference_branch() {
        let mask = crate::stencil::appendix::named_mask("3D").unwrap();
        for &c in &[1.5, 3.0, 5.0] {
            let w = build_weights(mask, c).unwrap();
            for k in 1..=16 {
                let beta = PI * k as f64 / 16.0;
                let (z1, z2) = amplification_eigs(&fourier_symbol(&w, beta)).unwrap();
                let (phys, spur) = if z1.norm() >= z2.norm() { (z1, z2) } else { (z2, z1) };
                assert!(spur.norm() < 1e-12, "spurious eigenvalue not zero");
                let reference = reference_symbol_3d(c, beta);
                assert!(
                    (phys - reference).norm() <= 1e-10 * reference.norm().max(1.0),
                    "c={c} beta={beta}: {phys} vs {reference}"
                );
            }
        }
    }

    #[test]
    fn scheme_3d_value_at_quarter_frequency() {
        // c = 3, beta = pi/2: nonzero eigenvalue is -(32 - 9i)/85
        let w = weights_for("001|011", 3.0);
        let (z1, z2) = amplification_eigs(&fourier_symbol(&w, PI / 2.0)).unwrap();
        let phys = if z1.norm() >= z2.norm() { z1 } else { z2 };
        let expect = Complex64::new(-32.0 / 85.0, 9.0 / 85.0);
        assert!((phys - expect).norm() < 1e-12);
        assert_abs_diff_eq!(phys.norm(), (1105.0f64).sqrt() / 85.0, epsilon = 1e-12);
    }

    #[test]
    fn schur_examples() {
        let o = |re: f64| Complex64::new(re, 0.0);
        // p(z) = z: root at the origin
        let v = schur_unit_disk(&[o(0.0), o(1.0)], 1e-9).unwrap();
        assert!(v.inside && !v.marginal);
        // p(z) = z - 1: root on the circle
        let v = schur_unit_disk(&[o(-1.0), o(1.0)], 1e-9).unwrap();
        assert!(!v.inside && v.marginal);
        // p(z) = z^2 - 2.5 z + 1: roots 0.5 and 2
        let v = schur_unit_disk(&[o(1.0), o(-2.5), o(1.0)], 1e-9).unwrap();
        assert!(!v.inside);
        // zero polynomial is rejected
        assert!(schur_unit_disk(&[o(0.0)], 1e-9).is_err());
    }

    #[test]
    fn classification_anchors() {
        let id = |name: &str| crate::stencil::appendix::named_mask(name).unwrap();
        assert_eq!(classify_mask(id("4A"), 0.5), Verdict::Stable);
        assert_eq!(classify_mask(id("4A"), 9.5), Verdict::Stable);
        assert_eq!(classify_mask(id("3H"), 3.0), Verdict::Unstable);
        assert_eq!(classify_mask(id("3H"), 5.0), Verdict::Stable);
        assert_eq!(classify_mask(id("4D"), 3.0), Verdict::Marginal);
    }

    #[test]
    fn scan_reports_published_thresholds() {
        let grid = default_c_grid();
        let scan = |name: &str| scan_cmin(crate::stencil::appendix::named_mask(name).unwrap(), &grid);
        let g = scan("3G");
        assert!((g.c_min.unwrap() - 3.74).abs() <= 0.05, "3G: {:?}", g.c_min);
        let i = scan("3I");
        assert!((i.c_min.unwrap() - 4.74).abs() <= 0.05, "3I: {:?}", i.c_min);
        let a = scan("4A");
        assert_eq!(a.c_min, Some(0.0), "4A unconditional");
        let d = scan("4D");
        assert!(d.marginal && d.c_min.is_none());
    }

    #[test]
    fn windowed_scheme_reports_interval_gap() {
        // 3E is stable below 1 and above 2 but not in between
        let grid = default_c_grid();
        let rep = scan_cmin(crate::stencil::appendix::named_mask("3E").unwrap(), &grid);
        assert!((rep.c_min.unwrap() - 2.0).abs() <= 0.051, "{:?}", rep.c_min);
        assert!(rep.windows.len() >= 2, "windows: {:?}", rep.windows);
        assert!(
            rep.verdicts
                .iter()
                .any(|&(c, v)| c > 1.0 && c < 2.0 && v == Verdict::Unstable),
            "no instability found inside (1, 2)"
        );
        assert!(
            rep.verdicts
                .iter()
                .filter(|&&(c, _)| c <= 0.9)
                .all(|&(_, v)| v == Verdict::Stable),
            "low-CFL window missing"
        );
    }

    #[test]
    fn half_width_anchors() {
        let betas = default_beta_grid();
        let c3 = curves(&weights_for("010|011", 3.0), &betas).unwrap();
        assert!((c3.beta_half - 0.31).abs() <= 0.03, "3C: {}", c3.beta_half);
        let mask5c = crate::stencil::appendix::named_mask("5C").unwrap();
        let c5 = curves(&build_weights(mask5c, 3.0).unwrap(), &betas).unwrap();
        assert!((c5.beta_half - 0.75).abs() <= 0.05, "5C: {}", c5.beta_half);
        let mask4d = crate::stencil::appendix::named_mask("4D").unwrap();
        let c4 = curves(&build_weights(mask4d, 3.0).unwrap(), &betas).unwrap();
        assert_eq!(c4.beta_half, PI);
        for v in &c4.abs_z {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn decay_probe_separates_marginal_scheme() {
        let reg = crate::stencil::appendix::named_scheme_masks().unwrap();
        for (id, &mask) in reg {
            let expect = id != "4D";
            assert_eq!(
                l_stability_probe(mask, 1.0).unwrap(),
                expect,
                "scheme {id}"
            );
        }
        assert!(l_stability_probe(reg["3C"], 0.0).is_err());
    }

    #[test]
    fn matrix_radius_matches_fourier_anchors() {
        let id = |name: &str| crate::stencil::appendix::named_mask(name).unwrap();
        for c in [1.0, 4.0, 10.0] {
            let r = matrix_stability(id("4A"), c, 100).unwrap();
            assert!(r <= 1.0 + 1e-8, "4A c={c}: {r}");
        }
        let r = matrix_stability(id("3H"), 3.0, 100).unwrap();
        assert!(r > 1.0, "3H at c=3 should grow, radius {r}");
    }

    #[test]
    fn matrix_and_fourier_verdicts_agree_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let masks = crate::stencil::all_masks();
        let mut checked = 0;
        while checked < 20 {
            let mask = masks[rng.gen_range(0..masks.len())];
            let c = 0.5 + 9.0 * rng.gen::<f64>();
            let Ok(w) = build_weights(mask, c) else {
                continue;
            };
            let fourier_ok =
                classify(&w, &default_beta_grid(), DEFAULT_TOL).unwrap() != Verdict::Unstable;
            let radius = matrix_stability(mask, c, 50).unwrap();
            let matrix_ok = radius <= 1.0 + 1e-8;
            assert_eq!(fourier_ok, matrix_ok, "mask {mask} c={c} radius={radius}");
            checked += 1;
        }
    }

    proptest! {
        // conjugate symmetry: |z|(beta) is even in beta
        #[test]
        fn diffusion_even_in_beta(beta in 0.01f64..3.1) {
            let w = weights_for("010|011", 3.0);
            let zp = amplification_eigs(&fourier_symbol(&w, beta)).unwrap();
            let zm = amplification_eigs(&fourier_symbol(&w, -beta)).unwrap();
            let mp = zp.0.norm().max(zp.1.norm());
            let mm = zm.0.norm().max(zm.1.norm());
            prop_assert!((mp - mm).abs() < 1e-12);
        }

        // the unit-disk test agrees with direct root finding away from the circle
        #[test]
        fn schur_agrees_with_direct_roots(
            ar in -2.0..2.0f64, ai in -2.0..2.0f64,
            br in -2.0..2.0f64, bi in -2.0..2.0f64,
            cr in -2.0..2.0f64, ci in -2.0..2.0f64,
        ) {
            let a = Complex64::new(ar, ai);
            prop_assume!(a.norm() > 1e-2);
            let b = Complex64::new(br, bi);
            let c = Complex64::new(cr, ci);
            let (z1, z2) = complex_quadratic_roots(a, b, c);
            let margin = (z1.norm() - 1.0).abs().min((z2.norm() - 1.0).abs());
            prop_assume!(margin > 1e-6);
            let inside = z1.norm() < 1.0 && z2.norm() < 1.0;
            let v = schur_unit_disk(&[c, b, a], 1e-12).unwrap();
            prop_assert_eq!(v.inside, inside);
        }
    }
}
