//! Direct linear solvers: dense LU, banded LU with partial pivoting, and a
//! cyclic-banded solver via the Woodbury correction.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Dense row-major matrix, just large enough for the solves in this crate.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n_cols);
            m.data[i * n_cols..(i + 1) * n_cols].copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| {
                let row = &self.data[i * self.n_cols..(i + 1) * self.n_cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Max-abs row sum (the operator infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n_rows)
            .map(|i| {
                self.data[i * self.n_cols..(i + 1) * self.n_cols]
                    .iter()
                    .map(|v| v.abs())
                    .sum()
            })
            .fold(0.0, f64::max)
    }
}

/// LU factorization with partial pivoting of a square dense matrix.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    pivots: Vec<usize>,
}

impl DenseLu {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        assert_eq!(m.n_rows, m.n_cols);
        let n = m.n_rows;
        let mut lu = m.data.clone();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem(format!(
                    "zero pivot in dense LU at column {k}"
                )));
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
            }
            let piv = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / piv;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, pivots })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.pivots[k]);
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..n {
                    b[i] -= self.lu[i * n + k] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            b[k] /= self.lu[k * n + k];
            let bk = b[k];
            if bk != 0.0 {
                for i in 0..k {
                    b[i] -= self.lu[i * n + k] * bk;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Inverse, column by column.
    pub fn inverse(&self) -> DenseMatrix {
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut col = vec![0.0; n];
        for j in 0..n {
            col.iter_mut().for_each(|v| *v = 0.0);
            col[j] = 1.0;
            self.solve_in_place(&mut col);
            for i in 0..n {
                inv.set(i, j, col[i]);
            }
        }
        inv
    }
}

/// Infinity-norm condition number estimate via the explicit inverse
/// (matrices here are at most 6x6).
pub fn condition_inf(m: &DenseMatrix) -> Result<f64> {
    let lu = DenseLu::factor(m)?;
    Ok(m.norm_inf() * lu.inverse().norm_inf())
}

/// Band storage in LAPACK `gbtrf` convention: entry `(i, j)` of the full
/// matrix lives at `ab[kl + ku + i - j][j]`; the leading `kl` rows hold the
/// fill-in produced by partial pivoting.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    ab: Vec<f64>, // (2*kl + ku + 1) x n, row-major
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            ab: vec![0.0; (2 * kl + ku + 1) * n],
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) * self.n + j
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j <= i + self.ku && i <= j + self.kl
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.ab[self.idx(i, j)]
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n) {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }
}

/// LU factorization of a banded matrix with partial pivoting. After the
/// factorization U has bandwidth `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(m: &BandedMatrix) -> Result<Self> {
        let (n, kl, ku) = (m.n, m.kl, m.ku);
        let kv = kl + ku; // upper bandwidth after pivoting
        let rows = 2 * kl + ku + 1;
        let mut ab = m.ab.clone();
        let mut pivots = vec![0usize; n];
        let at = |r: usize, c: usize| r * n + c;
        for j in 0..n {
            // pivot search within the column's band
            let i_max = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = ab[at(kv + kl, j)].abs(); // row j: kl+ku + j - j = kv, plus kl offset
            for i in j + 1..=i_max {
                let v = ab[at(kl + kv + i - j, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem(format!(
                    "zero pivot in banded LU at column {j}"
                )));
            }
            pivots[j] = p;
            if p != j {
                // swap rows j and p across the band columns they share
                for c in j..(j + kv + 1).min(n) {
                    let rj = at(kl + kv + j - c, c);
                    let rp = at(kl + kv + p - c, c);
                    debug_assert!(kl + kv + j >= c && kl + kv + j - c < rows);
                    debug_assert!(kl + kv + p >= c && kl + kv + p - c < rows);
                    ab.swap(rj, rp);
                }
            }
            let piv = ab[at(kv + kl, j)];
            for i in j + 1..=i_max {
                let r = at(kl + kv + i - j, j);
                let f = ab[r] / piv;
                ab[r] = f;
                if f != 0.0 {
                    for c in j + 1..(j + kv + 1).min(n) {
                        let ru = at(kl + kv + j - c, c);
                        let ri = at(kl + kv + i - c, c);
                        ab[ri] -= f * ab[ru];
                    }
                }
            }
        }
        Ok(Self {
            n,
            kl,
            ku,
            ab,
            pivots,
        })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl) = (self.n, self.kl);
        let kv = kl + self.ku;
        assert_eq!(b.len(), n);
        let at = |r: usize, c: usize| r * n + c;
        for j in 0..n {
            b.swap(j, self.pivots[j]);
            let bj = b[j];
            if bj != 0.0 {
                for i in j + 1..=(j + kl).min(n - 1) {
                    b[i] -= self.ab[at(kl + kv + i - j, j)] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[at(kl + kv, j)];
            let bj = b[j];
            if bj != 0.0 {
                let lo = j.saturating_sub(kv);
                for i in lo..j {
                    b[i] -= self.ab[at(kl + kv + i - j, j)] * bj;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Sparse description of a square system: band entries plus a few entries
/// outside the band (the periodic wrap-around corners).
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub n: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries {
            m.add(i, j, v);
        }
        m
    }
}

enum CyclicInner {
    /// Banded core plus Woodbury correction for the corner entries:
    /// `A = B + U V^T`, with `U` columns `v_k e_{r_k}` and `V` columns `e_{c_k}`.
    Woodbury {
        band: BandedLu,
        corner_cols: Vec<usize>,
        w: Vec<Vec<f64>>, // B^{-1} U, one vector per corner entry
        small: DenseLu,   // LU of I + V^T B^{-1} U
    },
    Dense(DenseLu),
}

/// Factor-once solver for banded systems with wrap-around corner entries.
/// Falls back to a dense factorization when the banded core is singular or
/// the Woodbury correction is ill-posed.
pub struct CyclicBandedLu {
    n: usize,
    inner: CyclicInner,
}

impl CyclicBandedLu {
    pub fn factor(sys: &SparseSystem, kl: usize, ku: usize) -> Result<Self> {
        let n = sys.n;
        let mut band = BandedMatrix::zeros(n, kl, ku);
        let mut corners: Vec<(usize, usize, f64)> = Vec::new();
        for &(i, j, v) in &sys.entries {
            if band.in_band(i, j) {
                band.add(i, j, v);
            } else {
                corners.push((i, j, v));
            }
        }
        // merge duplicate corner positions
        corners.sort_by_key(|&(i, j, _)| (i, j));
        corners.dedup_by(|a, b| {
            if a.0 == b.0 && a.1 == b.1 {
                b.2 += a.2;
                true
            } else {
                false
            }
        });
        corners.retain(|&(_, _, v)| v != 0.0);

        let attempt = (|| -> Result<CyclicInner> {
            let blu = BandedLu::factor(&band)?;
            let k = corners.len();
            let mut w = Vec::with_capacity(k);
            let mut corner_cols = Vec::with_capacity(k);
            for &(r, c, v) in &corners {
                let mut u = vec![0.0; n];
                u[r] = v;
                blu.solve_in_place(&mut u);
                w.push(u);
                corner_cols.push(c);
            }
            // S = I + V^T W
            let mut s = DenseMatrix::zeros(k, k);
            for a in 0..k {
                for b in 0..k {
                    let mut v = if a == b { 1.0 } else { 0.0 };
                    v += w[b][corner_cols[a]];
                    s.set(a, b, v);
                }
            }
            let small = DenseLu::factor(&s)?;
            Ok(CyclicInner::Woodbury {
                band: blu,
                corner_cols,
                w,
                small,
            })
        })();

        let inner = match attempt {
            Ok(inner) => inner,
            Err(_) => CyclicInner::Dense(DenseLu::factor(&sys.to_dense())?),
        };
        Ok(Self { n, inner })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        match &self.inner {
            CyclicInner::Dense(lu) => lu.solve(b),
            CyclicInner::Woodbury {
                band,
                corner_cols,
                w,
                small,
            } => {
                let mut z = band.solve(b);
                let k = corner_cols.len();
                if k > 0 {
                    let mut rhs: Vec<f64> = corner_cols.iter().map(|&c| z[c]).collect();
                    small.solve_in_place(&mut rhs);
                    for (y, wk) in rhs.iter().zip(w) {
                        if *y != 0.0 {
                            for (zi, wi) in z.iter_mut().zip(wk) {
                                *zi -= y * wi;
                            }
                        }
                    }
                }
                z
            }
        }
    }
}

/// Roots of the complex quadratic `a z^2 + b z + c`, returned with the
/// larger-magnitude root computed first for stability. Degenerate (lower
/// degree) inputs report missing roots as 0.
pub fn complex_quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale == 0.0 {
        return (zero, zero);
    }
    if a.norm() <= 1e-300 * scale {
        if b.norm() <= 1e-300 * scale {
            return (zero, zero);
        }
        return (-c / b, zero);
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation in b + sign*disc
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    let z1 = q / a;
    let z2 = if q.norm() > 0.0 { c / q } else { zero };
    (z1, z2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_banded(n: usize, kl: usize, ku: usize, seed: u64) -> (BandedMatrix, DenseMatrix) {
        // simple deterministic LCG so the test is reproducible
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let mut band = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                band.set(i, j, next());
            }
            band.add(i, i, 3.0); // keep comfortably nonsingular
        }
        let dense = band.to_dense();
        (band, dense)
    }

    #[test]
    fn dense_lu_solves() {
        let m = DenseMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 2.0],
        ]);
        let lu = DenseLu::factor(&m).unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        let r = m.matvec(&x);
        for (a, b) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_lu_requires_pivoting() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let lu = DenseLu::factor(&m).unwrap();
        let x = lu.solve(&[5.0, 7.0]);
        assert!((x[0] - 7.0).abs() < 1e-14 && (x[1] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn banded_matches_dense() {
        for (n, kl, ku, seed) in [(12usize, 3usize, 2usize, 7u64), (9, 1, 4, 11), (30, 4, 1, 3)] {
            let (band, dense) = random_banded(n, kl, ku, seed);
            let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
            let xb = BandedLu::factor(&band).unwrap().solve(&b);
            let xd = DenseLu::factor(&dense).unwrap().solve(&b);
            for (a, c) in xb.iter().zip(&xd) {
                assert!((a - c).abs() < 1e-10, "n={n} kl={kl} ku={ku}");
            }
        }
    }

    #[test]
    fn cyclic_matches_dense() {
        // periodic tridiagonal-like system with wrap corners
        let n = 16;
        let mut sys = SparseSystem::new(n);
        for i in 0..n {
            sys.add(i, i, 4.0);
            sys.add(i, (i + 1) % n, -1.0);
            sys.add(i, (i + n - 1) % n, -2.0);
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let x = CyclicBandedLu::factor(&sys, 1, 1).unwrap().solve(&b);
        let xd = DenseLu::factor(&sys.to_dense()).unwrap().solve(&b);
        for (a, c) in x.iter().zip(&xd) {
            assert!((a - c).abs() < 1e-11);
        }
    }

    #[test]
    fn cyclic_falls_back_when_band_core_singular() {
        // band part is singular (zero diagonal block) but full matrix is not
        let mut sys = SparseSystem::new(4);
        sys.add(0, 3, 1.0);
        sys.add(1, 0, 1.0);
        sys.add(2, 1, 1.0);
        sys.add(3, 2, 1.0);
        let lu = CyclicBandedLu::factor(&sys, 1, 1).unwrap();
        let x = lu.solve(&[4.0, 1.0, 2.0, 3.0]);
        assert_eq!(x, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn quadratic_root_examples() {
        let o = |re: f64| Complex64::new(re, 0.0);
        let (z1, z2) = complex_quadratic_roots(o(1.0), o(-2.5), o(1.0));
        let mut roots = [z1.re, z2.re];
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] - 0.5).abs() < 1e-14 && (roots[1] - 2.0).abs() < 1e-14);

        // degenerate: degree one
        let (z1, z2) = complex_quadratic_roots(o(0.0), o(2.0), o(-4.0));
        assert!((z1.re - 2.0).abs() < 1e-14 && z2.norm() == 0.0);
    }

    proptest! {
        #[test]
        fn quadratic_roots_satisfy_equation(
            ar in -3.0..3.0f64, ai in -3.0..3.0f64,
            br in -3.0..3.0f64, bi in -3.0..3.0f64,
            cr in -3.0..3.0f64, ci in -3.0..3.0f64,
        ) {
            let a = Complex64::new(ar, ai);
            prop_assume!(a.norm() > 1e-3);
            let b = Complex64::new(br, bi);
            let c = Complex64::new(cr, ci);
            let (z1, z2) = complex_quadratic_roots(a, b, c);
            for z in [z1, z2] {
                let r = (a * z * z + b * z + c).norm();
                let scale = a.norm() * z.norm().powi(2) + b.norm() * z.norm() + c.norm();
                prop_assert!(r <= 1e-10 * scale.max(1.0));
            }
        }

        #[test]
        fn banded_lu_random_agreement(seed in 0u64..500) {
            let (band, dense) = random_banded(14, 3, 2, seed);
            let b: Vec<f64> = (0..14).map(|i| ((i as f64) * 1.3 + seed as f64).sin()).collect();
            let xb = BandedLu::factor(&band).unwrap().solve(&b);
            let xd = DenseLu::factor(&dense).unwrap().solve(&b);
            for (a, c) in xb.iter().zip(&xd) {
                prop_assert!((a - c).abs() < 1e-9);
            }
        }
    }
}
