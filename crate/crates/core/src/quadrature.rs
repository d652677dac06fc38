//! Fixed 5-node Gauss–Legendre quadrature.
//!
//! Order 10: exact for polynomials up to degree 9, which keeps quadrature
//! error below scheme error for all orders used here.

/// Nodes on [-1, 1].
pub fn gl5_nodes() -> [f64; 5] {
    let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
    [-b, -a, 0.0, a, b]
}

/// Weights matching [`gl5_nodes`].
pub fn gl5_weights() -> [f64; 5] {
    let wa = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
    let wb = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
    [wb, wa, 128.0 / 225.0, wa, wb]
}

/// Integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let nodes = gl5_nodes();
    let weights = gl5_weights();
    let mut acc = 0.0;
    for k in 0..5 {
        acc += weights[k] * f(mid + half * nodes[k]);
    }
    acc * half
}

/// Mean value of `f` over `[a, b]`.
pub fn average<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    integrate(f, a, b) / (b - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = gl5_weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-15);
    }

    // Gauss-Legendre with 5 nodes integrates degree <= 9 exactly.
    #[test]
    fn exact_for_degree_nine() {
        for p in 0..=9usize {
            let got = integrate(|x| x.powi(p as i32), -0.3, 1.7);
            let exact =
                (1.7f64.powi(p as i32 + 1) - (-0.3f64).powi(p as i32 + 1)) / (p as f64 + 1.0);
            assert!(
                (got - exact).abs() <= 1e-13 * exact.abs().max(1.0),
                "degree {p}: {got} vs {exact}"
            );
        }
    }
}
