//! Published residual equations of the sixteen named schemes, stored as
//! coefficient tables in the CFL number, plus the matcher that recovers
//! which stencil mask each named scheme uses.
//!
//! Point rows are coefficient vectors over
//! `[avg_i^n, pt^n, avg_{i+1}^n, avg_i^{n+1}, pt^{n+1}, avg_{i+1}^{n+1}, pt_{i+3/2}^{n+1}]`,
//! average rows over
//! `[avg_{i-1}, pt_{i-1/2}, avg_i, pt_{i+1/2}, avg_{i+1}]` at level n then
//! the same five at level n+1. Each published row is determined only up to
//! an overall scalar, so matching is scale-invariant.

use crate::error::{Error, Result};
use crate::stencil::{build_weights, StencilMask};
use std::collections::BTreeMap;
use std::sync::OnceLock;

pub struct AppendixScheme {
    pub id: &'static str,
    pub order: usize,
    /// Stability domain as published (informational).
    pub cfl_note: &'static str,
    pub point_row: fn(f64) -> [f64; 7],
    pub avg_row: fn(f64) -> [f64; 10],
}

pub const APPENDIX: [AppendixScheme; 16] = [
    AppendixScheme {
        id: "3A",
        order: 3,
        cfl_note: "c > 1",
        point_row: |c| {
            [
                0.0,
                -4.0,
                0.0,
                (c - 1.0) * (3.0 * c - 1.0),
                0.0,
                5.0 + (4.0 - 9.0 * c) * c,
                -2.0 + 6.0 * c * c,
            ]
        },
        avg_row: |c| {
            let c2 = c * c;
            [
                0.0,
                -2.0 * c * (c2 - 1.0),
                2.0 - 6.0 * c2,
                2.0 * c * (c2 - 1.0),
                0.0,
                (c - 1.0) * (c - 1.0) * c2,
                0.0,
                -2.0 * (c2 - 1.0) * (c2 - 1.0),
                0.0,
                c2 * (1.0 + c) * (1.0 + c),
            ]
        },
    },
    AppendixScheme {
        id: "3B",
        order: 3,
        cfl_note: "c > 1",
        point_row: |c| {
            [
                0.0,
                0.0,
                -4.0,
                c * (3.0 * c - 1.0),
                0.0,
                -(1.0 + c) * (9.0 * c - 4.0),
                6.0 * c * (1.0 + c),
            ]
        },
        avg_row: |c| {
            [
                0.0,
                0.0,
                -2.0 * (2.0 + c),
                0.0,
                2.0 * (c - 1.0),
                (c - 1.0) * c,
                0.0,
                4.0 - 2.0 * c * (1.0 + c),
                0.0,
                (1.0 + c) * (2.0 + c),
            ]
        },
    },
    AppendixScheme {
        id: "3C",
        order: 3,
        cfl_note: "c > 1",
        point_row: |c| {
            [
                0.0,
                1.0,
                0.0,
                0.0,
                -1.0 + (4.0 - 3.0 * c) * c,
                6.0 * (c - 1.0) * c,
                (2.0 - 3.0 * c) * c,
            ]
        },
        avg_row: |c| {
            let d = c - 1.0;
            [
                0.0,
                d * c,
                -2.0 + 3.0 * c,
                -d * c,
                0.0,
                0.0,
                -d * d * c,
                2.0 - 3.0 * c + c * c * c,
                d * d * c,
                -c * c * c,
            ]
        },
    },
    AppendixScheme {
        id: "3D",
        order: 3,
        cfl_note: "c > 1",
        point_row: |c| {
            [
                0.0,
                0.0,
                1.0,
                0.0,
                c - 3.0 * c * c,
                -1.0 + 6.0 * c * c,
                -c * (1.0 + 3.0 * c),
            ]
        },
        avg_row: |c| {
            let c2 = c * c;
            let p = 1.0 + c;
            [
                0.0,
                0.0,
                -p * p,
                0.0,
                (c - 1.0) * c,
                0.0,
                c * (c2 - 1.0),
                1.0 + 2.0 * c - c2 * (2.0 + c),
                c - c2 * c,
                c * p * p,
            ]
        },
    },
    AppendixScheme {
        id: "3E",
        order: 3,
        cfl_note: "c not in [1, 2]",
        point_row: |c| {
            [
                -4.0,
                0.0,
                0.0,
                (c - 1.0) * (3.0 * c - 4.0),
                0.0,
                (13.0 - 9.0 * c) * c,
                6.0 * (c - 1.0) * c,
            ]
        },
        avg_row: |c| {
            [
                -2.0 * (1.0 + c),
                0.0,
                2.0 * (c - 2.0),
                0.0,
                0.0,
                (c - 2.0) * (c - 1.0),
                0.0,
                -2.0 * (c - 2.0) * (1.0 + c),
                0.0,
                c * (1.0 + c),
            ]
        },
    },
    AppendixScheme {
        id: "3F",
        order: 3,
        cfl_note: "c > 2",
        point_row: |c| {
            [
                1.0,
                0.0,
                0.0,
                0.0,
                -4.0 + (7.0 - 3.0 * c) * c,
                5.0 + 6.0 * (c - 2.0) * c,
                (2.0 - 3.0 * c) * (c - 1.0),
            ]
        },
        avg_row: |c| {
            let a = c - 2.0;
            let b = c - 1.0;
            [
                -c * c,
                0.0,
                a * b,
                0.0,
                0.0,
                0.0,
                a * b * c,
                -a * (-1.0 + c + c * c),
                -a * b * c,
                b * c * c,
            ]
        },
    },
    AppendixScheme {
        id: "3G",
        order: 3,
        cfl_note: "c > 3.74",
        point_row: |c| {
            [
                0.0,
                0.0,
                -5.0,
                -1.0 + 6.0 * c * c,
                -(1.0 + c) * (9.0 * c - 4.0),
                0.0,
                (1.0 + c) * (2.0 + 3.0 * c),
            ]
        },
        avg_row: |c| {
            let p = 1.0 + c;
            let q = 2.0 + c;
            [
                0.0,
                0.0,
                -p * q,
                0.0,
                c * c,
                c * c * p,
                -c * p * q,
                2.0 - c * (-3.0 + c + c * c),
                c * p * q,
                0.0,
            ]
        },
    },
    AppendixScheme {
        id: "3H",
        order: 3,
        cfl_note: "c > 4.55",
        point_row: |c| {
            [
                0.0,
                -5.0,
                0.0,
                6.0 * (c - 1.0) * c,
                5.0 + (4.0 - 9.0 * c) * c,
                0.0,
                c * (2.0 + 3.0 * c),
            ]
        },
        avg_row: |c| {
            let p = 1.0 + c;
            [
                0.0,
                -c * p,
                -2.0 - 3.0 * c,
                c * p,
                0.0,
                c * c * c,
                -c * p * p,
                2.0 + 3.0 * c - c * c * c,
                c * p * p,
                0.0,
            ]
        },
    },
    AppendixScheme {
        id: "3I",
        order: 3,
        cfl_note: "c > 4.74",
        point_row: |c| {
            [
                -5.0,
                0.0,
                0.0,
                5.0 + 6.0 * (-2.0 + c) * c,
                (13.0 - 9.0 * c) * c,
                0.0,
                c * (3.0 * c - 1.0),
            ]
        },
        avg_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                -c * p,
                0.0,
                b * b,
                0.0,
                0.0,
                b * b * c,
                c - c * c * c,
                -p * (1.0 + (-3.0 + c) * c),
                c * (c * c - 1.0),
                0.0,
            ]
        },
    },
    AppendixScheme {
        id: "4A",
        order: 4,
        cfl_note: "unconditional",
        point_row: |c| {
            let p = 1.0 + c;
            [
                0.0,
                0.0,
                -1.0,
                -c * c * c,
                c * p * (4.0 * c - 1.0),
                1.0 - c * c * (6.0 + 5.0 * c),
                c * p * (1.0 + 2.0 * c),
            ]
        },
        avg_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            let q = 2.0 + c;
            [
                0.0,
                0.0,
                -2.0 * p * q,
                0.0,
                2.0 * b * c,
                c * c - c * c * c * c,
                2.0 * b * c * p * q,
                -2.0 * b * q * (1.0 + 2.0 * c),
                -2.0 * b * c * p * q,
                c * p * p * q,
            ]
        },
    },
    AppendixScheme {
        id: "4B",
        order: 4,
        cfl_note: "c > 1.10",
        point_row: |c| {
            let b = c - 1.0;
            [
                0.0,
                2.0,
                0.0,
                b * c * (2.0 * c - 1.0),
                -2.0 * b * (-1.0 + c + 4.0 * c * c),
                b * c * (7.0 + 10.0 * c),
                c * (2.0 - 4.0 * c * c),
            ]
        },
        avg_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            let s = c * c - 1.0;
            [
                0.0,
                -2.0 * c * s,
                4.0 - 8.0 * c * c,
                2.0 * c * s,
                0.0,
                -b * b * c * c * c,
                2.0 * c * s * s,
                -4.0 * s * s,
                -2.0 * c * s * s,
                c * c * c * p * p,
            ]
        },
    },
    AppendixScheme {
        id: "4C",
        order: 4,
        cfl_note: "c > 1",
        point_row: |c| {
            let b = c - 1.0;
            [
                -1.0,
                0.0,
                0.0,
                -b * b * b,
                b * c * (4.0 * c - 5.0),
                c * (-3.0 + (9.0 - 5.0 * c) * c),
                b * c * (2.0 * c - 1.0),
            ]
        },
        avg_row: |c| {
            let a = c - 2.0;
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                -2.0 * c * p,
                0.0,
                2.0 * a * b,
                0.0,
                0.0,
                -a * b * b * c,
                2.0 * a * b * c * p,
                -2.0 * a * p * (2.0 * c - 1.0),
                -2.0 * a * b * c * p,
                c * c * (c * c - 1.0),
            ]
        },
    },
    AppendixScheme {
        id: "4D",
        order: 4,
        cfl_note: "marginally stable",
        point_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                -p * (4.0 * c - 1.0),
                0.0,
                b * (4.0 * c - 5.0),
                b * (1.0 + c * (-5.0 + 3.0 * c)),
                0.0,
                -p * (5.0 + c * (-17.0 + 9.0 * c)),
                6.0 * c * (c * c - 1.0),
            ]
        },
        avg_row: |c| {
            let a = c - 2.0;
            let b = c - 1.0;
            let p = 1.0 + c;
            let q = 2.0 + c;
            [
                -p * q,
                0.0,
                2.0 * (c * c - 4.0),
                0.0,
                -a * b,
                a * b,
                0.0,
                8.0 - 2.0 * c * c,
                0.0,
                p * q,
            ]
        },
    },
    AppendixScheme {
        id: "5A",
        order: 5,
        cfl_note: "c > 1",
        point_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                0.0,
                -2.0 * c * p * (1.0 + 5.0 * c),
                2.0 * b * (-2.0 + c + 5.0 * c * c),
                -b * c * c * (5.0 * c * c - 1.0),
                2.0 * b * c * p * (-3.0 + 5.0 * c * (1.0 + 2.0 * c)),
                -b * p * p * (-4.0 + 5.0 * c * (2.0 + 5.0 * c)),
                2.0 * c * p * p * (5.0 * c * c - 2.0),
            ]
        },
        avg_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            let q = 2.0 + c;
            let bcpq = b * c * p * q;
            [
                0.0,
                bcpq,
                -4.0 + c * c * (9.0 - (c - 2.0) * c),
                -bcpq,
                b * b * c * c,
                0.5 * b * b * c * c * c,
                -b * bcpq,
                b * b * q * (2.0 + 3.0 * c),
                b * bcpq,
                -0.5 * c * c * p * p * q,
            ]
        },
    },
    AppendixScheme {
        id: "5B",
        order: 5,
        cfl_note: "c > 2",
        point_row: |c| {
            let b = c - 1.0;
            [
                -2.0 * (-2.0 + c + 5.0 * c * c),
                2.0 * b * (5.0 * c - 4.0),
                0.0,
                -b * b * (4.0 + 5.0 * (c - 2.0) * c),
                2.0 * b * (2.0 * c - 1.0) * (-4.0 + 5.0 * b * c),
                c * (-16.0 + c * (9.0 + 5.0 * (8.0 - 5.0 * c) * c)),
                2.0 * b * c * (5.0 * c * c - 2.0),
            ]
        },
        avg_row: |c| {
            let a = c - 2.0;
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                2.0 * c * c * p * p,
                -2.0 * a * b * c * p,
                -2.0 * (4.0 + c * c * (-9.0 + c * (2.0 + c))),
                2.0 * a * b * c * p,
                0.0,
                a * b * b * c * c,
                -2.0 * a * b * c * p * p,
                2.0 * a * p * p * (3.0 * c - 2.0),
                2.0 * a * b * c * p * p,
                -c * c * c * p * p,
            ]
        },
    },
    AppendixScheme {
        id: "5C",
        order: 5,
        cfl_note: "c > 2",
        point_row: |c| {
            let b = c - 1.0;
            let p = 1.0 + c;
            [
                -c * p * (1.0 + 5.0 * c),
                0.0,
                b * b * (5.0 * c - 4.0),
                -b * b * c * (5.0 * b * c - 1.0),
                2.0 * b * c * p * (2.0 + 5.0 * c * (2.0 * c - 3.0)),
                -p * (-4.0 + c * (17.0 + c * (-4.0 + 5.0 * c * (5.0 * c - 8.0)))),
                2.0 * c * (2.0 - 7.0 * c * c + 5.0 * c * c * c * c),
            ]
        },
        avg_row: |c| {
            let a = c - 2.0;
            let b = c - 1.0;
            let p = 1.0 + c;
            let q = 2.0 + c;
            let w = 4.0 - 5.0 * c * c + c * c * c * c;
            [
                -c * p * p * q,
                0.0,
                2.0 * w,
                0.0,
                -a * b * b * c,
                -a * b * b * c * p,
                2.0 * c * w,
                -8.0 + 26.0 * c * c - 6.0 * c * c * c * c,
                -2.0 * c * w,
                b * c * p * p * q,
            ]
        },
    },
];

/// Relative tolerance for scale-invariant residual matching.
pub const MATCH_RTOL: f64 = 1e-10;

/// CFL samples used by the matcher; alternates cover masks singular at one
/// of the primary values.
const SAMPLE_CS: [f64; 8] = [1.5, 3.0, 5.0, 7.0, 2.5, 4.5, 6.5, 9.5];
const SAMPLES_REQUIRED: usize = 4;

/// `x ~ sigma * y` for some scalar sigma, within `rtol`.
pub fn matches_up_to_scale(x: &[f64], y: &[f64], rtol: f64) -> bool {
    debug_assert_eq!(x.len(), y.len());
    let (mut k, mut ymax) = (0usize, 0.0f64);
    for (j, v) in y.iter().enumerate() {
        if v.abs() > ymax {
            ymax = v.abs();
            k = j;
        }
    }
    let xmax = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if ymax == 0.0 {
        return xmax == 0.0;
    }
    let sigma = x[k] / y[k];
    let scale = xmax.max(sigma.abs() * ymax).max(1e-300);
    x.iter()
        .zip(y)
        .all(|(xi, yi)| (xi - sigma * yi).abs() <= rtol * scale)
}

/// Compare one mask against one published scheme at every usable CFL sample.
/// Both the point row and the average row must match up to (independent)
/// scalar factors at all of them.
fn mask_matches_scheme(mask: StencilMask, scheme: &AppendixScheme) -> Result<bool> {
    if mask.order() != scheme.order {
        return Ok(false);
    }
    let mut used = 0;
    for &c in SAMPLE_CS.iter() {
        if used == SAMPLES_REQUIRED {
            break;
        }
        let w = match build_weights(mask, c) {
            Ok(w) => w,
            Err(Error::SingularCfl { .. }) => continue,
            Err(e) => return Err(e),
        };
        used += 1;
        if !matches_up_to_scale(&w.point_residual_vector(), &(scheme.point_row)(c), MATCH_RTOL) {
            return Ok(false);
        }
        if !matches_up_to_scale(&w.avg_residual_vector(), &(scheme.avg_row)(c), MATCH_RTOL) {
            return Ok(false);
        }
    }
    if used < SAMPLES_REQUIRED {
        return Err(Error::Config(format!(
            "mask {mask} is singular at too many CFL samples to match"
        )));
    }
    Ok(true)
}

/// Identify the published scheme a mask implements, if any.
pub fn match_appendix(mask: StencilMask) -> Result<Option<&'static str>> {
    let mut hit = None;
    for scheme in APPENDIX.iter() {
        if mask_matches_scheme(mask, scheme)? {
            if let Some(prev) = hit {
                return Err(Error::Config(format!(
                    "mask {mask} matches both {prev} and {}",
                    scheme.id
                )));
            }
            hit = Some(scheme.id);
        }
    }
    Ok(hit)
}

fn build_registry() -> Result<BTreeMap<String, StencilMask>> {
    let mut map = BTreeMap::new();
    for mask in crate::stencil::all_masks() {
        if mask.order() > 5 {
            continue; // only orders 3..5 are named
        }
        if let Some(id) = match_appendix(mask)? {
            if let Some(prev) = map.insert(id.to_string(), mask) {
                return Err(Error::Config(format!(
                    "scheme {id} matched by two masks: {prev} and {mask}"
                )));
            }
        }
    }
    if map.len() != APPENDIX.len() {
        return Err(Error::Config(format!(
            "expected {} named schemes, matched {}",
            APPENDIX.len(),
            map.len()
        )));
    }
    Ok(map)
}

/// Mask registry for the named schemes, derived once by residual matching.
pub fn named_scheme_masks() -> Result<&'static BTreeMap<String, StencilMask>> {
    static REGISTRY: OnceLock<BTreeMap<String, StencilMask>> = OnceLock::new();
    if let Some(r) = REGISTRY.get() {
        return Ok(r);
    }
    let built = build_registry()?;
    Ok(REGISTRY.get_or_init(|| built))
}

/// Resolve a named identifier ("3C", "4A", ...) to its mask.
pub fn named_mask(name: &str) -> Result<StencilMask> {
    named_scheme_masks()?
        .get(name)
        .copied()
        .ok_or_else(|| Error::Config(format!("unknown scheme identifier {name:?}")))
}

/// All named identifiers in table order.
pub fn named_ids() -> Vec<&'static str> {
    APPENDIX.iter().map(|s| s.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::all_masks;

    #[test]
    fn anchor_example_matches() {
        // the worked example scheme: conditions p(0), p(1), downwind average
        let mask: StencilMask = "010|011".parse().unwrap();
        assert_eq!(match_appendix(mask).unwrap(), Some("3C"));
    }

    #[test]
    fn unnamed_masks_match_nothing() {
        // fully explicit third-order stencil is not in the published tables
        let mask: StencilMask = "111|000".parse().unwrap();
        assert_eq!(match_appendix(mask).unwrap(), None);
    }

    #[test]
    fn registry_is_complete_and_unique() {
        let reg = named_scheme_masks().unwrap();
        assert_eq!(reg.len(), 16);
        let mut ids: Vec<&str> = reg.keys().map(String::as_str).collect();
        ids.sort_unstable();
        let mut expect = named_ids();
        expect.sort_unstable();
        assert_eq!(ids, expect);
        // masks are distinct
        let mut masks: Vec<String> = reg.values().map(|m| m.to_string()).collect();
        masks.sort_unstable();
        masks.dedup();
        assert_eq!(masks.len(), 16);
    }

    #[test]
    fn exhaustive_match_count_is_sixteen() {
        let mut hits = 0;
        for mask in all_masks() {
            if mask.order() > 5 {
                continue;
            }
            if match_appendix(mask).unwrap().is_some() {
                hits += 1;
            }
        }
        assert_eq!(hits, 16);
    }

    #[test]
    fn scale_matching_helper() {
        assert!(matches_up_to_scale(&[2.0, -4.0, 0.0], &[1.0, -2.0, 0.0], 1e-12));
        assert!(matches_up_to_scale(&[-1.0, 2.0], &[0.5, -1.0], 1e-12));
        assert!(!matches_up_to_scale(&[1.0, 2.0], &[1.0, 2.1], 1e-12));
        assert!(!matches_up_to_scale(&[1.0, 0.0], &[1.0, 1e-6], 1e-12));
    }
}
