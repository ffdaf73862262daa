//! Once-punctured torus checks against the flat square model.
//!
//! The standard triangulation of the once-punctured torus is the unit
//! square with sides identified by translation, cut along the diagonal
//! from (0,0) to (1,1). Edge 0 is the horizontal side, edge 1 the vertical
//! side and edge 2 the diagonal.

use arcmodel::curve::{decompose, NormalMultiCurve};
use arcmodel::intersection::intersection_number;
use arcmodel::surface::{build_standard_triangulation, SurfaceType, Triangulation};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Counts how often the straight line of direction (p, q) crosses the lines
/// y = k, x = k and y - x = k while running once around the torus.
fn flat_trace(p: i64, q: i64) -> Vec<u32> {
    let (x0, y0) = (0.123_456_7_f64, 0.376_543_1_f64);
    let steps = 4000 * (p.abs() + q.abs() + 1);
    let mut counts = [0u32; 3];
    let pos = |s: f64| (x0 + p as f64 * s, y0 + q as f64 * s);
    let mut prev = pos(0.0);
    for k in 1..=steps {
        let cur = pos(k as f64 / steps as f64);
        if prev.1.floor() != cur.1.floor() {
            counts[0] += 1;
        }
        if prev.0.floor() != cur.0.floor() {
            counts[1] += 1;
        }
        if (prev.1 - prev.0).floor() != (cur.1 - cur.0).floor() {
            counts[2] += 1;
        }
        prev = cur;
    }
    counts.to_vec()
}

fn torus() -> Triangulation {
    build_standard_triangulation(SurfaceType::new(1, 1, 0)).unwrap()
}

fn slope(t: &Triangulation, p: i64, q: i64) -> NormalMultiCurve {
    NormalMultiCurve::new(t, flat_trace(p, q)).unwrap()
}

fn primitive_slopes(bound: i64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for p in 0..=bound {
        for q in -bound..=bound {
            if gcd(p, q) == 1 && (p > 0 || q > 0) {
                v.push((p, q));
            }
        }
    }
    v
}

#[test]
fn slopes_are_connected_and_distinct() {
    let t = torus();
    let slopes = primitive_slopes(20);
    let mut seen = std::collections::HashSet::new();
    for &(p, q) in &slopes {
        let u = slope(&t, p, q);
        let d = decompose(&t, &u);
        assert_eq!(d.len(), 1, "{p}/{q}");
        assert_eq!(d[0].1, 1);
        assert!(seen.insert(u.coords().to_vec()), "collision at {p}/{q}");
    }
}

#[test]
fn intersection_is_the_determinant() {
    let t = torus();
    let slopes = primitive_slopes(20);
    let curves: Vec<_> = slopes.iter().map(|&(p, q)| slope(&t, p, q)).collect();
    for (a, &(p, q)) in slopes.iter().enumerate() {
        for (b, &(r, s)) in slopes.iter().enumerate().skip(a) {
            let i = intersection_number(&t, &curves[a], &curves[b]).unwrap();
            assert_eq!(i as i64, (p * s - q * r).abs(), "{p}/{q} vs {r}/{s}");
        }
    }
}
