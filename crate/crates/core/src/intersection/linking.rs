//! Intersection numbers of reduced closed dual paths by counting linked
//! pairs of maximal common stretches.
//!
//! Two reduced paths that run through the same darts for a while and then
//! separate either stay on one side of each other (no crossing is forced)
//! or swap sides (exactly one crossing is forced). Summing over all maximal
//! stretches, in both relative orientations, gives the minimal crossing
//! count.

use crate::curve::inverse_path;
use crate::surface::{dart_slot, Dart, Triangulation};

/// A maximal stretch where `a[i..i+len] == b[j..j+len]` and the two paths
/// swap sides across it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkedStretch {
    pub i: usize,
    pub j: usize,
    pub len: usize,
    /// True when `b` is the second path read backwards.
    pub reversed: bool,
    /// True when `a` enters the stretch on the left of `b`.
    pub a_left_at_start: bool,
}

fn index_by_dart(t: &Triangulation, b: &[Dart]) -> Vec<Vec<u32>> {
    let mut idx = vec![Vec::new(); t.dart_count()];
    for (j, &d) in b.iter().enumerate() {
        idx[d as usize].push(j as u32);
    }
    idx
}

fn stretches_one_way(
    t: &Triangulation,
    a: &[Dart],
    b: &[Dart],
    reversed: bool,
    skip_diagonal: bool,
    out: &mut Vec<LinkedStretch>,
) {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return;
    }
    let idx = index_by_dart(t, b);
    for i in 0..n {
        let prev_a = a[(i + n - 1) % n];
        for &j in &idx[a[i] as usize] {
            let j = j as usize;
            if skip_diagonal && i == j {
                continue;
            }
            if prev_a == b[(j + m - 1) % m] {
                continue;
            }
            let cap = n + m;
            let mut k = 1;
            while k < cap && a[(i + k) % n] == b[(j + k) % m] {
                k += 1;
            }
            if k >= cap {
                // the two paths agree forever: parallel copies
                continue;
            }
            let d = dart_slot(a[i]);
            let entry = dart_slot(t.opp(prev_a));
            let left_start = entry == (d + 1) % 3;
            let last = a[(i + k - 1) % n];
            let e = dart_slot(t.opp(last));
            let exit = dart_slot(a[(i + k) % n]);
            let left_end = exit == (e + 2) % 3;
            if left_start != left_end {
                out.push(LinkedStretch { i, j, len: k, reversed, a_left_at_start: left_start });
            }
        }
    }
}

/// All linked stretches of `a` against `b` and against `b` reversed.
pub fn linked_stretches(t: &Triangulation, a: &[Dart], b: &[Dart]) -> Vec<LinkedStretch> {
    let mut out = Vec::new();
    stretches_one_way(t, a, b, false, false, &mut out);
    let binv = inverse_path(t, b);
    stretches_one_way(t, a, &binv, true, false, &mut out);
    out
}

/// Minimal number of crossings between two distinct primitive closed curves
/// given by reduced paths.
pub fn loop_intersection(t: &Triangulation, a: &[Dart], b: &[Dart]) -> u64 {
    linked_stretches(t, a, b).len() as u64
}

/// Algebraic intersection of two oriented closed curves: crossings where
/// `a` passes from the left of `b` to its right count `+1`.
pub fn algebraic_intersection(t: &Triangulation, a: &[Dart], b: &[Dart]) -> i64 {
    linked_stretches(t, a, b).iter().map(|s| if s.a_left_at_start != s.reversed { 1 } else { -1 }).sum()
}

/// Minimal number of self-crossings of a reduced closed path.
pub fn loop_self_intersection(t: &Triangulation, a: &[Dart]) -> u64 {
    let mut out = Vec::new();
    stretches_one_way(t, a, a, false, true, &mut out);
    let ainv = inverse_path(t, a);
    stretches_one_way(t, a, &ainv, true, false, &mut out);
    out.len() as u64 / 2
}
