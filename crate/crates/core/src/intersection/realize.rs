//! Explicit realizations of curve systems: every strand is a chain of
//! chords, one per triangle it passes, with endpoints ordered along each
//! edge. Two chords in a triangle cross exactly when their endpoints
//! interleave around the triangle's boundary.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::curve::{trace, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::surface::{dart_slot, dart_tri, Dart, Triangulation};

/// Identifies where a strand came from: which input, which component and
/// which parallel copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrandTag {
    pub source: u32,
    pub component: u32,
    pub copy: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub path: Vec<Dart>,
    pub tag: StrandTag,
}

/// A point where strand `.0` crosses the edge of its dart with index `.1`.
pub type Point = (u32, u32);
/// The chord of strand `.0` that leaves its triangle through dart index `.1`.
pub type Chord = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedSystem {
    triangulation_id: u64,
    strands: Vec<Strand>,
    order: Vec<Vec<Point>>,
    pos: Vec<Vec<u32>>,
    tri_chords: Vec<Vec<Chord>>,
}

impl EmbeddedSystem {
    fn assemble(t: &Triangulation, strands: Vec<Strand>, order: Vec<Vec<Point>>) -> Self {
        let mut pos: Vec<Vec<u32>> = strands.iter().map(|s| vec![0; s.path.len()]).collect();
        for list in &order {
            for (k, &(s, i)) in list.iter().enumerate() {
                pos[s as usize][i as usize] = k as u32;
            }
        }
        let mut tri_chords = vec![Vec::new(); t.triangle_count()];
        for (s, st) in strands.iter().enumerate() {
            for (i, &d) in st.path.iter().enumerate() {
                tri_chords[dart_tri(d)].push((s as u32, i as u32));
            }
        }
        EmbeddedSystem { triangulation_id: t.id(), strands, order, pos, tri_chords }
    }

    pub fn empty(t: &Triangulation) -> Self {
        Self::assemble(t, Vec::new(), vec![Vec::new(); t.edge_count()])
    }

    pub fn triangulation_id(&self) -> u64 {
        self.triangulation_id
    }
    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }
    /// Points on edge `e` in canonical order.
    pub fn edge_order(&self, e: usize) -> &[Point] {
        &self.order[e]
    }
    pub fn position(&self, p: Point) -> u32 {
        self.pos[p.0 as usize][p.1 as usize]
    }
    pub fn chords_in(&self, tri: usize) -> &[Chord] {
        &self.tri_chords[tri]
    }
    pub fn chord_count(&self) -> usize {
        self.tri_chords.iter().map(|c| c.len()).sum()
    }

    fn along(&self, t: &Triangulation, d: Dart, p: Point) -> u64 {
        let e = t.edge_of(d);
        let canon = self.position(p) as u64;
        if t.canonical_dart(e) == d {
            canon
        } else {
            self.order[e].len() as u64 - 1 - canon
        }
    }

    /// Circle coordinates (counter-clockwise) of a chord's entry and exit.
    pub fn chord_ends(&self, t: &Triangulation, c: Chord) -> (u64, u64) {
        let path = &self.strands[c.0 as usize].path;
        let n = path.len();
        let i = c.1 as usize;
        let prev = (i + n - 1) % n;
        let din = t.opp(path[prev]);
        let dout = path[i];
        let a = ((dart_slot(din) as u64) << 32) | self.along(t, din, (c.0, prev as u32));
        let b = ((dart_slot(dout) as u64) << 32) | self.along(t, dout, c);
        (a, b)
    }

    pub fn triangle_crossings(&self, t: &Triangulation, tri: usize) -> Vec<(Chord, Chord)> {
        let chords = &self.tri_chords[tri];
        let ends: Vec<(u64, u64)> = chords
            .iter()
            .map(|&c| {
                let (a, b) = self.chord_ends(t, c);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut out = Vec::new();
        for x in 0..chords.len() {
            for y in x + 1..chords.len() {
                if interleave(ends[x], ends[y]) {
                    out.push((chords[x], chords[y]));
                }
            }
        }
        out
    }

    pub fn triangle_crossing_count(&self, t: &Triangulation, tri: usize) -> usize {
        let ends: Vec<(u64, u64)> = self.tri_chords[tri]
            .iter()
            .map(|&c| {
                let (a, b) = self.chord_ends(t, c);
                (a.min(b), a.max(b))
            })
            .collect();
        let mut n = 0;
        for x in 0..ends.len() {
            for y in x + 1..ends.len() {
                n += interleave(ends[x], ends[y]) as usize;
            }
        }
        n
    }

    pub fn crossing_count(&self, t: &Triangulation) -> usize {
        (0..t.triangle_count()).map(|k| self.triangle_crossing_count(t, k)).sum()
    }

    /// All crossings as unordered chord pairs, in triangle order.
    pub fn crossings(&self, t: &Triangulation) -> Vec<(Chord, Chord)> {
        (0..t.triangle_count()).flat_map(|k| self.triangle_crossings(t, k)).collect()
    }

    /// Checks that every strand point sits exactly once in its edge order
    /// and that consecutive darts of each strand are glued.
    pub fn validate(&self, t: &Triangulation) -> Result<()> {
        let mut seen = 0usize;
        for (e, list) in self.order.iter().enumerate() {
            for (k, &(s, i)) in list.iter().enumerate() {
                let path = &self.strands[s as usize].path;
                if t.edge_of(path[i as usize]) != e || self.position((s, i)) != k as u32 {
                    return Err(Error::Invalid(format!("bad point on edge {e}")));
                }
                seen += 1;
            }
        }
        let total: usize = self.strands.iter().map(|s| s.path.len()).sum();
        if seen != total {
            return Err(Error::Invalid("edge orders miss strand points".into()));
        }
        for s in &self.strands {
            let n = s.path.len();
            for i in 0..n {
                if dart_tri(s.path[(i + 1) % n]) != dart_tri(t.opp(s.path[i])) {
                    return Err(Error::Invalid("strand is not a closed dual path".into()));
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn interleave(p: (u64, u64), q: (u64, u64)) -> bool {
    let inside = |x: u64| p.0 < x && x < p.1;
    inside(q.0) != inside(q.1)
}

fn traced_strands(t: &Triangulation, u: &NormalMultiCurve, source: u32) -> Vec<(Strand, Vec<u32>)> {
    let mut comps = trace(t, u.coords());
    comps.sort_by_key(|a| a.path.len());
    comps
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let tag = StrandTag { source, component: k as u32, copy: 0 };
            (Strand { path: c.path, tag }, c.positions)
        })
        .collect()
}

fn stacked(t: &Triangulation, groups: Vec<Vec<(Strand, Vec<u32>)>>) -> EmbeddedSystem {
    let mut strands = Vec::new();
    let mut order: Vec<Vec<Point>> = vec![Vec::new(); t.edge_count()];
    for group in groups {
        let base = strands.len() as u32;
        let mut local: Vec<Vec<(u32, Point)>> = vec![Vec::new(); t.edge_count()];
        for (k, (st, positions)) in group.into_iter().enumerate() {
            for (i, &d) in st.path.iter().enumerate() {
                local[t.edge_of(d)].push((positions[i], (base + k as u32, i as u32)));
            }
            strands.push(st);
        }
        for (e, mut pts) in local.into_iter().enumerate() {
            pts.sort();
            order[e].extend(pts.into_iter().map(|(_, p)| p));
        }
    }
    EmbeddedSystem::assemble(t, strands, order)
}

/// The crossing-free realization of an admissible multicurve.
pub fn realize(t: &Triangulation, u: &NormalMultiCurve) -> Result<EmbeddedSystem> {
    u.check_on(t)?;
    Ok(stacked(t, vec![traced_strands(t, u, 0)]))
}

/// Union of the two realizations; on every edge all points of `u` come
/// before all points of `v` in canonical order.
pub fn overlay(t: &Triangulation, u: &NormalMultiCurve, v: &NormalMultiCurve) -> Result<EmbeddedSystem> {
    if u.triangulation_id() != v.triangulation_id() {
        return Err(Error::TriangulationMismatch);
    }
    u.check_on(t)?;
    Ok(stacked(t, vec![traced_strands(t, u, 0), traced_strands(t, v, 1)]))
}

/// Removes bigons until none is left. A bigon is found by following two
/// crossing chords through a common run of edges until they cross again;
/// the first strand is then pushed across the second on every edge of the
/// run. A push is kept only if it lowers the total number of crossings.
pub fn reduce_bigons(t: &Triangulation, s: &EmbeddedSystem) -> EmbeddedSystem {
    let mut sys = s.clone();
    loop {
        let mut improved = false;
        for tri in 0..t.triangle_count() {
            'again: loop {
                let crossings = sys.triangle_crossings(t, tri);
                for &(a, b) in &crossings {
                    for (x, y) in [(a, b), (b, a)] {
                        for dir in [1i32, -1] {
                            if try_push(t, &mut sys, tri, x, y, dir) {
                                improved = true;
                                continue 'again;
                            }
                        }
                    }
                }
                break;
            }
        }
        if !improved {
            return sys;
        }
    }
}

struct Walker<'a> {
    path: &'a [Dart],
    i: isize,
    dir: i32,
}

impl Walker<'_> {
    fn n(&self) -> isize {
        self.path.len() as isize
    }
    /// Dart crossed at corridor step `k`, in the walking direction.
    fn dart(&self, t: &Triangulation, k: isize) -> Dart {
        if self.dir > 0 {
            self.path[(self.i + k).rem_euclid(self.n()) as usize]
        } else {
            t.opp(self.path[(self.i - 1 - k).rem_euclid(self.n()) as usize])
        }
    }
    /// Point index on the edge crossed at step `k`.
    fn point(&self, k: isize) -> u32 {
        if self.dir > 0 {
            (self.i + k).rem_euclid(self.n()) as u32
        } else {
            (self.i - 1 - k).rem_euclid(self.n()) as u32
        }
    }
    /// Chord index in the triangle entered after step `k`.
    fn chord_after(&self, k: isize) -> u32 {
        if self.dir > 0 {
            (self.i + k + 1).rem_euclid(self.n()) as u32
        } else {
            (self.i - 1 - k).rem_euclid(self.n()) as u32
        }
    }
}

fn chords_cross(t: &Triangulation, sys: &EmbeddedSystem, a: Chord, b: Chord) -> bool {
    let (p0, p1) = sys.chord_ends(t, a);
    let (q0, q1) = sys.chord_ends(t, b);
    interleave((p0.min(p1), p0.max(p1)), (q0.min(q1), q0.max(q1)))
}

fn try_push(t: &Triangulation, sys: &mut EmbeddedSystem, tri: usize, a: Chord, b: Chord, dir: i32) -> bool {
    if a == b {
        return false;
    }
    let pa = sys.strands[a.0 as usize].path.clone();
    let pb = sys.strands[b.0 as usize].path.clone();
    let wa = Walker { path: &pa, i: a.1 as isize, dir };
    let first = wa.dart(t, 0);
    let nb = pb.len() as isize;
    let bi = b.1 as isize;
    let wb = if pb[b.1 as usize] == first {
        Walker { path: &pb, i: bi, dir: 1 }
    } else if t.opp(pb[(bi - 1).rem_euclid(nb) as usize]) == first {
        Walker { path: &pb, i: bi, dir: -1 }
    } else {
        return false;
    };
    let cap = (pa.len() + pb.len()) as isize;
    let mut k = 0isize;
    loop {
        let ca = (a.0, wa.chord_after(k));
        let cb = (b.0, wb.chord_after(k));
        if chords_cross(t, sys, ca, cb) {
            break;
        }
        k += 1;
        if k >= cap || wa.dart(t, k) != wb.dart(t, k) {
            return false;
        }
    }
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    touched.insert(tri);
    let mut edges = Vec::new();
    for s in 0..=k {
        let d = wa.dart(t, s);
        touched.insert(dart_tri(d));
        touched.insert(dart_tri(t.opp(d)));
        edges.push((t.edge_of(d), wa.point(s), wb.point(s)));
    }
    let before: usize = touched.iter().map(|&x| sys.triangle_crossing_count(t, x)).sum();
    let saved: Vec<(usize, Vec<Point>)> = edges.iter().map(|&(e, _, _)| (e, sys.order[e].clone())).collect();
    for &(e, ia, ib) in &edges {
        let pa_pt = (a.0, ia);
        let pb_pt = (b.0, ib);
        let ka = sys.position(pa_pt) as usize;
        let list = &mut sys.order[e];
        list.remove(ka);
        let kb = list.iter().position(|&p| p == pb_pt).expect("partner point on edge");
        let at = if ka <= kb { kb + 1 } else { kb };
        list.insert(at, pa_pt);
        sys.refresh_positions(e);
    }
    let after: usize = touched.iter().map(|&x| sys.triangle_crossing_count(t, x)).sum();
    if after < before {
        return true;
    }
    for (e, list) in saved {
        sys.order[e] = list;
        sys.refresh_positions(e);
    }
    false
}

impl EmbeddedSystem {
    fn refresh_positions(&mut self, e: usize) {
        for (k, &(s, i)) in self.order[e].iter().enumerate() {
            self.pos[s as usize][i as usize] = k as u32;
        }
    }
}

/// Compares the positions of two strand points on edge `e` in a minimal
/// realization. Each point looks along its strand in both directions; the
/// first turn where the two strands part decides, with the looks in the two
/// directions interleaved so the decision is made at the nearer end of a
/// common stretch. Identical strands fall back to tags, nested so that
/// parallel copies never cross.
fn ray_cmp(t: &Triangulation, e: usize, a: (&[Dart], usize, StrandTag), b: (&[Dart], usize, StrandTag)) -> Ordering {
    let d0 = t.canonical_dart(e);
    let into = t.opp(d0);
    let step = |path: &[Dart], i: usize, fwd: bool, k: usize| -> Dart {
        let n = path.len() as isize;
        let along = path[i] == into;
        if along == fwd {
            path[((i as isize) + k as isize).rem_euclid(n) as usize]
        } else {
            t.opp(path[((i as isize) - k as isize).rem_euclid(n) as usize])
        }
    };
    let cap = a.0.len() + b.0.len();
    let (mut fprev, mut bprev) = (into, d0);
    for k in 1..=cap {
        let (fa, fb) = (step(a.0, a.1, true, k), step(b.0, b.1, true, k));
        if fa != fb {
            let entry = dart_slot(t.opp(fprev));
            let left = (dart_slot(fa) + 3 - entry) % 3 == 2;
            return if left { Ordering::Less } else { Ordering::Greater };
        }
        fprev = fa;
        let (ga, gb) = (step(a.0, a.1, false, k), step(b.0, b.1, false, k));
        if ga != gb {
            let entry = dart_slot(t.opp(bprev));
            let left = (dart_slot(ga) + 3 - entry) % 3 == 2;
            return if left { Ordering::Greater } else { Ordering::Less };
        }
        bprev = ga;
    }
    let along = a.0[a.1] == into;
    if along {
        a.2.cmp(&b.2)
    } else {
        b.2.cmp(&a.2)
    }
}

/// Realizes reduced closed paths in pairwise minimal position. Paths that
/// are equal as cyclic sequences must be given in the same rotation class
/// and orientation; they are then drawn as nested parallel copies.
pub fn realize_minimal(t: &Triangulation, strands: Vec<Strand>) -> EmbeddedSystem {
    let mut order: Vec<Vec<Point>> = vec![Vec::new(); t.edge_count()];
    for (s, st) in strands.iter().enumerate() {
        for (i, &d) in st.path.iter().enumerate() {
            order[t.edge_of(d)].push((s as u32, i as u32));
        }
    }
    for (e, list) in order.iter_mut().enumerate() {
        list.sort_by(|&(sa, ia), &(sb, ib)| {
            let x = &strands[sa as usize];
            let y = &strands[sb as usize];
            ray_cmp(t, e, (&x.path, ia as usize, x.tag), (&y.path, ib as usize, y.tag))
        });
    }
    EmbeddedSystem::assemble(t, strands, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_standard_triangulation, SurfaceType};

    fn torus() -> Triangulation {
        build_standard_triangulation(SurfaceType::new(1, 1, 0)).unwrap()
    }

    #[test]
    fn realize_slope_zero_has_two_chords() {
        let t = torus();
        let u = NormalMultiCurve::new(&t, vec![1, 0, 1]).unwrap();
        let s = realize(&t, &u).unwrap();
        assert_eq!(s.chord_count(), 2);
        assert_eq!(s.crossing_count(&t), 0);
        s.validate(&t).unwrap();
    }

    #[test]
    fn overlay_with_empty_is_realize() {
        let t = torus();
        let u = NormalMultiCurve::new(&t, vec![3, 2, 1]).unwrap();
        let a = overlay(&t, &u, &NormalMultiCurve::empty(&t)).unwrap();
        assert_eq!(a, realize(&t, &u).unwrap());
    }

    #[test]
    fn self_overlay_reduces_to_zero() {
        let t = torus();
        let u = NormalMultiCurve::new(&t, vec![3, 2, 1]).unwrap();
        let s = reduce_bigons(&t, &overlay(&t, &u, &u).unwrap());
        assert_eq!(s.crossing_count(&t), 0);
        s.validate(&t).unwrap();
    }

    #[test]
    fn slopes_one_zero_and_one_two_reduce_to_two() {
        let t = torus();
        let a = NormalMultiCurve::new(&t, vec![0, 1, 1]).unwrap();
        let b = NormalMultiCurve::new(&t, vec![2, 1, 1]).unwrap();
        let raw = overlay(&t, &a, &b).unwrap();
        assert!(raw.crossing_count(&t) >= 2);
        assert_eq!(reduce_bigons(&t, &raw).crossing_count(&t), 2);
    }
}
