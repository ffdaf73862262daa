//! Normal multicurves and closed dual-graph paths.
//!
//! A closed curve in normal position is recorded as the cyclic sequence of
//! darts it leaves triangles through. Consecutive darts `d, d'` satisfy
//! `tri(d') == tri(opp(d))`; the path is *reduced* when it never leaves a
//! triangle through the side it just entered.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{dart_slot, dart_tri, CoordinateMap, Dart, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalMultiCurve {
    coords: Vec<u32>,
    triangulation_id: u64,
}

impl NormalMultiCurve {
    pub fn new(t: &Triangulation, coords: Vec<u32>) -> Result<Self> {
        if let Some(msg) = t.admissibility_error(&coords) {
            return Err(Error::NotAdmissible(msg));
        }
        Ok(NormalMultiCurve { coords, triangulation_id: t.id() })
    }

    pub fn empty(t: &Triangulation) -> Self {
        NormalMultiCurve { coords: vec![0; t.edge_count()], triangulation_id: t.id() }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn triangulation_id(&self) -> u64 {
        self.triangulation_id
    }

    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn weight(&self) -> u64 {
        self.coords.iter().map(|&x| x as u64).sum()
    }

    pub fn check_on(&self, t: &Triangulation) -> Result<()> {
        if self.triangulation_id != t.id() {
            return Err(Error::TriangulationMismatch);
        }
        Ok(())
    }

    /// Disjoint union; only meaningful when the two are disjoint.
    pub fn add(&self, other: &NormalMultiCurve) -> Result<Self> {
        if self.triangulation_id != other.triangulation_id {
            return Err(Error::TriangulationMismatch);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(NormalMultiCurve { coords, triangulation_id: self.triangulation_id })
    }

    pub fn scaled(&self, k: u32) -> Self {
        NormalMultiCurve {
            coords: self.coords.iter().map(|x| x * k).collect(),
            triangulation_id: self.triangulation_id,
        }
    }
}

/// Moves `u` along a flip sequence. `target` must be the triangulation the
/// map ends on; admissibility is re-checked there.
pub fn transport(u: &NormalMultiCurve, m: &CoordinateMap, target: &Triangulation) -> Result<NormalMultiCurve> {
    if u.triangulation_id != m.source || target.id() != m.target {
        return Err(Error::TriangulationMismatch);
    }
    NormalMultiCurve::new(target, m.apply_coords(&u.coords))
}

/// One traced strand: darts left through and the canonical position of
/// each crossing point on its edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracedComponent {
    pub path: Vec<Dart>,
    pub positions: Vec<u32>,
}

/// Follows every normal arc of an admissible vector and returns its closed
/// components, one per strand (parallel copies are listed separately).
pub fn trace(t: &Triangulation, coords: &[u32]) -> Vec<TracedComponent> {
    let mut visited: Vec<Vec<bool>> = coords.iter().map(|&x| vec![false; x as usize]).collect();
    let mut out = Vec::new();
    for e in 0..t.edge_count() {
        for p in 0..coords[e] {
            if visited[e][p as usize] {
                continue;
            }
            let start = (t.canonical_dart(e), p);
            let (mut din, mut j) = start;
            let mut path = Vec::new();
            let mut positions = Vec::new();
            loop {
                let tri = dart_tri(din);
                let k = dart_slot(din);
                let sides = t.triangles()[tri];
                let x = |s: usize| coords[sides[s % 3] as usize];
                let ck = t.corner_arcs(coords, tri, k);
                let (slot, pos) = if j < ck { (k + 2, x(k + 2) - 1 - j) } else { (k + 1, x(k) - 1 - j) };
                let dout = (3 * tri + slot % 3) as Dart;
                let edge = t.edge_of(dout);
                let xe = coords[edge];
                let canon = if t.canonical_dart(edge) == dout { pos } else { xe - 1 - pos };
                visited[edge][canon as usize] = true;
                path.push(dout);
                positions.push(canon);
                din = t.opp(dout);
                j = xe - 1 - pos;
                if (din, j) == start {
                    break;
                }
            }
            out.push(TracedComponent { path, positions });
        }
    }
    out
}

pub fn coords_of_path(t: &Triangulation, path: &[Dart]) -> Vec<u32> {
    let mut c = vec![0u32; t.edge_count()];
    for &d in path {
        c[t.edge_of(d)] += 1;
    }
    c
}

/// Connected components with multiplicities, ordered by coordinates.
pub fn decompose(t: &Triangulation, u: &NormalMultiCurve) -> Vec<(NormalMultiCurve, u32)> {
    let mut comps: Vec<Vec<u32>> = trace(t, u.coords()).into_iter().map(|c| coords_of_path(t, &c.path)).collect();
    comps.sort();
    let mut out: Vec<(NormalMultiCurve, u32)> = Vec::new();
    for c in comps {
        match out.last_mut() {
            Some((last, m)) if last.coords == c => *m += 1,
            _ => out.push((NormalMultiCurve { coords: c, triangulation_id: t.id() }, 1)),
        }
    }
    out
}

pub fn is_connected(t: &Triangulation, u: &NormalMultiCurve) -> bool {
    !u.is_empty() && trace(t, u.coords()).len() == 1
}

/// Cyclic free reduction: removes every `d, opp(d)` backtrack.
pub fn reduce_cyclic(t: &Triangulation, path: &[Dart]) -> Vec<Dart> {
    let mut st: Vec<Dart> = Vec::with_capacity(path.len());
    for &d in path {
        if let Some(&last) = st.last() {
            if t.opp(last) == d {
                st.pop();
                continue;
            }
        }
        st.push(d);
    }
    let (mut lo, mut hi) = (0usize, st.len());
    while hi - lo >= 2 && t.opp(st[hi - 1]) == st[lo] {
        lo += 1;
        hi -= 1;
    }
    st[lo..hi].to_vec()
}

/// Reverses the direction of travel.
pub fn inverse_path(t: &Triangulation, path: &[Dart]) -> Vec<Dart> {
    path.iter().rev().map(|&d| t.opp(d)).collect()
}

/// True when the path circles a single ideal vertex (every turn the same
/// way), i.e. the curve is peripheral.
pub fn is_peripheral_path(t: &Triangulation, path: &[Dart]) -> bool {
    if path.is_empty() {
        return false;
    }
    let n = path.len();
    let turn = |i: usize| -> usize {
        let entry = dart_slot(t.opp(path[(i + n - 1) % n]));
        (dart_slot(path[i]) + 3 - entry) % 3
    };
    let first = turn(0);
    (1..n).all(|i| turn(i) == first)
}

/// Index of the lexicographically least rotation (Booth).
pub fn least_rotation<T: Ord + Copy>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let d: Vec<T> = s.iter().chain(s.iter()).copied().collect();
    let mut f: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let sj = d[j];
        let mut i = f[j - k - 1];
        while i != -1 && sj != d[k + (i + 1) as usize] {
            if sj < d[k + (i + 1) as usize] {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if sj != d[k + (i + 1) as usize] {
            if sj < d[k] {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

pub fn rotate_min(path: &[Dart]) -> Vec<Dart> {
    let r = least_rotation(path);
    let mut v = path[r..].to_vec();
    v.extend_from_slice(&path[..r]);
    v
}

/// Orientation-free canonical representative of a reduced closed path.
pub fn canonical_unoriented(t: &Triangulation, path: &[Dart]) -> Vec<Dart> {
    let a = rotate_min(path);
    let b = rotate_min(&inverse_path(t, path));
    a.min(b)
}

/// A connected closed curve as a reduced, oriented dual path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    darts: Vec<Dart>,
}

impl Loop {
    /// Reduces `path` cyclically; the result may be empty (null-homotopic).
    pub fn from_path(t: &Triangulation, path: &[Dart]) -> Self {
        Loop { darts: reduce_cyclic(t, path) }
    }

    /// The traced loop of a connected multicurve, in tracing orientation.
    pub fn from_curve(t: &Triangulation, u: &NormalMultiCurve) -> Result<Self> {
        u.check_on(t)?;
        let mut comps = trace(t, u.coords());
        if comps.len() != 1 {
            return Err(Error::NotConnected);
        }
        Ok(Loop { darts: comps.pop().unwrap().path })
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }
    pub fn len(&self) -> usize {
        self.darts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
    pub fn inverse(&self, t: &Triangulation) -> Self {
        Loop { darts: inverse_path(t, &self.darts) }
    }
    pub fn coords(&self, t: &Triangulation) -> Vec<u32> {
        coords_of_path(t, &self.darts)
    }
    pub fn is_peripheral(&self, t: &Triangulation) -> bool {
        is_peripheral_path(t, &self.darts)
    }
    pub fn to_curve(&self, t: &Triangulation) -> Result<NormalMultiCurve> {
        NormalMultiCurve::new(t, self.coords(t))
    }
    /// Rotated so its dart sequence is lexicographically least; orientation
    /// is kept.
    pub fn rotated_min(&self) -> Self {
        Loop { darts: rotate_min(&self.darts) }
    }
}
