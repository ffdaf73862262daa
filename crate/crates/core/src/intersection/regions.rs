//! Complementary regions of a realized curve system.
//!
//! Inside one triangle the chords cut the disk into faces. A face touching
//! the boundary is recognised by which chords it lies between; faces that
//! touch no boundary are enclosed by crossing chords and are disks on their
//! own. Faces in neighbouring triangles are joined along the gaps between
//! consecutive points on an edge.

use std::collections::{BTreeSet, HashMap};

use crate::curve::{canonical_unoriented, decompose, Loop, NormalMultiCurve};
use crate::intersection::realize::{realize_minimal, EmbeddedSystem, Strand, StrandTag};
use crate::surface::{dart_slot, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    /// Euler characteristic of the open region (punctures removed).
    pub euler: i64,
    /// Ideal vertices (punctures) inside the region.
    pub punctures: BTreeSet<usize>,
    /// Strands with an endpoint adjacent to the region.
    pub touching: BTreeSet<u32>,
    /// Region bounded by crossing chords inside a single triangle.
    pub enclosed: bool,
}

impl Region {
    pub fn is_disk(&self) -> bool {
        self.euler == 1 && self.punctures.is_empty()
    }
    pub fn is_punctured_disk(&self) -> bool {
        self.euler == 0 && self.punctures.len() == 1
    }
}

#[derive(Debug, Clone)]
pub struct RegionMap {
    pub regions: Vec<Region>,
    /// For each edge, the region of each gap between consecutive points,
    /// in canonical order (`points + 1` gaps).
    pub gap_region: Vec<Vec<usize>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

#[inline]
fn point_key(slot: usize, along: u64) -> u64 {
    ((slot as u64) << 33) | (2 * along + 1)
}

#[inline]
fn gap_key(slot: usize, along: u64) -> u64 {
    ((slot as u64) << 33) | (2 * along)
}

pub fn regions(t: &Triangulation, sys: &EmbeddedSystem) -> RegionMap {
    let nt = t.triangle_count();
    // face id of each (triangle, slot, along-gap)
    let mut gap_face: Vec<[Vec<usize>; 3]> = Vec::with_capacity(nt);
    let mut face_punct: Vec<BTreeSet<usize>> = Vec::new();
    let mut face_touch: Vec<BTreeSet<u32>> = Vec::new();
    let mut enclosed = 0usize;
    for tri in 0..nt {
        let chords = sys.chords_in(tri);
        let ends: Vec<(u64, u64)> = chords
            .iter()
            .map(|&c| {
                let (a, b) = sys.chord_ends(t, c);
                let ka = point_key((a >> 32) as usize, a & 0xffff_ffff);
                let kb = point_key((b >> 32) as usize, b & 0xffff_ffff);
                (ka.min(kb), ka.max(kb))
            })
            .collect();
        // strand owning each point key, for adjacency
        let mut owner: HashMap<u64, u32> = HashMap::new();
        for (c, e) in chords.iter().zip(&ends) {
            owner.insert(e.0, c.0);
            owner.insert(e.1, c.0);
        }
        let words = chords.len().div_ceil(64).max(1);
        let mut sig_face: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut per_side: [Vec<usize>; 3] = Default::default();
        for (k, side) in per_side.iter_mut().enumerate() {
            let x = sys.edge_order(t.edge_of((3 * tri + k) as u32)).len() as u64;
            for a in 0..=x {
                let g = gap_key(k, a);
                let mut sig = vec![0u64; words];
                for (ci, &(lo, hi)) in ends.iter().enumerate() {
                    if lo < g && g < hi {
                        sig[ci / 64] |= 1 << (ci % 64);
                    }
                }
                let next = face_punct.len();
                let f = *sig_face.entry(sig).or_insert_with(|| {
                    face_punct.push(BTreeSet::new());
                    face_touch.push(BTreeSet::new());
                    next
                });
                if a == 0 {
                    face_punct[f].insert(t.corner_vertex(tri, k));
                }
                if a > 0 {
                    face_touch[f].insert(owner[&point_key(k, a - 1)]);
                }
                if a < x {
                    face_touch[f].insert(owner[&point_key(k, a)]);
                }
                side.push(f);
            }
        }
        let crossings = sys.triangle_crossing_count(t, tri);
        let total_faces = 1 + chords.len() + crossings;
        enclosed += total_faces - sig_face.len();
        gap_face.push(per_side);
    }

    let nf = face_punct.len();
    let mut dsu = Dsu((0..nf).collect());
    for e in 0..t.edge_count() {
        let [d0, d1] = t.edge_darts(e);
        let x = sys.edge_order(e).len();
        for g in 0..=x {
            let f0 = gap_face[d0 as usize / 3][dart_slot(d0)][g];
            let f1 = gap_face[d1 as usize / 3][dart_slot(d1)][x - g];
            dsu.union(f0, f1);
        }
    }
    let mut root_region: HashMap<usize, usize> = HashMap::new();
    let mut regions: Vec<Region> = Vec::new();
    let mut region_of = vec![0usize; nf];
    for f in 0..nf {
        let r = dsu.find(f);
        let next = regions.len();
        let id = *root_region.entry(r).or_insert_with(|| {
            regions.push(Region { euler: 0, punctures: BTreeSet::new(), touching: BTreeSet::new(), enclosed: false });
            next
        });
        region_of[f] = id;
        regions[id].euler += 1;
        regions[id].punctures.extend(face_punct[f].iter().copied());
        regions[id].touching.extend(face_touch[f].iter().copied());
    }
    let mut gap_region = Vec::with_capacity(t.edge_count());
    for e in 0..t.edge_count() {
        let d0 = t.canonical_dart(e);
        let x = sys.edge_order(e).len();
        let row: Vec<usize> = (0..=x).map(|g| region_of[gap_face[d0 as usize / 3][dart_slot(d0)][g]]).collect();
        for &r in &row {
            regions[r].euler -= 1;
        }
        gap_region.push(row);
    }
    for _ in 0..enclosed {
        regions.push(Region { euler: 1, punctures: BTreeSet::new(), touching: BTreeSet::new(), enclosed: true });
    }
    RegionMap { regions, gap_region }
}

/// Distinct essential-or-peripheral components of a collection, as
/// canonically oriented loops, in a deterministic order.
pub fn distinct_components(t: &Triangulation, us: &[NormalMultiCurve]) -> Vec<(Vec<u32>, Loop)> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for u in us {
        for (c, _) in decompose(t, u) {
            seen.insert(c.into_coords());
        }
    }
    seen.into_iter()
        .map(|c| {
            let u = NormalMultiCurve::new(t, c.clone()).expect("component of admissible vector");
            let l = Loop::from_curve(t, &u).expect("connected");
            let canon = canonical_unoriented(t, l.darts());
            (c, Loop::from_path(t, &canon))
        })
        .collect()
}

/// Minimal-position realization of the distinct components, one strand
/// each; strand `k` is the `k`-th entry of `distinct_components`.
pub fn minimal_realization(t: &Triangulation, us: &[NormalMultiCurve]) -> EmbeddedSystem {
    let strands = distinct_components(t, us)
        .into_iter()
        .enumerate()
        .map(|(k, (_, l))| Strand {
            path: l.darts().to_vec(),
            tag: StrandTag { source: 0, component: k as u32, copy: 0 },
        })
        .collect();
    realize_minimal(t, strands)
}

/// True when every complementary region of the collection is a disk or a
/// once-punctured disk.
pub fn is_filling_collection(t: &Triangulation, us: &[NormalMultiCurve]) -> bool {
    let sys = minimal_realization(t, us);
    regions(t, &sys).regions.iter().all(|r| r.is_disk() || r.is_punctured_disk())
}

pub fn is_filling(t: &Triangulation, u: &NormalMultiCurve) -> bool {
    is_filling_collection(t, std::slice::from_ref(u))
}
