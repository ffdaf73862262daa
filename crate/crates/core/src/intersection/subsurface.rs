//! Subsurfaces cut out by a boundary multicurve, and the projection of
//! curve collections into them.
//!
//! A subsurface is a set of complementary regions of its boundary. A curve
//! system is projected by realizing it jointly with the boundary in minimal
//! position and keeping the pieces that fall into the selected regions.
//! An arc piece is recorded through the curves surrounding it together with
//! the boundary components at its ends: the band sum of the two boundary
//! components when the ends differ, the two curves obtained by closing the
//! arc along either side of the boundary component when they agree.

use std::collections::{BTreeMap, BTreeSet};

use crate::curve::{canonical_unoriented, decompose, inverse_path, Loop, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::intersection::loop_intersection;
use crate::intersection::realize::{realize_minimal, EmbeddedSystem, Strand, StrandTag};
use crate::intersection::regions::{regions, Region};
use crate::mcg::{apply, MappingClass};
use crate::surface::{dart_tri, Dart, Triangulation};

const CIRCLE: u64 = 3 << 32;

#[inline]
fn offset(x: u64, from: u64) -> u64 {
    (x + CIRCLE - from) % CIRCLE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ComponentTopology {
    pub genus: u32,
    pub boundary: u32,
    pub punctures: u32,
    pub euler: i64,
}

/// A compact essential subsurface: the selected complementary regions of
/// its boundary multicurve.
#[derive(Debug, Clone)]
pub struct SubsurfaceSpec {
    triangulation_id: u64,
    boundary: Vec<NormalMultiCurve>,
    loops: Vec<Loop>,
    regions: Vec<Region>,
    gap_region: Vec<Vec<usize>>,
    /// `[left, right]` region of each boundary component.
    sides: Vec<[usize; 2]>,
    selected: Vec<usize>,
    topology: Vec<ComponentTopology>,
    /// Curves known to lie inside, used to tell the subsurface from its
    /// complement.
    markers: Vec<NormalMultiCurve>,
}

fn canonical_loop(t: &Triangulation, c: &NormalMultiCurve) -> Loop {
    let l = Loop::from_curve(t, c).expect("connected component");
    Loop::from_path(t, &canonical_unoriented(t, l.darts()))
}

fn strand(l: &Loop, source: u32, component: usize) -> Strand {
    Strand { path: l.darts().to_vec(), tag: StrandTag { source, component: component as u32, copy: 0 } }
}

/// Distinct connected components of a collection, sorted by coordinates.
fn components(t: &Triangulation, us: &[NormalMultiCurve]) -> Vec<NormalMultiCurve> {
    let set: BTreeSet<NormalMultiCurve> = us.iter().flat_map(|u| decompose(t, u).into_iter().map(|(c, _)| c)).collect();
    set.into_iter().collect()
}

/// Number of boundary points (strands below `nb`) before each slot of the
/// canonical order of edge `e`.
fn base_gap(sys: &EmbeddedSystem, e: usize, nb: u32, index: usize) -> usize {
    sys.edge_order(e)[..index].iter().filter(|p| p.0 < nb).count()
}

impl SubsurfaceSpec {
    /// The whole surface.
    pub fn whole(t: &Triangulation) -> Result<Self> {
        Self::build(t, Vec::new(), |_| vec![0])
    }

    /// The regions of `boundary` containing the given curves, which must be
    /// disjoint from the boundary.
    pub fn containing(t: &Triangulation, boundary: &[NormalMultiCurve], inside: &[NormalMultiCurve]) -> Result<Self> {
        let comps = components(t, boundary);
        for c in &comps {
            if canonical_loop(t, c).is_peripheral(t) {
                return Err(Error::InvalidSubsurface("peripheral boundary component".into()));
            }
        }
        let inner = components(t, inside);
        let mut chosen = BTreeSet::new();
        let probe = Self::build(t, comps.clone(), |_| Vec::new())?;
        for c in &inner {
            match probe.region_of_curve(t, c)? {
                Some(r) => {
                    chosen.insert(r);
                }
                None => return Err(Error::InvalidSubsurface("marker curve meets the boundary".into())),
            }
        }
        if chosen.is_empty() {
            return Err(Error::InvalidSubsurface("no region selected".into()));
        }
        let mut spec = Self::build(t, comps, |_| chosen.iter().copied().collect())?;
        spec.markers = inner;
        Ok(spec)
    }

    /// The union of the regions of `self`'s boundary not selected by `self`.
    pub fn complement(&self, t: &Triangulation) -> Result<Self> {
        let sel: BTreeSet<usize> = self.selected.iter().copied().collect();
        let rest: Vec<usize> = (0..self.regions.len()).filter(|r| !sel.contains(r)).collect();
        Self::build(t, self.boundary.clone(), |_| rest.clone())
    }

    fn build(
        t: &Triangulation,
        boundary: Vec<NormalMultiCurve>,
        select: impl FnOnce(&[Region]) -> Vec<usize>,
    ) -> Result<Self> {
        for c in &boundary {
            c.check_on(t)?;
        }
        let loops: Vec<Loop> = boundary.iter().map(|c| canonical_loop(t, c)).collect();
        for a in 0..loops.len() {
            for b in a + 1..loops.len() {
                if loop_intersection(t, loops[a].darts(), loops[b].darts()) > 0 {
                    return Err(Error::InvalidSubsurface("boundary components cross".into()));
                }
            }
        }
        let strands = loops.iter().enumerate().map(|(k, l)| strand(l, 0, k)).collect();
        let sys = realize_minimal(t, strands);
        let map = regions(t, &sys);
        let sides: Vec<[usize; 2]> = (0..loops.len())
            .map(|k| {
                let d = loops[k].darts()[0];
                let e = t.edge_of(d);
                let pos = sys.position((k as u32, 0)) as usize;
                let (lo, hi) = (map.gap_region[e][pos], map.gap_region[e][pos + 1]);
                if t.canonical_dart(e) == d {
                    [hi, lo]
                } else {
                    [lo, hi]
                }
            })
            .collect();
        let mut selected = select(&map.regions);
        selected.sort();
        selected.dedup();
        let mut spec = SubsurfaceSpec {
            triangulation_id: t.id(),
            boundary,
            loops,
            regions: map.regions,
            gap_region: map.gap_region,
            sides,
            selected,
            topology: Vec::new(),
            markers: Vec::new(),
        };
        spec.topology = spec.selected.iter().map(|&r| spec.region_topology(r)).collect();
        Ok(spec)
    }

    fn region_topology(&self, r: usize) -> ComponentTopology {
        let reg = &self.regions[r];
        let b = self.sides.iter().flatten().filter(|&&x| x == r).count() as i64;
        let p = reg.punctures.len() as i64;
        let genus = (2 - reg.euler - b - p) / 2;
        ComponentTopology { genus: genus as u32, boundary: b as u32, punctures: p as u32, euler: reg.euler }
    }

    /// Checks the witness conditions: every boundary component bounds the
    /// subsurface on exactly one side and every component has negative
    /// Euler characteristic and is not a pair of pants.
    pub fn validate(&self) -> Result<()> {
        if self.selected.is_empty() {
            return Err(Error::InvalidSubsurface("empty subsurface".into()));
        }
        for s in &self.sides {
            if self.is_selected(s[0]) == self.is_selected(s[1]) {
                return Err(Error::InvalidSubsurface(
                    "boundary component does not separate the subsurface from its complement".into(),
                ));
            }
        }
        for c in &self.topology {
            if c.euler >= 0 {
                return Err(Error::InvalidSubsurface("component with non-negative Euler characteristic".into()));
            }
            if c.genus == 0 && c.boundary + c.punctures == 3 {
                return Err(Error::InvalidSubsurface("pants component".into()));
            }
        }
        Ok(())
    }

    pub fn triangulation_id(&self) -> u64 {
        self.triangulation_id
    }
    pub fn boundary(&self) -> &[NormalMultiCurve] {
        &self.boundary
    }
    pub fn topology(&self) -> &[ComponentTopology] {
        &self.topology
    }
    pub fn component_count(&self) -> usize {
        self.selected.len()
    }
    pub fn is_connected(&self) -> bool {
        self.selected.len() == 1
    }
    pub fn is_selected(&self, r: usize) -> bool {
        self.selected.binary_search(&r).is_ok()
    }
    /// Total Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.topology.iter().map(|c| c.euler).sum()
    }
    pub fn genus(&self) -> u32 {
        self.topology.iter().map(|c| c.genus).sum()
    }

    /// True when every region of the boundary is selected.
    pub fn is_everything(&self) -> bool {
        self.selected.len() == self.regions.iter().filter(|r| !r.enclosed).count()
    }

    fn outside(&self, t: &Triangulation, c: &NormalMultiCurve) -> Result<bool> {
        Ok(matches!(self.region_of_curve(t, c)?, Some(r) if !self.is_selected(r)))
    }

    fn inside(&self, t: &Triangulation, c: &NormalMultiCurve) -> Result<bool> {
        Ok(matches!(self.region_of_curve(t, c)?, Some(r) if self.is_selected(r)))
    }

    /// Whether `other` lies in `self`: the boundary of `self` stays out of
    /// `other`, and the boundary and markers of `other` lie in `self`.
    pub fn contains(&self, t: &Triangulation, other: &SubsurfaceSpec) -> Result<bool> {
        self.check(t)?;
        other.check(t)?;
        if self.is_everything() {
            return Ok(true);
        }
        if other.boundary.is_empty() || other.markers.is_empty() {
            return Ok(false);
        }
        for c in &self.boundary {
            if !other.is_boundary_component(c) && !other.outside(t, c)? {
                return Ok(false);
            }
        }
        for c in &other.boundary {
            if !self.is_boundary_component(c) && !self.inside(t, c)? {
                return Ok(false);
            }
        }
        for c in &other.markers {
            if !self.inside(t, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the two subsurfaces have disjoint interiors.
    pub fn is_disjoint_from(&self, t: &Triangulation, other: &SubsurfaceSpec) -> Result<bool> {
        self.check(t)?;
        other.check(t)?;
        for (a, b) in [(self, other), (other, self)] {
            if a.markers.is_empty() && !a.boundary.is_empty() {
                return Ok(false);
            }
            if a.boundary.is_empty() {
                return Ok(false);
            }
            for c in &a.boundary {
                if !b.is_boundary_component(c) && !b.outside(t, c)? {
                    return Ok(false);
                }
            }
            for c in &a.markers {
                if !b.outside(t, c)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check(&self, t: &Triangulation) -> Result<()> {
        if self.triangulation_id != t.id() {
            return Err(Error::TriangulationMismatch);
        }
        Ok(())
    }

    fn is_boundary_component(&self, c: &NormalMultiCurve) -> bool {
        self.boundary.iter().any(|b| b == c)
    }

    /// The region of a connected curve disjoint from the boundary, or
    /// `None` if it crosses the boundary.
    pub fn region_of_curve(&self, t: &Triangulation, c: &NormalMultiCurve) -> Result<Option<usize>> {
        self.check(t)?;
        let l = canonical_loop(t, c);
        for b in &self.loops {
            if loop_intersection(t, b.darts(), l.darts()) > 0 {
                return Ok(None);
            }
        }
        let nb = self.loops.len() as u32;
        let mut strands: Vec<Strand> = self.loops.iter().enumerate().map(|(k, b)| strand(b, 0, k)).collect();
        strands.push(strand(&l, 1, 0));
        let sys = realize_minimal(t, strands);
        let e = t.edge_of(l.darts()[0]);
        let idx = sys.position((nb, 0)) as usize;
        Ok(Some(self.gap_region[e][base_gap(&sys, e, nb, idx)]))
    }

    /// Whether a connected curve meets the selected region `r` essentially:
    /// it crosses a boundary component of `r`, or lies in `r` without being
    /// peripheral there.
    fn meets_region(&self, t: &Triangulation, c: &NormalMultiCurve, l: &Loop, r: usize) -> Result<bool> {
        if l.is_peripheral(t) || self.is_boundary_component(c) {
            return Ok(false);
        }
        for (k, b) in self.loops.iter().enumerate() {
            if self.sides[k].contains(&r) && loop_intersection(t, b.darts(), l.darts()) > 0 {
                return Ok(true);
            }
        }
        Ok(self.region_of_curve(t, c)? == Some(r))
    }
}

/// True when every component of `w` is met essentially by some element of
/// the collection.
pub fn essential_intersection_check(t: &Triangulation, us: &[NormalMultiCurve], w: &SubsurfaceSpec) -> Result<bool> {
    w.check(t)?;
    let comps: Vec<(NormalMultiCurve, Loop)> = components(t, us)
        .into_iter()
        .map(|c| {
            let l = canonical_loop(t, &c);
            (c, l)
        })
        .collect();
    for &r in &w.selected {
        let mut met = false;
        for (c, l) in &comps {
            if w.meets_region(t, c, l, r)? {
                met = true;
                break;
            }
        }
        if !met {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The projection of a curve collection into a subsurface: the curves of
/// the collection lying in it, and for every arc the canonical coordinates
/// of its surrounding curves. Both lists are sorted and free of repeats.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct ArcCurveSystemInSubsurface {
    pub curves: Vec<Vec<u32>>,
    pub arcs: Vec<Vec<Vec<u32>>>,
}

impl ArcCurveSystemInSubsurface {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.arcs.is_empty()
    }

    /// All curves involved, interior curves first.
    pub fn all_curves(&self, t: &Triangulation) -> Vec<NormalMultiCurve> {
        self.curves
            .iter()
            .chain(self.arcs.iter().flatten())
            .map(|c| NormalMultiCurve::new(t, c.clone()).expect("stored coordinates are admissible"))
            .collect()
    }

    /// Image under a mapping class preserving the subsurface.
    pub fn mapped(&self, t: &Triangulation, f: &MappingClass) -> Result<Self> {
        let img = |c: &Vec<u32>| -> Result<Vec<u32>> {
            Ok(apply(t, f, &NormalMultiCurve::new(t, c.clone())?)?.into_coords())
        };
        let mut curves = self.curves.iter().map(img).collect::<Result<Vec<_>>>()?;
        curves.sort();
        curves.dedup();
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            let mut s = a.iter().map(img).collect::<Result<Vec<_>>>()?;
            s.sort();
            s.dedup();
            arcs.push(s);
        }
        arcs.sort();
        arcs.dedup();
        Ok(ArcCurveSystemInSubsurface { curves, arcs })
    }

    /// Stable digest of the canonical form.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for c in &self.curves {
            h.update(b"c");
            for x in c {
                h.update(x.to_le_bytes());
            }
        }
        for a in &self.arcs {
            h.update(b"a");
            for c in a {
                h.update(b"s");
                for x in c {
                    h.update(x.to_le_bytes());
                }
            }
        }
        hex::encode(&h.finalize()[..12])
    }
}

struct Crossing {
    /// Chord index along the projected strand.
    i: usize,
    /// Distance from the chord's entry, for ordering within a chord.
    along: u64,
    beta: usize,
    /// Chord index along the boundary strand.
    j: usize,
    beta_along: u64,
    goes_left: bool,
}

fn crossings_along(t: &Triangulation, sys: &EmbeddedSystem, s: u32, nb: u32) -> Vec<Crossing> {
    let n = sys.strands()[s as usize].path.len();
    let mut out = Vec::new();
    for i in 0..n {
        let path = &sys.strands()[s as usize].path;
        let tri = dart_tri(path[i]);
        let (p, q) = sys.chord_ends(t, (s, i as u32));
        for &c in sys.chords_in(tri) {
            if c.0 >= nb {
                continue;
            }
            let (r, sx) = sys.chord_ends(t, c);
            let p_in_rs = offset(p, r) < offset(sx, r);
            let q_in_rs = offset(q, r) < offset(sx, r);
            if p_in_rs == q_in_rs {
                continue;
            }
            let a = if offset(r, p) < offset(q, p) { r } else { sx };
            let b = if p_in_rs { p } else { q };
            out.push(Crossing {
                i,
                along: offset(a, p),
                beta: c.0 as usize,
                j: c.1 as usize,
                beta_along: offset(b, r),
                goes_left: p_in_rs,
            });
        }
    }
    out.sort_by_key(|x| (x.i, x.along));
    out
}

/// Darts of `path` from chord `from` up to (not including) chord `to`,
/// going forward; `full` forces a whole turn when the indices agree.
fn forward(path: &[Dart], from: usize, to: usize, full: bool) -> Vec<Dart> {
    let n = path.len();
    let mut len = (to + n - from) % n;
    if len == 0 && full {
        len = n;
    }
    (0..len).map(|k| path[(from + k) % n]).collect()
}

/// Darts going backwards against `path` from chord `from` to chord `to`.
fn backward(t: &Triangulation, path: &[Dart], from: usize, to: usize, full: bool) -> Vec<Dart> {
    let n = path.len();
    let mut len = (from + n - to) % n;
    if len == 0 && full {
        len = n;
    }
    (1..=len).map(|k| t.opp(path[(from + n - k) % n])).collect()
}

/// Projects a collection into `w`.
pub fn subsurface_cut(
    t: &Triangulation,
    us: &[NormalMultiCurve],
    w: &SubsurfaceSpec,
) -> Result<ArcCurveSystemInSubsurface> {
    if !essential_intersection_check(t, us, w)? {
        return Err(Error::NotInProjectionDomain);
    }
    let nb = w.loops.len() as u32;
    let mut strands: Vec<Strand> = w.loops.iter().enumerate().map(|(k, b)| strand(b, 0, k)).collect();
    let mut inner: Vec<NormalMultiCurve> = Vec::new();
    for c in components(t, us) {
        let l = canonical_loop(t, &c);
        if l.is_peripheral(t) || w.is_boundary_component(&c) {
            continue;
        }
        strands.push(strand(&l, 1, inner.len()));
        inner.push(c);
    }
    let sys = realize_minimal(t, strands);
    let keep = |c: &NormalMultiCurve| -> bool {
        let l = canonical_loop(t, c);
        !l.is_empty() && !l.is_peripheral(t) && !w.is_boundary_component(c)
    };
    let mut curves: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut arcs: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    for (k, c) in inner.iter().enumerate() {
        let s = nb + k as u32;
        let path = sys.strands()[s as usize].path.clone();
        let xs = crossings_along(t, &sys, s, nb);
        if xs.is_empty() {
            let e = t.edge_of(path[0]);
            let idx = sys.position((s, 0)) as usize;
            if w.is_selected(w.gap_region[e][base_gap(&sys, e, nb, idx)]) {
                curves.insert(c.coords().to_vec());
            }
            continue;
        }
        let m = xs.len();
        for a in 0..m {
            let (x, y) = (&xs[a], &xs[(a + 1) % m]);
            let region = w.sides[x.beta][if x.goes_left { 0 } else { 1 }];
            let exit = w.sides[y.beta][if y.goes_left { 1 } else { 0 }];
            if region != exit {
                return Err(Error::Invalid("inconsistent sides along a projected strand".into()));
            }
            if !w.is_selected(region) {
                continue;
            }
            let wraps = a + 1 == m;
            let arc = forward(&path, x.i, y.i, wraps);
            let arc_inv = inverse_path(t, &arc);
            let mut closed: Vec<Vec<Dart>> = Vec::new();
            if x.beta != y.beta {
                let bs = w.loops[x.beta].darts();
                let bt = w.loops[y.beta].darts();
                // orient both boundary components with the region on their left
                let t_loop = if !y.goes_left { forward(bt, y.j, y.j, true) } else { backward(t, bt, y.j, y.j, true) };
                let s_loop = if x.goes_left { forward(bs, x.j, x.j, true) } else { backward(t, bs, x.j, x.j, true) };
                let mut p = arc.clone();
                p.extend(t_loop);
                p.extend(arc_inv);
                p.extend(s_loop);
                closed.push(p);
            } else {
                let b = w.loops[x.beta].darts();
                let ahead = y.beta_along < x.beta_along;
                let mut p = arc.clone();
                p.extend(forward(b, y.j, x.j, y.j == x.j && !ahead));
                closed.push(p);
                let mut q = arc;
                q.extend(backward(t, b, y.j, x.j, y.j == x.j && ahead));
                closed.push(q);
            }
            let mut set: Vec<Vec<u32>> = Vec::new();
            for p in closed {
                let l = Loop::from_path(t, &p);
                if l.is_empty() {
                    continue;
                }
                let cur = l.to_curve(t)?;
                if keep(&cur) {
                    set.push(cur.into_coords());
                }
            }
            set.sort();
            set.dedup();
            if !set.is_empty() {
                arcs.insert(set);
            }
        }
    }
    Ok(ArcCurveSystemInSubsurface { curves: curves.into_iter().collect(), arcs: arcs.into_iter().collect() })
}

/// True when the collection lies in `w` and fills it: every complementary
/// region inside `w` is a disk, a once-punctured disk, or an annulus
/// around a boundary component.
pub fn is_filling_in(t: &Triangulation, us: &[NormalMultiCurve], w: &SubsurfaceSpec) -> Result<bool> {
    w.check(t)?;
    let nb = w.loops.len() as u32;
    let mut strands: Vec<Strand> = w.loops.iter().enumerate().map(|(k, b)| strand(b, 0, k)).collect();
    for c in components(t, us) {
        if w.is_boundary_component(&c) {
            continue;
        }
        match w.region_of_curve(t, &c)? {
            Some(r) if w.is_selected(r) => {}
            _ => return Ok(false),
        }
        let l = canonical_loop(t, &c);
        let k = strands.len();
        strands.push(strand(&l, 1, k));
    }
    let sys = realize_minimal(t, strands);
    let map = regions(t, &sys);
    let mut inside: BTreeMap<usize, usize> = BTreeMap::new();
    for (e, row) in map.gap_region.iter().enumerate() {
        for (g, &r) in row.iter().enumerate() {
            inside.entry(r).or_insert_with(|| w.gap_region[e][base_gap(&sys, e, nb, g)]);
        }
    }
    for (r, reg) in map.regions.iter().enumerate() {
        if reg.enclosed {
            continue;
        }
        if !w.is_selected(inside[&r]) {
            continue;
        }
        let annulus = reg.euler == 0 && reg.punctures.is_empty() && reg.touching.iter().any(|&s| s < nb);
        if !(reg.is_disk() || reg.is_punctured_disk() || annulus) {
            return Ok(false);
        }
    }
    Ok(true)
}
