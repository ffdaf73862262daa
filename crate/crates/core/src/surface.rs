//! Punctured surfaces, ideal triangulations and flips.
//!
//! A triangulation is stored as a list of counter-clockwise triangles whose
//! sides carry edge ids; every edge id occurs on exactly two sides and the
//! two sides are glued orientation-reversingly. A *dart* `3 * t + k` names
//! side `k` of triangle `t`, read as "leave triangle `t` through side `k`".
//! Side `k` runs from corner `k` to corner `k + 1`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceType {
    pub genus: u32,
    pub punctures: u32,
    #[serde(default)]
    pub boundary_components: u32,
}

impl SurfaceType {
    pub const fn new(genus: u32, punctures: u32, boundary_components: u32) -> Self {
        SurfaceType { genus, punctures, boundary_components }
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(*self)
    }

    /// Punctures plus boundary components; boundary is treated as punctures
    /// for every coordinate computation.
    pub fn ends(&self) -> u32 {
        self.punctures + self.boundary_components
    }

    pub fn supports_triangulation(&self) -> bool {
        self.ends() >= 1 && self.euler_characteristic() < 0
    }

    pub fn edge_count(&self) -> usize {
        (6 * self.genus as i64 - 6 + 3 * self.ends() as i64) as usize
    }

    pub fn triangle_count(&self) -> usize {
        (4 * self.genus as i64 - 4 + 2 * self.ends() as i64) as usize
    }
}

impl std::fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "S_{{{},{}", self.genus, self.punctures)?;
        if self.boundary_components > 0 {
            write!(f, ",b={}", self.boundary_components)?;
        }
        write!(f, "}}")
    }
}

pub fn euler_characteristic(s: SurfaceType) -> i64 {
    2 - 2 * s.genus as i64 - s.punctures as i64 - s.boundary_components as i64
}

pub type Dart = u32;

#[inline]
pub fn dart(tri: usize, slot: usize) -> Dart {
    (3 * tri + slot) as Dart
}

#[inline]
pub fn dart_tri(d: Dart) -> usize {
    d as usize / 3
}

#[inline]
pub fn dart_slot(d: Dart) -> usize {
    d as usize % 3
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    surface: SurfaceType,
    tri_edges: Vec<[u32; 3]>,
    glue: Vec<Dart>,
    edge_darts: Vec<[Dart; 2]>,
    corner_vertex: Vec<u32>,
    vertex_count: usize,
    labels: Vec<String>,
    id: u64,
}

impl Triangulation {
    /// Assembles a triangulation from counter-clockwise triangles given by
    /// their side edge ids. Triangles are put in a canonical order so that
    /// equal combinatorics always produce equal dart numbering.
    pub fn from_triangles(surface: SurfaceType, triangles: Vec<[u32; 3]>, labels: Vec<String>) -> Result<Self> {
        let edge_count = labels.len();
        let mut canon: Vec<[u32; 3]> = triangles
            .into_iter()
            .map(|t| {
                let rots = [[t[0], t[1], t[2]], [t[1], t[2], t[0]], [t[2], t[0], t[1]]];
                *rots.iter().min().unwrap()
            })
            .collect();
        canon.sort();

        let mut seen: Vec<Vec<Dart>> = vec![Vec::new(); edge_count];
        for (t, sides) in canon.iter().enumerate() {
            for (k, &e) in sides.iter().enumerate() {
                let e = e as usize;
                if e >= edge_count {
                    return Err(Error::NoSuchEdge(e));
                }
                seen[e].push(dart(t, k));
            }
        }
        let mut glue = vec![0; canon.len() * 3];
        let mut edge_darts = Vec::with_capacity(edge_count);
        for (e, ds) in seen.iter().enumerate() {
            if ds.len() != 2 {
                return Err(Error::Invalid(format!("edge {e} appears on {} sides instead of 2", ds.len())));
            }
            glue[ds[0] as usize] = ds[1];
            glue[ds[1] as usize] = ds[0];
            edge_darts.push([ds[0], ds[1]]);
        }

        // Corner classes: corner k of t is the start of side k.
        let n = canon.len() * 3;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for d in 0..n as u32 {
            let o = glue[d as usize];
            let (t, k) = (dart_tri(d), dart_slot(d));
            let (t2, k2) = (dart_tri(o), dart_slot(o));
            let a = find(&mut parent, 3 * t + k);
            let b = find(&mut parent, 3 * t2 + (k2 + 1) % 3);
            parent[a] = b;
        }
        let mut corner_vertex = vec![0u32; n];
        let mut ids = std::collections::HashMap::new();
        for c in 0..n {
            let r = find(&mut parent, c);
            let next = ids.len() as u32;
            corner_vertex[c] = *ids.entry(r).or_insert(next);
        }
        let vertex_count = ids.len();

        let mut h = DefaultHasher::new();
        canon.hash(&mut h);
        edge_count.hash(&mut h);
        let id = h.finish();

        let tri =
            Triangulation { surface, tri_edges: canon, glue, edge_darts, corner_vertex, vertex_count, labels, id };
        tri.validate()?;
        Ok(tri)
    }

    fn validate(&self) -> Result<()> {
        let s = self.surface;
        if self.edge_count() != s.edge_count() || self.triangle_count() != s.triangle_count() {
            return Err(Error::Invalid(format!(
                "counts ({} edges, {} triangles) do not match {s}",
                self.edge_count(),
                self.triangle_count()
            )));
        }
        if self.vertex_count != s.ends() as usize {
            return Err(Error::Invalid(format!("{} ideal vertices but {s} has {} ends", self.vertex_count, s.ends())));
        }
        // connectivity of the glued complex
        let mut seen = vec![false; self.triangle_count()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let o = dart_tri(self.glue[3 * t + k]);
                if !seen[o] {
                    seen[o] = true;
                    stack.push(o);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("triangulation is disconnected".into()));
        }
        Ok(())
    }

    pub fn surface(&self) -> SurfaceType {
        self.surface
    }
    pub fn id(&self) -> u64 {
        self.id
    }
    pub fn edge_count(&self) -> usize {
        self.edge_darts.len()
    }
    pub fn triangle_count(&self) -> usize {
        self.tri_edges.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.tri_edges
    }
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn opp(&self, d: Dart) -> Dart {
        self.glue[d as usize]
    }
    #[inline]
    pub fn edge_of(&self, d: Dart) -> usize {
        self.tri_edges[dart_tri(d)][dart_slot(d)] as usize
    }
    #[inline]
    pub fn edge_darts(&self, e: usize) -> [Dart; 2] {
        self.edge_darts[e]
    }
    /// The side of `e` whose position coordinates are used as the edge's own.
    #[inline]
    pub fn canonical_dart(&self, e: usize) -> Dart {
        self.edge_darts[e][0]
    }
    /// Ideal vertex at corner `k` of triangle `t`.
    #[inline]
    pub fn corner_vertex(&self, t: usize, k: usize) -> usize {
        self.corner_vertex[3 * t + k] as usize
    }
    pub fn dart_count(&self) -> usize {
        self.glue.len()
    }

    pub fn is_flippable(&self, e: usize) -> bool {
        e < self.edge_count() && {
            let [a, b] = self.edge_darts[e];
            dart_tri(a) != dart_tri(b)
        }
    }

    /// Flips edge `e`; the new diagonal keeps the id `e`.
    pub fn flip(&self, e: usize) -> Result<(Triangulation, CoordinateMap)> {
        if e >= self.edge_count() {
            return Err(Error::NoSuchEdge(e));
        }
        if !self.is_flippable(e) {
            return Err(Error::UnflippableEdge(e));
        }
        let [d1, d2] = self.edge_darts[e];
        let (t, k) = (dart_tri(d1), dart_slot(d1));
        let (u, m) = (dart_tri(d2), dart_slot(d2));
        let te = self.tri_edges[t];
        let ue = self.tri_edges[u];
        let (b1, c1) = (te[(k + 1) % 3], te[(k + 2) % 3]);
        let (a2, d2e) = (ue[(m + 1) % 3], ue[(m + 2) % 3]);
        let mut tris: Vec<[u32; 3]> =
            self.tri_edges.iter().enumerate().filter(|(i, _)| *i != t && *i != u).map(|(_, s)| *s).collect();
        let e32 = e as u32;
        tris.push([c1, a2, e32]);
        tris.push([d2e, b1, e32]);
        let target = Triangulation::from_triangles(self.surface, tris, self.labels.clone())?;
        let map = CoordinateMap {
            source: self.id,
            target: target.id,
            steps: vec![FlipStep { edge: e, quad: [a2 as usize, d2e as usize, b1 as usize, c1 as usize] }],
        };
        Ok((target, map))
    }

    pub fn is_admissible(&self, coords: &[u32]) -> bool {
        self.admissibility_error(coords).is_none()
    }

    /// Curve-only admissibility: per triangle the sum is even and each
    /// coordinate is at most the sum of the other two.
    pub fn admissibility_error(&self, coords: &[u32]) -> Option<String> {
        if coords.len() != self.edge_count() {
            return Some(format!("expected {} coordinates, got {}", self.edge_count(), coords.len()));
        }
        for (t, s) in self.tri_edges.iter().enumerate() {
            let x = [coords[s[0] as usize] as u64, coords[s[1] as usize] as u64, coords[s[2] as usize] as u64];
            let sum = x[0] + x[1] + x[2];
            if !sum.is_multiple_of(2) {
                return Some(format!("odd sum in triangle {t}"));
            }
            for i in 0..3 {
                if 2 * x[i] > sum {
                    return Some(format!("triangle inequality fails in triangle {t}"));
                }
            }
        }
        None
    }

    /// Number of normal arcs cutting corner `k` of triangle `t`.
    #[inline]
    pub fn corner_arcs(&self, coords: &[u32], t: usize, k: usize) -> u32 {
        let s = self.tri_edges[t];
        let prev = coords[s[(k + 2) % 3] as usize];
        let cur = coords[s[k] as usize];
        let next = coords[s[(k + 1) % 3] as usize];
        (prev + cur - next) / 2
    }
}

/// Builds the fixed triangulation used for a surface type.
///
/// Genus g >= 1: the 4g-gon with side word a1 b1 a1^-1 b1^-1 ... fanned from
/// its first corner; edge `2k` is a_(k+1), edge `2k + 1` is b_(k+1), then the
/// fan diagonals in order. Genus 0: two triangles glued along their
/// boundaries. Every remaining end is added by subdividing triangle 0 with a
/// new interior vertex (three new edges).
pub fn build_standard_triangulation(s: SurfaceType) -> Result<Triangulation> {
    let (tris, edges, _) = standard_raw(s)?;
    let labels = (0..edges).map(|i| format!("e{i}")).collect();
    Triangulation::from_triangles(s, tris, labels)
}

/// The uncanonicalized standard triangles, the edge count, and for genus
/// at least one the (triangle, slot) of each polygon side.
///
/// Genus `g >= 1`: a `4g`-gon with side word `a1 b1 a1' b1' a2 b2 ...`,
/// triangulated as a fan from the corner before side 0. Side `4k` and
/// `4k + 2` carry edge `2k`, sides `4k + 1` and `4k + 3` edge `2k + 1`;
/// diagonals follow. Genus 0 starts from the thrice-punctured sphere. Every
/// further end is added by subdividing triangle 0 at a new vertex.
pub(crate) fn standard_raw(s: SurfaceType) -> Result<(Vec<[u32; 3]>, u32, Vec<(usize, usize)>)> {
    if !s.supports_triangulation() {
        return Err(Error::UnsupportedSurface(format!(
            "{s} (needs at least one end and negative Euler characteristic)"
        )));
    }
    let (mut tris, mut edges, mut ends, mut sides) = if s.genus == 0 {
        (vec![[0u32, 1, 2], [0, 2, 1]], 3u32, 3u32, Vec::new())
    } else {
        let g = s.genus as usize;
        let n = 4 * g;
        let side_edge = |i: usize| -> u32 {
            let k = i / 4;
            match i % 4 {
                0 | 2 => (2 * k) as u32,
                _ => (2 * k + 1) as u32,
            }
        };
        let diag = |j: usize| -> u32 { (2 * g + j - 2) as u32 };
        let mut tris = Vec::with_capacity(n - 2);
        for j in 0..n - 2 {
            let s0 = if j == 0 { side_edge(0) } else { diag(j + 1) };
            let s1 = side_edge(j + 1);
            let s2 = if j == n - 3 { side_edge(n - 1) } else { diag(j + 2) };
            tris.push([s0, s1, s2]);
        }
        let mut sides = vec![(0, 0)];
        sides.extend((1..n - 1).map(|i| (i - 1, 1)));
        sides.push((n - 3, 2));
        (tris, (6 * g - 3) as u32, 1u32, sides)
    };
    while ends < s.ends() {
        let [x, y, z] = tris[0];
        let (n0, n1, n2) = (edges, edges + 1, edges + 2);
        let (ty, tz) = (tris.len(), tris.len() + 1);
        tris[0] = [x, n1, n0];
        tris.push([y, n2, n1]);
        tris.push([z, n0, n2]);
        for loc in sides.iter_mut() {
            match *loc {
                (0, 1) => *loc = (ty, 0),
                (0, 2) => *loc = (tz, 0),
                _ => {}
            }
        }
        edges += 3;
        ends += 1;
    }
    Ok((tris, edges, sides))
}

/// Dart of each polygon side of the standard triangulation, pointing out
/// of the polygon.
pub fn polygon_side_darts(t: &Triangulation) -> Result<Vec<Dart>> {
    let s = t.surface();
    let (raw, _, sides) = standard_raw(s)?;
    if s.genus == 0 || build_standard_triangulation(s)?.id() != t.id() {
        return Err(Error::Invalid("not a standard triangulation of positive genus".into()));
    }
    // raw triangle -> (canonical index, rotation)
    let mut used = vec![false; t.triangle_count()];
    let mut place = Vec::with_capacity(raw.len());
    for r in &raw {
        let rots = [[r[0], r[1], r[2]], [r[1], r[2], r[0]], [r[2], r[0], r[1]]];
        let k = (0..3).min_by_key(|&k| rots[k]).unwrap();
        let idx =
            (0..t.triangle_count()).find(|&c| !used[c] && t.triangles()[c] == rots[k]).expect("raw triangle present");
        used[idx] = true;
        place.push((idx, k));
    }
    Ok(sides
        .iter()
        .map(|&(tri, slot)| {
            let (c, k) = place[tri];
            dart(c, (slot + 3 - k) % 3)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStep {
    pub edge: usize,
    /// Quadrilateral sides around the flipped edge in cyclic order.
    pub quad: [usize; 4],
}

/// Piecewise-linear transport of normal coordinates along a flip sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateMap {
    pub source: u64,
    pub target: u64,
    pub steps: Vec<FlipStep>,
}

impl CoordinateMap {
    pub fn identity(t: &Triangulation) -> Self {
        CoordinateMap { source: t.id(), target: t.id(), steps: Vec::new() }
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &CoordinateMap) -> Result<Self> {
        if self.target != next.source {
            return Err(Error::TriangulationMismatch);
        }
        self.steps.extend(next.steps.iter().cloned());
        self.target = next.target;
        Ok(self)
    }

    pub fn apply_coords(&self, coords: &[u32]) -> Vec<u32> {
        let mut x = coords.to_vec();
        for s in &self.steps {
            let [a, b, c, d] = s.quad;
            let new = (x[a] + x[c]).max(x[b] + x[d]) - x[s.edge];
            x[s.edge] = new;
        }
        x
    }
}

/// Applies a flip word, returning the final triangulation and composed map.
pub fn flip_sequence(t: &Triangulation, edges: &[usize]) -> Result<(Triangulation, CoordinateMap)> {
    let mut cur = t.clone();
    let mut map = CoordinateMap::identity(t);
    for &e in edges {
        let (next, m) = cur.flip(e)?;
        map = map.then(&m)?;
        cur = next;
    }
    Ok((cur, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(euler_characteristic(SurfaceType::new(0, 0, 0)), 2);
        assert_eq!(euler_characteristic(SurfaceType::new(1, 1, 0)), -1);
        assert_eq!(euler_characteristic(SurfaceType::new(2, 0, 1)), -3);
    }

    #[test]
    fn standard_counts() {
        let t = build_standard_triangulation(SurfaceType::new(1, 1, 0)).unwrap();
        assert_eq!((t.edge_count(), t.triangle_count()), (3, 2));
        let t = build_standard_triangulation(SurfaceType::new(0, 4, 0)).unwrap();
        assert_eq!((t.edge_count(), t.triangle_count()), (6, 4));
        for g in 0..4 {
            for p in 1..5 {
                let s = SurfaceType::new(g, p, 0);
                if !s.supports_triangulation() {
                    continue;
                }
                let t = build_standard_triangulation(s).unwrap();
                assert_eq!(t.vertex_count(), p as usize);
            }
        }
        let t = build_standard_triangulation(SurfaceType::new(2, 0, 1)).unwrap();
        assert_eq!(t.edge_count(), 9);
    }

    #[test]
    fn unsupported_surfaces() {
        for s in [SurfaceType::new(0, 2, 0), SurfaceType::new(2, 0, 0), SurfaceType::new(0, 3, 0 /* ok */)] {
            let r = build_standard_triangulation(s);
            if s.supports_triangulation() {
                assert!(r.is_ok());
            } else {
                assert!(matches!(r, Err(Error::UnsupportedSurface(_))));
            }
        }
    }

    #[test]
    fn standard_is_deterministic() {
        let s = SurfaceType::new(2, 2, 0);
        assert_eq!(build_standard_triangulation(s).unwrap(), build_standard_triangulation(s).unwrap());
    }

    #[test]
    fn flip_twice_restores_triangulation() {
        let t = build_standard_triangulation(SurfaceType::new(1, 2, 0)).unwrap();
        for e in 0..t.edge_count() {
            if !t.is_flippable(e) {
                continue;
            }
            let (t1, _) = t.flip(e).unwrap();
            let (t2, _) = t1.flip(e).unwrap();
            assert_eq!(t2.id(), t.id(), "edge {e}");
        }
    }

    #[test]
    fn zero_vector_transports_to_zero() {
        let t = build_standard_triangulation(SurfaceType::new(0, 5, 0)).unwrap();
        let (_, m) = t.flip(0).or_else(|_| t.flip(1)).unwrap();
        assert!(m.apply_coords(&vec![0; t.edge_count()]).iter().all(|&x| x == 0));
    }
}
