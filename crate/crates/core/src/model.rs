//! Finite balls of the orbit model of a base collection.
//!
//! Vertices are images `g·mu` of a base collection, identified by their
//! canonical coordinates. From a vertex with witness word `g` the search
//! proposes `g·h·z^±1·mu` for every generator `z` and every stabilizer word
//! `h` up to a fixed length, joined by an edge of length `weight(z)`.
//! Conjugates are applied as twists along the `g`-images of the generating
//! curves, so a vertex never replays its whole word.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curve::{coords_of_path, decompose, Loop, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::intersection::collection_intersection;
use crate::intersection::subsurface::{is_filling_in, SubsurfaceSpec};
use crate::mcg::{
    component_multiset, dehn_twist, twist_multicurve, twist_path, Generator, GeneratorSet, MappingClass, TwistCurve,
};
use crate::registry::{standard_registry, CurveRegistry};
use crate::surface::{build_standard_triangulation, Dart, SurfaceType, Triangulation};

const FAMILIES: &[&str] = &["alpha", "beta", "gamma", "delta", "hole", "sigma", "omega"];

/// Enumeration key of a registered name: handle first, then family.
fn name_key(name: &str) -> Option<(usize, usize)> {
    let (rank, fam) = FAMILIES.iter().enumerate().find(|(_, f)| name.starts_with(**f))?;
    let k: usize = name[fam.len()..].parse().ok()?;
    let handle = if *fam == "gamma" { k + 1 } else { k };
    Some((handle, rank))
}

/// One truncation of an exhaustion, a surface of genus `g` with one end.
#[derive(Debug, Clone)]
pub struct Level {
    pub triangulation: Triangulation,
    pub registry: CurveRegistry,
}

impl Level {
    pub fn surface(&self) -> SurfaceType {
        self.triangulation.surface()
    }

    pub fn curve(&self, name: &str) -> Result<NormalMultiCurve> {
        self.registry.get(name).cloned()
    }

    pub fn curves(&self, names: &[String]) -> Result<Vec<NormalMultiCurve>> {
        names.iter().map(|n| self.curve(n)).collect()
    }

    /// Name of the curve cutting this level off from the rest of the
    /// exhausted surface.
    pub fn boundary_name(&self) -> String {
        format!("delta{}", self.surface().genus)
    }
}

/// The base subsurface, by registered curve names: its boundary and marker
/// curves inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaDecl {
    pub boundary: Vec<String>,
    pub inside: Vec<String>,
}

/// Nested truncations `Sigma_0 ⊂ Sigma_1 ⊂ ...` of an infinite-genus surface.
/// Level `n` sits inside level `n + 1` through the registered names, and its
/// boundary curve `delta{g_n}` is a registered curve one level up.
#[derive(Debug, Clone)]
pub struct Exhaustion {
    levels: Vec<Level>,
    delta: DeltaDecl,
    boundary_essential: Vec<bool>,
}

impl Exhaustion {
    pub fn new(genera: &[u32], delta: DeltaDecl) -> Result<Self> {
        if genera.is_empty() || genera[0] == 0 || genera.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("exhaustion genera must increase from 1: {genera:?}")));
        }
        let mut levels = Vec::with_capacity(genera.len());
        for &g in genera {
            let t = build_standard_triangulation(SurfaceType::new(g, 1, 0))?;
            let registry = standard_registry(&t)?;
            levels.push(Level { triangulation: t, registry });
        }
        // every level boundary cuts off the infinite-genus remainder
        let boundary_essential = vec![true; levels.len()];
        let e = Exhaustion { levels, delta, boundary_essential };
        e.check()?;
        Ok(e)
    }

    /// Checks that `Delta` lies in the first level and that each level's
    /// twist curves and boundary are registered one level up.
    pub fn check(&self) -> Result<()> {
        self.delta_at(0)?.validate()?;
        for n in 0..self.levels.len().saturating_sub(1) {
            let next = &self.levels[n + 1];
            for name in self.twist_names_at(n)? {
                next.curve(&name)?;
            }
            let b = self.levels[n].boundary_name();
            let c = next.curve(&b)?;
            if Loop::from_curve(&next.triangulation, &c)?.is_peripheral(&next.triangulation) {
                return Err(Error::Invalid(format!("{b} is peripheral at level {}", n + 1)));
            }
        }
        Ok(())
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> Result<&Level> {
        self.levels.get(n).ok_or_else(|| Error::Invalid(format!("no exhaustion level {n}")))
    }

    pub fn delta_decl(&self) -> &DeltaDecl {
        &self.delta
    }

    pub fn boundary_essentiality(&self) -> &[bool] {
        &self.boundary_essential
    }

    fn twist_names_at(&self, n: usize) -> Result<Vec<String>> {
        let l = self.level(n)?;
        let t = &l.triangulation;
        let mut names: Vec<&String> = l.registry.names().filter(|k| name_key(k).is_some()).collect();
        names.sort_by_key(|k| name_key(k));
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for name in names {
            let (c, lp) = (l.registry.get(name)?, l.registry.get_loop(name)?);
            if lp.is_peripheral(t) || !seen.insert(c.coords().to_vec()) {
                continue;
            }
            out.push(name.clone());
        }
        Ok(out)
    }

    /// Registered twist curves at levels `0..=n` in enumeration order: each
    /// level appends its new curves, ordered by handle and then family.
    /// Curves isotopic to an earlier one are skipped.
    pub fn enumeration(&self, n: usize) -> Result<Vec<String>> {
        let top = self.level(n)?;
        let mut out: Vec<String> = Vec::new();
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        for k in 0..=n {
            for name in self.twist_names_at(k)? {
                if out.contains(&name) {
                    continue;
                }
                if seen.insert(top.curve(&name)?.into_coords()) {
                    out.push(name);
                }
            }
        }
        Ok(out)
    }

    /// `Delta` on level `n`. A declared boundary curve that is the level's
    /// own puncture is dropped.
    pub fn delta_at(&self, n: usize) -> Result<SubsurfaceSpec> {
        let l = self.level(n)?;
        let mut boundary = Vec::new();
        for name in &self.delta.boundary {
            if *name == l.boundary_name() && l.registry.get(name).is_err() {
                continue;
            }
            boundary.push(l.curve(name)?);
        }
        let inside = l.curves(&self.delta.inside)?;
        SubsurfaceSpec::containing(&l.triangulation, &boundary, &inside)
    }
}

/// The base vertex `mu_0 ∪ ∂Delta` for the first candidate `mu_0` filling
/// `delta`, with elements in canonical order.
pub fn choose_base_vertex(
    t: &Triangulation,
    delta: &SubsurfaceSpec,
    candidates: &[Vec<NormalMultiCurve>],
) -> Result<Vec<NormalMultiCurve>> {
    delta.validate()?;
    for mu0 in candidates {
        if mu0.is_empty() || !is_filling_in(t, mu0, delta)? {
            continue;
        }
        let mut mu: Vec<NormalMultiCurve> = mu0.clone();
        mu.extend(delta.boundary().iter().cloned());
        mu.sort_by(|a, b| a.coords().cmp(b.coords()));
        mu.dedup();
        return Ok(mu);
    }
    Err(Error::NotFilling("no candidate system fills the base subsurface".into()))
}

/// Twists along the enumerated curves up to level `n`, optionally
/// restricted to `filter`, weighted by their position in the enumeration.
/// The twists fixing `mu` set-wise also serve as stabilizer generators.
pub fn dehn_lickorish_generators(
    e: &Exhaustion,
    n: usize,
    mu: &[NormalMultiCurve],
    filter: Option<&[String]>,
) -> Result<GeneratorSet> {
    let l = e.level(n)?;
    let t = &l.triangulation;
    let all = e.enumeration(n)?;
    if let Some(f) = filter {
        for name in f {
            if !all.contains(name) {
                return Err(Error::UnknownCurve(name.clone()));
            }
        }
    }
    let names: Vec<&String> = all.iter().filter(|k| filter.is_none_or(|f| f.contains(k))).collect();
    let mut generators = Vec::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        generators.push(Generator::new(t, name, &l.curve(name)?, i as u64 + 1)?);
    }
    let base = component_multiset(t, mu);
    let mut stabilizer_generators = Vec::new();
    for g in &generators {
        let img: Vec<NormalMultiCurve> =
            mu.iter().map(|u| twist_multicurve(t, &g.twist, 1, u)).collect::<Result<_>>()?;
        if component_multiset(t, &img) == base {
            stabilizer_generators.push(g.clone());
        }
    }
    Ok(GeneratorSet { generators, stabilizer_generators })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionRow {
    pub generator: String,
    pub weight: u64,
    pub value: u64,
    pub exceeds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionTable {
    pub max: u64,
    pub rows: Vec<IntersectionRow>,
}

/// `i(mu, z·mu)` for every generator, flagging values above `bound`.
pub fn verify_intersection_condition(
    t: &Triangulation,
    gens: &GeneratorSet,
    mu: &[NormalMultiCurve],
    bound: Option<u64>,
) -> Result<IntersectionTable> {
    let mut rows = Vec::with_capacity(gens.generators.len());
    for g in &gens.generators {
        let img: Vec<NormalMultiCurve> =
            mu.iter().map(|u| twist_multicurve(t, &g.twist, 1, u)).collect::<Result<_>>()?;
        let value = collection_intersection(t, mu, &img)?;
        rows.push(IntersectionRow {
            generator: g.name.clone(),
            weight: g.weight,
            value,
            exceeds: bound.is_some_and(|b| value > b),
        });
    }
    let max = rows.iter().map(|r| r.value).max().unwrap_or(0);
    Ok(IntersectionTable { max, rows })
}

/// A letter of a witness word: a generator or stabilizer generator to the
/// power `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordLetter {
    pub stabilizer: bool,
    pub index: usize,
    pub exponent: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub name: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelVertex {
    pub digest: String,
    pub distance: u64,
    /// Canonical form: the element coordinates in sorted order.
    pub collection: Vec<Vec<u32>>,
    /// Word mapping the base vertex here, letters acting right to left.
    pub word: Vec<WordLetter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelEdge {
    pub src: usize,
    pub dst: usize,
    pub length: u64,
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelGraph {
    pub surface: SurfaceType,
    /// Hex id of the triangulation the coordinates refer to.
    pub triangulation: String,
    pub radius: u64,
    pub depth: usize,
    pub generators: Vec<GeneratorLabel>,
    pub stabilizer_generators: Vec<GeneratorLabel>,
    pub vertices: Vec<ModelVertex>,
    pub edges: Vec<ModelEdge>,
}

fn triangulation_hex(t: &Triangulation) -> String {
    format!("{:016x}", t.id())
}

/// Digest of a canonical collection.
pub fn collection_digest(key: &[Vec<u32>]) -> String {
    let mut h = Sha256::new();
    for c in key {
        h.update((c.len() as u32).to_le_bytes());
        for x in c {
            h.update(x.to_le_bytes());
        }
    }
    hex::encode(&h.finalize()[..8])
}

/// Canonical form of a collection: element coordinates, sorted.
pub fn canonical_collection(us: &[NormalMultiCurve]) -> Vec<Vec<u32>> {
    let mut k: Vec<Vec<u32>> = us.iter().map(|u| u.coords().to_vec()).collect();
    k.sort();
    k
}

impl ModelGraph {
    pub fn check_on(&self, t: &Triangulation) -> Result<()> {
        if self.triangulation != triangulation_hex(t) {
            return Err(Error::TriangulationMismatch);
        }
        Ok(())
    }

    pub fn base(&self) -> &ModelVertex {
        &self.vertices[0]
    }

    pub fn collection(&self, t: &Triangulation, v: usize) -> Result<Vec<NormalMultiCurve>> {
        self.check_on(t)?;
        self.vertices[v].collection.iter().map(|c| NormalMultiCurve::new(t, c.clone())).collect()
    }

    fn letter_weight(&self, l: &WordLetter) -> u64 {
        if l.stabilizer {
            self.stabilizer_generators[l.index].weight
        } else {
            self.generators[l.index].weight
        }
    }

    /// Weighted length of the witness word of `v`.
    pub fn word_length(&self, v: usize) -> u64 {
        self.vertices[v].word.iter().map(|l| self.letter_weight(l)).sum()
    }

    /// The witness word of `v` as a mapping class.
    pub fn mapping_class(&self, t: &Triangulation, gens: &GeneratorSet, v: usize) -> Result<MappingClass> {
        self.check_on(t)?;
        let mut f = MappingClass::identity(t);
        for l in &self.vertices[v].word {
            let g = if l.stabilizer { &gens.stabilizer_generators[l.index] } else { &gens.generators[l.index] };
            f = f.compose(&dehn_twist(t, &g.curve, l.exponent)?)?;
        }
        Ok(f)
    }

    pub fn index_of(&self, key: &[Vec<u32>]) -> Option<usize> {
        let d = collection_digest(key);
        self.vertices.iter().position(|v| v.digest == d && v.collection == key)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.src].push((e.dst, e.length));
            adj[e.dst].push((e.src, e.length));
        }
        adj
    }

    /// Weighted graph distances from `s`.
    pub fn distances_from(&self, s: usize) -> Vec<Option<u64>> {
        dijkstra(&self.adjacency(), s)
    }

    pub fn all_pairs(&self) -> Vec<Vec<Option<u64>>> {
        let adj = self.adjacency();
        (0..self.vertices.len()).map(|s| dijkstra(&adj, s)).collect()
    }
}

pub fn dijkstra(adj: &[Vec<(usize, u64)>], s: usize) -> Vec<Option<u64>> {
    let mut dist = vec![None; adj.len()];
    let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some() {
            continue;
        }
        dist[u] = Some(d);
        for &(v, w) in &adj[u] {
            if dist[v].is_none() {
                heap.push(Reverse((d + w, v)));
            }
        }
    }
    dist
}

/// Freely reduced words of length at most `depth` in `n` letters and their
/// inverses, shortest first.
fn reduced_words(n: usize, depth: usize) -> Vec<Vec<(usize, i32)>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<(usize, i32)>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for j in 0..n {
                for e in [1, -1] {
                    if w.last() == Some(&(j, -e)) {
                        continue;
                    }
                    let mut x = w.clone();
                    x.push((j, e));
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Loops tracked along the search: components of the base elements, then
/// the generator curves, then the stabilizer curves.
struct Tracked {
    /// `(element, multiplicity)` of each base component.
    owner: Vec<(usize, u32)>,
    elements: usize,
    z_off: usize,
    s_off: usize,
}

struct Settled {
    images: Vec<Vec<Dart>>,
}

struct Pending {
    dist: u64,
    parent: usize,
    h: usize,
    z: usize,
    e: i32,
}

fn twist_of(t: &Triangulation, path: &[Dart]) -> Result<TwistCurve> {
    TwistCurve::new(t, &NormalMultiCurve::new(t, coords_of_path(t, path))?)
}

/// Applies `h·z^e` conjugated by the vertex's word, given the twist curves
/// of the vertex's generator images.
fn push_through(
    t: &Triangulation,
    path: &[Dart],
    z: &TwistCurve,
    e: i32,
    h: &[(usize, i32)],
    stab: &[TwistCurve],
) -> Vec<Dart> {
    let mut p = twist_path(t, path, z, e);
    for &(j, x) in h.iter().rev() {
        p = twist_path(t, &p, &stab[j], x);
    }
    p
}

fn key_of(t: &Triangulation, tr: &Tracked, comps: &[Vec<Dart>]) -> Vec<Vec<u32>> {
    let mut elems = vec![vec![0u32; t.edge_count()]; tr.elements];
    for (p, &(el, m)) in comps.iter().zip(&tr.owner) {
        for (x, y) in elems[el].iter_mut().zip(coords_of_path(t, p)) {
            *x += y * m;
        }
    }
    elems.sort();
    elems
}

fn intern(ids: &mut HashMap<Vec<Vec<u32>>, usize>, keys: &mut Vec<Vec<Vec<u32>>>, k: Vec<Vec<u32>>) -> usize {
    if let Some(&i) = ids.get(&k) {
        return i;
    }
    let i = keys.len();
    ids.insert(k.clone(), i);
    keys.push(k);
    i
}

/// Best-first search of the ball of weighted radius `radius` about `mu`,
/// with stabilizer words of length at most `depth`.
pub fn build_ball(
    t: &Triangulation,
    mu: &[NormalMultiCurve],
    gens: &GeneratorSet,
    radius: u64,
    depth: usize,
) -> Result<ModelGraph> {
    if gens.generators.is_empty() {
        return Err(Error::EmptyGeneratorSet);
    }
    if mu.is_empty() || mu.iter().all(|u| u.is_empty()) {
        return Err(Error::NotFilling("empty base collection".into()));
    }
    let mut mu: Vec<NormalMultiCurve> = mu.to_vec();
    for u in &mu {
        u.check_on(t)?;
    }
    mu.sort_by(|a, b| a.coords().cmp(b.coords()));

    let mut start: Vec<Vec<Dart>> = Vec::new();
    let mut owner = Vec::new();
    for (k, u) in mu.iter().enumerate() {
        for (c, m) in decompose(t, u) {
            start.push(Loop::from_curve(t, &c)?.darts().to_vec());
            owner.push((k, m));
        }
    }
    let z_off = start.len();
    for g in &gens.generators {
        start.push(g.twist.path().to_vec());
    }
    let s_off = start.len();
    for g in &gens.stabilizer_generators {
        start.push(g.twist.path().to_vec());
    }
    let tr = Tracked { owner, elements: mu.len(), z_off, s_off };
    let hs = reduced_words(gens.stabilizer_generators.len(), depth);
    let nz = gens.generators.len();

    let base_key = canonical_collection(&mu);
    let mut ids: HashMap<Vec<Vec<u32>>, usize> = HashMap::new();
    let mut keys: Vec<Vec<Vec<u32>>> = Vec::new();
    let base_id = intern(&mut ids, &mut keys, base_key.clone());

    let mut pending: HashMap<usize, Pending> = HashMap::new();
    let mut settled: Vec<(usize, u64, Vec<WordLetter>, Settled)> = Vec::new();
    let mut settled_at: HashMap<usize, usize> = HashMap::new();
    let mut edges: HashMap<(usize, usize), (u64, usize)> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(u64, String, usize)>> = BinaryHeap::new();
    heap.push(Reverse((0, collection_digest(&base_key), base_id)));
    pending.insert(base_id, Pending { dist: 0, parent: usize::MAX, h: 0, z: 0, e: 0 });

    while let Some(Reverse((d, _, id))) = heap.pop() {
        if settled_at.contains_key(&id) || pending[&id].dist != d {
            continue;
        }
        let p = pending.remove(&id).expect("pending entry");
        let (images, word) = if p.parent == usize::MAX {
            (start.clone(), Vec::new())
        } else {
            let par = &settled[p.parent];
            let zc = twist_of(t, &par.3.images[tr.z_off + p.z])?;
            let sc: Vec<TwistCurve> = (0..gens.stabilizer_generators.len())
                .map(|j| twist_of(t, &par.3.images[tr.s_off + j]))
                .collect::<Result<_>>()?;
            let imgs = par.3.images.iter().map(|q| push_through(t, q, &zc, p.e, &hs[p.h], &sc)).collect();
            let mut w = par.2.clone();
            w.extend(hs[p.h].iter().map(|&(j, x)| WordLetter { stabilizer: true, index: j, exponent: x }));
            w.push(WordLetter { stabilizer: false, index: p.z, exponent: p.e });
            (imgs, w)
        };
        let me = settled.len();
        settled_at.insert(id, me);

        let zc: Vec<TwistCurve> = (0..nz).map(|i| twist_of(t, &images[tr.z_off + i])).collect::<Result<_>>()?;
        let sc: Vec<TwistCurve> =
            (0..gens.stabilizer_generators.len()).map(|j| twist_of(t, &images[tr.s_off + j])).collect::<Result<_>>()?;
        for (hi, h) in hs.iter().enumerate() {
            for (zi, g) in gens.generators.iter().enumerate() {
                for e in [1, -1] {
                    let comps: Vec<Vec<Dart>> =
                        images[..tr.z_off].iter().map(|q| push_through(t, q, &zc[zi], e, h, &sc)).collect();
                    let k = key_of(t, &tr, &comps);
                    let v = intern(&mut ids, &mut keys, k);
                    if v == id {
                        continue;
                    }
                    let pair = (id.min(v), id.max(v));
                    let cand = (g.weight, zi);
                    edges.entry(pair).and_modify(|x| *x = (*x).min(cand)).or_insert(cand);
                    let nd = d + g.weight;
                    if nd > radius || settled_at.contains_key(&v) {
                        continue;
                    }
                    if pending.get(&v).is_none_or(|q| nd < q.dist) {
                        pending.insert(v, Pending { dist: nd, parent: me, h: hi, z: zi, e });
                        heap.push(Reverse((nd, collection_digest(&keys[v]), v)));
                    }
                }
            }
        }
        settled.push((id, d, word, Settled { images }));
    }

    let vertices: Vec<ModelVertex> = settled
        .iter()
        .map(|(id, d, w, _)| ModelVertex {
            digest: collection_digest(&keys[*id]),
            distance: *d,
            collection: keys[*id].clone(),
            word: w.clone(),
        })
        .collect();
    let mut out_edges: Vec<ModelEdge> = edges
        .into_iter()
        .filter_map(|((a, b), (length, generator))| {
            let (x, y) = (*settled_at.get(&a)?, *settled_at.get(&b)?);
            Some(ModelEdge { src: x.min(y), dst: x.max(y), length, generator })
        })
        .collect();
    out_edges.sort_by_key(|e| (e.src, e.dst));
    let label = |g: &Generator| GeneratorLabel { name: g.name.clone(), weight: g.weight };
    Ok(ModelGraph {
        surface: t.surface(),
        triangulation: triangulation_hex(t),
        radius,
        depth,
        generators: gens.generators.iter().map(label).collect(),
        stabilizer_generators: gens.stabilizer_generators.iter().map(label).collect(),
        vertices,
        edges: out_edges,
    })
}

/// Every collection `w·mu` for words `w` in the generators of weighted
/// length at most `radius`, by direct enumeration.
pub fn orbit_by_words(
    t: &Triangulation,
    mu: &[NormalMultiCurve],
    gens: &GeneratorSet,
    radius: u64,
) -> Result<BTreeSet<Vec<Vec<u32>>>> {
    // best remaining budget seen per collection
    let mut seen: BTreeMap<Vec<Vec<u32>>, u64> = BTreeMap::new();
    let mut stack = vec![(mu.to_vec(), radius)];
    while let Some((cur, budget)) = stack.pop() {
        let key = canonical_collection(&cur);
        if seen.get(&key).is_some_and(|&b| b >= budget) {
            continue;
        }
        seen.insert(key, budget);
        for g in &gens.generators {
            if g.weight > budget {
                continue;
            }
            for e in [1, -1] {
                let next: Vec<NormalMultiCurve> =
                    cur.iter().map(|u| twist_multicurve(t, &g.twist, e, u)).collect::<Result<_>>()?;
                stack.push((next, budget - g.weight));
            }
        }
    }
    Ok(seen.into_keys().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    EdgeCsv,
    Text,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "csv" | "edge-csv" => Ok(ExportFormat::EdgeCsv),
            "text" | "toml" | "structured-text" => Ok(ExportFormat::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::EdgeCsv => "csv",
            ExportFormat::Text => "toml",
        }
    }
}

pub fn export_graph(m: &ModelGraph, format: ExportFormat) -> Result<String> {
    let mut s = String::new();
    match format {
        ExportFormat::Dot => {
            s.push_str("graph model {\n");
            for (i, v) in m.vertices.iter().enumerate() {
                let _ = writeln!(s, "  v{i} [label=\"{}\", distance={}];", v.digest, v.distance);
            }
            for e in &m.edges {
                let _ = writeln!(
                    s,
                    "  v{} -- v{} [length={}, generator={}, label=\"{}\"];",
                    e.src, e.dst, e.length, e.generator, m.generators[e.generator].name
                );
            }
            s.push_str("}\n");
        }
        ExportFormat::EdgeCsv => {
            s.push_str("src,dst,length,generator\n");
            for e in &m.edges {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    m.vertices[e.src].digest, m.vertices[e.dst].digest, e.length, e.generator
                );
            }
        }
        ExportFormat::Text => {
            s = toml::to_string(m).map_err(|e| Error::Invalid(e.to_string()))?;
        }
    }
    Ok(s)
}

/// Reads back a graph written in the structured text format.
pub fn parse_graph(text: &str) -> Result<ModelGraph> {
    toml::from_str(text).map_err(|e| Error::Invalid(e.to_string()))
}
