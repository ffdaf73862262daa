//! Witnesses, push-forward models, disjoint-witness ranks, dimension
//! lower bounds and coarse diagnostics on built balls.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{Loop, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::intersection::algebraic_intersection;
use crate::intersection::collection_intersection;
use crate::intersection::subsurface::{
    essential_intersection_check, subsurface_cut, ArcCurveSystemInSubsurface, ComponentTopology, SubsurfaceSpec,
};
use crate::model::{dijkstra, ModelGraph};
use crate::surface::Triangulation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WitnessStatus {
    /// Contains the base subsurface, which every vertex fills.
    CertifiedByDeltaContainment,
    /// Every vertex of the ball meets every component.
    NoCounterexampleInBall,
    /// The vertex with this index misses a component.
    Refuted { vertex: usize, digest: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub name: String,
    pub topology: Vec<ComponentTopology>,
    pub status: WitnessStatus,
    pub radius: u64,
    pub depth: usize,
    pub vertices_checked: usize,
}

impl WitnessReport {
    pub fn is_accepted(&self) -> bool {
        !matches!(self.status, WitnessStatus::Refuted { .. })
    }
    pub fn is_certified(&self) -> bool {
        self.status == WitnessStatus::CertifiedByDeltaContainment
    }
}

/// Witness status of `w` on the ball `m` built over the base subsurface
/// `delta`.
pub fn is_witness(
    t: &Triangulation,
    name: &str,
    w: &SubsurfaceSpec,
    delta: &SubsurfaceSpec,
    m: &ModelGraph,
) -> Result<WitnessReport> {
    w.validate()?;
    m.check_on(t)?;
    let mut report = WitnessReport {
        name: name.to_string(),
        topology: w.topology().to_vec(),
        status: WitnessStatus::NoCounterexampleInBall,
        radius: m.radius,
        depth: m.depth,
        vertices_checked: 0,
    };
    if w.contains(t, delta)? {
        report.status = WitnessStatus::CertifiedByDeltaContainment;
        return Ok(report);
    }
    for v in 0..m.vertices.len() {
        report.vertices_checked += 1;
        if !essential_intersection_check(t, &m.collection(t, v)?, w)? {
            report.status = WitnessStatus::Refuted { vertex: v, digest: m.vertices[v].digest.clone() };
            break;
        }
    }
    Ok(report)
}

/// The ball pushed into a witness: vertices are the distinct projections,
/// each built vertex maps to one of them, and every edge of the ball whose
/// ends project apart becomes an edge of the same length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pushforward {
    pub vertices: Vec<ArcCurveSystemInSubsurface>,
    pub digests: Vec<String>,
    /// Projected vertex of each vertex of the ball.
    pub projection: Vec<usize>,
    pub edges: Vec<(usize, usize, u64)>,
}

impl Pushforward {
    pub fn adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }
}

pub fn pushforward_model(
    t: &Triangulation,
    m: &ModelGraph,
    w: &SubsurfaceSpec,
    report: &WitnessReport,
) -> Result<Pushforward> {
    if !report.is_accepted() {
        return Err(Error::NotAWitness);
    }
    let mut index: HashMap<ArcCurveSystemInSubsurface, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut projection = Vec::with_capacity(m.vertices.len());
    for v in 0..m.vertices.len() {
        let p = match subsurface_cut(t, &m.collection(t, v)?, w) {
            Ok(p) => p,
            Err(Error::NotInProjectionDomain) => return Err(Error::NotAWitness),
            Err(e) => return Err(e),
        };
        let next = vertices.len();
        let id = *index.entry(p.clone()).or_insert(next);
        if id == next {
            vertices.push(p);
        }
        projection.push(id);
    }
    let mut best: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for e in &m.edges {
        let (a, b) = (projection[e.src], projection[e.dst]);
        if a == b {
            continue;
        }
        let k = (a.min(b), a.max(b));
        best.entry(k).and_modify(|x| *x = (*x).min(e.length)).or_insert(e.length);
    }
    let digests = vertices.iter().map(|p| p.digest()).collect();
    Ok(Pushforward { vertices, digests, projection, edges: best.into_iter().map(|((a, b), w)| (a, b, w)).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CocompactnessReport {
    pub max_self_intersection: u64,
    pub max_edge_intersection: u64,
}

/// Largest intersection of a projection with itself and across a projected
/// edge.
pub fn cocompactness_report(t: &Triangulation, p: &Pushforward) -> Result<CocompactnessReport> {
    let curves: Vec<Vec<NormalMultiCurve>> = p.vertices.iter().map(|v| v.all_curves(t)).collect();
    let mut r = CocompactnessReport { max_self_intersection: 0, max_edge_intersection: 0 };
    for c in &curves {
        r.max_self_intersection = r.max_self_intersection.max(collection_intersection(t, c, c)?);
    }
    for &(a, b, _) in &p.edges {
        r.max_edge_intersection = r.max_edge_intersection.max(collection_intersection(t, &curves[a], &curves[b])?);
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    /// Chosen preimage of each projected vertex.
    pub section: Vec<usize>,
    pub lipschitz: u64,
}

/// A section of the projection choosing the preimage with the shortest
/// witness word, and the largest ball distance between the sections of the
/// ends of a projected edge.
pub fn section_report(p: &Pushforward, m: &ModelGraph) -> SectionReport {
    let mut section: Vec<Option<usize>> = vec![None; p.vertices.len()];
    for (v, &x) in p.projection.iter().enumerate() {
        let better = match section[x] {
            None => true,
            Some(s) => m.word_length(v) < m.word_length(s),
        };
        if better {
            section[x] = Some(v);
        }
    }
    let section: Vec<usize> = section.into_iter().map(|s| s.expect("every projected vertex has a preimage")).collect();
    let adj = m.adjacency();
    let mut from: HashMap<usize, Vec<Option<u64>>> = HashMap::new();
    let mut lipschitz = 0;
    for &(a, b, _) in &p.edges {
        let d = from.entry(section[a]).or_insert_with(|| dijkstra(&adj, section[a]))[section[b]];
        lipschitz = lipschitz.max(d.expect("ball is connected"));
    }
    SectionReport { section, lipschitz }
}

/// Largest number of pairwise disjoint connected accepted witnesses, with
/// one such family.
pub fn disjoint_witness_rank(
    t: &Triangulation,
    candidates: &[(SubsurfaceSpec, WitnessReport)],
) -> Result<(usize, Vec<usize>)> {
    let ok: Vec<usize> =
        (0..candidates.len()).filter(|&i| candidates[i].1.is_accepted() && candidates[i].0.is_connected()).collect();
    let n = ok.len();
    let mut disjoint = vec![vec![false; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let d = candidates[ok[a]].0.is_disjoint_from(t, &candidates[ok[b]].0)?;
            disjoint[a][b] = d;
            disjoint[b][a] = d;
        }
    }
    let mut best = Vec::new();
    let mut cur = Vec::new();
    max_clique(&disjoint, 0, &mut cur, &mut best);
    Ok((best.len(), best.into_iter().map(|i| ok[i]).collect()))
}

fn max_clique(adj: &[Vec<bool>], from: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    for v in from..adj.len() {
        if cur.len() + (adj.len() - v) <= best.len() {
            return;
        }
        if cur.iter().all(|&u| adj[u][v]) {
            cur.push(v);
            max_clique(adj, v + 1, cur, best);
            cur.pop();
        }
    }
}

/// The bound `g - ceil(chi / 2)` for a witness of genus `g` and Euler
/// characteristic `chi`.
pub fn genus_euler_bound(genus: u32, euler: i64) -> i64 {
    genus as i64 - (euler as f64 / 2.0).ceil() as i64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub witness: String,
    pub genus: u32,
    pub euler: i64,
    pub bound: i64,
    /// Whether the bound enters the combined value: only when no two
    /// accepted connected witnesses are disjoint.
    pub applies: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsdimReport {
    pub rank: usize,
    pub rank_family: Vec<String>,
    pub certificates: Vec<Certificate>,
    pub combined: i64,
}

/// Lower bound on asymptotic dimension supported by the candidate reports.
pub fn asdim_lower_bound(t: &Triangulation, candidates: &[(SubsurfaceSpec, WitnessReport)]) -> Result<AsdimReport> {
    let (rank, family) = disjoint_witness_rank(t, candidates)?;
    let applies = rank <= 1;
    let certificates: Vec<Certificate> = candidates
        .iter()
        .filter(|(w, r)| r.is_certified() && w.is_connected())
        .map(|(w, r)| Certificate {
            witness: r.name.clone(),
            genus: w.genus(),
            euler: w.euler_characteristic(),
            bound: genus_euler_bound(w.genus(), w.euler_characteristic()),
            applies,
        })
        .collect();
    let combined = certificates.iter().filter(|c| c.applies).map(|c| c.bound).fold(rank as i64, i64::max);
    Ok(AsdimReport {
        rank,
        rank_family: family.into_iter().map(|i| candidates[i].1.name.clone()).collect(),
        certificates,
        combined,
    })
}

/// A slope `p/q` in lowest terms, `1/0` for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Slope {
    /// Normalizes to lowest terms with `q > 0`, or `1/0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let g = gcd(p, q);
        if g == 0 {
            return Err(Error::Invalid("0/0 is not a slope".into()));
        }
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Distance in the Farey graph. Moving `a` to infinity, a slope `x/y` with
/// `n < x/y < n + 1` is cut off from infinity by the edge `n, n + 1`, so
/// every path passes through `n` or `n + 1`.
pub fn farey_distance(a: Slope, b: Slope) -> u64 {
    // (r, s) with p*s - q*r = 1
    let (p, q) = (a.p, a.q);
    let (r, s) = if q == 0 {
        (0, p)
    } else {
        let (g, x, y) = ext_gcd(p, q);
        debug_assert_eq!(g.abs(), 1);
        // p*x + q*y = g, so s = x*g, r = -y*g
        (-y * g, x * g)
    };
    let x = s * b.p - r * b.q;
    let y = -q * b.p + p * b.q;
    let mut memo = HashMap::new();
    from_infinity(x, y, &mut memo)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn from_infinity(x: i64, y: i64, memo: &mut HashMap<(i64, i64), u64>) -> u64 {
    let (x, y) = if y < 0 { (-x, -y) } else { (x, y) };
    if y == 0 {
        return 0;
    }
    if y == 1 {
        return 1;
    }
    if let Some(&d) = memo.get(&(x, y)) {
        return d;
    }
    let n = x.div_euclid(y);
    // x/y - n = (x - n y)/y; moving n to infinity sends z to -1/z
    let via = |k: i64, memo: &mut HashMap<(i64, i64), u64>| -> u64 {
        let num = x - k * y;
        from_infinity(-y, num, memo)
    };
    let d = 1 + via(n, memo).min(via(n + 1, memo));
    memo.insert((x, y), d);
    d
}

/// A one-holed torus witness with a basis pair meeting once, for reading
/// slopes of curves inside it.
#[derive(Debug, Clone)]
pub struct FareyChart {
    pub witness: SubsurfaceSpec,
    pub alpha: Loop,
    pub beta: Loop,
}

impl FareyChart {
    pub fn new(
        t: &Triangulation,
        witness: SubsurfaceSpec,
        alpha: &NormalMultiCurve,
        beta: &NormalMultiCurve,
    ) -> Result<Self> {
        let topo = witness.topology();
        if topo.len() != 1 || topo[0].genus != 1 || topo[0].boundary + topo[0].punctures != 1 {
            return Err(Error::InvalidSubsurface("Farey chart needs a one-holed torus".into()));
        }
        Ok(FareyChart { witness, alpha: Loop::from_curve(t, alpha)?, beta: Loop::from_curve(t, beta)? })
    }

    pub fn slope(&self, t: &Triangulation, c: &NormalMultiCurve) -> Result<Slope> {
        let l = Loop::from_curve(t, c)?;
        let p = algebraic_intersection(t, l.darts(), self.beta.darts());
        let q = algebraic_intersection(t, l.darts(), self.alpha.darts());
        Slope::new(p, q)
    }

    /// Slopes of all curves of the projection of a collection.
    pub fn projection(&self, t: &Triangulation, us: &[NormalMultiCurve]) -> Result<Option<Vec<Slope>>> {
        match subsurface_cut(t, us, &self.witness) {
            Ok(p) => {
                let mut s: Vec<Slope> = p.all_curves(t).iter().map(|c| self.slope(t, c)).collect::<Result<_>>()?;
                s.sort();
                s.dedup();
                Ok(Some(s))
            }
            Err(Error::NotInProjectionDomain) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Diameter of the union of two slope sets in the Farey graph.
pub fn projection_distance(a: &[Slope], b: &[Slope]) -> u64 {
    let all: Vec<Slope> = a.iter().chain(b).copied().collect();
    let mut d = 0;
    for (i, &x) in all.iter().enumerate() {
        for &y in &all[i + 1..] {
            d = d.max(farey_distance(x, y));
        }
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub u: usize,
    pub v: usize,
    pub model_distance: u64,
    pub truncated_sum: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceFit {
    pub threshold: u64,
    pub rows: Vec<FitRow>,
    /// `model_distance ≈ slope * truncated_sum + intercept`; no slope when
    /// the sums do not vary.
    pub slope: Option<f64>,
    pub intercept: f64,
    pub max_residual: f64,
    /// Standard error of the slope, when defined.
    pub slope_stderr: Option<f64>,
}

/// Least-squares comparison of ball distance with the truncated sum of
/// Farey distances between projections, over sampled vertex pairs.
pub fn distance_formula_fit(
    t: &Triangulation,
    m: &ModelGraph,
    charts: &[FareyChart],
    threshold: u64,
    samples: usize,
    seed: u64,
) -> Result<DistanceFit> {
    let n = m.vertices.len();
    let mut proj: Vec<Vec<Option<Vec<Slope>>>> = Vec::with_capacity(charts.len());
    for c in charts {
        proj.push((0..n).map(|v| c.projection(t, &m.collection(t, v)?)).collect::<Result<_>>()?);
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
    if pairs.len() > samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs.shuffle(&mut rng);
        pairs.truncate(samples);
        pairs.sort();
    }
    let adj = m.adjacency();
    let mut dist_from: HashMap<usize, Vec<Option<u64>>> = HashMap::new();
    let mut rows = Vec::with_capacity(pairs.len());
    for (u, v) in pairs {
        let d = dist_from.entry(u).or_insert_with(|| dijkstra(&adj, u))[v].expect("ball is connected");
        let mut sum = 0;
        for p in &proj {
            if let (Some(a), Some(b)) = (&p[u], &p[v]) {
                let x = projection_distance(a, b);
                if x >= threshold {
                    sum += x;
                }
            }
        }
        rows.push(FitRow { u, v, model_distance: d, truncated_sum: sum });
    }
    let k = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.truncated_sum as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.model_distance as f64).collect();
    let mx = xs.iter().sum::<f64>() / k.max(1.0);
    let my = ys.iter().sum::<f64>() / k.max(1.0);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let (slope, intercept) = if sxx > 0.0 { (Some(sxy / sxx), my - sxy / sxx * mx) } else { (None, my) };
    let pred = |x: f64| slope.map_or(intercept, |s| s * x + intercept);
    let resid: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - pred(*x)).collect();
    let max_residual = resid.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    let slope_stderr = match slope {
        Some(_) if k > 2.0 => Some((resid.iter().map(|r| r * r).sum::<f64>() / (k - 2.0) / sxx).sqrt()),
        _ => None,
    };
    Ok(DistanceFit { threshold, rows, slope, intercept, max_residual, slope_stderr })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScaleDimension {
    pub dimension: usize,
    /// False when the value is only the greedy upper bound.
    pub exact: bool,
}

const EXACT_LIMIT: usize = 60;
const SEARCH_BUDGET: u64 = 5_000_000;

/// Least `n` admitting a cover of the vertices by sets of diameter at most
/// `r`, each edge inside some set, with every vertex in at most `n + 1`
/// sets. Exact search up to 60 vertices, greedy upper bound beyond.
pub fn dimension_at_scale(adj: &[Vec<(usize, u64)>], r: u64) -> ScaleDimension {
    let n = adj.len();
    if n == 0 {
        return ScaleDimension { dimension: 0, exact: true };
    }
    let dist: Vec<Vec<u64>> =
        (0..n).map(|s| dijkstra(adj, s).into_iter().map(|d| d.unwrap_or(u64::MAX)).collect()).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (u, nb) in adj.iter().enumerate() {
        for &(v, _) in nb {
            if u < v && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    // order edges by a breadth-first sweep so the search closes sets early
    let order = bfs_order(adj);
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    edges.sort_by_key(|&(u, v)| (pos[u].max(pos[v]), pos[u].min(pos[v])));
    if edges.iter().any(|&(u, v)| dist[u][v] > r) {
        // an edge longer than the scale can never be covered
        return ScaleDimension { dimension: greedy_cover(&dist, &edges, n, r).saturating_sub(1), exact: false };
    }
    let greedy = greedy_cover(&dist, &edges, n, r);
    if n > EXACT_LIMIT {
        return ScaleDimension { dimension: greedy - 1, exact: false };
    }
    for k in 1..greedy {
        let mut s = CoverSearch { dist: &dist, edges: &edges, r, k, sets: Vec::new(), mult: vec![0; n], steps: 0 };
        match s.run(0) {
            Some(true) => return ScaleDimension { dimension: k - 1, exact: true },
            Some(false) => continue,
            None => return ScaleDimension { dimension: greedy - 1, exact: false },
        }
    }
    ScaleDimension { dimension: greedy - 1, exact: true }
}

fn bfs_order(adj: &[Vec<(usize, u64)>]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::with_capacity(adj.len());
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            out.push(u);
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
    }
    out
}

fn fits(dist: &[Vec<u64>], set: &[usize], v: usize, r: u64) -> bool {
    set.iter().all(|&x| dist[x][v] <= r)
}

/// Multiplicity of a first-fit cover.
fn greedy_cover(dist: &[Vec<u64>], edges: &[(usize, usize)], n: usize, r: u64) -> usize {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for &(u, v) in edges {
        let slot = sets.iter().position(|s| {
            (s.contains(&u) || s.contains(&v))
                && (s.contains(&u) || fits(dist, s, u, r))
                && (s.contains(&v) || fits(dist, s, v, r))
        });
        match slot {
            Some(i) => {
                for x in [u, v] {
                    if !sets[i].contains(&x) {
                        sets[i].push(x);
                    }
                }
            }
            None => sets.push(vec![u, v]),
        }
    }
    let mut mult = vec![0usize; n];
    for s in &sets {
        for &x in s {
            mult[x] += 1;
        }
    }
    // isolated vertices sit in singleton sets
    mult.iter().map(|&m| m.max(1)).max().unwrap_or(1)
}

struct CoverSearch<'a> {
    dist: &'a [Vec<u64>],
    edges: &'a [(usize, usize)],
    r: u64,
    k: usize,
    sets: Vec<Vec<usize>>,
    mult: Vec<usize>,
    steps: u64,
}

impl CoverSearch<'_> {
    /// `Some(found)`, or `None` when the step budget runs out.
    fn run(&mut self, i: usize) -> Option<bool> {
        self.steps += 1;
        if self.steps > SEARCH_BUDGET {
            return None;
        }
        if i == self.edges.len() {
            return Some(true);
        }
        let (u, v) = self.edges[i];
        if self.sets.iter().any(|s| s.contains(&u) && s.contains(&v)) {
            return self.run(i + 1);
        }
        for si in 0..self.sets.len() {
            let add: Vec<usize> = [u, v].into_iter().filter(|x| !self.sets[si].contains(x)).collect();
            if add.iter().any(|&x| self.mult[x] >= self.k || !fits(self.dist, &self.sets[si], x, self.r)) {
                continue;
            }
            if add.len() == 2 && self.dist[u][v] > self.r {
                continue;
            }
            for &x in &add {
                self.sets[si].push(x);
                self.mult[x] += 1;
            }
            let res = self.run(i + 1);
            for &x in &add {
                self.sets[si].pop();
                self.mult[x] -= 1;
            }
            if res != Some(false) {
                return res;
            }
        }
        if self.mult[u] < self.k && self.mult[v] < self.k {
            self.sets.push(vec![u, v]);
            self.mult[u] += 1;
            self.mult[v] += 1;
            let res = self.run(i + 1);
            self.sets.pop();
            self.mult[u] -= 1;
            self.mult[v] -= 1;
            return res;
        }
        Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QiRow {
    pub graph_distance: u64,
    pub vertices: usize,
    pub max_word_length: u64,
    pub max_deviation: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QiFit {
    /// `d_graph <= d_word` at every vertex.
    pub domination: bool,
    /// Least `c` with `d_word <= d_graph + c`.
    pub c_at_unit_lambda: u64,
    /// Least `lambda` with `d_word <= lambda * d_graph` away from the base.
    pub lambda_at_zero_c: f64,
    pub table: Vec<QiRow>,
}

/// Compares witness-word length with graph distance from the base vertex.
pub fn qi_fit(m: &ModelGraph) -> QiFit {
    let d = m.distances_from(0);
    let mut domination = true;
    let mut c = 0u64;
    let mut lambda = 1.0f64;
    let mut rows: BTreeMap<u64, QiRow> = BTreeMap::new();
    for v in 0..m.vertices.len() {
        let g = d[v].expect("ball is connected");
        let w = m.word_length(v);
        domination &= g <= w;
        c = c.max(w.saturating_sub(g));
        if g > 0 {
            lambda = lambda.max(w as f64 / g as f64);
        }
        let row =
            rows.entry(g).or_insert(QiRow { graph_distance: g, vertices: 0, max_word_length: 0, max_deviation: 0 });
        row.vertices += 1;
        row.max_word_length = row.max_word_length.max(w);
        row.max_deviation = row.max_deviation.max(w.saturating_sub(g));
    }
    QiFit { domination, c_at_unit_lambda: c, lambda_at_zero_c: lambda, table: rows.into_values().collect() }
}
