//! Witness reports, push-forwards, ranks, bounds and coarse diagnostics.

use std::collections::{HashMap, VecDeque};

use arcmodel::analysis::*;
use arcmodel::curve::NormalMultiCurve;
use arcmodel::error::Error;
use arcmodel::intersection::collection_intersection;
use arcmodel::intersection::subsurface::{subsurface_cut, SubsurfaceSpec};
use arcmodel::model::*;
use arcmodel::surface::Triangulation;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

struct Ball {
    e: Exhaustion,
    delta: SubsurfaceSpec,
    m: ModelGraph,
}

impl Ball {
    fn t(&self) -> &Triangulation {
        &self.e.level(0).unwrap().triangulation
    }
    fn curve(&self, n: &str) -> NormalMultiCurve {
        self.e.level(0).unwrap().curve(n).unwrap()
    }
}

fn handle_ball(radius: u64) -> Ball {
    let e = Exhaustion::new(&[2], DeltaDecl { boundary: names(&["delta1"]), inside: names(&["alpha1"]) }).unwrap();
    let l = e.level(0).unwrap();
    let t = &l.triangulation;
    let delta = e.delta_at(0).unwrap();
    let mu = choose_base_vertex(t, &delta, &[l.curves(&names(&["alpha1", "beta1"])).unwrap()]).unwrap();
    let filter = names(&["alpha1", "beta1", "alpha2", "beta2", "gamma1"]);
    let gens = dehn_lickorish_generators(&e, 0, &mu, Some(&filter)).unwrap();
    let m = build_ball(t, &mu, &gens, radius, 1).unwrap();
    Ball { e, delta, m }
}

fn handle(b: &Ball, k: usize) -> SubsurfaceSpec {
    SubsurfaceSpec::containing(b.t(), &[b.curve(&format!("hole{k}"))], &[b.curve(&format!("alpha{k}"))]).unwrap()
}

fn all_pairs(adj: &[Vec<(usize, u64)>]) -> Vec<Vec<Option<u64>>> {
    (0..adj.len()).map(|s| dijkstra(adj, s)).collect()
}

#[test]
fn witness_statuses() {
    let b = handle_ball(4);
    let t = b.t();
    let r = is_witness(t, "delta", &b.delta, &b.delta, &b.m).unwrap();
    assert_eq!(r.status, WitnessStatus::CertifiedByDeltaContainment);
    let whole = SubsurfaceSpec::whole(t).unwrap();
    assert!(is_witness(t, "whole", &whole, &b.delta, &b.m).unwrap().is_certified());
    // the second handle misses the base vertex
    let r = is_witness(t, "T2", &handle(&b, 2), &b.delta, &b.m).unwrap();
    assert!(matches!(r.status, WitnessStatus::Refuted { vertex: 0, .. }));
    assert!(matches!(pushforward_model(t, &b.m, &handle(&b, 2), &r), Err(Error::NotAWitness)));
    // the pants between both handles and the puncture
    let both =
        SubsurfaceSpec::containing(t, &[b.curve("hole1"), b.curve("hole2")], &[b.curve("alpha1"), b.curve("alpha2")])
            .unwrap();
    assert!(both.validate().is_ok());
    assert!(matches!(both.complement(t).unwrap().validate(), Err(Error::InvalidSubsurface(_))));
}

#[test]
fn pushforward_is_one_lipschitz_with_a_lipschitz_section() {
    let b = handle_ball(6);
    let t = b.t();
    let r = is_witness(t, "delta", &b.delta, &b.delta, &b.m).unwrap();
    let p = pushforward_model(t, &b.m, &b.delta, &r).unwrap();
    assert!(p.vertices.len() > 1 && p.vertices.len() < b.m.vertices.len());
    let dm = b.m.all_pairs();
    let dw = all_pairs(&p.adjacency());
    let n = b.m.vertices.len();
    for u in 0..n {
        for v in 0..n {
            let (a, c) = (p.projection[u], p.projection[v]);
            assert!(dw[a][c].unwrap() <= dm[u][v].unwrap());
        }
    }
    let s = section_report(&p, &b.m);
    for (x, &v) in s.section.iter().enumerate() {
        assert_eq!(p.projection[v], x);
    }
    let mut edge_max = 0;
    for &(a, c, _) in &p.edges {
        edge_max = edge_max.max(dm[s.section[a]][s.section[c]].unwrap());
    }
    assert_eq!(s.lipschitz, edge_max);
    for a in 0..p.vertices.len() {
        for c in 0..p.vertices.len() {
            assert!(dm[s.section[a]][s.section[c]].unwrap() <= s.lipschitz * dw[a][c].unwrap());
        }
    }
}

#[test]
fn cocompactness_on_the_base_subsurface() {
    let small = handle_ball(4);
    let big = handle_ball(6);
    let t = small.t();
    let mut last = None;
    for b in [&small, &big] {
        let r = is_witness(t, "delta", &b.delta, &b.delta, &b.m).unwrap();
        let p = pushforward_model(t, &b.m, &b.delta, &r).unwrap();
        let c = cocompactness_report(t, &p).unwrap();
        let mut want = 0;
        for v in 0..b.m.vertices.len() {
            let cs = subsurface_cut(t, &b.m.collection(t, v).unwrap(), &b.delta).unwrap().all_curves(t);
            want = want.max(collection_intersection(t, &cs, &cs).unwrap());
        }
        assert_eq!(c.max_self_intersection, want);
        if let Some(prev) = last {
            let prev: CocompactnessReport = prev;
            assert!(c.max_self_intersection >= prev.max_self_intersection);
            assert!(c.max_edge_intersection >= prev.max_edge_intersection);
        }
        last = Some(c);
    }
}

#[test]
fn whole_surface_pushforward_is_a_copy() {
    let b = handle_ball(4);
    let t = b.t();
    let whole = SubsurfaceSpec::whole(t).unwrap();
    let r = is_witness(t, "whole", &whole, &b.delta, &b.m).unwrap();
    let p = pushforward_model(t, &b.m, &whole, &r).unwrap();
    assert_eq!(p.vertices.len(), b.m.vertices.len());
    assert_eq!(p.edges.len(), b.m.edges.len());
    let s = section_report(&p, &b.m);
    let max_len = b.m.edges.iter().map(|e| e.length).max().unwrap();
    assert!(s.lipschitz <= max_len);
}

#[test]
fn one_vertex_pushforward_has_zero_section_constant() {
    let b = handle_ball(0);
    let t = b.t();
    let r = is_witness(t, "delta", &b.delta, &b.delta, &b.m).unwrap();
    let p = pushforward_model(t, &b.m, &b.delta, &r).unwrap();
    assert_eq!(p.vertices.len(), 1);
    assert_eq!(section_report(&p, &b.m).lipschitz, 0);
    let f = qi_fit(&b.m);
    assert!(f.domination);
    assert_eq!((f.lambda_at_zero_c, f.c_at_unit_lambda), (1.0, 0));
}

#[test]
fn rank_and_bounds_on_the_base_handle() {
    let b = handle_ball(3);
    let t = b.t();
    assert_eq!(disjoint_witness_rank(t, &[]).unwrap().0, 0);
    let r = is_witness(t, "delta", &b.delta, &b.delta, &b.m).unwrap();
    let cands = vec![(b.delta.clone(), r)];
    assert_eq!(disjoint_witness_rank(t, &cands).unwrap().0, 1);
    let rep = asdim_lower_bound(t, &cands).unwrap();
    assert_eq!(rep.certificates.len(), 1);
    assert_eq!(rep.certificates[0].bound, 1);
    assert!(rep.certificates[0].applies);
    assert_eq!(rep.combined, 1);
    assert_eq!(asdim_lower_bound(t, &[]).unwrap().combined, 0);
    assert_eq!(genus_euler_bound(1, -1), 1);
    assert_eq!(genus_euler_bound(2, -3), 3);
}

/// Genus-4 truncation with a genus-2 base: the two base handles and a
/// handle built on `beta3` are disjoint and met by every vertex.
#[test]
fn three_disjoint_handles_at_genus_four() {
    let e =
        Exhaustion::new(&[2, 3, 4], DeltaDecl { boundary: names(&["delta2"]), inside: names(&["alpha1", "alpha2"]) })
            .unwrap();
    let l = e.level(2).unwrap();
    let t = &l.triangulation;
    let delta = e.delta_at(2).unwrap();
    let chain = l.curves(&names(&["alpha1", "beta1", "gamma1", "beta2", "alpha2"])).unwrap();
    let mu = choose_base_vertex(t, &delta, &[chain]).unwrap();
    let gens = dehn_lickorish_generators(&e, 2, &mu, None).unwrap();
    let m = build_ball(t, &mu, &gens, 3, 0).unwrap();
    let c = |n: &str| l.curve(n).unwrap();
    let specs = vec![
        ("delta", delta.clone()),
        ("T1", SubsurfaceSpec::containing(t, &[c("hole1")], &[c("alpha1")]).unwrap()),
        ("T2", SubsurfaceSpec::containing(t, &[c("hole2")], &[c("alpha2")]).unwrap()),
        ("T3", SubsurfaceSpec::containing(t, &[c("hole3")], &[c("alpha3")]).unwrap()),
        ("W3", SubsurfaceSpec::containing(t, &[c("omega3")], &[c("beta3")]).unwrap()),
    ];
    let cands: Vec<(SubsurfaceSpec, WitnessReport)> = specs
        .into_iter()
        .map(|(n, w)| {
            let r = is_witness(t, n, &w, &delta, &m).unwrap();
            (w, r)
        })
        .collect();
    let (rank, family) = disjoint_witness_rank(t, &cands).unwrap();
    // exhaustive check over subfamilies of accepted connected candidates
    let ok: Vec<usize> = (0..cands.len()).filter(|&i| cands[i].1.is_accepted()).collect();
    let mut best = 0;
    for mask in 0u32..(1 << ok.len()) {
        let pick: Vec<usize> = (0..ok.len()).filter(|b| mask >> b & 1 == 1).map(|b| ok[b]).collect();
        let disjoint = pick
            .iter()
            .enumerate()
            .all(|(i, &a)| pick[i + 1..].iter().all(|&b| cands[a].0.is_disjoint_from(t, &cands[b].0).unwrap()));
        if disjoint {
            best = best.max(pick.len());
        }
    }
    assert_eq!(rank, best);
    assert_eq!(rank, 3);
    assert_eq!(family.len(), 3);
    assert!(!cands[3].1.is_accepted());
    // enlarging the candidate list never lowers the rank
    for k in 0..cands.len() {
        assert!(
            disjoint_witness_rank(t, &cands[..k]).unwrap().0 <= disjoint_witness_rank(t, &cands[..k + 1]).unwrap().0
        );
    }
    let rep = asdim_lower_bound(t, &cands).unwrap();
    assert!(rep.combined >= 3);
    assert!(rep.certificates.iter().all(|c| !c.applies));
}

fn farey_bfs(max_den: i64) -> (Vec<Slope>, HashMap<Slope, usize>, Vec<Vec<usize>>) {
    let bound = max_den + 1;
    let mut verts = vec![Slope::INFINITY];
    for q in 1..=max_den {
        for p in -bound * q..=bound * q {
            if gcd(p, q) == 1 {
                verts.push(Slope { p, q });
            }
        }
    }
    let index: HashMap<Slope, usize> = verts.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut adj = vec![Vec::new(); verts.len()];
    for (i, a) in verts.iter().enumerate() {
        for (j, b) in verts.iter().enumerate().skip(i + 1) {
            if (a.p * b.q - a.q * b.p).abs() == 1 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    (verts, index, adj)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn farey_distance_matches_bounded_search() {
    let n = 12;
    let (verts, index, adj) = farey_bfs(n);
    let sources: Vec<Slope> = verts.iter().copied().filter(|s| s.q == 0 || (s.p >= -1 && s.p <= 2 * s.q)).collect();
    for a in &sources {
        let mut dist = vec![u64::MAX; verts.len()];
        let s = index[a];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        for b in &sources {
            assert_eq!(farey_distance(*a, *b), dist[index[b]], "{a} {b}");
        }
    }
    let z = Slope::new(0, 1).unwrap();
    assert_eq!(farey_distance(z, z), 0);
    assert_eq!(farey_distance(z, Slope::INFINITY), 1);
}

#[test]
fn farey_chart_reads_handle_slopes() {
    let b = handle_ball(0);
    let t = b.t();
    let chart = FareyChart::new(t, b.delta.clone(), &b.curve("alpha1"), &b.curve("beta1")).unwrap();
    let a = chart.slope(t, &b.curve("alpha1")).unwrap();
    let c = chart.slope(t, &b.curve("beta1")).unwrap();
    assert_eq!(farey_distance(a, c), 1);
    assert!(a.q == 0 || c.q == 0);
    assert!(a.p == 0 || c.p == 0);
}

#[test]
fn distance_fit_degenerate_cases() {
    let b = handle_ball(4);
    let t = b.t();
    let chart = FareyChart::new(t, b.delta.clone(), &b.curve("alpha1"), &b.curve("beta1")).unwrap();
    // a single vertex projects to adjacent slopes
    let f = distance_formula_fit(t, &b.m, std::slice::from_ref(&chart), 2, 10_000, 1).unwrap();
    for r in &f.rows {
        if r.u == r.v {
            assert_eq!((r.model_distance, r.truncated_sum), (0, 0));
        }
    }
    let g = distance_formula_fit(t, &b.m, &[chart], 1_000, 10_000, 1).unwrap();
    assert!(g.rows.iter().all(|r| r.truncated_sum == 0));
    assert!(g.slope.is_none());
}

fn path(n: usize) -> Vec<Vec<(usize, u64)>> {
    let mut adj = vec![Vec::new(); n];
    for i in 0..n.saturating_sub(1) {
        adj[i].push((i + 1, 1));
        adj[i + 1].push((i, 1));
    }
    adj
}

#[test]
fn dimension_at_small_scales() {
    assert_eq!(dimension_at_scale(&path(1), 1), ScaleDimension { dimension: 0, exact: true });
    assert_eq!(dimension_at_scale(&path(3), 2).dimension, 0);
    for n in 4..9 {
        assert_eq!(dimension_at_scale(&path(n), 2), ScaleDimension { dimension: 1, exact: true });
    }
    let star: Vec<Vec<(usize, u64)>> = vec![vec![(1, 1), (2, 1), (3, 1)], vec![(0, 1)], vec![(0, 1)], vec![(0, 1)]];
    assert_eq!(dimension_at_scale(&star, 1), ScaleDimension { dimension: 2, exact: true });
    assert_eq!(dimension_at_scale(&star, 2), ScaleDimension { dimension: 0, exact: true });
    let mut cycle = path(9);
    cycle[0].push((8, 1));
    cycle[8].push((0, 1));
    assert_eq!(dimension_at_scale(&cycle, 2), ScaleDimension { dimension: 1, exact: true });
    assert_eq!(dimension_at_scale(&cycle, 3).dimension, 1);
    assert_eq!(dimension_at_scale(&cycle, 4).dimension, 0);
}

#[test]
fn word_length_dominates_graph_distance() {
    let b = handle_ball(6);
    let f = qi_fit(&b.m);
    assert!(f.domination);
    assert!(f.lambda_at_zero_c >= 1.0);
    let total: usize = f.table.iter().map(|r| r.vertices).sum();
    assert_eq!(total, b.m.vertices.len());
}
