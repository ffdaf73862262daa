//! Regenerates `golden/` from brute-force oracles.
//!
//! `cargo run --release -p arcmodel-cli --example golden`
//!
//! * Word orbits: every generator word of weighted length at most R applied
//!   to the base vertex, deduplicated by canonical form.
//! * Edges: for every vertex, its recorded witness word is checked to carry
//!   the base vertex to it, then each neighbour `f h z^e mu` is recomputed
//!   by composing whole mapping classes.
//! * Witness tables: every vertex is cut along every witness directly.
//! * QI tables: breadth-first distances and recorded word lengths.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use arcmodel::curve::NormalMultiCurve;
use arcmodel::intersection::subsurface::subsurface_cut;
use arcmodel::mcg::{apply, MappingClass};
use arcmodel::model::{build_ball, canonical_collection, orbit_by_words, ModelGraph};
use arcmodel::Error;
use arcmodel_cli::commands::Session;
use arcmodel_cli::Manifest;

fn stabilizer_words(s: &Session, depth: usize) -> Vec<MappingClass> {
    let t = s.t();
    let n = s.gens.stabilizer_generators.len();
    let mut words: Vec<Vec<(usize, i32)>> = vec![Vec::new()];
    let mut layer = words.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..n {
                for e in [1, -1] {
                    if w.last() == Some(&(i, -e)) {
                        continue;
                    }
                    let mut x = w.clone();
                    x.push((i, e));
                    next.push(x);
                }
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    words
        .iter()
        .map(|w| {
            let mut f = MappingClass::identity(t);
            for &(i, e) in w {
                f = f.compose(&s.gens.stabilizer_generators[i].mapping_class(t, e)).unwrap();
            }
            f
        })
        .collect()
}

fn image(t: &arcmodel::surface::Triangulation, f: &MappingClass, mu: &[NormalMultiCurve]) -> Vec<Vec<u32>> {
    let img: Vec<NormalMultiCurve> = mu.iter().map(|u| apply(t, f, u).unwrap()).collect();
    canonical_collection(&img)
}

fn edge_count(s: &Session, m: &ModelGraph) -> usize {
    let t = s.t();
    let index: BTreeMap<&Vec<Vec<u32>>, usize> =
        m.vertices.iter().enumerate().map(|(i, v)| (&v.collection, i)).collect();
    let hs = stabilizer_words(s, m.depth);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (v, vert) in m.vertices.iter().enumerate() {
        let f = m.mapping_class(t, &s.gens, v).unwrap();
        assert_eq!(image(t, &f, &s.mu), vert.collection, "witness word of vertex {v}");
        for h in &hs {
            let fh = f.compose(h).unwrap();
            for g in &s.gens.generators {
                if g.weight > m.radius {
                    continue;
                }
                for e in [1, -1] {
                    let k = image(t, &fh.compose(&g.mapping_class(t, e)).unwrap(), &s.mu);
                    if let Some(&w) = index.get(&k) {
                        if w != v {
                            edges.insert((v.min(w), v.max(w)));
                        }
                    }
                }
            }
        }
    }
    edges.len()
}

fn witness_csv(s: &Session, manifest: &Manifest, m: &ModelGraph) -> String {
    let t = s.t();
    let mut out =
        String::from("name,components,genus,euler,status,refuting_vertex,radius,stab_depth,vertices_checked\n");
    let cols: Vec<Vec<NormalMultiCurve>> = (0..m.vertices.len()).map(|v| m.collection(t, v).unwrap()).collect();
    for d in &manifest.analysis.witnesses {
        let w = s.witness(d).unwrap();
        let topo = w.topology();
        let genus: u32 = topo.iter().map(|c| c.genus).sum();
        let euler: i64 = topo.iter().map(|c| c.euler).sum();
        let miss = cols.iter().position(|c| match subsurface_cut(t, c, &w) {
            Ok(a) => a.is_empty(),
            Err(Error::NotInProjectionDomain) => true,
            Err(e) => panic!("{e}"),
        });
        let (status, refuting, checked) = if w.contains(t, &s.delta).unwrap() {
            assert!(miss.is_none(), "{} contains the base subsurface but misses a vertex", d.name);
            ("certified-by-delta-containment", String::new(), 0)
        } else if let Some(v) = miss {
            ("refuted", v.to_string(), v + 1)
        } else {
            ("no-counterexample-in-ball", String::new(), cols.len())
        };
        let _ = writeln!(
            out,
            "{},{},{genus},{euler},{status},{refuting},{},{},{checked}",
            d.name,
            topo.len(),
            m.radius,
            m.depth
        );
    }
    out
}

fn qi_csv(m: &ModelGraph) -> String {
    // unit-free breadth-first search cannot be used: edges are weighted
    let n = m.vertices.len();
    let mut dist = vec![u64::MAX; n];
    dist[0] = 0;
    let mut done = vec![false; n];
    let adj = m.adjacency();
    for _ in 0..n {
        let u = (0..n).filter(|&u| !done[u]).min_by_key(|&u| dist[u]).unwrap();
        done[u] = true;
        for &(v, l) in &adj[u] {
            dist[v] = dist[v].min(dist[u] + l);
        }
    }
    let mut rows: BTreeMap<u64, (usize, u64, u64)> = BTreeMap::new();
    for v in 0..n {
        let w = m.word_length(v);
        let r = rows.entry(dist[v]).or_default();
        r.0 += 1;
        r.1 = r.1.max(w);
        r.2 = r.2.max(w - dist[v]);
    }
    let mut out = String::from("graph_distance,vertices,max_word_length,max_deviation\n");
    for (d, (k, w, dev)) in rows {
        let _ = writeln!(out, "{d},{k},{w},{dev}");
    }
    out
}

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let golden = root.join("golden");
    std::fs::create_dir_all(&golden).unwrap();
    let mut counts = String::new();
    for name in ["genus2", "genus2-small", "rank-genus2", "rank-genus3", "rank-genus4"] {
        let manifest = Manifest::load(&root.join(format!("manifests/{name}.toml"))).unwrap();
        let s = Session::new(&manifest).unwrap();
        let t = s.t();
        let (r, l) = (manifest.build.radius, manifest.build.stab_depth);
        let words = orbit_by_words(t, &s.mu, &s.gens, r).unwrap();
        let m = build_ball(t, &s.mu, &s.gens, r, l).unwrap();
        let edges = edge_count(&s, &m);
        eprintln!("{name}: {} word-orbit vertices, {edges} edges", words.len());
        let _ = writeln!(
            counts,
            "[{name}]\nradius = {r}\nstab_depth = {l}\nword_orbit_vertices = {}\nedges = {edges}\n",
            words.len()
        );
        std::fs::write(golden.join(format!("{name}-witnesses.csv")), witness_csv(&s, &manifest, &m)).unwrap();
        if name.starts_with("genus2") {
            std::fs::write(golden.join(format!("{name}-qi.csv")), qi_csv(&m)).unwrap();
        }
    }
    std::fs::write(golden.join("counts.toml"), counts).unwrap();
}
