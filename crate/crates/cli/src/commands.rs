//! Command implementations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use arcmodel::analysis::*;
use arcmodel::curve::NormalMultiCurve;
use arcmodel::intersection::intersection_number;
use arcmodel::intersection::subsurface::{subsurface_cut, SubsurfaceSpec};
use arcmodel::mcg::GeneratorSet;
use arcmodel::model::*;
use arcmodel::surface::Triangulation;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cache::{write_atomic, Cache};
use crate::curvefile::CurveFile;
use crate::manifest::{FormatName, Manifest, ReportKind, WitnessDecl, SCHEMA_VERSION};
use crate::{CliError, Command};

pub const GRAPH_FILE: &str = "graph.toml";
pub const ARTIFACT_FILE: &str = "artifact.toml";
pub const REPORTS_FILE: &str = "reports.toml";

/// The exhaustion, base vertex and generators of a manifest.
pub struct Session {
    pub exhaustion: Exhaustion,
    pub level: usize,
    pub delta: SubsurfaceSpec,
    pub mu: Vec<NormalMultiCurve>,
    pub gens: GeneratorSet,
}

impl Session {
    pub fn new(m: &Manifest) -> Result<Self, CliError> {
        let e = Exhaustion::new(&m.exhaustion.genera, m.exhaustion.delta.clone())?;
        let level = m.base.level;
        let l = e.level(level)?;
        let delta = e.delta_at(level)?;
        let cands = m.base.candidates.iter().map(|c| l.curves(c)).collect::<arcmodel::Result<Vec<_>>>()?;
        let mu = choose_base_vertex(&l.triangulation, &delta, &cands)?;
        let mut gens = dehn_lickorish_generators(&e, level, &mu, m.generators.filter.as_deref())?;
        if m.generators.uniform_weights {
            for g in gens.generators.iter_mut().chain(gens.stabilizer_generators.iter_mut()) {
                g.weight = 1;
            }
        }
        Ok(Session { exhaustion: e, level, delta, mu, gens })
    }

    pub fn t(&self) -> &Triangulation {
        &self.exhaustion.level(self.level).expect("level checked").triangulation
    }

    pub fn curves(&self, names: &[String]) -> Result<Vec<NormalMultiCurve>, CliError> {
        Ok(self.exhaustion.level(self.level)?.curves(names)?)
    }

    /// A declared witness; empty boundary and inside lists mean the whole
    /// surface.
    pub fn witness(&self, d: &WitnessDecl) -> Result<SubsurfaceSpec, CliError> {
        let t = self.t();
        if d.boundary.is_empty() && d.inside.is_empty() {
            return Ok(SubsurfaceSpec::whole(t)?);
        }
        Ok(SubsurfaceSpec::containing(t, &self.curves(&d.boundary)?, &self.curves(&d.inside)?)?)
    }
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub schema_version: u32,
    pub key: String,
    pub vertices: usize,
    pub edges: usize,
    pub radius: u64,
    pub stab_depth: usize,
    pub intersection_table: IntersectionTable,
    /// SHA-256 of each written file.
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub key: String,
    pub cache_hit: bool,
    pub graph: ModelGraph,
    pub record: ArtifactRecord,
}

fn graph_name(f: FormatName) -> String {
    format!("graph.{}", ExportFormat::from(f).extension())
}

/// Builds (or fetches from the cache) the graph of a manifest and writes
/// it in the requested formats to the output directory.
pub fn build(
    m: &Manifest,
    cache: &Cache,
    formats: &[FormatName],
    err: &mut dyn Write,
) -> Result<BuildOutcome, CliError> {
    let s = Session::new(m)?;
    let t = s.t();
    let key = m.build_key();
    let (graph, cache_hit) = match cache.get(&key, GRAPH_FILE)? {
        Some(text) => {
            let g = parse_graph(&text)?;
            g.check_on(t)?;
            let _ = writeln!(err, "cache hit {key}");
            (g, true)
        }
        None => {
            let g = build_ball(t, &s.mu, &s.gens, m.build.radius, m.build.stab_depth)?;
            cache.put(&key, GRAPH_FILE, &export_graph(&g, ExportFormat::Text)?)?;
            let _ = writeln!(err, "built {key}: {} vertices, {} edges", g.vertices.len(), g.edges.len());
            (g, false)
        }
    };
    let table = verify_intersection_condition(t, &s.gens, &s.mu, None)?;
    let mut files = BTreeMap::new();
    for &f in formats {
        let name = graph_name(f);
        let text = export_graph(&graph, f.into())?;
        write_atomic(&m.output.dir.join(&name), &text)?;
        files.insert(name, sha256_hex(&text));
    }
    let record = ArtifactRecord {
        schema_version: SCHEMA_VERSION,
        key: key.clone(),
        vertices: graph.vertices.len(),
        edges: graph.edges.len(),
        radius: m.build.radius,
        stab_depth: m.build.stab_depth,
        intersection_table: table,
        files,
    };
    write_atomic(&m.output.dir.join(ARTIFACT_FILE), &toml::to_string(&record).expect("record serializes"))?;
    Ok(BuildOutcome { key, cache_hit, graph, record })
}

/// The graph artifact of a manifest, from the cache or the output
/// directory.
pub fn load_graph(m: &Manifest, cache: &Cache) -> Result<ModelGraph, CliError> {
    let key = m.build_key();
    if let Some(text) = cache.get(&key, GRAPH_FILE)? {
        return Ok(parse_graph(&text)?);
    }
    let record = m.output.dir.join(ARTIFACT_FILE);
    let graph = m.output.dir.join(GRAPH_FILE);
    if let (Ok(r), Ok(g)) = (std::fs::read_to_string(&record), std::fs::read_to_string(&graph)) {
        let same_key =
            r.parse::<toml::Table>().ok().and_then(|t| t.get("key").and_then(|k| k.as_str().map(String::from)));
        if same_key.as_deref() == Some(key.as_str()) {
            return Ok(parse_graph(&g)?);
        }
    }
    Err(CliError::MissingArtifact(key))
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessCocompactness {
    pub witness: String,
    pub projected_vertices: usize,
    pub projected_edges: usize,
    pub max_self_intersection: u64,
    pub max_edge_intersection: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSection {
    pub witness: String,
    pub lipschitz: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub threshold: u64,
    pub charts: Vec<String>,
    pub pairs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    pub intercept: f64,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_stderr: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScaleRow {
    pub scale: u64,
    pub dimension: usize,
    pub exact: bool,
}

/// Everything an analysis plan produced. Per-analysis failures are listed
/// in `errors`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub schema_version: u32,
    pub graph_key: String,
    pub seed: u64,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asdim: Option<AsdimReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cocompactness: Vec<WitnessCocompactness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<WitnessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qi_fit: Option<QiFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dimension: Vec<ScaleRow>,
}

#[derive(Debug, Clone)]
pub struct AnalyzeOutcome {
    pub bundle: ReportBundle,
    /// Written files with their SHA-256.
    pub files: BTreeMap<String, String>,
}

fn csv_text<R: Serialize>(rows: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

#[derive(Serialize)]
struct WitnessCsvRow<'a> {
    name: &'a str,
    components: usize,
    genus: u32,
    euler: i64,
    status: &'static str,
    refuting_vertex: Option<usize>,
    radius: u64,
    stab_depth: usize,
    vertices_checked: usize,
}

fn witness_row(r: &WitnessReport) -> WitnessCsvRow<'_> {
    let (status, refuting_vertex) = match &r.status {
        WitnessStatus::CertifiedByDeltaContainment => ("certified-by-delta-containment", None),
        WitnessStatus::NoCounterexampleInBall => ("no-counterexample-in-ball", None),
        WitnessStatus::Refuted { vertex, .. } => ("refuted", Some(*vertex)),
    };
    WitnessCsvRow {
        name: &r.name,
        components: r.topology.len(),
        genus: r.topology.iter().map(|c| c.genus).sum(),
        euler: r.topology.iter().map(|c| c.euler).sum(),
        status,
        refuting_vertex,
        radius: r.radius,
        stab_depth: r.depth,
        vertices_checked: r.vertices_checked,
    }
}

fn pushforward_dot(name: &str, p: &Pushforward) -> String {
    let mut counts = vec![0usize; p.vertices.len()];
    for &x in &p.projection {
        counts[x] += 1;
    }
    let mut s = format!("graph \"{name}\" {{\n");
    for (i, d) in p.digests.iter().enumerate() {
        let _ = writeln!(s, "  v{i} [label=\"{d}\", preimages={}];", counts[i]);
    }
    for &(a, b, l) in &p.edges {
        let _ = writeln!(s, "  v{a} -- v{b} [length={l}];");
    }
    s.push_str("}\n");
    s
}

/// Runs the analysis plan of a manifest on its graph artifact.
pub fn analyze(m: &Manifest, cache: &Cache, seed: u64, err: &mut dyn Write) -> Result<AnalyzeOutcome, CliError> {
    let graph = load_graph(m, cache)?;
    let s = Session::new(m)?;
    let t = s.t();
    graph.check_on(t)?;
    let plan = &m.analysis;
    let wants = |k: ReportKind| plan.reports.contains(&k);
    let mut bundle = ReportBundle {
        schema_version: SCHEMA_VERSION,
        graph_key: m.build_key(),
        seed,
        errors: Vec::new(),
        witnesses: Vec::new(),
        asdim: None,
        cocompactness: Vec::new(),
        sections: Vec::new(),
        qi_fit: None,
        distance_fit: None,
        dimension: Vec::new(),
    };
    let mut files: BTreeMap<String, String> = BTreeMap::new();
    let mut emit = |name: &str, text: String| -> Result<(), CliError> {
        write_atomic(&m.output.dir.join(name), &text)?;
        files.insert(name.to_string(), sha256_hex(&text));
        Ok(())
    };

    let needs_witnesses = [ReportKind::Witnesses, ReportKind::Asdim, ReportKind::Cocompactness, ReportKind::Section]
        .iter()
        .any(|k| wants(*k));
    let mut specs: BTreeMap<String, SubsurfaceSpec> = BTreeMap::new();
    let mut candidates: Vec<(SubsurfaceSpec, WitnessReport)> = Vec::new();
    for d in &plan.witnesses {
        let w = match s.witness(d) {
            Ok(w) => w,
            Err(e) => {
                bundle.errors.push(format!("witness {}: {e}", d.name));
                continue;
            }
        };
        specs.insert(d.name.clone(), w.clone());
        if !needs_witnesses {
            continue;
        }
        match is_witness(t, &d.name, &w, &s.delta, &graph) {
            Ok(r) => candidates.push((w, r)),
            Err(e) => bundle.errors.push(format!("witness {}: {e}", d.name)),
        }
    }
    if wants(ReportKind::Witnesses) {
        bundle.witnesses = candidates.iter().map(|c| c.1.clone()).collect();
        let rows: Vec<WitnessCsvRow> = candidates.iter().map(|c| witness_row(&c.1)).collect();
        emit("witnesses.csv", csv_text(&rows))?;
    }
    if wants(ReportKind::Asdim) {
        match asdim_lower_bound(t, &candidates) {
            Ok(r) => bundle.asdim = Some(r),
            Err(e) => bundle.errors.push(format!("asdim: {e}")),
        }
    }
    if wants(ReportKind::Cocompactness) || wants(ReportKind::Section) {
        for (w, r) in candidates.iter().filter(|c| c.1.is_accepted()) {
            let p = match pushforward_model(t, &graph, w, r) {
                Ok(p) => p,
                Err(e) => {
                    bundle.errors.push(format!("push-forward {}: {e}", r.name));
                    continue;
                }
            };
            emit(&format!("pushforward-{}.dot", r.name), pushforward_dot(&r.name, &p))?;
            if wants(ReportKind::Cocompactness) {
                match cocompactness_report(t, &p) {
                    Ok(c) => bundle.cocompactness.push(WitnessCocompactness {
                        witness: r.name.clone(),
                        projected_vertices: p.vertices.len(),
                        projected_edges: p.edges.len(),
                        max_self_intersection: c.max_self_intersection,
                        max_edge_intersection: c.max_edge_intersection,
                    }),
                    Err(e) => bundle.errors.push(format!("cocompactness {}: {e}", r.name)),
                }
            }
            if wants(ReportKind::Section) {
                let sr = section_report(&p, &graph);
                bundle.sections.push(WitnessSection { witness: r.name.clone(), lipschitz: sr.lipschitz });
            }
        }
    }
    if wants(ReportKind::QiFit) {
        let q = qi_fit(&graph);
        emit("qi.csv", csv_text(&q.table))?;
        bundle.qi_fit = Some(q);
    }
    if wants(ReportKind::DistanceFit) {
        let mut charts = Vec::new();
        let mut names = Vec::new();
        for c in &plan.charts {
            let built = (|| -> Result<FareyChart, CliError> {
                let w = specs.get(&c.witness).ok_or_else(|| CliError::UnknownWitness(c.witness.clone()))?;
                let ab = s.curves(&[c.alpha.clone(), c.beta.clone()])?;
                Ok(FareyChart::new(t, w.clone(), &ab[0], &ab[1])?)
            })();
            match built {
                Ok(ch) => {
                    charts.push(ch);
                    names.push(c.witness.clone());
                }
                Err(e) => bundle.errors.push(format!("chart {}: {e}", c.witness)),
            }
        }
        let fit = &plan.distance_fit;
        match distance_formula_fit(t, &graph, &charts, fit.threshold, fit.samples, seed) {
            Ok(f) => {
                emit("distance.csv", csv_text(&f.rows))?;
                bundle.distance_fit = Some(FitSummary {
                    threshold: f.threshold,
                    charts: names,
                    pairs: f.rows.len(),
                    slope: f.slope,
                    intercept: f.intercept,
                    max_residual: f.max_residual,
                    slope_stderr: f.slope_stderr,
                });
            }
            Err(e) => bundle.errors.push(format!("distance fit: {e}")),
        }
    }
    if wants(ReportKind::Dimension) {
        let adj = graph.adjacency();
        for &r in &plan.scales {
            let d = dimension_at_scale(&adj, r);
            bundle.dimension.push(ScaleRow { scale: r, dimension: d.dimension, exact: d.exact });
        }
    }
    for e in &bundle.errors {
        let _ = writeln!(err, "analysis error: {e}");
    }
    emit(REPORTS_FILE, toml::to_string(&bundle).expect("bundle serializes"))?;
    Ok(AnalyzeOutcome { bundle, files })
}

/// Geometric intersection number of two curve files.
pub fn intersect(a: &Path, b: &Path) -> Result<u64, CliError> {
    let (fa, fb) = (CurveFile::load(a)?, CurveFile::load(b)?);
    if fa.surface != fb.surface {
        return Err(CliError::SurfaceMismatch);
    }
    let t = fa.triangulation()?;
    Ok(intersection_number(&t, &fa.curve(&t)?, &fb.curve(&t)?)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionOutput {
    pub witness: String,
    pub digest: String,
    pub curves: Vec<Vec<u32>>,
    /// Surrounding curves of each arc.
    pub arcs: Vec<Vec<Vec<u32>>>,
}

/// Projection of curve files into a witness declared by a manifest.
pub fn project(m: &Manifest, witness: &str, curves: &[PathBuf]) -> Result<ProjectionOutput, CliError> {
    let s = Session::new(m)?;
    let t = s.t();
    let d = m
        .analysis
        .witnesses
        .iter()
        .find(|w| w.name == witness)
        .ok_or_else(|| CliError::UnknownWitness(witness.into()))?;
    let w = s.witness(d)?;
    let mut us = Vec::new();
    for p in curves {
        us.push(CurveFile::load(p)?.curve(t)?);
    }
    let a = subsurface_cut(t, &us, &w)?;
    Ok(ProjectionOutput { witness: witness.to_string(), digest: a.digest(), curves: a.curves, arcs: a.arcs })
}

fn parse_format(s: &str) -> Result<FormatName, CliError> {
    Ok(match s.parse::<ExportFormat>()? {
        ExportFormat::Dot => FormatName::Dot,
        ExportFormat::EdgeCsv => FormatName::Csv,
        ExportFormat::Text => FormatName::Text,
    })
}

pub fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io { path: "<stdout>".into(), message: e.to_string() };
    match cmd {
        Command::Build { common, format } => {
            let m = common.manifest()?;
            let formats = match format {
                Some(f) => vec![parse_format(&f)?],
                None => m.output.formats.clone(),
            };
            let b = build(&m, &common.cache(), &formats, err)?;
            writeln!(out, "{}", b.key).map_err(io)?;
        }
        Command::Analyze { common, seed } => {
            let m = common.manifest()?;
            let a = analyze(&m, &common.cache(), seed, err)?;
            for (name, hash) in &a.files {
                writeln!(out, "{hash}  {name}").map_err(io)?;
            }
        }
        Command::Intersect { a, b } => {
            writeln!(out, "{}", intersect(&a, &b)?).map_err(io)?;
        }
        Command::Project { common, witness, curves } => {
            let m = common.manifest()?;
            let p = project(&m, &witness, &curves)?;
            out.write_all(toml::to_string(&p).expect("projection serializes").as_bytes()).map_err(io)?;
        }
        Command::Export { common, format } => {
            let m = common.manifest()?;
            let g = load_graph(&m, &common.cache())?;
            let f: FormatName = parse_format(&format)?;
            out.write_all(export_graph(&g, f.into())?.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}
